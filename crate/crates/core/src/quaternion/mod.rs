//! Quaternion symbols `(a, b)` and `[a, b)`, their realizations, and
//! common-slot chains.

mod tensor;

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError};
use crate::config::Bounds;
use crate::field::{Elem, Field, FieldDescriptor, FieldError};
use crate::forms::{is_isometric_with, is_isotropic_with, FormError, Isotropy, QuadraticForm};
use crate::linalg::{self, Vector};
use crate::search::{shells, Search};

pub use tensor::{common_slot_chain_tensor, common_slot_chain_tensor_with, Factor, IsoEvidence, SlotChain, SlotWitness, TensorPresentation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuatError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("symbol slot {0} must be nonzero")]
    ZeroSlot(&'static str),
    #[error("symbols live over different fields")]
    FieldMismatch,
    #[error("the symbols are not isomorphic")]
    NotIsomorphic,
    #[error("isomorphism could not be decided within the bounds")]
    Undecidable,
    #[error("no common slot found within the search budget")]
    BudgetExhausted,
    #[error("presentation check failed: {0}")]
    Presentation(String),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("malformed symbol JSON: {0}")]
    Json(String),
}

/// `(a, b)`: `x² = a`, `y² = b`, `yx = -xy`; in characteristic 2 `[a, b)`:
/// `x² + x = a`, `y² = b`, `yxy⁻¹ = x + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternionSymbol {
    field: Field,
    a: Elem,
    b: Elem,
}

/// A realized symbol with its marked generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub algebra: Algebra,
    pub x: Vector,
    pub y: Vector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    First,
    Second,
}

impl Slot {
    pub fn name(self) -> &'static str {
        match self {
            Slot::First => "first",
            Slot::Second => "second",
        }
    }
}

impl QuaternionSymbol {
    pub fn new(field: &Field, a: Elem, b: Elem) -> Result<Self, QuatError> {
        if field.is_zero(&b) {
            return Err(QuatError::ZeroSlot("b"));
        }
        if !field.is_char2() && field.is_zero(&a) {
            return Err(QuatError::ZeroSlot("a"));
        }
        Ok(QuaternionSymbol { field: field.clone(), a, b })
    }

    pub fn parse(field: &Field, a: &str, b: &str) -> Result<Self, QuatError> {
        Self::new(field, field.parse(a)?, field.parse(b)?)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn a(&self) -> &Elem {
        &self.a
    }

    pub fn b(&self) -> &Elem {
        &self.b
    }

    pub fn slot(&self, s: Slot) -> &Elem {
        match s {
            Slot::First => &self.a,
            Slot::Second => &self.b,
        }
    }

    pub fn char2(&self) -> bool {
        self.field.is_char2()
    }

    pub fn format(&self) -> String {
        let f = &self.field;
        if self.char2() {
            format!("[{},{})", f.format(&self.a), f.format(&self.b))
        } else {
            format!("({},{})", f.format(&self.a), f.format(&self.b))
        }
    }

    /// Table on the basis `1, x, y, xy`. Writing elements as `u + v y` with
    /// `u, v ∈ F[x]`: `(u₁ + v₁y)(u₂ + v₂y) = u₁u₂ + b v₁σ(v₂) + (u₁v₂ + v₁σ(u₂)) y`.
    pub fn realize(&self) -> Realization {
        let f = &self.field;
        let char2 = self.char2();
        // F[x] elements as (c0, c1)
        let mul_k = |p: &(Elem, Elem), q: &(Elem, Elem)| -> (Elem, Elem) {
            let c0 = f.add(&f.mul(&p.0, &q.0), &f.mul(&self.a, &f.mul(&p.1, &q.1)));
            let mut c1 = f.add(&f.mul(&p.0, &q.1), &f.mul(&p.1, &q.0));
            if char2 {
                // x² = x + a
                c1 = f.add(&c1, &f.mul(&p.1, &q.1));
            }
            (c0, c1)
        };
        let sigma = |p: &(Elem, Elem)| -> (Elem, Elem) {
            if char2 {
                (f.add(&p.0, &p.1), p.1.clone())
            } else {
                (p.0.clone(), f.neg(&p.1))
            }
        };
        let add_k = |p: (Elem, Elem), q: (Elem, Elem)| (f.add(&p.0, &q.0), f.add(&p.1, &q.1));
        let split = |v: &[Elem]| ((v[0].clone(), v[1].clone()), (v[2].clone(), v[3].clone()));
        let basis: Vec<Vector> = (0..4).map(|i| linalg::unit_vector(f, 4, i)).collect();
        let mut table = vec![vec![Vec::new(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let (u1, v1) = split(&basis[i]);
                let (u2, v2) = split(&basis[j]);
                let bv = mul_k(&v1, &sigma(&v2));
                let first = add_k(mul_k(&u1, &u2), (f.mul(&self.b, &bv.0), f.mul(&self.b, &bv.1)));
                let second = add_k(mul_k(&u1, &v2), mul_k(&v1, &sigma(&u2)));
                table[i][j] = vec![first.0, first.1, second.0, second.1];
            }
        }
        let labels = ["1", "x", "y", "xy"].map(String::from).to_vec();
        let algebra = Algebra::new(f, labels, table, basis[0].clone()).expect("quaternion tables are associative");
        let r = Realization { algebra, x: basis[1].clone(), y: basis[2].clone() };
        debug_assert!(self.check_relations(&r.algebra, &r.x, &r.y));
        r
    }

    /// Whether `x, y` satisfy the defining relations in `alg`.
    pub fn check_relations(&self, alg: &Algebra, x: &[Elem], y: &[Elem]) -> bool {
        let f = &self.field;
        let x2 = if self.char2() { alg.add(&alg.square(x), x) } else { alg.square(x) };
        if x2 != alg.scalar(&self.a) || alg.square(y) != alg.scalar(&self.b) {
            return false;
        }
        let tw = alg.anticommutator(x, y);
        let ok = if self.char2() { tw == y } else { alg.is_zero(&tw) };
        ok && !f.is_zero(&self.b)
    }

    /// `⟨1, -a, -b, ab⟩`, or `[1, a] ⊥ [b, a/b]` in characteristic 2. The
    /// second pair is `b·[1, a]` after rescaling its second coordinate by `b`.
    pub fn norm_form(&self) -> QuadraticForm {
        let f = &self.field;
        if self.char2() {
            let ab = f.div(&self.a, &self.b).unwrap();
            QuadraticForm::pairs(f, vec![(f.one(), self.a.clone()), (self.b.clone(), ab)]).expect("b is nonzero")
        } else {
            let d = vec![f.one(), f.neg(&self.a), f.neg(&self.b), f.mul(&self.a, &self.b)];
            QuadraticForm::diagonal(f, d).expect("a, b are nonzero")
        }
    }

    /// Reduced norm of `c₀ + c₁x + c₂y + c₃xy`.
    pub fn reduced_norm(&self, c: &[Elem]) -> Elem {
        let f = &self.field;
        let mut v = c.to_vec();
        if self.char2() {
            v[3] = f.mul(&v[3], &self.b);
        }
        self.norm_form().eval(&v)
    }

    /// Split iff the norm form is isotropic.
    pub fn is_split_with(&self, bounds: &Bounds) -> Option<bool> {
        match is_isotropic_with(&self.norm_form(), bounds).outcome {
            Isotropy::Isotropic(_) => Some(true),
            Isotropy::Anisotropic => Some(false),
            Isotropy::Unknown => None,
        }
    }

    pub fn is_split(&self) -> Option<bool> {
        self.is_split_with(&Bounds::default())
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        json!({
            "field": serde_json::to_value(f.descriptor()).unwrap(),
            "char2": self.char2(),
            "a": f.format(&self.a),
            "b": f.format(&self.b),
        })
    }

    /// Reads `{"char2":…,"a":"…","b":"…"}`; the field defaults as for forms.
    pub fn from_json(v: &Value, default: Option<&Field>) -> Result<Self, QuatError> {
        let char2 = v.get("char2").and_then(Value::as_bool).unwrap_or(false);
        let field = match v.get("field") {
            Some(fd) => Field::new(serde_json::from_value::<FieldDescriptor>(fd.clone()).map_err(|e| QuatError::Json(e.to_string()))?)?,
            None => match default {
                Some(f) => f.clone(),
                None if char2 => Field::gf(2, 1),
                None => Field::rationals(),
            },
        };
        if char2 != field.is_char2() {
            return Err(QuatError::Json("\"char2\" disagrees with the field characteristic".into()));
        }
        let get = |k: &str| -> Result<Elem, QuatError> {
            match v.get(k) {
                Some(Value::String(s)) => Ok(field.parse(s)?),
                Some(Value::Number(n)) => Ok(field.parse(&n.to_string())?),
                _ => Err(QuatError::Json(format!("missing \"{k}\""))),
            }
        };
        Self::new(&field, get("a")?, get("b")?)
    }
}

/// Isomorphism of quaternion algebras through isometry of norm forms;
/// `None` when isometry is undecidable within the bounds.
pub fn are_isomorphic(s: &QuaternionSymbol, t: &QuaternionSymbol) -> Result<Option<bool>, QuatError> {
    are_isomorphic_with(s, t, &Bounds::default())
}

pub fn are_isomorphic_with(s: &QuaternionSymbol, t: &QuaternionSymbol, bounds: &Bounds) -> Result<Option<bool>, QuatError> {
    if s.field != t.field {
        return Err(QuatError::FieldMismatch);
    }
    if s == t {
        return Ok(Some(true));
    }
    match is_isometric_with(&s.norm_form(), &t.norm_form(), bounds) {
        Ok(b) => Ok(Some(b)),
        Err(FormError::Undecidable(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// `s = (a, b) ≅ (a, β) ≅ (a', β) ≅ (a', b') = s'`, with consecutive
/// duplicates removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolChain {
    pub beta: Elem,
    pub nodes: Vec<QuaternionSymbol>,
    /// Slot shared by `nodes[i]` and `nodes[i + 1]`.
    pub shared: Vec<Slot>,
}

impl SymbolChain {
    /// Adjacent nodes share the recorded slot literally.
    pub fn slots_agree(&self) -> bool {
        self.shared.len() + 1 == self.nodes.len()
            && self.shared.iter().enumerate().all(|(i, s)| self.nodes[i].slot(*s) == self.nodes[i + 1].slot(*s))
    }

    pub fn to_json(&self) -> Value {
        let f = self.nodes[0].field();
        json!({
            "beta": f.format(&self.beta),
            "nodes": self.nodes.iter().map(QuaternionSymbol::to_json).collect::<Vec<_>>(),
            "shared": self.shared.iter().map(|s| s.name()).collect::<Vec<_>>(),
        })
    }
}

pub fn common_slot_chain(s: &QuaternionSymbol, t: &QuaternionSymbol) -> Result<SymbolChain, QuatError> {
    common_slot_chain_with(s, t, &Bounds::default())
}

/// Candidates for `β` are tried in the order `b'`, `b`, then by ascending
/// height/degree; the first one making all three isomorphisms hold wins.
pub fn common_slot_chain_with(s: &QuaternionSymbol, t: &QuaternionSymbol, bounds: &Bounds) -> Result<SymbolChain, QuatError> {
    match are_isomorphic_with(s, t, bounds)? {
        Some(true) => {}
        Some(false) => return Err(QuatError::NotIsomorphic),
        None => return Err(QuatError::Undecidable),
    }
    let f = &s.field;
    let pool = crate::algebra::coefficient_pool(f, bounds);
    let mut cands = vec![t.b.clone(), s.b.clone()];
    cands.extend(pool.into_iter().filter(|c| !f.is_zero(c)));
    let found = shells(1, cands.len(), bounds.max_nodes, |i| {
        let beta = &cands[i[0]];
        let s1 = QuaternionSymbol::new(f, s.a.clone(), beta.clone()).ok()?;
        let s2 = QuaternionSymbol::new(f, t.a.clone(), beta.clone()).ok()?;
        let ok = |p: &QuaternionSymbol, q: &QuaternionSymbol| matches!(are_isomorphic_with(p, q, bounds), Ok(Some(true)));
        (ok(s, &s1) && ok(&s1, &s2) && ok(&s2, t)).then(|| (beta.clone(), s1, s2))
    });
    let (beta, s1, s2) = match found {
        Search::Found(x) => x,
        _ => return Err(QuatError::BudgetExhausted),
    };
    let mut nodes = vec![s.clone()];
    let mut shared = Vec::new();
    for (node, slot) in [(s1, Slot::First), (s2, Slot::Second), (t.clone(), Slot::First)] {
        if *nodes.last().unwrap() != node {
            nodes.push(node);
            shared.push(slot);
        }
    }
    // collapsing may leave a step that shares the other slot
    for i in 0..shared.len() {
        if nodes[i].slot(shared[i]) != nodes[i + 1].slot(shared[i]) {
            shared[i] = if shared[i] == Slot::First { Slot::Second } else { Slot::First };
        }
    }
    let chain = SymbolChain { beta, nodes, shared };
    debug_assert!(chain.slots_agree());
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{find_isomorphism, is_division, IsoResult};

    #[test]
    fn hamilton_realization() {
        let q = Field::rationals();
        let s = QuaternionSymbol::parse(&q, "-1", "-1").unwrap();
        let r = s.realize();
        let xy = r.algebra.mul(&r.x, &r.y);
        assert_eq!(r.algebra.square(&xy), r.algebra.scalar(&q.from_i64(-1)));
        assert_eq!(is_division(&r.algebra).flag, Some(true));
    }

    #[test]
    fn char2_split_realization() {
        let f = Field::gf(2, 1);
        let s = QuaternionSymbol::parse(&f, "0", "1").unwrap();
        let r = s.realize();
        assert_eq!(r.algebra.square(&r.x), r.x);
        assert_eq!(is_division(&r.algebra).flag, Some(false));
        let s = QuaternionSymbol::parse(&f, "1", "1").unwrap();
        let r = s.realize();
        assert!(s.check_relations(&r.algebra, &r.x, &r.y));
        assert_eq!(r.algebra.minimal_polynomial(&r.x), vec![f.one(), f.one(), f.one()]);
    }

    #[test]
    fn reduced_norm_matches_multiplication() {
        for f in [Field::gf(2, 2), Field::gf(5, 1), Field::rationals()] {
            let s = if f.is_char2() {
                QuaternionSymbol::new(&f, f.constant(2), f.constant(3)).unwrap()
            } else {
                QuaternionSymbol::new(&f, f.from_i64(2), f.from_i64(3)).unwrap()
            };
            let r = s.realize();
            let alg = &r.algebra;
            let c: Vector = [1, 2, 3, 1].iter().map(|&k| f.from_i64(k)).collect();
            // q * conj(q) = nrd(q)
            let trd = if f.is_char2() { c[1].clone() } else { f.from_i64(2) };
            let conj = alg.sub(&alg.scalar(&trd), &c);
            assert_eq!(alg.mul(&c, &conj), alg.scalar(&s.reduced_norm(&c)), "{}", f.descriptor());
        }
    }

    #[test]
    fn isomorphism_examples() {
        let q = Field::rationals();
        let s = |a, b| QuaternionSymbol::parse(&q, a, b).unwrap();
        assert_eq!(are_isomorphic(&s("-1", "-1"), &s("-2", "-2")).unwrap(), Some(true));
        assert_eq!(are_isomorphic(&s("-1", "-1"), &s("1", "1")).unwrap(), Some(false));
        // swapping slots over F_5, checked by an explicit isomorphism
        let f = Field::gf(5, 1);
        let p = QuaternionSymbol::parse(&f, "2", "3").unwrap().realize();
        let r = QuaternionSymbol::parse(&f, "3", "2").unwrap().realize();
        assert!(matches!(find_isomorphism(&p.algebra, &r.algebra), IsoResult::Found(_)));
    }

    #[test]
    fn slot_chains() {
        let q = Field::rationals();
        let s = |a, b| QuaternionSymbol::parse(&q, a, b).unwrap();
        let c = common_slot_chain(&s("-1", "-1"), &s("-2", "-2")).unwrap();
        assert_eq!(c.beta, q.from_i64(-2));
        assert_eq!(c.nodes.len(), 3);
        assert!(c.slots_agree());
        let c = common_slot_chain(&s("3", "5"), &s("3", "5")).unwrap();
        assert_eq!(c.nodes.len(), 1);
        let c = common_slot_chain(&s("2", "1"), &s("3", "1")).unwrap();
        assert_eq!(c.nodes.len(), 2);
        assert_eq!(c.shared, vec![Slot::Second]);
        assert!(matches!(common_slot_chain(&s("-1", "-1"), &s("1", "1")), Err(QuatError::NotIsomorphic)));
    }

    #[test]
    fn char2_slot_chain() {
        let f = Field::gf(2, 2);
        let w = f.constant(2);
        let s1 = QuaternionSymbol::new(&f, f.one(), f.one()).unwrap();
        let s2 = QuaternionSymbol::new(&f, w.clone(), w).unwrap();
        let c = common_slot_chain(&s1, &s2).unwrap();
        assert!(c.slots_agree());
        assert!(c.nodes.len() <= 4);
    }
}

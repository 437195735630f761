//! Tensor products of quaternion algebras presented inside a fixed
//! algebra, and slot chains between such presentations.

use serde_json::{json, Value};

use super::{QuatError, QuaternionSymbol, Slot};
use crate::algebra::{self, find_isomorphism_with, tensor_product, verify_isomorphism, Algebra, IsoResult};
use crate::config::Bounds;
use crate::elements;
use crate::field::Elem;
use crate::linalg::{self, Matrix, Vector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub symbol: QuaternionSymbol,
    pub x: Vector,
    pub y: Vector,
}

/// `A = Q₁ ⊗ … ⊗ Q_n` with explicit generators of every factor inside `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorPresentation {
    algebra: Algebra,
    factors: Vec<Factor>,
}

/// Index of the monomial `∏ m_k` in the canonical tensor basis, where
/// `m_k ∈ {1, x, y, xy}` of factor `k` and factor 0 is most significant.
fn digits(mut idx: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for k in (0..n).rev() {
        d[k] = idx % 4;
        idx /= 4;
    }
    d
}

pub(crate) fn kron_matrix(f: &crate::field::Field, a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca, rb, cb) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut out = vec![vec![f.zero(); ca * cb]; ra * rb];
    for i1 in 0..ra {
        for j1 in 0..ca {
            if f.is_zero(&a[i1][j1]) {
                continue;
            }
            for i2 in 0..rb {
                for j2 in 0..cb {
                    out[i1 * rb + i2][j1 * cb + j2] = f.mul(&a[i1][j1], &b[i2][j2]);
                }
            }
        }
    }
    out
}

impl TensorPresentation {
    /// Canonical realization: the iterated tensor product of the symbol
    /// realizations.
    pub fn realize(symbols: &[QuaternionSymbol]) -> Result<Self, QuatError> {
        let first = symbols.first().ok_or_else(|| QuatError::Presentation("no factors".into()))?;
        let f = first.field().clone();
        if symbols.iter().any(|s| *s.field() != f) {
            return Err(QuatError::FieldMismatch);
        }
        let reals: Vec<_> = symbols.iter().map(QuaternionSymbol::realize).collect();
        let mut alg = reals[0].algebra.clone();
        for r in &reals[1..] {
            alg = tensor_product(&alg, &r.algebra)?;
        }
        let unit4 = linalg::unit_vector(&f, 4, 0);
        let n = symbols.len();
        let lift = |k: usize, v: &Vector| {
            let mut acc = vec![f.one()];
            for j in 0..n {
                acc = algebra::kron(&f, &acc, if j == k { v } else { &unit4 });
            }
            acc
        };
        let factors = symbols
            .iter()
            .zip(&reals)
            .enumerate()
            .map(|(k, (s, r))| Factor { symbol: s.clone(), x: lift(k, &r.x), y: lift(k, &r.y) })
            .collect();
        Ok(TensorPresentation { algebra: alg, factors })
    }

    /// Checks the presentation before accepting it.
    pub fn from_parts(algebra: Algebra, factors: Vec<Factor>) -> Result<Self, QuatError> {
        let p = TensorPresentation { algebra, factors };
        p.verify().map_err(QuatError::Presentation)?;
        Ok(p)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn symbols(&self) -> Vec<QuaternionSymbol> {
        self.factors.iter().map(|f| f.symbol.clone()).collect()
    }

    pub fn format(&self) -> String {
        self.factors.iter().map(|f| f.symbol.format()).collect::<Vec<_>>().join(" ⊗ ")
    }

    /// `1, x, y, xy` of factor `k`.
    pub fn factor_basis(&self, k: usize) -> Vec<Vector> {
        let f = &self.factors[k];
        vec![self.algebra.unit(), f.x.clone(), f.y.clone(), self.algebra.mul(&f.x, &f.y)]
    }

    /// Index of a factor containing `v`.
    pub fn factor_containing(&self, v: &[Elem]) -> Option<usize> {
        let f = self.algebra.field();
        (0..self.factors.len()).find(|&k| {
            let mut b = self.factor_basis(k);
            b.push(v.to_vec());
            linalg::rank(f, &b) == 4
        })
    }

    /// Same factors conjugated by the invertible element `u`.
    pub fn conjugate(&self, u: &[Elem]) -> Result<Self, QuatError> {
        let a = &self.algebra;
        let ui = a.inverse(u).ok_or_else(|| QuatError::Presentation("conjugating element is not invertible".into()))?;
        let c = |v: &Vector| a.mul3(u, v, &ui);
        let factors = self.factors.iter().map(|f| Factor { symbol: f.symbol.clone(), x: c(&f.x), y: c(&f.y) }).collect();
        Self::from_parts(a.clone(), factors)
    }

    /// Factors rearranged by `order` (a permutation of factor indices).
    pub fn reordered(&self, order: &[usize]) -> Self {
        TensorPresentation { algebra: self.algebra.clone(), factors: order.iter().map(|&k| self.factors[k].clone()).collect() }
    }

    /// Defining relations in every factor, commuting factors, and the
    /// monomials spanning `A`.
    pub fn verify(&self) -> Result<(), String> {
        let a = &self.algebra;
        if 4usize.pow(self.factors.len() as u32) != a.dim() {
            return Err(format!("{} factors cannot present a {}-dimensional algebra", self.factors.len(), a.dim()));
        }
        for (k, f) in self.factors.iter().enumerate() {
            if f.x.len() != a.dim() || f.y.len() != a.dim() {
                return Err(format!("factor {k}: generator length mismatch"));
            }
            if !f.symbol.check_relations(a, &f.x, &f.y) {
                return Err(format!("factor {k}: relations of {} fail", f.symbol.format()));
            }
        }
        for i in 0..self.factors.len() {
            for j in i + 1..self.factors.len() {
                for g in [&self.factors[i].x, &self.factors[i].y] {
                    for h in [&self.factors[j].x, &self.factors[j].y] {
                        if !a.commute(g, h) {
                            return Err(format!("generators of factors {i} and {j} do not commute"));
                        }
                    }
                }
            }
        }
        if linalg::rank(a.field(), &self.monomials()) != a.dim() {
            return Err("monomials in the generators do not span the algebra".into());
        }
        Ok(())
    }

    fn monomials(&self) -> Vec<Vector> {
        let n = self.factors.len();
        let bases: Vec<Vec<Vector>> = (0..n).map(|k| self.factor_basis(k)).collect();
        (0..self.algebra.dim())
            .map(|idx| {
                digits(idx, n).iter().enumerate().fold(self.algebra.unit(), |acc, (k, &d)| self.algebra.mul(&acc, &bases[k][d]))
            })
            .collect()
    }

    /// Isomorphism from the canonical realization of the symbols onto `A`,
    /// sending `⊗ m_k` to `∏ m_k`; returned with the canonical algebra.
    pub fn embedding(&self) -> Result<(Algebra, Matrix), QuatError> {
        let canon = TensorPresentation::realize(&self.symbols())?;
        let m = linalg::transpose(&self.monomials());
        verify_isomorphism(&canon.algebra, &self.algebra, &m).map_err(QuatError::Presentation)?;
        Ok((canon.algebra, m))
    }

    pub fn to_json(&self) -> Value {
        let a = &self.algebra;
        json!({
            "algebra": a.to_json(),
            "factors": self.factors.iter().map(|f| json!({
                "symbol": f.symbol.to_json(),
                "x": a.element_to_json(&f.x),
                "y": a.element_to_json(&f.y),
            })).collect::<Vec<_>>(),
        })
    }

    /// Accepts either `{"symbols": [...]}` (canonical realization) or the
    /// full `{"algebra", "factors"}` form written by [`Self::to_json`].
    pub fn from_json(v: &Value, default: Option<&crate::field::Field>) -> Result<Self, QuatError> {
        if let Some(syms) = v.get("symbols").and_then(Value::as_array) {
            let field = match v.get("field") {
                Some(fd) => Some(crate::field::Field::new(serde_json::from_value(fd.clone()).map_err(|e| QuatError::Json(format!("{e}")))?)?),
                None => default.cloned(),
            };
            let symbols = syms.iter().map(|s| QuaternionSymbol::from_json(s, field.as_ref())).collect::<Result<Vec<_>, _>>()?;
            return Self::realize(&symbols);
        }
        let alg = Algebra::from_json(v.get("algebra").ok_or_else(|| QuatError::Json("missing \"algebra\"".into()))?, default)?;
        let arr = v.get("factors").and_then(Value::as_array).ok_or_else(|| QuatError::Json("missing \"factors\"".into()))?;
        let mut factors = Vec::new();
        for fv in arr {
            let symbol = QuaternionSymbol::from_json(fv.get("symbol").ok_or_else(|| QuatError::Json("factor without symbol".into()))?, Some(alg.field()))?;
            let x = alg.element_from_json(fv.get("x").unwrap_or(&Value::Null))?;
            let y = alg.element_from_json(fv.get("y").unwrap_or(&Value::Null))?;
            factors.push(Factor { symbol, x, y });
        }
        Self::from_parts(alg, factors)
    }
}

/// Adjacent nodes share `left.factors[left_factor].slot == right.factors[right_factor].slot`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotWitness {
    pub left_factor: usize,
    pub right_factor: usize,
    pub slot: Slot,
}

/// Why node `k` and node `k + 1` present isomorphic algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoEvidence {
    /// Both presentations live in the same algebra.
    SameAlgebra,
    /// Isomorphism from the algebra of node `k` onto that of node `k + 1`.
    Map(Matrix),
    /// Supplied by the caller as a hypothesis.
    Assumed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotChain {
    pub nodes: Vec<TensorPresentation>,
    pub witnesses: Vec<SlotWitness>,
    pub evidence: Vec<IsoEvidence>,
}

impl SlotChain {
    /// Every node presents its algebra, adjacent nodes share the stated
    /// slot literally, and every isomorphism map is a verified algebra
    /// isomorphism.
    pub fn validate(&self) -> Result<(), String> {
        if self.nodes.is_empty() || self.nodes.len() > 4 {
            return Err(format!("chain has {} nodes", self.nodes.len()));
        }
        if self.witnesses.len() + 1 != self.nodes.len() || self.evidence.len() + 1 != self.nodes.len() {
            return Err("witness count does not match the node count".into());
        }
        for (k, n) in self.nodes.iter().enumerate() {
            n.verify().map_err(|e| format!("node {k}: {e}"))?;
        }
        for (k, w) in self.witnesses.iter().enumerate() {
            let (l, r) = (&self.nodes[k], &self.nodes[k + 1]);
            let ls = l.factors.get(w.left_factor).ok_or("witness factor out of range")?;
            let rs = r.factors.get(w.right_factor).ok_or("witness factor out of range")?;
            if ls.symbol.slot(w.slot) != rs.symbol.slot(w.slot) {
                return Err(format!("nodes {k} and {}: {} slots differ", k + 1, w.slot.name()));
            }
        }
        for (k, e) in self.evidence.iter().enumerate() {
            let (l, r) = (&self.nodes[k].algebra, &self.nodes[k + 1].algebra);
            match e {
                IsoEvidence::SameAlgebra if l != r => return Err(format!("nodes {k} and {} are in different algebras", k + 1)),
                IsoEvidence::Map(m) => verify_isomorphism(l, r, m).map_err(|err| format!("nodes {k}→{}: {err}", k + 1))?,
                _ => {}
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": "slot-chain",
            "nodes": self.nodes.iter().map(TensorPresentation::to_json).collect::<Vec<_>>(),
            "witnesses": self.witnesses.iter().map(|w| json!({
                "left_factor": w.left_factor,
                "right_factor": w.right_factor,
                "slot": w.slot.name(),
            })).collect::<Vec<_>>(),
            "evidence": self.evidence.iter().map(|e| match e {
                IsoEvidence::SameAlgebra => json!("same-algebra"),
                IsoEvidence::Assumed => json!("assumed"),
                IsoEvidence::Map(m) => {
                    let f = self.nodes[0].algebra.field();
                    json!({"map": m.iter().map(|r| r.iter().map(|c| f.format(c)).collect::<Vec<_>>()).collect::<Vec<_>>()})
                }
            }).collect::<Vec<_>>(),
        })
    }
}

/// First factor pair (in index order) sharing a slot literally.
fn shared_slot(l: &TensorPresentation, r: &TensorPresentation) -> Option<SlotWitness> {
    for (i, fl) in l.factors.iter().enumerate() {
        for (j, fr) in r.factors.iter().enumerate() {
            for slot in [Slot::First, Slot::Second] {
                if fl.symbol.slot(slot) == fr.symbol.slot(slot) {
                    return Some(SlotWitness { left_factor: i, right_factor: j, slot });
                }
            }
        }
    }
    None
}

/// Map between the algebras of two presentations with pairwise isomorphic
/// factors, built as `E_Q ∘ (⊗ φ_k) ∘ E_P⁻¹` from factor isomorphisms.
fn factorwise_map(p: &TensorPresentation, q: &TensorPresentation, bounds: &Bounds) -> Option<Matrix> {
    if p.factors.len() != q.factors.len() {
        return None;
    }
    let f = p.algebra.field();
    let mut kron: Matrix = vec![vec![f.one()]];
    for (fp, fq) in p.factors.iter().zip(&q.factors) {
        let phi = if fp.symbol == fq.symbol {
            linalg::identity(f, 4)
        } else {
            match find_isomorphism_with(&fp.symbol.realize().algebra, &fq.symbol.realize().algebra, bounds) {
                IsoResult::Found(m) => m,
                _ => return None,
            }
        };
        kron = kron_matrix(f, &kron, &phi);
    }
    let (_, ep) = p.embedding().ok()?;
    let (_, eq) = q.embedding().ok()?;
    let ep_inv = linalg::inverse(f, &ep)?;
    let m = linalg::mat_mul(f, &eq, &linalg::mat_mul(f, &kron, &ep_inv));
    verify_isomorphism(&p.algebra, &q.algebra, &m).ok().map(|_| m)
}

fn compose(f: &crate::field::Field, later: &Matrix, earlier: &Matrix) -> Matrix {
    linalg::mat_mul(f, later, earlier)
}

pub fn common_slot_chain_tensor(p: &TensorPresentation, q: &TensorPresentation) -> Result<SlotChain, QuatError> {
    common_slot_chain_tensor_with(p, q, false, &Bounds::default())
}

/// Chain `P, P'', P''', P'` of at most four presentations of the same
/// algebra in which adjacent members share a slot. `assume_isomorphic`
/// accepts `A_P ≅ A_P'` as a hypothesis when no isomorphism can be built.
pub fn common_slot_chain_tensor_with(p: &TensorPresentation, q: &TensorPresentation, assume_isomorphic: bool, bounds: &Bounds) -> Result<SlotChain, QuatError> {
    let f = p.algebra.field().clone();
    if *q.algebra.field() != f {
        return Err(QuatError::FieldMismatch);
    }
    if p.factors.len() != q.factors.len() {
        return Err(QuatError::NotIsomorphic);
    }
    if p == q {
        return Ok(SlotChain { nodes: vec![p.clone()], witnesses: vec![], evidence: vec![] });
    }
    // φ: A_P → A_P'
    let phi: Option<Matrix> = if p.algebra == q.algebra {
        Some(linalg::identity(&f, p.algebra.dim()))
    } else {
        factorwise_map(p, q, bounds)
    };
    if phi.is_none() && !assume_isomorphic {
        return Err(QuatError::Undecidable);
    }
    let split_p = p.factors.iter().position(|x| x.symbol.is_split_with(bounds) == Some(true));
    let split_q = q.factors.iter().position(|x| x.symbol.is_split_with(bounds) == Some(true));
    let chain = match (split_p, split_q) {
        (Some(i), Some(j)) => split_route(p, q, i, j, phi.as_ref(), bounds)?,
        _ => general_route(p, q, phi.as_ref(), bounds)?,
    };
    chain.validate().map_err(QuatError::Presentation)?;
    Ok(chain)
}

fn reslot(p: &TensorPresentation, i: usize) -> Result<TensorPresentation, QuatError> {
    let f = p.algebra.field();
    let mut syms = p.symbols();
    syms[i] = QuaternionSymbol::new(f, syms[i].a().clone(), f.one())?;
    if syms == p.symbols() {
        return Ok(p.clone());
    }
    TensorPresentation::realize(&syms)
}

/// Replaces a split factor `(a, b) ≅ M₂(F) ≅ (a, 1)` on either side.
fn split_route(p: &TensorPresentation, q: &TensorPresentation, i: usize, j: usize, phi: Option<&Matrix>, bounds: &Bounds) -> Result<SlotChain, QuatError> {
    let f = p.algebra.field().clone();
    let p2 = reslot(p, i)?;
    let q2 = reslot(q, j)?;
    let map = |from: &TensorPresentation, to: &TensorPresentation| -> Result<Matrix, QuatError> {
        if from == to {
            return Ok(linalg::identity(&f, from.algebra.dim()));
        }
        factorwise_map(from, to, bounds).ok_or_else(|| QuatError::Decomposition("no factorwise isomorphism for a reslotted split factor".into()))
    };
    let m1 = map(p, &p2)?;
    let m3 = map(&q2, q)?;
    let mid = match phi {
        Some(phi) => {
            let m1_inv = linalg::inverse(&f, &m1).expect("isomorphisms are invertible");
            let m3_inv = linalg::inverse(&f, &m3).expect("isomorphisms are invertible");
            IsoEvidence::Map(compose(&f, &m3_inv, &compose(&f, phi, &m1_inv)))
        }
        None => IsoEvidence::Assumed,
    };
    assemble(vec![(p.clone(), None), (p2, Some(IsoEvidence::Map(m1))), (q2, Some(mid)), (q.clone(), Some(IsoEvidence::Map(m3)))])
}

/// Re-decomposes around a common commuting element `z` of the first
/// generators `x ∈ P`, `x' ∈ P'`.
fn general_route(p: &TensorPresentation, q: &TensorPresentation, phi: Option<&Matrix>, bounds: &Bounds) -> Result<SlotChain, QuatError> {
    let f = p.algebra.field().clone();
    let Some(phi) = phi else {
        return Err(QuatError::Decomposition("the general construction needs an explicit isomorphism A_P → A_P'".into()));
    };
    let a = &p.algebra;
    // pull P' back into A_P
    let phi_inv = linalg::inverse(&f, phi).expect("isomorphisms are invertible");
    let back = |v: &Vector| linalg::mat_vec(&f, &phi_inv, v);
    let q_in_a = TensorPresentation::from_parts(
        a.clone(),
        q.factors.iter().map(|x| Factor { symbol: x.symbol.clone(), x: back(&x.x), y: back(&x.y) }).collect(),
    )?;
    let x = p.factors[0].x.clone();
    let xp = q_in_a.factors[0].x.clone();
    let link = elements::find_commuting_link(a, &x, &xp, bounds).map_err(|e| QuatError::Decomposition(e.to_string()))?;
    let z = link.z;
    let decompose = |marked: &Vector, oracle: &TensorPresentation| -> Result<TensorPresentation, QuatError> {
        let d = if f.is_char2() {
            elements::decompose_with_marked_elements(a, &z, marked, Some(oracle), bounds)
        } else {
            elements::decompose_with_marked_elements(a, marked, &z, Some(oracle), bounds)
        };
        d.map(|d| d.presentation).map_err(|e| QuatError::Decomposition(e.to_string()))
    };
    let p2 = decompose(&x, p)?;
    let q2 = decompose(&xp, &q_in_a)?;
    let last = if p.algebra == q.algebra { IsoEvidence::SameAlgebra } else { IsoEvidence::Map(phi.clone()) };
    assemble(vec![
        (p.clone(), None),
        (p2, Some(IsoEvidence::SameAlgebra)),
        (q2, Some(IsoEvidence::SameAlgebra)),
        (q.clone(), Some(last)),
    ])
}

/// Drops repeated nodes (composing their evidence) and finds the shared
/// slot of every adjacent pair.
fn assemble(steps: Vec<(TensorPresentation, Option<IsoEvidence>)>) -> Result<SlotChain, QuatError> {
    let mut nodes: Vec<TensorPresentation> = Vec::new();
    let mut evidence: Vec<IsoEvidence> = Vec::new();
    for (node, ev) in steps {
        match (nodes.last(), ev) {
            (None, _) => nodes.push(node),
            // a repeated node arrives with identity evidence
            (Some(last), _) if *last == node => {}
            (Some(_), ev) => {
                nodes.push(node);
                evidence.push(ev.unwrap_or(IsoEvidence::Assumed));
            }
        }
    }
    let mut witnesses = Vec::new();
    for k in 0..nodes.len() - 1 {
        let w = shared_slot(&nodes[k], &nodes[k + 1])
            .ok_or_else(|| QuatError::Decomposition(format!("nodes {k} and {} share no slot", k + 1)))?;
        witnesses.push(w);
    }
    Ok(SlotChain { nodes, witnesses, evidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn sym(f: &Field, a: i64, b: i64) -> QuaternionSymbol {
        QuaternionSymbol::new(f, f.from_i64(a), f.from_i64(b)).unwrap()
    }

    #[test]
    fn realized_presentations_verify() {
        let q = Field::rationals();
        let p = TensorPresentation::realize(&[sym(&q, -1, -1), sym(&q, -1, -1)]).unwrap();
        assert_eq!(p.algebra().dim(), 16);
        p.verify().unwrap();
        let (canon, m) = p.embedding().unwrap();
        assert_eq!(canon, *p.algebra());
        assert_eq!(m, linalg::identity(&q, 16));
        let back = TensorPresentation::from_json(&p.to_json(), None).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn split_factor_chain_over_f5() {
        let f = Field::gf(5, 1);
        let p = TensorPresentation::realize(&[sym(&f, 1, 1), sym(&f, 2, 3)]).unwrap();
        let q = TensorPresentation::realize(&[sym(&f, 1, 2), sym(&f, 2, 3)]).unwrap();
        let c = common_slot_chain_tensor(&p, &q).unwrap();
        c.validate().unwrap();
        assert!(c.nodes.len() <= 4);
        assert_eq!(c.nodes.first(), Some(&p));
        assert_eq!(c.nodes.last(), Some(&q));
    }

    #[test]
    fn identical_presentations_collapse() {
        let f = Field::gf(3, 1);
        let p = TensorPresentation::realize(&[sym(&f, 1, 1), sym(&f, 2, 2)]).unwrap();
        assert_eq!(common_slot_chain_tensor(&p, &p).unwrap().nodes.len(), 1);
    }
}

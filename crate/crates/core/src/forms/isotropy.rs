use crate::config::Bounds;
use crate::field::{Elem, Field};
use crate::linalg::{unit_vector, zero_vector, Vector};
use crate::local;
use crate::search::{shells, Search};

use super::{FormError, FormRepr, QuadraticForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsotropyMethod {
    /// A zero read off one binary block or pair of diagonal entries.
    ExplicitWitness,
    Enumeration,
    HasseMinkowski,
    Springer,
    BoundedSearch,
}

impl IsotropyMethod {
    pub fn name(self) -> &'static str {
        match self {
            IsotropyMethod::ExplicitWitness => "explicit-witness",
            IsotropyMethod::Enumeration => "enumeration",
            IsotropyMethod::HasseMinkowski => "hasse-minkowski",
            IsotropyMethod::Springer => "springer",
            IsotropyMethod::BoundedSearch => "bounded-search",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Isotropy {
    /// Isotropic; the witness is absent only when the decision came from a
    /// local-global criterion and the witness search ran out of budget.
    Isotropic(Option<Vector>),
    Anisotropic,
    /// Characteristic 2 over an infinite field and no zero within bounds.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropyResult {
    pub outcome: Isotropy,
    pub method: IsotropyMethod,
}

impl IsotropyResult {
    pub fn flag(&self) -> Option<bool> {
        match self.outcome {
            Isotropy::Isotropic(_) => Some(true),
            Isotropy::Anisotropic => Some(false),
            Isotropy::Unknown => None,
        }
    }

    pub fn witness(&self) -> Option<&Vector> {
        match &self.outcome {
            Isotropy::Isotropic(w) => w.as_ref(),
            _ => None,
        }
    }
}

/// Result of [`represents`]; `flag` is `None` when undecided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub flag: Option<bool>,
    pub witness: Option<Vector>,
    pub method: IsotropyMethod,
}

pub fn is_isotropic(f: &QuadraticForm) -> IsotropyResult {
    is_isotropic_with(f, &Bounds::default())
}

pub fn is_isotropic_with(f: &QuadraticForm, bounds: &Bounds) -> IsotropyResult {
    use IsotropyMethod::*;
    let field = f.field();
    let done = |outcome, method| IsotropyResult { outcome, method };
    if f.dim() == 0 {
        return done(Isotropy::Anisotropic, Enumeration);
    }
    if let Some(w) = explicit_witness(f) {
        return done(Isotropy::Isotropic(Some(w)), ExplicitWitness);
    }
    if field.is_finite() {
        // Chevalley–Warning: three variables always suffice
        let k = f.dim().min(3);
        return match search_zero(f, k, bounds) {
            Search::Found(v) => done(Isotropy::Isotropic(Some(v)), Enumeration),
            Search::Exhausted => done(Isotropy::Anisotropic, Enumeration),
            Search::OutOfBudget => done(Isotropy::Unknown, Enumeration),
        };
    }
    let decided = match f.repr() {
        FormRepr::Diagonal(d) if field.is_laurent() => Some((local::springer_isotropic_diagonal(field, d), Springer)),
        FormRepr::Diagonal(d) => Some((local::is_isotropic_global(field, d), HasseMinkowski)),
        FormRepr::Pairs(p) if field.is_laurent() => match local::springer_isotropic_pairs(field, p) {
            Ok(b) => Some((Ok(b), Springer)),
            Err(_) => None,
        },
        FormRepr::Pairs(_) => None,
    };
    match decided {
        Some((Ok(false), m)) => done(Isotropy::Anisotropic, m),
        Some((Ok(true), m)) => done(Isotropy::Isotropic(search_zero(f, f.dim(), bounds).found()), m),
        Some((Err(_), _)) | None => match search_zero(f, f.dim(), bounds) {
            Search::Found(v) => done(Isotropy::Isotropic(Some(v)), BoundedSearch),
            _ => done(Isotropy::Unknown, BoundedSearch),
        },
    }
}

/// Zeros visible in a single block: a vanishing coefficient, `-a_i a_j` a
/// square, or `a b ∈ ℘F` for a block `[a, b]`.
fn explicit_witness(f: &QuadraticForm) -> Option<Vector> {
    let field = f.field();
    let n = f.dim();
    match f.repr() {
        FormRepr::Pairs(p) => {
            for (i, (a, b)) in p.iter().enumerate() {
                let mut v = zero_vector(field, n);
                if field.is_zero(a) {
                    v[2 * i] = field.one();
                    return Some(v);
                }
                if field.is_zero(b) {
                    v[2 * i + 1] = field.one();
                    return Some(v);
                }
                // a x^2 + x + b = 0 with x = u/a, u^2 + u = ab
                if let Ok(t) = field.artin_schreier_solve(&field.mul(a, b)) {
                    if let Some(u) = t.witness {
                        v[2 * i] = field.div(&u, a).unwrap();
                        v[2 * i + 1] = field.one();
                        return Some(v);
                    }
                }
            }
            None
        }
        FormRepr::Diagonal(d) => {
            for i in 0..n {
                for j in i + 1..n {
                    let r = field.neg(&field.div(&d[j], &d[i]).unwrap());
                    if let Some(x) = field.is_square(&r).witness {
                        let mut v = zero_vector(field, n);
                        v[i] = x;
                        v[j] = field.one();
                        return Some(v);
                    }
                }
            }
            None
        }
    }
}

/// Search coordinates: everything for finite fields, integers of bounded
/// height for `Q`, polynomials of bounded degree for function fields.
fn coordinates(field: &Field, bounds: &Bounds, homogeneous: bool) -> Vec<Elem> {
    if field.is_finite() {
        field.enumerate().unwrap()
    } else if field.is_rationals() {
        if homogeneous {
            field.search_coordinates(bounds.max_height)
        } else {
            field.candidates(bounds.max_height)
        }
    } else {
        field.candidates(bounds.max_degree)
    }
}

/// A root of `a z^2 + b z + c`.
pub(crate) fn solve_quadratic(field: &Field, a: &Elem, b: &Elem, c: &Elem) -> Option<Elem> {
    if field.is_zero(a) {
        if field.is_zero(b) {
            return if field.is_zero(c) { Some(field.zero()) } else { None };
        }
        return Some(field.neg(&field.div(c, b).unwrap()));
    }
    if field.is_char2() {
        if field.is_zero(b) {
            return field.is_square(&field.div(c, a).unwrap()).witness;
        }
        // z = (b/a) w with w^2 + w = ac/b^2
        let s = field.div(&field.mul(a, c), &field.square(b)).unwrap();
        let w = field.artin_schreier_solve(&s).ok()?.witness?;
        return Some(field.mul(&field.div(b, a).unwrap(), &w));
    }
    let four = field.from_i64(4);
    let disc = field.sub(&field.square(b), &field.mul(&four, &field.mul(a, c)));
    let r = field.is_square(&disc).witness?;
    let two_a = field.add(a, a);
    Some(field.div(&field.sub(&r, b), &two_a).unwrap())
}

/// Sets `v[idx]` so that `q(v) = target`, if the quadratic in that
/// coordinate has a root.
fn solve_coordinate(f: &QuadraticForm, v: &mut Vector, idx: usize, target: &Elem) -> bool {
    let field = f.field();
    v[idx] = field.zero();
    let e = unit_vector(field, v.len(), idx);
    let a = f.eval(&e);
    let b = f.polar(v, &e);
    let c = field.sub(&f.eval(v), target);
    match solve_quadratic(field, &a, &b, &c) {
        Some(z) => {
            v[idx] = z;
            true
        }
        None => false,
    }
}

/// Nonzero zero of `f` supported on the first `k` coordinates; the last of
/// them is solved for, the others enumerated in shells.
fn search_zero(f: &QuadraticForm, k: usize, bounds: &Bounds) -> Search<Vector> {
    let field = f.field();
    let coords = coordinates(field, bounds, true);
    let zero = field.zero();
    shells(k - 1, coords.len(), bounds.max_nodes, |idx| {
        if idx.iter().all(|&i| i == 0) {
            return None;
        }
        let mut v = zero_vector(field, f.dim());
        for (slot, &i) in idx.iter().enumerate() {
            v[slot] = coords[i].clone();
        }
        if solve_coordinate(f, &mut v, k - 1, &zero) && field.is_zero(&f.eval(&v)) {
            Some(v)
        } else {
            None
        }
    })
}

/// A vector with `q(v) = c`, last coordinate solved for.
fn search_value(f: &QuadraticForm, c: &Elem, bounds: &Bounds) -> Search<Vector> {
    let field = f.field();
    let n = f.dim();
    if n == 0 {
        return Search::Exhausted;
    }
    let coords = coordinates(field, bounds, false);
    shells(n - 1, coords.len(), bounds.max_nodes, |idx| {
        let mut v = zero_vector(field, n);
        for (slot, &i) in idx.iter().enumerate() {
            v[slot] = coords[i].clone();
        }
        if solve_coordinate(f, &mut v, n - 1, c) && f.eval(&v) == *c {
            Some(v)
        } else {
            None
        }
    })
}

/// `c v + f'` where `(v, f')` is a hyperbolic pair through the isotropic `v`.
pub(crate) fn hyperbolic_partner(f: &QuadraticForm, v: &[Elem]) -> Vector {
    let field = f.field();
    let n = f.dim();
    let (u, s) = (0..n)
        .map(|j| {
            let e = unit_vector(field, n, j);
            let s = f.polar(v, &e);
            (e, s)
        })
        .find(|(_, s)| !field.is_zero(s))
        .expect("nonsingular form has no radical");
    let u: Vector = u.iter().map(|x| field.div(x, &s).unwrap()).collect();
    let qu = f.eval(&u);
    u.iter().zip(v).map(|(x, y)| field.sub(x, &field.mul(&qu, y))).collect()
}

fn universal_witness(f: &QuadraticForm, v: &[Elem], c: &Elem) -> Vector {
    let field = f.field();
    let partner = hyperbolic_partner(f, v);
    v.iter().zip(&partner).map(|(x, y)| field.add(&field.mul(c, x), y)).collect()
}

pub fn represents(f: &QuadraticForm, c: &Elem) -> Result<Representation, FormError> {
    represents_with(f, c, &Bounds::default())
}

pub fn represents_with(f: &QuadraticForm, c: &Elem, bounds: &Bounds) -> Result<Representation, FormError> {
    use IsotropyMethod::*;
    let field = f.field();
    if field.is_zero(c) {
        return Err(FormError::ZeroTarget);
    }
    let iso = is_isotropic_with(f, bounds);
    if let Isotropy::Isotropic(w) = &iso.outcome {
        let witness = match w {
            Some(v) => Some(universal_witness(f, v, c)),
            None => search_value(f, c, bounds).found(),
        };
        return Ok(Representation { flag: Some(true), witness, method: iso.method });
    }
    if field.is_finite() {
        let mut b = *bounds;
        b.max_nodes = b.max_nodes.max(field.order().unwrap().pow(f.dim().saturating_sub(1) as u32));
        return Ok(match search_value(f, c, &b) {
            Search::Found(v) => Representation { flag: Some(true), witness: Some(v), method: Enumeration },
            Search::Exhausted => Representation { flag: Some(false), witness: None, method: Enumeration },
            Search::OutOfBudget => Representation { flag: None, witness: None, method: Enumeration },
        });
    }
    if field.is_char2() {
        return Ok(match search_value(f, c, bounds) {
            Search::Found(v) => Representation { flag: Some(true), witness: Some(v), method: BoundedSearch },
            _ => Representation { flag: None, witness: None, method: BoundedSearch },
        });
    }
    // f anisotropic: f represents c iff f ⊥ ⟨-c⟩ is isotropic
    let mut g = f.diagonal_entries().unwrap().to_vec();
    g.push(field.neg(c));
    let (decision, method) = if field.is_laurent() {
        (local::springer_isotropic_diagonal(field, &g)?, Springer)
    } else {
        (local::is_isotropic_global(field, &g)?, HasseMinkowski)
    };
    if !decision {
        return Ok(Representation { flag: Some(false), witness: None, method });
    }
    let n = f.dim();
    let coords = coordinates(field, bounds, true);
    let witness = shells(n, coords.len(), bounds.max_nodes, |idx| {
        if idx.iter().all(|&i| i == 0) {
            return None;
        }
        let v: Vector = idx.iter().map(|&i| coords[i].clone()).collect();
        let s = field.is_square(&field.div(&f.eval(&v), c).unwrap()).witness?;
        let w: Vector = v.iter().map(|x| field.div(x, &s).unwrap()).collect();
        (f.eval(&w) == *c).then_some(w)
    })
    .found();
    Ok(Representation { flag: Some(true), witness, method })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn isotropy_examples() {
        let f = QuadraticForm::parse_diagonal(&q(), &["1", "-1"]).unwrap();
        let r = is_isotropic(&f);
        assert_eq!(r.flag(), Some(true));
        assert!(q().is_zero(&f.eval(r.witness().unwrap())));

        let f = QuadraticForm::parse_diagonal(&q(), &["1", "1", "1", "1"]).unwrap();
        assert_eq!(is_isotropic(&f).outcome, Isotropy::Anisotropic);

        let f2 = Field::gf(2, 1);
        let f = QuadraticForm::parse_pairs(&f2, &[("1", "1")]).unwrap();
        assert_eq!(is_isotropic(&f).outcome, Isotropy::Anisotropic);

        let l = Field::laurent(3, 1);
        let f = QuadraticForm::parse_diagonal(&l, &["1", "-2", "-t", "2*t"]).unwrap();
        let r = is_isotropic(&f);
        assert_eq!(r.outcome, Isotropy::Anisotropic);
        assert_eq!(r.method, IsotropyMethod::Springer);
    }

    #[test]
    fn witnesses_are_zeros() {
        let rf = Field::rat_func(3, 1);
        let f = QuadraticForm::parse_diagonal(&rf, &["1", "t", "t+1", "2*t^2+t"]).unwrap();
        let r = is_isotropic(&f);
        if let Some(w) = r.witness() {
            assert!(rf.is_zero(&f.eval(w)));
        }
        let qf = QuadraticForm::parse_diagonal(&q(), &["1", "1", "1", "-3"]).unwrap();
        let r = is_isotropic(&qf);
        assert_eq!(r.flag(), Some(true));
        assert!(q().is_zero(&qf.eval(r.witness().unwrap())));
    }

    #[test]
    fn representation_examples() {
        let f = QuadraticForm::parse_diagonal(&q(), &["1", "1"]).unwrap();
        let r = represents(&f, &q().from_i64(2)).unwrap();
        assert_eq!(r.flag, Some(true));
        assert_eq!(f.eval(r.witness.as_ref().unwrap()), q().from_i64(2));
        assert_eq!(represents(&f, &q().from_i64(-1)).unwrap().flag, Some(false));
        assert_eq!(represents(&f, &q().from_i64(3)).unwrap().flag, Some(false));

        let f4 = Field::gf(2, 2);
        let g = QuadraticForm::parse_pairs(&f4, &[("1", "1")]).unwrap();
        let w = f4.parse("a").unwrap();
        let r = represents(&g, &w).unwrap();
        assert_eq!(g.eval(r.witness.as_ref().unwrap()), w);
        assert!(represents(&g, &f4.zero()).is_err());
    }

    #[test]
    fn quadratic_solver() {
        for field in [Field::gf(2, 2), Field::gf(5, 1), q(), Field::rat_func(2, 1)] {
            for (a, b, z) in [(1, 1, 2), (3, 0, 1), (0, 1, 4), (2, 3, 3)] {
                let (a, b, z) = (field.from_i64(a), field.from_i64(b), field.from_i64(z));
                // c chosen so that z is a root
                let c = field.neg(&field.add(&field.mul(&a, &field.square(&z)), &field.mul(&b, &z)));
                if let Some(r) = solve_quadratic(&field, &a, &b, &c) {
                    let val = field.add(&field.add(&field.mul(&a, &field.square(&r)), &field.mul(&b, &r)), &c);
                    assert!(field.is_zero(&val));
                } else {
                    panic!("no root found over {field:?}");
                }
            }
        }
    }
}

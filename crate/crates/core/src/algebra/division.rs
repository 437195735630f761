use rand::Rng;

use super::iso::{recognize_quaternion, RecognizedQuaternion};
use super::Algebra;
use crate::config::{self, Bounds};
use crate::field::{poly, Elem};
use crate::forms::{is_isotropic_with, Isotropy, IsotropyMethod, QuadraticForm};
use crate::linalg::{self, Vector};
use crate::search::{shells, Search};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisionMethod {
    /// A zero divisor turned up among structured or sampled candidates.
    ZeroDivisorSearch,
    /// Every nonzero element of a finite algebra was checked.
    Exhaustive,
    /// Commutative finite algebra generated by one element with irreducible
    /// minimal polynomial of full degree.
    PrimitiveElement,
    /// Quaternion algebra decided by its norm form.
    NormForm(IsotropyMethod),
    /// Nothing conclusive within the bounds.
    BoundedSearch,
}

impl DivisionMethod {
    pub fn name(&self) -> &'static str {
        match self {
            DivisionMethod::ZeroDivisorSearch => "zero-divisor-search",
            DivisionMethod::Exhaustive => "exhaustive",
            DivisionMethod::PrimitiveElement => "primitive-element",
            DivisionMethod::NormForm(m) => m.name(),
            DivisionMethod::BoundedSearch => "bounded-search",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionResult {
    /// `Some(true)` division, `Some(false)` not division, `None` unknown.
    pub flag: Option<bool>,
    /// `(u, v)` nonzero with `uv = 0` whenever `flag == Some(false)`.
    pub witness: Option<(Vector, Vector)>,
    pub method: DivisionMethod,
}

impl DivisionResult {
    fn no(u: Vector, v: Vector, method: DivisionMethod) -> Self {
        DivisionResult { flag: Some(false), witness: Some((u, v)), method }
    }

    fn yes(method: DivisionMethod) -> Self {
        DivisionResult { flag: Some(true), witness: None, method }
    }
}

pub fn is_division(a: &Algebra) -> DivisionResult {
    is_division_with(a, &Bounds::default())
}

pub fn is_division_with(a: &Algebra, bounds: &Bounds) -> DivisionResult {
    let n = a.dim();
    if n == 1 {
        return DivisionResult::yes(DivisionMethod::PrimitiveElement);
    }
    if let Some((u, v)) = find_zero_divisor(a) {
        return DivisionResult::no(u, v, DivisionMethod::ZeroDivisorSearch);
    }
    if let Some(rq) = recognize_quaternion(a) {
        if let Some(r) = norm_form_route(a, &rq, bounds) {
            return r;
        }
    }
    if let Some(q) = a.field().order() {
        let total = (q as f64).powi(n as i32);
        if total <= bounds.max_nodes as f64 {
            return exhaustive(a, q as usize);
        }
        if a.is_commutative() {
            if let Some(r) = primitive_element(a) {
                return r;
            }
        }
    }
    DivisionResult { flag: None, witness: None, method: DivisionMethod::BoundedSearch }
}

fn norm_form_route(a: &Algebra, rq: &RecognizedQuaternion, bounds: &Bounds) -> Option<DivisionResult> {
    let f = a.field();
    let form = if f.is_char2() {
        let ab = f.div(&rq.a, &rq.b).unwrap();
        QuadraticForm::pairs(f, vec![(f.one(), rq.a.clone()), (rq.b.clone(), ab)]).ok()?
    } else {
        let d = vec![f.one(), f.neg(&rq.a), f.neg(&rq.b), f.mul(&rq.a, &rq.b)];
        QuadraticForm::diagonal(f, d).ok()?
    };
    let res = is_isotropic_with(&form, bounds);
    let method = DivisionMethod::NormForm(res.method);
    match res.outcome {
        Isotropy::Anisotropic => Some(DivisionResult::yes(method)),
        Isotropy::Isotropic(Some(w)) => {
            let mut c = w.clone();
            if f.is_char2() {
                c[3] = f.div(&c[3], &rq.b).unwrap();
            }
            let xy = a.mul(&rq.x, &rq.y);
            let q = linalg::add_vec(
                f,
                &linalg::add_vec(f, &a.scalar(&c[0]), &a.scale(&c[1], &rq.x)),
                &linalg::add_vec(f, &a.scale(&c[2], &rq.y), &a.scale(&c[3], &xy)),
            );
            // conjugate q̄ = trd(q) - q
            let trd = if f.is_char2() { c[1].clone() } else { f.add(&c[0], &c[0]) };
            let qbar = a.sub(&a.scalar(&trd), &q);
            if !a.is_zero(&q) && !a.is_zero(&qbar) && a.is_zero(&a.mul(&q, &qbar)) {
                Some(DivisionResult::no(q, qbar, method))
            } else {
                None
            }
        }
        _ => None,
    }
}

fn exhaustive(a: &Algebra, q: usize) -> DivisionResult {
    let f = a.field();
    let elems = f.enumerate().unwrap();
    let n = a.dim();
    let found = shells(n, q, u64::MAX, |idx| {
        let v: Vector = idx.iter().map(|&i| elems[i].clone()).collect();
        if a.is_zero(&v) {
            return None;
        }
        singular_witness(a, &v)
    });
    match found {
        Search::Found((u, v)) => DivisionResult::no(u, v, DivisionMethod::Exhaustive),
        _ => DivisionResult::yes(DivisionMethod::Exhaustive),
    }
}

fn primitive_element(a: &Algebra) -> Option<DivisionResult> {
    let f = a.field();
    let ff = f.finite_part()?;
    let mut rng = config::rng(config::DEFAULT_SEED);
    for _ in 0..200 {
        let v = a.random_element(&mut rng, 1);
        let mp = a.minimal_polynomial(&v);
        if mp.len() == a.dim() + 1 {
            let p: Vec<u32> = mp.iter().map(|c| f.as_finite(c).unwrap()).collect();
            if poly::is_irreducible(ff, &p) {
                // re-check invertibility on a sample
                for _ in 0..100 {
                    let w = a.random_element(&mut rng, 1);
                    if !a.is_zero(&w) {
                        if let Some(z) = singular_witness(a, &w) {
                            return Some(DivisionResult::no(z.0, z.1, DivisionMethod::ZeroDivisorSearch));
                        }
                    }
                }
                return Some(DivisionResult::yes(DivisionMethod::PrimitiveElement));
            }
        }
    }
    None
}

/// `(v, k)` with `v k = 0`, `k ≠ 0`, when left multiplication by `v` is
/// singular.
fn singular_witness(a: &Algebra, v: &[Elem]) -> Option<(Vector, Vector)> {
    let k = linalg::kernel(a.field(), &a.left_mult_matrix(v), a.dim());
    k.into_iter().next().map(|k| (v.to_vec(), k))
}

/// Zero-divisor search over structured candidates (basis elements, their
/// sums, differences and products) and seeded random elements. Each
/// candidate is tested for a singular multiplication map and for a
/// reducible minimal polynomial.
pub fn find_zero_divisor(a: &Algebra) -> Option<(Vector, Vector)> {
    let n = a.dim();
    let mut cands: Vec<Vector> = a.basis();
    for i in 0..n {
        for j in 0..n {
            if i < j {
                let (ei, ej) = (a.basis_element(i), a.basis_element(j));
                cands.push(a.add(&ei, &ej));
                cands.push(a.sub(&ei, &ej));
            }
            cands.push(a.product_basis(i, j));
        }
    }
    let mut rng = config::rng(config::DEFAULT_SEED ^ 0x5a5a);
    for _ in 0..100 {
        let k = rng.gen_range(2..=n.max(2));
        cands.push(a.random_sparse_element(&mut rng, 2, k));
    }
    for c in &cands {
        if a.is_zero(c) || a.as_scalar(c).is_some() {
            continue;
        }
        if let Some(w) = singular_witness(a, c) {
            return Some(w);
        }
        if let Some(w) = split_minimal_polynomial(a, c) {
            return Some(w);
        }
    }
    None
}

fn split_minimal_polynomial(a: &Algebra, c: &[Elem]) -> Option<(Vector, Vector)> {
    let f = a.field();
    let mp = a.minimal_polynomial(c);
    let (g, h) = if let Some(ff) = f.finite_part().filter(|_| f.is_finite()) {
        let p: Vec<u32> = mp.iter().map(|x| f.as_finite(x).unwrap()).collect();
        let fac = poly::factor(ff, &p);
        let (g, e) = fac.first()?;
        if fac.len() == 1 && *e == 1 {
            return None;
        }
        let (h, _) = poly::divrem(ff, &p, g);
        let lift = |p: &[u32]| p.iter().map(|&x| f.constant(x)).collect::<Vec<_>>();
        (lift(g), lift(&h))
    } else if mp.len() == 3 {
        let r = crate::forms::solve_quadratic(f, &mp[2], &mp[1], &mp[0])?;
        // X² + sX + n = (X - r)(X - r') with r + r' = -s
        let r2 = f.sub(&f.neg(&mp[1]), &r);
        (vec![f.neg(&r), f.one()], vec![f.neg(&r2), f.one()])
    } else {
        return None;
    };
    let u = a.eval_poly(&g, c);
    let v = a.eval_poly(&h, c);
    (!a.is_zero(&u) && !a.is_zero(&v) && a.is_zero(&a.mul(&u, &v))).then_some((u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix_algebra;
    use crate::algebra::tests::hamilton;
    use crate::field::Field;

    #[test]
    fn hamilton_is_division_over_q() {
        let q = Field::rationals();
        let r = is_division(&hamilton(&q));
        assert_eq!(r.flag, Some(true));
        assert_eq!(r.method, DivisionMethod::NormForm(IsotropyMethod::HasseMinkowski));
    }

    #[test]
    fn matrices_have_zero_divisors() {
        let f = Field::gf(3, 1);
        let m = matrix_algebra(&f, 2);
        let r = is_division(&m);
        assert_eq!(r.flag, Some(false));
        let (u, v) = r.witness.unwrap();
        assert!(m.is_zero(&m.mul(&u, &v)));
        // Hamilton over F_3 is split
        let h = hamilton(&f);
        assert_eq!(is_division(&h).flag, Some(false));
    }

    #[test]
    fn finite_fields_as_algebras() {
        // F_9 as F_3[i]
        let f = Field::gf(3, 1);
        let h = hamilton(&f);
        let sub = h.subalgebra(&[h.unit(), h.basis_element(1)], &h.unit(), vec!["1".into(), "i".into()]).unwrap();
        assert_eq!(is_division(&sub).flag, Some(true));
        // F_5[i] ≅ F_5 × F_5
        let f5 = Field::gf(5, 1);
        let h5 = hamilton(&f5);
        let sub5 = h5.subalgebra(&[h5.unit(), h5.basis_element(1)], &h5.unit(), vec!["1".into(), "i".into()]).unwrap();
        assert_eq!(is_division(&sub5).flag, Some(false));
    }
}

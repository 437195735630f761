use super::solve::{solve_in_span, Equation};
use super::{center, Algebra};
use crate::config::Bounds;
use crate::field::Elem;
use crate::forms::{is_isometric_with, QuadraticForm};
use crate::linalg::{self, Matrix, Vector};
use crate::search::{shells, Search};

/// Standard generators of a quaternion algebra found inside an arbitrary
/// basis: `x² = a` (or `x² + x = a` in characteristic 2), `y² = b`, and
/// `xy = -yx` (resp. `xy + yx = y`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognizedQuaternion {
    pub a: Elem,
    pub b: Elem,
    pub x: Vector,
    pub y: Vector,
}

impl RecognizedQuaternion {
    /// Columns `1, x, y, xy`.
    pub fn frame(&self, alg: &Algebra) -> Vec<Vector> {
        vec![alg.unit(), self.x.clone(), self.y.clone(), alg.mul(&self.x, &self.y)]
    }

    pub fn norm_form(&self, alg: &Algebra) -> QuadraticForm {
        let f = alg.field();
        if f.is_char2() {
            let ab = f.div(&self.a, &self.b).unwrap();
            QuadraticForm::pairs(f, vec![(f.one(), self.a.clone()), (self.b.clone(), ab)]).expect("b is nonzero")
        } else {
            let d = vec![f.one(), f.neg(&self.a), f.neg(&self.b), f.mul(&self.a, &self.b)];
            QuadraticForm::diagonal(f, d).expect("a, b are nonzero")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoResult {
    /// Matrix whose column `j` is the image of `e_j`.
    Found(Matrix),
    Absent,
    Unknown,
}

/// A few small combinations of the given vectors, basis vectors first.
fn small_combinations(a: &Algebra, vs: &[Vector]) -> Vec<Vector> {
    let mut out = vs.to_vec();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            out.push(a.add(&vs[i], &vs[j]));
            out.push(a.sub(&vs[i], &vs[j]));
        }
    }
    out
}

fn kernel_of(a: &Algebra, op: impl Fn(&Vector) -> Vector) -> Vec<Vector> {
    let cols: Vec<Vector> = a.basis().iter().map(&op).collect();
    linalg::kernel(a.field(), &linalg::transpose(&cols), a.dim())
}

/// `{z : xz + zx = 0}` (or `xz + zx = z` in characteristic 2).
pub(crate) fn twisted_space(a: &Algebra, x: &[Elem]) -> Vec<Vector> {
    if a.field().is_char2() {
        kernel_of(a, |z| a.add(&a.anticommutator(x, z), z))
    } else {
        kernel_of(a, |z| a.anticommutator(x, z))
    }
}

/// Reduced trace of a quaternion-algebra element, read off its minimal
/// polynomial; `None` if some element has degree above 2.
fn reduced_trace_functional(a: &Algebra) -> Option<Vec<Elem>> {
    let f = a.field();
    a.basis()
        .iter()
        .map(|e| {
            let mp = a.minimal_polynomial(e);
            match mp.len() {
                2 => Some(f.add(&f.neg(&mp[0]), &f.neg(&mp[0]))),
                3 => Some(f.neg(&mp[1])),
                _ => None,
            }
        })
        .collect()
}

/// Finds standard quaternion generators when `a` is a 4-dimensional
/// central algebra.
pub fn recognize_quaternion(a: &Algebra) -> Option<RecognizedQuaternion> {
    if a.dim() != 4 || center(a).len() != 1 {
        return None;
    }
    let f = a.field();
    let trd = reduced_trace_functional(a)?;
    let (x, av) = if f.is_char2() {
        let i = (0..4).find(|&i| !f.is_zero(&trd[i]))?;
        let x = a.scale(&f.inv(&trd[i]).unwrap(), &a.basis_element(i));
        let v = a.as_scalar(&a.add(&a.square(&x), &x))?;
        (x, v)
    } else {
        let pure = linalg::kernel(f, &vec![trd], 4);
        small_combinations(a, &pure).into_iter().find_map(|x| {
            let v = a.as_scalar(&a.square(&x))?;
            (!f.is_zero(&v)).then_some((x, v))
        })?
    };
    let tw = twisted_space(a, &x);
    let (y, bv) = small_combinations(a, &tw).into_iter().find_map(|y| {
        let v = a.as_scalar(&a.square(&y))?;
        (!f.is_zero(&v)).then_some((y, v))
    })?;
    let rq = RecognizedQuaternion { a: av, b: bv, x, y };
    (linalg::rank(f, &rq.frame(a)) == 4).then_some(rq)
}

/// Checks `φ(1) = 1`, `φ(e_i e_j) = φ(e_i) φ(e_j)` and bijectivity.
pub fn verify_isomorphism(a: &Algebra, b: &Algebra, m: &Matrix) -> Result<(), String> {
    let f = a.field();
    let n = a.dim();
    if b.dim() != n || m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err("shape mismatch".into());
    }
    let phi = |v: &[Elem]| linalg::mat_vec(f, m, v);
    if phi(&a.unit()) != b.unit() {
        return Err("φ(1) ≠ 1".into());
    }
    let images: Vec<Vector> = a.basis().iter().map(|e| phi(e)).collect();
    for i in 0..n {
        for j in 0..n {
            if phi(&a.product_basis(i, j)) != b.mul(&images[i], &images[j]) {
                return Err(format!("φ(e{i}·e{j}) ≠ φ(e{i})·φ(e{j})"));
            }
        }
    }
    if linalg::rank(f, m) != n {
        return Err("φ is not bijective".into());
    }
    Ok(())
}

/// Matrix sending the columns of `from` (a basis of `A`) to `to`.
pub(crate) fn map_from_frames(a: &Algebra, from: &[Vector], to: &[Vector]) -> Option<Matrix> {
    let f = a.field();
    let p = linalg::transpose(&from.to_vec());
    let pinv = linalg::inverse(f, &p)?;
    Some(linalg::mat_mul(f, &linalg::transpose(&to.to_vec()), &pinv))
}

pub fn find_isomorphism(a: &Algebra, b: &Algebra) -> IsoResult {
    find_isomorphism_with(a, b, &Bounds::default())
}

pub fn find_isomorphism_with(a: &Algebra, b: &Algebra, bounds: &Bounds) -> IsoResult {
    if a.field() != b.field() || a.dim() != b.dim() {
        return IsoResult::Absent;
    }
    if a == b {
        return IsoResult::Found(linalg::identity(a.field(), a.dim()));
    }
    if center(a).len() != center(b).len() || a.is_commutative() != b.is_commutative() {
        return IsoResult::Absent;
    }
    if a.dim() == 4 {
        if let (Some(qa), Some(qb)) = (recognize_quaternion(a), recognize_quaternion(b)) {
            return quaternion_transport(a, b, &qa, &qb, bounds);
        }
    }
    generator_search(a, b, bounds)
}

/// Sends the standard generators of `a` to solutions of the same relations
/// in `b`.
fn quaternion_transport(a: &Algebra, b: &Algebra, qa: &RecognizedQuaternion, qb: &RecognizedQuaternion, bounds: &Bounds) -> IsoResult {
    let f = a.field();
    let isometric = is_isometric_with(&qa.norm_form(a), &qb.norm_form(b), bounds).ok();
    if isometric == Some(false) {
        return IsoResult::Absent;
    }
    let xs = if f.is_char2() {
        // X = x_B + (element of reduced trace 0), X² + X = a
        let trd = reduced_trace_functional(b).unwrap();
        let dirs = linalg::kernel(f, &vec![trd], 4);
        solve_in_span(b, &qb.x, &dirs, &Equation::ArtinSchreier(qa.a.clone()), bounds, |_| true)
    } else {
        let trd = reduced_trace_functional(b).unwrap();
        let pure = linalg::kernel(f, &vec![trd], 4);
        solve_in_span(b, &b.zero(), &pure, &Equation::Square(qa.a.clone()), bounds, |x| !b.is_zero(x))
    };
    let Search::Found(x) = xs else {
        return if f.is_finite() { IsoResult::Absent } else { IsoResult::Unknown };
    };
    let tw = twisted_space(b, &x);
    let ys = solve_in_span(b, &b.zero(), &tw, &Equation::Square(qa.b.clone()), bounds, |y| !b.is_zero(y));
    let Search::Found(y) = ys else {
        return if f.is_finite() { IsoResult::Absent } else { IsoResult::Unknown };
    };
    let to = vec![b.unit(), x.clone(), y.clone(), b.mul(&x, &y)];
    match map_from_frames(a, &qa.frame(a), &to) {
        Some(m) if verify_isomorphism(a, b, &m).is_ok() => IsoResult::Found(m),
        _ => IsoResult::Unknown,
    }
}

/// Few algebra generators of `a` taken from its basis.
fn generators(a: &Algebra) -> Vec<Vector> {
    let mut gens: Vec<Vector> = Vec::new();
    let mut span = 1;
    for e in a.basis() {
        if span == a.dim() {
            break;
        }
        let mut g = gens.clone();
        g.push(e.clone());
        let s = a.generated_subspace(&g).len();
        if s > span {
            gens = g;
            span = s;
        }
    }
    gens
}

/// Linear map determined by `gens ↦ images` on words in the generators.
fn extend_from_generators(a: &Algebra, b: &Algebra, gens: &[Vector], images: &[Vector]) -> Option<Matrix> {
    let f = a.field();
    let mut from = vec![a.unit()];
    let mut to = vec![b.unit()];
    let mut i = 0;
    while i < from.len() && from.len() < a.dim() {
        for (g, h) in gens.iter().zip(images) {
            let u = a.mul(&from[i], g);
            let mut cand = from.clone();
            cand.push(u.clone());
            if linalg::rank(f, &cand) > from.len() {
                from.push(u);
                to.push(b.mul(&to[i], h));
            }
        }
        i += 1;
    }
    if from.len() < a.dim() {
        return None;
    }
    map_from_frames(a, &from, &to)
}

/// Backtracking over images of generators with matching minimal
/// polynomials; only for finite algebras small enough to enumerate.
fn generator_search(a: &Algebra, b: &Algebra, bounds: &Bounds) -> IsoResult {
    let f = a.field();
    let Some(q) = f.order() else {
        return IsoResult::Unknown;
    };
    let n = a.dim();
    if (q as f64).powi(n as i32) > bounds.max_nodes as f64 {
        return IsoResult::Unknown;
    }
    let elems = f.enumerate().unwrap();
    let gens = generators(a);
    let polys: Vec<Vec<Elem>> = gens.iter().map(|g| a.minimal_polynomial(g)).collect();
    let mut cands: Vec<Vec<Vector>> = vec![Vec::new(); gens.len()];
    shells::<()>(n, q as usize, u64::MAX, |idx| {
        let v: Vector = idx.iter().map(|&i| elems[i].clone()).collect();
        for (k, p) in polys.iter().enumerate() {
            if b.is_zero(&b.eval_poly(p, &v)) && b.minimal_polynomial(&v) == *p {
                cands[k].push(v.clone());
            }
        }
        None
    });
    if cands.iter().any(|c| c.is_empty()) {
        return IsoResult::Absent;
    }
    let lens: Vec<usize> = cands.iter().map(Vec::len).collect();
    let max = *lens.iter().max().unwrap();
    let mut spent = 0u64;
    let res = shells(gens.len(), max, bounds.max_nodes, |idx| {
        if idx.iter().zip(&lens).any(|(&i, &l)| i >= l) {
            return None;
        }
        spent += 1;
        let images: Vec<Vector> = idx.iter().enumerate().map(|(k, &i)| cands[k][i].clone()).collect();
        let m = extend_from_generators(a, b, &gens, &images)?;
        verify_isomorphism(a, b, &m).ok().map(|_| m)
    });
    match res {
        Search::Found(m) => IsoResult::Found(m),
        Search::Exhausted => IsoResult::Absent,
        Search::OutOfBudget => IsoResult::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix_algebra;
    use crate::algebra::tests::hamilton;
    use crate::field::Field;

    #[test]
    fn recognizes_hamilton() {
        let q = Field::rationals();
        let h = hamilton(&q);
        let rq = recognize_quaternion(&h).unwrap();
        assert_eq!(rq.a, q.from_i64(-1));
        assert_eq!(rq.b, q.from_i64(-1));
        assert!(recognize_quaternion(&matrix_algebra(&q, 2)).is_some());
    }

    #[test]
    fn identity_and_transport() {
        let q = Field::rationals();
        let h = hamilton(&q);
        assert_eq!(find_isomorphism(&h, &h), IsoResult::Found(linalg::identity(&q, 4)));
        assert_eq!(find_isomorphism(&h, &matrix_algebra(&q, 2)), IsoResult::Absent);
        let f3 = Field::gf(3, 1);
        let (h3, m3) = (hamilton(&f3), matrix_algebra(&f3, 2));
        match find_isomorphism(&h3, &m3) {
            IsoResult::Found(m) => assert!(verify_isomorphism(&h3, &m3, &m).is_ok()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn generator_search_on_small_algebras() {
        let f = Field::gf(2, 1);
        let m = matrix_algebra(&f, 2);
        // conjugate table by a permutation of basis labels
        let perm = [3usize, 1, 2, 0];
        let n = 4;
        let mut table = vec![vec![vec![f.zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                let p = m.product_basis(perm[i], perm[j]);
                for k in 0..n {
                    table[i][j][k] = p[perm[k]].clone();
                }
            }
        }
        let unit: Vector = (0..n).map(|k| m.unit()[perm[k]].clone()).collect();
        let b = Algebra::new(&f, m.labels().to_vec(), table, unit).unwrap();
        match generator_search(&m, &b, &Bounds::default()) {
            IsoResult::Found(phi) => assert!(verify_isomorphism(&m, &b, &phi).is_ok()),
            other => panic!("{other:?}"),
        }
    }
}

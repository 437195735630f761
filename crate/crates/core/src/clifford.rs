//! Clifford algebras of quadratic forms as structure-constant algebras.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError};
use crate::config;
use crate::field::{Elem, Field};
use crate::forms::{FormRepr, QuadraticForm};
use crate::linalg::{self, Vector};

/// Largest supported form dimension; the table then has `2^16` entries.
pub const MAX_FORM_DIM: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffordError {
    #[error("form dimension {0} exceeds the supported ceiling {MAX_FORM_DIM}")]
    TooLarge(usize),
    #[error("form dimension {0} is not even and positive")]
    OddDimension(usize),
    #[error("the discriminant is nontrivial; the center of the even part is a field")]
    NontrivialDiscriminant,
    #[error("no square root or Artin-Schreier root of the discriminant was found")]
    NoRoot,
    #[error("defining relation fails: {0}")]
    Relation(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordAlgebra {
    form: QuadraticForm,
    algebra: Algebra,
    /// Bitmask of the monomial at each basis index.
    subsets: Vec<u32>,
    generators: Vec<Vector>,
}

/// Subsets of `{0, …, n-1}` ordered by size, then lexicographically.
fn ordered_subsets(n: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (0..1u32 << n).collect();
    v.sort_by_key(|&s| {
        let members: Vec<u32> = (0..n as u32).filter(|i| s >> i & 1 == 1).collect();
        (s.count_ones(), members)
    });
    v
}

fn label(s: u32, n: usize) -> String {
    if s == 0 {
        return "1".into();
    }
    (0..n).filter(|i| s >> i & 1 == 1).map(|i| format!("x{}", i + 1)).collect()
}

struct Rewriter<'a> {
    f: &'a Field,
    /// `x_i² = q[i]`.
    q: Vec<Elem>,
    /// `x_i x_j + x_j x_i = b[i][j]`.
    b: Vec<Vec<Elem>>,
}

impl Rewriter<'_> {
    /// `x_S · x_g` as a combination of ordered monomials.
    fn times_generator(&self, s: u32, g: usize) -> BTreeMap<u32, Elem> {
        let f = self.f;
        let mut out = BTreeMap::new();
        let gbit = 1u32 << g;
        if s == 0 {
            out.insert(gbit, f.one());
            return out;
        }
        let last = 31 - s.leading_zeros() as usize;
        let rest = s & !(1 << last);
        if last < g {
            out.insert(s | gbit, f.one());
        } else if last == g {
            out.insert(rest, self.q[g].clone());
        } else {
            // x_R x_l x_g = -(x_R x_g) x_l + b_lg x_R
            for (w, c) in self.times_generator(rest, g) {
                for (w2, c2) in self.times_generator(w, last) {
                    add_into(f, &mut out, w2, f.neg(&f.mul(&c, &c2)));
                }
            }
            if !f.is_zero(&self.b[last][g]) {
                add_into(f, &mut out, rest, self.b[last][g].clone());
            }
        }
        out
    }

    fn product(&self, s: u32, t: u32, n: usize) -> BTreeMap<u32, Elem> {
        let mut acc = BTreeMap::from([(s, self.f.one())]);
        for g in (0..n).filter(|g| t >> g & 1 == 1) {
            let mut next = BTreeMap::new();
            for (w, c) in acc {
                for (w2, c2) in self.times_generator(w, g) {
                    add_into(self.f, &mut next, w2, self.f.mul(&c, &c2));
                }
            }
            acc = next;
        }
        acc
    }
}

fn add_into(f: &Field, m: &mut BTreeMap<u32, Elem>, k: u32, c: Elem) {
    let e = m.entry(k).or_insert_with(|| f.zero());
    *e = f.add(e, &c);
    if f.is_zero(e) {
        m.remove(&k);
    }
}

pub fn clifford_algebra(form: &QuadraticForm) -> Result<CliffordAlgebra, CliffordError> {
    let f = form.field();
    let n = form.dim();
    if n > MAX_FORM_DIM {
        return Err(CliffordError::TooLarge(n));
    }
    let e = |i: usize| linalg::unit_vector(f, n, i);
    let q: Vec<Elem> = (0..n).map(|i| form.eval(&e(i))).collect();
    let b: Vec<Vec<Elem>> = (0..n).map(|i| (0..n).map(|j| form.polar(&e(i), &e(j))).collect()).collect();
    let rw = Rewriter { f, q, b };
    let subsets = ordered_subsets(n);
    let mut index = vec![0usize; 1 << n];
    for (k, &s) in subsets.iter().enumerate() {
        index[s as usize] = k;
    }
    let table = subsets
        .iter()
        .map(|&s| subsets.iter().map(|&t| rw.product(s, t, n).into_iter().map(|(w, c)| (index[w as usize], c)).collect()).collect())
        .collect();
    let labels = subsets.iter().map(|&s| label(s, n)).collect();
    let dim = 1 << n;
    let algebra = Algebra::from_sparse(f, labels, table, linalg::unit_vector(f, dim, 0))?;
    let generators = (0..n).map(|i| linalg::unit_vector(f, dim, index[1 << i])).collect();
    let c = CliffordAlgebra { form: form.clone(), algebra, subsets, generators };
    c.verify()?;
    Ok(c)
}

impl CliffordAlgebra {
    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    /// `Σ uᵢ xᵢ`.
    pub fn vector_element(&self, u: &[Elem]) -> Vector {
        let f = self.form.field();
        let mut v = self.algebra.zero();
        for (c, x) in u.iter().zip(&self.generators) {
            linalg::axpy(f, &mut v, c, x);
        }
        v
    }

    /// `(Σ uᵢxᵢ)² = f(u)` on every basis vector, every pair and 100 seeded
    /// random vectors.
    pub fn verify(&self) -> Result<(), CliffordError> {
        let f = self.form.field();
        let a = &self.algebra;
        let n = self.form.dim();
        let e = |i: usize| linalg::unit_vector(f, n, i);
        for i in 0..n {
            let xi = &self.generators[i];
            if a.square(xi) != a.scalar(&self.form.eval(&e(i))) {
                return Err(CliffordError::Relation(format!("x{}² = f(e{})", i + 1, i + 1)));
            }
            for j in i + 1..n {
                if a.anticommutator(xi, &self.generators[j]) != a.scalar(&self.form.polar(&e(i), &e(j))) {
                    return Err(CliffordError::Relation(format!("x{0}x{1} + x{1}x{0} = b(e{0}, e{1})", i + 1, j + 1)));
                }
            }
        }
        let mut rng = config::rng(config::DEFAULT_SEED);
        for _ in 0..100 {
            let u: Vector = (0..n).map(|_| f.sample(&mut rng, 5)).collect();
            let v = self.vector_element(&u);
            if a.square(&v) != a.scalar(&self.form.eval(&u)) {
                return Err(CliffordError::Relation("(Σ uᵢxᵢ)² = f(u)".into()));
            }
        }
        Ok(())
    }

    fn even_basis(&self) -> Vec<Vector> {
        let f = self.form.field();
        let dim = self.algebra.dim();
        (0..dim).filter(|&k| self.subsets[k].count_ones().is_multiple_of(2)).map(|k| linalg::unit_vector(f, dim, k)).collect()
    }

    /// The even part as its own algebra, on the even monomials.
    pub fn even_part(&self) -> Result<Algebra, CliffordError> {
        let n = self.form.dim();
        let labels = self.subsets.iter().filter(|s| s.count_ones() % 2 == 0).map(|&s| label(s, n)).collect();
        Ok(self.algebra.subalgebra(&self.even_basis(), &self.algebra.unit(), labels)?)
    }

    /// Central element of the even part generating its center: the full
    /// product `x₁⋯x_{2m}` away from characteristic 2, `Σ x_{2k-1}x_{2k}`
    /// for a sum of binary forms in characteristic 2.
    pub fn central_element(&self) -> Vector {
        let a = &self.algebra;
        match self.form.repr() {
            FormRepr::Pairs(p) => {
                let mut z = a.zero();
                for k in 0..p.len() {
                    z = a.add(&z, &a.mul(&self.generators[2 * k], &self.generators[2 * k + 1]));
                }
                z
            }
            FormRepr::Diagonal(_) => self.generators.iter().fold(a.unit(), |acc, x| a.mul(&acc, x)),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "form": self.form.to_json(),
            "algebra": self.algebra.to_json(),
            "generators": self.generators.iter().map(|g| self.algebra.element_to_json(g)).collect::<Vec<_>>(),
        })
    }
}

/// `E(f)` for a form of trivial discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    pub algebra: Algebra,
    /// The central idempotent of the even part, in Clifford coordinates.
    pub idempotent: Vector,
    /// Basis of `eC₀e` in Clifford coordinates.
    pub basis: Vec<Vector>,
}

/// `E(f)` as the corner `eC₀e` of the even part cut out by a central
/// idempotent built from the central element.
pub fn extract_e(form: &QuadraticForm) -> Result<Extraction, CliffordError> {
    let n = form.dim();
    if n == 0 || n % 2 == 1 {
        return Err(CliffordError::OddDimension(n));
    }
    let disc = form.discriminant();
    if !disc.trivial {
        return Err(CliffordError::NontrivialDiscriminant);
    }
    let c = clifford_algebra(form)?;
    let f = form.field();
    let a = c.algebra();
    let z = c.central_element();
    let e = if f.is_char2() {
        // z² + z = d, e = z + s with s² + s = d
        let d = a.as_scalar(&a.add(&a.square(&z), &z)).ok_or_else(|| CliffordError::Relation("z² + z is central".into()))?;
        let s = f.artin_schreier_solve(&d).ok().and_then(|t| t.witness).ok_or(CliffordError::NoRoot)?;
        a.add(&z, &a.scalar(&s))
    } else {
        let d = a.as_scalar(&a.square(&z)).ok_or_else(|| CliffordError::Relation("z² is central".into()))?;
        let r = f.is_square(&d).witness.ok_or(CliffordError::NoRoot)?;
        let two_r = f.add(&r, &r);
        a.scale(&f.inv(&two_r).unwrap(), &a.add(&z, &a.scalar(&r)))
    };
    if a.square(&e) != e {
        return Err(CliffordError::Relation("e² = e".into()));
    }
    let corner: Vec<Vector> = c.even_basis().iter().map(|b| a.mul3(&e, b, &e)).collect();
    let keep = linalg::independent_subset(f, &corner);
    let basis: Vec<Vector> = keep.into_iter().map(|k| corner[k].clone()).collect();
    let expected = 1usize << (n - 2);
    if basis.len() != expected {
        return Err(CliffordError::Relation(format!("dim eC₀e = {expected}, got {}", basis.len())));
    }
    let labels = (0..basis.len()).map(|k| format!("e{k}")).collect();
    let algebra = a.subalgebra(&basis, &e, labels)?;
    Ok(Extraction { algebra, idempotent: e, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{center, find_isomorphism, tests::hamilton, IsoResult};

    #[test]
    fn small_examples() {
        let q = Field::rationals();
        let f = QuadraticForm::parse_diagonal(&q, &["1", "-1"]).unwrap();
        let c = clifford_algebra(&f).unwrap();
        assert_eq!(c.algebra().dim(), 4);
        let v = c.vector_element(&[q.one(), q.one()]);
        assert!(c.algebra().is_zero(&c.algebra().square(&v)));
        assert_eq!(c.even_part().unwrap().dim(), 2);
        assert_eq!(extract_e(&f).unwrap().algebra.dim(), 1);

        let f2 = Field::gf(2, 1);
        let h = QuadraticForm::hyperbolic(&f2, 1);
        let c = clifford_algebra(&h).unwrap();
        assert!(c.algebra().is_zero(&c.algebra().square(&c.generators()[0])));
    }

    #[test]
    fn four_squares() {
        let q = Field::rationals();
        let f = QuadraticForm::parse_diagonal(&q, &["1", "1", "1", "1"]).unwrap();
        let c = clifford_algebra(&f).unwrap();
        let a = c.algebra();
        assert_eq!(a.dim(), 16);
        let x12 = a.mul(&c.generators()[0], &c.generators()[1]);
        assert_eq!(a.square(&x12), a.scalar(&q.from_i64(-1)));
        let even = c.even_part().unwrap();
        assert_eq!((even.dim(), center(&even).len()), (8, 2));
        let e = extract_e(&f).unwrap();
        assert!(matches!(find_isomorphism(&e.algebra, &hamilton(&q)), IsoResult::Found(_)));
    }

    #[test]
    fn char2_norm_form() {
        let f2 = Field::gf(2, 1);
        let s = crate::quaternion::QuaternionSymbol::new(&f2, f2.one(), f2.one()).unwrap();
        let nf = s.norm_form();
        let c = clifford_algebra(&nf).unwrap();
        assert_eq!(c.even_part().unwrap().dim(), 8);
        let e = extract_e(&nf).unwrap();
        assert!(matches!(find_isomorphism(&e.algebra, &s.realize().algebra), IsoResult::Found(_)));
    }

    #[test]
    fn nontrivial_discriminant_is_reported() {
        let q = Field::rationals();
        let f = QuadraticForm::parse_diagonal(&q, &["1", "1"]).unwrap();
        assert_eq!(extract_e(&f), Err(CliffordError::NontrivialDiscriminant));
    }
}

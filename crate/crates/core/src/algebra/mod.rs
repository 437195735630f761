//! Finite-dimensional associative unital algebras given by structure
//! constants `e_i e_j = Σ_k c_ijk e_k`.

mod division;
mod iso;
mod solve;

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::config;
use crate::field::{Elem, Field, FieldDescriptor, FieldError};
use crate::linalg::{self, Matrix, Vector};

pub use division::{find_zero_divisor, is_division, is_division_with, DivisionMethod, DivisionResult};
pub use iso::{find_isomorphism, find_isomorphism_with, recognize_quaternion, verify_isomorphism, IsoResult, RecognizedQuaternion};
pub use solve::{solve_in_span, Equation};
pub(crate) use solve::coefficient_pool;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("table shape does not match dimension {0}")]
    Shape(usize),
    #[error("associativity fails on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("the given unit does not act as identity on basis element {0}")]
    NotUnital(usize),
    #[error("algebras live over different fields")]
    FieldMismatch,
    #[error("subspace is not closed under multiplication")]
    NotClosed,
    #[error("vector has length {0}, expected {1}")]
    Length(usize, usize),
    #[error("malformed algebra JSON: {0}")]
    Json(String),
}

/// Sparse row of a product: `(k, c)` pairs with `c ≠ 0`.
pub(crate) type Sparse = Vec<(usize, Elem)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    field: Field,
    labels: Vec<String>,
    table: Vec<Vec<Sparse>>,
    unit: Vector,
}

/// Triples checked exhaustively up to this many; beyond it a seeded sample
/// of basis triples and random element triples is checked.
const FULL_ASSOCIATIVITY_TRIPLES: usize = 1 << 21;

impl Algebra {
    /// Builds from a dense table `c[i][j][k]`, verifying associativity and
    /// the unit axiom.
    pub fn new(field: &Field, labels: Vec<String>, table: Vec<Vec<Vec<Elem>>>, unit: Vector) -> Result<Self, AlgebraError> {
        let n = labels.len();
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) || unit.len() != n {
            return Err(AlgebraError::Shape(n));
        }
        let sparse = table
            .into_iter()
            .map(|row| row.into_iter().map(|c| sparsify(field, &c)).collect())
            .collect();
        Self::from_sparse(field, labels, sparse, unit)
    }

    pub(crate) fn from_sparse(field: &Field, labels: Vec<String>, table: Vec<Vec<Sparse>>, unit: Vector) -> Result<Self, AlgebraError> {
        let a = Algebra { field: field.clone(), labels, table, unit };
        a.check_unit()?;
        a.check_associative()?;
        Ok(a)
    }

    fn check_unit(&self) -> Result<(), AlgebraError> {
        for i in 0..self.dim() {
            let e = self.basis_element(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(AlgebraError::NotUnital(i));
            }
        }
        Ok(())
    }

    fn check_associative(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        let assoc = |i: usize, j: usize, k: usize| {
            let left = self.mul_basis_vec_right(&self.product_basis(i, j), k);
            let right = self.mul_basis_vec_left(i, &self.product_basis(j, k));
            left == right
        };
        if n * n * n <= FULL_ASSOCIATIVITY_TRIPLES {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if !assoc(i, j, k) {
                            return Err(AlgebraError::NotAssociative(i, j, k));
                        }
                    }
                }
            }
            return Ok(());
        }
        let mut rng = config::rng(config::DEFAULT_SEED);
        for _ in 0..FULL_ASSOCIATIVITY_TRIPLES / 8 {
            let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            if !assoc(i, j, k) {
                return Err(AlgebraError::NotAssociative(i, j, k));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> Vector {
        self.unit.clone()
    }

    pub fn zero(&self) -> Vector {
        linalg::zero_vector(&self.field, self.dim())
    }

    pub fn basis_element(&self, i: usize) -> Vector {
        linalg::unit_vector(&self.field, self.dim(), i)
    }

    pub fn basis(&self) -> Vec<Vector> {
        (0..self.dim()).map(|i| self.basis_element(i)).collect()
    }

    /// `e_i e_j` as a dense vector.
    pub fn product_basis(&self, i: usize, j: usize) -> Vector {
        let mut v = self.zero();
        for (k, c) in &self.table[i][j] {
            v[*k] = c.clone();
        }
        v
    }

    /// Structure constant `c_ijk`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Elem {
        self.table[i][j].iter().find(|(kk, _)| *kk == k).map(|(_, c)| c.clone()).unwrap_or_else(|| self.field.zero())
    }

    fn mul_basis_vec_right(&self, a: &[Elem], k: usize) -> Vector {
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if self.field.is_zero(ai) {
                continue;
            }
            for (m, c) in &self.table[i][k] {
                out[*m] = self.field.add(&out[*m], &self.field.mul(ai, c));
            }
        }
        out
    }

    fn mul_basis_vec_left(&self, i: usize, b: &[Elem]) -> Vector {
        let mut out = self.zero();
        for (j, bj) in b.iter().enumerate() {
            if self.field.is_zero(bj) {
                continue;
            }
            for (m, c) in &self.table[i][j] {
                out[*m] = self.field.add(&out[*m], &self.field.mul(bj, c));
            }
        }
        out
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vector {
        let f = &self.field;
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if f.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if f.is_zero(bj) {
                    continue;
                }
                let s = f.mul(ai, bj);
                for (k, c) in &self.table[i][j] {
                    out[*k] = f.add(&out[*k], &f.mul(&s, c));
                }
            }
        }
        out
    }

    pub fn mul3(&self, a: &[Elem], b: &[Elem], c: &[Elem]) -> Vector {
        self.mul(&self.mul(a, b), c)
    }

    pub fn add(&self, a: &[Elem], b: &[Elem]) -> Vector {
        linalg::add_vec(&self.field, a, b)
    }

    pub fn sub(&self, a: &[Elem], b: &[Elem]) -> Vector {
        linalg::sub_vec(&self.field, a, b)
    }

    pub fn neg(&self, a: &[Elem]) -> Vector {
        a.iter().map(|x| self.field.neg(x)).collect()
    }

    pub fn scale(&self, c: &Elem, a: &[Elem]) -> Vector {
        linalg::scale_vec(&self.field, c, a)
    }

    /// `c · 1`.
    pub fn scalar(&self, c: &Elem) -> Vector {
        self.scale(c, &self.unit)
    }

    pub fn square(&self, a: &[Elem]) -> Vector {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &[Elem], e: u32) -> Vector {
        let mut acc = self.unit();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn is_zero(&self, a: &[Elem]) -> bool {
        linalg::is_zero_vector(&self.field, a)
    }

    /// `ab - ba`.
    pub fn commutator(&self, a: &[Elem], b: &[Elem]) -> Vector {
        self.sub(&self.mul(a, b), &self.mul(b, a))
    }

    /// `ab + ba`.
    pub fn anticommutator(&self, a: &[Elem], b: &[Elem]) -> Vector {
        self.add(&self.mul(a, b), &self.mul(b, a))
    }

    pub fn commute(&self, a: &[Elem], b: &[Elem]) -> bool {
        self.is_zero(&self.commutator(a, b))
    }

    /// `c` with `a = c·1`, if `a` lies on the line of scalars.
    pub fn as_scalar(&self, a: &[Elem]) -> Option<Elem> {
        let f = &self.field;
        let k = self.unit.iter().position(|u| !f.is_zero(u))?;
        let c = f.div(&a[k], &self.unit[k]).unwrap();
        (self.scalar(&c) == a).then_some(c)
    }

    /// Matrix of `z ↦ a z` (column `j` is `a e_j`).
    pub fn left_mult_matrix(&self, a: &[Elem]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.mul(a, &self.basis_element(j))).collect();
        linalg::transpose(&cols)
    }

    /// Matrix of `z ↦ z a`.
    pub fn right_mult_matrix(&self, a: &[Elem]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.mul(&self.basis_element(j), a)).collect();
        linalg::transpose(&cols)
    }

    pub fn inverse(&self, a: &[Elem]) -> Option<Vector> {
        let x = linalg::solve(&self.field, &self.left_mult_matrix(a), &self.unit, self.dim())?;
        (self.mul(&x, a) == self.unit).then_some(x)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..i).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Monic minimal polynomial, coefficients low to high.
    pub fn minimal_polynomial(&self, a: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut powers = vec![self.unit()];
        loop {
            let next = self.mul(powers.last().unwrap(), a);
            let d = powers.len();
            // express a^d in terms of lower powers
            let m = linalg::transpose(&powers);
            if let Some(c) = linalg::solve(f, &m, &next, d) {
                let mut p: Vec<Elem> = c.iter().map(|x| f.neg(x)).collect();
                p.push(f.one());
                return p;
            }
            powers.push(next);
        }
    }

    /// Evaluates a polynomial (low to high) at `a`.
    pub fn eval_poly(&self, p: &[Elem], a: &[Elem]) -> Vector {
        let mut acc = self.zero();
        for c in p.iter().rev() {
            acc = self.add(&self.mul(&acc, a), &self.scalar(c));
        }
        acc
    }

    /// Random element with coordinates from `Field::sample`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, bound: u32) -> Vector {
        (0..self.dim()).map(|_| self.field.sample(rng, bound)).collect()
    }

    /// Random element with small integral coordinates, most of them zero.
    pub fn random_sparse_element<R: Rng + ?Sized>(&self, rng: &mut R, bound: u32, nonzero: usize) -> Vector {
        let mut v = self.zero();
        let mut idx: Vec<usize> = (0..self.dim()).collect();
        idx.shuffle(rng);
        for &i in idx.iter().take(nonzero) {
            v[i] = self.field.sample_integral(rng, bound);
        }
        v
    }

    /// The algebra structure on a multiplicatively closed subspace with the
    /// given unit (which need not be the unit of `self`). Returns the new
    /// algebra; coordinates are with respect to `basis` in order.
    pub fn subalgebra(&self, basis: &[Vector], unit: &[Elem], labels: Vec<String>) -> Result<Algebra, AlgebraError> {
        let f = &self.field;
        let coords = linalg::Coordinates::new(f, basis.to_vec()).ok_or(AlgebraError::NotClosed)?;
        let r = basis.len();
        let mut table = vec![vec![Vec::new(); r]; r];
        for i in 0..r {
            for j in 0..r {
                let p = self.mul(&basis[i], &basis[j]);
                let c = coords.coords(f, &p).ok_or(AlgebraError::NotClosed)?;
                table[i][j] = sparsify(f, &c);
            }
        }
        let u = coords.coords(f, unit).ok_or(AlgebraError::NotClosed)?;
        Algebra::from_sparse(f, labels, table, u)
    }

    /// Smallest subalgebra containing the unit and the generators.
    pub fn generated_subspace(&self, generators: &[Vector]) -> Vec<Vector> {
        let f = &self.field;
        let mut span = vec![self.unit()];
        let mut frontier = vec![self.unit()];
        while let Some(v) = frontier.pop() {
            for g in generators {
                let w = self.mul(&v, g);
                let mut cand = span.clone();
                cand.push(w.clone());
                if linalg::rank(f, &cand) > span.len() {
                    span.push(w.clone());
                    frontier.push(w);
                }
            }
        }
        span
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let mut entries = Vec::new();
        for (i, row) in self.table.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                for (k, c) in cell {
                    entries.push(json!([i, j, k, f.format(c)]));
                }
            }
        }
        json!({
            "field": serde_json::to_value(f.descriptor()).unwrap(),
            "dim": self.dim(),
            "basis": self.labels,
            "unit": self.unit.iter().map(|c| f.format(c)).collect::<Vec<_>>(),
            "table": entries,
        })
    }

    /// Reads `{"dim", "basis", "table": [[i,j,k,"c"], …], "unit"?}`; the unit
    /// defaults to the first basis element.
    pub fn from_json(v: &Value, default: Option<&Field>) -> Result<Self, AlgebraError> {
        let bad = |m: &str| AlgebraError::Json(m.to_string());
        let field = match v.get("field") {
            Some(fd) => Field::new(serde_json::from_value::<FieldDescriptor>(fd.clone()).map_err(|e| bad(&e.to_string()))?)?,
            None => default.cloned().unwrap_or_else(Field::rationals),
        };
        let n = v.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("missing \"dim\""))? as usize;
        let labels: Vec<String> = match v.get("basis").and_then(Value::as_array) {
            Some(a) => a.iter().map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("basis labels must be strings"))).collect::<Result<_, _>>()?,
            None => (0..n).map(|i| format!("e{i}")).collect(),
        };
        if labels.len() != n {
            return Err(AlgebraError::Shape(n));
        }
        let mut table = vec![vec![vec![field.zero(); n]; n]; n];
        let entries = v.get("table").and_then(Value::as_array).ok_or_else(|| bad("missing \"table\""))?;
        for e in entries {
            let a = e.as_array().filter(|a| a.len() == 4).ok_or_else(|| bad("table entries are [i, j, k, \"c\"]"))?;
            let idx = |x: &Value| x.as_u64().map(|u| u as usize).filter(|&u| u < n).ok_or_else(|| bad("index out of range"));
            let (i, j, k) = (idx(&a[0])?, idx(&a[1])?, idx(&a[2])?);
            let c = match &a[3] {
                Value::String(s) => field.parse(s)?,
                Value::Number(x) => field.parse(&x.to_string())?,
                _ => return Err(bad("coefficients are strings")),
            };
            table[i][j][k] = field.add(&table[i][j][k], &c);
        }
        let unit = match v.get("unit").and_then(Value::as_array) {
            Some(u) => parse_vector(&field, u)?,
            None => linalg::unit_vector(&field, n, 0),
        };
        Algebra::new(&field, labels, table, unit)
    }

    pub fn format_element(&self, a: &[Elem]) -> String {
        let f = &self.field;
        let terms: Vec<String> = a
            .iter()
            .zip(&self.labels)
            .filter(|(c, _)| !f.is_zero(c))
            .map(|(c, l)| {
                let cs = f.format(c);
                if f.is_one(c) {
                    l.clone()
                } else if cs.contains('+') || cs.contains('-') && !cs.starts_with('-') || cs.contains('/') && cs.contains('(') {
                    format!("({cs})*{l}")
                } else {
                    format!("{cs}*{l}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    pub fn element_to_json(&self, a: &[Elem]) -> Value {
        json!(a.iter().map(|c| self.field.format(c)).collect::<Vec<_>>())
    }

    pub fn element_from_json(&self, v: &Value) -> Result<Vector, AlgebraError> {
        let arr = v.as_array().ok_or_else(|| AlgebraError::Json("elements are coordinate arrays".into()))?;
        let x = parse_vector(&self.field, arr)?;
        if x.len() != self.dim() {
            return Err(AlgebraError::Length(x.len(), self.dim()));
        }
        Ok(x)
    }
}

pub(crate) fn parse_vector(field: &Field, arr: &[Value]) -> Result<Vector, AlgebraError> {
    arr.iter()
        .map(|x| match x {
            Value::String(s) => Ok(field.parse(s)?),
            Value::Number(n) => Ok(field.parse(&n.to_string())?),
            _ => Err(AlgebraError::Json("coordinates are strings".into())),
        })
        .collect()
}

fn sparsify(f: &Field, v: &[Elem]) -> Sparse {
    v.iter().enumerate().filter(|(_, c)| !f.is_zero(c)).map(|(k, c)| (k, c.clone())).collect()
}

/// Basis of `{z : zs = sz for all s ∈ S}`; every vector is re-checked.
pub fn centralizer(a: &Algebra, s: &[Vector]) -> Vec<Vector> {
    let n = a.dim();
    let mut rows: Matrix = Vec::new();
    for x in s {
        let l = a.left_mult_matrix(x);
        let r = a.right_mult_matrix(x);
        // z ↦ zx - xz
        for i in 0..n {
            rows.push((0..n).map(|j| a.field().sub(&r[i][j], &l[i][j])).collect());
        }
    }
    let k = linalg::kernel(a.field(), &rows, n);
    for z in &k {
        for x in s {
            assert!(a.commute(z, x), "centralizer vector fails to commute");
        }
    }
    k
}

pub fn center(a: &Algebra) -> Vec<Vector> {
    centralizer(a, &a.basis())
}

/// Kronecker table; basis `e_i ⊗ f_j` at index `i·dim(B) + j`.
pub fn tensor_product(a: &Algebra, b: &Algebra) -> Result<Algebra, AlgebraError> {
    if a.field() != b.field() {
        return Err(AlgebraError::FieldMismatch);
    }
    let f = a.field();
    let (na, nb) = (a.dim(), b.dim());
    let mut table = vec![vec![Vec::new(); na * nb]; na * nb];
    for i1 in 0..na {
        for j1 in 0..nb {
            for i2 in 0..na {
                for j2 in 0..nb {
                    let mut cell = Vec::new();
                    for (k1, c1) in &a.table[i1][i2] {
                        for (k2, c2) in &b.table[j1][j2] {
                            cell.push((k1 * nb + k2, f.mul(c1, c2)));
                        }
                    }
                    cell.sort_by_key(|(k, _)| *k);
                    table[i1 * nb + j1][i2 * nb + j2] = cell;
                }
            }
        }
    }
    let labels = a
        .labels
        .iter()
        .flat_map(|la| b.labels.iter().map(move |lb| format!("{la}⊗{lb}")))
        .collect();
    Algebra::from_sparse(f, labels, table, kron(f, &a.unit, &b.unit))
}

/// Coordinates of `u ⊗ v`.
pub fn kron(f: &Field, u: &[Elem], v: &[Elem]) -> Vector {
    u.iter().flat_map(|x| v.iter().map(move |y| f.mul(x, y))).collect()
}

/// The `n × n` matrix algebra with basis `E_ij` at index `i·n + j`.
pub fn matrix_algebra(field: &Field, n: usize) -> Algebra {
    let mut table = vec![vec![Vec::new(); n * n]; n * n];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                table[i * n + j][j * n + l] = vec![(i * n + l, field.one())];
            }
        }
    }
    let labels = (0..n).flat_map(|i| (0..n).map(move |j| format!("E{}{}", i + 1, j + 1))).collect();
    let mut unit = linalg::zero_vector(field, n * n);
    for i in 0..n {
        unit[i * n + i] = field.one();
    }
    Algebra::from_sparse(field, labels, table, unit).expect("matrix units form an associative algebra")
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn hamilton(f: &Field) -> Algebra {
        // basis 1, i, j, k
        let idx = |s: &str| ["1", "i", "j", "k"].iter().position(|x| *x == s).unwrap();
        let rules: [(&str, &str, i64, &str); 16] = [
            ("1", "1", 1, "1"), ("1", "i", 1, "i"), ("1", "j", 1, "j"), ("1", "k", 1, "k"),
            ("i", "1", 1, "i"), ("i", "i", -1, "1"), ("i", "j", 1, "k"), ("i", "k", -1, "j"),
            ("j", "1", 1, "j"), ("j", "i", -1, "k"), ("j", "j", -1, "1"), ("j", "k", 1, "i"),
            ("k", "1", 1, "k"), ("k", "i", 1, "j"), ("k", "j", -1, "i"), ("k", "k", -1, "1"),
        ];
        let mut t = vec![vec![vec![f.zero(); 4]; 4]; 4];
        for (a, b, c, r) in rules {
            t[idx(a)][idx(b)][idx(r)] = f.from_i64(c);
        }
        Algebra::new(f, ["1", "i", "j", "k"].map(String::from).to_vec(), t, linalg::unit_vector(f, 4, 0)).unwrap()
    }

    #[test]
    fn centralizers() {
        let q = Field::rationals();
        let m2 = matrix_algebra(&q, 2);
        assert_eq!(centralizer(&m2, &[m2.unit()]).len(), 4);
        let d = vec![q.one(), q.zero(), q.zero(), q.from_i64(-1)];
        assert_eq!(centralizer(&m2, &[d]).len(), 2);
        assert_eq!(center(&m2).len(), 1);
        let h = hamilton(&q);
        assert_eq!(centralizer(&h, &[h.basis_element(1)]).len(), 2);
        let hh = tensor_product(&h, &h).unwrap();
        assert_eq!(hh.dim(), 16);
        assert_eq!(center(&hh).len(), 1);
    }

    #[test]
    fn minimal_polynomials() {
        let q = Field::rationals();
        let h = hamilton(&q);
        assert_eq!(h.minimal_polynomial(&h.unit()), vec![q.from_i64(-1), q.one()]);
        assert_eq!(h.minimal_polynomial(&h.basis_element(1)), vec![q.one(), q.zero(), q.one()]);
        let i = h.basis_element(1);
        let p = h.minimal_polynomial(&i);
        assert!(h.is_zero(&h.eval_poly(&p, &i)));
    }

    #[test]
    fn associativity_is_checked() {
        let q = Field::rationals();
        let mut t = vec![vec![vec![q.zero(); 2]; 2]; 2];
        t[0][0][0] = q.one();
        t[0][1][1] = q.one();
        t[1][0][1] = q.one();
        t[1][1][0] = q.one();
        t[1][1][1] = q.one();
        assert!(Algebra::new(&q, vec!["1".into(), "u".into()], t.clone(), linalg::unit_vector(&q, 2, 0)).is_ok());
        // break the unit
        t[0][1][1] = q.from_i64(2);
        assert!(Algebra::new(&q, vec!["1".into(), "u".into()], t, linalg::unit_vector(&q, 2, 0)).is_err());
        // octonion-style sign error breaks associativity
        let h = hamilton(&q);
        let mut dense: Vec<Vec<Vec<Elem>>> = (0..4).map(|i| (0..4).map(|j| h.product_basis(i, j)).collect()).collect();
        dense[1][2][3] = q.from_i64(-1);
        assert!(matches!(Algebra::new(&q, h.labels().to_vec(), dense, h.unit()), Err(AlgebraError::NotAssociative(..))));
    }

    #[test]
    fn json_round_trip_and_subalgebra() {
        let f = Field::gf(3, 1);
        let h = hamilton(&f);
        let back = Algebra::from_json(&h.to_json(), None).unwrap();
        assert_eq!(back, h);
        let i = h.basis_element(1);
        let sub = h.subalgebra(&[h.unit(), i.clone()], &h.unit(), vec!["1".into(), "i".into()]).unwrap();
        assert_eq!(sub.dim(), 2);
        assert!(sub.is_commutative());
        assert_eq!(h.generated_subspace(&[i]).len(), 2);
    }
}

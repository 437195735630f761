//! Even-dimensional nonsingular quadratic forms: `⟨a_1, …, a_2m⟩` away from
//! characteristic 2 and `[a_1, b_1] ⊥ … ⊥ [a_m, b_m]` in characteristic 2.

mod isotropy;
mod witt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{Elem, Field, FieldDescriptor, FieldError};
use crate::linalg::{Matrix, Vector};
use crate::local::LocalError;

pub use isotropy::{is_isotropic, is_isotropic_with, represents, represents_with, Isotropy, IsotropyMethod, IsotropyResult, Representation};
pub(crate) use isotropy::solve_quadratic;
pub use witt::{
    is_isometric, is_isometric_with, trivialize_discriminant, witt_decompose, witt_decompose_with, ExtensionCheck,
    QuadraticExtension, Trivialization, WittDecomposition,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error("quadratic forms must have even dimension, got {0}")]
    OddDimension(usize),
    #[error("diagonal entry {0} is zero; the form would be singular")]
    SingularEntry(usize),
    #[error("characteristic 2 forms are given by pairs, other characteristics by diagonal entries")]
    WrongRepresentation,
    #[error("forms live over different fields")]
    FieldMismatch,
    #[error("undecidable within the search bounds: {0}")]
    Undecidable(String),
    #[error("the target value must be nonzero")]
    ZeroTarget,
    #[error("quadratic extension: {0}")]
    Extension(String),
    #[error("malformed form JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormRepr {
    Diagonal(Vec<Elem>),
    Pairs(Vec<(Elem, Elem)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    field: Field,
    repr: FormRepr,
}

/// Class of the discriminant in `F/℘F` (char 2) or `F^×/F^×2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantClass {
    pub char2: bool,
    pub representative: Elem,
    pub trivial: bool,
}

impl DiscriminantClass {
    /// Whether two discriminants agree in the relevant quotient group.
    pub fn same_class(&self, other: &DiscriminantClass, field: &Field) -> bool {
        if self.char2 {
            let d = field.add(&self.representative, &other.representative);
            field.artin_schreier_solve(&d).map(|t| t.flag).unwrap_or(false)
        } else {
            match field.div(&self.representative, &other.representative) {
                Some(r) => field.is_square(&r).flag,
                None => false,
            }
        }
    }
}

impl QuadraticForm {
    pub fn diagonal(field: &Field, entries: Vec<Elem>) -> Result<Self, FormError> {
        if field.is_char2() {
            return Err(FormError::WrongRepresentation);
        }
        if entries.len() % 2 == 1 {
            return Err(FormError::OddDimension(entries.len()));
        }
        if let Some(i) = entries.iter().position(|a| field.is_zero(a)) {
            return Err(FormError::SingularEntry(i));
        }
        Ok(QuadraticForm { field: field.clone(), repr: FormRepr::Diagonal(entries) })
    }

    pub fn pairs(field: &Field, pairs: Vec<(Elem, Elem)>) -> Result<Self, FormError> {
        if !field.is_char2() {
            return Err(FormError::WrongRepresentation);
        }
        Ok(QuadraticForm { field: field.clone(), repr: FormRepr::Pairs(pairs) })
    }

    /// Parses entries with the field's element syntax.
    pub fn parse_diagonal(field: &Field, entries: &[&str]) -> Result<Self, FormError> {
        let e = entries.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>, _>>()?;
        Self::diagonal(field, e)
    }

    pub fn parse_pairs(field: &Field, pairs: &[(&str, &str)]) -> Result<Self, FormError> {
        let p = pairs
            .iter()
            .map(|(a, b)| Ok((field.parse(a)?, field.parse(b)?)))
            .collect::<Result<Vec<_>, FieldError>>()?;
        Self::pairs(field, p)
    }

    /// `copies` hyperbolic planes: `⟨1, -1⟩` or `[0, 0]`.
    pub fn hyperbolic(field: &Field, copies: usize) -> Self {
        if field.is_char2() {
            let repr = FormRepr::Pairs(vec![(field.zero(), field.zero()); copies]);
            QuadraticForm { field: field.clone(), repr }
        } else {
            let mut d = Vec::new();
            for _ in 0..copies {
                d.push(field.one());
                d.push(field.from_i64(-1));
            }
            QuadraticForm { field: field.clone(), repr: FormRepr::Diagonal(d) }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn repr(&self) -> &FormRepr {
        &self.repr
    }

    pub fn dim(&self) -> usize {
        match &self.repr {
            FormRepr::Diagonal(d) => d.len(),
            FormRepr::Pairs(p) => 2 * p.len(),
        }
    }

    pub fn diagonal_entries(&self) -> Option<&[Elem]> {
        match &self.repr {
            FormRepr::Diagonal(d) => Some(d),
            FormRepr::Pairs(_) => None,
        }
    }

    pub fn pair_entries(&self) -> Option<&[(Elem, Elem)]> {
        match &self.repr {
            FormRepr::Pairs(p) => Some(p),
            FormRepr::Diagonal(_) => None,
        }
    }

    pub fn eval(&self, v: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = f.zero();
        match &self.repr {
            FormRepr::Diagonal(d) => {
                for (a, x) in d.iter().zip(v) {
                    if !f.is_zero(x) {
                        acc = f.add(&acc, &f.mul(a, &f.square(x)));
                    }
                }
            }
            FormRepr::Pairs(p) => {
                for (i, (a, b)) in p.iter().enumerate() {
                    let (x, y) = (&v[2 * i], &v[2 * i + 1]);
                    let t = f.add(&f.add(&f.mul(a, &f.square(x)), &f.mul(x, y)), &f.mul(b, &f.square(y)));
                    acc = f.add(&acc, &t);
                }
            }
        }
        acc
    }

    /// Polar form `b(u, v) = q(u + v) - q(u) - q(v)`.
    pub fn polar(&self, u: &[Elem], v: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = f.zero();
        match &self.repr {
            FormRepr::Diagonal(d) => {
                for ((a, x), y) in d.iter().zip(u).zip(v) {
                    acc = f.add(&acc, &f.mul(a, &f.mul(x, y)));
                }
                f.add(&acc, &acc)
            }
            FormRepr::Pairs(_) => {
                for i in 0..u.len() / 2 {
                    let t = f.add(&f.mul(&u[2 * i], &v[2 * i + 1]), &f.mul(&u[2 * i + 1], &v[2 * i]));
                    acc = f.add(&acc, &t);
                }
                acc
            }
        }
    }

    /// Upper-triangular coefficient matrix: `q(x) = Σ_{i≤j} c_ij x_i x_j`.
    pub fn coefficient_matrix(&self) -> Matrix {
        let n = self.dim();
        let basis: Vec<Vector> = (0..n).map(|i| crate::linalg::unit_vector(&self.field, n, i)).collect();
        pullback_coefficients(self, &basis)
    }

    pub fn orthogonal_sum(&self, other: &QuadraticForm) -> Result<Self, FormError> {
        if self.field != other.field {
            return Err(FormError::FieldMismatch);
        }
        let repr = match (&self.repr, &other.repr) {
            (FormRepr::Diagonal(a), FormRepr::Diagonal(b)) => FormRepr::Diagonal(a.iter().chain(b).cloned().collect()),
            (FormRepr::Pairs(a), FormRepr::Pairs(b)) => FormRepr::Pairs(a.iter().chain(b).cloned().collect()),
            _ => return Err(FormError::WrongRepresentation),
        };
        Ok(QuadraticForm { field: self.field.clone(), repr })
    }

    /// `c·f`; in characteristic 2 each `c[a, b]` is rewritten as `[ca, b/c]`.
    pub fn scaled(&self, c: &Elem) -> Result<Self, FormError> {
        let f = &self.field;
        let ci = f.inv(c).ok_or(FormError::ZeroTarget)?;
        let repr = match &self.repr {
            FormRepr::Diagonal(d) => FormRepr::Diagonal(d.iter().map(|a| f.mul(c, a)).collect()),
            FormRepr::Pairs(p) => FormRepr::Pairs(p.iter().map(|(a, b)| (f.mul(c, a), f.mul(&ci, b))).collect()),
        };
        Ok(QuadraticForm { field: f.clone(), repr })
    }

    /// `-f`, which equals `f` in characteristic 2.
    pub fn negated(&self) -> Self {
        self.scaled(&self.field.from_i64(-1)).expect("-1 is a unit")
    }

    /// Coefficient-wise image under a field embedding.
    pub fn extend_to(&self, ext: &Field, embed: impl Fn(&Elem) -> Elem) -> Result<Self, FormError> {
        match &self.repr {
            FormRepr::Diagonal(d) => Self::diagonal(ext, d.iter().map(&embed).collect()),
            FormRepr::Pairs(p) => Self::pairs(ext, p.iter().map(|(a, b)| (embed(a), embed(b))).collect()),
        }
    }

    pub fn discriminant(&self) -> DiscriminantClass {
        let f = &self.field;
        match &self.repr {
            FormRepr::Pairs(p) => {
                let mut d = f.zero();
                for (a, b) in p {
                    d = f.add(&d, &f.mul(a, b));
                }
                let trivial = f.artin_schreier_solve(&d).map(|t| t.flag).unwrap_or(false);
                DiscriminantClass { char2: true, representative: d, trivial }
            }
            FormRepr::Diagonal(d) => {
                let mut r = f.product(d.iter());
                if (d.len() / 2) % 2 == 1 {
                    r = f.neg(&r);
                }
                let trivial = f.is_square(&r).flag;
                DiscriminantClass { char2: false, representative: r, trivial }
            }
        }
    }

    pub fn format(&self) -> String {
        let f = &self.field;
        match &self.repr {
            FormRepr::Diagonal(d) => {
                format!("<{}>", d.iter().map(|a| f.format(a)).collect::<Vec<_>>().join(", "))
            }
            FormRepr::Pairs(p) => {
                if p.is_empty() {
                    return "0".into();
                }
                p.iter()
                    .map(|(a, b)| format!("[{}, {}]", f.format(a), f.format(b)))
                    .collect::<Vec<_>>()
                    .join(" ⊥ ")
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let fd = serde_json::to_value(f.descriptor()).expect("descriptor serialises");
        match &self.repr {
            FormRepr::Diagonal(d) => json!({
                "field": fd,
                "char2": false,
                "diag": d.iter().map(|a| f.format(a)).collect::<Vec<_>>(),
            }),
            FormRepr::Pairs(p) => json!({
                "field": fd,
                "char2": true,
                "pairs": p.iter().map(|(a, b)| vec![f.format(a), f.format(b)]).collect::<Vec<_>>(),
            }),
        }
    }

    /// Reads `{"char2":…,"diag"|"pairs":…}`. The field comes from a
    /// `"field"` key when present, else from `default`, else `Q` (or
    /// `GF(2)` for `"char2": true`).
    pub fn from_json(v: &Value, default: Option<&Field>) -> Result<Self, FormError> {
        let char2 = v.get("char2").and_then(Value::as_bool).unwrap_or(v.get("pairs").is_some());
        let field = match v.get("field") {
            Some(fd) => {
                let d: FieldDescriptor = serde_json::from_value(fd.clone()).map_err(|e| FormError::Json(e.to_string()))?;
                Field::new(d)?
            }
            None => match default {
                Some(f) => f.clone(),
                None if char2 => Field::gf(2, 1),
                None => Field::rationals(),
            },
        };
        if char2 != field.is_char2() {
            return Err(FormError::WrongRepresentation);
        }
        let text = |x: &Value| -> Result<Elem, FormError> {
            match x {
                Value::String(s) => Ok(field.parse(s)?),
                Value::Number(n) => Ok(field.parse(&n.to_string())?),
                other => Err(FormError::Json(format!("expected an element string, got {other}"))),
            }
        };
        if char2 {
            let arr = v.get("pairs").and_then(Value::as_array).ok_or_else(|| FormError::Json("missing \"pairs\"".into()))?;
            let mut pairs = Vec::new();
            for p in arr {
                let pa = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| FormError::Json("pairs must have two entries".into()))?;
                pairs.push((text(&pa[0])?, text(&pa[1])?));
            }
            Self::pairs(&field, pairs)
        } else {
            let arr = v.get("diag").and_then(Value::as_array).ok_or_else(|| FormError::Json("missing \"diag\"".into()))?;
            Self::diagonal(&field, arr.iter().map(text).collect::<Result<_, _>>()?)
        }
    }
}

/// Coefficient matrix of `f ∘ B`, where `B` has the given vectors as
/// columns: `c_ii = q(b_i)`, `c_ij = b(b_i, b_j)` for `i < j`, zero below.
pub fn pullback_coefficients(f: &QuadraticForm, basis: &[Vector]) -> Matrix {
    let field = f.field();
    let n = basis.len();
    let mut m = vec![vec![field.zero(); n]; n];
    for i in 0..n {
        m[i][i] = f.eval(&basis[i]);
        for j in i + 1..n {
            m[i][j] = f.polar(&basis[i], &basis[j]);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn discriminant_examples() {
        let f2 = Field::gf(2, 1);
        let f = QuadraticForm::parse_pairs(&f2, &[("1", "1"), ("1", "0")]).unwrap();
        let d = f.discriminant();
        assert_eq!(d.representative, f2.one());
        assert!(!d.trivial);
        let q = Field::rationals();
        let h = QuadraticForm::parse_diagonal(&q, &["1", "-1"]).unwrap();
        assert_eq!(h.discriminant().representative, q.one());
        assert!(h.discriminant().trivial);
        let f3 = Field::gf(3, 1);
        let d = QuadraticForm::parse_diagonal(&f3, &["1", "1"]).unwrap().discriminant();
        assert_eq!(d.representative, f3.from_i64(2));
        assert!(!d.trivial);
    }

    #[test]
    fn validation() {
        let q = Field::rationals();
        assert_eq!(QuadraticForm::parse_diagonal(&q, &["1"]), Err(FormError::OddDimension(1)));
        assert_eq!(QuadraticForm::parse_diagonal(&q, &["1", "0"]), Err(FormError::SingularEntry(1)));
        assert_eq!(QuadraticForm::parse_pairs(&q, &[("1", "1")]), Err(FormError::WrongRepresentation));
    }

    #[test]
    fn polar_matches_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for field in [Field::gf(2, 2), Field::gf(5, 1), Field::rationals()] {
            let form = if field.is_char2() {
                QuadraticForm::pairs(&field, (0..2).map(|_| (field.sample(&mut rng, 5), field.sample(&mut rng, 5))).collect()).unwrap()
            } else {
                QuadraticForm::diagonal(&field, (0..4).map(|_| field.sample_nonzero(&mut rng, 5)).collect()).unwrap()
            };
            for _ in 0..20 {
                let u: Vec<Elem> = (0..4).map(|_| field.sample(&mut rng, 5)).collect();
                let v: Vec<Elem> = (0..4).map(|_| field.sample(&mut rng, 5)).collect();
                let s: Vec<Elem> = u.iter().zip(&v).map(|(a, b)| field.add(a, b)).collect();
                let expect = field.sub(&field.sub(&form.eval(&s), &form.eval(&u)), &form.eval(&v));
                assert_eq!(form.polar(&u, &v), expect);
                // coefficient matrix reproduces the polynomial
                let c = form.coefficient_matrix();
                let mut acc = field.zero();
                for i in 0..4 {
                    for j in i..4 {
                        acc = field.add(&acc, &field.mul(&c[i][j], &field.mul(&u[i], &u[j])));
                    }
                }
                assert_eq!(acc, form.eval(&u));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let f = Field::rat_func(3, 1);
        let form = QuadraticForm::parse_diagonal(&f, &["1", "t", "t+1", "2"]).unwrap();
        assert_eq!(QuadraticForm::from_json(&form.to_json(), None).unwrap(), form);
        let v: Value = serde_json::from_str(r#"{"char2":true,"pairs":[["1","1"],["1","0"]]}"#).unwrap();
        let g = QuadraticForm::from_json(&v, None).unwrap();
        assert_eq!(g.field(), &Field::gf(2, 1));
        assert_eq!(g.dim(), 4);
    }
}

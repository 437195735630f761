use crate::config::Bounds;
use crate::field::{Elem, Field};
use crate::linalg::{self, independent_subset, scale_vec, unit_vector, Matrix, Vector};
use crate::local;

use super::isotropy::{is_isotropic_with, Isotropy};
use super::{pullback_coefficients, FormError, FormRepr, QuadraticForm};

/// `f ≅ index × H ⊥ anisotropic`, witnessed by `basis`: the columns of the
/// change of basis, in original coordinates. The first `2·index` vectors
/// span the hyperbolic planes (`⟨1, -1⟩` or `[0, 0]`), the rest carry the
/// anisotropic part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittDecomposition {
    pub index: usize,
    pub anisotropic: QuadraticForm,
    pub basis: Vec<Vector>,
}

impl WittDecomposition {
    /// `index × H ⊥ anisotropic`.
    pub fn target(&self) -> QuadraticForm {
        let field = self.anisotropic.field();
        QuadraticForm::hyperbolic(field, self.index)
            .orthogonal_sum(&self.anisotropic)
            .expect("same field and characteristic")
    }

    /// Column matrix of the change of basis.
    pub fn matrix(&self) -> Matrix {
        linalg::transpose(&self.basis)
    }

    /// Re-evaluates `f` through the stored basis and compares coefficients.
    pub fn verify(&self, f: &QuadraticForm) -> bool {
        let field = f.field();
        self.basis.len() == f.dim()
            && linalg::rank(field, &self.basis) == f.dim()
            && pullback_coefficients(f, &self.basis) == self.target().coefficient_matrix()
    }
}

pub fn witt_decompose(f: &QuadraticForm) -> Result<WittDecomposition, FormError> {
    witt_decompose_with(f, &Bounds::default())
}

pub fn witt_decompose_with(f: &QuadraticForm, bounds: &Bounds) -> Result<WittDecomposition, FormError> {
    let field = f.field().clone();
    let n = f.dim();
    let mut hyper: Vec<Vector> = Vec::new();
    // current complement: its form in its own coordinates, and its basis
    let mut g = f.clone();
    let mut rest: Vec<Vector> = (0..n).map(|i| unit_vector(&field, n, i)).collect();
    while g.dim() > 0 {
        let w = match is_isotropic_with(&g, bounds).outcome {
            Isotropy::Anisotropic => break,
            Isotropy::Unknown => return Err(FormError::Undecidable(format!("isotropy of {}", g.format()))),
            Isotropy::Isotropic(None) => {
                return Err(FormError::Undecidable(format!("no isotropic vector of {} within bounds", g.format())))
            }
            Isotropy::Isotropic(Some(w)) => w,
        };
        let v = combine(&field, &w, &rest, n);
        let partner = hyperbolic_partner_in(f, &v, &rest);
        if field.is_char2() {
            hyper.push(v.clone());
            hyper.push(partner.clone());
        } else {
            hyper.push(linalg::add_vec(&field, &v, &partner));
            hyper.push(linalg::sub_vec(&field, &v, &partner));
        }
        let projected: Vec<Vector> = rest
            .iter()
            .map(|u| {
                let mut x = u.clone();
                linalg::axpy(&field, &mut x, &field.neg(&f.polar(u, &partner)), &v);
                linalg::axpy(&field, &mut x, &field.neg(&f.polar(u, &v)), &partner);
                x
            })
            .collect();
        let keep = independent_subset(&field, &projected);
        let span: Vec<Vector> = keep.into_iter().map(|i| projected[i].clone()).collect();
        let (form, basis) = canonicalize(f, span)?;
        g = form;
        rest = basis;
    }
    let index = hyper.len() / 2;
    hyper.extend(rest);
    Ok(WittDecomposition { index, anisotropic: g, basis: hyper })
}

fn combine(field: &Field, w: &[Elem], basis: &[Vector], n: usize) -> Vector {
    let mut v = linalg::zero_vector(field, n);
    for (c, b) in w.iter().zip(basis) {
        linalg::axpy(field, &mut v, c, b);
    }
    v
}

/// Partner of the isotropic `v` inside `span(rest)`, so that later planes
/// stay orthogonal to earlier ones.
fn hyperbolic_partner_in(f: &QuadraticForm, v: &[Elem], rest: &[Vector]) -> Vector {
    let field = f.field();
    let u = rest
        .iter()
        .find_map(|u| {
            let s = f.polar(v, u);
            (!field.is_zero(&s)).then(|| scale_vec(field, &field.inv(&s).unwrap(), u))
        })
        .expect("restriction of a nonsingular form to a complement is nonsingular");
    let qu = f.eval(&u);
    u.iter().zip(v).map(|(x, y)| field.sub(x, &field.mul(&qu, y))).collect()
}

/// Orthogonal basis (char ≠ 2) or symplectic pair basis (char 2) of a
/// nonsingular subspace, with the induced form.
fn canonicalize(f: &QuadraticForm, mut span: Vec<Vector>) -> Result<(QuadraticForm, Vec<Vector>), FormError> {
    let field = f.field().clone();
    let mut out_basis = Vec::new();
    if field.is_char2() {
        let mut pairs = Vec::new();
        while let Some(w1) = span.pop() {
            let pos = span
                .iter()
                .position(|u| !field.is_zero(&f.polar(&w1, u)))
                .expect("nonsingular subspace");
            let u = span.remove(pos);
            let w2 = scale_vec(&field, &field.inv(&f.polar(&w1, &u)).unwrap(), &u);
            for x in span.iter_mut() {
                let c1 = field.neg(&f.polar(x, &w2));
                let c2 = field.neg(&f.polar(x, &w1));
                linalg::axpy(&field, x, &c1, &w1);
                linalg::axpy(&field, x, &c2, &w2);
            }
            pairs.push((f.eval(&w1), f.eval(&w2)));
            out_basis.push(w1);
            out_basis.push(w2);
        }
        return Ok((QuadraticForm::pairs(&field, pairs)?, out_basis));
    }
    let mut diag = Vec::new();
    while !span.is_empty() {
        let w = match span.iter().position(|u| !field.is_zero(&f.eval(u))) {
            Some(i) => span.remove(i),
            None => {
                // totally isotropic for q but not for b: u_i + u_j is anisotropic
                let (i, j) = (0..span.len())
                    .flat_map(|i| (i + 1..span.len()).map(move |j| (i, j)))
                    .find(|&(i, j)| !field.is_zero(&f.polar(&span[i], &span[j])))
                    .expect("nonsingular subspace");
                let w = linalg::add_vec(&field, &span[i], &span[j]);
                span.remove(i);
                w
            }
        };
        let qw = f.eval(&w);
        let two_qw = field.add(&qw, &qw);
        for x in span.iter_mut() {
            let c = field.neg(&field.div(&f.polar(x, &w), &two_qw).unwrap());
            linalg::axpy(&field, x, &c, &w);
        }
        diag.push(qw);
        out_basis.push(w);
    }
    Ok((QuadraticForm::diagonal(&field, diag)?, out_basis))
}

pub fn is_isometric(f: &QuadraticForm, g: &QuadraticForm) -> Result<bool, FormError> {
    is_isometric_with(f, g, &Bounds::default())
}

/// Finite fields and characteristic 2: `f ⊥ -g` hyperbolic. Infinite fields
/// away from characteristic 2: the classification invariants.
pub fn is_isometric_with(f: &QuadraticForm, g: &QuadraticForm, bounds: &Bounds) -> Result<bool, FormError> {
    if f.field() != g.field() {
        return Err(FormError::FieldMismatch);
    }
    if f.dim() != g.dim() {
        return Ok(false);
    }
    let field = f.field();
    if !field.is_finite() && !field.is_char2() {
        return Ok(local::isometric_by_invariants(field, f.diagonal_entries().unwrap(), g.diagonal_entries().unwrap())?);
    }
    let h = f.orthogonal_sum(&g.negated())?;
    let w = witt_decompose_with(&h, bounds)?;
    Ok(2 * w.index == h.dim())
}

/// `F(u)` with `u^2 = δ` or `u^2 + u = δ`, for a finite base field.
#[derive(Debug, Clone)]
pub struct QuadraticExtension {
    pub base: Field,
    pub field: Field,
    pub delta: Elem,
    /// The adjoined root, in `field`.
    pub root: Elem,
    generator_image: u32,
}

impl QuadraticExtension {
    /// Builds `F_{q^2} ⊃ F_q` for a nonsquare (resp. non-℘) `δ`.
    pub fn finite(base: &Field, delta: &Elem) -> Result<Self, FormError> {
        let bf = base.finite_part().filter(|_| base.is_finite()).ok_or_else(|| {
            FormError::Extension(format!("only extensions of finite fields are constructible, not {}", base.descriptor()))
        })?;
        let trivial = if base.is_char2() {
            base.artin_schreier_solve(delta)?.flag
        } else {
            base.is_zero(delta) || base.is_square(delta).flag
        };
        if trivial {
            return Err(FormError::Extension(format!("{} gives a split algebra, not a field", base.format(delta))));
        }
        let field = Field::gf(bf.characteristic(), 2 * bf.degree());
        let ef = field.finite_part().unwrap();
        // image of the base generator: a root of the base modulus in the extension
        let generator_image = if bf.degree() == 1 {
            0
        } else {
            ef.elements()
                .find(|&x| {
                    let mut acc = 0;
                    for &c in bf.modulus().iter().rev() {
                        acc = ef.add(ef.mul(acc, x), ef.from_int(c as i64));
                    }
                    acc == 0
                })
                .expect("finite fields contain their subfields")
        };
        let mut ext = QuadraticExtension { base: base.clone(), field: field.clone(), delta: delta.clone(), root: field.zero(), generator_image };
        let d = ext.embed(delta);
        let root = field
            .enumerate()
            .unwrap()
            .into_iter()
            .find(|u| {
                let s = field.square(u);
                if field.is_char2() {
                    field.add(&s, u) == d
                } else {
                    s == d
                }
            })
            .expect("every element of F_q is a square or ℘-value in F_{q^2}");
        ext.root = root;
        Ok(ext)
    }

    pub fn embed(&self, x: &Elem) -> Elem {
        let bf = self.base.finite_part().unwrap();
        let ef = self.field.finite_part().unwrap();
        let digits = bf.digits(self.base.as_finite(x).expect("base element"));
        let mut acc = 0;
        for &c in digits.iter().rev() {
            acc = ef.add(ef.mul(acc, self.generator_image), ef.from_int(c as i64));
        }
        Elem::Fin(acc)
    }

    /// Whether `δ'` generates the same extension as this one.
    fn consistent_with(&self, delta: &Elem) -> bool {
        let f = &self.base;
        if f.is_char2() {
            f.artin_schreier_solve(&f.add(delta, &self.delta)).map(|t| t.flag).unwrap_or(false)
        } else {
            f.div(delta, &self.delta).map(|r| f.is_square(&r).flag).unwrap_or(false)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionCheck {
    pub discriminant_trivial: bool,
    pub isometric_over_extension: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trivialization {
    pub form: QuadraticForm,
    /// Characteristic 2 with every `a_i = 0`: the input is hyperbolic and is
    /// returned unchanged.
    pub already_hyperbolic: bool,
    pub check: Option<ExtensionCheck>,
}

/// Replaces the first block with nonzero `a_i` by `[a_i, b_i + δ/a_i]`, or
/// the first diagonal entry by `δ^{-1} a_1`. When `ext` is supplied the two
/// postconditions (trivial discriminant, isometry over the extension) are
/// checked; otherwise they are checked over the base field when the
/// discriminant is already trivial.
pub fn trivialize_discriminant(f: &QuadraticForm, ext: Option<&QuadraticExtension>) -> Result<Trivialization, FormError> {
    let field = f.field();
    let delta = f.discriminant().representative;
    if let Some(k) = ext {
        if k.base != *field {
            return Err(FormError::FieldMismatch);
        }
        if !k.consistent_with(&delta) {
            return Err(FormError::Extension(format!(
                "extension is generated by {}, not by the discriminant {}",
                field.format(&k.delta),
                field.format(&delta)
            )));
        }
    }
    let form = match f.repr() {
        FormRepr::Pairs(p) => {
            let Some(i) = p.iter().position(|(a, _)| !field.is_zero(a)) else {
                return Ok(Trivialization { form: f.clone(), already_hyperbolic: true, check: None });
            };
            let mut q = p.clone();
            let (a, b) = &p[i];
            q[i] = (a.clone(), field.add(b, &field.div(&delta, a).unwrap()));
            QuadraticForm::pairs(field, q)?
        }
        FormRepr::Diagonal(d) => {
            if d.is_empty() {
                return Ok(Trivialization { form: f.clone(), already_hyperbolic: true, check: None });
            }
            let mut e = d.clone();
            e[0] = field.div(&d[0], &delta).unwrap();
            QuadraticForm::diagonal(field, e)?
        }
    };
    let check = match ext {
        Some(k) => {
            let fk = f.extend_to(&k.field, |x| k.embed(x))?;
            let gk = form.extend_to(&k.field, |x| k.embed(x))?;
            Some(ExtensionCheck {
                discriminant_trivial: form.discriminant().trivial,
                isometric_over_extension: is_isometric(&fk, &gk)?,
            })
        }
        None if f.discriminant().trivial => Some(ExtensionCheck {
            discriminant_trivial: form.discriminant().trivial,
            isometric_over_extension: is_isometric(f, &form)?,
        }),
        None => None,
    };
    Ok(Trivialization { form, already_hyperbolic: false, check })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn decomposition_examples() {
        let h = QuadraticForm::parse_diagonal(&q(), &["1", "-1"]).unwrap();
        let w = witt_decompose(&h).unwrap();
        assert_eq!((w.index, w.anisotropic.dim()), (1, 0));
        assert!(w.verify(&h));

        let h2 = QuadraticForm::parse_diagonal(&q(), &["1", "1", "-1", "-1"]).unwrap();
        let w = witt_decompose(&h2).unwrap();
        assert_eq!((w.index, w.anisotropic.dim()), (2, 0));
        assert!(w.verify(&h2));

        let a = QuadraticForm::parse_diagonal(&q(), &["1", "1", "1", "1"]).unwrap();
        let w = witt_decompose(&a).unwrap();
        assert_eq!(w.index, 0);
        assert_eq!(w.anisotropic, a);
        assert!(w.verify(&a));

        let f4 = Field::gf(2, 2);
        let g = QuadraticForm::parse_pairs(&f4, &[("1", "1"), ("a", "1"), ("1", "a")]).unwrap();
        let w = witt_decompose(&g).unwrap();
        assert!(w.verify(&g));
        assert_eq!(2 * w.index + w.anisotropic.dim(), 6);
    }

    #[test]
    fn isometry_examples() {
        let f5 = Field::gf(5, 1);
        let a = QuadraticForm::parse_diagonal(&f5, &["1", "1"]).unwrap();
        let b = QuadraticForm::parse_diagonal(&f5, &["2", "2"]).unwrap();
        assert!(is_isometric(&a, &b).unwrap());
        assert!(is_isometric(&a, &a).unwrap());
        let f3 = Field::gf(3, 1);
        let c = QuadraticForm::parse_diagonal(&f3, &["1", "1"]).unwrap();
        let d = QuadraticForm::parse_diagonal(&f3, &["1", "2"]).unwrap();
        assert!(!is_isometric(&c, &d).unwrap());
        assert_eq!(is_isometric(&a, &c), Err(FormError::FieldMismatch));
        let x = QuadraticForm::parse_diagonal(&q(), &["1", "1"]).unwrap();
        let y = QuadraticForm::parse_diagonal(&q(), &["2", "2"]).unwrap();
        let z = QuadraticForm::parse_diagonal(&q(), &["1", "2"]).unwrap();
        assert!(is_isometric(&x, &y).unwrap());
        assert!(!is_isometric(&x, &z).unwrap());
    }

    #[test]
    fn trivialization_examples() {
        let f2 = Field::gf(2, 1);
        let f = QuadraticForm::parse_pairs(&f2, &[("1", "1")]).unwrap();
        let k = QuadraticExtension::finite(&f2, &f.discriminant().representative).unwrap();
        let t = trivialize_discriminant(&f, Some(&k)).unwrap();
        assert_eq!(t.form, QuadraticForm::parse_pairs(&f2, &[("1", "0")]).unwrap());
        assert_eq!(t.check, Some(ExtensionCheck { discriminant_trivial: true, isometric_over_extension: true }));

        let f5 = Field::gf(5, 1);
        let f = QuadraticForm::parse_diagonal(&f5, &["2", "1"]).unwrap();
        assert_eq!(f.discriminant().representative, f5.from_i64(3));
        let k = QuadraticExtension::finite(&f5, &f5.from_i64(3)).unwrap();
        let t = trivialize_discriminant(&f, Some(&k)).unwrap();
        assert_eq!(t.form, QuadraticForm::parse_diagonal(&f5, &["4", "1"]).unwrap());
        assert_eq!(t.check, Some(ExtensionCheck { discriminant_trivial: true, isometric_over_extension: true }));

        let f7 = Field::gf(7, 1);
        let k7 = QuadraticExtension::finite(&f7, &f7.from_i64(3)).unwrap();
        let g = QuadraticForm::parse_diagonal(&f7, &["1", "6"]).unwrap();
        assert!(matches!(trivialize_discriminant(&g, Some(&k7)), Err(FormError::Extension(_))));

        let zero = QuadraticForm::parse_pairs(&f2, &[("0", "1")]).unwrap();
        assert!(trivialize_discriminant(&zero, None).unwrap().already_hyperbolic);
    }

    #[test]
    fn extension_embedding_is_a_homomorphism() {
        let f9 = Field::gf(3, 2);
        let g = f9.constant(f9.finite_part().unwrap().primitive());
        let k = QuadraticExtension::finite(&f9, &g).unwrap();
        let els = f9.enumerate().unwrap();
        for x in &els {
            for y in &els {
                assert_eq!(k.embed(&f9.mul(x, y)), k.field.mul(&k.embed(x), &k.embed(y)));
                assert_eq!(k.embed(&f9.add(x, y)), k.field.add(&k.embed(x), &k.embed(y)));
            }
        }
    }
}

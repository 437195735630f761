//! Exact coefficient fields: `Q`, `F_{p^k}`, `F_q(t)` and `F_q((t))`.
//!
//! A [`Field`] is a cheap, shareable handle; all arithmetic goes through it
//! and acts on plain [`Elem`] values. Laurent-series elements are rational
//! functions read through their `t`-adic expansion, so every element has a
//! finite exact representation.

mod finite;
mod parse;
pub mod poly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use finite::{FiniteField, MAX_FIELD_SIZE};
use poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("invalid field descriptor: {0}")]
    Descriptor(String),
    #[error("cannot parse element {input:?} at offset {offset}: {reason}")]
    Parse {
        input: String,
        offset: usize,
        reason: String,
    },
    #[error("operation requires {required}, field is {actual}")]
    WrongField { required: &'static str, actual: String },
    #[error("valuation of zero is infinite")]
    ZeroValuation,
    #[error("division by zero")]
    DivisionByZero,
}

/// Serialisable description of a coefficient field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldDescriptor {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "GF")]
    Finite { p: u32, k: u32 },
    RatFunc { p: u32, k: u32, var: String },
    Laurent { p: u32, k: u32, var: String },
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::Finite { p, k } => write!(f, "GF({p}^{k})"),
            FieldDescriptor::RatFunc { p, k, var } => write!(f, "GF({p}^{k})({var})"),
            FieldDescriptor::Laurent { p, k, var } => write!(f, "GF({p}^{k})(({var}))"),
        }
    }
}

/// Reduced rational function over a finite field: `gcd(num, den) = 1`,
/// `den` monic, zero is `0/1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Elem {
    Rat(BigRational),
    Fin(u32),
    Fun(RatFn),
}

#[derive(Debug)]
enum Inner {
    Rationals,
    Finite(FiniteField),
    Function { base: FiniteField, var: String, laurent: bool },
}

#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
    descriptor: FieldDescriptor,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor == other.descriptor
    }
}
impl Eq for Field {}

/// Result of a squareness test. Laurent-series squares need not have a
/// finite witness, so `witness` may be absent even when `flag` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareTest {
    pub flag: bool,
    pub witness: Option<Elem>,
}

/// Result of solving `u^2 + u = c`; same witness caveat as [`SquareTest`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtinSchreierTest {
    pub flag: bool,
    pub witness: Option<Elem>,
}

impl Field {
    pub fn new(descriptor: FieldDescriptor) -> Result<Self, FieldError> {
        let inner = match &descriptor {
            FieldDescriptor::Rationals => Inner::Rationals,
            FieldDescriptor::Finite { p, k } => {
                Inner::Finite(FiniteField::new(*p, *k).map_err(FieldError::Descriptor)?)
            }
            FieldDescriptor::RatFunc { p, k, var } | FieldDescriptor::Laurent { p, k, var } => {
                if var.is_empty() || !var.chars().all(|c| c.is_ascii_alphabetic()) || var == "a" {
                    return Err(FieldError::Descriptor(format!("bad variable name {var:?}")));
                }
                Inner::Function {
                    base: FiniteField::new(*p, *k).map_err(FieldError::Descriptor)?,
                    var: var.clone(),
                    laurent: matches!(descriptor, FieldDescriptor::Laurent { .. }),
                }
            }
        };
        Ok(Field {
            inner: Arc::new(inner),
            descriptor,
        })
    }

    pub fn rationals() -> Self {
        Self::new(FieldDescriptor::Rationals).unwrap()
    }

    pub fn gf(p: u32, k: u32) -> Self {
        Self::new(FieldDescriptor::Finite { p, k }).expect("valid finite field")
    }

    pub fn rat_func(p: u32, k: u32) -> Self {
        Self::new(FieldDescriptor::RatFunc { p, k, var: "t".into() }).expect("valid function field")
    }

    pub fn laurent(p: u32, k: u32) -> Self {
        Self::new(FieldDescriptor::Laurent { p, k, var: "t".into() }).expect("valid Laurent field")
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.descriptor
    }

    pub fn characteristic(&self) -> u32 {
        match &*self.inner {
            Inner::Rationals => 0,
            Inner::Finite(f) => f.characteristic(),
            Inner::Function { base, .. } => base.characteristic(),
        }
    }

    pub fn is_char2(&self) -> bool {
        self.characteristic() == 2
    }

    pub fn is_finite(&self) -> bool {
        matches!(&*self.inner, Inner::Finite(_))
    }

    pub fn is_rationals(&self) -> bool {
        matches!(&*self.inner, Inner::Rationals)
    }

    pub fn is_rational_functions(&self) -> bool {
        matches!(&*self.inner, Inner::Function { laurent: false, .. })
    }

    pub fn is_laurent(&self) -> bool {
        matches!(&*self.inner, Inner::Function { laurent: true, .. })
    }

    /// The finite field itself, or the constant field of `F_q(t)` / `F_q((t))`.
    pub fn finite_part(&self) -> Option<&FiniteField> {
        match &*self.inner {
            Inner::Rationals => None,
            Inner::Finite(f) => Some(f),
            Inner::Function { base, .. } => Some(base),
        }
    }

    pub fn order(&self) -> Option<u64> {
        match &*self.inner {
            Inner::Finite(f) => Some(f.order() as u64),
            _ => None,
        }
    }

    pub fn var(&self) -> Option<&str> {
        match &*self.inner {
            Inner::Function { var, .. } => Some(var),
            _ => None,
        }
    }

    // ----- constructors -------------------------------------------------

    pub fn zero(&self) -> Elem {
        match &*self.inner {
            Inner::Rationals => Elem::Rat(BigRational::zero()),
            Inner::Finite(_) => Elem::Fin(0),
            Inner::Function { .. } => Elem::Fun(RatFn { num: vec![], den: vec![1] }),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match &*self.inner {
            Inner::Rationals => Elem::Rat(BigRational::from_integer(BigInt::from(n))),
            Inner::Finite(f) => Elem::Fin(f.from_int(n)),
            Inner::Function { base, .. } => Elem::Fun(RatFn {
                num: poly::constant(base.from_int(n)),
                den: vec![1],
            }),
        }
    }

    pub fn from_ratio(&self, n: i64, d: i64) -> Elem {
        self.div(&self.from_i64(n), &self.from_i64(d)).expect("nonzero denominator")
    }

    /// Element of `F_q(t)` from numerator and denominator polynomials.
    pub fn from_polys(&self, num: Poly, den: Poly) -> Result<Elem, FieldError> {
        match &*self.inner {
            Inner::Function { base, .. } => {
                if den.is_empty() {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(Elem::Fun(reduce_ratfn(base, num, den)))
            }
            _ => Err(self.wrong("a rational-function field")),
        }
    }

    pub fn from_poly(&self, num: Poly) -> Elem {
        self.from_polys(num, vec![1]).expect("function field")
    }

    /// Lifts a constant-field element into `F_q`, `F_q(t)` or `F_q((t))`.
    pub fn constant(&self, c: u32) -> Elem {
        match &*self.inner {
            Inner::Rationals => panic!("Q has no finite constant field"),
            Inner::Finite(_) => Elem::Fin(c),
            Inner::Function { .. } => Elem::Fun(RatFn { num: poly::constant(c), den: vec![1] }),
        }
    }

    /// The transcendental `t` of a function field.
    pub fn t(&self) -> Elem {
        self.from_poly(vec![0, 1])
    }

    fn wrong(&self, required: &'static str) -> FieldError {
        FieldError::WrongField {
            required,
            actual: self.descriptor.to_string(),
        }
    }

    // ----- arithmetic -------------------------------------------------------

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_zero(),
            Elem::Fin(x) => *x == 0,
            Elem::Fun(r) => r.num.is_empty(),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&*self.inner, a, b) {
            (Inner::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (Inner::Finite(f), Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(f.add(*x, *y)),
            (Inner::Function { base, .. }, Elem::Fun(x), Elem::Fun(y)) => {
                if x.den == y.den {
                    return Elem::Fun(reduce_ratfn(base, poly::add(base, &x.num, &y.num), x.den.clone()));
                }
                let num = poly::add(base, &poly::mul(base, &x.num, &y.den), &poly::mul(base, &y.num, &x.den));
                Elem::Fun(reduce_ratfn(base, num, poly::mul(base, &x.den, &y.den)))
            }
            _ => panic!("element does not belong to {}", self.descriptor),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&*self.inner, a) {
            (Inner::Rationals, Elem::Rat(x)) => Elem::Rat(-x),
            (Inner::Finite(f), Elem::Fin(x)) => Elem::Fin(f.neg(*x)),
            (Inner::Function { base, .. }, Elem::Fun(x)) => Elem::Fun(RatFn {
                num: poly::neg(base, &x.num),
                den: x.den.clone(),
            }),
            _ => panic!("element does not belong to {}", self.descriptor),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&*self.inner, a, b) {
            (Inner::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Inner::Finite(f), Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(f.mul(*x, *y)),
            (Inner::Function { base, .. }, Elem::Fun(x), Elem::Fun(y)) => {
                if x.num.is_empty() || y.num.is_empty() {
                    return self.zero();
                }
                let num = poly::mul(base, &x.num, &y.num);
                let den = poly::mul(base, &x.den, &y.den);
                Elem::Fun(reduce_ratfn(base, num, den))
            }
            _ => panic!("element does not belong to {}", self.descriptor),
        }
    }

    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (&*self.inner, a) {
            (Inner::Rationals, Elem::Rat(x)) => Elem::Rat(x.recip()),
            (Inner::Finite(f), Elem::Fin(x)) => Elem::Fin(f.inv(*x)?),
            (Inner::Function { base, .. }, Elem::Fun(x)) => {
                Elem::Fun(reduce_ratfn(base, x.den.clone(), x.num.clone()))
            }
            _ => panic!("element does not belong to {}", self.descriptor),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        Some(self.mul(a, &self.inv(b)?))
    }

    pub fn square(&self, a: &Elem) -> Elem {
        self.mul(a, a)
    }

    /// `a^e` for any integer exponent; `None` for a negative power of zero.
    pub fn pow(&self, a: &Elem, e: i64) -> Option<Elem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.one();
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            n >>= 1;
        }
        Some(acc)
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Elem>) -> Elem {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a Elem>) -> Elem {
        items.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    // ----- number-theoretic tests --------------------------------------------

    /// Decides whether `c` is a square, with a root when one is finite.
    pub fn is_square(&self, c: &Elem) -> SquareTest {
        if self.is_zero(c) {
            return SquareTest { flag: true, witness: Some(self.zero()) };
        }
        match (&*self.inner, c) {
            (Inner::Rationals, Elem::Rat(x)) => {
                let root = (|| {
                    if x.is_negative() {
                        return None;
                    }
                    let n = exact_sqrt(x.numer())?;
                    let d = exact_sqrt(x.denom())?;
                    Some(Elem::Rat(BigRational::new(n, d)))
                })();
                SquareTest { flag: root.is_some(), witness: root }
            }
            (Inner::Finite(f), Elem::Fin(x)) => {
                let root = f.sqrt(*x).map(Elem::Fin);
                SquareTest { flag: root.is_some(), witness: root }
            }
            (Inner::Function { base, laurent, .. }, Elem::Fun(r)) => {
                let global = ratfn_sqrt(base, r).map(Elem::Fun);
                if global.is_some() || !laurent {
                    return SquareTest { flag: global.is_some(), witness: global };
                }
                // F_q((t)): t^v u is a square iff v is even and u(0) is a square
                // (Hensel; characteristic 2 squares are F_q((t^2))).
                if base.characteristic() == 2 {
                    return SquareTest { flag: false, witness: None };
                }
                let v = self.t_adic_valuation(c).expect("nonzero");
                let unit = self.t_adic_unit_residue(c).expect("nonzero");
                SquareTest { flag: v % 2 == 0 && base.is_square(unit), witness: None }
            }
            _ => panic!("element does not belong to {}", self.descriptor),
        }
    }

    /// Decides whether `c = u^2 + u` for some `u` (characteristic 2 only).
    pub fn artin_schreier_solve(&self, c: &Elem) -> Result<ArtinSchreierTest, FieldError> {
        if !self.is_char2() {
            return Err(self.wrong("characteristic 2"));
        }
        if self.is_zero(c) {
            return Ok(ArtinSchreierTest { flag: true, witness: Some(self.zero()) });
        }
        Ok(match (&*self.inner, c) {
            (Inner::Finite(f), Elem::Fin(x)) => {
                let root = f.artin_schreier_root(*x).map(Elem::Fin);
                ArtinSchreierTest { flag: root.is_some(), witness: root }
            }
            (Inner::Function { base, laurent: false, .. }, Elem::Fun(r)) => {
                let root = ratfn_artin_schreier(base, r).map(Elem::Fun);
                ArtinSchreierTest { flag: root.is_some(), witness: root }
            }
            (Inner::Function { base, laurent: true, .. }, Elem::Fun(r)) => {
                if let Some(u) = ratfn_artin_schreier(base, r) {
                    return Ok(ArtinSchreierTest { flag: true, witness: Some(Elem::Fun(u)) });
                }
                ArtinSchreierTest { flag: laurent_in_wp(self, base, c), witness: None }
            }
            _ => unreachable!("characteristic 2 fields are finite or function fields"),
        })
    }

    /// Exact `t`-adic valuation for `F_q(t)` and `F_q((t))`.
    pub fn t_adic_valuation(&self, c: &Elem) -> Result<i64, FieldError> {
        match (&*self.inner, c) {
            (Inner::Function { .. }, Elem::Fun(r)) => {
                if r.num.is_empty() {
                    return Err(FieldError::ZeroValuation);
                }
                Ok(low_order(&r.num) as i64 - low_order(&r.den) as i64)
            }
            _ => Err(self.wrong("a rational-function or Laurent-series field")),
        }
    }

    /// Residue of `c / t^{v(c)}` at `t = 0`, a nonzero constant.
    pub fn t_adic_unit_residue(&self, c: &Elem) -> Result<u32, FieldError> {
        match (&*self.inner, c) {
            (Inner::Function { base, .. }, Elem::Fun(r)) => {
                if r.num.is_empty() {
                    return Err(FieldError::ZeroValuation);
                }
                let n = r.num[low_order(&r.num)];
                let d = r.den[low_order(&r.den)];
                Ok(base.mul(n, base.inv(d).unwrap()))
            }
            _ => Err(self.wrong("a rational-function or Laurent-series field")),
        }
    }

    /// The first `count` coefficients of the `t`-adic expansion of `c`,
    /// starting at `t^{v(c)}`.
    pub fn laurent_coefficients(&self, c: &Elem, count: usize) -> Result<(i64, Vec<u32>), FieldError> {
        let v = self.t_adic_valuation(c)?;
        let (base, r) = match (&*self.inner, c) {
            (Inner::Function { base, .. }, Elem::Fun(r)) => (base, r),
            _ => unreachable!(),
        };
        let num: Vec<u32> = r.num[low_order(&r.num)..].to_vec();
        let den: Vec<u32> = r.den[low_order(&r.den)..].to_vec();
        let d0_inv = base.inv(den[0]).unwrap();
        let mut out = Vec::with_capacity(count);
        let mut rem: Vec<u32> = num.clone();
        rem.resize(rem.len().max(count + den.len()), 0);
        for i in 0..count {
            let c_i = base.mul(rem[i], d0_inv);
            out.push(c_i);
            if c_i != 0 {
                for (j, &dj) in den.iter().enumerate() {
                    if i + j < rem.len() {
                        rem[i + j] = base.sub(rem[i + j], base.mul(c_i, dj));
                    }
                }
            }
        }
        Ok((v, out))
    }

    // ----- enumeration and sampling ------------------------------------------

    /// All elements of a finite field in canonical order.
    pub fn enumerate(&self) -> Option<Vec<Elem>> {
        match &*self.inner {
            Inner::Finite(f) => Some(f.elements().map(Elem::Fin).collect()),
            _ => None,
        }
    }

    /// Elements ordered by ascending height/degree: all of `F_q`; fractions
    /// `n/d` with `max(|n|, d) <= bound` for `Q`; polynomials of degree
    /// `<= bound` for function fields. Zero comes first.
    pub fn candidates(&self, bound: u32) -> Vec<Elem> {
        match &*self.inner {
            Inner::Finite(f) => f.elements().map(Elem::Fin).collect(),
            Inner::Rationals => {
                let mut out = vec![self.zero()];
                for h in 1..=bound as i64 {
                    // new fractions of height exactly h
                    for d in 1..=h {
                        for n in [h, -h] {
                            if n.gcd(&d) == 1 {
                                out.push(self.from_ratio(n, d));
                            }
                        }
                    }
                    for n in 1..h {
                        if n.gcd(&h) == 1 {
                            out.push(self.from_ratio(n, h));
                            out.push(self.from_ratio(-n, h));
                        }
                    }
                }
                out
            }
            Inner::Function { base, .. } => {
                let mut out = vec![self.zero()];
                for d in 0..=bound as usize {
                    for m in poly::monic_of_degree(base, d) {
                        for c in 1..base.order() {
                            out.push(self.from_poly(poly::scale(base, &m, c)));
                        }
                    }
                }
                out
            }
        }
    }

    /// Coordinates for homogeneous searches: integers in `[-bound, bound]`
    /// for `Q`, otherwise as [`Field::candidates`].
    pub fn search_coordinates(&self, bound: u32) -> Vec<Elem> {
        match &*self.inner {
            Inner::Rationals => {
                let mut out = vec![self.zero()];
                for n in 1..=bound as i64 {
                    out.push(self.from_i64(n));
                    out.push(self.from_i64(-n));
                }
                out
            }
            _ => self.candidates(bound),
        }
    }

    /// Random element: height `<= bound` for `Q`, numerator and denominator
    /// of degree `<= bound` for function fields.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, bound: u32) -> Elem {
        match &*self.inner {
            Inner::Rationals => {
                let b = bound.max(1) as i64;
                let n = rng.gen_range(-b..=b);
                let d = rng.gen_range(1..=b);
                self.from_ratio(n, d)
            }
            Inner::Finite(f) => Elem::Fin(rng.gen_range(0..f.order())),
            Inner::Function { base, .. } => {
                let num = random_poly(base, rng, bound as usize);
                let mut den = random_poly(base, rng, bound as usize);
                if den.is_empty() {
                    den = vec![1];
                }
                Elem::Fun(reduce_ratfn(base, num, den))
            }
        }
    }

    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, bound: u32) -> Elem {
        loop {
            let x = self.sample(rng, bound);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    /// Random polynomial (numerator only) for function fields; same as
    /// [`Field::sample`] otherwise.
    pub fn sample_integral<R: Rng + ?Sized>(&self, rng: &mut R, bound: u32) -> Elem {
        match &*self.inner {
            Inner::Rationals => {
                let b = bound.max(1) as i64;
                self.from_i64(rng.gen_range(-b..=b))
            }
            Inner::Function { base, .. } => self.from_poly(random_poly(base, rng, bound as usize)),
            Inner::Finite(_) => self.sample(rng, bound),
        }
    }

    // ----- text -------------------------------------------------------------

    pub fn parse(&self, s: &str) -> Result<Elem, FieldError> {
        parse::parse_element(self, s)
    }

    pub fn format(&self, a: &Elem) -> String {
        match (&*self.inner, a) {
            (Inner::Rationals, Elem::Rat(x)) => {
                if x.is_integer() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            (Inner::Finite(f), Elem::Fin(x)) => format_constant(f, *x),
            (Inner::Function { base, var, .. }, Elem::Fun(r)) => {
                let num = format_poly(base, &r.num, var);
                if r.den == [1] {
                    num
                } else {
                    let den = format_poly(base, &r.den, var);
                    format!("{}/{}", wrap(&num), wrap(&den))
                }
            }
            _ => panic!("element does not belong to {}", self.descriptor),
        }
    }

    // ----- accessors used by the local-global engine ----------------------

    pub fn as_rational(&self, a: &Elem) -> Option<BigRational> {
        match a {
            Elem::Rat(r) => Some(r.clone()),
            _ => None,
        }
    }

    pub fn as_ratfn<'a>(&self, a: &'a Elem) -> Option<&'a RatFn> {
        match a {
            Elem::Fun(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_finite(&self, a: &Elem) -> Option<u32> {
        match a {
            Elem::Fin(x) => Some(*x),
            _ => None,
        }
    }
}

fn wrap(s: &str) -> String {
    if s.contains('+') || s.contains('*') || s.contains('/') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

fn format_constant(f: &FiniteField, x: u32) -> String {
    if f.degree() == 1 {
        return x.to_string();
    }
    let d = f.digits(x);
    let terms: Vec<String> = d
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "a".to_string(),
            (1, c) => format!("{c}*a"),
            (i, 1) => format!("a^{i}"),
            (i, c) => format!("{c}*a^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn format_poly(f: &FiniteField, p: &[u32], var: &str) -> String {
    let terms: Vec<String> = p
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let cs = format_constant(f, c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            match i {
                0 => cs,
                _ => {
                    let mon = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                    if c == 1 {
                        mon
                    } else {
                        format!("{cs}*{mon}")
                    }
                }
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn low_order(p: &[u32]) -> usize {
    p.iter().position(|&c| c != 0).unwrap_or(0)
}

fn random_poly<R: Rng + ?Sized>(f: &FiniteField, rng: &mut R, max_deg: usize) -> Poly {
    let d = rng.gen_range(0..=max_deg);
    let mut v: Poly = (0..=d).map(|_| rng.gen_range(0..f.order())).collect();
    poly::trim(&mut v);
    v
}

pub(crate) fn reduce_ratfn(f: &FiniteField, num: Poly, den: Poly) -> RatFn {
    let mut num = num;
    poly::trim(&mut num);
    if num.is_empty() {
        return RatFn { num: vec![], den: vec![1] };
    }
    let g = poly::gcd(f, &num, &den);
    let (mut n, mut d) = if g.len() > 1 {
        (poly::divrem(f, &num, &g).0, poly::divrem(f, &den, &g).0)
    } else {
        (num, den)
    };
    let lc = poly::leading(&d);
    if lc != 1 {
        let inv = f.inv(lc).unwrap();
        n = poly::scale(f, &n, inv);
        d = poly::scale(f, &d, inv);
    }
    RatFn { num: n, den: d }
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

fn ratfn_sqrt(f: &FiniteField, r: &RatFn) -> Option<RatFn> {
    let lc = poly::leading(&r.num);
    let lc_root = f.sqrt(lc)?;
    let monic_num = poly::monic(f, &r.num);
    let sn = poly::sqrt(f, &monic_num)?;
    let sd = poly::sqrt(f, &r.den)?;
    Some(reduce_ratfn(f, poly::scale(f, &sn, lc_root), sd))
}

/// Solves `u^2 + u = c` in `F_{2^k}(t)`. Writing `u = A/B` in lowest terms
/// forces `B^2 = den(c)` and `A^2 + A B = num(c)`, which is `F_2`-linear in
/// the coefficients of `A`.
fn ratfn_artin_schreier(f: &FiniteField, c: &RatFn) -> Option<RatFn> {
    let b = poly::sqrt(f, &c.den)?;
    let deg_b = b.len() - 1;
    let deg_n = c.num.len().saturating_sub(1);
    let bound = deg_b.max(deg_n / 2);
    let k = f.degree() as usize;
    let out_len = (2 * bound + 1).max(bound + deg_b + 1).max(c.num.len());
    let rows = out_len * k;
    let cols = (bound + 1) * k;

    let to_bits = |p: &Poly| -> Vec<u8> {
        let mut v = vec![0u8; rows];
        for (i, &coef) in p.iter().enumerate() {
            for (j, d) in f.digits(coef).into_iter().enumerate() {
                v[i * k + j] = d as u8;
            }
        }
        v
    };
    let mut columns = Vec::with_capacity(cols);
    for i in 0..=bound {
        for j in 0..k {
            let a = poly::monomial(1 << j, i);
            let img = poly::add(f, &poly::mul(f, &a, &a), &poly::mul(f, &a, &b));
            columns.push(to_bits(&img));
        }
    }
    let target = to_bits(&c.num);
    let sol = solve_gf2(&columns, &target, rows)?;
    let mut a = vec![0u32; bound + 1];
    for i in 0..=bound {
        let bits: Vec<u32> = (0..k).map(|j| sol[i * k + j] as u32).collect();
        a[i] = f.from_digits(&bits);
    }
    poly::trim(&mut a);
    let u = reduce_ratfn(f, a, b);
    Some(u)
}

fn solve_gf2(columns: &[Vec<u8>], target: &[u8], rows: usize) -> Option<Vec<u8>> {
    let cols = columns.len();
    // augmented row-major matrix
    let mut m: Vec<Vec<u8>> = (0..rows)
        .map(|r| {
            let mut row: Vec<u8> = columns.iter().map(|c| c[r]).collect();
            row.push(target[r]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] == 1) else { continue };
        m.swap(r, pr);
        for i in 0..rows {
            if i != r && m[i][c] == 1 {
                let src = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| row[cols] == 1) {
        return None;
    }
    let mut sol = vec![0u8; cols];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = m[i][cols];
    }
    Some(sol)
}

/// Membership of `c` in `℘(F_q((t)))`, characteristic 2. Positive-valuation
/// terms are always in `℘`; `s t^{-2m}` is congruent to `sqrt(s) t^{-m}`;
/// odd negative exponents obstruct; the constant term must lie in `℘(F_q)`.
fn laurent_in_wp(field: &Field, f: &FiniteField, c: &Elem) -> bool {
    let v = field.t_adic_valuation(c).expect("nonzero");
    if v > 0 {
        return true;
    }
    let count = (-v) as usize + 1;
    let (_, coeffs) = field.laurent_coefficients(c, count).expect("function field");
    // principal[e] is the coefficient of t^{-e}
    let mut principal = vec![0u32; count];
    for (i, &ci) in coeffs.iter().enumerate() {
        principal[(-v - i as i64) as usize] = ci;
    }
    for e in (1..count).rev() {
        let a = principal[e];
        if a == 0 {
            continue;
        }
        if e % 2 == 1 {
            return false;
        }
        principal[e / 2] = f.add(principal[e / 2], f.sqrt(a).unwrap());
        principal[e] = 0;
    }
    f.artin_schreier_root(principal[0]).is_some()
}

/// Integer value of a rational when it is one and fits in `i64`.
pub fn rational_to_i64(r: &BigRational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

impl Elem {
    pub fn rational(n: i64) -> Elem {
        Elem::Rat(BigRational::from_integer(BigInt::from(n)))
    }
}

impl Default for Field {
    fn default() -> Self {
        Field::rationals()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn square_examples() {
        let q = Field::rationals();
        let t = q.is_square(&q.one());
        assert!(t.flag);
        assert_eq!(t.witness, Some(q.one()));
        let f3 = Field::gf(3, 1);
        assert!(!f3.is_square(&f3.from_i64(2)).flag);
        let rf = Field::rat_func(3, 1);
        assert!(!rf.is_square(&rf.t()).flag);
        // cross-check t: no polynomial of degree <= 3 squares to t times a square
        for c in rf.candidates(3) {
            assert_ne!(rf.square(&c), rf.t());
        }
        assert!(q.is_square(&q.from_ratio(9, 4)).flag);
        assert!(!q.is_square(&q.from_i64(-4)).flag);
    }

    #[test]
    fn artin_schreier_examples() {
        let f2 = Field::gf(2, 1);
        assert!(f2.artin_schreier_solve(&f2.zero()).unwrap().flag);
        assert!(!f2.artin_schreier_solve(&f2.one()).unwrap().flag);
        let f4 = Field::gf(2, 2);
        let r = f4.artin_schreier_solve(&f4.one()).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(f4.add(&f4.square(&w), &w), f4.one());
        assert!(Field::gf(3, 1).artin_schreier_solve(&Field::gf(3, 1).one()).is_err());
    }

    #[test]
    fn artin_schreier_rational_functions() {
        let f = Field::rat_func(2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let u = f.sample(&mut rng, 3);
            let c = f.add(&f.square(&u), &u);
            let r = f.artin_schreier_solve(&c).unwrap();
            assert!(r.flag);
            let w = r.witness.unwrap();
            assert_eq!(f.add(&f.square(&w), &w), c);
        }
        // t is not of the form u^2 + u: odd degree pole/zero structure
        assert!(!f.artin_schreier_solve(&f.t()).unwrap().flag);
        assert!(!f.artin_schreier_solve(&f.one()).unwrap().flag);
    }

    #[test]
    fn laurent_artin_schreier() {
        let f = Field::laurent(2, 1);
        // t is in ℘ over F_2((t)): u = t + t^2 + t^4 + ...
        assert!(f.artin_schreier_solve(&f.t()).unwrap().flag);
        let t_inv = f.inv(&f.t()).unwrap();
        assert!(!f.artin_schreier_solve(&t_inv).unwrap().flag);
        let t_inv2 = f.square(&t_inv);
        // t^-2 ≡ t^-1, not in ℘
        assert!(!f.artin_schreier_solve(&t_inv2).unwrap().flag);
        // t^-2 + t^-1 is in ℘
        assert!(f.artin_schreier_solve(&f.add(&t_inv2, &t_inv)).unwrap().flag);
    }

    #[test]
    fn valuations() {
        let f = Field::rat_func(3, 1);
        let c = f.parse("t^2+t").unwrap();
        assert_eq!(f.t_adic_valuation(&c).unwrap(), 1);
        let c = f.parse("1/t").unwrap();
        assert_eq!(f.t_adic_valuation(&c).unwrap(), -1);
        let q = Field::rationals();
        assert!(q.t_adic_valuation(&q.parse("5/7").unwrap()).is_err());
        assert_eq!(f.t_adic_valuation(&f.zero()), Err(FieldError::ZeroValuation));
    }

    #[test]
    fn laurent_squares() {
        let f = Field::laurent(3, 1);
        // 1 + t is a square in F_3((t)) but not in F_3(t)
        let c = f.parse("1+t").unwrap();
        let s = f.is_square(&c);
        assert!(s.flag);
        assert!(s.witness.is_none());
        assert!(!f.is_square(&f.parse("2+t").unwrap()).flag);
        assert!(!f.is_square(&f.t()).flag);
        assert!(f.is_square(&f.parse("t^2*(1+t)").unwrap()).flag);
    }

    #[test]
    fn enumeration_sizes() {
        for (p, k) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (5, 2)] {
            let f = Field::gf(p, k);
            let all = f.enumerate().unwrap();
            let set: std::collections::HashSet<_> = all.iter().cloned().collect();
            assert_eq!(set.len(), p.pow(k) as usize);
        }
    }

    #[test]
    fn descriptor_json() {
        let d: FieldDescriptor = serde_json::from_str(r#"{"kind":"GF","p":3,"k":2}"#).unwrap();
        assert_eq!(d, FieldDescriptor::Finite { p: 3, k: 2 });
        let d: FieldDescriptor = serde_json::from_str(r#"{"kind":"Q"}"#).unwrap();
        assert_eq!(d, FieldDescriptor::Rationals);
        let d: FieldDescriptor = serde_json::from_str(r#"{"kind":"Laurent","p":3,"k":1,"var":"t"}"#).unwrap();
        assert!(Field::new(d).unwrap().is_laurent());
        assert_eq!(serde_json::to_string(&FieldDescriptor::Rationals).unwrap(), r#"{"kind":"Q"}"#);
    }
}

//! Square-central and Artin–Schreier elements, decompositions around them,
//! and chains joining two such elements.

mod chain;

use thiserror::Error;

use crate::algebra::{centralizer, solve_in_span, Algebra, Equation};
use crate::config::Bounds;
use crate::field::{Elem, Field};
use crate::linalg::{self, Vector};
use crate::quaternion::{Factor, QuatError, QuaternionSymbol, TensorPresentation};
use crate::search::{shells, Search};

pub use chain::{chain, chain_with, Chain, ChainShape, Relation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementClass {
    Central(Elem),
    /// Noncentral with `v² = c ∈ F^×`.
    SquareCentral(Elem),
    /// Characteristic 2, noncentral with `v² + v = c ∈ F`.
    ArtinSchreier(Elem),
    Other,
}

impl ElementClass {
    pub fn name(&self) -> &'static str {
        match self {
            ElementClass::Central(_) => "central",
            ElementClass::SquareCentral(_) => "square-central",
            ElementClass::ArtinSchreier(_) => "artin-schreier",
            ElementClass::Other => "other",
        }
    }

    pub fn value(&self) -> Option<&Elem> {
        match self {
            ElementClass::Central(c) | ElementClass::SquareCentral(c) | ElementClass::ArtinSchreier(c) => Some(c),
            ElementClass::Other => None,
        }
    }

    pub fn is_square_central(&self) -> bool {
        matches!(self, ElementClass::SquareCentral(_))
    }

    pub fn is_artin_schreier(&self) -> bool {
        matches!(self, ElementClass::ArtinSchreier(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("{what} must be {expected}")]
    WrongClass { what: &'static str, expected: &'static str },
    #[error("proof identity {0} fails; the inputs violate the contract")]
    ProofIdentity(&'static str),
    #[error("the marked elements do not commute")]
    NotCommuting,
    #[error("the marked elements generate the same subfield")]
    SameSubfield,
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("decomposition: {0}")]
    Decomposition(String),
    #[error("an element is outside every factor of the presentation")]
    NotInFactor,
    #[error("algebra of dimension {0} needs a supplied tensor decomposition")]
    NeedsDecomposition(usize),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("step {step} failed after {} chain nodes: {reason}", .nodes.len())]
    Partial { step: &'static str, nodes: Vec<Vector>, reason: String },
    #[error(transparent)]
    Quaternion(#[from] QuatError),
}

/// Tests `v`, then `v²`, then `v² + v` against the line of scalars.
pub fn classify(a: &Algebra, v: &[Elem]) -> ElementClass {
    let f = a.field();
    if let Some(c) = a.as_scalar(v) {
        return ElementClass::Central(c);
    }
    let sq = a.square(v);
    if let Some(c) = a.as_scalar(&sq) {
        if !f.is_zero(&c) {
            return ElementClass::SquareCentral(c);
        }
    }
    if f.is_char2() {
        if let Some(c) = a.as_scalar(&a.add(&sq, v)) {
            return ElementClass::ArtinSchreier(c);
        }
    }
    ElementClass::Other
}

/// The pivot class each characteristic works with.
fn pivot_class(a: &Algebra, v: &[Elem], what: &'static str) -> Result<ElementClass, ChainError> {
    let c = classify(a, v);
    let ok = if a.field().is_char2() { c.is_artin_schreier() } else { c.is_square_central() };
    if ok {
        Ok(c)
    } else {
        let expected = if a.field().is_char2() { "Artin-Schreier" } else { "square-central" };
        Err(ChainError::WrongClass { what, expected })
    }
}

/// `xz + zx` away from characteristic 2 would be `-`twist; this returns the
/// expression that vanishes on the twisted part: `xz + zx` (char ≠ 2) or
/// `xz + zx + z` (char 2).
pub(crate) fn twist(a: &Algebra, x: &[Elem], z: &[Elem]) -> Vector {
    let ac = a.anticommutator(x, z);
    if a.field().is_char2() {
        a.add(&ac, z)
    } else {
        ac
    }
}

/// `t = t₀ + t₁` with `t₀` commuting with `x` and `t₁` twisted by `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub t0: Vector,
    pub t1: Vector,
    /// `t₁t₀ + t₀t₁ = t₁` (char 2) or `t₁t₀ = -t₀t₁`, checked when `t` is
    /// itself square-central or Artin–Schreier.
    pub proof_identity: Option<bool>,
}

/// `t₀ = (t + xtx⁻¹)/2` for square-central `x`; `t₀ = xt + tx + t` for
/// Artin–Schreier `x` in characteristic 2.
pub fn decompose_wrt(a: &Algebra, t: &[Elem], x: &[Elem]) -> Result<Decomposition, ChainError> {
    let f = a.field();
    let class = pivot_class(a, x, "x")?;
    let t0 = if f.is_char2() {
        a.add(&a.anticommutator(x, t), t)
    } else {
        let c = class.value().unwrap();
        let xinv = a.scale(&f.inv(c).unwrap(), x);
        let half = f.inv(&f.from_i64(2)).unwrap();
        a.scale(&half, &a.add(t, &a.mul3(x, t, &xinv)))
    };
    let t1 = a.sub(t, &t0);
    if a.add(&t0, &t1) != t || !a.commute(x, &t0) || !a.is_zero(&twist(a, x, &t1)) {
        return Err(ChainError::Verification("decomposition identities".into()));
    }
    let tc = classify(a, t);
    let proof_identity = (tc.is_square_central() || tc.is_artin_schreier()).then(|| {
        if f.is_char2() {
            a.anticommutator(&t1, &t0) == t1
        } else {
            a.is_zero(&a.anticommutator(&t1, &t0))
        }
    });
    Ok(Decomposition { t0, t1, proof_identity })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkRoute {
    /// The inputs commute; `z = t`.
    AlreadyCommuting,
    /// Found inside the commutative algebra generated by `t₁²` and `xt₀` (or `x + t₀`).
    Subfield,
    /// A structured element of the centralizer of `{x, t}`.
    Centralizer,
    /// Bounded enumeration of the centralizer.
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingLink {
    pub z: Vector,
    pub class: ElementClass,
    pub route: LinkRoute,
}

/// Turns an element with quadratic minimal polynomial into a square-central
/// or Artin–Schreier element generating the same subalgebra.
pub(crate) fn normalize(a: &Algebra, c: &[Elem]) -> Option<(Vector, ElementClass)> {
    let f = a.field();
    if a.as_scalar(c).is_some() {
        return None;
    }
    let mp = a.minimal_polynomial(c);
    if mp.len() != 3 {
        return None;
    }
    let z = if f.is_char2() {
        if f.is_zero(&mp[1]) {
            c.to_vec()
        } else {
            a.scale(&f.inv(&mp[1]).unwrap(), c)
        }
    } else {
        let half_s = f.div(&mp[1], &f.from_i64(2)).unwrap();
        a.add(c, &a.scalar(&half_s))
    };
    let class = classify(a, &z);
    (class.is_square_central() || class.is_artin_schreier()).then_some((z, class))
}

pub(crate) fn small_combinations(a: &Algebra, vs: &[Vector]) -> Vec<Vector> {
    let mut out = vs.to_vec();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            out.push(a.add(&vs[i], &vs[j]));
            out.push(a.sub(&vs[i], &vs[j]));
            out.push(a.mul(&vs[i], &vs[j]));
        }
    }
    out
}

/// Which class of commuting link a caller accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkClass {
    /// Either class; Artin–Schreier preferred in characteristic 2.
    Any,
    ArtinSchreier,
    SquareCentral,
}

impl LinkClass {
    pub(crate) fn accepts(self, c: &ElementClass) -> bool {
        match self {
            LinkClass::Any => true,
            LinkClass::ArtinSchreier => c.is_artin_schreier(),
            LinkClass::SquareCentral => c.is_square_central(),
        }
    }
}

pub fn find_commuting_link(a: &Algebra, x: &[Elem], t: &[Elem], bounds: &Bounds) -> Result<CommutingLink, ChainError> {
    find_commuting_link_pref(a, x, t, bounds, LinkClass::Any)
}

/// A square-central or Artin–Schreier `z` commuting with `x` and `t`,
/// restricted to the classes `want` accepts.
pub fn find_commuting_link_pref(a: &Algebra, x: &[Elem], t: &[Elem], bounds: &Bounds, want: LinkClass) -> Result<CommutingLink, ChainError> {
    let f = a.field();
    pivot_class(a, x, "x")?;
    pivot_class(a, t, "t")?;
    let d = decompose_wrt(a, t, x)?;
    if d.proof_identity != Some(true) {
        return Err(ChainError::ProofIdentity(if f.is_char2() { "t₁t₀ + t₀t₁ = t₁" } else { "t₁t₀ = -t₀t₁" }));
    }
    let prefer_as = f.is_char2() && want == LinkClass::Any;
    if a.is_zero(&d.t1) {
        let class = classify(a, t);
        if want.accepts(&class) {
            return Ok(CommutingLink { z: t.to_vec(), class, route: LinkRoute::AlreadyCommuting });
        }
    }
    let good = |z: &Vector| a.commute(z, x) && a.commute(z, t);
    let mut fallback: Option<CommutingLink> = None;
    let consider = |c: &Vector, route: LinkRoute, fallback: &mut Option<CommutingLink>| -> Option<CommutingLink> {
        let (z, class) = normalize(a, c)?;
        if !good(&z) {
            return None;
        }
        if !want.accepts(&class) {
            return None;
        }
        let link = CommutingLink { z, class, route };
        if !prefer_as || link.class.is_artin_schreier() {
            return Some(link);
        }
        if fallback.is_none() {
            *fallback = Some(link);
        }
        None
    };
    // the commutative algebra K of the construction
    let w = if f.is_char2() { a.add(x, &d.t0) } else { a.mul(x, &d.t0) };
    let k_span = a.generated_subspace(&[a.square(&d.t1), w]);
    for c in small_combinations(a, &k_span) {
        if let Some(l) = consider(&c, LinkRoute::Subfield, &mut fallback) {
            return Ok(l);
        }
    }
    let cent = centralizer(a, &[x.to_vec(), t.to_vec()]);
    for c in small_combinations(a, &cent) {
        if let Some(l) = consider(&c, LinkRoute::Centralizer, &mut fallback) {
            return Ok(l);
        }
    }
    if prefer_as && !f.is_finite() {
        if let Some(l) = fallback {
            return Ok(l);
        }
    }
    let pool = coordinate_pool(f, bounds);
    let res = shells(cent.len(), pool.len(), bounds.max_nodes, |idx| {
        let mut c = a.zero();
        for (i, &j) in idx.iter().enumerate() {
            linalg::axpy(f, &mut c, &pool[j], &cent[i]);
        }
        consider(&c, LinkRoute::Search, &mut fallback)
    });
    match res {
        Search::Found(l) => Ok(l),
        _ => fallback.ok_or_else(|| ChainError::SearchExhausted("no commuting square-central or Artin-Schreier element".into())),
    }
}

/// Coordinates for homogeneous searches.
fn coordinate_pool(f: &Field, bounds: &Bounds) -> Vec<Elem> {
    if f.is_rationals() {
        f.search_coordinates(bounds.max_height)
    } else if f.is_finite() {
        f.enumerate().unwrap()
    } else {
        f.candidates(bounds.max_degree)
    }
}

/// Role of a marked element inside its factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    X,
    Y,
}

/// `A = Q₁ ⊗ Q₂ ⊗ …` with the first marked element a generator of `Q₁` and
/// the second a generator of `Q₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedDecomposition {
    pub presentation: TensorPresentation,
    pub marks: [Generator; 2],
}

fn in_span(f: &Field, basis: &[Vector], v: &[Elem]) -> bool {
    let mut b = basis.to_vec();
    b.push(v.to_vec());
    linalg::rank(f, &b) == linalg::rank(f, &basis.to_vec())
}

/// Kernel of `z ↦ (op₁(z), op₂(z), …)` restricted to `span(dirs)`, as
/// vectors of `A`.
fn joint_kernel(a: &Algebra, dirs: &[Vector], ops: &[&dyn Fn(&Vector) -> Vector]) -> Vec<Vector> {
    let f = a.field();
    let cols: Vec<Vector> = dirs.iter().map(|d| ops.iter().flat_map(|op| op(d)).collect()).collect();
    if cols.is_empty() {
        return Vec::new();
    }
    let k = linalg::kernel(f, &linalg::transpose(&cols), dirs.len());
    k.iter()
        .map(|c| {
            let mut v = a.zero();
            for (ci, d) in c.iter().zip(dirs) {
                linalg::axpy(f, &mut v, ci, d);
            }
            v
        })
        .collect()
}

/// Square-central `y ∈ span(space)` (any nonzero square value).
fn square_central_in(a: &Algebra, space: &[Vector], bounds: &Bounds) -> Option<Vector> {
    let f = a.field();
    for c in small_combinations(a, space) {
        if let Some(s) = a.as_scalar(&a.square(&c)) {
            if !f.is_zero(&s) && a.as_scalar(&c).is_none() {
                return Some(c);
            }
        }
    }
    let accept = |y: &Vector| a.as_scalar(&a.square(y)).is_some_and(|s| !f.is_zero(&s)) && a.as_scalar(y).is_none();
    solve_in_span(a, &a.zero(), space, &Equation::ScalarSquare, bounds, accept).found()
}

fn symbol_for(a: &Algebra, x: &[Elem], y: &[Elem]) -> Result<QuaternionSymbol, ChainError> {
    let f = a.field();
    let xa = if f.is_char2() { a.add(&a.square(x), x) } else { a.square(x) };
    let av = a.as_scalar(&xa).ok_or_else(|| ChainError::Verification("factor generator x is not of the expected class".into()))?;
    let bv = a.as_scalar(&a.square(y)).ok_or_else(|| ChainError::Verification("factor generator y is not square-central".into()))?;
    Ok(QuaternionSymbol::new(f, av, bv)?)
}

/// `A = Q₁ ⊗ Q₂` for a 16-dimensional `A`, with `x ∈ Q₁`, `x' ∈ Q₂`.
fn decompose_degree4(a: &Algebra, x: &[Elem], xp: &[Elem], bounds: &Bounds) -> Result<MarkedDecomposition, ChainError> {
    let f = a.field();
    let xc = classify(a, x);
    let cxp = centralizer(a, &[xp.to_vec()]);
    let comm_xp = |z: &Vector| a.commutator(z, xp);
    let (first, marks) = if f.is_char2() && xc.is_square_central() {
        // Q₁ = [w² + w, x²) with wx + xw = x and w ∈ C(x')
        let cols: Vec<Vector> = cxp.iter().map(|b| a.anticommutator(x, b)).collect();
        let sol = linalg::solve(f, &linalg::transpose(&cols), x, cxp.len())
            .ok_or_else(|| ChainError::Decomposition("no w with wx + xw = x in C(x')".into()))?;
        let mut wp = a.zero();
        for (c, b) in sol.iter().zip(&cxp) {
            linalg::axpy(f, &mut wp, c, b);
        }
        let comm_x = |z: &Vector| a.commutator(z, x);
        let dirs = joint_kernel(a, &cxp, &[&comm_x]);
        let accept = |w: &Vector| a.as_scalar(&a.add(&a.square(w), w)).is_some() && a.as_scalar(w).is_none();
        let w = solve_in_span(a, &wp, &dirs, &Equation::ScalarArtinSchreier, bounds, accept)
            .found()
            .ok_or_else(|| ChainError::SearchExhausted("Artin-Schreier w with wx + xw = x".into()))?;
        (Factor { symbol: symbol_for(a, &w, x)?, x: w, y: x.to_vec() }, [Generator::Y, Generator::X])
    } else {
        let tw_x = |z: &Vector| twist(a, x, z);
        let space = joint_kernel(a, &a.basis(), &[&comm_xp, &tw_x]);
        let y = square_central_in(a, &space, bounds).ok_or_else(|| ChainError::SearchExhausted("square-central y twisted by x in C(x')".into()))?;
        (Factor { symbol: symbol_for(a, x, &y)?, x: x.to_vec(), y }, [Generator::X, Generator::X])
    };
    let (g1, g2) = (first.x.clone(), first.y.clone());
    let q2 = centralizer(a, &[g1, g2]);
    let tw_xp = |z: &Vector| twist(a, xp, z);
    let space2 = joint_kernel(a, &q2, &[&tw_xp]);
    let yp = square_central_in(a, &space2, bounds).ok_or_else(|| ChainError::SearchExhausted("square-central y' twisted by x' in C(Q₁)".into()))?;
    let second = Factor { symbol: symbol_for(a, xp, &yp)?, x: xp.to_vec(), y: yp };
    let presentation = TensorPresentation::from_parts(a.clone(), vec![first, second])?;
    presentation.embedding()?;
    Ok(MarkedDecomposition { presentation, marks })
}

/// Factor index and role of `v` when it is literally a generator.
fn generator_position(p: &TensorPresentation, v: &[Elem]) -> Option<(usize, Generator)> {
    p.factors().iter().enumerate().find_map(|(k, fa)| {
        if fa.x == v {
            Some((k, Generator::X))
        } else if fa.y == v {
            Some((k, Generator::Y))
        } else {
            None
        }
    })
}

/// The same factor with its generators swapped: `(a, b) ≅ (b, a)`.
fn swapped(fa: &Factor) -> Result<Factor, ChainError> {
    let f = fa.symbol.field();
    Ok(Factor { symbol: QuaternionSymbol::new(f, fa.symbol.b().clone(), fa.symbol.a().clone())?, x: fa.y.clone(), y: fa.x.clone() })
}

/// Uses the supplied presentation directly when the marked elements are
/// already generators of distinct factors in usable roles.
fn shortcut(p: &TensorPresentation, x: &[Elem], xp: &[Elem]) -> Option<MarkedDecomposition> {
    let char2 = p.algebra().field().is_char2();
    let (i, gi) = generator_position(p, x)?;
    let (j, gj) = generator_position(p, xp)?;
    if i == j || (char2 && gj == Generator::Y) {
        return None;
    }
    if char2 && gi == Generator::Y && !classify(p.algebra(), x).is_square_central() {
        return None;
    }
    let mut order = vec![i, j];
    order.extend((0..p.factors().len()).filter(|&k| k != i && k != j));
    let mut q = p.reordered(&order);
    let mut marks = [gi, gj];
    if !char2 {
        // make both marked elements x-generators
        let mut fs: Vec<Factor> = q.factors().to_vec();
        for (k, m) in marks.iter_mut().enumerate() {
            if *m == Generator::Y {
                fs[k] = swapped(&fs[k]).ok()?;
                *m = Generator::X;
            }
        }
        q = TensorPresentation::from_parts(q.algebra().clone(), fs).ok()?;
    }
    Some(MarkedDecomposition { presentation: q, marks })
}

/// Basis of `Q_i ⊗ Q_j` inside `A`.
fn pair_basis(p: &TensorPresentation, i: usize, j: usize) -> Vec<Vector> {
    let a = p.algebra();
    let (bi, bj) = (p.factor_basis(i), p.factor_basis(j));
    bi.iter().flat_map(|u| bj.iter().map(move |v| a.mul(u, v))).collect()
}

pub fn decompose_with_marked_elements(
    a: &Algebra,
    x: &[Elem],
    xp: &[Elem],
    oracle: Option<&TensorPresentation>,
    bounds: &Bounds,
) -> Result<MarkedDecomposition, ChainError> {
    let f = a.field();
    let xc = classify(a, x);
    if f.is_char2() {
        if !(xc.is_square_central() || xc.is_artin_schreier()) {
            return Err(ChainError::WrongClass { what: "x", expected: "square-central or Artin-Schreier" });
        }
        if !classify(a, xp).is_artin_schreier() {
            return Err(ChainError::WrongClass { what: "x'", expected: "Artin-Schreier" });
        }
    } else {
        pivot_class(a, x, "x")?;
        pivot_class(a, xp, "x'")?;
    }
    if !a.commute(x, xp) {
        return Err(ChainError::NotCommuting);
    }
    if in_span(f, &[a.unit(), x.to_vec()], xp) {
        return Err(ChainError::SameSubfield);
    }
    if let Some(p) = oracle.filter(|p| p.algebra() == a) {
        if let Some(d) = shortcut(p, x, xp) {
            return Ok(d);
        }
        if a.dim() > 16 {
            return via_two_factors(p, x, xp, bounds);
        }
    }
    if a.dim() != 16 {
        return Err(ChainError::NeedsDecomposition(a.dim()));
    }
    decompose_degree4(a, x, xp, bounds)
}

/// Runs the degree-4 construction inside a two-factor subalgebra of the
/// supplied presentation that contains both marked elements.
fn via_two_factors(p: &TensorPresentation, x: &[Elem], xp: &[Elem], bounds: &Bounds) -> Result<MarkedDecomposition, ChainError> {
    let a = p.algebra();
    let f = a.field();
    let n = p.factors().len();
    for i in 0..n {
        for j in i + 1..n {
            let basis = pair_basis(p, i, j);
            if !in_span(f, &basis, x) || !in_span(f, &basis, xp) {
                continue;
            }
            let labels = (0..16).map(|k| format!("b{k}")).collect();
            let b = a.subalgebra(&basis, &a.unit(), labels).map_err(|e| ChainError::Decomposition(e.to_string()))?;
            let coords = linalg::Coordinates::new(f, basis.clone()).expect("monomials are independent");
            let xb = coords.coords(f, x).unwrap();
            let xpb = coords.coords(f, xp).unwrap();
            let d = decompose_degree4(&b, &xb, &xpb, bounds)?;
            let up = |v: &Vector| coords.combine(f, v, a.dim());
            let mut factors: Vec<Factor> =
                d.presentation.factors().iter().map(|fa| Factor { symbol: fa.symbol.clone(), x: up(&fa.x), y: up(&fa.y) }).collect();
            factors.extend((0..n).filter(|&k| k != i && k != j).map(|k| p.factors()[k].clone()));
            let presentation = TensorPresentation::from_parts(a.clone(), factors)?;
            return Ok(MarkedDecomposition { presentation, marks: d.marks });
        }
    }
    Err(ChainError::NotInFactor)
}

/// Square-central `y` in factor `k` twisted by `v ∈ Q_k`: the factor's own
/// `y` when `v` is its `x`, else a solve inside the 4-dimensional factor.
fn twisted_partner(p: &TensorPresentation, k: usize, v: &[Elem], bounds: &Bounds) -> Result<Vector, ChainError> {
    let a = p.algebra();
    let fa = &p.factors()[k];
    if fa.x == v {
        return Ok(fa.y.clone());
    }
    let tw = |z: &Vector| twist(a, v, z);
    let space = joint_kernel(a, &p.factor_basis(k), &[&tw]);
    square_central_in(a, &space, bounds).ok_or_else(|| ChainError::SearchExhausted(format!("twisted partner in factor {k}")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnticommutingLink {
    pub z: Vector,
    pub y: Vector,
    pub y_prime: Vector,
}

/// `z = y·y'` with `y ∈ Q₁` twisted by `x` and `y' ∈ Q₂` twisted by `x'`.
pub fn find_anticommuting_link(p: &TensorPresentation, x: &[Elem], xp: &[Elem], bounds: &Bounds) -> Result<AnticommutingLink, ChainError> {
    let a = p.algebra();
    pivot_class(a, x, "x")?;
    pivot_class(a, xp, "x'")?;
    let i = p.factor_containing(x).ok_or(ChainError::NotInFactor)?;
    let j = p.factor_containing(xp).ok_or(ChainError::NotInFactor)?;
    if i == j {
        return Err(ChainError::Decomposition("x and x' lie in the same factor".into()));
    }
    let y = twisted_partner(p, i, x, bounds)?;
    let y_prime = twisted_partner(p, j, xp, bounds)?;
    let z = a.mul(&y, &y_prime);
    let ok = if a.field().is_char2() {
        a.anticommutator(x, &z) == z && a.anticommutator(xp, &z) == z
    } else {
        a.is_zero(&a.anticommutator(x, &z)) && a.is_zero(&a.anticommutator(xp, &z))
    };
    if !ok || !classify(a, &z).is_square_central() {
        return Err(ChainError::Verification("anticommuting link relations".into()));
    }
    Ok(AnticommutingLink { z, y, y_prime })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedLink {
    pub z: Vector,
    pub w: Vector,
}

/// Characteristic 2, `x ∈ Q₁` square-central, `x' ∈ Q₂` Artin–Schreier:
/// Artin–Schreier `w ∈ Q₁` with `wx + xw = x`, and square-central `z` with
/// `wz + zw = z = x'z + zx'`.
pub fn mixed_link(p: &TensorPresentation, x: &[Elem], xp: &[Elem], bounds: &Bounds) -> Result<MixedLink, ChainError> {
    let a = p.algebra();
    let f = a.field();
    if !f.is_char2() {
        return Err(ChainError::WrongClass { what: "field", expected: "of characteristic 2" });
    }
    if !classify(a, x).is_square_central() {
        return Err(ChainError::WrongClass { what: "x", expected: "square-central" });
    }
    if !classify(a, xp).is_artin_schreier() {
        return Err(ChainError::WrongClass { what: "x'", expected: "Artin-Schreier" });
    }
    let i = p.factor_containing(x).ok_or(ChainError::NotInFactor)?;
    let j = p.factor_containing(xp).ok_or(ChainError::NotInFactor)?;
    if i == j {
        return Err(ChainError::Decomposition("x and x' lie in the same factor".into()));
    }
    let fa = &p.factors()[i];
    let w = if fa.y == x {
        fa.x.clone()
    } else {
        let qb = p.factor_basis(i);
        let cols: Vec<Vector> = qb.iter().map(|b| a.anticommutator(x, b)).collect();
        let sol = linalg::solve(f, &linalg::transpose(&cols), x, 4).ok_or_else(|| ChainError::Decomposition("no w with wx + xw = x in the factor".into()))?;
        let mut wp = a.zero();
        for (c, b) in sol.iter().zip(&qb) {
            linalg::axpy(f, &mut wp, c, b);
        }
        let comm_x = |z: &Vector| a.commutator(z, x);
        let dirs = joint_kernel(a, &qb, &[&comm_x]);
        let accept = |w: &Vector| a.as_scalar(&a.add(&a.square(w), w)).is_some() && a.as_scalar(w).is_none();
        solve_in_span(a, &wp, &dirs, &Equation::ScalarArtinSchreier, bounds, accept)
            .found()
            .ok_or_else(|| ChainError::SearchExhausted("Artin-Schreier w in the factor of x".into()))?
    };
    let y_prime = twisted_partner(p, j, xp, bounds)?;
    // x itself is twisted by w
    let z = a.mul(x, &y_prime);
    let ok = a.anticommutator(&w, x) == x
        && a.anticommutator(&w, &z) == z
        && a.anticommutator(xp, &z) == z
        && classify(a, &w).is_artin_schreier()
        && classify(a, &z).is_square_central();
    if !ok {
        return Err(ChainError::Verification("mixed link relations".into()));
    }
    Ok(MixedLink { z, w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::hamilton;
    use crate::quaternion::QuaternionSymbol;

    fn hh(f: &Field) -> TensorPresentation {
        let s = QuaternionSymbol::new(f, f.from_i64(-1), f.from_i64(-1)).unwrap();
        TensorPresentation::realize(&[s.clone(), s]).unwrap()
    }

    #[test]
    fn classification_examples() {
        let q = Field::rationals();
        let h = hamilton(&q);
        assert_eq!(classify(&h, &h.unit()), ElementClass::Central(q.one()));
        assert_eq!(classify(&h, &h.basis_element(1)), ElementClass::SquareCentral(q.from_i64(-1)));
        let f2 = Field::gf(2, 1);
        let r = QuaternionSymbol::new(&f2, f2.one(), f2.one()).unwrap().realize();
        assert_eq!(classify(&r.algebra, &r.x), ElementClass::ArtinSchreier(f2.one()));
    }

    #[test]
    fn decompose_examples() {
        let q = Field::rationals();
        let h = hamilton(&q);
        let (i, j) = (h.basis_element(1), h.basis_element(2));
        let d = decompose_wrt(&h, &h.add(&i, &j), &i).unwrap();
        assert_eq!((d.t0, d.t1), (i.clone(), j.clone()));
        let d = decompose_wrt(&h, &i, &i).unwrap();
        assert!(h.is_zero(&d.t1));
        let f4 = Field::gf(2, 2);
        let r = QuaternionSymbol::new(&f4, f4.constant(2), f4.constant(3)).unwrap().realize();
        let d = decompose_wrt(&r.algebra, &r.algebra.add(&r.x, &r.y), &r.x).unwrap();
        assert_eq!((d.t0, d.t1), (r.x.clone(), r.y.clone()));
        assert!(decompose_wrt(&h, &i, &h.unit()).is_err());
    }

    #[test]
    fn commuting_link_in_hh() {
        let q = Field::rationals();
        let p = hh(&q);
        let a = p.algebra();
        let (x, t) = (p.factors()[0].x.clone(), p.factors()[0].y.clone());
        let l = find_commuting_link(a, &x, &t, &Bounds::default()).unwrap();
        assert!(a.commute(&l.z, &x) && a.commute(&l.z, &t));
        assert!(l.class.is_square_central());
        // commuting inputs return t
        let xp = p.factors()[1].x.clone();
        let l = find_commuting_link(a, &x, &xp, &Bounds::default()).unwrap();
        assert_eq!((l.z, l.route), (xp, LinkRoute::AlreadyCommuting));
    }

    #[test]
    fn anticommuting_link_examples() {
        let q = Field::rationals();
        let p = hh(&q);
        let (x, xp) = (p.factors()[0].x.clone(), p.factors()[1].x.clone());
        let l = find_anticommuting_link(&p, &x, &xp, &Bounds::default()).unwrap();
        let a = p.algebra();
        assert_eq!(l.z, a.mul(&p.factors()[0].y, &p.factors()[1].y));
    }

    #[test]
    fn marked_decomposition_returns_existing_presentation() {
        let q = Field::rationals();
        let p = hh(&q);
        let (x, xp) = (p.factors()[0].x.clone(), p.factors()[1].x.clone());
        let d = decompose_with_marked_elements(p.algebra(), &x, &xp, Some(&p), &Bounds::default()).unwrap();
        assert_eq!(d.presentation, p);
        let f4 = Field::gf(2, 2);
        let s1 = QuaternionSymbol::new(&f4, f4.one(), f4.one()).unwrap();
        let s2 = QuaternionSymbol::new(&f4, f4.constant(2), f4.one()).unwrap();
        let p = TensorPresentation::realize(&[s1, s2]).unwrap();
        let (x, xp) = (p.factors()[0].x.clone(), p.factors()[1].x.clone());
        let d = decompose_with_marked_elements(p.algebra(), &x, &xp, Some(&p), &Bounds::default()).unwrap();
        assert_eq!(d.presentation, p);
    }

    #[test]
    fn marked_decomposition_by_search() {
        for f in [Field::gf(3, 1), Field::gf(2, 2)] {
            let s1 = QuaternionSymbol::new(&f, f.one(), f.one()).unwrap();
            let p = TensorPresentation::realize(&[s1.clone(), s1]).unwrap();
            let a = p.algebra();
            // conjugate the marked elements by a unit mixing the factors
            let (f0, f1) = (&p.factors()[0], &p.factors()[1]);
            let pc = [a.add(&f0.x, &a.mul(&f0.y, &f1.x)), a.add(&f1.y, &a.mul(&f0.x, &f1.y)), a.add(&a.unit(), &a.add(&f0.y, &f1.x))]
                .iter()
                .find_map(|u| p.conjugate(&a.add(&a.unit(), u)).ok())
                .unwrap();
            assert!(pc.factor_containing(&pc.factors()[0].x) == Some(0));
            let (x, xp) = (pc.factors()[0].x.clone(), pc.factors()[1].x.clone());
            let d = decompose_with_marked_elements(a, &x, &xp, None, &Bounds::default()).unwrap();
            d.presentation.verify().unwrap();
            assert_eq!(d.presentation.factors()[0].x, x);
            assert_eq!(d.presentation.factors()[1].x, xp);
            // char 2 with a square-central first element
            if f.is_char2() {
                let y = pc.factors()[0].y.clone();
                let d = decompose_with_marked_elements(a, &y, &xp, None, &Bounds::default()).unwrap();
                assert_eq!(d.marks, [Generator::Y, Generator::X]);
                let m = mixed_link(&d.presentation, &y, &xp, &Bounds::default()).unwrap();
                assert!(a.anticommutator(&m.w, &y) == y);
            }
        }
    }
}

use serde_json::{json, Value};

use super::{
    classify, decompose_with_marked_elements, find_anticommuting_link, find_commuting_link_pref, in_span, mixed_link, normalize, pair_basis,
    ChainError, ElementClass, Generator, LinkClass,
};
use crate::algebra::{centralizer, Algebra};
use crate::config::Bounds;
use crate::field::Elem;
use crate::linalg::{self, Vector};
use crate::quaternion::TensorPresentation;
use crate::search::shells;

/// Alternative pivots tried by the char-2 chains.
const MAX_PIVOTS: usize = 32;

/// Relation carried by one link of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `uv = -vu`.
    Anticommute,
    /// Characteristic 2: `sy + ys = y` with `s` the Artin–Schreier end of
    /// the link (`from` when `from_is_artin_schreier`).
    Twist { from_is_artin_schreier: bool },
}

impl Relation {
    pub fn name(&self) -> &'static str {
        match self {
            Relation::Anticommute => "anticommute",
            Relation::Twist { from_is_artin_schreier: true } => "twist-forward",
            Relation::Twist { from_is_artin_schreier: false } => "twist-backward",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainShape {
    Single,
    /// Anticommuting inputs.
    Direct,
    /// Commuting inputs joined through one element.
    Commuting,
    /// `x, x₁, x₂, x₃, x'` (characteristic ≠ 2).
    Full,
    /// `x, y₁, x₁, y₂, x'` (characteristic 2).
    Short,
    /// `x, y₁, x₁, y₂, x₃, y₃, x'` (characteristic 2).
    Long,
}

impl ChainShape {
    pub fn name(&self) -> &'static str {
        match self {
            ChainShape::Single => "single",
            ChainShape::Direct => "direct",
            ChainShape::Commuting => "commuting",
            ChainShape::Full => "full",
            ChainShape::Short => "short",
            ChainShape::Long => "long",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub algebra: Algebra,
    pub nodes: Vec<Vector>,
    pub classes: Vec<ElementClass>,
    pub relations: Vec<Relation>,
    pub shape: ChainShape,
}

impl Chain {
    pub fn links(&self) -> usize {
        self.relations.len()
    }

    fn build(a: &Algebra, nodes: Vec<Vector>, shape: ChainShape) -> Result<Chain, ChainError> {
        let char2 = a.field().is_char2();
        let classes: Vec<ElementClass> = nodes.iter().map(|v| classify(a, v)).collect();
        let mut relations = Vec::new();
        for k in 0..nodes.len().saturating_sub(1) {
            let (u, v) = (&nodes[k], &nodes[k + 1]);
            let r = if char2 {
                let fwd = classes[k].is_artin_schreier() && classes[k + 1].is_square_central();
                let bwd = classes[k].is_square_central() && classes[k + 1].is_artin_schreier();
                let (s, y) = if fwd { (u, v) } else { (v, u) };
                if !(fwd || bwd) || a.anticommutator(s, y) != *y {
                    return Err(ChainError::Verification(format!("link {k} does not satisfy sy + ys = y")));
                }
                Relation::Twist { from_is_artin_schreier: fwd }
            } else {
                if !classes[k].is_square_central() || !classes[k + 1].is_square_central() || !a.is_zero(&a.anticommutator(u, v)) {
                    return Err(ChainError::Verification(format!("link {k} does not anticommute")));
                }
                Relation::Anticommute
            };
            relations.push(r);
        }
        let bound = if char2 { 6 } else { 4 };
        if relations.len() > bound {
            return Err(ChainError::Verification(format!("{} links exceed the bound {bound}", relations.len())));
        }
        Ok(Chain { algebra: a.clone(), nodes, classes, relations, shape })
    }

    /// Certificate consumed by the independent checker.
    pub fn to_json(&self) -> Value {
        let a = &self.algebra;
        let f = a.field();
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .zip(&self.classes)
            .map(|(v, c)| json!({"coords": a.element_to_json(v), "class": c.name(), "value": c.value().map(|x| f.format(x))}))
            .collect();
        let links: Vec<Value> =
            self.relations.iter().enumerate().map(|(k, r)| json!({"from": k, "to": k + 1, "relation": r.name()})).collect();
        json!({
            "kind": "chain",
            "field": serde_json::to_value(f.descriptor()).unwrap(),
            "algebra": a.to_json(),
            "shape": self.shape.name(),
            "nodes": nodes,
            "links": links,
        })
    }
}

pub fn chain(a: &Algebra, x: &[Elem], xp: &[Elem], oracle: Option<&TensorPresentation>) -> Result<Chain, ChainError> {
    chain_with(a, x, xp, oracle, &Bounds::default())
}

/// Joins `x` to `x'` by square-central elements with consecutive ones
/// anticommuting, or in characteristic 2 by alternating Artin–Schreier and
/// square-central elements `s, y` with `sy + ys = y`.
pub fn chain_with(a: &Algebra, x: &[Elem], xp: &[Elem], oracle: Option<&TensorPresentation>, bounds: &Bounds) -> Result<Chain, ChainError> {
    let char2 = a.field().is_char2();
    let (want, expected) = if char2 { (true, "Artin-Schreier") } else { (false, "square-central") };
    for (v, what) in [(x, "x"), (xp, "x'")] {
        let c = classify(a, v);
        if (want && !c.is_artin_schreier()) || (!want && !c.is_square_central()) {
            return Err(ChainError::WrongClass { what, expected });
        }
    }
    if x == xp {
        return Chain::build(a, vec![x.to_vec()], ChainShape::Single);
    }
    if let Some(p) = oracle.filter(|p| p.algebra() == a && a.dim() > 16) {
        return via_two_factors(p, x, xp, bounds);
    }
    if a.dim() != 16 {
        return Err(ChainError::NeedsDecomposition(a.dim()));
    }
    let oracle = oracle.filter(|p| p.algebra() == a);
    if !char2 && a.is_zero(&a.anticommutator(x, xp)) {
        return Chain::build(a, vec![x.to_vec(), xp.to_vec()], ChainShape::Direct);
    }
    if a.commute(x, xp) {
        return commuting_chain(a, x, xp, oracle, bounds);
    }
    if char2 {
        match short_chain(a, x, xp, oracle, bounds) {
            Ok(c) => Ok(c),
            Err(_) => long_chain(a, x, xp, oracle, bounds),
        }
    } else {
        full_chain(a, x, xp, oracle, bounds)
    }
}

fn partial<'a>(step: &'static str, nodes: &'a [Vector]) -> impl FnOnce(ChainError) -> ChainError + 'a {
    move |e| ChainError::Partial { step, nodes: nodes.to_vec(), reason: e.to_string() }
}

/// The element twisted by both marked elements of a decomposition.
fn link_between(a: &Algebra, u: &[Elem], v: &[Elem], oracle: Option<&TensorPresentation>, bounds: &Bounds) -> Result<Vector, ChainError> {
    let d = decompose_with_marked_elements(a, u, v, oracle, bounds)?;
    Ok(find_anticommuting_link(&d.presentation, u, v, bounds)?.z)
}

fn commuting_chain(a: &Algebra, x: &[Elem], xp: &[Elem], oracle: Option<&TensorPresentation>, bounds: &Bounds) -> Result<Chain, ChainError> {
    let f = a.field();
    let nodes = vec![x.to_vec()];
    let mid = if in_span(f, &[a.unit(), x.to_vec()], xp) {
        // x' ∈ F[x]: any partner twisted by x is twisted by x' too
        let w = partner_outside(a, x, bounds).map_err(partial("commuting partner", &nodes))?;
        let d = decompose_with_marked_elements(a, x, &w, oracle, bounds).map_err(partial("decomposition with x", &nodes))?;
        let q1 = &d.presentation.factors()[0];
        match d.marks[0] {
            Generator::X => q1.y.clone(),
            Generator::Y => q1.x.clone(),
        }
    } else {
        link_between(a, x, xp, oracle, bounds).map_err(partial("link between commuting x and x'", &nodes))?
    };
    Chain::build(a, vec![x.to_vec(), mid, xp.to_vec()], ChainShape::Commuting)
}

/// An element of the pivot class commuting with `x` and outside `F[x]`.
fn partner_outside(a: &Algebra, x: &[Elem], bounds: &Bounds) -> Result<Vector, ChainError> {
    let f = a.field();
    let fx = [a.unit(), x.to_vec()];
    let cent = centralizer(a, &[x.to_vec()]);
    let dirs: Vec<Vector> = cent.into_iter().filter(|c| !in_span(f, &fx, c)).collect();
    let want_as = f.is_char2();
    let ok = |c: &ElementClass| if want_as { c.is_artin_schreier() } else { c.is_square_central() };
    for c in super::small_combinations(a, &dirs) {
        if !in_span(f, &fx, &c) && ok(&classify(a, &c)) {
            return Ok(c);
        }
    }
    let eq = if want_as { crate::algebra::Equation::ScalarArtinSchreier } else { crate::algebra::Equation::ScalarSquare };
    let accept = |v: &Vector| !in_span(f, &fx, v) && ok(&classify(a, v));
    crate::algebra::solve_in_span(a, &a.zero(), &dirs, &eq, bounds, accept)
        .found()
        .ok_or_else(|| ChainError::SearchExhausted("element commuting with x outside F[x]".into()))
}

fn full_chain(a: &Algebra, x: &[Elem], xp: &[Elem], oracle: Option<&TensorPresentation>, bounds: &Bounds) -> Result<Chain, ChainError> {
    let mut nodes = vec![x.to_vec()];
    let z = find_commuting_link_pref(a, x, xp, bounds, LinkClass::Any).map_err(partial("commuting link", &nodes))?.z;
    let x1 = link_between(a, x, &z, oracle, bounds).map_err(partial("link x to x₂", &nodes))?;
    nodes.extend([x1, z.clone()]);
    let x3 = link_between(a, &z, xp, oracle, bounds).map_err(partial("link x₂ to x'", &nodes))?;
    nodes.extend([x3, xp.to_vec()]);
    Chain::build(a, nodes, ChainShape::Full)
}

fn short_chain(a: &Algebra, x: &[Elem], xp: &[Elem], oracle: Option<&TensorPresentation>, bounds: &Bounds) -> Result<Chain, ChainError> {
    let nodes = vec![x.to_vec()];
    let first = find_commuting_link_pref(a, x, xp, bounds, LinkClass::ArtinSchreier).map_err(partial("Artin-Schreier commuting link", &nodes))?.z;
    first_success(a, x, xp, first, LinkClass::ArtinSchreier, bounds, |z| short_through(a, x, xp, z, oracle, bounds))
}

fn short_through(a: &Algebra, x: &[Elem], xp: &[Elem], z: &[Elem], oracle: Option<&TensorPresentation>, bounds: &Bounds) -> Result<Chain, ChainError> {
    let mut nodes = vec![x.to_vec()];
    let y1 = link_between(a, x, z, oracle, bounds).map_err(partial("link x to x₁", &nodes))?;
    nodes.extend([y1, z.to_vec()]);
    let y2 = link_between(a, z, xp, oracle, bounds).map_err(partial("link x₁ to x'", &nodes))?;
    nodes.extend([y2, xp.to_vec()]);
    Chain::build(a, nodes, ChainShape::Short)
}

fn long_chain(a: &Algebra, x: &[Elem], xp: &[Elem], oracle: Option<&TensorPresentation>, bounds: &Bounds) -> Result<Chain, ChainError> {
    let nodes = vec![x.to_vec()];
    let first = find_commuting_link_pref(a, x, xp, bounds, LinkClass::SquareCentral).map_err(partial("square-central commuting link", &nodes))?.z;
    first_success(a, x, xp, first, LinkClass::SquareCentral, bounds, |z| long_through(a, x, xp, z, oracle, bounds))
}

/// Runs `build` through `first`, then through further pivots of the same
/// class when the field is finite; the last error wins.
fn first_success(
    a: &Algebra,
    x: &[Elem],
    xp: &[Elem],
    first: Vector,
    class: LinkClass,
    bounds: &Bounds,
    build: impl Fn(&[Elem]) -> Result<Chain, ChainError>,
) -> Result<Chain, ChainError> {
    let mut err = match build(&first) {
        Ok(c) => return Ok(c),
        Err(e) => e,
    };
    for z in pivots(a, x, xp, &first, class, bounds) {
        match build(&z) {
            Ok(c) => return Ok(c),
            Err(e) => err = e,
        }
    }
    Err(err)
}

/// Further elements of `class` commuting with `x` and `x'`, enumerated from
/// their common centralizer over a finite field.
fn pivots(a: &Algebra, x: &[Elem], xp: &[Elem], skip: &[Elem], class: LinkClass, bounds: &Bounds) -> Vec<Vector> {
    let f = a.field();
    let Some(pool) = f.enumerate().filter(|_| f.is_finite()) else {
        return Vec::new();
    };
    let cent = centralizer(a, &[x.to_vec(), xp.to_vec()]);
    let mut out: Vec<Vector> = Vec::new();
    shells(cent.len(), pool.len(), bounds.max_nodes, |idx| {
        let mut c = a.zero();
        for (i, &j) in idx.iter().enumerate() {
            linalg::axpy(f, &mut c, &pool[j], &cent[i]);
        }
        if let Some((z, zc)) = normalize(a, &c) {
            if class.accepts(&zc) && z != skip && !out.contains(&z) {
                out.push(z);
            }
        }
        (out.len() >= MAX_PIVOTS).then_some(())
    });
    out
}

fn long_through(a: &Algebra, x: &[Elem], xp: &[Elem], z: &[Elem], oracle: Option<&TensorPresentation>, bounds: &Bounds) -> Result<Chain, ChainError> {
    let mut nodes = vec![x.to_vec()];
    let d1 = decompose_with_marked_elements(a, z, x, oracle, bounds).map_err(partial("decomposition around y₂ and x", &nodes))?;
    let m1 = mixed_link(&d1.presentation, z, x, bounds).map_err(partial("mixed link on the x side", &nodes))?;
    nodes.extend([m1.z, m1.w, z.to_vec()]);
    let d2 = decompose_with_marked_elements(a, z, xp, oracle, bounds).map_err(partial("decomposition around y₂ and x'", &nodes))?;
    let m2 = mixed_link(&d2.presentation, z, xp, bounds).map_err(partial("mixed link on the x' side", &nodes))?;
    nodes.extend([m2.w, m2.z, xp.to_vec()]);
    Chain::build(a, nodes, ChainShape::Long)
}

/// Builds the chain inside a 16-dimensional product of two factors that
/// contains both ends.
fn via_two_factors(p: &TensorPresentation, x: &[Elem], xp: &[Elem], bounds: &Bounds) -> Result<Chain, ChainError> {
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
            let c = chain_with(&b, &xb, &xpb, None, bounds)?;
            let nodes = c.nodes.iter().map(|v| coords.combine(f, v, a.dim())).collect();
            return Chain::build(a, nodes, c.shape);
        }
    }
    Err(ChainError::NotInFactor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::quaternion::QuaternionSymbol;

    fn realize(f: &Field, pairs: &[(Elem, Elem)]) -> TensorPresentation {
        let s: Vec<QuaternionSymbol> = pairs.iter().map(|(a, b)| QuaternionSymbol::new(f, a.clone(), b.clone()).unwrap()).collect();
        TensorPresentation::realize(&s).unwrap()
    }

    #[test]
    fn trivial_and_direct() {
        let q = Field::rationals();
        let m1 = q.from_i64(-1);
        let p = realize(&q, &[(m1.clone(), m1.clone()), (m1.clone(), m1)]);
        let x = p.factors()[0].x.clone();
        let c = chain(p.algebra(), &x, &x, Some(&p)).unwrap();
        assert_eq!((c.nodes.len(), c.shape), (1, ChainShape::Single));
        let c = chain(p.algebra(), &x, &p.factors()[0].y, Some(&p)).unwrap();
        assert_eq!(c.shape, ChainShape::Direct);
    }

    #[test]
    fn hh_commuting_ends() {
        let q = Field::rationals();
        let m1 = q.from_i64(-1);
        let p = realize(&q, &[(m1.clone(), m1.clone()), (m1.clone(), m1)]);
        let (x, xp) = (p.factors()[0].x.clone(), p.factors()[1].x.clone());
        let c = chain(p.algebra(), &x, &xp, Some(&p)).unwrap();
        assert_eq!(c.shape, ChainShape::Commuting);
        assert_eq!(c.nodes[1], p.algebra().mul(&p.factors()[0].y, &p.factors()[1].y));
    }

    #[test]
    fn full_chain_over_f5() {
        let f = Field::gf(5, 1);
        let p = realize(&f, &[(f.from_i64(2), f.from_i64(2)), (f.from_i64(1), f.from_i64(2))]);
        let a = p.algebra();
        let x = p.factors()[0].x.clone();
        // square-central, noncommuting with x
        let xp = a.add(&p.factors()[0].y, &a.mul(&p.factors()[0].x, &p.factors()[1].x));
        assert!(classify(a, &xp).is_square_central());
        let c = chain(a, &x, &xp, Some(&p)).unwrap();
        assert_eq!(c.shape, ChainShape::Full);
        assert!(c.links() <= 4);
    }

    #[test]
    fn char2_short_chain_over_f4() {
        let f = Field::gf(2, 2);
        let w = f.constant(2);
        let p = realize(&f, &[(f.one(), f.one()), (w.clone(), w)]);
        let a = p.algebra();
        let (x, y) = (p.factors()[0].x.clone(), p.factors()[0].y.clone());
        // Artin-Schreier, not commuting with x
        let xp = a.add(&x, &y);
        assert!(classify(a, &xp).is_artin_schreier());
        let c = chain(a, &x, &xp, Some(&p)).unwrap();
        assert!(matches!(c.shape, ChainShape::Short | ChainShape::Long));
        assert!(c.links() <= 6);
        let c = chain(a, &x, &p.factors()[1].x, Some(&p)).unwrap();
        assert_eq!(c.shape, ChainShape::Commuting);
    }

    // Random conjugates of x₀ over F₄ whose common centralizer has no
    // usable Artin-Schreier pivot; the first one found is a long chain.
    #[test]
    fn char2_long_chain_over_f4() {
        let f = Field::gf(2, 2);
        let p = realize(&f, &[(f.one(), f.one()), (f.one(), f.one())]);
        let a = p.algebra();
        let x0 = p.factors()[0].x.clone();
        let mut rng = crate::config::rng(5);
        let mut unit = || loop {
            let u = a.random_element(&mut rng, 2);
            if let Some(ui) = a.inverse(&u) {
                break (u, ui);
            }
        };
        let long = (0..50)
            .find_map(|_| {
                let ((u, ui), (v, vi)) = (unit(), unit());
                let (x, xp) = (a.mul3(&u, &x0, &ui), a.mul3(&v, &x0, &vi));
                chain(a, &x, &xp, None).ok().filter(|c| c.shape == ChainShape::Long)
            })
            .expect("a long chain among 50 samples");
        assert_eq!(long.nodes.len(), 7);
        assert!(crate::cert::check(&long.to_json()).is_ok());
    }
}

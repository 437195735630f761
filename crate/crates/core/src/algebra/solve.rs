//! Searches for elements of an affine subspace satisfying `X² = c` or
//! `X² + X = c`.

use super::Algebra;
use crate::config::Bounds;
use crate::field::{Elem, Field};
use crate::forms::solve_quadratic;
use crate::linalg::{self, Vector};
use crate::search::{shells, Search};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equation {
    /// `X² = c·1`.
    Square(Elem),
    /// `X² + X = c·1`.
    ArtinSchreier(Elem),
    /// `X² ∈ F·1`.
    ScalarSquare,
    /// `X² + X ∈ F·1`.
    ScalarArtinSchreier,
}

/// Coefficients tried for each free coordinate.
pub(crate) fn coefficient_pool(field: &Field, bounds: &Bounds) -> Vec<Elem> {
    if field.is_finite() {
        field.enumerate().unwrap()
    } else if field.is_rationals() {
        field.candidates(bounds.max_height)
    } else {
        field.candidates(bounds.max_degree)
    }
}

/// Finds `X = base + Σ cᵢ dirs[i]` solving `eq` with `accept(X)`. All
/// coefficients but the last are enumerated shell by shell; the last one
/// is obtained by solving a quadratic.
pub fn solve_in_span(
    a: &Algebra,
    base: &[Elem],
    dirs: &[Vector],
    eq: &Equation,
    bounds: &Bounds,
    mut accept: impl FnMut(&Vector) -> bool,
) -> Search<Vector> {
    let f = a.field();
    // kills the line of scalars
    let unit = a.unit();
    let k = unit.iter().position(|u| !f.is_zero(u)).expect("unit is nonzero");
    let project = |v: Vector| -> Vector {
        let c = f.div(&v[k], &unit[k]).unwrap();
        a.sub(&v, &a.scale(&c, &unit))
    };
    let artin_schreier = matches!(eq, Equation::ArtinSchreier(_) | Equation::ScalarArtinSchreier);
    let residual = |x: &Vector| -> Vector {
        match eq {
            Equation::Square(c) => a.sub(&a.square(x), &a.scalar(c)),
            Equation::ArtinSchreier(c) => a.sub(&a.add(&a.square(x), x), &a.scalar(c)),
            Equation::ScalarSquare => project(a.square(x)),
            Equation::ScalarArtinSchreier => project(a.add(&a.square(x), x)),
        }
    };
    let scalar_target = matches!(eq, Equation::ScalarSquare | Equation::ScalarArtinSchreier);
    if dirs.is_empty() {
        let x = base.to_vec();
        return if a.is_zero(&residual(&x)) && accept(&x) { Search::Found(x) } else { Search::Exhausted };
    }
    let pool = coefficient_pool(f, bounds);
    let n = dirs.len();
    let last = &dirs[n - 1];
    let alpha = if scalar_target { project(a.square(last)) } else { a.square(last) };
    shells(n - 1, pool.len(), bounds.max_nodes, |idx| {
        let mut x = base.to_vec();
        for (i, &j) in idx.iter().enumerate() {
            linalg::axpy(f, &mut x, &pool[j], &dirs[i]);
        }
        let mut beta = a.anticommutator(&x, last);
        if artin_schreier {
            beta = a.add(&beta, last);
        }
        if scalar_target {
            beta = project(beta);
        }
        let gamma = residual(&x);
        for s in vector_quadratic_roots(f, &alpha, &beta, &gamma) {
            let mut y = x.clone();
            linalg::axpy(f, &mut y, &s, last);
            if a.is_zero(&residual(&y)) && accept(&y) {
                return Some(y);
            }
        }
        None
    })
}

/// Roots `s` of `α s² + β s + γ = 0` (a vector equation).
fn vector_quadratic_roots(f: &Field, alpha: &[Elem], beta: &[Elem], gamma: &[Elem]) -> Vec<Elem> {
    let Some(j) = (0..alpha.len()).find(|&j| !f.is_zero(&alpha[j]) || !f.is_zero(&beta[j])) else {
        return if linalg::is_zero_vector(f, gamma) { vec![f.zero(), f.one(), f.from_i64(-1)] } else { Vec::new() };
    };
    let (a, b, c) = (&alpha[j], &beta[j], &gamma[j]);
    let roots = if f.is_zero(a) {
        vec![f.neg(&f.div(c, b).unwrap())]
    } else {
        match solve_quadratic(f, a, b, c) {
            Some(r) => {
                let other = f.sub(&f.neg(&f.div(b, a).unwrap()), &r);
                if other == r {
                    vec![r]
                } else {
                    vec![r, other]
                }
            }
            None => Vec::new(),
        }
    };
    roots
        .into_iter()
        .filter(|s| {
            (0..alpha.len()).all(|i| {
                let v = f.add(&f.mul(&alpha[i], &f.square(s)), &f.add(&f.mul(&beta[i], s), &gamma[i]));
                f.is_zero(&v)
            })
        })
        .collect()
}

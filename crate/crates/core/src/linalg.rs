//! Dense exact linear algebra over a [`Field`].

use crate::field::{Elem, Field};

pub type Vector = Vec<Elem>;
pub type Matrix = Vec<Vec<Elem>>;

pub fn zero_vector(f: &Field, n: usize) -> Vector {
    vec![f.zero(); n]
}

pub fn unit_vector(f: &Field, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(f, n);
    v[i] = f.one();
    v
}

pub fn is_zero_vector(f: &Field, v: &[Elem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

pub fn add_vec(f: &Field, a: &[Elem], b: &[Elem]) -> Vector {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn sub_vec(f: &Field, a: &[Elem], b: &[Elem]) -> Vector {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

pub fn scale_vec(f: &Field, c: &Elem, a: &[Elem]) -> Vector {
    a.iter().map(|x| f.mul(c, x)).collect()
}

/// `a += c * b`
pub fn axpy(f: &Field, a: &mut [Elem], c: &Elem, b: &[Elem]) {
    if f.is_zero(c) {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !f.is_zero(y) {
            *x = f.add(x, &f.mul(c, y));
        }
    }
}

pub fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if !f.is_zero(x) && !f.is_zero(y) {
            acc = f.add(&acc, &f.mul(x, y));
        }
    }
    acc
}

pub fn mat_vec(f: &Field, m: &Matrix, v: &[Elem]) -> Vector {
    m.iter().map(|row| dot(f, row, v)).collect()
}

pub fn mat_mul(f: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = f.zero();
                    for (k, x) in row.iter().enumerate() {
                        if !f.is_zero(x) && !f.is_zero(&b[k][j]) {
                            acc = f.add(&acc, &f.mul(x, &b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| (0..rows).map(|i| m[i][j].clone()).collect()).collect()
}

pub fn identity(f: &Field, n: usize) -> Matrix {
    (0..n).map(|i| unit_vector(f, n, i)).collect()
}

/// In-place reduced row echelon form; returns pivot columns.
pub fn rref(f: &Field, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else { continue };
        m.swap(r, pr);
        let inv = f.inv(&m[r][c]).unwrap();
        let pivot_row: Vec<Elem> = m[r].iter().map(|x| f.mul(x, &inv)).collect();
        m[r] = pivot_row;
        for i in 0..rows {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = f.neg(&m[i][c]);
                let src = m[r].clone();
                axpy(f, &mut m[i], &factor, &src);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &Field, m: &Matrix) -> usize {
    let mut c = m.clone();
    rref(f, &mut c).len()
}

/// Basis of `{x : m x = 0}`; `cols` is needed when `m` has no rows.
pub fn kernel(f: &Field, m: &Matrix, cols: usize) -> Vec<Vector> {
    let mut a = m.clone();
    let pivots = rref(f, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = zero_vector(f, cols);
            v[fc] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&a[i][fc]);
            }
            v
        })
        .collect()
}

/// Some solution of `m x = b`, if any.
pub fn solve(f: &Field, m: &Matrix, b: &[Elem], cols: usize) -> Option<Vector> {
    let mut a: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(f, &mut a);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = zero_vector(f, cols);
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = a[i][cols].clone();
    }
    Some(x)
}

pub fn inverse(f: &Field, m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit_vector(f, n, i));
            r
        })
        .collect();
    let pivots = rref(f, &mut a);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Indices of a maximal linearly independent subset, scanning in order.
pub fn independent_subset(f: &Field, vectors: &[Vector]) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut echelon: Vec<(usize, Vector)> = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for (pc, row) in &echelon {
            if !f.is_zero(&w[*pc]) {
                let c = f.neg(&w[*pc]);
                axpy(f, &mut w, &c, row);
            }
        }
        if let Some(pc) = w.iter().position(|x| !f.is_zero(x)) {
            let inv = f.inv(&w[pc]).unwrap();
            let w = scale_vec(f, &inv, &w);
            // keep earlier rows reduced against the new pivot
            for (_, row) in echelon.iter_mut() {
                if !f.is_zero(&row[pc]) {
                    let c = f.neg(&row[pc]);
                    axpy(f, row, &c, &w);
                }
            }
            echelon.push((pc, w));
            chosen.push(idx);
        }
    }
    chosen
}

/// Coordinates with respect to a fixed linearly independent family.
#[derive(Clone, Debug)]
pub struct Coordinates {
    basis: Vec<Vector>,
    left_inverse: Matrix,
}

impl Coordinates {
    pub fn new(f: &Field, basis: Vec<Vector>) -> Option<Self> {
        let r = basis.len();
        let n = basis.first().map_or(0, |b| b.len());
        // rows of [B | I], with B having the basis as columns
        let mut a: Matrix = (0..n)
            .map(|i| {
                let mut row: Vec<Elem> = basis.iter().map(|b| b[i].clone()).collect();
                row.extend(unit_vector(f, n, i));
                row
            })
            .collect();
        let pivots = rref(f, &mut a);
        if pivots.len() < r || (r > 0 && pivots[r - 1] != r - 1) {
            return None;
        }
        let left_inverse = a[..r].iter().map(|row| row[r..].to_vec()).collect();
        Some(Coordinates { basis, left_inverse })
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `v`, or `None` when `v` is outside the span.
    pub fn coords(&self, f: &Field, v: &[Elem]) -> Option<Vector> {
        let c = mat_vec(f, &self.left_inverse, v);
        let back = self.combine(f, &c, v.len());
        if back.iter().zip(v).all(|(x, y)| x == y) {
            Some(c)
        } else {
            None
        }
    }

    pub fn combine(&self, f: &Field, c: &[Elem], n: usize) -> Vector {
        let mut out = zero_vector(f, n);
        for (ci, b) in c.iter().zip(&self.basis) {
            axpy(f, &mut out, ci, b);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn m(f: &Field, rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect()
    }

    #[test]
    fn kernel_and_rank() {
        let f = q();
        let a = m(&f, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&f, &a), 2);
        let k = kernel(&f, &a, 3);
        assert_eq!(k.len(), 1);
        assert!(is_zero_vector(&f, &mat_vec(&f, &a, &k[0])));
    }

    #[test]
    fn inverse_round_trip() {
        let f = Field::gf(5, 1);
        let a = m(&f, &[&[1, 2], &[3, 4]]);
        let inv = inverse(&f, &a).unwrap();
        assert_eq!(mat_mul(&f, &a, &inv), identity(&f, 2));
        assert!(inverse(&f, &m(&f, &[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn solve_and_coordinates() {
        let f = q();
        let a = m(&f, &[&[1, 1], &[1, -1]]);
        let x = solve(&f, &a, &[f.from_i64(3), f.from_i64(1)], 2).unwrap();
        assert_eq!(x, vec![f.from_i64(2), f.from_i64(1)]);
        let basis = vec![vec![f.one(), f.one(), f.zero()], vec![f.zero(), f.one(), f.one()]];
        let c = Coordinates::new(&f, basis).unwrap();
        let v = vec![f.from_i64(2), f.from_i64(5), f.from_i64(3)];
        assert_eq!(c.coords(&f, &v), Some(vec![f.from_i64(2), f.from_i64(3)]));
        assert_eq!(c.coords(&f, &[f.one(), f.zero(), f.zero()]), None);
        assert_eq!(independent_subset(&f, &[vec![f.one(), f.zero()], vec![f.from_i64(2), f.zero()], vec![f.zero(), f.one()]]), vec![0, 2]);
    }
}

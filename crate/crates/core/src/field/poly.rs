//! Dense univariate polynomials over a [`FiniteField`].
//!
//! Coefficients are stored low to high with no trailing zeros; the zero
//! polynomial is the empty vector.

use super::finite::FiniteField;

pub type Poly = Vec<u32>;

pub fn trim(p: &mut Poly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

pub fn degree(p: &[u32]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn constant(c: u32) -> Poly {
    if c == 0 {
        vec![]
    } else {
        vec![c]
    }
}

pub fn monomial(c: u32, d: usize) -> Poly {
    if c == 0 {
        return vec![];
    }
    let mut v = vec![0; d + 1];
    v[d] = c;
    v
}

pub fn add(f: &FiniteField, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(&mut out);
    out
}

pub fn neg(f: &FiniteField, a: &[u32]) -> Poly {
    a.iter().map(|&c| f.neg(c)).collect()
}

pub fn sub(f: &FiniteField, a: &[u32], b: &[u32]) -> Poly {
    add(f, a, &neg(f, b))
}

pub fn scale(f: &FiniteField, a: &[u32], c: u32) -> Poly {
    if c == 0 {
        return vec![];
    }
    a.iter().map(|&x| f.mul(x, c)).collect()
}

pub fn mul(f: &FiniteField, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Euclidean division; panics on a zero divisor.
pub fn divrem(f: &FiniteField, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv_lead = f.inv(b[db]).expect("nonzero leading coefficient");
    if r.len() <= db {
        return (vec![], r);
    }
    let mut qt = vec![0u32; r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = f.mul(r[r.len() - 1], inv_lead);
        qt[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
        }
        trim(&mut r);
    }
    trim(&mut qt);
    (qt, r)
}

pub fn rem(f: &FiniteField, a: &[u32], b: &[u32]) -> Poly {
    divrem(f, a, b).1
}

pub fn leading(a: &[u32]) -> u32 {
    *a.last().unwrap_or(&0)
}

pub fn monic(f: &FiniteField, a: &[u32]) -> Poly {
    match a.last() {
        None => vec![],
        Some(&lc) => scale(f, a, f.inv(lc).unwrap()),
    }
}

/// Monic greatest common divisor.
pub fn gcd(f: &FiniteField, a: &[u32], b: &[u32]) -> Poly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn xgcd(f: &FiniteField, a: &[u32], b: &[u32]) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1) = (constant(1), vec![]);
    let (mut t0, mut t1) = (vec![], constant(1));
    while !r1.is_empty() {
        let (qt, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &qt, &s1));
        let t = sub(f, &t0, &mul(f, &qt, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.is_empty() {
        return (r0, s0, t0);
    }
    let inv = f.inv(leading(&r0)).unwrap();
    (scale(f, &r0, inv), scale(f, &s0, inv), scale(f, &t0, inv))
}

pub fn eval(f: &FiniteField, a: &[u32], x: u32) -> u32 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// `base^e mod m` for a large exponent given as little-endian u64 limbs.
pub fn pow_mod(f: &FiniteField, base: &[u32], e: &num_bigint::BigUint, m: &[u32]) -> Poly {
    let mut acc = rem(f, &constant(1), m);
    let b = rem(f, base, m);
    for i in (0..e.bits()).rev() {
        acc = rem(f, &mul(f, &acc, &acc), m);
        if e.bit(i) {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
    }
    acc
}

/// Square root of a polynomial if it is a perfect square.
pub fn sqrt(f: &FiniteField, a: &[u32]) -> Option<Poly> {
    if a.is_empty() {
        return Some(vec![]);
    }
    let d = a.len() - 1;
    if d % 2 == 1 {
        return None;
    }
    let half = d / 2;
    if f.characteristic() == 2 {
        // squares in characteristic 2 only have even-degree terms
        let mut r = vec![0u32; half + 1];
        for (i, &c) in a.iter().enumerate() {
            if i % 2 == 1 {
                if c != 0 {
                    return None;
                }
            } else {
                r[i / 2] = f.sqrt(c)?;
            }
        }
        return Some(r);
    }
    let lead_root = f.sqrt(a[d])?;
    let two_inv = f.inv(f.from_int(2)).unwrap();
    let mut r = vec![0u32; half + 1];
    r[half] = lead_root;
    let denom_inv = f.mul(two_inv, f.inv(lead_root).unwrap());
    for i in 1..=half {
        // coefficient of X^{d-i} in r^2 determines r[half-i]
        let mut acc = a[d - i];
        for j in 1..i {
            acc = f.sub(acc, f.mul(r[half - j], r[half - (i - j)]));
        }
        r[half - i] = f.mul(acc, denom_inv);
    }
    trim(&mut r);
    if mul(f, &r, &r) == a {
        Some(r)
    } else {
        None
    }
}

/// All monic polynomials of the given degree, in encoding order.
pub fn monic_of_degree(f: &FiniteField, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = f.order() as u64;
    let count = q.pow(d as u32);
    (0..count).map(move |mut idx| {
        let mut v = Vec::with_capacity(d + 1);
        for _ in 0..d {
            v.push((idx % q) as u32);
            idx /= q;
        }
        v.push(1);
        v
    })
}

/// All polynomials of degree at most `d` (including zero), in encoding order.
pub fn all_up_to_degree(f: &FiniteField, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = f.order() as u64;
    let count = q.pow(d as u32 + 1);
    (0..count).map(move |mut idx| {
        let mut v = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            v.push((idx % q) as u32);
            idx /= q;
        }
        trim(&mut v);
        v
    })
}

pub fn is_irreducible(f: &FiniteField, a: &[u32]) -> bool {
    match degree(a) {
        None | Some(0) => false,
        Some(d) => {
            for e in 1..=d / 2 {
                for g in monic_of_degree(f, e) {
                    if rem(f, a, &g).is_empty() {
                        return false;
                    }
                }
            }
            true
        }
    }
}

/// Factorisation into monic irreducibles with multiplicities (trial
/// division; intended for the small degrees that occur in place sets).
pub fn factor(f: &FiniteField, a: &[u32]) -> Vec<(Poly, u32)> {
    let mut rest = monic(f, a);
    let mut out = Vec::new();
    let mut d = 1usize;
    while rest.len() > 1 {
        if 2 * d > rest.len() - 1 {
            out.push((rest.clone(), 1));
            break;
        }
        for g in monic_of_degree(f, d) {
            let mut mult = 0;
            loop {
                let (qt, r) = divrem(f, &rest, &g);
                if !r.is_empty() {
                    break;
                }
                rest = qt;
                mult += 1;
            }
            if mult > 0 {
                out.push((g, mult));
            }
        }
        d += 1;
    }
    // merge a trailing factor that repeats an earlier one
    out.sort();
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (g, m) in out {
        match merged.last_mut() {
            Some((h, mm)) if *h == g => *mm += m,
            _ => merged.push((g, m)),
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FiniteField {
        FiniteField::new(3, 1).unwrap()
    }

    #[test]
    fn division_identity() {
        let f = f3();
        let a = vec![1, 2, 0, 1, 2];
        let b = vec![2, 1, 1];
        let (qt, r) = divrem(&f, &a, &b);
        assert_eq!(add(&f, &mul(&f, &qt, &b), &r), a);
        assert!(r.len() < b.len());
    }

    #[test]
    fn factorisation_reassembles() {
        let f = f3();
        // (t + 1)^2 (t^2 + 1) t
        let a = mul(&f, &mul(&f, &[1, 1], &[1, 1]), &mul(&f, &[1, 0, 1], &[0, 1]));
        let fac = factor(&f, &a);
        assert_eq!(fac, vec![(vec![0, 1], 1), (vec![1, 0, 1], 1), (vec![1, 1], 2)]);
        assert!(is_irreducible(&f, &[1, 0, 1]));
        assert!(!is_irreducible(&f, &[2, 0, 1]));
    }

    #[test]
    fn square_roots() {
        let f = f3();
        let r = vec![2, 1, 1];
        assert_eq!(sqrt(&f, &mul(&f, &r, &r)), Some(r.clone()));
        assert_eq!(sqrt(&f, &[0, 1]), None);
        let f4 = FiniteField::new(2, 2).unwrap();
        let s = vec![3, 1, 2];
        let sq = mul(&f4, &s, &s);
        assert_eq!(sqrt(&f4, &sq), Some(s));
    }

    #[test]
    fn xgcd_bezout() {
        let f = FiniteField::new(5, 1).unwrap();
        let a = vec![1, 2, 3, 1];
        let b = vec![4, 0, 1];
        let (g, s, t) = xgcd(&f, &a, &b);
        assert_eq!(add(&f, &mul(&f, &s, &a), &mul(&f, &t, &b)), g);
        assert_eq!(g, gcd(&f, &a, &b));
    }
}

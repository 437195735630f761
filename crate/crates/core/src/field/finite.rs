//! Finite fields `F_{p^k}` with table-driven arithmetic.
//!
//! Elements are encoded as integers `0..q`: the base-`p` digits of the
//! encoding are the coefficients (low to high) of a polynomial in the
//! generator `a`, reduced modulo the stored defining polynomial. The
//! defining polynomial is the lexicographically least monic irreducible
//! polynomial of degree `k` over `F_p`, so canonical forms are reproducible.

use std::fmt;

/// Largest supported field size; keeps the log/exp tables small.
pub const MAX_FIELD_SIZE: u32 = 1 << 16;

#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}
impl Eq for FiniteField {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomial helpers over the prime field F_p, coefficients low to high.
fn pp_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    pp_trim(&mut r);
    let dm = m.len() - 1;
    let inv_lead = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (r[r.len() - 1] as u64 * inv_lead as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        pp_trim(&mut r);
    }
    r
}

fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    b = acc as u32;
    b
}

fn digits_of(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(k as usize);
    for _ in 0..k {
        d.push(x % p);
        x /= p;
    }
    d
}

fn encode(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn is_irreducible_prime_poly(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        // every monic polynomial of degree d
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut g = digits_of(low, p, d as u32);
            g.push(1);
            if pp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// Builds `F_{p^k}`. Fails when `p` is not prime, `k == 0`, or the field
    /// exceeds [`MAX_FIELD_SIZE`].
    pub fn new(p: u32, k: u32) -> Result<Self, String> {
        if !is_prime(p) {
            return Err(format!("{p} is not prime"));
        }
        if k == 0 {
            return Err("extension degree must be at least 1".into());
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= MAX_FIELD_SIZE as u64);
        let q = q.ok_or_else(|| format!("GF({p}^{k}) exceeds the supported size {MAX_FIELD_SIZE}"))? as u32;

        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|low| {
                    let mut f = digits_of(low, p, k);
                    f.push(1);
                    f
                })
                .find(|f| f[0] != 0 && is_irreducible_prime_poly(f, p))
                .expect("an irreducible polynomial of every degree exists")
        };

        let mut field = FiniteField {
            p,
            k,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add_table: None,
        };
        field.build_tables();
        Ok(field)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let (p, k) = (self.p, self.k);
        let da = digits_of(a, p, k);
        let db = digits_of(b, p, k);
        let mut prod = vec![0u32; 2 * k as usize];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
        let mut r = pp_rem(&prod, &self.modulus, p);
        r.resize(k as usize, 0);
        encode(&r, p)
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = q - 1;
        let mut exp = Vec::new();
        for g in 1..q {
            exp.clear();
            let mut x = 1u32;
            let mut ok = true;
            for i in 0..order {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = self.slow_mul(x, g);
            }
            if ok && x == 1 {
                break;
            }
        }
        let mut log = vec![0u32; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        self.exp = exp;
        self.log = log;
        if self.p != 2 && q <= 256 {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = self.digit_add(a, b);
                }
            }
            self.add_table = Some(t);
        }
    }

    fn digit_add(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.k
    }
    pub fn order(&self) -> u32 {
        self.q
    }
    /// Defining polynomial over `F_p`, coefficients low to high (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The class of the polynomial generator `a` (equals `p` as an encoding).
    pub fn generator(&self) -> u32 {
        if self.k == 1 {
            // prime fields: the generator is the root of X, i.e. zero;
            // callers never need it, return 1 to keep it nonzero.
            1
        } else {
            self.p
        }
    }

    /// Primitive element used for the log tables.
    pub fn primitive(&self) -> u32 {
        self.exp.get(1).copied().unwrap_or(1)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            a ^ b
        } else if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if let Some(t) = &self.add_table {
            t[(a * self.q + b) as usize]
        } else {
            self.digit_add(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        if self.k == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let d: Vec<u32> = digits_of(a, self.p, self.k)
            .into_iter()
            .map(|c| (self.p - c) % self.p)
            .collect();
        encode(&d, self.p)
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[e as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let order = self.q - 1;
        let l = self.log[a as usize];
        Some(self.exp[((order - l) % order) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64;
        self.exp[((l * (e % order)) % order) as usize]
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        digits_of(a, self.p, self.k)
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        encode(d, self.p)
    }

    pub fn is_square(&self, a: u32) -> bool {
        if a == 0 || self.p == 2 {
            return true;
        }
        self.log[a as usize].is_multiple_of(2)
    }

    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let order = self.q - 1;
        let l = self.log[a as usize];
        if self.p == 2 {
            // squaring is a bijection; 2 is invertible modulo the odd order
            let half = order.div_ceil(2);
            return Some(self.exp[((l as u64 * half as u64) % order as u64) as usize]);
        }
        if l % 2 == 1 {
            return None;
        }
        Some(self.exp[(l / 2) as usize])
    }

    /// Solves `u^2 + u = c` in characteristic 2 by enumeration.
    pub fn artin_schreier_root(&self, c: u32) -> Option<u32> {
        debug_assert_eq!(self.p, 2);
        (0..self.q).find(|&u| self.add(self.mul(u, u), u) == c)
    }

    /// Absolute trace down to `F_p`.
    pub fn trace(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.k {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        acc
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_polynomials_are_lexicographically_least() {
        // X^2 + X + 1 over F_2, X^2 + 1 over F_3, X^2 + 2 over F_5
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteField::new(5, 2).unwrap().modulus(), &[2, 0, 1]);
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn tables_are_consistent() {
        for (p, k) in [(2, 1), (2, 2), (2, 4), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (3, 5)] {
            let f = FiniteField::new(p, k).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.slow_mul(a, b), "{p}^{k}: {a}*{b}");
                    assert_eq!(f.add(a, b), f.digit_add(a, b));
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }

    #[test]
    fn squares_and_artin_schreier() {
        let f3 = FiniteField::new(3, 1).unwrap();
        assert!(f3.is_square(1));
        assert!(!f3.is_square(2));
        let f4 = FiniteField::new(2, 2).unwrap();
        let w = f4.artin_schreier_root(1).unwrap();
        assert_eq!(f4.add(f4.mul(w, w), w), 1);
        let f2 = FiniteField::new(2, 1).unwrap();
        assert_eq!(f2.artin_schreier_root(1), None);
        for a in f4.elements() {
            let r = f4.sqrt(a).unwrap();
            assert_eq!(f4.mul(r, r), a);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FiniteField::new(4, 1).is_err());
        assert!(FiniteField::new(3, 0).is_err());
        assert!(FiniteField::new(2, 17).is_err());
    }
}

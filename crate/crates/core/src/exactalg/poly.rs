//! Dense polynomials over a prime field `F_p`, `p <= 2^16`.

use std::cmp::Ordering;
use std::fmt;

/// A polynomial with coefficients in `F_p`, stored little-endian with no
/// trailing zeros.  Every coefficient is reduced to `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u32,
    coeffs: Vec<u32>,
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // extended Euclid over i64; p <= 2^16 so nothing overflows
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert!(r0 == 1, "not invertible mod p");
    t0.rem_euclid(p as i64) as u32
}

impl FpPoly {
    pub fn new(p: u32, coeffs: Vec<i64>) -> Self {
        let mut c: Vec<u32> = coeffs
            .into_iter()
            .map(|x| x.rem_euclid(p as i64) as u32)
            .collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, coeffs: c }
    }

    pub fn from_u32(p: u32, coeffs: Vec<u32>) -> Self {
        Self::new(p, coeffs.into_iter().map(|x| x as i64).collect())
    }

    pub fn zero(p: u32) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u32) -> Self {
        Self::from_u32(p, vec![1])
    }

    pub fn constant(p: u32, c: i64) -> Self {
        Self::new(p, vec![c])
    }

    pub fn x(p: u32) -> Self {
        Self::from_u32(p, vec![0, 1])
    }

    /// The monomial `c x^k`.
    pub fn monomial(p: u32, c: i64, k: usize) -> Self {
        let mut v = vec![0i64; k + 1];
        v[k] = c;
        Self::new(p, v)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u32 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed characteristics");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0i64; n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.coeff(i) as i64 + other.coeff(i) as i64;
        }
        Self::new(self.p, out)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&c| -(c as i64)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + (a as i64) * (b as i64)) % self.p as i64;
            }
        }
        Self::new(self.p, out)
    }

    pub fn scale(&self, c: i64) -> Self {
        self.mul(&Self::constant(self.p, c))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        self.check(divisor);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dlead = inv_mod(divisor.leading(), self.p);
        let dd = divisor.degree().unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.p);
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = (rem.leading() as i64 * dlead as i64).rem_euclid(self.p as i64);
            let t = Self::monomial(self.p, c, rd - dd);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(divisor));
        }
        (quot, rem)
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).1.is_zero()
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `g` monic and `s*a + t*b = g`.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = r1;
            r1 = r;
            let ns = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = ns;
            let nt = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = nt;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let u = inv_mod(r0.leading(), p) as i64;
        (r0.scale(u), s0.scale(u), t0.scale(u))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.leading() == 1 {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p) as i64)
    }

    pub fn eval(&self, a: u32) -> u32 {
        let p = self.p as u64;
        let a = (a as u64) % p;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * a + c as u64) % p;
        }
        acc as u32
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.divrem(modulus).1;
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).divrem(modulus).1;
            }
            base = base.mul(&base).divrem(modulus).1;
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let out: Vec<i64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as i64) * (c as i64))
            .collect();
        Self::new(self.p, out)
    }

    /// Inverse of a nonzero scalar in `F_p`.
    pub fn scalar_inv(p: u32, c: u32) -> u32 {
        inv_mod(c, p)
    }

    /// Inverse of a nonzero constant polynomial.
    pub fn constant_inv(&self) -> Option<Self> {
        if self.is_constant() && !self.is_zero() {
            Some(Self::from_u32(self.p, vec![inv_mod(self.coeff(0), self.p)]))
        } else {
            None
        }
    }
}

// Degree-major ordering: lower degree first, then big-endian coefficient
// comparison.  Gives "2 < x < x+1 < x^2" — the order used for prime points.
impl Ord for FpPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for FpPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => {
                    if c != 1 {
                        write!(f, "{c}")?;
                    }
                    write!(f, "x")?;
                }
                _ => {
                    if c != 1 {
                        write!(f, "{c}")?;
                    }
                    write!(f, "x^{k}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_roundtrip() {
        let p = 5;
        let a = FpPoly::new(p, vec![1, 2, 3, 4]);
        let b = FpPoly::new(p, vec![2, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn xgcd_identity() {
        let p = 3;
        let a = FpPoly::new(p, vec![2, 0, 1]); // x^2+2 = x^2-1 = (x+1)(x+2)
        let b = FpPoly::new(p, vec![1, 1]); // x+1
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(g, FpPoly::new(p, vec![1, 1]));
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn display_and_order() {
        let p = 7;
        assert_eq!(FpPoly::new(p, vec![1, 2, 1]).to_string(), "x^2+2x+1");
        assert_eq!(FpPoly::new(p, vec![0, 1]).to_string(), "x");
        assert!(FpPoly::constant(p, 3) < FpPoly::x(p));
        assert!(FpPoly::x(p) < FpPoly::new(p, vec![1, 1]));
    }

    #[test]
    fn eval_pow() {
        let p = 3;
        let f = FpPoly::new(p, vec![2, 0, 1]); // x^2 + 2
        assert_eq!(f.eval(1), 0);
        assert_eq!(f.eval(2), 0);
        assert_eq!(f.eval(0), 2);
        let m = FpPoly::new(p, vec![1, 0, 1]);
        let x = FpPoly::x(p);
        assert_eq!(x.pow_mod(9, &m), x.pow_mod(1, &m).pow_mod(9, &m));
    }
}

//! Factorization into prime points of the spectrum.
//!
//! Integers are factored by trial division; polynomials over `F_p` by
//! distinct-degree factorization followed by root search (degree 1) or
//! equal-degree splitting.  Both are desk-scale algorithms: inputs are small
//! by construction (degree cap 8, characteristic <= 2^16).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::FpPoly;
use super::ring::{BaseElem, RingDescriptor, RingElement};
use crate::error::{Error, Result};

pub const MAX_POLY_FACTOR_DEGREE: usize = 8;

/// A closed point of the spectrum: a normalized prime of the base ring that
/// stays prime in the localization (it does not divide the inverted element).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePoint {
    generator: BaseElem,
}

impl PrimePoint {
    /// Validates primality and compatibility with the ring's localization.
    pub fn new(ring: &RingDescriptor, generator: BaseElem) -> Result<Self> {
        let g = generator.normalized();
        if !is_prime(&g)? {
            return Err(Error::NotPrime(format!("{g}")));
        }
        if ring.is_localized() && g.divides(ring.inverted()) {
            return Err(Error::UnsupportedRing(format!(
                "({g}) is not a point of {}",
                ring.name()
            )));
        }
        Ok(PrimePoint { generator: g })
    }

    /// For primes produced internally (already normalized and coprime to the
    /// inverted element by construction).
    pub(crate) fn from_normalized(generator: BaseElem) -> Self {
        PrimePoint { generator }
    }

    pub fn generator(&self) -> &BaseElem {
        &self.generator
    }

    /// The generator as an element of `ring`.
    pub fn element(&self, ring: &RingDescriptor) -> RingElement {
        ring.element(self.generator.clone(), 0)
    }
}

impl fmt::Display for PrimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.generator)
    }
}

/// Primality of a normalized base element.
pub fn is_prime(e: &BaseElem) -> Result<bool> {
    match e {
        BaseElem::Int(n) => {
            let n = n.abs();
            if n < BigInt::from(2) {
                return Ok(false);
            }
            let Some(n) = n.to_u64() else {
                return Err(Error::Unsupported(
                    "primality test beyond desk scale".into(),
                ));
            };
            let mut d = 2u64;
            while d.checked_mul(d).map(|s| s <= n).unwrap_or(false) {
                if n % d == 0 {
                    return Ok(false);
                }
                d += 1;
            }
            Ok(true)
        }
        BaseElem::Poly(q) => {
            let Some(deg) = q.degree() else {
                return Ok(false);
            };
            if deg == 0 {
                return Ok(false);
            }
            if deg > MAX_POLY_FACTOR_DEGREE {
                return Err(Error::Unsupported(format!(
                    "irreducibility test capped at degree {MAX_POLY_FACTOR_DEGREE}"
                )));
            }
            Ok(is_irreducible(&q.monic()))
        }
    }
}

/// Irreducibility over `F_p` via x^{p^k} - x gcds.
fn is_irreducible(f: &FpPoly) -> bool {
    let p = f.p();
    let n = f.degree().unwrap();
    if n == 1 {
        return true;
    }
    let x = FpPoly::x(p);
    // x^{p^n} == x mod f, and gcd(x^{p^k} - x, f) = 1 for k = n/prime divisors
    let mut xp = x.clone();
    let mut powers = Vec::with_capacity(n);
    for _ in 0..n {
        xp = frobenius(&xp, f);
        powers.push(xp.clone());
    }
    if !powers[n - 1].sub(&x).divrem(f).1.is_zero() {
        return false;
    }
    for k in 1..n {
        if n % k == 0 && !powers[k - 1].sub(&x).gcd(f).is_one() {
            return false;
        }
    }
    true
}

/// g -> g^p mod f.
fn frobenius(g: &FpPoly, f: &FpPoly) -> FpPoly {
    g.pow_mod(f.p() as u64, f)
}

/// Prime factorization of a nonzero element, up to units.  Primes that
/// become units in the localization are dropped, so the result lists the
/// points of `V(a)` inside the localized spectrum with multiplicities.
pub fn factor(ring: &RingDescriptor, a: &RingElement) -> Result<Vec<(PrimePoint, u32)>> {
    if ring.is_zero(a) {
        return Err(Error::ZeroInput("factor(0)".into()));
    }
    let stripped = ring.strip_units(a);
    let mut out: BTreeMap<BaseElem, u32> = BTreeMap::new();
    match stripped {
        BaseElem::Int(n) => {
            let mut n = n.abs();
            let mut d = BigInt::from(2);
            while (&d * &d) <= n {
                while (&n % &d).is_zero() {
                    *out.entry(BaseElem::Int(d.clone())).or_insert(0) += 1;
                    n /= &d;
                }
                d += 1;
                if d.bits() > 34 {
                    return Err(Error::Unsupported(
                        "integer factorization beyond desk scale".into(),
                    ));
                }
            }
            if !n.is_one() {
                *out.entry(BaseElem::Int(n)).or_insert(0) += 1;
            }
        }
        BaseElem::Poly(q) => {
            for (irr, e) in factor_poly(&q)? {
                *out.entry(BaseElem::Poly(irr)).or_insert(0) += e;
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|(g, e)| (PrimePoint::from_normalized(g), e))
        .collect())
}

/// Squarefree radical (product of the distinct prime factors), normalized.
pub fn radical(a: &BaseElem) -> Result<BaseElem> {
    match a {
        BaseElem::Int(_) => {
            let ring = RingDescriptor::integers();
            let fs = factor(&ring, &ring.element(a.clone(), 0))?;
            let mut acc = BaseElem::int(1);
            for (p, _) in fs {
                acc = acc.mul(p.generator());
            }
            Ok(acc)
        }
        BaseElem::Poly(q) => {
            let fs = factor_poly(&q.monic())?;
            let mut acc = FpPoly::one(q.p());
            for (irr, _) in fs {
                acc = acc.mul(&irr);
            }
            Ok(BaseElem::Poly(acc))
        }
    }
}

/// Full factorization of a monic polynomial into monic irreducibles.
fn factor_poly(f: &FpPoly) -> Result<Vec<(FpPoly, u32)>> {
    let f = f.monic();
    let Some(deg) = f.degree() else {
        return Err(Error::ZeroInput("factor of zero polynomial".into()));
    };
    if deg == 0 {
        return Ok(vec![]);
    }
    if deg > MAX_POLY_FACTOR_DEGREE {
        return Err(Error::Unsupported(format!(
            "polynomial factorization capped at degree {MAX_POLY_FACTOR_DEGREE}"
        )));
    }
    let mut out: BTreeMap<FpPoly, u32> = BTreeMap::new();
    let mut rem = f;
    while rem.degree().unwrap_or(0) > 0 {
        let piece = extract_irreducible(&rem)?;
        let mut mult = 0;
        loop {
            let (q, r) = rem.divrem(&piece);
            if !r.is_zero() {
                break;
            }
            rem = q;
            mult += 1;
        }
        *out.entry(piece).or_insert(0) += mult;
    }
    Ok(out.into_iter().collect())
}

/// Finds one monic irreducible factor of `f` (deg f >= 1).
fn extract_irreducible(f: &FpPoly) -> Result<FpPoly> {
    let p = f.p();
    let x = FpPoly::x(p);
    // peel a squarefree part: gcd with derivative
    let der = f.derivative();
    let sqfree = if der.is_zero() {
        // f = g(x^p); its roots coincide with those of g in any splitting
        // field, and every irreducible factor of f divides gcd(f, x^{p^k}-x)
        // for some k, so the DDF below still finds one after we fall back to
        // the full f.  Desk-scale degrees keep this cheap.
        f.clone()
    } else {
        let g = f.gcd(&der);
        if g.is_one() {
            f.clone()
        } else {
            f.divrem(&g).0
        }
    };
    let sqfree = if sqfree.degree().unwrap_or(0) == 0 {
        f.clone()
    } else {
        sqfree
    };

    // distinct-degree: find the least d with gcd(x^{p^d} - x, sqfree) != 1
    let n = sqfree.degree().unwrap();
    let mut xp = x.clone();
    for d in 1..=n {
        xp = frobenius(&xp, &sqfree);
        let g = xp.sub(&x).gcd(&sqfree);
        if g.is_one() {
            continue;
        }
        let gd = g.degree().unwrap();
        if gd == d {
            return Ok(g);
        }
        return split_equal_degree(&g, d);
    }
    // sqfree itself irreducible
    Ok(sqfree)
}

/// Splits a product of distinct monic irreducibles, all of degree `d`.
fn split_equal_degree(g: &FpPoly, d: usize) -> Result<FpPoly> {
    let p = g.p();
    if d == 1 {
        // brute-force root search, p <= 2^16
        for a in 0..p {
            if g.eval(a) == 0 {
                return Ok(FpPoly::new(p, vec![-(a as i64), 1]));
            }
        }
        unreachable!("degree-1 product with no root");
    }
    // brute-force enumeration of monic degree-d candidates when feasible
    let count = (p as u64).checked_pow(d as u32);
    if let Some(c) = count {
        if c <= 1 << 16 {
            for idx in 0..c {
                let mut coeffs: Vec<i64> = Vec::with_capacity(d + 1);
                let mut v = idx;
                for _ in 0..d {
                    coeffs.push((v % p as u64) as i64);
                    v /= p as u64;
                }
                coeffs.push(1);
                let cand = FpPoly::new(p, coeffs);
                if cand.divides(g) {
                    return Ok(cand);
                }
            }
            unreachable!("no irreducible factor found by enumeration");
        }
    }
    // Cantor–Zassenhaus with a fixed-seed generator, for large p^d
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut g = g.clone();
    for _ in 0..512 {
        if g.degree() == Some(d) {
            return Ok(g.monic());
        }
        let deg_r = g.degree().unwrap() - 1;
        let coeffs: Vec<i64> = (0..=deg_r).map(|_| (next() % p as u64) as i64).collect();
        let r = FpPoly::new(p, coeffs);
        if r.degree().is_none() {
            continue;
        }
        let h = if p == 2 {
            // trace map T(r) = r + r^2 + r^4 + ... + r^{2^{d-1}}
            let mut acc = FpPoly::zero(2);
            let mut cur = r.clone().divrem(&g).1;
            for _ in 0..d {
                acc = acc.add(&cur).divrem(&g).1;
                cur = cur.mul(&cur).divrem(&g).1;
            }
            acc
        } else {
            // r^{(p^d - 1)/2} - 1 mod g
            let mut e = BigInt::from(p);
            e = e.pow(d as u32);
            e -= 1;
            e /= 2;
            let mut acc = FpPoly::one(p);
            let mut base = r.divrem(&g).1;
            let mut bits = e.clone();
            while bits > BigInt::zero() {
                if bits.is_odd() {
                    acc = acc.mul(&base).divrem(&g).1;
                }
                base = base.mul(&base).divrem(&g).1;
                bits /= 2;
            }
            acc.sub(&FpPoly::one(p))
        };
        let cand = h.gcd(&g);
        let cd = cand.degree().unwrap_or(0);
        if cd > 0 && cd < g.degree().unwrap() {
            g = cand;
        }
    }
    Err(Error::Unsupported(
        "equal-degree splitting did not converge".into(),
    ))
}

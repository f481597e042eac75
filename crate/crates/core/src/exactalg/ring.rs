//! Coefficient rings: `Z`, `F_p[x]`, and localizations at one element.
//!
//! Elements of a localized ring are kept in the normal form `num * f^e` where
//! `f` is the (squarefree, normalized) inverted element and `f` does not
//! divide `num`.  With that constraint the pair `(num, e)` is unique, so
//! structural equality is semantic equality.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::FpPoly;
use crate::error::{Error, Result};

pub const MAX_FP_CHAR: u32 = 1 << 16;

/// Trial-division primality for small moduli.
pub fn is_small_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    let p = p as u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseRing {
    Integers,
    PolyOverFp { p: u32 },
}

impl BaseRing {
    pub fn zero(&self) -> BaseElem {
        match self {
            BaseRing::Integers => BaseElem::Int(BigInt::zero()),
            BaseRing::PolyOverFp { p } => BaseElem::Poly(FpPoly::zero(*p)),
        }
    }

    pub fn one(&self) -> BaseElem {
        match self {
            BaseRing::Integers => BaseElem::Int(BigInt::one()),
            BaseRing::PolyOverFp { p } => BaseElem::Poly(FpPoly::one(*p)),
        }
    }
}

/// An element of a base ring (`Z` or `F_p[x]`).
///
/// Arithmetic is self-contained: polynomials carry their characteristic, so
/// no ring context is required at this level.  Mixing variants panics — the
/// public API checks ring compatibility before descending here.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseElem {
    Int(BigInt),
    Poly(FpPoly),
}

impl BaseElem {
    pub fn int(n: i64) -> Self {
        BaseElem::Int(BigInt::from(n))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            BaseElem::Int(n) => n.is_zero(),
            BaseElem::Poly(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            BaseElem::Int(n) => n.is_one(),
            BaseElem::Poly(q) => q.is_one(),
        }
    }

    pub fn is_unit(&self) -> bool {
        match self {
            BaseElem::Int(n) => n.abs().is_one(),
            BaseElem::Poly(q) => q.is_constant() && !q.is_zero(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (BaseElem::Int(a), BaseElem::Int(b)) => BaseElem::Int(a + b),
            (BaseElem::Poly(a), BaseElem::Poly(b)) => BaseElem::Poly(a.add(b)),
            _ => panic!("mixed base elements"),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        match (self, other) {
            (BaseElem::Int(a), BaseElem::Int(b)) => BaseElem::Int(a - b),
            (BaseElem::Poly(a), BaseElem::Poly(b)) => BaseElem::Poly(a.sub(b)),
            _ => panic!("mixed base elements"),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (BaseElem::Int(a), BaseElem::Int(b)) => BaseElem::Int(a * b),
            (BaseElem::Poly(a), BaseElem::Poly(b)) => BaseElem::Poly(a.mul(b)),
            _ => panic!("mixed base elements"),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            BaseElem::Int(a) => BaseElem::Int(-a),
            BaseElem::Poly(a) => BaseElem::Poly(a.neg()),
        }
    }

    /// Euclidean division with `|r| < |b|` (resp. `deg r < deg b`).
    pub fn divrem(&self, other: &Self) -> (Self, Self) {
        match (self, other) {
            (BaseElem::Int(a), BaseElem::Int(b)) => {
                assert!(!b.is_zero(), "division by zero");
                let (q, r) = a.div_rem(b);
                (BaseElem::Int(q), BaseElem::Int(r))
            }
            (BaseElem::Poly(a), BaseElem::Poly(b)) => {
                let (q, r) = a.divrem(b);
                (BaseElem::Poly(q), BaseElem::Poly(r))
            }
            _ => panic!("mixed base elements"),
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        self.try_exact_div_into(other).is_some()
    }

    /// `other / self` when the division is exact.
    pub fn try_exact_div_into(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return Some(other.clone());
        }
        if self.is_zero() {
            return None;
        }
        let (q, r) = other.divrem(self);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn exact_div(&self, divisor: &Self) -> Self {
        divisor
            .try_exact_div_into(self)
            .expect("division was not exact")
    }

    pub fn gcd(&self, other: &Self) -> Self {
        match (self, other) {
            (BaseElem::Int(a), BaseElem::Int(b)) => BaseElem::Int(a.gcd(b)),
            (BaseElem::Poly(a), BaseElem::Poly(b)) => BaseElem::Poly(a.gcd(b)),
            _ => panic!("mixed base elements"),
        }
    }

    /// Extended gcd `(g, s, t)` with `g` normalized and `s*a + t*b = g`.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        match (self, other) {
            (BaseElem::Int(a), BaseElem::Int(b)) => {
                let e = a.extended_gcd(b);
                (BaseElem::Int(e.gcd), BaseElem::Int(e.x), BaseElem::Int(e.y))
            }
            (BaseElem::Poly(a), BaseElem::Poly(b)) => {
                let (g, s, t) = a.xgcd(b);
                (BaseElem::Poly(g), BaseElem::Poly(s), BaseElem::Poly(t))
            }
            _ => panic!("mixed base elements"),
        }
    }

    /// The unit `u` such that `u * self` is normalized (nonnegative / monic).
    pub fn normalizing_unit(&self) -> Self {
        match self {
            BaseElem::Int(a) => {
                if a.is_negative() {
                    BaseElem::int(-1)
                } else {
                    BaseElem::int(1)
                }
            }
            BaseElem::Poly(q) => {
                if q.is_zero() || q.leading() == 1 {
                    BaseElem::Poly(FpPoly::one(q.p()))
                } else {
                    let inv = FpPoly::scalar_inv(q.p(), q.leading());
                    BaseElem::Poly(FpPoly::constant(q.p(), inv as i64))
                }
            }
        }
    }

    pub fn normalized(&self) -> Self {
        self.normalizing_unit().mul(self)
    }

    pub fn inv_of_unit(&self) -> Option<Self> {
        match self {
            BaseElem::Int(a) => {
                if a.abs().is_one() {
                    Some(BaseElem::Int(a.clone()))
                } else {
                    None
                }
            }
            BaseElem::Poly(q) => q.constant_inv().map(BaseElem::Poly),
        }
    }

    /// Rough size used for pivot selection: bit length or degree.
    pub fn size_hint(&self) -> u64 {
        match self {
            BaseElem::Int(a) => a.bits(),
            BaseElem::Poly(q) => q.degree().map(|d| d as u64 + 1).unwrap_or(0),
        }
    }

    /// The multiplicative identity of the same base ring.
    pub fn one_like(&self) -> Self {
        match self {
            BaseElem::Int(_) => BaseElem::int(1),
            BaseElem::Poly(q) => BaseElem::Poly(FpPoly::one(q.p())),
        }
    }
}

impl Ord for BaseElem {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (BaseElem::Int(a), BaseElem::Int(b)) => a.cmp(b),
            (BaseElem::Poly(a), BaseElem::Poly(b)) => a.cmp(b),
            (BaseElem::Int(_), BaseElem::Poly(_)) => Ordering::Less,
            (BaseElem::Poly(_), BaseElem::Int(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for BaseElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BaseElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseElem::Int(a) => write!(f, "{a}"),
            BaseElem::Poly(q) => write!(f, "{q}"),
        }
    }
}

/// An element of a (possibly localized) supported ring: the value is
/// `num * f^fexp` where `f` is the ring's inverted element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    pub(crate) num: BaseElem,
    pub(crate) fexp: i64,
}

impl RingElement {
    pub fn numerator(&self) -> &BaseElem {
        &self.num
    }

    pub fn fexp(&self) -> i64 {
        self.fexp
    }
}

/// A supported coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    base: BaseRing,
    /// Normalized squarefree non-unit, or `1` when no localization.
    inverted: BaseElem,
}

impl RingDescriptor {
    pub fn integers() -> Self {
        RingDescriptor {
            base: BaseRing::Integers,
            inverted: BaseElem::int(1),
        }
    }

    pub fn poly_over_fp(p: u32) -> Result<Self> {
        if p > MAX_FP_CHAR || !is_small_prime(p) {
            return Err(Error::UnsupportedRing(format!(
                "characteristic {p} is not a prime <= 2^16"
            )));
        }
        Ok(RingDescriptor {
            base: BaseRing::PolyOverFp { p },
            inverted: BaseElem::Poly(FpPoly::one(p)),
        })
    }

    /// A ring with an explicit inverted element.  The element is replaced by
    /// its squarefree normalized radical so that the descriptor is canonical
    /// regardless of how the localization was written down.
    pub fn with_inverted(base: BaseRing, inverted: BaseElem) -> Result<Self> {
        let mut ring = match base {
            BaseRing::Integers => Self::integers(),
            BaseRing::PolyOverFp { p } => Self::poly_over_fp(p)?,
        };
        if inverted.is_zero() {
            return Err(Error::ZeroInput("cannot invert zero".into()));
        }
        if !inverted.is_unit() {
            ring.inverted = super::factor::radical(&inverted)?;
        }
        Ok(ring)
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }

    pub fn inverted(&self) -> &BaseElem {
        &self.inverted
    }

    pub fn is_localized(&self) -> bool {
        !self.inverted.is_one()
    }

    /// Invert an additional element; `D(f) ∩ D(g) = D(fg)`.
    pub fn localize(&self, extra: &RingElement) -> Result<Self> {
        if extra.num.is_zero() {
            return Err(Error::ZeroInput("cannot invert zero".into()));
        }
        let product = self.inverted.mul(&extra.num);
        Self::with_inverted(self.base.clone(), product)
    }

    /// Short human name, e.g. `Z`, `F_3[x]`, `Z[1/6]`.
    pub fn name(&self) -> String {
        let base = match &self.base {
            BaseRing::Integers => "Z".to_string(),
            BaseRing::PolyOverFp { p } => format!("F_{p}[x]"),
        };
        if self.is_localized() {
            format!("{base}[1/{}]", self.inverted)
        } else {
            base
        }
    }

    pub fn same_ring(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.name(),
                other.name()
            )))
        }
    }

    // ---- element constructors ----

    pub fn zero(&self) -> RingElement {
        RingElement {
            num: self.base.zero(),
            fexp: 0,
        }
    }

    pub fn one(&self) -> RingElement {
        RingElement {
            num: self.base.one(),
            fexp: 0,
        }
    }

    pub fn from_int(&self, n: i64) -> RingElement {
        let num = match &self.base {
            BaseRing::Integers => BaseElem::Int(BigInt::from(n)),
            BaseRing::PolyOverFp { p } => BaseElem::Poly(FpPoly::constant(*p, n)),
        };
        self.element(num, 0)
    }

    /// Normalized element with value `num * f^fexp`.
    pub fn element(&self, num: BaseElem, fexp: i64) -> RingElement {
        self.check_variant(&num);
        if num.is_zero() {
            return self.zero();
        }
        if !self.is_localized() {
            return RingElement { num, fexp: 0 };
        }
        let mut num = num;
        let mut fexp = fexp;
        while let Some(q) = self.inverted.try_exact_div_into(&num) {
            num = q;
            fexp += 1;
        }
        RingElement { num, fexp }
    }

    fn check_variant(&self, e: &BaseElem) {
        match (&self.base, e) {
            (BaseRing::Integers, BaseElem::Int(_)) => {}
            (BaseRing::PolyOverFp { p }, BaseElem::Poly(q)) => {
                assert_eq!(*p, q.p(), "characteristic mismatch")
            }
            _ => panic!("element does not belong to {}", self.name()),
        }
    }

    /// `f^e` as a base element; requires `e >= 0`.
    fn inverted_pow(&self, e: i64) -> BaseElem {
        assert!(e >= 0);
        let mut acc = self.base.one();
        for _ in 0..e {
            acc = acc.mul(&self.inverted);
        }
        acc
    }

    // ---- arithmetic ----

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        if a.num.is_zero() {
            return b.clone();
        }
        if b.num.is_zero() {
            return a.clone();
        }
        let m = a.fexp.min(b.fexp);
        let na = a.num.mul(&self.inverted_pow(a.fexp - m));
        let nb = b.num.mul(&self.inverted_pow(b.fexp - m));
        self.element(na.add(&nb), m)
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        RingElement {
            num: a.num.neg(),
            fexp: a.fexp,
        }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.element(a.num.mul(&b.num), a.fexp + b.fexp)
    }

    pub fn is_zero(&self, a: &RingElement) -> bool {
        a.num.is_zero()
    }

    pub fn is_one(&self, a: &RingElement) -> bool {
        a.fexp == 0 && a.num.is_one()
    }

    /// Units of `R_f` are (base units) * (products of prime factors of `f`).
    pub fn is_unit(&self, a: &RingElement) -> bool {
        !a.num.is_zero() && self.strip_units(a).is_one()
    }

    /// Canonical associate representative: the numerator with every prime
    /// factor of the inverted element removed, sign/leading normalized.  The
    /// result is a base element coprime to `f`; zero maps to zero.
    pub fn strip_units(&self, a: &RingElement) -> BaseElem {
        if a.num.is_zero() {
            return self.base.zero();
        }
        let mut n = a.num.clone();
        if self.is_localized() {
            loop {
                let g = n.gcd(&self.inverted);
                if g.is_unit() {
                    break;
                }
                n = n.exact_div(&g);
            }
        }
        n.normalized()
    }

    /// Inverse of a unit.
    pub fn inv_unit(&self, a: &RingElement) -> Result<RingElement> {
        if let Some(inv) = a.num.inv_of_unit() {
            return Ok(RingElement {
                num: inv,
                fexp: -a.fexp,
            });
        }
        if !self.is_unit(a) {
            return Err(Error::ZeroInput(format!(
                "{} is not a unit of {}",
                self.format_element(a),
                self.name()
            )));
        }
        // num divides f^k for some k; then 1/num = (f^k/num) * f^{-k}
        let mut acc = self.base.one();
        for k in 0..256i64 {
            if let Some(q) = a.num.try_exact_div_into(&acc) {
                return Ok(self.element(q, -k - a.fexp));
            }
            acc = acc.mul(&self.inverted);
        }
        Err(Error::Unsupported("unit inversion exceeded bound".into()))
    }

    /// `a / b` when the quotient lies in the ring.
    pub fn try_exact_div(&self, a: &RingElement, b: &RingElement) -> Option<RingElement> {
        if b.num.is_zero() {
            return None;
        }
        if a.num.is_zero() {
            return Some(self.zero());
        }
        // b.num = w * s with s the canonical associate (coprime to f) and w a
        // unit numerator; a/b = (a.num/s) f^{a.fexp} * (w f^{b.fexp})^{-1}
        let s = self.strip_units(b);
        let w = b.num.exact_div(&s);
        let q = s.try_exact_div_into(&a.num)?;
        let inv = self
            .inv_unit(&RingElement {
                num: w,
                fexp: b.fexp,
            })
            .ok()?;
        Some(self.mul(&self.element(q, a.fexp), &inv))
    }

    pub fn divides(&self, a: &RingElement, b: &RingElement) -> bool {
        if a.num.is_zero() {
            return b.num.is_zero();
        }
        self.try_exact_div(b, a).is_some()
    }

    /// Exact power `f^e` as a ring element (e may be negative).
    pub fn inverted_power(&self, e: i64) -> RingElement {
        if !self.is_localized() {
            return self.one();
        }
        self.element(self.base.one(), e)
    }

    // ---- formatting ----

    /// Canonical display: a plain base element when `fexp >= 0` (multiplied
    /// out), otherwise `num/den` with the denominator multiplied out.
    pub fn format_element(&self, a: &RingElement) -> String {
        if a.fexp >= 0 {
            let v = a.num.mul(&self.inverted_pow(a.fexp));
            format!("{v}")
        } else {
            let den = self.inverted_pow(-a.fexp);
            let wrap = |e: &BaseElem| {
                let s = format!("{e}");
                if s.contains('+') || s.contains('-') {
                    format!("({s})")
                } else {
                    s
                }
            };
            format!("{}/{}", wrap(&a.num), wrap(&den))
        }
    }
}

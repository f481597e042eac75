//! Parsing of element strings: decimal integers, polynomial expressions in
//! `x`, and fractions `a/b` whose denominator is a unit of the ring.

use num_bigint::BigInt;

use super::poly::FpPoly;
use super::ring::{BaseElem, BaseRing, RingDescriptor, RingElement};
use crate::error::{Error, Result};

pub fn parse_element(ring: &RingDescriptor, input: &str) -> Result<RingElement> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty element".into()));
    }
    match split_fraction(&s)? {
        (num, None) => {
            let n = parse_base(ring.base(), strip_parens(num))?;
            Ok(ring.element(n, 0))
        }
        (num, Some(den)) => {
            let n = parse_base(ring.base(), strip_parens(num))?;
            let d = parse_base(ring.base(), strip_parens(den))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{input}'")));
            }
            let den = ring.element(d, 0);
            let inv = ring.inv_unit(&den).map_err(|_| {
                Error::Parse(format!(
                    "denominator '{den}' is not a unit of {}",
                    ring.name(),
                    den = ring.format_element(&den),
                ))
            })?;
            Ok(ring.mul(&ring.element(n, 0), &inv))
        }
    }
}

/// Splits at a top-level `/`; respects parentheses.
fn split_fraction(s: &str) -> Result<(&str, Option<&str>)> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse(format!("unbalanced ')' in '{s}'")))?
            }
            '/' if depth == 0 => {
                return Ok((&s[..i], Some(&s[i + 1..])));
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced '(' in '{s}'")));
    }
    Ok((s, None))
}

fn strip_parens(s: &str) -> &str {
    let t = s.trim();
    if t.starts_with('(') && t.ends_with(')') {
        // only strip if they match up
        let inner = &t[1..t.len() - 1];
        let mut depth = 0i64;
        for c in inner.chars() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if depth < 0 {
                return t;
            }
        }
        if depth == 0 {
            return inner;
        }
    }
    t
}

fn parse_base(base: &BaseRing, s: &str) -> Result<BaseElem> {
    match base {
        BaseRing::Integers => {
            if s.contains('x') {
                return Err(Error::Parse(format!(
                    "'{s}' is not an integer (polynomials need an F_p[x] ring)"
                )));
            }
            let n: BigInt = s
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer '{s}'")))?;
            Ok(BaseElem::Int(n))
        }
        BaseRing::PolyOverFp { p } => Ok(BaseElem::Poly(parse_poly(*p, s)?)),
    }
}

/// Sums of terms `c`, `x`, `c*x^k`, `cx^k`, with `+`/`-` separators.
fn parse_poly(p: u32, s: &str) -> Result<FpPoly> {
    let mut acc = FpPoly::zero(p);
    let mut term = String::new();
    let mut sign = 1i64;
    let mut started = false;
    let flush = |acc: &FpPoly, term: &str, sign: i64| -> Result<FpPoly> {
        if term.is_empty() {
            return Err(Error::Parse(format!("dangling sign in '{s}'")));
        }
        Ok(acc.add(&parse_term(p, term, sign)?))
    };
    for c in s.chars() {
        match c {
            '+' | '-' if started && !term.is_empty() => {
                acc = flush(&acc, &term, sign)?;
                term.clear();
                sign = if c == '-' { -1 } else { 1 };
            }
            '-' if !started || term.is_empty() => {
                sign = -sign;
                started = true;
            }
            '+' if term.is_empty() => {
                started = true;
            }
            _ => {
                term.push(c);
                started = true;
            }
        }
    }
    acc = flush(&acc, &term, sign)?;
    Ok(acc)
}

fn parse_term(p: u32, term: &str, sign: i64) -> Result<FpPoly> {
    let bad = || Error::Parse(format!("bad term '{term}'"));
    let (coeff_str, var_str) = match term.find('x') {
        None => (term, None),
        Some(i) => (&term[..i], Some(&term[i..])),
    };
    let coeff_str = coeff_str.trim_end_matches('*');
    let coeff: i64 = if coeff_str.is_empty() {
        1
    } else {
        coeff_str.parse().map_err(|_| bad())?
    };
    let deg: usize = match var_str {
        None => 0,
        Some(v) => {
            if v == "x" {
                1
            } else {
                let rest = v.strip_prefix("x^").ok_or_else(bad)?;
                rest.parse().map_err(|_| bad())?
            }
        }
    };
    Ok(FpPoly::monomial(p, sign * coeff, deg))
}

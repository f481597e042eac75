//! Restriction of perfect complexes to basic opens `D(f)` and extension
//! back to the whole spectrum.
//!
//! Over a PID spectrum every quasi-compact open is a basic open, so the
//! general gluing of extensions degenerates to a single chart.  Extension of
//! a perfect complex is achieved by clearing denominators through a
//! per-degree rescaling of bases; support-constrained extension lifts the
//! split model of the restricted complex divisor by divisor.

use std::collections::BTreeMap;

use crate::aisle::{orthogonal_all_shifts, OrthoOutcome};
use crate::complex::{homology_split, split_model, ChainMap, PerfectComplex};
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, RingDescriptor, RingElement};
use crate::supports::{koszul, SpecSubset};

/// The open immersion `D(f) -> Spec(ambient)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenImmersion {
    ambient: RingDescriptor,
    f: RingElement,
    localized: RingDescriptor,
}

impl OpenImmersion {
    pub fn new(ambient: RingDescriptor, f: RingElement) -> Result<Self> {
        if ambient.is_zero(&f) {
            return Err(Error::ZeroInput("D(0) is empty".into()));
        }
        let localized = ambient.localize(&f)?;
        Ok(OpenImmersion {
            ambient,
            f,
            localized,
        })
    }

    pub fn ambient(&self) -> &RingDescriptor {
        &self.ambient
    }

    pub fn f(&self) -> &RingElement {
        &self.f
    }

    pub fn localized(&self) -> &RingDescriptor {
        &self.localized
    }

    /// Carries an ambient element to the localized ring (same value).
    pub fn restrict_element(&self, e: &RingElement) -> RingElement {
        convert_element(&self.ambient, &self.localized, e)
    }

    /// Carries a localized element with nonnegative exponent back to the
    /// ambient ring; `None` if the value genuinely has a denominator.
    pub fn lift_element(&self, e: &RingElement) -> Option<RingElement> {
        if self.localized.is_zero(e) {
            return Some(self.ambient.zero());
        }
        if e.fexp() < 0 {
            return None;
        }
        let mut v = e.numerator().clone();
        for _ in 0..e.fexp() {
            v = v.mul(self.localized.inverted());
        }
        Some(self.ambient.element(v, 0))
    }
}

/// Re-normalizes an element of `from` as an element of `to`; the inverted
/// element of `to` must be divisible by the one of `from`.
fn convert_element(
    from: &RingDescriptor,
    to: &RingDescriptor,
    e: &RingElement,
) -> RingElement {
    if from.is_zero(e) {
        return to.zero();
    }
    let fexp = e.fexp();
    if fexp >= 0 {
        let mut v = e.numerator().clone();
        for _ in 0..fexp {
            v = v.mul(from.inverted());
        }
        to.element(v, 0)
    } else {
        // value = num / f_old^k; f_old divides f_new, so
        // 1/f_old = (f_new/f_old) / f_new
        let cofactor = from
            .inverted()
            .try_exact_div_into(to.inverted())
            .expect("localization must refine");
        let mut v = e.numerator().clone();
        for _ in 0..(-fexp) {
            v = v.mul(&cofactor);
        }
        to.element(v, fexp)
    }
}

/// `j^*`: same ranks, differentials reinterpreted over the localized ring.
pub fn restrict(e: &PerfectComplex, j: &OpenImmersion) -> Result<PerfectComplex> {
    e.ring().same_ring(&j.ambient)?;
    restrict_to(e, &j.localized)
}

fn restrict_to(e: &PerfectComplex, target: &RingDescriptor) -> Result<PerfectComplex> {
    let source = e.ring().clone();
    let (Some(lo), Some(hi)) = (e.lo(), e.hi()) else {
        return Ok(PerfectComplex::zero(target.clone()));
    };
    let mut ranks = vec![];
    let mut diffs = vec![];
    for n in lo..=hi {
        ranks.push(e.rank(n));
        if n < hi {
            let d = e.diff_or_zero(n);
            diffs.push(d.map(|x| convert_element(&source, target, x)));
        }
    }
    PerfectComplex::new(target.clone(), lo, ranks, diffs)
}

/// Restriction of a chain map along `j^*`.
pub fn restrict_map(m: &ChainMap, j: &OpenImmersion) -> Result<ChainMap> {
    let source = restrict(&m.source, j)?;
    let target = restrict(&m.target, j)?;
    let mut comps = BTreeMap::new();
    if let (Some(lo), Some(hi)) = (m.source.lo(), m.source.hi()) {
        for n in lo..=hi {
            let c = m.component(n);
            if c.rows() == 0 || c.cols() == 0 {
                continue;
            }
            comps.insert(
                n,
                c.map(|x| convert_element(m.source.ring(), &j.localized, x)),
            );
        }
    }
    ChainMap::new(source, target, comps)
}

/// Extension of `F` over `D(f)` to a perfect complex on the whole spectrum,
/// together with the comparison isomorphism `restrict(E) -> F`.
///
/// Denominators are cleared by rescaling the degree-`n` basis by `f^{a_n}`
/// with the exponents accumulated so every differential entry lands in the
/// ambient ring; the rescaled matrices still square to zero exactly.
pub fn extend_perfect_with_witness(
    f_cx: &PerfectComplex,
    j: &OpenImmersion,
) -> Result<(PerfectComplex, ChainMap)> {
    f_cx.ring().same_ring(&j.localized)?;
    f_cx.ensure_valid()?;
    let loc = &j.localized;
    let (Some(lo), Some(hi)) = (f_cx.lo(), f_cx.hi()) else {
        let e = PerfectComplex::zero(j.ambient.clone());
        let w = ChainMap::zero(
            PerfectComplex::zero(loc.clone()),
            PerfectComplex::zero(loc.clone()),
        )?;
        return Ok((e, w));
    };
    // exponents: a_{lo} = 0, a_{n+1} = a_n + min(0, min fexp of d^n)
    let mut exps: BTreeMap<i64, i64> = BTreeMap::new();
    exps.insert(lo, 0);
    for n in lo..hi {
        let d = f_cx.diff_or_zero(n);
        let min_fexp = d
            .entries()
            .filter(|x| !loc.is_zero(x))
            .map(|x| x.fexp())
            .min()
            .unwrap_or(0);
        let a_n = exps[&n];
        exps.insert(n + 1, a_n + min_fexp.min(0));
    }
    let mut ranks = vec![];
    let mut diffs = vec![];
    for n in lo..=hi {
        ranks.push(f_cx.rank(n));
        if n < hi {
            let scale = loc.inverted_power(exps[&n] - exps[&(n + 1)]);
            let d = f_cx.diff_or_zero(n).map(|x| loc.mul(&scale, x));
            let lifted = d.map(|x| {
                j.lift_element(x)
                    .expect("cleared differential must be ambient")
            });
            diffs.push(lifted);
        }
    }
    let extended = PerfectComplex::new(j.ambient.clone(), lo, ranks, diffs)?;
    extended.ensure_valid()?;

    // comparison restrict(E) -> F: diag(f^{a_n}) in each degree
    let restricted = restrict(&extended, j)?;
    let mut comps = BTreeMap::new();
    for n in lo..=hi {
        if f_cx.rank(n) == 0 {
            continue;
        }
        let u = loc.inverted_power(exps[&n]);
        comps.insert(n, Matrix::identity(loc, f_cx.rank(n)).scale(loc, &u));
    }
    let witness = ChainMap::new(restricted, f_cx.clone(), comps)?;
    witness.ensure_valid()?;
    Ok((extended, witness))
}

/// Extension of `F` to the ambient spectrum; `restrict(extend_perfect(F))`
/// is isomorphic to `F`.
pub fn extend_perfect(f_cx: &PerfectComplex, j: &OpenImmersion) -> Result<PerfectComplex> {
    Ok(extend_perfect_with_witness(f_cx, j)?.0)
}

/// Support-constrained extension: `F` must be torsion with
/// `Supph^{>=i}(F) ⊆ Z` and ranks vanishing above `bound`.  The output lies
/// in `Perf^{<= bound}_Z` of the ambient spectrum and restricts to `F` up to
/// quasi-isomorphism.
pub fn extend_with_support(
    f_cx: &PerfectComplex,
    z: &SpecSubset,
    bound: i64,
    j: &OpenImmersion,
) -> Result<PerfectComplex> {
    f_cx.ring().same_ring(&j.localized)?;
    f_cx.ensure_valid()?;
    if z.is_all() {
        return Err(Error::Unsupported(
            "Z = all: use the unconstrained extension".into(),
        ));
    }
    z.validate_for(&j.ambient)?;
    if let Some(hi) = f_cx.hi() {
        if hi > bound {
            return Err(Error::Shape(format!(
                "ranks reach degree {hi}, above the bound {bound}"
            )));
        }
    }
    let split = homology_split(f_cx)?;
    let mut pieces: Vec<PerfectComplex> = vec![];
    for entry in &split.degrees {
        if entry.module.free_rank > 0 {
            return Err(Error::Unsupported(format!(
                "H^{} has a free part: no support-constrained extension",
                entry.degree
            )));
        }
        for d in &entry.module.torsion_divisors {
            // canonical divisors are coprime to f, hence lift verbatim
            let lifted = j
                .lift_element(d)
                .ok_or_else(|| Error::Shape("divisor with denominator".into()))?;
            for (p, _) in crate::exactalg::factor(&j.ambient, &lifted)? {
                if !z.contains_point(&p) {
                    return Err(Error::Shape(format!(
                        "support point {p} of H^{} lies outside Z",
                        entry.degree
                    )));
                }
            }
            pieces.push(PerfectComplex::cyclic(
                j.ambient.clone(),
                lifted,
                entry.degree,
            ));
        }
    }
    crate::complex::direct_sum_many(&j.ambient, &pieces)
}

/// Comparison map for [`extend_with_support`]: the restricted extension is
/// the split model of `F`, so the model witness applies verbatim.
pub fn extend_with_support_witness(
    f_cx: &PerfectComplex,
    z: &SpecSubset,
    bound: i64,
    j: &OpenImmersion,
) -> Result<(PerfectComplex, ChainMap)> {
    let extended = extend_with_support(f_cx, z, bound, j)?;
    let restricted = restrict(&extended, j)?;
    let (model, witness) = split_model(f_cx)?;
    if restricted != model {
        return Err(Error::Shape(
            "restricted extension does not match the split model".into(),
        ));
    }
    Ok((extended, witness))
}

/// One probe row of the restriction-orthogonality report.
#[derive(Clone, Debug)]
pub struct ProbeRow {
    pub label: String,
    pub shift: i64,
    pub ambient_orthogonal: bool,
    pub restricted_orthogonal: bool,
}

/// Desk check of the restriction lemma: if every ambient probe in
/// `Perf^{<= bound}_Z` is orthogonal to `F`, the restricted probes must be
/// orthogonal to `restrict(F)`.
#[derive(Clone, Debug)]
pub struct RestrictionReport {
    pub probes: Vec<ProbeRow>,
    /// No ambient probe admits a map to `F` (the substantive case).
    pub upstream_orthogonal: bool,
    pub downstream_orthogonal: bool,
    /// The lemma's implication; always expected to hold.
    pub implication_holds: bool,
}

pub fn restriction_orthogonality_check(
    f_cx: &PerfectComplex,
    z: &SpecSubset,
    bound: i64,
    j: &OpenImmersion,
    probe_budget: usize,
) -> Result<RestrictionReport> {
    f_cx.ring().same_ring(&j.ambient)?;
    f_cx.ensure_valid()?;
    let SpecSubset::Finite(points) = z else {
        return Err(Error::Unsupported("Z must be finite".into()));
    };
    z.validate_for(&j.ambient)?;
    if points.len() > 12 {
        return Err(Error::Unsupported("probe family too large".into()));
    }
    let ring = &j.ambient;
    let restricted_f = restrict(f_cx, j)?;
    let mut probes = vec![];
    let mut upstream = true;
    let mut downstream = true;
    let pts: Vec<_> = points.iter().collect();
    let budget = probe_budget.max(1) as i64;
    for mask in 1u32..(1u32 << pts.len()) {
        let mut product = ring.one();
        for (b, p) in pts.iter().enumerate() {
            if mask & (1 << b) != 0 {
                product = ring.mul(&product, &p.element(ring));
            }
        }
        for k in (bound - budget + 1)..=bound {
            let probe = koszul(ring, &[product.clone()])?.shift(-k);
            let ambient_ok = orthogonal_all_shifts(&probe, f_cx)?.orthogonal;
            let restricted_probe = restrict(&probe, j)?;
            let restricted_ok =
                orthogonal_all_shifts(&restricted_probe, &restricted_f)?.orthogonal;
            upstream &= ambient_ok;
            downstream &= restricted_ok;
            probes.push(ProbeRow {
                label: format!("K({})[{}]", ring.format_element(&product), -k),
                shift: k,
                ambient_orthogonal: ambient_ok,
                restricted_orthogonal: restricted_ok,
            });
        }
    }
    Ok(RestrictionReport {
        probes,
        upstream_orthogonal: upstream,
        downstream_orthogonal: downstream,
        implication_holds: !upstream || downstream,
    })
}

/// Orthogonality against a whole probe family at once (used by reports).
pub fn family_orthogonal(
    probes: &[PerfectComplex],
    b: &PerfectComplex,
) -> Result<(bool, Option<OrthoOutcome>)> {
    for p in probes {
        let out = orthogonal_all_shifts(p, b)?;
        if !out.orthogonal {
            return Ok((false, Some(out)));
        }
    }
    Ok((true, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{cohomology, is_quasi_iso};
    use crate::exactalg::{BaseElem, PrimePoint};
    use crate::supports::in_aisle;
    use crate::supports::Filtration;

    fn zz() -> RingDescriptor {
        RingDescriptor::integers()
    }

    fn open(f: i64) -> OpenImmersion {
        let r = zz();
        OpenImmersion::new(r.clone(), r.from_int(f)).unwrap()
    }

    fn scalar_cone(n: i64) -> PerfectComplex {
        let r = zz();
        PerfectComplex::cyclic(r.clone(), r.from_int(n), 0)
    }

    #[test]
    fn restrict_kills_inverted_torsion() {
        let j = open(2);
        let r2 = restrict(&scalar_cone(2), &j).unwrap();
        // 2 became a unit: acyclic
        assert!(cohomology(&r2, 0).is_zero());
        assert!(cohomology(&r2, -1).is_zero());

        let r3 = restrict(&scalar_cone(3), &j).unwrap();
        let h0 = cohomology(&r3, 0);
        assert_eq!(h0.torsion_divisors, vec![j.localized().from_int(3)]);
        assert_eq!(
            crate::exactalg::support(&h0, j.localized())
                .unwrap()
                .format(j.localized()),
            "{(3)}"
        );

        let unit = PerfectComplex::unit(zz());
        assert_eq!(
            restrict(&unit, &j).unwrap(),
            PerfectComplex::unit(j.localized().clone())
        );
    }

    #[test]
    fn extend_clears_denominators() {
        // F = [Z[1/2] --3/2--> Z[1/2]] extends to [Z --3--> Z]
        let j = open(2);
        let loc = j.localized().clone();
        let three_halves = loc.element(BaseElem::int(3), -1);
        let f_cx = PerfectComplex::cyclic(loc.clone(), three_halves, 0);
        let (e, witness) = extend_perfect_with_witness(&f_cx, &j).unwrap();
        assert_eq!(e, scalar_cone(3));
        assert!(is_quasi_iso(&witness).unwrap());

        // already denominator-free: identical matrices
        let f_cx = PerfectComplex::cyclic(loc.clone(), loc.from_int(5), 0);
        let e = extend_perfect(&f_cx, &j).unwrap();
        assert_eq!(e, scalar_cone(5));

        // zero extends to zero
        let z = PerfectComplex::zero(loc);
        assert!(extend_perfect(&z, &j).unwrap().is_zero_complex());
    }

    #[test]
    fn extend_with_support_lifts_cyclics() {
        let j = open(2);
        let loc = j.localized().clone();
        let z3 = SpecSubset::finite([PrimePoint::new(&zz(), BaseElem::int(3)).unwrap()]);
        // F = (Z[1/2])/3 in degree 0 realized as a cone
        let f_cx = PerfectComplex::cyclic(loc.clone(), loc.from_int(3), 0);
        let e = extend_with_support(&f_cx, &z3, 0, &j).unwrap();
        assert_eq!(e, scalar_cone(3));

        // shifted: (Z[1/2])/5 in degree -1 lifts to [Z --5--> Z] at -2,-1
        let z5 = SpecSubset::finite([PrimePoint::new(&zz(), BaseElem::int(5)).unwrap()]);
        let f_cx5 = PerfectComplex::cyclic(loc.clone(), loc.from_int(5), -1);
        let e = extend_with_support(&f_cx5, &z5, 0, &j).unwrap();
        assert_eq!(e, PerfectComplex::cyclic(zz(), zz().from_int(5), -1));

        // the witness variant certifies the restriction
        let (_, witness) = extend_with_support_witness(&f_cx, &z3, 0, &j).unwrap();
        assert!(is_quasi_iso(&witness).unwrap());

        // zero input
        let e = extend_with_support(&PerfectComplex::zero(loc.clone()), &z3, 0, &j).unwrap();
        assert!(e.is_zero_complex());

        // free part is rejected
        let free = PerfectComplex::unit(loc.clone());
        assert!(extend_with_support(&free, &z3, 0, &j).is_err());
        // Z = all is rejected
        assert!(extend_with_support(&f_cx, &SpecSubset::All, 0, &j).is_err());
    }

    #[test]
    fn extension_passes_step_filtration() {
        // output of extend_with_support lands in Perf^{<=N}_Z, i.e. the
        // aisle of the step filtration (i <= N -> Z, empty above)
        let j = open(2);
        let loc = j.localized().clone();
        let z3 = SpecSubset::finite([PrimePoint::new(&zz(), BaseElem::int(3)).unwrap()]);
        let f_cx = PerfectComplex::cyclic(loc.clone(), loc.from_int(3), 0);
        let e = extend_with_support(&f_cx, &z3, 0, &j).unwrap();
        let psi = Filtration::step(zz(), z3, 0).unwrap();
        assert!(in_aisle(&e, &psi).unwrap().ok);
    }

    #[test]
    fn restriction_orthogonality_examples() {
        let j = open(5);
        let z2 = SpecSubset::finite([PrimePoint::new(&zz(), BaseElem::int(2)).unwrap()]);
        // F = cone(3)[5] sits far below the probes: both sides orthogonal
        let f_cx = scalar_cone(3).shift(5);
        let rep = restriction_orthogonality_check(&f_cx, &z2, 0, &j, 2).unwrap();
        assert!(rep.upstream_orthogonal);
        assert!(rep.downstream_orthogonal);
        assert!(rep.implication_holds);

        // F = cone(2) is hit by K(2): vacuous upstream
        let rep =
            restriction_orthogonality_check(&scalar_cone(2), &z2, 0, &j, 2).unwrap();
        assert!(!rep.upstream_orthogonal);
        assert!(rep.implication_holds);

        // F = 0: orthogonal everywhere
        let rep = restriction_orthogonality_check(
            &PerfectComplex::zero(zz()),
            &z2,
            0,
            &j,
            2,
        )
        .unwrap();
        assert!(rep.upstream_orthogonal && rep.downstream_orthogonal);
    }

    #[test]
    fn restrict_is_monoidal_and_triangulated() {
        use crate::complex::{cone, tensor_total, ChainMap};
        let j = open(2);
        let a = scalar_cone(3);
        let b = scalar_cone(5);
        // tensor commutes with restriction entrywise
        let lhs = restrict(&tensor_total(&a, &b).unwrap(), &j).unwrap();
        let rhs = tensor_total(&restrict(&a, &j).unwrap(), &restrict(&b, &j).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        // cone commutes with restriction entrywise
        let mut comps = std::collections::BTreeMap::new();
        comps.insert(0, Matrix::from_i64(&zz(), &[&[5]]));
        comps.insert(-1, Matrix::from_i64(&zz(), &[&[3]]));
        let f = ChainMap::new(a.clone(), b.clone(), comps).unwrap();
        let lhs = restrict(&cone(&f).unwrap().third, &j).unwrap();
        let rhs = cone(&restrict_map(&f, &j).unwrap()).unwrap().third;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn composed_localization() {
        let r = zz();
        let j1 = OpenImmersion::new(r.clone(), r.from_int(2)).unwrap();
        let j2 = OpenImmersion::new(j1.localized().clone(), j1.localized().from_int(3))
            .unwrap();
        assert_eq!(j2.localized().inverted(), &BaseElem::int(6));
    }
}

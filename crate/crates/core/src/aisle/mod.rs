//! Orthogonality certificates, coaisle membership, support dominance, and
//! the classification round-trips.

pub mod harness;
mod tdecomp;

pub use tdecomp::{t_decompose, DecompositionReport};

use crate::complex::{
    cohomology, hom_complex, homology_split, supph_geq, PerfectComplex,
};
use crate::error::{Error, Result};
use crate::exactalg::{FgModule, RingDescriptor, RingElement};
use crate::supports::{
    graded_support, in_aisle, koszul_generators, Filtration, SpecSubset,
};

/// Outcome of an orthogonality test `Hom(g[n], B) = 0 for all n >= 0`.
#[derive(Clone, Debug)]
pub struct OrthoOutcome {
    pub orthogonal: bool,
    pub certificate: OrthoCertificate,
}

#[derive(Clone, Debug)]
pub enum OrthoCertificate {
    /// Every `H^j` of the Hom complex vanished for `j <= 0`; the Hom complex
    /// is bounded below by `checked_lo`, which makes the check complete.
    AllVanish { checked_lo: i64 },
    /// A nonzero class in `Hom(g[shift], B)`.
    NonzeroClass {
        /// Description of the generator (useful when batching).
        label: String,
        /// Filtration level the generator came from, when applicable.
        level: Option<i64>,
        shift: i64,
        class_module: FgModule,
        /// A representing cocycle in Hom-complex degree `-shift` coordinates.
        witness: Vec<RingElement>,
        /// The generator complex itself, so the witness can be replayed.
        generator: PerfectComplex,
    },
}

impl OrthoCertificate {
    pub fn format(&self, ring: &RingDescriptor) -> String {
        match self {
            OrthoCertificate::AllVanish { checked_lo } => {
                format!("all Hom classes vanish (degrees down to {checked_lo})")
            }
            OrthoCertificate::NonzeroClass {
                label,
                shift,
                class_module,
                ..
            } => format!(
                "nonzero class: ({label}, n={shift}), Hom group {}",
                class_module.format(ring)
            ),
        }
    }
}

/// Decides `Hom_{D(R)}(g[n], B) = 0` for all `n >= 0` at once: the Hom
/// complex is computed once and its cohomology checked in degrees `<= 0`.
/// Boundedness of both inputs makes the check complete.
pub fn orthogonal_all_shifts(g: &PerfectComplex, b: &PerfectComplex) -> Result<OrthoOutcome> {
    g.ring().same_ring(b.ring())?;
    orthogonal_labeled(g, b, "g", None)
}

fn orthogonal_labeled(
    g: &PerfectComplex,
    b: &PerfectComplex,
    label: &str,
    level: Option<i64>,
) -> Result<OrthoOutcome> {
    let hom = hom_complex(g, b)?;
    let Some(lo) = hom.lo() else {
        return Ok(OrthoOutcome {
            orthogonal: true,
            certificate: OrthoCertificate::AllVanish { checked_lo: 0 },
        });
    };
    if lo > 0 {
        return Ok(OrthoOutcome {
            orthogonal: true,
            certificate: OrthoCertificate::AllVanish { checked_lo: lo },
        });
    }
    let split = homology_split(&hom)?;
    for entry in &split.degrees {
        if entry.degree > 0 {
            break;
        }
        if entry.module.is_zero() {
            continue;
        }
        let generator = &entry.generators[0];
        return Ok(OrthoOutcome {
            orthogonal: false,
            certificate: OrthoCertificate::NonzeroClass {
                label: label.to_string(),
                level,
                shift: -entry.degree,
                class_module: entry.module.clone(),
                witness: generator.cocycle.clone(),
                generator: g.clone(),
            },
        });
    }
    Ok(OrthoOutcome {
        orthogonal: true,
        certificate: OrthoCertificate::AllVanish { checked_lo: lo },
    })
}

/// A window adequate for a complete coaisle check of `b` against `phi`.
pub fn coaisle_window(b: &PerfectComplex, phi: &Filtration) -> (i64, i64) {
    let lo = b.lo().unwrap_or(0);
    let hi = phi.last_nonempty().unwrap_or(lo).max(lo);
    (lo, hi)
}

/// Membership of `B` in the coaisle `U_phi^perp`: orthogonality against the
/// Koszul generator family of `phi` over the window.
///
/// Subset products factor through their prime pieces (CRT splits the Koszul
/// complex of a squarefree product), so evaluating the single-prime and unit
/// generators decides the whole family; certificates always name a generator
/// that belongs to `koszul_generators(phi, window)`.
pub fn in_coaisle(
    b: &PerfectComplex,
    phi: &Filtration,
    window: (i64, i64),
) -> Result<OrthoOutcome> {
    b.ring().same_ring(phi.ring())?;
    b.ensure_valid()?;
    phi.ensure_valid()?;
    let ring = b.ring().clone();
    let Some(lo_b) = b.lo() else {
        return Ok(OrthoOutcome {
            orthogonal: true,
            certificate: OrthoCertificate::AllVanish { checked_lo: 0 },
        });
    };
    // completeness: a violation at level i only involves H^j(B) for j <= i,
    // and levels above the last nonempty value carry no generators
    if let Some(last) = phi.last_nonempty() {
        if last >= lo_b && (window.0 > lo_b || window.1 < last) {
            return Err(Error::Window(format!(
                "window {}:{} must cover {}:{} for a complete coaisle check",
                window.0, window.1, lo_b, last
            )));
        }
    }
    for i in window.0..=window.1 {
        match phi.value(i) {
            SpecSubset::All => {
                let unit = PerfectComplex::unit(ring.clone()).shift(-i);
                let out = orthogonal_labeled(&unit, b, &format!("R[{}]", -i), Some(i))?;
                if !out.orthogonal {
                    return Ok(out);
                }
            }
            SpecSubset::Finite(points) => {
                for p in points {
                    let gen = PerfectComplex::cyclic(ring.clone(), p.element(&ring), 0)
                        .shift(-i);
                    let label = format!("K({})[{}]", p.generator(), -i);
                    let out = orthogonal_labeled(&gen, b, &label, Some(i))?;
                    if !out.orthogonal {
                        return Ok(out);
                    }
                }
            }
        }
    }
    Ok(OrthoOutcome {
        orthogonal: true,
        certificate: OrthoCertificate::AllVanish {
            checked_lo: window.0,
        },
    })
}

/// Report of the support-dominance test of Hrbek's lemma: containment of
/// graded supports, plus the testable consequence `A in U_{Phi({B})}`.
#[derive(Clone, Debug)]
pub struct DominanceReport {
    pub dominated: bool,
    pub first_violation: Option<i64>,
    /// When dominated: does `in_aisle(A, graded_support({B}))` agree?
    pub aisle_consistent: Option<bool>,
}

pub fn support_dominance_check(
    a: &PerfectComplex,
    b: &PerfectComplex,
) -> Result<DominanceReport> {
    a.ring().same_ring(b.ring())?;
    let lo = a.lo().into_iter().chain(b.lo()).min();
    let hi = a.hi().into_iter().chain(b.hi()).max();
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Ok(DominanceReport {
            dominated: true,
            first_violation: None,
            aisle_consistent: Some(true),
        });
    };
    for i in lo..=hi {
        if !supph_geq(b, i)?.contains(&supph_geq(a, i)?) {
            return Ok(DominanceReport {
                dominated: false,
                first_violation: Some(i),
                aisle_consistent: None,
            });
        }
    }
    let phi = graded_support(a.ring(), std::slice::from_ref(b))?;
    let consistent = in_aisle(a, &phi)?.ok;
    Ok(DominanceReport {
        dominated: true,
        first_violation: None,
        aisle_consistent: Some(consistent),
    })
}

/// Report of the `Phi o Psi = id` round-trip.
#[derive(Clone, Debug)]
pub struct PhiPsiReport {
    pub equal: bool,
    pub generator_count: usize,
    /// `(degree, phi value, recomputed value, agree)` over the window.
    pub rows: Vec<(i64, SpecSubset, SpecSubset, bool)>,
}

/// Builds the Koszul generators of `phi`, recomputes their graded support,
/// and compares with `phi` on the window.
pub fn roundtrip_phi_psi(phi: &Filtration, window: (i64, i64)) -> Result<PhiPsiReport> {
    phi.ensure_valid()?;
    let gens = koszul_generators(phi, window)?;
    if !gens.covers {
        return Err(Error::Window(format!(
            "window {}:{} does not cover the nontrivial range of the filtration",
            window.0, window.1
        )));
    }
    let complexes = gens.complexes();
    let recomputed = graded_support(phi.ring(), &complexes)?;
    let mut rows = vec![];
    let mut equal = true;
    for i in window.0..=window.1 {
        let lhs = phi.value(i).clone();
        let rhs = recomputed.value(i).clone();
        let agree = lhs == rhs;
        equal &= agree;
        rows.push((i, lhs, rhs, agree));
    }
    Ok(PhiPsiReport {
        equal,
        generator_count: gens.entries.len(),
        rows,
    })
}

/// Per-probe outcome of the `Psi o Phi` consistency check.
#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub index: usize,
    pub dominated: bool,
    pub in_aisle: bool,
    pub acyclic: bool,
    /// Coaisle membership, evaluated for probes that lie in the aisle.
    pub in_coaisle: Option<bool>,
    /// Dominated probes must be members; members must not be in the coaisle
    /// unless acyclic.
    pub consistent: bool,
}

#[derive(Clone, Debug)]
pub struct PsiPhiReport {
    pub phi: Filtration,
    pub probes: Vec<ProbeReport>,
    pub ok: bool,
}

/// Computes `phi = graded_support(G)` and checks, per probe: dominance
/// implies aisle membership, and no nonzero aisle member is also in the
/// coaisle (the `U ∩ U^perp = 0` degeneracy).
pub fn roundtrip_psi_phi(
    ring: &RingDescriptor,
    gens: &[PerfectComplex],
    probes: &[PerfectComplex],
) -> Result<PsiPhiReport> {
    let phi = graded_support(ring, gens)?;
    let mut out = vec![];
    let mut ok = true;
    for (index, probe) in probes.iter().enumerate() {
        probe.ensure_valid()?;
        let dominated = match (probe.lo(), probe.hi()) {
            (Some(lo), Some(hi)) => {
                let mut acc = true;
                for i in lo..=hi {
                    acc &= phi.value(i).contains(&supph_geq(probe, i)?);
                }
                acc
            }
            _ => true,
        };
        let member = in_aisle(probe, &phi)?.ok;
        let acyclic = is_acyclic(probe);
        let coaisle = if member {
            let window = coaisle_window(probe, &phi);
            Some(in_coaisle(probe, &phi, window)?.orthogonal)
        } else {
            None
        };
        let consistent = (!dominated || member)
            && match coaisle {
                Some(true) => acyclic,
                _ => true,
            };
        ok &= consistent;
        out.push(ProbeReport {
            index,
            dominated,
            in_aisle: member,
            acyclic,
            in_coaisle: coaisle,
            consistent,
        });
    }
    Ok(PsiPhiReport {
        phi,
        probes: out,
        ok,
    })
}

pub(crate) fn is_acyclic(c: &PerfectComplex) -> bool {
    match (c.lo(), c.hi()) {
        (Some(lo), Some(hi)) => (lo..=hi).all(|i| cohomology(c, i).is_zero()),
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::direct_sum;
    use crate::exactalg::{BaseElem, PrimePoint};
    use crate::supports::koszul;

    fn zz() -> RingDescriptor {
        RingDescriptor::integers()
    }

    fn pt(n: i64) -> PrimePoint {
        PrimePoint::new(&zz(), BaseElem::int(n)).unwrap()
    }

    fn k(n: i64) -> PerfectComplex {
        let r = zz();
        koszul(&r, &[r.from_int(n)]).unwrap()
    }

    #[test]
    fn orthogonality_examples() {
        // K(2) vs cone(3): 2 is invertible mod 3, so every shifted Hom class
        // vanishes (checked through the SNF cohomology of the Hom complex)
        let out = orthogonal_all_shifts(&k(2), &k(3)).unwrap();
        assert!(out.orthogonal);

        // K(2) vs cone(2): the identity class survives at n = 0
        let out = orthogonal_all_shifts(&k(2), &k(2)).unwrap();
        assert!(!out.orthogonal);
        match out.certificate {
            OrthoCertificate::NonzeroClass {
                shift,
                class_module,
                ..
            } => {
                assert_eq!(shift, 0);
                assert_eq!(class_module.torsion_divisors, vec![zz().from_int(2)]);
            }
            _ => panic!("expected a witness"),
        }

        // unit vs unit shifted up: Hom(Z[0][1], Z[1]) is nonzero
        let unit = PerfectComplex::unit(zz());
        let out = orthogonal_all_shifts(&unit, &unit.shift(1)).unwrap();
        assert!(!out.orthogonal);
        match out.certificate {
            OrthoCertificate::NonzeroClass { shift, .. } => assert_eq!(shift, 1),
            _ => panic!("expected a witness"),
        }
    }

    #[test]
    fn coaisle_examples() {
        let r = zz();
        let phi = Filtration::step(r.clone(), SpecSubset::finite([pt(2)]), 0).unwrap();
        let out = in_coaisle(&k(3), &phi, coaisle_window(&k(3), &phi)).unwrap();
        assert!(out.orthogonal);

        let out = in_coaisle(&k(2), &phi, coaisle_window(&k(2), &phi)).unwrap();
        assert!(!out.orthogonal);
        match &out.certificate {
            OrthoCertificate::NonzeroClass { label, shift, .. } => {
                assert_eq!(label, "K(2)[0]");
                assert_eq!(*shift, 0);
            }
            _ => panic!("expected a witness"),
        }

        let zero = PerfectComplex::zero(r.clone());
        let out = in_coaisle(&zero, &phi, (0, 0)).unwrap();
        assert!(out.orthogonal);
    }

    #[test]
    fn coaisle_window_guard() {
        let r = zz();
        let phi = Filtration::step(r.clone(), SpecSubset::finite([pt(2)]), 3).unwrap();
        // b reaches down to -2, phi is nonempty up to 3: window must cover it
        let b = k(2).shift(1); // degrees -2, -1
        assert!(in_coaisle(&b, &phi, (0, 3)).is_err());
        assert!(in_coaisle(&b, &phi, (-2, 3)).is_ok());
    }

    #[test]
    fn dominance_examples() {
        let r = zz();
        let c4 = k(4);
        let c2 = k(2);
        let rep = support_dominance_check(&c4, &c2).unwrap();
        assert!(rep.dominated);
        assert_eq!(rep.aisle_consistent, Some(true));

        // A = cone(2), B = cone(2)[-1]: B's graded support reaches degree 1
        let rep = support_dominance_check(&c2, &c2.shift(-1)).unwrap();
        assert!(rep.dominated);
        assert_eq!(rep.aisle_consistent, Some(true));

        let unit = PerfectComplex::unit(r);
        let rep = support_dominance_check(&unit, &c2).unwrap();
        assert!(!rep.dominated);
        // the generic point already escapes at the bottom of the scan range
        assert_eq!(rep.first_violation, Some(-1));
    }

    #[test]
    fn phi_psi_roundtrip_mixed() {
        let r = zz();
        let phi = Filtration::new(
            r.clone(),
            SpecSubset::finite([pt(2), pt(3)]),
            vec![
                (1, SpecSubset::finite([pt(2)])),
                (2, SpecSubset::empty()),
            ],
        )
        .unwrap();
        let rep = roundtrip_phi_psi(&phi, (-1, 2)).unwrap();
        assert!(rep.equal, "{:?}", rep.rows);

        let rep = roundtrip_phi_psi(&Filtration::constant_empty(r.clone()), (-1, 1)).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.generator_count, 0);

        let all = Filtration::step(r, SpecSubset::All, 0).unwrap();
        let rep = roundtrip_phi_psi(&all, (0, 1)).unwrap();
        assert!(rep.equal);
    }

    #[test]
    fn psi_phi_roundtrip() {
        let r = zz();
        let gens = vec![k(2)];
        let probes = vec![k(4), k(3), PerfectComplex::zero(r.clone())];
        let rep = roundtrip_psi_phi(&r, &gens, &probes).unwrap();
        assert!(rep.ok);
        assert!(rep.probes[0].dominated);
        assert!(rep.probes[0].in_aisle);
        assert_eq!(rep.probes[0].in_coaisle, Some(false));
        assert!(!rep.probes[1].dominated);
        assert!(!rep.probes[1].in_aisle);
        assert!(rep.probes[2].acyclic);
        assert_eq!(rep.probes[2].in_coaisle, Some(true));
    }

    #[test]
    fn coaisle_respects_extension_depth() {
        // Ext^1(Z/2, Z) is nonzero: the free module Z[0] is not orthogonal
        // to K(2)[-1] even though their cohomology degrees differ
        let r = zz();
        let phi = Filtration::new(
            r.clone(),
            SpecSubset::finite([pt(2)]),
            vec![(2, SpecSubset::empty())],
        )
        .unwrap();
        let unit = PerfectComplex::unit(r.clone());
        let out = in_coaisle(&unit, &phi, coaisle_window(&unit, &phi)).unwrap();
        assert!(!out.orthogonal, "Ext^1 class must be detected");

        // but with phi empty above degree 0 the free module is orthogonal
        let phi0 = Filtration::step(r.clone(), SpecSubset::finite([pt(2)]), 0).unwrap();
        let sum = direct_sum(&unit, &PerfectComplex::zero(r.clone())).unwrap();
        let out = in_coaisle(&sum, &phi0, coaisle_window(&sum, &phi0)).unwrap();
        assert!(out.orthogonal);
    }
}

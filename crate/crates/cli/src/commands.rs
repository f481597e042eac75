//! One function per CLI command; each maps to exactly one library
//! operation and renders its report.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Map, Value};

use tstruct_core::aisle::harness::{property_harness, HarnessConfig, Mutation, SizeBounds};
use tstruct_core::aisle::{
    coaisle_window, in_coaisle, roundtrip_phi_psi, roundtrip_psi_phi, t_decompose,
    OrthoCertificate,
};
use tstruct_core::complex::{cohomology, supph_geq, PerfectComplex};
use tstruct_core::exactalg::{support, FgModule, RingDescriptor};
use tstruct_core::supports::{graded_support, in_aisle, koszul_generators};
use tstruct_core::zariski::{
    extend_perfect, extend_with_support, restrict, OpenImmersion,
};

use crate::report::Report;
use crate::schema::{
    complex_to_json, element_to_core, filtration_to_json, subset_to_json,
};
use crate::workspace::Workspace;

fn module_json(ring: &RingDescriptor, m: &FgModule) -> Value {
    json!({
        "free_rank": m.free_rank,
        "divisors": m
            .torsion_divisors
            .iter()
            .map(|d| ring.format_element(d))
            .collect::<Vec<_>>(),
    })
}

fn detect_kind(path: &Path) -> Result<&'static str> {
    let raw: Value = serde_json::from_str(
        &std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?,
    )
    .with_context(|| format!("parsing {}", path.display()))?;
    let Some(obj) = raw.as_object() else {
        bail!("{} is not a JSON object", path.display());
    };
    if obj.contains_key("head") {
        Ok("filtration")
    } else if obj.contains_key("terms") || obj.contains_key("diff") {
        Ok("complex")
    } else {
        bail!(
            "{}: cannot tell a complex from a filtration (no 'terms'/'head' key)",
            path.display()
        )
    }
}

pub fn cmd_validate(ws: &Workspace, path: &Path) -> Result<Report> {
    match detect_kind(path)? {
        "complex" => {
            let c = ws.load_complex_unchecked(path)?;
            let verdict = c.validate();
            let (ok, text, data) = match verdict {
                tstruct_core::complex::ComplexValidity::Ok => (
                    true,
                    format!("complex OK: {}", c.summary()),
                    json!({"kind": "complex", "valid": true, "summary": c.summary()}),
                ),
                tstruct_core::complex::ComplexValidity::Violation { degree, row, col } => (
                    false,
                    format!(
                        "NOT a complex: d o d != 0 starting at degree {degree} (entry {row},{col})"
                    ),
                    json!({
                        "kind": "complex",
                        "valid": false,
                        "violation": {"degree": degree, "row": row, "col": col},
                    }),
                ),
            };
            Ok(Report::new("validate", ok, text, data))
        }
        _ => {
            let phi = ws.load_filtration(path)?;
            let verdict = phi.validate();
            let (ok, text, data) = match verdict {
                tstruct_core::supports::FiltrationValidity::Ok => (
                    true,
                    format!("filtration OK: {}", phi.format()),
                    json!({"kind": "filtration", "valid": true}),
                ),
                tstruct_core::supports::FiltrationValidity::IncreasesAt(d) => (
                    false,
                    format!("NOT a filtration of supports: value increases at degree {d}"),
                    json!({"kind": "filtration", "valid": false, "violation": {"degree": d}}),
                ),
                tstruct_core::supports::FiltrationValidity::TailNotEmpty => (
                    false,
                    "NOT finitely presented: the tail never reaches the empty set".to_string(),
                    json!({"kind": "filtration", "valid": false, "violation": "tail"}),
                ),
            };
            Ok(Report::new("validate", ok, text, data))
        }
    }
}

pub fn cmd_cohomology(ws: &Workspace, path: &Path, degree: Option<i64>) -> Result<Report> {
    let c = ws.load_complex(path)?;
    let ring = c.ring().clone();
    let range: Vec<i64> = match degree {
        Some(d) => vec![d],
        None => match (c.lo(), c.hi()) {
            (Some(lo), Some(hi)) => (lo..=hi).collect(),
            _ => vec![],
        },
    };
    let mut lines = vec![];
    let mut table = Map::new();
    for i in &range {
        let h = cohomology(&c, *i);
        lines.push(format!("H^{i} = {}", h.format(&ring)));
        table.insert(i.to_string(), module_json(&ring, &h));
    }
    if lines.is_empty() {
        lines.push("zero complex".to_string());
    }
    Ok(Report::new(
        "cohomology",
        true,
        lines.join("\n"),
        json!({"ring": ring.name(), "cohomology": Value::Object(table)}),
    ))
}

pub fn cmd_support(ws: &Workspace, path: &Path) -> Result<Report> {
    let c = ws.load_complex(path)?;
    let ring = c.ring().clone();
    let mut lines = vec![];
    let mut per_degree = Map::new();
    let mut geq = Map::new();
    if let (Some(lo), Some(hi)) = (c.lo(), c.hi()) {
        for i in lo..=hi {
            let h = cohomology(&c, i);
            let supp = support(&h, &ring)?;
            let s_geq = supph_geq(&c, i)?;
            lines.push(format!(
                "H^{i}: supp = {}, supph>= = {}",
                supp.format(&ring),
                s_geq.format(&ring)
            ));
            per_degree.insert(
                i.to_string(),
                serde_json::to_value(subset_to_json(&ring, &supp))?,
            );
            geq.insert(
                i.to_string(),
                serde_json::to_value(subset_to_json(&ring, &s_geq))?,
            );
        }
    } else {
        lines.push("zero complex: empty support".to_string());
    }
    Ok(Report::new(
        "support",
        true,
        lines.join("\n"),
        json!({"ring": ring.name(), "supp": Value::Object(per_degree), "supph_geq": Value::Object(geq)}),
    ))
}

pub fn cmd_membership(ws: &Workspace, e_path: &Path, phi_path: &Path) -> Result<Report> {
    let e = ws.load_complex(e_path)?;
    let phi = ws.load_filtration(phi_path)?;
    ws.check_same_ring(e.ring(), phi.ring())?;
    let cert = in_aisle(&e, &phi)?;
    let text = if cert.ok {
        "in the aisle: yes".to_string()
    } else {
        format!("in the aisle: no; certificate {}", cert.format())
    };
    let data = json!({
        "member": cert.ok,
        "certificate": cert.violation.as_ref().map(|(d, p)| json!({
            "degree": d,
            "witness": p.as_ref().map(|q| q.to_string()).unwrap_or_else(|| "generic".into()),
        })),
    });
    Ok(Report::new("membership", cert.ok, text, data))
}

fn ortho_json(ring: &RingDescriptor, cert: &OrthoCertificate) -> Value {
    match cert {
        OrthoCertificate::AllVanish { checked_lo } => {
            json!({"all_vanish": true, "checked_down_to": checked_lo})
        }
        OrthoCertificate::NonzeroClass {
            label,
            level,
            shift,
            class_module,
            ..
        } => json!({
            "all_vanish": false,
            "generator": label,
            "level": level,
            "shift": shift,
            "class": module_json(ring, class_module),
        }),
    }
}

pub fn cmd_coaisle(
    ws: &Workspace,
    b_path: &Path,
    phi_path: &Path,
    window: Option<(i64, i64)>,
) -> Result<Report> {
    let b = ws.load_complex(b_path)?;
    let phi = ws.load_filtration(phi_path)?;
    ws.check_same_ring(b.ring(), phi.ring())?;
    let window = window.unwrap_or_else(|| coaisle_window(&b, &phi));
    let out = in_coaisle(&b, &phi, window)?;
    let text = if out.orthogonal {
        format!(
            "in the coaisle: yes ({})",
            out.certificate.format(b.ring())
        )
    } else {
        format!(
            "in the coaisle: no; {}",
            out.certificate.format(b.ring())
        )
    };
    let data = json!({
        "member": out.orthogonal,
        "window": [window.0, window.1],
        "certificate": ortho_json(b.ring(), &out.certificate),
    });
    Ok(Report::new("coaisle", out.orthogonal, text, data))
}

pub fn cmd_tdecomp(
    ws: &Workspace,
    a_path: &Path,
    phi_path: &Path,
    cap: usize,
) -> Result<Report> {
    let a = ws.load_complex(a_path)?;
    let phi = ws.load_filtration(phi_path)?;
    ws.check_same_ring(a.ring(), phi.ring())?;
    let ring = a.ring().clone();
    let rep = t_decompose(&a, &phi, cap)?;
    let describe = |c: &PerfectComplex| -> Vec<String> {
        match (c.lo(), c.hi()) {
            (Some(lo), Some(hi)) => (lo..=hi)
                .map(|i| format!("H^{i} = {}", cohomology(c, i).format(&ring)))
                .collect(),
            _ => vec!["0".to_string()],
        }
    };
    let mut lines = vec![];
    if rep.verified {
        lines.push(format!(
            "verified t-decomposition in {} attachment(s)",
            rep.iterations
        ));
    } else {
        lines.push(format!(
            "UNVERIFIED decomposition (cap/obstruction after {} attachment(s))",
            rep.iterations
        ));
    }
    lines.push(format!("L: {}", rep.triangle.first.summary()));
    for l in describe(&rep.triangle.first) {
        lines.push(format!("   {l}"));
    }
    lines.push(format!("N: {}", rep.triangle.third.summary()));
    for l in describe(&rep.triangle.third) {
        lines.push(format!("   {l}"));
    }
    lines.push(format!(
        "checks: aisle={} coaisle={} cone identity={} Hom(L,N)=0: {}",
        rep.aisle_cert.ok, rep.coaisle_cert.orthogonal, rep.cone_identity, rep.hom_vanishes
    ));
    let data = json!({
        "verified": rep.verified,
        "cap_exceeded": rep.cap_exceeded,
        "iterations": rep.iterations,
        "aisle_ok": rep.aisle_cert.ok,
        "coaisle_ok": rep.coaisle_cert.orthogonal,
        "cone_identity": rep.cone_identity,
        "hom_vanishes": rep.hom_vanishes,
        "L": complex_to_json(&rep.triangle.first),
        "N": complex_to_json(&rep.triangle.third),
    });
    Ok(Report::new("tdecomp", rep.verified, lines.join("\n"), data))
}

pub fn cmd_gsupp(ws: &Workspace, list_path: &Path) -> Result<Report> {
    let (ring, list) = ws.load_complex_list(list_path)?;
    let phi = graded_support(&ring, &list)?;
    Ok(Report::new(
        "gsupp",
        true,
        format!("graded support: {}", phi.format()),
        json!({"filtration": filtration_to_json(&phi)}),
    ))
}

pub fn cmd_generators(ws: &Workspace, phi_path: &Path, window: (i64, i64)) -> Result<Report> {
    let phi = ws.load_filtration(phi_path)?;
    let gens = koszul_generators(&phi, window)?;
    let ring = phi.ring().clone();
    let mut lines = vec![format!(
        "{} generator(s) over window {}:{}{}",
        gens.entries.len(),
        window.0,
        window.1,
        if gens.covers {
            ""
        } else {
            " (warning: window does not cover the filtration)"
        }
    )];
    let mut entries = vec![];
    for e in &gens.entries {
        lines.push(format!(
            "  {} at level {} supported in {}",
            e.label,
            e.level,
            e.declared.format(&ring)
        ));
        entries.push(json!({
            "label": e.label,
            "level": e.level,
            "declared": serde_json::to_value(subset_to_json(&ring, &e.declared))?,
            "complex": complex_to_json(&e.complex),
        }));
    }
    Ok(Report::new(
        "generators",
        true,
        lines.join("\n"),
        json!({"covers": gens.covers, "entries": entries}),
    ))
}

pub fn cmd_roundtrip_phi_psi(
    ws: &Workspace,
    phi_path: &Path,
    window: (i64, i64),
) -> Result<Report> {
    let phi = ws.load_filtration(phi_path)?;
    let ring = phi.ring().clone();
    let rep = roundtrip_phi_psi(&phi, window)?;
    let mut lines = vec![format!(
        "phi-psi roundtrip over {}:{} with {} generator(s): {}",
        window.0,
        window.1,
        rep.generator_count,
        if rep.equal { "EQUAL" } else { "MISMATCH" }
    )];
    let mut rows = vec![];
    for (i, lhs, rhs, agree) in &rep.rows {
        lines.push(format!(
            "  {i}: {} vs {} {}",
            lhs.format(&ring),
            rhs.format(&ring),
            if *agree { "ok" } else { "MISMATCH" }
        ));
        rows.push(json!({
            "degree": i,
            "phi": serde_json::to_value(subset_to_json(&ring, lhs))?,
            "recomputed": serde_json::to_value(subset_to_json(&ring, rhs))?,
            "agree": agree,
        }));
    }
    Ok(Report::new(
        "roundtrip",
        rep.equal,
        lines.join("\n"),
        json!({"direction": "phi-psi", "equal": rep.equal, "generators": rep.generator_count, "rows": rows}),
    ))
}

pub fn cmd_roundtrip_psi_phi(
    ws: &Workspace,
    gens_path: &Path,
    probes_path: &Path,
) -> Result<Report> {
    let (ring, gens) = ws.load_complex_list(gens_path)?;
    let (ring2, probes) = ws.load_complex_list(probes_path)?;
    ws.check_same_ring(&ring, &ring2)?;
    let rep = roundtrip_psi_phi(&ring, &gens, &probes)?;
    let mut lines = vec![format!(
        "psi-phi consistency: {} (graded support {})",
        if rep.ok { "OK" } else { "FAILED" },
        rep.phi.format()
    )];
    let mut rows = vec![];
    for p in &rep.probes {
        lines.push(format!(
            "  probe {}: dominated={} member={} coaisle={:?} acyclic={} -> {}",
            p.index,
            p.dominated,
            p.in_aisle,
            p.in_coaisle,
            p.acyclic,
            if p.consistent { "ok" } else { "INCONSISTENT" }
        ));
        rows.push(json!({
            "probe": p.index,
            "dominated": p.dominated,
            "in_aisle": p.in_aisle,
            "in_coaisle": p.in_coaisle,
            "acyclic": p.acyclic,
            "consistent": p.consistent,
        }));
    }
    Ok(Report::new(
        "roundtrip",
        rep.ok,
        lines.join("\n"),
        json!({"direction": "psi-phi", "ok": rep.ok, "filtration": filtration_to_json(&rep.phi), "probes": rows}),
    ))
}

pub fn cmd_restrict(ws: &Workspace, e_path: &Path, open: &str) -> Result<Report> {
    let e = ws.load_complex(e_path)?;
    let f = element_to_core(e.ring(), open)?;
    let j = OpenImmersion::new(e.ring().clone(), f)?;
    let restricted = restrict(&e, &j)?;
    Ok(Report::new(
        "restrict",
        true,
        format!(
            "restricted to D({open}) over {}: {}",
            j.localized().name(),
            restricted.summary()
        ),
        json!({"ring": j.localized().name(), "complex": complex_to_json(&restricted)}),
    ))
}

pub fn cmd_extend(
    ws: &Workspace,
    f_path: &Path,
    ambient_path: Option<&Path>,
    support_path: Option<&Path>,
    bound: Option<i64>,
) -> Result<Report> {
    let f_cx = ws.load_complex(f_path)?;
    let loc = f_cx.ring().clone();
    let ambient = match ambient_path {
        Some(p) => ws.load_ring(p)?,
        None => match loc.base() {
            tstruct_core::exactalg::BaseRing::Integers => RingDescriptor::integers(),
            tstruct_core::exactalg::BaseRing::PolyOverFp { p } => {
                RingDescriptor::poly_over_fp(*p)?
            }
        },
    };
    let f_elem = ambient.element(loc.inverted().clone(), 0);
    let j = OpenImmersion::new(ambient, f_elem)?;
    if j.localized() != &loc {
        bail!(
            "the ambient ring {} does not localize to {}",
            j.ambient().name(),
            loc.name()
        );
    }
    match support_path {
        None => {
            let extended = extend_perfect(&f_cx, &j)?;
            Ok(Report::new(
                "extend",
                true,
                format!(
                    "extended to {}: {}",
                    j.ambient().name(),
                    extended.summary()
                ),
                json!({"mode": "perfect", "complex": complex_to_json(&extended)}),
            ))
        }
        Some(zp) => {
            let (zring, z) = ws.load_subset(zp)?;
            ws.check_same_ring(&zring, j.ambient())?;
            let bound = bound.unwrap_or_else(|| f_cx.hi().unwrap_or(0));
            let extended = extend_with_support(&f_cx, &z, bound, &j)?;
            Ok(Report::new(
                "extend",
                true,
                format!(
                    "extended with support in {} below degree {}: {}",
                    z.format(j.ambient()),
                    bound,
                    extended.summary()
                ),
                json!({"mode": "with-support", "bound": bound, "complex": complex_to_json(&extended)}),
            ))
        }
    }
}

pub fn cmd_harness(seed: u64, cases: usize, mutation: &str) -> Result<Report> {
    let mutation = match mutation {
        "none" => Mutation::None,
        "flip-cone-sign" => Mutation::FlipConeSign,
        other => bail!("unknown mutation '{other}' (none|flip-cone-sign)"),
    };
    let report = property_harness(&HarnessConfig {
        seed,
        cases,
        bounds: SizeBounds::default(),
        mutation,
    });
    let mut lines = vec![format!(
        "property harness: seed {seed}, {cases} case(s) per property: {}",
        if report.ok { "ALL PASS" } else { "FAILURES" }
    )];
    let mut rows = vec![];
    for r in &report.results {
        let status = if r.failures == 0 {
            "ok".to_string()
        } else {
            format!(
                "{} failure(s); first: {}",
                r.failures,
                r.first_failure.clone().unwrap_or_default()
            )
        };
        lines.push(format!("  {}: {}", r.name, status));
        rows.push(json!({
            "property": r.name,
            "cases": r.cases,
            "failures": r.failures,
            "first_failure": r.first_failure,
        }));
    }
    Ok(Report::new(
        "harness",
        report.ok,
        lines.join("\n"),
        json!({"seed": seed, "cases": cases, "ok": report.ok, "properties": rows}),
    ))
}

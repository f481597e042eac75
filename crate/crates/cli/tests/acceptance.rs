//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line.  Tolerances are exact (set containments and module equalities over
//! exact arithmetic); the only rate-based criterion is the t-decomposition
//! success rate.

use std::path::{Path, PathBuf};
use std::time::Instant;

use tstruct_core::aisle::harness::{
    random_chain_map, random_complex, random_divisor, random_filtration, Rng, SizeBounds,
};
use tstruct_core::aisle::{
    coaisle_window, in_coaisle, orthogonal_all_shifts, roundtrip_phi_psi, roundtrip_psi_phi,
    t_decompose, OrthoCertificate,
};
use tstruct_core::complex::{
    cohomology, cone, direct_sum_many, hom_vector_to_chain_map, is_quasi_iso, supph_geq,
    tensor_total, ChainMap, PerfectComplex,
};
use tstruct_core::exactalg::{PrimePoint, RingDescriptor};
use tstruct_core::supports::{in_aisle, Filtration, SpecSubset};
use tstruct_core::zariski::{
    extend_perfect_with_witness, extend_with_support_witness, restriction_orthogonality_check,
    OpenImmersion,
};

fn rings() -> Vec<RingDescriptor> {
    vec![
        RingDescriptor::integers(),
        RingDescriptor::poly_over_fp(2).unwrap(),
    ]
}

fn spec_bounds() -> SizeBounds {
    SizeBounds {
        max_rank: 3,
        max_amplitude: 4,
        max_entry: 20,
        max_primes: 4,
    }
}

/// Criterion 1: the support lemma suite on >= 500 random perfect complexes
/// over Z and F_2[x]; exact set containments; under two minutes.
#[test]
fn criterion_1_support_lemmas() {
    let start = Instant::now();
    let rings = rings();
    let bounds = spec_bounds();
    let total = 500usize;
    let mut previous: Option<PerfectComplex> = None;
    for case in 0..total {
        let ring = &rings[case % rings.len()];
        let mut rng = Rng::new(0x51ac + case as u64);
        let c = random_complex(&mut rng, ring, &bounds);

        // lemma: shifting can only shrink Supph^{>=i}
        let shifted = c.shift(1);
        let lo = c.lo().unwrap_or(0) - 1;
        let hi = c.hi().unwrap_or(0) + 1;
        for i in lo..=hi {
            assert!(
                supph_geq(&c, i)
                    .unwrap()
                    .contains(&supph_geq(&shifted, i).unwrap()),
                "case {case}: shift enlarged supports at {i}"
            );
        }

        // lemma: triangles — supports of a cone inside the union
        let t = random_complex(&mut rng, ring, &bounds);
        let f = random_chain_map(&mut rng, &c, &t).unwrap();
        let tri = cone(&f).unwrap();
        assert!(tri.third.validate().is_ok(), "case {case}: cone invalid");
        if let (Some(lo), Some(hi)) = (tri.third.lo(), tri.third.hi()) {
            for i in lo..=hi {
                let lhs = supph_geq(&tri.third, i).unwrap();
                let rhs = supph_geq(&c, i).unwrap().union(&supph_geq(&t, i).unwrap());
                assert!(rhs.contains(&lhs), "case {case}: cone escapes union at {i}");
            }
        }

        // lemma: sums — exact equality of unions
        if let Some(prev) = previous.take() {
            if prev.ring() == c.ring() {
                let sum = direct_sum_many(ring, &[prev.clone(), c.clone()]).unwrap();
                let lo = sum.lo().unwrap_or(0);
                let hi = sum.hi().unwrap_or(0);
                for i in lo..=hi {
                    let lhs = supph_geq(&sum, i).unwrap();
                    let rhs = supph_geq(&prev, i)
                        .unwrap()
                        .union(&supph_geq(&c, i).unwrap());
                    assert_eq!(lhs, rhs, "case {case}: sum support mismatch at {i}");
                }
            }
        }

        // lemma: tensoring with a nonpositive perfect complex
        let small = SizeBounds {
            max_rank: 2,
            max_amplitude: 2,
            ..bounds.clone()
        };
        let mut e = random_complex(&mut rng, ring, &small);
        if let Some(h) = e.hi() {
            if h > 0 {
                e = e.shift(h);
            }
        }
        let tens = tensor_total(&e, &c).unwrap();
        if let (Some(lo), Some(hi)) = (tens.lo(), tens.hi()) {
            for i in lo..=hi {
                assert!(
                    supph_geq(&c, i)
                        .unwrap()
                        .contains(&supph_geq(&tens, i).unwrap()),
                    "case {case}: tensor escapes at {i}"
                );
            }
        }

        previous = Some(c);
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 120,
        "support lemma suite took {elapsed:?}"
    );
    println!(
        "[PASS] criterion 1: support lemmas 1/2/3/5 on {total} complexes over Z and F_2[x] in {elapsed:.2?}"
    );
}

/// Criterion 2: Phi o Psi = id for >= 200 random filtrations on windows
/// within [-5, 5]; exact equality, zero failures.
#[test]
fn criterion_2_phi_psi_identity() {
    let rings = rings();
    let total = 200usize;
    for case in 0..total {
        let ring = &rings[case % rings.len()];
        let mut rng = Rng::new(0x9b1 + case as u64);
        let phi = random_filtration(&mut rng, ring, &spec_bounds());
        let rep = roundtrip_phi_psi(&phi, (-5, 5)).unwrap();
        assert!(
            rep.equal,
            "case {case} over {}: {:?}",
            ring.name(),
            rep.rows
        );
    }
    println!("[PASS] criterion 2: phi-psi roundtrip exact on {total} filtrations, zero failures");
}

/// Criterion 3: Psi o Phi consistency for >= 200 random generator lists:
/// dominated probes are members, and no nonzero member is in the coaisle.
#[test]
fn criterion_3_psi_phi_consistency() {
    let rings = rings();
    let bounds = spec_bounds();
    let total = 200usize;
    let mut dominated_seen = 0usize;
    for case in 0..total {
        let ring = &rings[case % rings.len()];
        let mut rng = Rng::new(0xabba + case as u64);
        let gens: Vec<PerfectComplex> = (0..1 + rng.below(2))
            .map(|_| random_complex(&mut rng, ring, &bounds))
            .collect();
        let mut probes = vec![PerfectComplex::zero(ring.clone()), gens[0].clone()];
        // a dominated probe: generator tensored with a nonpositive complex
        let torsion = PerfectComplex::cyclic(ring.clone(), random_divisor(&mut rng, ring, &bounds), 0);
        probes.push(tensor_total(&torsion, &gens[0]).unwrap());
        probes.push(random_complex(&mut rng, ring, &bounds));
        let rep = roundtrip_psi_phi(ring, &gens, &probes).unwrap();
        assert!(rep.ok, "case {case} over {}: {:?}", ring.name(), rep.probes);
        dominated_seen += rep.probes.iter().filter(|p| p.dominated).count();
    }
    assert!(dominated_seen >= total, "too few dominated probes exercised");
    println!(
        "[PASS] criterion 3: psi-phi consistency on {total} generator lists ({dominated_seen} dominated probes), zero failures"
    );
}

/// Criterion 4: verified t-decompositions on >= 100 torsion-dominated
/// random pairs with cap 64: success rate >= 95%, and nothing unverified is
/// ever presented as success.
#[test]
fn criterion_4_tdecomposition_soundness() {
    let rings = rings();
    let total = 120usize;
    let mut verified = 0usize;
    for case in 0..total {
        let ring = &rings[case % rings.len()];
        let mut rng = Rng::new(0xdec0 + case as u64);
        let bounds = SizeBounds {
            max_rank: 3,
            max_amplitude: 3,
            max_entry: 12,
            max_primes: 3,
        };
        // torsion-dominated: cyclic blocks, with an occasional free block
        let blocks = 1 + rng.below(3);
        let mut pieces = vec![];
        for b in 0..blocks {
            let deg = rng.range(-2, 1);
            if b == 0 && case % 12 == 11 {
                pieces.push(PerfectComplex::free(ring.clone(), 1, deg));
            } else {
                pieces.push(PerfectComplex::cyclic(
                    ring.clone(),
                    random_divisor(&mut rng, ring, &bounds),
                    deg,
                ));
            }
        }
        let a = direct_sum_many(ring, &pieces).unwrap();
        let phi = random_filtration(&mut rng, ring, &bounds);
        let rep = t_decompose(&a, &phi, 64).unwrap();
        // no unverified result may be presented as success
        assert!(
            !(rep.verified && rep.cap_exceeded),
            "case {case}: verified yet flagged"
        );
        if rep.verified {
            assert!(
                rep.aisle_cert.ok
                    && rep.coaisle_cert.orthogonal
                    && rep.cone_identity
                    && rep.hom_vanishes,
                "case {case}: verified without all checks"
            );
            verified += 1;
            if case < 10 {
                // independent re-verification of the returned triangle
                assert!(in_aisle(&rep.triangle.first, &phi).unwrap().ok);
                let w = coaisle_window(&rep.triangle.third, &phi);
                assert!(in_coaisle(&rep.triangle.third, &phi, w).unwrap().orthogonal);
            }
        } else {
            assert!(rep.cap_exceeded, "case {case}: unverified without a flag");
        }
    }
    let rate = verified as f64 / total as f64;
    assert!(rate >= 0.95, "verified rate {rate} below 95%");
    println!(
        "[PASS] criterion 4: {verified}/{total} verified t-decompositions (rate {:.3}), failures all explicitly flagged",
        rate
    );
}

// ---- criterion 5: independent chain-map/homotopy enumeration oracle ----

type IMat = Vec<Vec<i128>>;

fn int_matrix(c: &PerfectComplex, degree: i64) -> IMat {
    let d = c.diff_or_zero(degree);
    let ring = c.ring();
    (0..d.rows())
        .map(|i| {
            (0..d.cols())
                .map(|j| {
                    ring.format_element(d.get(i, j))
                        .parse::<i128>()
                        .expect("small integer entry")
                })
                .collect()
        })
        .collect()
}

/// Column echelon form by unimodular column operations: returns `(E, U)`
/// with `M * U = E` and the set of zero columns of `E` spanning `ker M`.
fn col_echelon(m: &IMat, cols: usize) -> (IMat, IMat) {
    let rows = m.len();
    let mut e: IMat = m.to_vec();
    let mut u: IMat = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    let col_swap = |mat: &mut IMat, a: usize, b: usize| {
        for row in mat.iter_mut() {
            row.swap(a, b);
        }
    };
    let col_addmul = |mat: &mut IMat, dst: usize, src: usize, q: i128| {
        for row in mat.iter_mut() {
            row[dst] += q * row[src];
        }
    };
    let mut c0 = 0usize;
    for r in 0..rows {
        if c0 >= cols {
            break;
        }
        loop {
            let mut best: Option<(i128, usize)> = None;
            for c in c0..cols {
                let v = e[r][c];
                if v != 0 && best.map(|(bv, _)| v.abs() < bv).unwrap_or(true) {
                    best = Some((v.abs(), c));
                }
            }
            let Some((_, c)) = best else {
                break;
            };
            if c != c0 {
                col_swap(&mut e, c0, c);
                col_swap(&mut u, c0, c);
            }
            let mut done = true;
            for c in c0 + 1..cols {
                let q = e[r][c] / e[r][c0];
                if q != 0 {
                    col_addmul(&mut e, c, c0, -q);
                    col_addmul(&mut u, c, c0, -q);
                }
                if e[r][c] != 0 {
                    done = false;
                }
            }
            if done {
                c0 += 1;
                break;
            }
        }
    }
    (e, u)
}

fn kernel_basis_int(m: &IMat, cols: usize) -> Vec<Vec<i128>> {
    let (e, u) = col_echelon(m, cols);
    let rows = m.len();
    let mut out = vec![];
    for c in 0..cols {
        if (0..rows).all(|r| e[r][c] == 0) {
            out.push((0..cols).map(|r| u[r][c]).collect());
        }
    }
    out
}

/// Does `v` lie in the integer column span of `m`?
fn lattice_contains(m: &IMat, cols: usize, v: &[i128]) -> bool {
    let rows = m.len();
    let (e, _) = col_echelon(m, cols);
    let mut v = v.to_vec();
    let mut col = 0usize;
    for r in 0..rows {
        if col < cols && e[r][col] != 0 {
            if v[r] % e[r][col] != 0 {
                return false;
            }
            let y = v[r] / e[r][col];
            for (rr, item) in v.iter_mut().enumerate().take(rows).skip(r) {
                *item -= y * e[rr][col];
            }
            col += 1;
        } else if v[r] != 0 {
            return false;
        }
    }
    v.iter().all(|&x| x == 0)
}

struct HomSystem {
    /// offsets per degree into the unknown vector of map components
    offsets: std::collections::BTreeMap<i64, usize>,
    total: usize,
    constraints: IMat,
    homotopy_images: IMat,
}

/// Builds the chain-map constraint system and homotopy-image lattice for
/// maps `g[n] -> B`, directly from the integer matrices.
fn hom_system(g: &PerfectComplex, b: &PerfectComplex, n: i64) -> HomSystem {
    use std::collections::BTreeMap;
    let s_rank = |k: i64| g.rank(k + n);
    // d_{g[n]}^k = (-1)^n d_g^{k+n}
    let sign = if n.rem_euclid(2) == 0 { 1i128 } else { -1 };
    let s_diff = |k: i64| -> IMat {
        int_matrix(g, k + n)
            .into_iter()
            .map(|row| row.into_iter().map(|x| sign * x).collect())
            .collect()
    };
    let lo = match (g.lo().map(|l| l - n), b.lo()) {
        (Some(a), Some(c)) => a.min(c) - 1,
        (Some(a), None) => a - 1,
        (None, Some(c)) => c - 1,
        (None, None) => 0,
    };
    let hi = match (g.hi().map(|h| h - n), b.hi()) {
        (Some(a), Some(c)) => a.max(c) + 1,
        (Some(a), None) => a + 1,
        (None, Some(c)) => c + 1,
        (None, None) => 0,
    };
    let mut offsets = BTreeMap::new();
    let mut total = 0usize;
    for k in lo..=hi {
        offsets.insert(k, total);
        total += b.rank(k) * s_rank(k);
    }
    // constraints: f_{k+1} ds^k - db^k f_k = 0
    let mut constraints = vec![];
    for k in lo..=hi {
        let ds = s_diff(k);
        let db = int_matrix(b, k);
        for i in 0..b.rank(k + 1) {
            for j in 0..s_rank(k) {
                let mut row = vec![0i128; total];
                if let Some(off) = offsets.get(&(k + 1)) {
                    for l in 0..s_rank(k + 1) {
                        row[off + i * s_rank(k + 1) + l] += ds[l][j];
                    }
                }
                let off = offsets[&k];
                for l in 0..b.rank(k) {
                    row[off + l * s_rank(k) + j] -= db[i][l];
                }
                constraints.push(row);
            }
        }
    }
    // homotopies h_k : s^k -> b^{k-1}; image (dh + hd)_k = db^{k-1} h_k + h_{k+1} ds^k
    let mut h_offsets = BTreeMap::new();
    let mut h_total = 0usize;
    for k in lo..=hi + 1 {
        h_offsets.insert(k, h_total);
        h_total += b.rank(k - 1) * s_rank(k);
    }
    let mut images = vec![vec![0i128; h_total]; total];
    for k in lo..=hi {
        let ds = s_diff(k);
        let db_prev = int_matrix(b, k - 1);
        let off_f = offsets[&k];
        // db^{k-1} h_k contribution
        let off_h = h_offsets[&k];
        for i in 0..b.rank(k) {
            for j in 0..s_rank(k) {
                for l in 0..b.rank(k - 1) {
                    images[off_f + i * s_rank(k) + j][off_h + l * s_rank(k) + j] +=
                        db_prev[i][l];
                }
            }
        }
        // h_{k+1} ds^k contribution
        if let Some(off_h1) = h_offsets.get(&(k + 1)) {
            for i in 0..b.rank(k) {
                for j in 0..s_rank(k) {
                    for l in 0..s_rank(k + 1) {
                        images[off_f + i * s_rank(k) + j][off_h1 + i * s_rank(k + 1) + l] +=
                            ds[l][j];
                    }
                }
            }
        }
    }
    HomSystem {
        offsets,
        total,
        constraints,
        homotopy_images: images,
    }
}

/// Oracle verdict: every chain map `g[n] -> b` is null-homotopic.
fn oracle_orthogonal_at(g: &PerfectComplex, b: &PerfectComplex, n: i64) -> bool {
    let sys = hom_system(g, b, n);
    if sys.total == 0 {
        return true;
    }
    let h_cols = sys.homotopy_images.first().map(|r| r.len()).unwrap_or(0);
    for v in kernel_basis_int(&sys.constraints, sys.total) {
        if !lattice_contains(&sys.homotopy_images, h_cols, &v) {
            return false;
        }
    }
    true
}

/// Criterion 5: the Hom-complex computation agrees with explicit
/// chain-map/homotopy enumeration on 100% of tiny instances.
#[test]
fn criterion_5_koszul_orthogonality_completeness() {
    let ring = RingDescriptor::integers();
    let total = 60usize;
    let mut nonzero_cases = 0usize;
    for case in 0..total {
        let mut rng = Rng::new(0x0c5 + case as u64);
        let bounds = SizeBounds {
            max_rank: 2,
            max_amplitude: 2,
            max_entry: 2,
            max_primes: 2,
        };
        let g = random_complex(&mut rng, &ring, &bounds);
        let b = random_complex(&mut rng, &ring, &bounds);
        if g.is_zero_complex() || b.is_zero_complex() {
            continue;
        }
        // entry bound of the criterion
        assert!(g.diffs_max_size().unwrap_or(0) <= 2 && b.diffs_max_size().unwrap_or(0) <= 2);

        let impl_out = orthogonal_all_shifts(&g, &b).unwrap();
        let n_max = (g.hi().unwrap() - b.lo().unwrap() + 2).max(2);
        let oracle_all = (0..=n_max).all(|n| oracle_orthogonal_at(&g, &b, n));
        assert_eq!(
            impl_out.orthogonal, oracle_all,
            "case {case}: implementation {} vs oracle {} for\n g = {}\n b = {}",
            impl_out.orthogonal,
            oracle_all,
            g.summary(),
            b.summary()
        );
        if let OrthoCertificate::NonzeroClass { shift, witness, .. } = &impl_out.certificate {
            nonzero_cases += 1;
            // the witness must be a genuine non-null-homotopic chain map
            let w: ChainMap = hom_vector_to_chain_map(&g, &b, *shift, witness).unwrap();
            w.ensure_valid().unwrap();
            let sys = hom_system(&g, &b, *shift);
            let mut vec_w = vec![0i128; sys.total];
            for (k, off) in &sys.offsets {
                let comp = w.component(*k);
                for i in 0..comp.rows() {
                    for j in 0..comp.cols() {
                        vec_w[off + i * comp.cols() + j] = ring
                            .format_element(comp.get(i, j))
                            .parse::<i128>()
                            .unwrap();
                    }
                }
            }
            let h_cols = sys.homotopy_images.first().map(|r| r.len()).unwrap_or(0);
            assert!(
                !lattice_contains(&sys.homotopy_images, h_cols, &vec_w),
                "case {case}: witness is null-homotopic"
            );
        }
    }
    assert!(nonzero_cases >= 10, "too few nonzero Hom cases exercised");
    println!(
        "[PASS] criterion 5: Hom-complex verdicts match brute-force enumeration on {total} instances ({nonzero_cases} with nonzero witnesses)"
    );
}

/// Criterion 6: extension suite over Z[1/f] for f in {2, 6, 30}.
#[test]
fn criterion_6_extension_suite() {
    let base = RingDescriptor::integers();
    let total = 120usize;
    let fs = [2i64, 6, 30];
    let torsion_primes = [7i64, 11, 13];
    for case in 0..total {
        let mut rng = Rng::new(0xe27 + case as u64);
        let f = fs[case % fs.len()];
        let j = OpenImmersion::new(base.clone(), base.from_int(f)).unwrap();
        let loc = j.localized().clone();
        // random localized complex with denominators
        let bounds = SizeBounds {
            max_rank: 3,
            max_amplitude: 3,
            max_entry: 9,
            max_primes: 3,
        };
        let amb = random_complex(&mut rng, &loc, &bounds);
        let twist = loc.inverted_power(-rng.range(0, 2));
        let f_cx = if let (Some(lo), Some(hi)) = (amb.lo(), amb.hi()) {
            let mut ranks = vec![];
            let mut diffs = vec![];
            for n in lo..=hi {
                ranks.push(amb.rank(n));
                if n < hi {
                    diffs.push(amb.diff_or_zero(n).map(|x| loc.mul(&twist, x)));
                }
            }
            PerfectComplex::new(loc.clone(), lo, ranks, diffs).unwrap()
        } else {
            amb
        };
        let (_, witness) = extend_perfect_with_witness(&f_cx, &j).unwrap();
        assert!(
            is_quasi_iso(&witness).unwrap(),
            "case {case}: restrict(extend(F)) != F over Z[1/{f}]"
        );

        // torsion part: support-constrained extension
        let p = torsion_primes[rng.below(3) as usize];
        let e = 1 + rng.below(2) as u32;
        let divisor = loc.from_int(p.pow(e));
        let deg = rng.range(-2, 0);
        let torsion = PerfectComplex::cyclic(loc.clone(), divisor, deg);
        let z = SpecSubset::finite([PrimePoint::new(&base, base.from_int(p).numerator().clone()).unwrap()]);
        let bound = deg;
        let (extended, witness) =
            extend_with_support_witness(&torsion, &z, bound, &j).unwrap();
        assert!(is_quasi_iso(&witness).unwrap(), "case {case}: support extension");
        let psi = Filtration::step(base.clone(), z, bound).unwrap();
        assert!(
            in_aisle(&extended, &psi).unwrap().ok,
            "case {case}: extension escapes Perf^{{<={bound}}}_Z"
        );
    }
    println!(
        "[PASS] criterion 6: {total} extensions over Z[1/f], f in {{2,6,30}}: restrictions quasi-isomorphic, supports constrained, zero failures"
    );
}

/// Criterion 7: restriction-orthogonality fixtures (both vacuous and
/// substantive instances).
#[test]
fn criterion_7_restriction_fixtures() {
    use tstruct_cli::schema::{complex_to_core, subset_to_core, ComplexJson, SubsetJson};
    #[derive(serde::Deserialize)]
    struct CaseFile {
        cases: Vec<Case>,
    }
    #[derive(serde::Deserialize)]
    struct Case {
        name: String,
        complex: ComplexJson,
        open: String,
        subset: SubsetJson,
        bound: i64,
        budget: usize,
        expect_upstream: bool,
    }
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/restriction.json");
    let file: CaseFile =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!(file.cases.len() >= 20, "need at least 20 curated cases");
    let mut substantive = 0usize;
    let mut vacuous = 0usize;
    for case in &file.cases {
        let f_cx = complex_to_core(&case.complex).unwrap();
        let ring = f_cx.ring().clone();
        let open = tstruct_core::exactalg::parse_element(&ring, &case.open).unwrap();
        let j = OpenImmersion::new(ring.clone(), open).unwrap();
        let z = subset_to_core(&ring, &case.subset).unwrap();
        let rep =
            restriction_orthogonality_check(&f_cx, &z, case.bound, &j, case.budget).unwrap();
        assert_eq!(
            rep.upstream_orthogonal, case.expect_upstream,
            "{}: upstream mismatch",
            case.name
        );
        assert!(rep.implication_holds, "{}: lemma violated", case.name);
        if rep.upstream_orthogonal {
            substantive += 1;
            assert!(rep.downstream_orthogonal, "{}: downstream", case.name);
        } else {
            vacuous += 1;
        }
    }
    assert!(substantive >= 5 && vacuous >= 5, "mix requirement");
    println!(
        "[PASS] criterion 7: {} restriction fixtures ({substantive} substantive, {vacuous} vacuous), implication holds everywhere",
        file.cases.len()
    );
}

/// Criterion 8: the worked-example fixtures reproduce their golden reports
/// byte for byte.
#[test]
fn criterion_8_worked_examples_bit_exact() {
    #[derive(serde::Deserialize)]
    struct Manifest {
        cases: Vec<Case>,
    }
    #[derive(serde::Deserialize)]
    struct Case {
        name: String,
        args: Vec<String>,
        exit: i32,
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let manifest: Manifest =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap())
            .unwrap();
    let mut count = 0usize;
    for case in &manifest.cases {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_tstruct"))
            .current_dir(&dir)
            .args(&case.args)
            .args(["--format", "json"])
            .output()
            .unwrap();
        assert_eq!(
            out.status.code(),
            Some(case.exit),
            "{}: wrong exit code",
            case.name
        );
        let golden = std::fs::read_to_string(dir.join("golden").join(format!(
            "{}.json",
            case.name
        )))
        .unwrap_or_else(|_| panic!("{}: golden file missing", case.name));
        assert_eq!(
            golden,
            String::from_utf8(out.stdout).unwrap(),
            "{}: drifted from golden output",
            case.name
        );
        count += 1;
    }
    assert!(count >= 25);
    println!("[PASS] criterion 8: {count} worked-example fixtures reproduced bit-exactly");
}

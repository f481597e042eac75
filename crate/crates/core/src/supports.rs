//! Specialization-closed subsets of the spectrum, filtrations of supports,
//! Koszul generator families, and membership in the associated aisle.

use std::collections::BTreeSet;
use std::fmt;

use crate::complex::{cohomology, tensor_total, PerfectComplex};
use crate::error::{Error, Result};
use crate::exactalg::{support, PrimePoint, RingDescriptor, RingElement};

/// A specialization-closed (= Thomason, over a Noetherian PID spectrum)
/// subset: everything, or a finite set of closed points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpecSubset {
    All,
    Finite(BTreeSet<PrimePoint>),
}

impl SpecSubset {
    pub fn empty() -> Self {
        SpecSubset::Finite(BTreeSet::new())
    }

    pub fn finite(points: impl IntoIterator<Item = PrimePoint>) -> Self {
        SpecSubset::Finite(points.into_iter().collect())
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SpecSubset::Finite(s) if s.is_empty())
    }

    pub fn is_all(&self) -> bool {
        matches!(self, SpecSubset::All)
    }

    pub fn union(&self, other: &Self) -> Self {
        match (self, other) {
            (SpecSubset::All, _) | (_, SpecSubset::All) => SpecSubset::All,
            (SpecSubset::Finite(a), SpecSubset::Finite(b)) => {
                SpecSubset::Finite(a.union(b).cloned().collect())
            }
        }
    }

    /// Is `other` contained in `self`?
    pub fn contains(&self, other: &Self) -> bool {
        match (self, other) {
            (SpecSubset::All, _) => true,
            (SpecSubset::Finite(_), SpecSubset::All) => false,
            (SpecSubset::Finite(a), SpecSubset::Finite(b)) => b.is_subset(a),
        }
    }

    pub fn contains_point(&self, p: &PrimePoint) -> bool {
        match self {
            SpecSubset::All => true,
            SpecSubset::Finite(s) => s.contains(p),
        }
    }

    pub fn points(&self) -> Option<&BTreeSet<PrimePoint>> {
        match self {
            SpecSubset::All => None,
            SpecSubset::Finite(s) => Some(s),
        }
    }

    /// Checks every point is a valid prime of `ring`.
    pub fn validate_for(&self, ring: &RingDescriptor) -> Result<()> {
        if let SpecSubset::Finite(s) = self {
            for p in s {
                PrimePoint::new(ring, p.generator().clone())?;
            }
        }
        Ok(())
    }

    /// Image under restriction to `D(f)`: points dividing `f` drop out.
    pub fn restrict(&self, restricted_ring: &RingDescriptor) -> Self {
        match self {
            SpecSubset::All => SpecSubset::All,
            SpecSubset::Finite(s) => SpecSubset::Finite(
                s.iter()
                    .filter(|p| !p.generator().divides(restricted_ring.inverted()))
                    .cloned()
                    .collect(),
            ),
        }
    }

    pub fn format(&self, ring: &RingDescriptor) -> String {
        let _ = ring;
        match self {
            SpecSubset::All => "all".to_string(),
            SpecSubset::Finite(s) => {
                let inner: Vec<String> = s.iter().map(|p| p.to_string()).collect();
                format!("{{{}}}", inner.join(", "))
            }
        }
    }
}

impl fmt::Display for SpecSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecSubset::All => write!(f, "all"),
            SpecSubset::Finite(s) => {
                let inner: Vec<String> = s.iter().map(|p| p.to_string()).collect();
                write!(f, "{{{}}}", inner.join(", "))
            }
        }
    }
}

/// A finitely presented decreasing function `Z -> SpecSubset`.
///
/// `head` is the value for every degree below the first step; each step
/// `(d, S)` sets the value to `S` from degree `d` on (until the next step).
/// Eventually-zero tails are required for the classification operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    ring: RingDescriptor,
    head: SpecSubset,
    steps: Vec<(i64, SpecSubset)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiltrationValidity {
    Ok,
    /// The value increases when passing to this degree.
    IncreasesAt(i64),
    /// The final value is not the empty set.
    TailNotEmpty,
}

impl FiltrationValidity {
    pub fn is_ok(&self) -> bool {
        matches!(self, FiltrationValidity::Ok)
    }
}

impl Filtration {
    /// Builds a filtration; steps must have strictly increasing degrees.
    /// Monotonicity is *not* enforced here — `validate` reports on it.
    pub fn new(
        ring: RingDescriptor,
        head: SpecSubset,
        steps: Vec<(i64, SpecSubset)>,
    ) -> Result<Self> {
        for w in steps.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidFiltration(format!(
                    "step degrees must strictly increase ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        head.validate_for(&ring)?;
        for (_, s) in &steps {
            s.validate_for(&ring)?;
        }
        let mut f = Filtration { ring, head, steps };
        f.canonicalize();
        Ok(f)
    }

    /// The constant-empty filtration (the zero aisle).
    pub fn constant_empty(ring: RingDescriptor) -> Self {
        Filtration {
            ring,
            head: SpecSubset::empty(),
            steps: vec![],
        }
    }

    /// The step filtration: `subset` for `i <= level`, empty above.
    pub fn step(ring: RingDescriptor, subset: SpecSubset, level: i64) -> Result<Self> {
        Filtration::new(
            ring,
            subset,
            vec![(level + 1, SpecSubset::empty())],
        )
    }

    fn canonicalize(&mut self) {
        let mut merged: Vec<(i64, SpecSubset)> = vec![];
        let mut current = self.head.clone();
        for (d, s) in self.steps.drain(..) {
            if s != current {
                current = s.clone();
                merged.push((d, s));
            }
        }
        self.steps = merged;
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn head(&self) -> &SpecSubset {
        &self.head
    }

    pub fn steps(&self) -> &[(i64, SpecSubset)] {
        &self.steps
    }

    pub fn value(&self, i: i64) -> &SpecSubset {
        let mut current = &self.head;
        for (d, s) in &self.steps {
            if *d <= i {
                current = s;
            } else {
                break;
            }
        }
        current
    }

    pub fn validate(&self) -> FiltrationValidity {
        let mut prev = &self.head;
        for (d, s) in &self.steps {
            if !prev.contains(s) {
                return FiltrationValidity::IncreasesAt(*d);
            }
            prev = s;
        }
        if !prev.is_empty() {
            return FiltrationValidity::TailNotEmpty;
        }
        FiltrationValidity::Ok
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate() {
            FiltrationValidity::Ok => Ok(()),
            FiltrationValidity::IncreasesAt(d) => Err(Error::InvalidFiltration(format!(
                "value increases at degree {d}"
            ))),
            FiltrationValidity::TailNotEmpty => Err(Error::InvalidFiltration(
                "tail value is not the empty set".into(),
            )),
        }
    }

    /// Greatest degree with a nonempty value; `None` when constant empty.
    pub fn last_nonempty(&self) -> Option<i64> {
        if self.head.is_empty() {
            // decreasing: everything is empty
            return None;
        }
        // the final step is empty (validated); the last nonempty degree is
        // just below the first step that reaches empty for good
        let mut last = None;
        let mut current = &self.head;
        for (d, s) in &self.steps {
            if !current.is_empty() {
                last = Some(*d - 1);
            }
            current = s;
        }
        if !current.is_empty() {
            return None; // never becomes empty; treated as unbounded
        }
        last
    }

    /// Least degree from which the value is no longer `All`; `None` when the
    /// head is already not `All`.
    pub fn first_non_all(&self) -> Option<i64> {
        if !self.head.is_all() {
            return None;
        }
        for (d, s) in &self.steps {
            if !s.is_all() {
                return Some(*d);
            }
        }
        None
    }

    /// True when every value is `All` or empty (the classical truncation
    /// filtrations `D^{<=m}`).
    pub fn is_step_shaped(&self) -> bool {
        std::iter::once(&self.head)
            .chain(self.steps.iter().map(|(_, s)| s))
            .all(|s| s.is_all() || s.is_empty())
    }

    /// Pointwise equality over a window.
    pub fn equals_on(&self, other: &Filtration, window: (i64, i64)) -> bool {
        (window.0..=window.1).all(|i| self.value(i) == other.value(i))
    }

    pub fn format(&self) -> String {
        let mut parts = vec![format!("head {}", self.head)];
        for (d, s) in &self.steps {
            parts.push(format!("{d} -> {s}"));
        }
        parts.join("; ")
    }
}

/// One Koszul generator: a shifted Koszul complex with its level and the
/// subset it is supported in.
#[derive(Clone, Debug)]
pub struct GeneratorEntry {
    pub complex: PerfectComplex,
    /// The filtration level `i`; the complex is shifted by `-i`.
    pub level: i64,
    pub declared: SpecSubset,
    /// Human-readable description of the generator.
    pub label: String,
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub entries: Vec<GeneratorEntry>,
    pub window: (i64, i64),
    /// Whether the window covered the nontrivial range of the filtration.
    pub covers: bool,
}

impl GeneratorSet {
    pub fn complexes(&self) -> Vec<PerfectComplex> {
        self.entries.iter().map(|e| e.complex.clone()).collect()
    }
}

/// The Koszul complex on a list of elements: the tensor product of the
/// two-term complexes `[R --a--> R]`, concentrated in degrees `[-n, 0]`.
/// The empty list gives the unit complex.
pub fn koszul(ring: &RingDescriptor, elements: &[RingElement]) -> Result<PerfectComplex> {
    let mut acc = PerfectComplex::unit(ring.clone());
    for a in elements {
        let two_term = PerfectComplex::cyclic(ring.clone(), a.clone(), 0);
        acc = tensor_total(&acc, &two_term)?;
    }
    Ok(acc)
}

/// Membership certificate for `in_aisle`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AisleCertificate {
    pub ok: bool,
    /// Least violating degree with a witness point (`None` = generic point,
    /// i.e. the cohomology has full support).
    pub violation: Option<(i64, Option<PrimePoint>)>,
}

impl AisleCertificate {
    pub fn passed() -> Self {
        AisleCertificate {
            ok: true,
            violation: None,
        }
    }

    pub fn format(&self) -> String {
        match &self.violation {
            None => "ok".to_string(),
            Some((d, Some(p))) => format!("({d}, {p})"),
            Some((d, None)) => format!("({d}, generic)"),
        }
    }
}

/// Does `E` lie in the aisle `U_phi`, i.e. is `Supp H^i(E) ⊆ phi(i)` for
/// every `i`?
pub fn in_aisle(e: &PerfectComplex, phi: &Filtration) -> Result<AisleCertificate> {
    e.ring().same_ring(phi.ring())?;
    e.ensure_valid()?;
    phi.ensure_valid()?;
    let (Some(lo), Some(hi)) = (e.lo(), e.hi()) else {
        return Ok(AisleCertificate::passed());
    };
    for i in lo..=hi {
        let h = cohomology(e, i);
        let supp = support(&h, e.ring())?;
        let allowed = phi.value(i);
        if allowed.contains(&supp) {
            continue;
        }
        let witness = match &supp {
            SpecSubset::All => None,
            SpecSubset::Finite(pts) => pts.iter().find(|p| !allowed.contains_point(p)).cloned(),
        };
        return Ok(AisleCertificate {
            ok: false,
            violation: Some((i, witness)),
        });
    }
    Ok(AisleCertificate::passed())
}

/// The graded support of a family of complexes:
/// `phi(i) = U_S Supph^{>=i}(S)`, computed degree by degree.
pub fn graded_support(ring: &RingDescriptor, gens: &[PerfectComplex]) -> Result<Filtration> {
    for g in gens {
        ring.same_ring(g.ring())?;
    }
    let lo = gens.iter().filter_map(|g| g.lo()).min();
    let hi = gens.iter().filter_map(|g| g.hi()).max();
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Ok(Filtration::constant_empty(ring.clone()));
    };
    // per-degree supports; Supph^{>=i} is the suffix union
    let mut per_degree: Vec<SpecSubset> = vec![];
    for i in lo..=hi {
        let mut acc = SpecSubset::empty();
        for g in gens {
            acc = acc.union(&support(&cohomology(g, i), ring)?);
        }
        per_degree.push(acc);
    }
    let mut suffix = vec![SpecSubset::empty(); per_degree.len() + 1];
    for k in (0..per_degree.len()).rev() {
        suffix[k] = per_degree[k].union(&suffix[k + 1]);
    }
    let head = suffix[0].clone();
    let mut steps = vec![];
    for (k, s) in suffix.iter().enumerate().skip(1) {
        steps.push((lo + k as i64, s.clone()));
    }
    Filtration::new(ring.clone(), head, steps)
}

/// The Koszul generator family of a filtration over a window.
///
/// At a level with `phi(i) = All` the generator is the shifted unit
/// `R[-i]`; at a finite level every nonempty subset `S` of the points
/// contributes `K(prod S)[-i]` (exponent-1 products only).
pub fn koszul_generators(phi: &Filtration, window: (i64, i64)) -> Result<GeneratorSet> {
    phi.ensure_valid()?;
    let ring = phi.ring().clone();
    if window.0 > window.1 {
        return Err(Error::Window(format!(
            "empty window {}:{}",
            window.0, window.1
        )));
    }
    let mut entries = vec![];
    for i in window.0..=window.1 {
        match phi.value(i) {
            SpecSubset::All => {
                entries.push(GeneratorEntry {
                    complex: PerfectComplex::unit(ring.clone()).shift(-i),
                    level: i,
                    declared: SpecSubset::All,
                    label: format!("R[{}]", -i),
                });
            }
            SpecSubset::Finite(points) => {
                let pts: Vec<&PrimePoint> = points.iter().collect();
                if pts.len() > 16 {
                    return Err(Error::Unsupported(format!(
                        "subset enumeration over {} points",
                        pts.len()
                    )));
                }
                for mask in 1u32..(1u32 << pts.len()) {
                    let mut product = ring.one();
                    let mut chosen = BTreeSet::new();
                    for (b, p) in pts.iter().enumerate() {
                        if mask & (1 << b) != 0 {
                            product = ring.mul(&product, &p.element(&ring));
                            chosen.insert((*p).clone());
                        }
                    }
                    let complex = koszul(&ring, &[product.clone()])?.shift(-i);
                    entries.push(GeneratorEntry {
                        complex,
                        level: i,
                        declared: phi.value(i).clone(),
                        label: format!(
                            "K({})[{}]",
                            ring.format_element(&product),
                            -i
                        ),
                    });
                }
            }
        }
    }
    let covers = match phi.last_nonempty() {
        None => true,
        Some(last) => window.1 >= last,
    };
    Ok(GeneratorSet {
        entries,
        window,
        covers,
    })
}

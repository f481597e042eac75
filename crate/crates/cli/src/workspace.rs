//! File loading with validation: every named object is checked on load and
//! ring compatibility is enforced before dispatch.

use std::path::Path;

use anyhow::{bail, Context, Result};

use tstruct_core::complex::PerfectComplex;
use tstruct_core::exactalg::RingDescriptor;
use tstruct_core::supports::{Filtration, SpecSubset};

use crate::schema::{
    complex_list_to_core, complex_to_core, filtration_to_core, ring_to_core, subset_to_core,
    ComplexJson, ComplexListJson, FiltrationJson, RingJson, SubsetFileJson,
};

/// Loads and validates the objects a command needs.
#[derive(Default)]
pub struct Workspace;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

impl Workspace {
    pub fn load_complex(&self, path: &Path) -> Result<PerfectComplex> {
        let raw: ComplexJson = serde_json::from_str(&read(path)?)
            .with_context(|| format!("parsing complex {}", path.display()))?;
        let c = complex_to_core(&raw)?;
        c.ensure_valid()
            .with_context(|| format!("complex {} is not a complex", path.display()))?;
        Ok(c)
    }

    /// Loads a complex without the `d o d` check (for `validate`).
    pub fn load_complex_unchecked(&self, path: &Path) -> Result<PerfectComplex> {
        let raw: ComplexJson = serde_json::from_str(&read(path)?)
            .with_context(|| format!("parsing complex {}", path.display()))?;
        complex_to_core(&raw)
    }

    pub fn load_filtration(&self, path: &Path) -> Result<Filtration> {
        let raw: FiltrationJson = serde_json::from_str(&read(path)?)
            .with_context(|| format!("parsing filtration {}", path.display()))?;
        filtration_to_core(&raw)
    }

    pub fn load_complex_list(&self, path: &Path) -> Result<(RingDescriptor, Vec<PerfectComplex>)> {
        let raw: ComplexListJson = serde_json::from_str(&read(path)?)
            .with_context(|| format!("parsing complex list {}", path.display()))?;
        let (ring, list) = complex_list_to_core(&raw)?;
        for (i, c) in list.iter().enumerate() {
            c.ensure_valid()
                .with_context(|| format!("complex #{i} in {}", path.display()))?;
        }
        Ok((ring, list))
    }

    pub fn load_ring(&self, path: &Path) -> Result<RingDescriptor> {
        let raw: RingJson = serde_json::from_str(&read(path)?)
            .with_context(|| format!("parsing ring {}", path.display()))?;
        ring_to_core(&raw)
    }

    pub fn load_subset(&self, path: &Path) -> Result<(RingDescriptor, SpecSubset)> {
        let raw: SubsetFileJson = serde_json::from_str(&read(path)?)
            .with_context(|| format!("parsing subset {}", path.display()))?;
        let ring = ring_to_core(&raw.ring)?;
        let subset = subset_to_core(&ring, &raw.subset)?;
        Ok((ring, subset))
    }

    pub fn check_same_ring(&self, a: &RingDescriptor, b: &RingDescriptor) -> Result<()> {
        if a != b {
            bail!("ring mismatch: {} vs {}", a.name(), b.name());
        }
        Ok(())
    }
}

/// Parses `lo:hi`.
pub fn parse_window(s: &str) -> Result<(i64, i64)> {
    let Some((lo, hi)) = s.split_once(':') else {
        bail!("window must be lo:hi, got '{s}'");
    };
    let lo: i64 = lo.trim().parse().context("window lo")?;
    let hi: i64 = hi.trim().parse().context("window hi")?;
    if lo > hi {
        bail!("empty window {lo}:{hi}");
    }
    Ok((lo, hi))
}

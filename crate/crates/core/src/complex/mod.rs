//! Bounded complexes of finite free modules and the derived-category
//! toolkit built from them.
//!
//! Conventions: cohomological (upper) indexing, differentials raise degree
//! by one, `d_{C[k]} = (-1)^k d_C`, and cones/total complexes use the
//! standard Koszul sign rule.

mod cohomology;
mod ops;

pub use cohomology::{
    cohomology, homology_split, is_quasi_iso, kernel_data, split_model, sum_cohomology,
    supph_geq, DegreeData, SplitData, SplitDegree, SplitGenerator,
};
pub use ops::{
    cone, direct_sum, direct_sum_many, hom_complex, hom_degree_layout, hom_vector_to_chain_map,
    sum_inclusion_first, tensor_total, HomSlot,
};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::{Matrix, RingDescriptor, RingElement};

/// A bounded complex of finite free modules.
///
/// `ranks[k]` is the rank in degree `lo + k`; `diffs[k]` is the differential
/// out of degree `lo + k`, of shape `ranks[k+1] x ranks[k]`.  The
/// representation is trimmed: the first and last ranks are nonzero (the zero
/// complex has no ranks at all).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectComplex {
    ring: RingDescriptor,
    lo: i64,
    ranks: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl PerfectComplex {
    pub fn new(
        ring: RingDescriptor,
        lo: i64,
        ranks: Vec<usize>,
        diffs: Vec<Matrix>,
    ) -> Result<Self> {
        if !ranks.is_empty() && diffs.len() + 1 != ranks.len() {
            return Err(Error::Shape(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != ranks[k + 1] || d.cols() != ranks[k] {
                return Err(Error::Shape(format!(
                    "differential at degree {} has shape {}x{}, expected {}x{}",
                    lo + k as i64,
                    d.rows(),
                    d.cols(),
                    ranks[k + 1],
                    ranks[k]
                )));
            }
        }
        let mut c = PerfectComplex {
            ring,
            lo,
            ranks,
            diffs,
        };
        c.trim();
        Ok(c)
    }

    fn trim(&mut self) {
        while self.ranks.first() == Some(&0) {
            self.ranks.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        while self.ranks.last() == Some(&0) {
            self.ranks.pop();
            self.diffs.pop();
        }
        if self.ranks.is_empty() {
            self.lo = 0;
            self.diffs.clear();
        }
    }

    pub fn zero(ring: RingDescriptor) -> Self {
        PerfectComplex {
            ring,
            lo: 0,
            ranks: vec![],
            diffs: vec![],
        }
    }

    /// The unit object: `R` in degree 0.
    pub fn unit(ring: RingDescriptor) -> Self {
        Self::free(ring, 1, 0)
    }

    /// `R^rank` concentrated in one degree.
    pub fn free(ring: RingDescriptor, rank: usize, degree: i64) -> Self {
        if rank == 0 {
            return Self::zero(ring);
        }
        PerfectComplex {
            ring,
            lo: degree,
            ranks: vec![rank],
            diffs: vec![],
        }
    }

    /// The two-term complex `[R --d--> R]` in degrees `degree-1, degree`.
    pub fn cyclic(ring: RingDescriptor, d: RingElement, degree: i64) -> Self {
        let m = Matrix::from_fn(&ring, 1, 1, |_, _| d.clone());
        PerfectComplex {
            ring,
            lo: degree - 1,
            ranks: vec![1, 1],
            diffs: vec![m],
        }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn is_zero_complex(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Lowest degree with nonzero rank.
    pub fn lo(&self) -> Option<i64> {
        if self.ranks.is_empty() {
            None
        } else {
            Some(self.lo)
        }
    }

    /// Highest degree with nonzero rank.
    pub fn hi(&self) -> Option<i64> {
        if self.ranks.is_empty() {
            None
        } else {
            Some(self.lo + self.ranks.len() as i64 - 1)
        }
    }

    pub fn rank(&self, degree: i64) -> usize {
        if self.ranks.is_empty() || degree < self.lo {
            return 0;
        }
        let k = (degree - self.lo) as usize;
        self.ranks.get(k).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    pub fn diff(&self, degree: i64) -> Option<&Matrix> {
        if self.ranks.is_empty() || degree < self.lo {
            return None;
        }
        self.diffs.get((degree - self.lo) as usize)
    }

    /// The differential out of `degree`, materialized with correct shape.
    pub fn diff_or_zero(&self, degree: i64) -> Matrix {
        match self.diff(degree) {
            Some(d) => d.clone(),
            None => Matrix::zero(&self.ring, self.rank(degree + 1), self.rank(degree)),
        }
    }

    /// Checks `d o d = 0`; shape consistency is enforced at construction.
    pub fn validate(&self) -> ComplexValidity {
        let (Some(lo), Some(hi)) = (self.lo(), self.hi()) else {
            return ComplexValidity::Ok;
        };
        for n in lo..=hi - 2 {
            let prod = self.diff_or_zero(n + 1).mul(&self.ring, &self.diff_or_zero(n));
            for i in 0..prod.rows() {
                for j in 0..prod.cols() {
                    if !self.ring.is_zero(prod.get(i, j)) {
                        return ComplexValidity::Violation {
                            degree: n,
                            row: i,
                            col: j,
                        };
                    }
                }
            }
        }
        ComplexValidity::Ok
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate() {
            ComplexValidity::Ok => Ok(()),
            ComplexValidity::Violation { degree, row, col } => Err(Error::Shape(format!(
                "d o d != 0 starting at degree {degree} (entry {row},{col})"
            ))),
        }
    }

    /// `C[k]`: degree `n` of the shift is degree `n + k` of `C`.
    pub fn shift(&self, k: i64) -> Self {
        if self.ranks.is_empty() {
            return self.clone();
        }
        let diffs = if k % 2 == 0 {
            self.diffs.clone()
        } else {
            self.diffs.iter().map(|d| d.neg(&self.ring)).collect()
        };
        PerfectComplex {
            ring: self.ring.clone(),
            lo: self.lo - k,
            ranks: self.ranks.clone(),
            diffs,
        }
    }

    /// Largest entry size (bits / degree) across all differentials.
    pub fn diffs_max_size(&self) -> Option<u64> {
        self.diffs
            .iter()
            .flat_map(|d| d.entries())
            .map(|e| e.numerator().size_hint())
            .max()
    }

    pub fn summary(&self) -> String {
        match (self.lo(), self.hi()) {
            (Some(lo), Some(hi)) => format!(
                "degrees [{lo}, {hi}], ranks {:?}",
                self.ranks
            ),
            _ => "zero complex".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexValidity {
    Ok,
    /// `d^{degree+1} o d^{degree}` has a nonzero entry at `(row, col)`.
    Violation {
        degree: i64,
        row: usize,
        col: usize,
    },
}

impl ComplexValidity {
    pub fn is_ok(&self) -> bool {
        matches!(self, ComplexValidity::Ok)
    }
}

/// A degreewise map of complexes that commutes with the differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: PerfectComplex,
    pub target: PerfectComplex,
    components: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    pub fn new(
        source: PerfectComplex,
        target: PerfectComplex,
        components: BTreeMap<i64, Matrix>,
    ) -> Result<Self> {
        source.ring().same_ring(target.ring())?;
        for (n, m) in &components {
            if m.rows() != target.rank(*n) || m.cols() != source.rank(*n) {
                return Err(Error::Shape(format!(
                    "component at degree {n} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.rank(*n),
                    source.rank(*n)
                )));
            }
        }
        Ok(ChainMap {
            source,
            target,
            components,
        })
    }

    pub fn zero(source: PerfectComplex, target: PerfectComplex) -> Result<Self> {
        Self::new(source, target, BTreeMap::new())
    }

    pub fn identity(c: &PerfectComplex) -> Self {
        let mut comps = BTreeMap::new();
        if let (Some(lo), Some(hi)) = (c.lo(), c.hi()) {
            for n in lo..=hi {
                if c.rank(n) > 0 {
                    comps.insert(n, Matrix::identity(c.ring(), c.rank(n)));
                }
            }
        }
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            components: comps,
        }
    }

    pub fn component(&self, degree: i64) -> Matrix {
        match self.components.get(&degree) {
            Some(m) => m.clone(),
            None => Matrix::zero(
                self.source.ring(),
                self.target.rank(degree),
                self.source.rank(degree),
            ),
        }
    }

    /// First degree where the map fails to commute with the differentials.
    pub fn validate(&self) -> std::result::Result<(), i64> {
        let ring = self.source.ring();
        let degrees: Vec<i64> = match (
            self.source.lo().min(self.target.lo()),
            self.source.hi().max(self.target.hi()),
        ) {
            (Some(lo), Some(hi)) => (lo - 1..=hi).collect(),
            _ => vec![],
        };
        for n in degrees {
            // f_{n+1} d_S^n = d_T^n f_n
            let lhs = self.component(n + 1).mul(ring, &self.source.diff_or_zero(n));
            let rhs = self.target.diff_or_zero(n).mul(ring, &self.component(n));
            if lhs != rhs {
                return Err(n);
            }
        }
        Ok(())
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate()
            .map_err(|n| Error::Shape(format!("chain map does not commute at degree {n}")))
    }

    pub fn compose(&self, ring: &RingDescriptor, then: &ChainMap) -> Result<ChainMap> {
        if self.target != then.source {
            return Err(Error::Shape(
                "chain map composition: target/source mismatch".into(),
            ));
        }
        let mut comps = BTreeMap::new();
        let keys: std::collections::BTreeSet<i64> = self
            .components
            .keys()
            .chain(then.components.keys())
            .copied()
            .collect();
        for n in keys {
            let m = then.component(n).mul(ring, &self.component(n));
            if !m.is_zero(ring) {
                comps.insert(n, m);
            }
        }
        ChainMap::new(self.source.clone(), then.target.clone(), comps)
    }

    pub fn negate(&self, ring: &RingDescriptor) -> ChainMap {
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self
                .components
                .iter()
                .map(|(n, m)| (*n, m.neg(ring)))
                .collect(),
        }
    }

    pub fn is_zero_map(&self, ring: &RingDescriptor) -> bool {
        self.components.values().all(|m| m.is_zero(ring))
    }
}

/// A candidate distinguished triangle `first -> second -> third -> first[1]`.
///
/// Triangles produced by [`cone`] have `third` literally equal to the mapping
/// cone with the canonical maps; triangles assembled elsewhere (the
/// t-decomposition) are certified by an explicit quasi-isomorphism from
/// `cone(f)` instead.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub first: PerfectComplex,
    pub second: PerfectComplex,
    pub third: PerfectComplex,
    pub f: ChainMap,
    pub g: ChainMap,
    pub h: ChainMap,
}

impl Triangle {
    /// Structural check for cone-built triangles.
    pub fn is_standard_cone(&self) -> bool {
        let built = cone(&self.f);
        match built {
            Ok(t) => {
                t.third == self.third
                    && t.g.component(0).rows() == self.g.component(0).rows()
                    && t.g == self.g
                    && t.h == self.h
            }
            Err(_) => false,
        }
    }
}

//! Finitely generated modules in elementary-divisor normal form, and their
//! supports.

use std::fmt;

use super::factor::factor;
use super::matrix::Matrix;
use super::ring::{RingDescriptor, RingElement};
use super::snf::smith_normal_form;
use crate::error::Result;
use crate::supports::SpecSubset;

/// `R^free_rank ⊕ R/(d_1) ⊕ ... ⊕ R/(d_k)` with `d_1 | d_2 | ... | d_k`,
/// every `d_i` a normalized nonzero nonunit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgModule {
    pub free_rank: usize,
    pub torsion_divisors: Vec<RingElement>,
}

impl FgModule {
    pub fn zero() -> Self {
        FgModule {
            free_rank: 0,
            torsion_divisors: vec![],
        }
    }

    pub fn free(rank: usize) -> Self {
        FgModule {
            free_rank: rank,
            torsion_divisors: vec![],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion_divisors.is_empty()
    }

    /// Total torsion length measured as the number of divisors; used by the
    /// t-decomposition progress accounting.
    pub fn torsion_count(&self) -> usize {
        self.torsion_divisors.len()
    }

    /// Direct sum, renormalized to a single divisibility chain.
    pub fn direct_sum(&self, ring: &RingDescriptor, other: &Self) -> Result<Self> {
        use std::collections::BTreeMap;
        // collect prime powers of all divisors, then rebuild the chain by
        // taking, for each prime, its exponents in decreasing order
        let mut by_prime: BTreeMap<_, Vec<u32>> = BTreeMap::new();
        for d in self
            .torsion_divisors
            .iter()
            .chain(other.torsion_divisors.iter())
        {
            for (p, e) in factor(ring, d)? {
                by_prime.entry(p).or_default().push(e);
            }
        }
        let mut layers: Vec<RingElement> = vec![];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (slot, e) in exps.into_iter().enumerate() {
                if layers.len() <= slot {
                    layers.push(ring.one());
                }
                let mut pe = ring.one();
                for _ in 0..e {
                    pe = ring.mul(&pe, &p.element(ring));
                }
                layers[slot] = ring.mul(&layers[slot], &pe);
            }
        }
        // layers[0] has the largest exponents: reverse for an ascending chain
        layers.reverse();
        Ok(FgModule {
            free_rank: self.free_rank + other.free_rank,
            torsion_divisors: layers,
        })
    }

    pub fn format(&self, ring: &RingDescriptor) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let name = ring.name();
        let mut parts = vec![];
        if self.free_rank == 1 {
            parts.push(name.clone());
        } else if self.free_rank > 1 {
            parts.push(format!("{name}^{}", self.free_rank));
        }
        for d in &self.torsion_divisors {
            parts.push(format!("{name}/({})", ring.format_element(d)));
        }
        parts.join(" + ")
    }
}

impl fmt::Display for FgModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "free {} torsion {}", self.free_rank, self.torsion_divisors.len())
    }
}

/// Normal form of the cokernel of `presentation` (acting on column vectors).
pub fn module_normal_form(presentation: &Matrix, ring: &RingDescriptor) -> FgModule {
    let snf = smith_normal_form(presentation, ring);
    let torsion: Vec<RingElement> = snf
        .divisors
        .iter()
        .filter(|d| !ring.is_unit(d))
        .cloned()
        .collect();
    FgModule {
        free_rank: presentation.rows() - snf.rank,
        torsion_divisors: torsion,
    }
}

/// Support of a finitely generated module: everything for a module with free
/// part, otherwise the primes dividing the largest torsion divisor.
pub fn support(m: &FgModule, ring: &RingDescriptor) -> Result<SpecSubset> {
    if m.free_rank > 0 {
        return Ok(SpecSubset::All);
    }
    match m.torsion_divisors.last() {
        None => Ok(SpecSubset::empty()),
        Some(top) => {
            let primes = factor(ring, top)?;
            Ok(SpecSubset::finite(primes.into_iter().map(|(p, _)| p)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_divisor() {
        let ring = RingDescriptor::integers();
        let m = Matrix::from_i64(&ring, &[&[6]]);
        let fg = module_normal_form(&m, &ring);
        assert_eq!(fg.free_rank, 0);
        assert_eq!(fg.torsion_divisors, vec![ring.from_int(6)]);
    }

    #[test]
    fn free_module_from_empty_presentation() {
        let ring = RingDescriptor::integers();
        let m = Matrix::zero(&ring, 2, 0);
        let fg = module_normal_form(&m, &ring);
        assert_eq!(fg, FgModule::free(2));
    }

    #[test]
    fn spec_2x2_example() {
        // cokernel of [[2,4],[6,8]]: divisors (2,4) via the SNF oracle
        let ring = RingDescriptor::integers();
        let m = Matrix::from_i64(&ring, &[&[2, 4], &[6, 8]]);
        let fg = module_normal_form(&m, &ring);
        assert_eq!(fg.free_rank, 0);
        assert_eq!(
            fg.torsion_divisors,
            vec![ring.from_int(2), ring.from_int(4)]
        );
    }

    #[test]
    fn idempotent_normal_form() {
        let ring = RingDescriptor::integers();
        let m = Matrix::from_i64(&ring, &[&[2, 4], &[6, 8]]);
        let fg = module_normal_form(&m, &ring);
        // re-present: diag(divisors) plus zero rows for the free part
        let n = fg.torsion_divisors.len() + fg.free_rank;
        let mut pres = Matrix::zero(&ring, n, fg.torsion_divisors.len());
        for (i, d) in fg.torsion_divisors.iter().enumerate() {
            pres.set(i, i, d.clone());
        }
        assert_eq!(module_normal_form(&pres, &ring), fg);
    }

    #[test]
    fn support_examples() {
        let ring = RingDescriptor::integers();
        let z6 = FgModule {
            free_rank: 0,
            torsion_divisors: vec![ring.from_int(6)],
        };
        let s = support(&z6, &ring).unwrap();
        assert_eq!(s.format(&ring), "{(2), (3)}");
        assert_eq!(
            support(&FgModule::free(1), &ring).unwrap(),
            SpecSubset::All
        );
        assert_eq!(
            support(&FgModule::zero(), &ring).unwrap(),
            SpecSubset::empty()
        );
    }

    #[test]
    fn sum_has_union_support() {
        let ring = RingDescriptor::integers();
        let a = FgModule {
            free_rank: 0,
            torsion_divisors: vec![ring.from_int(4)],
        };
        let b = FgModule {
            free_rank: 0,
            torsion_divisors: vec![ring.from_int(6)],
        };
        let s = a.direct_sum(&ring, &b).unwrap();
        // Z/4 + Z/6 = Z/2 + Z/12
        assert_eq!(
            s.torsion_divisors,
            vec![ring.from_int(2), ring.from_int(12)]
        );
        let sup = support(&s, &ring).unwrap();
        assert_eq!(sup.format(&ring), "{(2), (3)}");
    }
}

//! Cones, sums, total tensor complexes, and Hom complexes.

use std::collections::BTreeMap;

use super::{ChainMap, PerfectComplex, Triangle};
use crate::error::Result;
use crate::exactalg::Matrix;

/// Mapping cone of `f`, with the canonical triangle
/// `source --f--> target --g--> cone --h--> source[1]`.
///
/// Degree `n` of the cone is `source^{n+1} (+) target^n`, with differential
/// `[[-d_S, 0], [f, d_T]]`.
pub fn cone(f: &ChainMap) -> Result<Triangle> {
    f.ensure_valid()?;
    let s = &f.source;
    let t = &f.target;
    let ring = s.ring().clone();

    let degrees = match (
        s.lo().map(|l| l - 1).into_iter().chain(t.lo()).min(),
        s.hi().map(|h| h - 1).into_iter().chain(t.hi()).max(),
    ) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => {
            // both zero complexes
            let z = PerfectComplex::zero(ring.clone());
            let g = ChainMap::zero(t.clone(), z.clone())?;
            let h = ChainMap::zero(z.clone(), s.shift(1))?;
            return Ok(Triangle {
                first: s.clone(),
                second: t.clone(),
                third: z,
                f: f.clone(),
                g,
                h,
            });
        }
    };
    let (lo, hi) = degrees;

    let rank = |n: i64| s.rank(n + 1) + t.rank(n);
    let mut ranks = vec![];
    let mut diffs = vec![];
    for n in lo..=hi {
        ranks.push(rank(n));
        if n < hi {
            let mut d = Matrix::zero(&ring, rank(n + 1), rank(n));
            let ds = s.diff_or_zero(n + 1);
            d.place(0, 0, &ds.neg(&ring));
            d.place(s.rank(n + 2), 0, &f.component(n + 1));
            d.place(s.rank(n + 2), s.rank(n + 1), &t.diff_or_zero(n));
            diffs.push(d);
        }
    }
    let cone = PerfectComplex::new(ring.clone(), lo, ranks, diffs)?;

    // g: target -> cone, inclusion into the second block
    let mut g_comps = BTreeMap::new();
    for n in lo..=hi {
        if t.rank(n) > 0 && cone.rank(n) > 0 {
            let mut m = Matrix::zero(&ring, cone.rank(n), t.rank(n));
            m.place(s.rank(n + 1), 0, &Matrix::identity(&ring, t.rank(n)));
            g_comps.insert(n, m);
        }
    }
    let g = ChainMap::new(t.clone(), cone.clone(), g_comps)?;

    // h: cone -> source[1], projection onto the first block
    let s1 = s.shift(1);
    let mut h_comps = BTreeMap::new();
    for n in lo..=hi {
        if s1.rank(n) > 0 && cone.rank(n) > 0 {
            let mut m = Matrix::zero(&ring, s1.rank(n), cone.rank(n));
            m.place(0, 0, &Matrix::identity(&ring, s.rank(n + 1)));
            h_comps.insert(n, m);
        }
    }
    let h = ChainMap::new(cone.clone(), s1, h_comps)?;

    Ok(Triangle {
        first: s.clone(),
        second: t.clone(),
        third: cone,
        f: f.clone(),
        g,
        h,
    })
}

/// Degreewise block sum.
pub fn direct_sum(a: &PerfectComplex, b: &PerfectComplex) -> Result<PerfectComplex> {
    a.ring().same_ring(b.ring())?;
    let ring = a.ring().clone();
    let (Some(lo_a), Some(_)) = (a.lo(), a.hi()) else {
        return Ok(b.clone());
    };
    let (Some(lo_b), Some(_)) = (b.lo(), b.hi()) else {
        return Ok(a.clone());
    };
    let lo = lo_a.min(lo_b);
    let hi = a.hi().unwrap().max(b.hi().unwrap());
    let mut ranks = vec![];
    let mut diffs = vec![];
    for n in lo..=hi {
        ranks.push(a.rank(n) + b.rank(n));
        if n < hi {
            let da = a.diff_or_zero(n);
            let db = b.diff_or_zero(n);
            diffs.push(da.direct_sum(&ring, &db));
        }
    }
    PerfectComplex::new(ring, lo, ranks, diffs)
}

pub fn direct_sum_many(ring: &crate::exactalg::RingDescriptor, items: &[PerfectComplex]) -> Result<PerfectComplex> {
    let mut acc = PerfectComplex::zero(ring.clone());
    for c in items {
        acc = direct_sum(&acc, c)?;
    }
    Ok(acc)
}

/// The inclusion of `a` into `direct_sum(a, b)` (first block).
pub fn sum_inclusion_first(a: &PerfectComplex, b: &PerfectComplex) -> Result<ChainMap> {
    let s = direct_sum(a, b)?;
    let ring = a.ring().clone();
    let mut comps = BTreeMap::new();
    if let (Some(lo), Some(hi)) = (a.lo(), a.hi()) {
        for n in lo..=hi {
            if a.rank(n) == 0 {
                continue;
            }
            let mut m = Matrix::zero(&ring, s.rank(n), a.rank(n));
            m.place(0, 0, &Matrix::identity(&ring, a.rank(n)));
            comps.insert(n, m);
        }
    }
    ChainMap::new(a.clone(), s, comps)
}

/// Slot bookkeeping for total complexes: in total degree `n`, the summand
/// indexed by `k` occupies `width` consecutive coordinates starting at
/// `offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSlot {
    pub k: i64,
    pub offset: usize,
    pub rows: usize,
    pub cols: usize,
}

/// Total complex of the tensor bicomplex; computes `A (x)^L B` since all
/// terms are free.  Degree `n` is `(+)_{i+j=n} A^i (x) B^j`, slots ordered by
/// increasing `i`, each slot with the row-major basis `a (x) b`.
pub fn tensor_total(a: &PerfectComplex, b: &PerfectComplex) -> Result<PerfectComplex> {
    a.ring().same_ring(b.ring())?;
    let ring = a.ring().clone();
    let (Some(lo_a), Some(hi_a), Some(lo_b), Some(hi_b)) = (a.lo(), a.hi(), b.lo(), b.hi())
    else {
        return Ok(PerfectComplex::zero(ring));
    };
    let lo = lo_a + lo_b;
    let hi = hi_a + hi_b;

    let slots = |n: i64| -> Vec<(i64, usize, usize)> {
        // (i, offset, width) for A^i (x) B^{n-i}
        let mut out = vec![];
        let mut offset = 0;
        for i in lo_a..=hi_a {
            let w = a.rank(i) * b.rank(n - i);
            if w > 0 {
                out.push((i, offset, w));
                offset += w;
            }
        }
        out
    };
    let rank = |n: i64| slots(n).iter().map(|s| s.2).sum::<usize>();

    let mut ranks = vec![];
    let mut diffs = vec![];
    for n in lo..=hi {
        ranks.push(rank(n));
        if n < hi {
            let src = slots(n);
            let tgt = slots(n + 1);
            let find = |i: i64| tgt.iter().find(|s| s.0 == i).map(|s| s.1);
            let mut d = Matrix::zero(&ring, rank(n + 1), rank(n));
            for (i, off, _w) in &src {
                let j = n - i;
                // d_A (x) id : slot i -> slot i+1
                if let Some(t_off) = find(i + 1) {
                    let block = a
                        .diff_or_zero(*i)
                        .kron(&ring, &Matrix::identity(&ring, b.rank(j)));
                    if block.rows() > 0 && block.cols() > 0 {
                        d.place(t_off, *off, &block);
                    }
                }
                // (-1)^i id (x) d_B : slot i -> slot i
                if let Some(t_off) = find(*i) {
                    let mut block = Matrix::identity(&ring, a.rank(*i))
                        .kron(&ring, &b.diff_or_zero(j));
                    if i.rem_euclid(2) == 1 {
                        block = block.neg(&ring);
                    }
                    if block.rows() > 0 && block.cols() > 0 {
                        d.place(t_off, *off, &block);
                    }
                }
            }
            diffs.push(d);
        }
    }
    PerfectComplex::new(ring, lo, ranks, diffs)
}

/// Slot layout of the Hom complex in degree `n`: one slot per degree `k` of
/// `a`, holding `Hom(a^k, b^{k+n})` with the basis `(u, v) -> u*rank_a(k)+v`
/// (`u` a basis element of `b^{k+n}`, `v` of `a^k`).
pub fn hom_degree_layout(a: &PerfectComplex, b: &PerfectComplex, n: i64) -> Vec<HomSlot> {
    let (Some(lo_a), Some(hi_a)) = (a.lo(), a.hi()) else {
        return vec![];
    };
    let mut out = vec![];
    let mut offset = 0;
    for k in lo_a..=hi_a {
        let rows = b.rank(k + n);
        let cols = a.rank(k);
        let w = rows * cols;
        if w > 0 {
            out.push(HomSlot {
                k,
                offset,
                rows,
                cols,
            });
            offset += w;
        }
    }
    out
}

/// The Hom complex: degree `n` is `prod_k Hom(A^k, B^{k+n})` with
/// differential `(d phi)_k = d_B o phi_k - (-1)^n phi_{k+1} o d_A^k`.
/// Since `A` is perfect this computes `RHom(A, B)`:
/// `H^n(hom_complex(A,B)) = Hom_{D(R)}(A, B[n])`.
pub fn hom_complex(a: &PerfectComplex, b: &PerfectComplex) -> Result<PerfectComplex> {
    a.ring().same_ring(b.ring())?;
    let ring = a.ring().clone();
    let (Some(lo_a), Some(hi_a), Some(lo_b), Some(hi_b)) = (a.lo(), a.hi(), b.lo(), b.hi())
    else {
        return Ok(PerfectComplex::zero(ring));
    };
    let lo = lo_b - hi_a;
    let hi = hi_b - lo_a;

    let rank = |n: i64| {
        hom_degree_layout(a, b, n)
            .iter()
            .map(|s| s.rows * s.cols)
            .sum::<usize>()
    };

    let mut ranks = vec![];
    let mut diffs = vec![];
    for n in lo..=hi {
        ranks.push(rank(n));
        if n < hi {
            let src = hom_degree_layout(a, b, n);
            let tgt = hom_degree_layout(a, b, n + 1);
            let find = |k: i64| tgt.iter().find(|s| s.k == k);
            let mut d = Matrix::zero(&ring, rank(n + 1), rank(n));
            for slot in &src {
                let k = slot.k;
                // post-composition d_B^{k+n} o phi_k : slot k -> slot k
                if let Some(t) = find(k) {
                    let block = b
                        .diff_or_zero(k + n)
                        .kron(&ring, &Matrix::identity(&ring, a.rank(k)));
                    if block.rows() > 0 && block.cols() > 0 {
                        d.place(t.offset, slot.offset, &block);
                    }
                }
                // pre-composition: slot k -> slot k-1 contribution is handled
                // from the source side: phi_k o d_A^{k-1} lands in slot k-1
                if let Some(t) = find(k - 1) {
                    let da = a.diff_or_zero(k - 1);
                    let mut block = Matrix::identity(&ring, b.rank(k + n))
                        .kron(&ring, &da.transpose(&ring));
                    if n.rem_euclid(2) == 0 {
                        block = block.neg(&ring);
                    }
                    if block.rows() > 0 && block.cols() > 0 {
                        d.place(t.offset, slot.offset, &block);
                    }
                }
            }
            diffs.push(d);
        }
    }
    PerfectComplex::new(ring, lo, ranks, diffs)
}

/// Reassembles a vector in Hom-complex degree `-n` coordinates into the
/// chain map `a[n] -> b` it represents.  The vector must be a cocycle.
pub fn hom_vector_to_chain_map(
    a: &PerfectComplex,
    b: &PerfectComplex,
    n: i64,
    vector: &[crate::exactalg::RingElement],
) -> Result<ChainMap> {
    let ring = a.ring().clone();
    let shifted = a.shift(n);
    let mut comps = BTreeMap::new();
    for slot in hom_degree_layout(a, b, -n) {
        // phi_k : a^k -> b^{k-n}; as a component of a[n] -> b it sits in
        // degree k - n
        let mut m = Matrix::zero(&ring, slot.rows, slot.cols);
        for u in 0..slot.rows {
            for v in 0..slot.cols {
                m.set(u, v, vector[slot.offset + u * slot.cols + v].clone());
            }
        }
        // shift convention: a[n]^{k-n} = a^k with differential (-1)^n d_a,
        // and the components of the map are unchanged
        if !m.is_zero(&ring) {
            comps.insert(slot.k - n, m);
        }
    }
    ChainMap::new(shifted, b.clone(), comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::RingDescriptor;

    fn zz() -> RingDescriptor {
        RingDescriptor::integers()
    }

    fn cone_of_scalar(n: i64) -> PerfectComplex {
        let r = zz();
        PerfectComplex::cyclic(r.clone(), r.from_int(n), 0)
    }

    #[test]
    fn cone_squares_to_zero() {
        let r = zz();
        let a = cone_of_scalar(2);
        let b = cone_of_scalar(3);
        // a chain map a -> b: degree 0 component z, degree -1 component w
        // with 3w = z*2 ... use z = 3, w = 2
        let mut comps = BTreeMap::new();
        comps.insert(0, Matrix::from_i64(&r, &[&[3]]));
        comps.insert(-1, Matrix::from_i64(&r, &[&[2]]));
        let f = ChainMap::new(a.clone(), b.clone(), comps).unwrap();
        f.ensure_valid().unwrap();
        let t = cone(&f).unwrap();
        assert!(t.third.validate().is_ok());
        t.g.ensure_valid().unwrap();
        t.h.ensure_valid().unwrap();
        assert!(t.is_standard_cone());
    }

    #[test]
    fn tensor_with_unit_is_identity() {
        let a = cone_of_scalar(2);
        let u = PerfectComplex::unit(zz());
        let t = tensor_total(&a, &u).unwrap();
        assert_eq!(t, a);
        let t = tensor_total(&u, &a).unwrap();
        assert_eq!(t, a);
    }

    #[test]
    fn hom_from_unit_is_identity() {
        let b = cone_of_scalar(2);
        let u = PerfectComplex::unit(zz());
        let h = hom_complex(&u, &b).unwrap();
        assert_eq!(h, b);
    }

    #[test]
    fn koszul_square_zero() {
        let r = zz();
        let k2 = cone_of_scalar(2);
        let k3 = cone_of_scalar(3);
        let t = tensor_total(&k2, &k3).unwrap();
        assert!(t.validate().is_ok());
        assert_eq!(t.lo(), Some(-2));
        assert_eq!(t.hi(), Some(0));
        let h = hom_complex(&k2, &k3).unwrap();
        assert!(h.validate().is_ok());
        let _ = r;
    }
}

//! Smith normal form over the supported Euclidean domains, with invertible
//! row/column transforms and their inverses.
//!
//! Over a localized ring the matrix is cleared of denominators first, reduced
//! over the base ring, and the diagonal is re-normalized by stripping
//! localization units into the row transform.

use super::matrix::Matrix;
use super::ring::{BaseElem, BaseRing, RingDescriptor, RingElement};

/// The result of a Smith reduction: `p * m * q = diag`, with
/// `p * pinv = 1` and `q * qinv = 1`, diagonal entries normalized and in a
/// divisibility chain `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub diag: Matrix,
    pub p: Matrix,
    pub pinv: Matrix,
    pub q: Matrix,
    pub qinv: Matrix,
    pub rank: usize,
    pub divisors: Vec<RingElement>,
}

impl Snf {
    /// Basis of the kernel of the original matrix: the last `cols - rank`
    /// columns of `q`.
    pub fn kernel_basis(&self, ring: &RingDescriptor) -> Matrix {
        let n = self.q.cols();
        self.q.submatrix(ring, 0, self.q.rows(), self.rank, n)
    }

    /// Solves `m x = b` exactly; `None` when no solution exists in the ring.
    pub fn solve(&self, ring: &RingDescriptor, b: &[RingElement]) -> Option<Vec<RingElement>> {
        let pb = self.p.mul_vec(ring, b);
        let n = self.q.rows();
        let mut y = vec![ring.zero(); n];
        for (i, v) in pb.iter().enumerate() {
            if i < self.rank {
                y[i] = ring.try_exact_div(v, &self.divisors[i])?;
            } else if !ring.is_zero(v) {
                return None;
            }
        }
        Some(self.q.mul_vec(ring, &y))
    }
}

struct Reducer {
    rows: usize,
    cols: usize,
    m: Vec<BaseElem>,
    p: Vec<BaseElem>,
    pinv: Vec<BaseElem>,
    q: Vec<BaseElem>,
    qinv: Vec<BaseElem>,
}

fn ident(n: usize, base: &BaseRing) -> Vec<BaseElem> {
    let mut v = vec![base.zero(); n * n];
    for i in 0..n {
        v[i * n + i] = base.one();
    }
    v
}

impl Reducer {
    fn new(rows: usize, cols: usize, m: Vec<BaseElem>, base: &BaseRing) -> Self {
        Reducer {
            rows,
            cols,
            m,
            p: ident(rows, base),
            pinv: ident(rows, base),
            q: ident(cols, base),
            qinv: ident(cols, base),
        }
    }

    fn at(&self, i: usize, j: usize) -> &BaseElem {
        &self.m[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.m.swap(a * self.cols + j, b * self.cols + j);
        }
        for j in 0..self.rows {
            self.p.swap(a * self.rows + j, b * self.rows + j);
            self.pinv.swap(j * self.rows + a, j * self.rows + b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.m.swap(i * self.cols + a, i * self.cols + b);
        }
        for i in 0..self.cols {
            self.q.swap(i * self.cols + a, i * self.cols + b);
            self.qinv.swap(a * self.cols + i, b * self.cols + i);
        }
    }

    /// row_i += c * row_j
    fn addmul_row(&mut self, i: usize, j: usize, c: &BaseElem) {
        for k in 0..self.cols {
            let v = self.m[i * self.cols + k].add(&c.mul(&self.m[j * self.cols + k]));
            self.m[i * self.cols + k] = v;
        }
        for k in 0..self.rows {
            let v = self.p[i * self.rows + k].add(&c.mul(&self.p[j * self.rows + k]));
            self.p[i * self.rows + k] = v;
            let w = self.pinv[k * self.rows + j].sub(&c.mul(&self.pinv[k * self.rows + i]));
            self.pinv[k * self.rows + j] = w;
        }
    }

    /// col_j += c * col_i
    fn addmul_col(&mut self, j: usize, i: usize, c: &BaseElem) {
        for k in 0..self.rows {
            let v = self.m[k * self.cols + j].add(&c.mul(&self.m[k * self.cols + i]));
            self.m[k * self.cols + j] = v;
        }
        for k in 0..self.cols {
            let v = self.q[k * self.cols + j].add(&c.mul(&self.q[k * self.cols + i]));
            self.q[k * self.cols + j] = v;
            let w = self.qinv[i * self.cols + k].sub(&c.mul(&self.qinv[j * self.cols + k]));
            self.qinv[i * self.cols + k] = w;
        }
    }

    /// rows (r1, r2) <- (a r1 + b r2, c r1 + d r2); det(abcd) must be a unit (here 1).
    fn left_2x2(&mut self, r1: usize, r2: usize, a: &BaseElem, b: &BaseElem, c: &BaseElem, d: &BaseElem) {
        for k in 0..self.cols {
            let x = self.m[r1 * self.cols + k].clone();
            let y = self.m[r2 * self.cols + k].clone();
            self.m[r1 * self.cols + k] = a.mul(&x).add(&b.mul(&y));
            self.m[r2 * self.cols + k] = c.mul(&x).add(&d.mul(&y));
        }
        for k in 0..self.rows {
            let x = self.p[r1 * self.rows + k].clone();
            let y = self.p[r2 * self.rows + k].clone();
            self.p[r1 * self.rows + k] = a.mul(&x).add(&b.mul(&y));
            self.p[r2 * self.rows + k] = c.mul(&x).add(&d.mul(&y));
            // pinv <- pinv * inverse([[a,b],[c,d]]) = pinv * [[d,-b],[-c,a]]
            let x = self.pinv[k * self.rows + r1].clone();
            let y = self.pinv[k * self.rows + r2].clone();
            self.pinv[k * self.rows + r1] = d.mul(&x).sub(&c.mul(&y));
            self.pinv[k * self.rows + r2] = a.mul(&y).sub(&b.mul(&x));
        }
    }

    /// cols (c1, c2) <- (a c1 + c c2, b c1 + d c2)  (right-multiplication by [[a,b],[c,d]]).
    fn right_2x2(&mut self, c1: usize, c2: usize, a: &BaseElem, b: &BaseElem, c: &BaseElem, d: &BaseElem) {
        for k in 0..self.rows {
            let x = self.m[k * self.cols + c1].clone();
            let y = self.m[k * self.cols + c2].clone();
            self.m[k * self.cols + c1] = a.mul(&x).add(&c.mul(&y));
            self.m[k * self.cols + c2] = b.mul(&x).add(&d.mul(&y));
        }
        for k in 0..self.cols {
            let x = self.q[k * self.cols + c1].clone();
            let y = self.q[k * self.cols + c2].clone();
            self.q[k * self.cols + c1] = a.mul(&x).add(&c.mul(&y));
            self.q[k * self.cols + c2] = b.mul(&x).add(&d.mul(&y));
            // qinv <- inverse * qinv = [[d,-b],[-c,a]] * qinv
            let x = self.qinv[c1 * self.cols + k].clone();
            let y = self.qinv[c2 * self.cols + k].clone();
            self.qinv[c1 * self.cols + k] = d.mul(&x).sub(&b.mul(&y));
            self.qinv[c2 * self.cols + k] = a.mul(&y).sub(&c.mul(&x));
        }
    }

    fn scale_row(&mut self, i: usize, u: &BaseElem) {
        let uinv = u.inv_of_unit().expect("row scale by non-unit");
        for k in 0..self.cols {
            self.m[i * self.cols + k] = u.mul(&self.m[i * self.cols + k]);
        }
        for k in 0..self.rows {
            self.p[i * self.rows + k] = u.mul(&self.p[i * self.rows + k]);
            self.pinv[k * self.rows + i] = uinv.mul(&self.pinv[k * self.rows + i]);
        }
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(u64, usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let e = self.at(i, j);
                if e.is_zero() {
                    continue;
                }
                let s = e.size_hint();
                if best.as_ref().map(|(bs, _, _)| s < *bs).unwrap_or(true) {
                    best = Some((s, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn clear_pivot(&mut self, t: usize) {
        loop {
            let mut changed = false;
            for i in t + 1..self.rows {
                if self.at(i, t).is_zero() {
                    continue;
                }
                let x = self.at(t, t).clone();
                let y = self.at(i, t).clone();
                if let Some(c) = x.try_exact_div_into(&y) {
                    self.addmul_row(i, t, &c.neg());
                } else {
                    let (g, s, u) = x.xgcd(&y);
                    let a = x.exact_div(&g);
                    let b = y.exact_div(&g);
                    self.left_2x2(t, i, &s, &u, &b.neg(), &a);
                }
                changed = true;
            }
            for j in t + 1..self.cols {
                if self.at(t, j).is_zero() {
                    continue;
                }
                let x = self.at(t, t).clone();
                let y = self.at(t, j).clone();
                if let Some(c) = x.try_exact_div_into(&y) {
                    self.addmul_col(j, t, &c.neg());
                } else {
                    let (g, s, u) = x.xgcd(&y);
                    let a = x.exact_div(&g);
                    let b = y.exact_div(&g);
                    self.right_2x2(t, j, &s, &b.neg(), &u, &a);
                }
                changed = true;
            }
            if changed {
                continue;
            }
            // pivot row/col clear: enforce that the pivot divides the rest of
            // the submatrix so the diagonal comes out in a chain
            let piv = self.at(t, t).clone();
            let mut pulled = false;
            'scan: for i in t + 1..self.rows {
                for j in t + 1..self.cols {
                    if !piv.divides(self.at(i, j)) {
                        self.addmul_row(t, i, &piv.one_like());
                        pulled = true;
                        break 'scan;
                    }
                }
            }
            if !pulled {
                break;
            }
        }
    }

    fn run(&mut self) -> usize {
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((i, j)) = self.find_pivot(t) else {
                break;
            };
            self.swap_rows(t, i);
            self.swap_cols(t, j);
            self.clear_pivot(t);
            let u = self.at(t, t).normalizing_unit();
            if !u.is_one() {
                self.scale_row(t, &u);
            }
            t += 1;
        }
        t
    }
}

/// Smith normal form of `m` over `ring`.
pub fn smith_normal_form(m: &Matrix, ring: &RingDescriptor) -> Snf {
    let rows = m.rows();
    let cols = m.cols();
    // clear denominators: scale by f^e so every exponent is >= 0
    let min_fexp = m
        .entries()
        .filter(|e| !ring.is_zero(e))
        .map(|e| e.fexp())
        .min()
        .unwrap_or(0);
    let shift = (-min_fexp).max(0);
    let mut flat = Vec::with_capacity(rows * cols);
    for e in m.entries() {
        let lifted = ring.mul(e, &ring.inverted_power(shift));
        debug_assert!(lifted.fexp() >= 0 || ring.is_zero(&lifted));
        // multiply the remaining nonnegative power of f into the numerator
        let mut v = lifted.numerator().clone();
        for _ in 0..lifted.fexp() {
            v = v.mul(ring.inverted());
        }
        flat.push(v);
    }
    let mut red = Reducer::new(rows, cols, flat, ring.base());
    let rank = red.run();

    let wrap = |data: &[BaseElem], r: usize, c: usize| {
        Matrix::from_fn(ring, r, c, |i, j| ring.element(data[i * c + j].clone(), 0))
    };
    let mut p = wrap(&red.p, rows, rows);
    let mut pinv = wrap(&red.pinv, rows, rows);
    let q = wrap(&red.q, cols, cols);
    let qinv = wrap(&red.qinv, cols, cols);

    // canonical divisors over the (possibly localized) ring; fold the unit
    // discrepancy into p / pinv so that p * m * q = diag(divisors) exactly
    let mut divisors = Vec::with_capacity(rank);
    let mut diag = Matrix::zero(ring, rows, cols);
    for i in 0..rank {
        let raw = ring.element(red.m[i * cols + i].clone(), -shift);
        let canon = ring.element(ring.strip_units(&raw), 0);
        if raw != canon {
            let u = ring
                .try_exact_div(&raw, &canon)
                .expect("unit discrepancy must divide");
            let uinv = ring.inv_unit(&u).expect("discrepancy is a unit");
            for k in 0..rows {
                p.set(i, k, ring.mul(&uinv, p.get(i, k)));
                pinv.set(k, i, ring.mul(&u, pinv.get(k, i)));
            }
        }
        diag.set(i, i, canon.clone());
        divisors.push(canon);
    }

    Snf {
        diag,
        p,
        pinv,
        q,
        qinv,
        rank,
        divisors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_transforms(m: &Matrix, ring: &RingDescriptor, s: &Snf) {
        let prod = s.p.mul(ring, m).mul(ring, &s.q);
        assert_eq!(prod, s.diag, "p*m*q != diag");
        assert_eq!(
            s.p.mul(ring, &s.pinv),
            Matrix::identity(ring, m.rows()),
            "p not invertible"
        );
        assert_eq!(
            s.q.mul(ring, &s.qinv),
            Matrix::identity(ring, m.cols()),
            "q not invertible"
        );
        for w in s.divisors.windows(2) {
            assert!(ring.divides(&w[0], &w[1]), "divisor chain broken");
        }
    }

    #[test]
    fn spec_example_2x2() {
        // [[2,4],[6,8]] over Z -> divisors (2,4); oracle: by hand row/col
        // reduction: gcd of entries is 2, determinant is -8, so d1=2, d1*d2=8.
        let ring = RingDescriptor::integers();
        let m = Matrix::from_i64(&ring, &[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&m, &ring);
        assert_eq!(s.divisors, vec![ring.from_int(2), ring.from_int(4)]);
        assert_eq!(s.rank, 2);
        check_transforms(&m, &ring, &s);
    }

    #[test]
    fn identity_and_zero() {
        let ring = RingDescriptor::integers();
        let id = Matrix::identity(&ring, 2);
        let s = smith_normal_form(&id, &ring);
        assert_eq!(s.divisors, vec![ring.from_int(1), ring.from_int(1)]);

        let z = Matrix::zero(&ring, 2, 3);
        let s = smith_normal_form(&z, &ring);
        assert!(s.divisors.is_empty());
        assert_eq!(s.rank, 0);
        check_transforms(&z, &ring, &s);
    }

    #[test]
    fn localized_strips_units() {
        use super::super::ring::BaseRing;
        let ring =
            RingDescriptor::with_inverted(BaseRing::Integers, BaseElem::int(2)).unwrap();
        let m = Matrix::from_i64(&ring, &[&[6]]);
        let s = smith_normal_form(&m, &ring);
        assert_eq!(s.divisors, vec![ring.from_int(3)]);
        check_transforms(&m, &ring, &s);

        // an entry with a denominator: 3/2 over Z[1/2] is associate to 3
        let m = Matrix::from_fn(&ring, 1, 1, |_, _| ring.element(BaseElem::int(3), -1));
        let s = smith_normal_form(&m, &ring);
        assert_eq!(s.divisors, vec![ring.from_int(3)]);
        check_transforms(&m, &ring, &s);
    }

    #[test]
    fn poly_matrix() {
        use super::super::poly::FpPoly;
        let ring = RingDescriptor::poly_over_fp(2).unwrap();
        let x = ring.element(BaseElem::Poly(FpPoly::x(2)), 0);
        let xp1 = ring.element(BaseElem::Poly(FpPoly::new(2, vec![1, 1])), 0);
        let m = Matrix::from_rows(
            &ring,
            vec![
                vec![x.clone(), ring.zero()],
                vec![ring.zero(), ring.mul(&x, &xp1)],
            ],
        )
        .unwrap();
        let s = smith_normal_form(&m, &ring);
        assert_eq!(s.divisors.len(), 2);
        assert_eq!(ring.format_element(&s.divisors[0]), "x");
        assert_eq!(ring.format_element(&s.divisors[1]), "x^2+x");
        check_transforms(&m, &ring, &s);
    }

    #[test]
    fn solve_linear_system() {
        let ring = RingDescriptor::integers();
        let m = Matrix::from_i64(&ring, &[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&m, &ring);
        let b = vec![ring.from_int(4), ring.from_int(9)];
        let x = s.solve(&ring, &b).unwrap();
        assert_eq!(m.mul_vec(&ring, &x), b);
        let b = vec![ring.from_int(1), ring.from_int(0)];
        assert!(s.solve(&ring, &b).is_none());
    }
}

//! Dense matrices over a field context.

use crate::arith::{PrimeField, RngHandle};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// Row-major dense matrix; every entry is a flat field element.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<P: PrimeField> {
    field: Field<P>,
    rows: usize,
    cols: usize,
    data: Vec<P::Residue>,
}

/// Result of [`Matrix::solve`]: a particular solution (free variables set
/// to zero) and a basis of the kernel.
#[derive(Clone, Debug)]
pub struct Solution<P: PrimeField> {
    pub x: Vec<Fe<P>>,
    pub kernel: Vec<Vec<Fe<P>>>,
}

impl<P: PrimeField> Matrix<P> {
    pub fn zeros(field: &Field<P>, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![P::Residue::default(); rows * cols * field.degree()],
        }
    }

    pub fn identity(field: &Field<P>, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, &field.one());
        }
        m
    }

    /// Builds a matrix over the prime field from small integers.
    pub fn from_u64_rows(field: &Field<P>, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, &field.from_u64(v));
            }
        }
        m
    }

    pub fn from_rows(field: &Field<P>, rows: &[Vec<Fe<P>>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn random(field: &Field<P>, rows: usize, cols: usize, rng: &mut RngHandle) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, &field.random(rng));
            }
        }
        m
    }

    pub fn field(&self) -> &Field<P> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &[P::Residue] {
        let s = self.field.degree();
        let o = (i * self.cols + j) * s;
        &self.data[o..o + s]
    }

    pub fn set(&mut self, i: usize, j: usize, v: &[P::Residue]) {
        let s = self.field.degree();
        let o = (i * self.cols + j) * s;
        self.data[o..o + s].clone_from_slice(v);
    }

    pub fn column(&self, j: usize) -> Vec<Fe<P>> {
        (0..self.rows).map(|i| self.get(i, j).to_vec()).collect()
    }

    pub fn mul(&self, other: &Matrix<P>) -> Result<Matrix<P>> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::InvalidInput("matrix dimensions do not match".into()));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        if f.is_prime() {
            let pf = f.p();
            for i in 0..self.rows {
                for j in 0..other.cols {
                    let mut acc = pf.acc_zero();
                    for k in 0..self.cols {
                        pf.acc_mul_add(&mut acc, &self.get(i, k)[0], &other.get(k, j)[0]);
                    }
                    out.set(i, j, &[pf.acc_reduce(&acc)]);
                }
            }
            return Ok(out);
        }
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = f.zero();
                for k in 0..self.cols {
                    f.add_assign(&mut acc, &f.mul(self.get(i, k), other.get(k, j)));
                }
                out.set(i, j, &acc);
            }
        }
        Ok(out)
    }

    /// Matrix-vector product for a prime-field matrix acting on residues.
    pub fn apply_residues(&self, v: &[P::Residue]) -> Vec<P::Residue> {
        debug_assert!(self.field.is_prime());
        let pf = self.field.p();
        (0..self.rows)
            .map(|i| {
                let mut acc = pf.acc_zero();
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                for (a, b) in row.iter().zip(v) {
                    pf.acc_mul_add(&mut acc, a, b);
                }
                pf.acc_reduce(&acc)
            })
            .collect()
    }

    pub fn apply(&self, v: &[Fe<P>]) -> Vec<Fe<P>> {
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (j, vj) in v.iter().enumerate() {
                    f.add_assign(&mut acc, &f.mul(self.get(i, j), vj));
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    /// The pivot in each column is the first row at or below the current
    /// one holding a nonzero entry.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !f.is_zero(self.get(i, c))) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = f.inv(self.get(r, c)).expect("nonzero pivot");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), &inv);
                self.set(r, j, &v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).to_vec();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..self.cols {
                    let t = f.mul(&factor, self.get(r, j));
                    let v = f.sub(self.get(i, j), &t);
                    self.set(i, j, &v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.cols * self.field.degree();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * w);
        head[lo * w..(lo + 1) * w].swap_with_slice(&mut tail[..w]);
    }

    /// Solves `M x = b`, returning one solution and a kernel basis.
    pub fn solve(&self, b: &[Fe<P>]) -> Result<Solution<P>> {
        if b.len() != self.rows {
            return Err(Error::InvalidInput(
                "right-hand side has the wrong length".into(),
            ));
        }
        let f = &self.field;
        let n = self.cols;
        let mut aug = Matrix::zeros(f, self.rows, n + 1);
        for i in 0..self.rows {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n, &b[i]);
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&n) {
            return Err(Error::Inconsistent);
        }
        let mut x = vec![f.zero(); n];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, n).to_vec();
        }
        let mut kernel = Vec::new();
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut v = vec![f.zero(); n];
            v[free] = f.one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = f.neg(aug.get(r, free));
            }
            kernel.push(v);
        }
        Ok(Solution { x, kernel })
    }

    pub fn inverse(&self) -> Result<Matrix<P>> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput(
                "only square matrices are invertible".into(),
            ));
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Matrix::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, &f.one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::ZeroInverse);
        }
        let mut out = Matrix::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        let f = &self.field;
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        f.is_one(v)
                    } else {
                        f.is_zero(v)
                    }
                })
            })
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Fp64;
    use proptest::prelude::*;

    fn fp(p: u64) -> Field<Fp64> {
        Field::prime(Fp64::new(p).unwrap())
    }

    fn col(f: &Field<Fp64>, v: &[u64]) -> Vec<Fe<Fp64>> {
        v.iter().map(|&c| f.from_u64(c)).collect()
    }

    #[test]
    fn small_systems() {
        let f2 = fp(2);
        let m = Matrix::from_u64_rows(&f2, &[vec![1, 1], vec![0, 1]]);
        let s = m.solve(&col(&f2, &[0, 1])).unwrap();
        assert_eq!(s.x, col(&f2, &[1, 1]));
        assert!(s.kernel.is_empty());

        let f5 = fp(5);
        let m = Matrix::from_u64_rows(&f5, &[vec![1, 2], vec![2, 4]]);
        let s = m.solve(&col(&f5, &[0, 0])).unwrap();
        assert_eq!(s.kernel, vec![col(&f5, &[3, 1])]);

        let id = Matrix::identity(&f5, 3);
        let b = col(&f5, &[4, 0, 2]);
        assert_eq!(id.solve(&b).unwrap().x, b);

        let m = Matrix::from_u64_rows(&f5, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(
            m.solve(&col(&f5, &[1, 0])).unwrap_err(),
            Error::Inconsistent
        );
    }

    #[test]
    fn kernel_matches_brute_force() {
        let f5 = fp(5);
        let m = Matrix::from_u64_rows(&f5, &[vec![1, 2], vec![2, 4]]);
        let mut count = 0;
        for a in 0..5 {
            for b in 0..5 {
                if (a + 2 * b) % 5 == 0 && (2 * a + 4 * b) % 5 == 0 {
                    count += 1;
                }
            }
        }
        let dim = m.solve(&col(&f5, &[0, 0])).unwrap().kernel.len();
        assert_eq!(5usize.pow(dim as u32), count);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn solutions_satisfy_system(seed in any::<u64>(), pi in 0usize..3, r in 1usize..6, c in 1usize..6) {
            let p = [2u64, 7, 1_000_003][pi];
            let f = fp(p);
            let mut rng = RngHandle::new(seed, 0);
            let m = Matrix::random(&f, r, c, &mut rng);
            let x0: Vec<_> = (0..c).map(|_| f.random(&mut rng)).collect();
            let b = m.apply(&x0);
            let s = m.solve(&b).unwrap();
            prop_assert_eq!(m.apply(&s.x), b);
            for k in &s.kernel {
                prop_assert!(m.apply(k).iter().all(|v| f.is_zero(v)));
            }
            prop_assert_eq!(s.kernel.len() + m.rank(), c);
        }

        #[test]
        fn inverse_roundtrip(seed in any::<u64>()) {
            let f = fp(13);
            let mut rng = RngHandle::new(seed, 1);
            let m = Matrix::random(&f, 4, 4, &mut rng);
            if let Ok(inv) = m.inverse() {
                prop_assert!(m.mul(&inv).unwrap().is_identity());
            } else {
                prop_assert!(m.rank() < 4);
            }
        }
    }
}

//! Dense matrices: depth slices, diagonal embeddings and the small amount of exact
//! linear algebra the rank and nullity constructions need.

use crate::error::{Error, Result};
use crate::scalar::{Field, Ring};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T: Ring> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    domain: T::Domain,
}

impl<T: Ring> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>, domain: T::Domain) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data, domain })
    }

    pub fn from_fn(rows: usize, cols: usize, domain: &T::Domain, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data, domain: domain.clone() }
    }

    pub fn zeros(rows: usize, cols: usize, domain: &T::Domain) -> Self {
        Matrix { rows, cols, data: vec![T::zero(domain); rows * cols], domain: domain.clone() }
    }

    pub fn identity(n: usize, domain: &T::Domain) -> Self {
        Self::from_fn(n, n, domain, |i, j| if i == j { T::one(domain) } else { T::zero(domain) })
    }

    /// Square matrix with `v` on the diagonal.
    pub fn diag(v: &[T], domain: &T::Domain) -> Self {
        Self::from_fn(v.len(), v.len(), domain, |i, j| if i == j { v[i].clone() } else { T::zero(domain) })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn domain(&self) -> &T::Domain {
        &self.domain
    }
    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        assert!(i < self.rows && j < self.cols, "({i},{j}) outside {}x{}", self.rows, self.cols);
        &self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, &self.domain, |i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Conformability(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let d = &self.domain;
        Ok(Self::from_fn(self.rows, o.cols, d, |i, j| {
            (0..self.cols).fold(T::zero(d), |acc, t| acc.add(&self.get(i, t).mul(o.get(t, j))))
        }))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.sub(b))
    }

    fn zip(&self, o: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::Shape(format!("{}x{} vs {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let data = self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data, domain: self.domain.clone() })
    }

    /// diag(u) · self · diag(v)
    pub fn scale_rows_cols(&self, u: &[T], v: &[T]) -> Self {
        Self::from_fn(self.rows, self.cols, &self.domain, |i, j| u[i].mul(self.get(i, j)).mul(&v[j]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero(&self.domain))
    }

    pub fn approx_eq(&self, o: &Self) -> bool {
        (self.rows, self.cols) == (o.rows, o.cols)
            && self.data.iter().zip(&o.data).all(|(a, b)| a.approx_eq(b, &self.domain))
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt()
    }
}

impl<T: Field> Matrix<T> {
    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let d = self.domain.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // Largest magnitude pivot keeps the complex path stable; exact domains
            // only care that it is nonzero.
            let best = (r..m.rows)
                .filter(|&i| !m.get(i, c).is_zero(&d))
                .max_by(|&a, &b| m.get(a, c).magnitude().total_cmp(&m.get(b, c).magnitude()));
            let Some(p) = best else { continue };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = m.get(r, c).inv(&d).expect("pivot checked nonzero");
            for j in 0..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero(&d) {
                    let f = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<T> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("determinant of {}x{}", self.rows, self.cols)));
        }
        let d = self.domain.clone();
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one(&d);
        for c in 0..n {
            let best = (c..n)
                .filter(|&i| !m.get(i, c).is_zero(&d))
                .max_by(|&a, &b| m.get(a, c).magnitude().total_cmp(&m.get(b, c).magnitude()));
            let Some(p) = best else { return Ok(T::zero(&d)) };
            if p != c {
                for j in 0..n {
                    m.data.swap(c * n + j, p * n + j);
                }
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inv(&d)?;
            for i in c + 1..n {
                let f = m.get(i, c).mul(&inv);
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("inverse of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let d = &self.domain;
        let aug = Self::from_fn(n, 2 * n, d, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                T::one(d)
            } else {
                T::zero(d)
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::NotInvertible(format!("{n}x{n} matrix is singular")));
        }
        Ok(Self::from_fn(n, n, d, |i, j| r.get(i, n + j).clone()))
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let d = &self.domain;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(d); self.cols];
                v[f] = T::one(d);
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = r.get(row, f).neg();
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, PrimeField, Rational, RationalField};

    fn q(rows: usize, cols: usize, v: &[i64]) -> Matrix<Rational> {
        Matrix::new(rows, cols, v.iter().map(|&x| rational(x, 1)).collect(), RationalField).unwrap()
    }

    #[test]
    fn diag_examples() {
        let d = RationalField;
        assert_eq!(Matrix::diag(&[rational(1, 1), rational(1, 1)], &d), Matrix::identity(2, &d));
        assert_eq!(Matrix::diag(&[rational(2, 1), rational(3, 1)], &d), q(2, 2, &[2, 0, 0, 3]));
    }

    #[test]
    fn diag_sandwich_expands_entrywise() {
        let d = RationalField;
        let m = q(3, 3, &[1, -2, 3, 4, 5, -6, 7, 8, 9]);
        let u = [rational(2, 1), rational(-1, 3), rational(5, 1)];
        let v = [rational(1, 2), rational(7, 1), rational(-3, 1)];
        let via_products = Matrix::diag(&u, &d).matmul(&m).unwrap().matmul(&Matrix::diag(&v, &d)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(*via_products.get(i, j), &(&u[i] * m.get(i, j)) * &v[j]);
            }
        }
        assert_eq!(m.scale_rows_cols(&u, &v), via_products);
    }

    #[test]
    fn det_and_inverse_small() {
        let m = q(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 1]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(m.det().unwrap(), rational(0, 1));
        assert!(m.inverse().is_err());
        let m = q(2, 2, &[4, 7, 2, 6]);
        assert_eq!(m.det().unwrap(), rational(10, 1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv).unwrap(), Matrix::identity(2, &RationalField));
    }

    #[test]
    fn nullspace_annihilates() {
        let m = q(2, 4, &[1, 2, 3, 4, 2, 4, 6, 9]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        assert_eq!(m.rank(), 2);
        for v in ns {
            let col = Matrix::new(4, 1, v, RationalField).unwrap();
            assert!(m.matmul(&col).unwrap().is_zero());
        }
    }

    #[test]
    fn fp_det_matches_mod_reduction() {
        let f = PrimeField::new(7).unwrap();
        let m = Matrix::from_fn(2, 2, &f, |i, j| f.elem([[3, 5], [2, 6]][i][j]));
        // 18 - 10 = 8 = 1 mod 7
        assert_eq!(m.det().unwrap().v, 1);
    }
}

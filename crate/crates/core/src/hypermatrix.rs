//! Dense order-3 hypermatrices with row-major layout `(i0 * n1 + i1) * n2 + i2`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Ring;

pub type Shape = [usize; 3];

#[derive(Debug, Clone, PartialEq)]
pub struct Hypermatrix<T: Ring> {
    shape: Shape,
    data: Vec<T>,
    domain: T::Domain,
}

/// Which axis a slice pins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceSpec {
    /// `A[i, :, :]`
    Row(usize),
    /// `A[:, t, :]`
    Column(usize),
    /// `A[:, :, k]`
    Depth(usize),
}

impl<T: Ring> Hypermatrix<T> {
    pub fn new(shape: Shape, data: Vec<T>, domain: T::Domain) -> Result<Self> {
        if shape.contains(&0) {
            return Err(Error::Shape(format!("extents must be positive, got {shape:?}")));
        }
        let len: usize = shape.iter().product();
        if data.len() != len {
            return Err(Error::Shape(format!("shape {shape:?} needs {len} entries, got {}", data.len())));
        }
        Ok(Hypermatrix { shape, data, domain })
    }

    pub fn from_fn(shape: Shape, domain: &T::Domain, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(shape.iter().product());
        for i in 0..shape[0] {
            for j in 0..shape[1] {
                for k in 0..shape[2] {
                    data.push(f(i, j, k));
                }
            }
        }
        Hypermatrix { shape, data, domain: domain.clone() }
    }

    pub fn zeros(shape: Shape, domain: &T::Domain) -> Self {
        Hypermatrix { shape, data: vec![T::zero(domain); shape.iter().product()], domain: domain.clone() }
    }

    pub fn ones(shape: Shape, domain: &T::Domain) -> Self {
        Hypermatrix { shape, data: vec![T::one(domain); shape.iter().product()], domain: domain.clone() }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }
    pub fn domain(&self) -> &T::Domain {
        &self.domain
    }
    pub fn data(&self) -> &[T] {
        &self.data
    }
    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.shape[1] + j) * self.shape[2] + k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> &T {
        debug_assert!(i < self.shape[0] && j < self.shape[1] && k < self.shape[2]);
        &self.data[self.offset(i, j, k)]
    }

    pub fn try_get(&self, i: usize, j: usize, k: usize) -> Result<&T> {
        if i < self.shape[0] && j < self.shape[1] && k < self.shape[2] {
            Ok(self.get(i, j, k))
        } else {
            Err(Error::Index(format!("({i},{j},{k}) outside {:?}", self.shape)))
        }
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, k: usize, v: T) {
        let o = self.offset(i, j, k);
        self.data[o] = v;
    }

    /// Copy with one entry replaced.
    pub fn with_entry(&self, idx: [usize; 3], v: T) -> Result<Self> {
        self.try_get(idx[0], idx[1], idx[2])?;
        let mut out = self.clone();
        out.set(idx[0], idx[1], idx[2], v);
        Ok(out)
    }

    /// Cyclic index permutation: `out[i0,i1,i2] = self[i2,i0,i1]`.
    pub fn transpose(&self) -> Self {
        let [n0, n1, n2] = self.shape;
        Self::from_fn([n1, n2, n0], &self.domain, |a, b, c| self.get(c, a, b).clone())
    }

    pub fn transpose_pow(&self, k: usize) -> Self {
        match k % 3 {
            0 => self.clone(),
            1 => self.transpose(),
            _ => self.transpose().transpose(),
        }
    }

    pub fn slice(&self, s: SliceSpec) -> Result<Self> {
        let [n0, n1, n2] = self.shape;
        let (axis, idx) = match s {
            SliceSpec::Row(i) => (0, i),
            SliceSpec::Column(t) => (1, t),
            SliceSpec::Depth(k) => (2, k),
        };
        if idx >= self.shape[axis] {
            return Err(Error::Index(format!("slice {s:?} outside {:?}", self.shape)));
        }
        Ok(match s {
            SliceSpec::Row(i) => Self::from_fn([1, n1, n2], &self.domain, |_, j, k| self.get(i, j, k).clone()),
            SliceSpec::Column(t) => Self::from_fn([n0, 1, n2], &self.domain, |i, _, k| self.get(i, t, k).clone()),
            SliceSpec::Depth(k) => Self::from_fn([n0, n1, 1], &self.domain, |i, j, _| self.get(i, j, k).clone()),
        })
    }

    /// `Mat(A[:,:,k])`, an `n0 x n1` matrix.
    pub fn mat_of_depth(&self, k: usize) -> Result<Matrix<T>> {
        if k >= self.shape[2] {
            return Err(Error::Index(format!("depth {k} outside {:?}", self.shape)));
        }
        Ok(Matrix::from_fn(self.shape[0], self.shape[1], &self.domain, |i, j| self.get(i, j, k).clone()))
    }

    pub fn depth_slices(&self) -> Vec<Matrix<T>> {
        (0..self.shape[2]).map(|k| self.mat_of_depth(k).expect("in range")).collect()
    }

    /// Stacks equally shaped matrices along the depth axis.
    pub fn from_depth_slices(slices: &[Matrix<T>]) -> Result<Self> {
        let first = slices.first().ok_or_else(|| Error::Shape("no depth slices".into()))?;
        let (m, n) = (first.rows(), first.cols());
        if slices.iter().any(|s| (s.rows(), s.cols()) != (m, n)) {
            return Err(Error::Shape("depth slices differ in shape".into()));
        }
        Ok(Self::from_fn([m, n, slices.len()], first.domain(), |i, j, k| slices[k].get(i, j).clone()))
    }

    pub fn map<U: Ring>(&self, domain: &U::Domain, f: impl Fn(&T) -> U) -> Hypermatrix<U> {
        Hypermatrix { shape: self.shape, data: self.data.iter().map(f).collect(), domain: domain.clone() }
    }

    pub fn try_map<U: Ring, E>(&self, domain: &U::Domain, f: impl Fn(&T) -> std::result::Result<U, E>) -> std::result::Result<Hypermatrix<U>, E> {
        let data = self.data.iter().map(f).collect::<std::result::Result<_, E>>()?;
        Ok(Hypermatrix { shape: self.shape, data, domain: domain.clone() })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: &T) -> Self {
        Hypermatrix { shape: self.shape, data: self.data.iter().map(|x| c.mul(x)).collect(), domain: self.domain.clone() }
    }

    fn zip(&self, o: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.shape != o.shape {
            return Err(Error::Shape(format!("{:?} vs {:?}", self.shape, o.shape)));
        }
        let data = self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect();
        Ok(Hypermatrix { shape: self.shape, data, domain: self.domain.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero(&self.domain))
    }

    pub fn approx_eq(&self, o: &Self) -> bool {
        self.shape == o.shape && self.data.iter().zip(&o.data).all(|(a, b)| a.approx_eq(b, &self.domain))
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt()
    }

    /// Equality under the domain policy: exact, or Frobenius distance within
    /// `tol·(1+‖other‖)` for floating domains.
    pub fn close_to(&self, other: &Self) -> bool {
        match T::tolerance(&self.domain) {
            None => self.shape == other.shape && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, &self.domain)),
            Some(tol) => self.distance(other) <= tol * (1.0 + other.frob_norm()),
        }
    }

    /// Frobenius norm of the difference; infinite on a shape mismatch.
    pub fn distance(&self, o: &Self) -> f64 {
        match self.sub(o) {
            Ok(d) => d.frob_norm(),
            Err(_) => f64::INFINITY,
        }
    }
}

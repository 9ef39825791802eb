//! Random instances for tests, completions and the CLI's self-check suites.

use rand::Rng;

use crate::hypermatrix::{Hypermatrix, Shape};
use crate::matrix::Matrix;
use crate::scalar::{rational, Complex, Fp, PrimeField, Rational, RationalField, Ring};

/// Scalars that can be drawn at random. Rationals stay small so exact arithmetic stays
/// fast; complex samples lie in the unit square.
pub trait RandomScalar: Ring {
    fn sample<R: Rng + ?Sized>(d: &Self::Domain, rng: &mut R) -> Self;

    /// Nonzero sample; complex values have modulus in `[0.5, 1.5]`.
    fn sample_nonzero<R: Rng + ?Sized>(d: &Self::Domain, rng: &mut R) -> Self {
        loop {
            let v = Self::sample(d, rng);
            if !v.is_zero(d) {
                return v;
            }
        }
    }

    /// Every element, for finite domains.
    fn elements(_d: &Self::Domain) -> Option<Vec<Self>> {
        None
    }
}

impl RandomScalar for Rational {
    fn sample<R: Rng + ?Sized>(_: &RationalField, rng: &mut R) -> Self {
        rational(rng.random_range(-5..=5), rng.random_range(1..=4))
    }
}

impl RandomScalar for Fp {
    fn sample<R: Rng + ?Sized>(f: &PrimeField, rng: &mut R) -> Self {
        f.elem(rng.random_range(0..f.q as i64))
    }

    fn elements(f: &PrimeField) -> Option<Vec<Self>> {
        Some(f.elements().collect())
    }
}

impl RandomScalar for Complex {
    fn sample<R: Rng + ?Sized>(_: &crate::scalar::ComplexField, rng: &mut R) -> Self {
        Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }

    fn sample_nonzero<R: Rng + ?Sized>(_: &crate::scalar::ComplexField, rng: &mut R) -> Self {
        Complex::from_polar(rng.random_range(0.5..1.5), rng.random_range(0.0..std::f64::consts::TAU))
    }
}

pub fn random_hypermatrix<T: RandomScalar, R: Rng + ?Sized>(shape: Shape, d: &T::Domain, rng: &mut R) -> Hypermatrix<T> {
    Hypermatrix::from_fn(shape, d, |_, _, _| T::sample(d, rng))
}

pub fn random_nonzero_hypermatrix<T: RandomScalar, R: Rng + ?Sized>(shape: Shape, d: &T::Domain, rng: &mut R) -> Hypermatrix<T> {
    Hypermatrix::from_fn(shape, d, |_, _, _| T::sample_nonzero(d, rng))
}

pub fn random_matrix<T: RandomScalar, R: Rng + ?Sized>(rows: usize, cols: usize, d: &T::Domain, rng: &mut R) -> Matrix<T> {
    Matrix::from_fn(rows, cols, d, |_, _| T::sample(d, rng))
}

pub fn random_nonzero_matrix<T: RandomScalar, R: Rng + ?Sized>(rows: usize, cols: usize, d: &T::Domain, rng: &mut R) -> Matrix<T> {
    Matrix::from_fn(rows, cols, d, |_, _| T::sample_nonzero(d, rng))
}

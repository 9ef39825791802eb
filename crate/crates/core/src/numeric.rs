//! Alternating least squares for systems that are affine in each of two variable blocks.
//!
//! Every row of the system is `c + Σ a·u[p]·v[q] + Σ b·u[p] + Σ e·v[q]`. With `v` fixed the
//! rows are affine in `u` and vice versa, so each half step is a linear least-squares
//! solve. A damped Gauss-Newton step on both blocks is taken whenever the alternation
//! slows down, which is what drives residuals well below the acceptance threshold.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::Complex;

/// Budgets and tolerance shared by every randomized search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tol: crate::scalar::DEFAULT_TOL, restarts: 50, iters: 500, seed: 0 }
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Row {
    pub c: Complex,
    pub uv: Vec<(Complex, usize, usize)>,
    pub u: Vec<(Complex, usize)>,
    pub v: Vec<(Complex, usize)>,
}

/// A variable is either solved for or pinned to a value.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Var {
    Free(usize),
    Fixed(Complex),
}

#[derive(Debug, Clone)]
pub(crate) struct BilinearSystem {
    pub n_u: usize,
    pub n_v: usize,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub u: Vec<Complex>,
    pub v: Vec<Complex>,
    pub residual: f64,
}

impl Row {
    /// Adds `coef · a · b` where `a` is a u-variable and `b` a v-variable.
    pub fn product(&mut self, coef: Complex, a: Var, b: Var) {
        match (a, b) {
            (Var::Free(p), Var::Free(q)) => self.uv.push((coef, p, q)),
            (Var::Free(p), Var::Fixed(y)) => self.u.push((coef * y, p)),
            (Var::Fixed(x), Var::Free(q)) => self.v.push((coef * x, q)),
            (Var::Fixed(x), Var::Fixed(y)) => self.c += coef * x * y,
        }
    }

    pub fn u_term(&mut self, coef: Complex, a: Var) {
        match a {
            Var::Free(p) => self.u.push((coef, p)),
            Var::Fixed(x) => self.c += coef * x,
        }
    }

    pub fn v_term(&mut self, coef: Complex, b: Var) {
        match b {
            Var::Free(q) => self.v.push((coef, q)),
            Var::Fixed(y) => self.c += coef * y,
        }
    }

    fn eval(&self, u: &[Complex], v: &[Complex]) -> Complex {
        let mut s = self.c;
        for &(a, p, q) in &self.uv {
            s += a * u[p] * v[q];
        }
        for &(b, p) in &self.u {
            s += b * u[p];
        }
        for &(e, q) in &self.v {
            s += e * v[q];
        }
        s
    }
}

impl BilinearSystem {
    pub fn new(n_u: usize, n_v: usize) -> Self {
        BilinearSystem { n_u, n_v, rows: Vec::new() }
    }

    pub fn residual(&self, u: &[Complex], v: &[Complex]) -> DVector<Complex> {
        DVector::from_iterator(self.rows.len(), self.rows.iter().map(|r| r.eval(u, v)))
    }

    pub fn residual_norm(&self, u: &[Complex], v: &[Complex]) -> f64 {
        self.residual(u, v).norm()
    }

    fn jac_u(&self, v: &[Complex]) -> DMatrix<Complex> {
        let mut j = DMatrix::zeros(self.rows.len(), self.n_u);
        for (r, row) in self.rows.iter().enumerate() {
            for &(a, p, q) in &row.uv {
                j[(r, p)] += a * v[q];
            }
            for &(b, p) in &row.u {
                j[(r, p)] += b;
            }
        }
        j
    }

    fn jac_v(&self, u: &[Complex]) -> DMatrix<Complex> {
        let mut j = DMatrix::zeros(self.rows.len(), self.n_v);
        for (r, row) in self.rows.iter().enumerate() {
            for &(a, p, q) in &row.uv {
                j[(r, q)] += a * u[p];
            }
            for &(e, q) in &row.v {
                j[(r, q)] += e;
            }
        }
        j
    }

    /// Exact minimizer over `u` with `v` held fixed.
    fn step_u(&self, u: &mut [Complex], v: &[Complex]) {
        if self.n_u == 0 {
            return;
        }
        let zero = vec![Complex::new(0.0, 0.0); self.n_u];
        let r0 = self.residual(&zero, v);
        if let Some(x) = lstsq(self.jac_u(v), -r0) {
            u.copy_from_slice(x.as_slice());
        }
    }

    fn step_v(&self, u: &[Complex], v: &mut [Complex]) {
        if self.n_v == 0 {
            return;
        }
        let zero = vec![Complex::new(0.0, 0.0); self.n_v];
        let r0 = self.residual(u, &zero);
        if let Some(y) = lstsq(self.jac_v(u), -r0) {
            v.copy_from_slice(y.as_slice());
        }
    }

    /// One Levenberg-Marquardt step on both blocks; returns whether it was accepted.
    fn step_joint(&self, u: &mut Vec<Complex>, v: &mut Vec<Complex>, lambda: &mut f64) -> bool {
        let r = self.residual(u, v);
        let cur = r.norm();
        let ju = self.jac_u(v);
        let jv = self.jac_v(u);
        let (m, nu, nv) = (self.rows.len(), self.n_u, self.n_v);
        for _ in 0..4 {
            let mut j = DMatrix::zeros(m + nu + nv, nu + nv);
            j.view_mut((0, 0), (m, nu)).copy_from(&ju);
            j.view_mut((0, nu), (m, nv)).copy_from(&jv);
            let damp = Complex::new(lambda.sqrt(), 0.0);
            for d in 0..nu + nv {
                j[(m + d, d)] = damp;
            }
            let mut rhs = DVector::zeros(m + nu + nv);
            rhs.rows_mut(0, m).copy_from(&(-&r));
            let Some(delta) = lstsq(j, rhs) else { return false };
            let nu_: Vec<Complex> = u.iter().zip(delta.iter()).map(|(a, b)| a + b).collect();
            let nv_: Vec<Complex> = v.iter().zip(delta.iter().skip(nu)).map(|(a, b)| a + b).collect();
            if self.residual_norm(&nu_, &nv_) < cur {
                *u = nu_;
                *v = nv_;
                *lambda = (*lambda * 0.1).max(1e-14);
                return true;
            }
            *lambda = (*lambda * 10.0).min(1e8);
        }
        false
    }

    /// Randomized restarts of the alternating scheme. Returns the first solution whose
    /// residual norm is at most `threshold`.
    pub fn solve(&self, cfg: &SolverConfig, rng: &mut ChaCha8Rng, threshold: f64, restarts: usize) -> Option<Solution> {
        let max_norm = 1e8 * (1.0 + threshold / cfg.tol.max(f64::MIN_POSITIVE));
        for _ in 0..restarts {
            let mut u: Vec<Complex> = (0..self.n_u).map(|_| random_complex(rng)).collect();
            let mut v: Vec<Complex> = (0..self.n_v).map(|_| random_complex(rng)).collect();
            let mut res = self.residual_norm(&u, &v);
            let mut lambda = 1e-3;
            let mut history = Vec::with_capacity(cfg.iters);
            for it in 0..cfg.iters {
                if res <= threshold {
                    break;
                }
                let prev = res;
                self.step_u(&mut u, &v);
                self.step_v(&u, &mut v);
                res = self.residual_norm(&u, &v);
                if res > 0.5 * prev || it % 8 == 7 {
                    // Alternation is crawling; try a joint step from here.
                    for _ in 0..3 {
                        if !self.step_joint(&mut u, &mut v, &mut lambda) {
                            break;
                        }
                    }
                    res = self.residual_norm(&u, &v);
                }
                history.push(res);
                let blown = u.iter().chain(&v).any(|z| !z.is_finite() || z.norm() > max_norm);
                if blown {
                    break;
                }
                // Stagnation: less than 1% progress over the last 20 iterations.
                if history.len() > 20 && res > 0.99 * history[history.len() - 21] {
                    break;
                }
            }
            if res <= threshold {
                // A few joint steps past the threshold buy several digits for free.
                for _ in 0..4 {
                    if !self.step_joint(&mut u, &mut v, &mut lambda) {
                        break;
                    }
                }
                res = self.residual_norm(&u, &v);
            }
            if res <= threshold && u.iter().chain(&v).all(|z| z.is_finite()) {
                return Some(Solution { u, v, residual: res });
            }
        }
        None
    }
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex {
    Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Minimum-norm least-squares solution through the SVD.
pub(crate) fn lstsq(a: DMatrix<Complex>, b: DVector<Complex>) -> Option<DVector<Complex>> {
    if a.ncols() == 0 {
        return Some(DVector::zeros(0));
    }
    let svd = a.svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = (smax * 1e-13).max(f64::MIN_POSITIVE);
    svd.solve(&b, eps).ok()
}

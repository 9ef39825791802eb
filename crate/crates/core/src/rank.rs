//! Outer-product decompositions, rank certificates and slice reductions.

use std::ops::ControlFlow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dependence::{pivoted_numeric, MatrixFamily};
use crate::error::{Error, Result};
use crate::hypermatrix::Hypermatrix;
use crate::matrix::Matrix;
use crate::numeric::{BilinearSystem, Row, SolverConfig, Var};
use crate::product::{conformable, identity_pair};
use crate::scalar::{Complex, Fp, PrimeField, Ring};
use crate::util::{check_budget, Odometer};

/// `(X, Y, Z)` with `X: (n0,l,n2)`, `Y: (n0,n1,l)`, `Z: (l,n1,n2)` and the support `S` of
/// terms that count.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTriple<T: Ring> {
    x: Hypermatrix<T>,
    y: Hypermatrix<T>,
    z: Hypermatrix<T>,
    support: Vec<usize>,
}

impl<T: Ring> DecompositionTriple<T> {
    pub fn new(x: Hypermatrix<T>, y: Hypermatrix<T>, z: Hypermatrix<T>, support: Vec<usize>) -> Result<Self> {
        let [_, _, _, l] = conformable(&x, &y, &z)?;
        if support.windows(2).any(|w| w[0] >= w[1]) || support.iter().any(|&t| t >= l) {
            return Err(Error::Shape(format!("support {support:?} must be increasing and below {l}")));
        }
        Ok(DecompositionTriple { x, y, z, support })
    }

    pub fn full(x: Hypermatrix<T>, y: Hypermatrix<T>, z: Hypermatrix<T>) -> Result<Self> {
        let l = x.shape()[1];
        Self::new(x, y, z, (0..l).collect())
    }

    pub fn x(&self) -> &Hypermatrix<T> {
        &self.x
    }
    pub fn y(&self) -> &Hypermatrix<T> {
        &self.y
    }
    pub fn z(&self) -> &Hypermatrix<T> {
        &self.z
    }
    pub fn support(&self) -> &[usize] {
        &self.support
    }
    pub fn ell(&self) -> usize {
        self.x.shape()[1]
    }
    /// Number of counted terms.
    pub fn r(&self) -> usize {
        self.support.len()
    }
    pub fn target_shape(&self) -> [usize; 3] {
        [self.x.shape()[0], self.y.shape()[1], self.x.shape()[2]]
    }
    pub fn domain(&self) -> &T::Domain {
        self.x.domain()
    }

    /// `Σ_{t∈S} Prod_{Δ^(t)}(X, Y, Z)`
    pub fn reconstruct(&self) -> Result<Hypermatrix<T>> {
        let (x, y, z) = (&self.x, &self.y, &self.z);
        let d = x.domain();
        Ok(Hypermatrix::from_fn(self.target_shape(), d, |i, j, k| {
            self.support
                .iter()
                .fold(T::zero(d), |acc, &t| acc.add(&x.get(i, t, k).mul(y.get(i, j, t)).mul(z.get(t, j, k))))
        }))
    }

    /// Zeroes every slice outside the support.
    pub fn normalized(&self) -> Self {
        let d = self.domain().clone();
        let on = |t: usize| self.support.contains(&t);
        let keep = |v: &T, t: usize| if on(t) { v.clone() } else { T::zero(&d) };
        DecompositionTriple {
            x: Hypermatrix::from_fn(self.x.shape(), &d, |i, t, k| keep(self.x.get(i, t, k), t)),
            y: Hypermatrix::from_fn(self.y.shape(), &d, |i, j, t| keep(self.y.get(i, j, t), t)),
            z: Hypermatrix::from_fn(self.z.shape(), &d, |t, j, k| keep(self.z.get(t, j, k), t)),
            support: self.support.clone(),
        }
    }

    /// A decomposition of the transposed target: `Prod(X,Y,Z)ᵀ = Prod(Yᵀ, Zᵀ, Xᵀ)`.
    pub fn transpose(&self) -> Self {
        DecompositionTriple {
            x: self.y.transpose(),
            y: self.z.transpose(),
            z: self.x.transpose(),
            support: self.support.clone(),
        }
    }

    pub fn into_parts(self) -> (Hypermatrix<T>, Hypermatrix<T>, Hypermatrix<T>, Vec<usize>) {
        (self.x, self.y, self.z, self.support)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CertificateKind {
    UpperBound,
    /// Every decomposition with fewer terms was enumerated over GF(q) and rejected.
    ExactRank { q: u16, candidates: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankCertificate<T: Ring> {
    pub kind: CertificateKind,
    pub triple: DecompositionTriple<T>,
    /// Relative reconstruction residual, numeric certificates only.
    pub residual: Option<f64>,
}

impl<T: Ring> RankCertificate<T> {
    pub fn r(&self) -> usize {
        self.triple.r()
    }

    /// Re-checks the reconstruction against `target`.
    pub fn verify(&self, target: &Hypermatrix<T>) -> Result<()> {
        let rec = self.triple.reconstruct()?;
        if rec.shape() != target.shape() || !rec.close_to(target) {
            return Err(Error::Verification(format!(
                "certificate reconstructs with error {:.3e}",
                rec.distance(target)
            )));
        }
        Ok(())
    }
}

fn relative_residual<T: Ring>(rec: &Hypermatrix<T>, target: &Hypermatrix<T>) -> Option<f64> {
    T::tolerance(target.domain()).map(|_| rec.distance(target) / target.frob_norm().max(f64::MIN_POSITIVE))
}

/// Certificate for `rank(A) <= min(m, n, p)` built from the identity pair, through
/// transposes when the smallest side is not the depth.
pub fn rank_upper_min<T: Ring>(a: &Hypermatrix<T>) -> Result<RankCertificate<T>> {
    let [m, n, p] = a.shape();
    let d = a.domain();
    let depth_case = |b: &Hypermatrix<T>| -> Result<DecompositionTriple<T>> {
        let [m, n, p] = b.shape();
        let (j0, j1) = identity_pair(m, n, p, d);
        DecompositionTriple::full(j0, b.clone(), j1)
    };
    let triple = if p <= m && p <= n {
        depth_case(a)?
    } else if m <= n {
        // A = (Aᵀ)ᵀ², so transpose a decomposition of Aᵀ twice.
        depth_case(&a.transpose())?.transpose().transpose()
    } else {
        depth_case(&a.transpose_pow(2))?.transpose()
    };
    let rec = triple.reconstruct()?;
    let cert = RankCertificate { kind: CertificateKind::UpperBound, residual: relative_residual(&rec, a), triple };
    cert.verify(a)?;
    Ok(cert)
}

/// The one-term decomposition of `Σ_{t<r} Δ^(t)` (side n).
pub fn delta_sum_certificate<T: Ring>(n: usize, r: usize, d: &T::Domain) -> Result<RankCertificate<T>> {
    if r == 0 || r > n {
        return Err(Error::Precondition(format!("need 0 < r <= n, got r={r}, n={n}")));
    }
    let ind = |b: bool| if b { T::one(d) } else { T::zero(d) };
    let x = Hypermatrix::from_fn([n, 1, n], d, |i, _, k| ind(i == k && i < r));
    let y = Hypermatrix::from_fn([n, n, 1], d, |i, j, _| ind(i == j));
    let z = Hypermatrix::from_fn([1, n, n], d, |_, j, k| ind(j == k));
    Ok(RankCertificate { kind: CertificateKind::UpperBound, triple: DecompositionTriple::full(x, y, z)?, residual: None })
}

// ---------------------------------------------------------------- slice reductions

/// Matrix case: when `Y[τ,:] = Σ_{t≠τ} u_t·Y[t,:]`, folding `u_t·X[:,τ]` into the other
/// columns of `X` and dropping row `τ` of `Y` keeps `X·Y`.
pub fn matrix_slice_reduce<T: Ring>(x: &Matrix<T>, y: &Matrix<T>, tau: usize, u: &[T]) -> Result<(Matrix<T>, Matrix<T>)> {
    let l = x.cols();
    if y.rows() != l {
        return Err(Error::Conformability(format!("{}x{} times {}x{}", x.rows(), l, y.rows(), y.cols())));
    }
    if tau >= l || u.len() + 1 != l {
        return Err(Error::Shape(format!("pivot {tau} with {} coefficients for {l} terms", u.len())));
    }
    let d = x.domain();
    let others: Vec<usize> = (0..l).filter(|&t| t != tau).collect();
    for j in 0..y.cols() {
        let combo = others.iter().zip(u).fold(T::zero(d), |acc, (&t, c)| acc.add(&c.mul(y.get(t, j))));
        if !combo.approx_eq(y.get(tau, j), d) {
            return Err(Error::Hypothesis(format!("row {tau} of Y is not the stated combination at column {j}")));
        }
    }
    let x2 = Matrix::from_fn(x.rows(), l - 1, d, |i, s| x.get(i, others[s]).add(&u[s].mul(x.get(i, tau))));
    let y2 = Matrix::from_fn(l - 1, y.cols(), d, |s, j| y.get(others[s], j).clone());
    Ok((x2, y2))
}

/// Pivot `τ` and vectors `u_t` (length n0) and `v_t` (length n1) for `t ≠ τ`, stored in
/// ascending order of `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceRewriteData<T: Ring> {
    pub tau: usize,
    pub u: Vec<Vec<T>>,
    pub v: Vec<Vec<T>>,
}

/// Both sides of the reduction hypothesis at every `(i, j, k)`:
/// `X[i,τ,k]·Y[i,j,τ]·Z[τ,j,k]` against
/// `Σ_{t≠τ} u_t[i]·X[i,τ,k]·Y[i,j,t]·(Z[τ,j,k]·v_t[j] + Z[t,j,k]) + X[i,t,k]·Y[i,j,t]·Z[τ,j,k]·v_t[j]`.
fn hypothesis_sides<T: Ring>(t: &DecompositionTriple<T>, r: &SliceRewriteData<T>) -> Result<(Hypermatrix<T>, Hypermatrix<T>)> {
    let (x, y, z) = (t.x(), t.y(), t.z());
    let l = t.ell();
    let [n0, n1, n2] = t.target_shape();
    let tau = r.tau;
    if tau >= l || r.u.len() + 1 != l || r.v.len() + 1 != l {
        return Err(Error::Shape(format!("rewrite data for pivot {tau} does not fit {l} terms")));
    }
    if r.u.iter().any(|u| u.len() != n0) || r.v.iter().any(|v| v.len() != n1) {
        return Err(Error::Shape(format!("u_t must have length {n0} and v_t length {n1}")));
    }
    let d = t.domain();
    let others: Vec<usize> = (0..l).filter(|&s| s != tau).collect();
    let lhs = Hypermatrix::from_fn([n0, n1, n2], d, |i, j, k| x.get(i, tau, k).mul(y.get(i, j, tau)).mul(z.get(tau, j, k)));
    let rhs = Hypermatrix::from_fn([n0, n1, n2], d, |i, j, k| {
        let mut acc = T::zero(d);
        for (s, &tt) in others.iter().enumerate() {
            let (u, v) = (&r.u[s][i], &r.v[s][j]);
            let inner = z.get(tau, j, k).mul(v).add(z.get(tt, j, k));
            acc = acc.add(&u.mul(x.get(i, tau, k)).mul(y.get(i, j, tt)).mul(&inner));
            acc = acc.add(&x.get(i, tt, k).mul(y.get(i, j, tt)).mul(z.get(tau, j, k)).mul(v));
        }
        acc
    });
    Ok((lhs, rhs))
}

/// Checks the reduction hypothesis; on failure names the first offending entry.
pub fn check_reduction_hypothesis<T: Ring>(t: &DecompositionTriple<T>, r: &SliceRewriteData<T>) -> Result<()> {
    let (lhs, rhs) = hypothesis_sides(t, r)?;
    let d = t.domain();
    let [n0, n1, n2] = lhs.shape();
    let first_bad = || {
        let mut worst = (0, 0, 0);
        let mut gap = -1.0;
        for i in 0..n0 {
            for j in 0..n1 {
                for k in 0..n2 {
                    let g = lhs.get(i, j, k).sub(rhs.get(i, j, k)).magnitude();
                    if T::is_exact(d) && !lhs.get(i, j, k).approx_eq(rhs.get(i, j, k), d) {
                        return ((i, j, k), g);
                    }
                    if g > gap {
                        gap = g;
                        worst = (i, j, k);
                    }
                }
            }
        }
        (worst, gap)
    };
    let ok = match T::tolerance(d) {
        None => lhs.approx_eq(&rhs),
        Some(tol) => lhs.distance(&rhs) <= tol * (1.0 + t.reconstruct()?.frob_norm()),
    };
    if ok {
        return Ok(());
    }
    let ((i, j, k), g) = first_bad();
    Err(Error::Hypothesis(format!("slice {}: hypothesis fails at (i,j,k)=({i},{j},{k}) by {g:.3e}", r.tau)))
}

/// `X'[:,t,k] = u_t∘X[:,τ,k] + X[:,t,k]`, `Z'[t,:,k] = Z[t,:,k] + Z[τ,:,k]∘v_t`, drop slice
/// `τ` of `Y`. Preserves the product whenever the hypothesis holds.
pub fn hyper_slice_reduce<T: Ring>(t: &DecompositionTriple<T>, r: &SliceRewriteData<T>) -> Result<DecompositionTriple<T>> {
    check_reduction_hypothesis(t, r)?;
    let full = t.normalized();
    let (x, y, z) = (full.x(), full.y(), full.z());
    let l = t.ell();
    let tau = r.tau;
    let others: Vec<usize> = (0..l).filter(|&s| s != tau).collect();
    let d = t.domain();
    let [n0, n1, n2] = t.target_shape();
    let x2 = Hypermatrix::from_fn([n0, l - 1, n2], d, |i, s, k| r.u[s][i].mul(x.get(i, tau, k)).add(x.get(i, others[s], k)));
    let y2 = Hypermatrix::from_fn([n0, n1, l - 1], d, |i, j, s| y.get(i, j, others[s]).clone());
    let z2 = Hypermatrix::from_fn([l - 1, n1, n2], d, |s, j, k| z.get(others[s], j, k).add(&z.get(tau, j, k).mul(&r.v[s][j])));
    DecompositionTriple::full(x2, y2, z2)
}

/// Numeric search for rewrite data satisfying the reduction hypothesis at pivot `τ`.
pub fn reduction_witness_numeric(
    t: &DecompositionTriple<Complex>,
    tau: usize,
    cfg: &SolverConfig,
    rng: &mut ChaCha8Rng,
) -> Option<(SliceRewriteData<Complex>, f64)> {
    let full = t.normalized();
    let (x, y, z) = (full.x(), full.y(), full.z());
    let l = t.ell();
    if tau >= l || l < 2 {
        return None;
    }
    let [n0, n1, n2] = t.target_shape();
    let others: Vec<usize> = (0..l).filter(|&s| s != tau).collect();
    let mut sys = BilinearSystem::new(others.len() * n0, others.len() * n1);
    for i in 0..n0 {
        for j in 0..n1 {
            for k in 0..n2 {
                let (xt, zt) = (*x.get(i, tau, k), *z.get(tau, j, k));
                let mut row = Row { c: -(xt * y.get(i, j, tau) * zt), ..Default::default() };
                for (s, &tt) in others.iter().enumerate() {
                    let (uv, vv) = (Var::Free(s * n0 + i), Var::Free(s * n1 + j));
                    let ytt = *y.get(i, j, tt);
                    row.product(xt * ytt * zt, uv, vv);
                    row.u_term(xt * ytt * z.get(tt, j, k), uv);
                    row.v_term(x.get(i, tt, k) * ytt * zt, vv);
                }
                sys.rows.push(row);
            }
        }
    }
    let threshold = cfg.tol * (1.0 + t.reconstruct().ok()?.frob_norm());
    let sol = sys.solve(cfg, rng, threshold, cfg.restarts)?;
    let u = (0..others.len()).map(|s| sol.u[s * n0..(s + 1) * n0].to_vec()).collect();
    let v = (0..others.len()).map(|s| sol.v[s * n1..(s + 1) * n1].to_vec()).collect();
    Some((SliceRewriteData { tau, u, v }, sol.residual))
}

fn check_generic(b: &Hypermatrix<Complex>) -> Result<()> {
    let tol = b.domain().tol;
    if let Some(pos) = b.data().iter().position(|e| e.norm() <= tol) {
        let [_, n1, n2] = b.shape();
        return Err(Error::Precondition(format!(
            "entry ({},{},{}) is zero; all entries must be nonzero",
            pos / (n1 * n2),
            (pos / n2) % n1,
            pos % n2
        )));
    }
    Ok(())
}

/// Solves `B[:,:,τ] = Σ_{t≠τ} diag(U[:,t])·B[:,:,t]·diag(V[t,:])` numerically. The result
/// is the rewrite data for the identity-pair triple `(J0, B, J1)`.
pub fn depth_slice_witness(b: &Hypermatrix<Complex>, tau: usize, cfg: &SolverConfig) -> Result<Option<(SliceRewriteData<Complex>, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    depth_slice_witness_rng(b, tau, cfg, &mut rng)
}

fn depth_slice_witness_rng(
    b: &Hypermatrix<Complex>,
    tau: usize,
    cfg: &SolverConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Option<(SliceRewriteData<Complex>, f64)>> {
    check_generic(b)?;
    let p = b.shape()[2];
    if tau >= p {
        return Err(Error::Index(format!("pivot {tau} outside {p} depth slices")));
    }
    if p < 2 {
        return Ok(None);
    }
    let fam = MatrixFamily::from_depth_slices(b);
    Ok(pivoted_numeric(&fam, tau, cfg, rng, cfg.restarts).map(|(u, v, res)| (SliceRewriteData { tau, u, v }, res)))
}

/// `b001·b010·b100·b111 - b101·b110·b000·b011`
pub fn hyperdet_2x2x2<T: Ring>(b: &Hypermatrix<T>) -> Result<T> {
    if b.shape() != [2, 2, 2] {
        return Err(Error::Shape(format!("hyperdeterminant needs 2x2x2, got {:?}", b.shape())));
    }
    let e = |i, j, k| b.get(i, j, k);
    let first = e(0, 0, 1).mul(e(0, 1, 0)).mul(e(1, 0, 0)).mul(e(1, 1, 1));
    let second = e(1, 0, 1).mul(e(1, 1, 0)).mul(e(0, 0, 0)).mul(e(0, 1, 1));
    Ok(first.sub(&second))
}

/// Generic rank bound for cubic side `n`.
pub fn generic_rank_bound(n: usize) -> Result<usize> {
    match n {
        0 | 1 => Err(Error::Precondition(format!("generic bound needs n >= 2, got {n}"))),
        2 => Ok(2),
        _ => Ok(n - 1),
    }
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub certificate: RankCertificate<Complex>,
    pub rewrites: Vec<SliceRewriteData<Complex>>,
    /// Pivots tried and given up on, with the term count at the time.
    pub stalls: Vec<(usize, usize)>,
}

/// Starting from `(J0, B, J1)`, applies slice reductions while witnesses are found.
pub fn generic_rank_pipeline(b: &Hypermatrix<Complex>, cfg: &SolverConfig, tau: Option<usize>) -> Result<PipelineReport> {
    check_generic(b)?;
    let [m, n, p] = b.shape();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (j0, j1) = identity_pair(m, n, p, b.domain());
    let mut triple = DecompositionTriple::full(j0, b.clone(), j1)?;
    let mut rewrites = Vec::new();
    let mut stalls = Vec::new();
    while triple.ell() > 1 {
        let l = triple.ell();
        let first = tau.filter(|&t| t < l).unwrap_or(l - 1);
        let order: Vec<usize> = std::iter::once(first).chain((0..l).rev().filter(|&t| t != first)).collect();
        let mut next = None;
        for t in order {
            let found = if rewrites.is_empty() {
                depth_slice_witness_rng(b, t, cfg, &mut rng)?
            } else {
                reduction_witness_numeric(&triple, t, cfg, &mut rng)
            };
            let Some((data, _)) = found else {
                stalls.push((t, l));
                continue;
            };
            match hyper_slice_reduce(&triple, &data) {
                Ok(reduced) if reduced.reconstruct()?.close_to(b) => {
                    next = Some((reduced, data));
                    break;
                }
                _ => stalls.push((t, l)),
            }
        }
        match next {
            Some((reduced, data)) => {
                triple = reduced;
                rewrites.push(data);
            }
            None => break,
        }
    }
    let rec = triple.reconstruct()?;
    let certificate = RankCertificate { kind: CertificateKind::UpperBound, residual: relative_residual(&rec, b), triple };
    certificate.verify(b)?;
    Ok(PipelineReport { certificate, rewrites, stalls })
}

// ---------------------------------------------------------------- exhaustive search over GF(q)

fn digits_of(a: &Hypermatrix<Fp>) -> Vec<u32> {
    a.data().iter().map(|e| e.v as u32).collect()
}

fn fp_hm(shape: [usize; 3], vals: &[u32], f: &PrimeField) -> Hypermatrix<Fp> {
    Hypermatrix::new(shape, vals.iter().map(|&v| f.elem(v as i64)).collect(), *f).expect("shape matches")
}

/// All `z ∈ GF(q)^r` with `Σ_t coef[e][t]·z_t = rhs[e]` for every equation `e`.
fn solve_by_enumeration(coef: &[Vec<u32>], rhs: &[u32], r: usize, q: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut odo = Odometer::new(r, q as u16);
    while let Some(z) = odo.next() {
        let ok = coef.iter().zip(rhs).all(|(c, &b)| c.iter().zip(z).map(|(&a, &zz)| a * zz as u32).sum::<u32>() % q == b);
        if ok {
            out.push(z.iter().map(|&v| v as u32).collect());
        }
    }
    out
}

/// Enumerates, in lexicographic order of `(X, Y)` and then of the `Z` solutions, every
/// `r`-term decomposition of `a` over GF(q). Returns the number of `(X, Y)` candidates
/// visited.
pub fn for_each_decomposition(
    a: &Hypermatrix<Fp>,
    r: usize,
    budget: u64,
    mut visit: impl FnMut(DecompositionTriple<Fp>) -> ControlFlow<()>,
) -> Result<u64> {
    let f = *a.domain();
    let q = f.q as u32;
    let [n0, n1, n2] = a.shape();
    if r == 0 {
        return Err(Error::Precondition("term count must be positive".into()));
    }
    let (nx, ny) = (n0 * r * n2, n0 * n1 * r);
    check_budget(f.q, nx + ny, budget)?;
    let target = digits_of(a);
    let mut visited = 0u64;
    let mut odo = Odometer::new(nx + ny, f.q);
    while let Some(dg) = odo.next() {
        visited += 1;
        let (xd, yd) = dg.split_at(nx);
        let xv = |i: usize, t: usize, k: usize| xd[(i * r + t) * n2 + k] as u32;
        let yv = |i: usize, j: usize, t: usize| yd[(i * n1 + j) * r + t] as u32;
        let mut per_jk: Vec<Vec<Vec<u32>>> = Vec::with_capacity(n1 * n2);
        for j in 0..n1 {
            for k in 0..n2 {
                let coef: Vec<Vec<u32>> = (0..n0).map(|i| (0..r).map(|t| xv(i, t, k) * yv(i, j, t) % q).collect()).collect();
                let rhs: Vec<u32> = (0..n0).map(|i| target[(i * n1 + j) * n2 + k]).collect();
                let sols = solve_by_enumeration(&coef, &rhs, r, q);
                if sols.is_empty() {
                    break;
                }
                per_jk.push(sols);
            }
            if per_jk.len() != (j + 1) * n2 {
                break;
            }
        }
        if per_jk.len() != n1 * n2 {
            continue;
        }
        let x = fp_hm([n0, r, n2], &xd.iter().map(|&v| v as u32).collect::<Vec<_>>(), &f);
        let y = fp_hm([n0, n1, r], &yd.iter().map(|&v| v as u32).collect::<Vec<_>>(), &f);
        // Cartesian product over the per-(j,k) solution lists.
        let radices: Vec<u16> = per_jk.iter().map(|s| s.len() as u16).collect();
        let mut choice = vec![0usize; radices.len()];
        loop {
            let mut zd = vec![0u32; r * n1 * n2];
            for (jk, &c) in choice.iter().enumerate() {
                let (j, k) = (jk / n2, jk % n2);
                for t in 0..r {
                    zd[(t * n1 + j) * n2 + k] = per_jk[jk][c][t];
                }
            }
            let triple = DecompositionTriple::full(x.clone(), y.clone(), fp_hm([r, n1, n2], &zd, &f))?;
            if visit(triple).is_break() {
                return Ok(visited);
            }
            if !advance_mixed(&mut choice, &radices) {
                break;
            }
        }
    }
    Ok(visited)
}

/// Mixed-radix increment, last position fastest. False once it wraps around.
fn advance_mixed(choice: &mut [usize], radices: &[u16]) -> bool {
    for (c, &r) in choice.iter_mut().zip(radices).rev() {
        *c += 1;
        if *c < r as usize {
            return true;
        }
        *c = 0;
    }
    false
}

fn zero_certificate(a: &Hypermatrix<Fp>, q: u16) -> Result<RankCertificate<Fp>> {
    let f = *a.domain();
    let [n0, n1, n2] = a.shape();
    let triple = DecompositionTriple::new(
        Hypermatrix::zeros([n0, 1, n2], &f),
        Hypermatrix::zeros([n0, n1, 1], &f),
        Hypermatrix::zeros([1, n1, n2], &f),
        vec![],
    )?;
    Ok(RankCertificate { kind: CertificateKind::ExactRank { q, candidates: 0.0 }, triple, residual: None })
}

/// Smallest `r` with an `r`-term decomposition over GF(q). Sizes below the minimal side
/// are searched exhaustively; the minimal side itself is attained by the identity pair.
pub fn bm_rank_exhaustive(a: &Hypermatrix<Fp>, budget: u64) -> Result<RankCertificate<Fp>> {
    let f = *a.domain();
    if a.is_zero() {
        return zero_certificate(a, f.q);
    }
    let [n0, n1, n2] = a.shape();
    let top = n0.min(n1).min(n2);
    let mut spent = 0.0;
    for r in 1..top {
        let mut found = None;
        spent += for_each_decomposition(a, r, budget, |t| {
            found = Some(t);
            ControlFlow::Break(())
        })? as f64;
        if let Some(triple) = found {
            return Ok(RankCertificate { kind: CertificateKind::ExactRank { q: f.q, candidates: spent }, triple, residual: None });
        }
    }
    let upper = rank_upper_min(a)?;
    Ok(RankCertificate { kind: CertificateKind::ExactRank { q: f.q, candidates: spent }, triple: upper.triple, residual: None })
}

/// Smallest number of terms `x_t ⊗ y_t ⊗ z_t` summing to `a` over GF(q), returned through
/// the slice embedding `X[i,t,k] = x_t[i]`, `Y[i,j,t] = y_t[j]`, `Z[t,j,k] = z_t[k]`.
pub fn cp_rank_exhaustive(a: &Hypermatrix<Fp>, budget: u64) -> Result<RankCertificate<Fp>> {
    let f = *a.domain();
    let q = f.q as u32;
    if a.is_zero() {
        return zero_certificate(a, f.q);
    }
    let [n0, n1, n2] = a.shape();
    let target = digits_of(a);
    let mut spent = 0.0;
    for r in 1..=(n0 * n1).min(n1 * n2).min(n0 * n2) {
        check_budget(f.q, r * (n0 + n1), budget)?;
        let mut odo = Odometer::new(r * (n0 + n1), f.q);
        while let Some(dg) = odo.next() {
            spent += 1.0;
            let (xd, yd) = dg.split_at(r * n0);
            let mut zs = Vec::with_capacity(n2);
            for k in 0..n2 {
                let mut coef = Vec::with_capacity(n0 * n1);
                let mut rhs = Vec::with_capacity(n0 * n1);
                for i in 0..n0 {
                    for j in 0..n1 {
                        coef.push((0..r).map(|t| xd[t * n0 + i] as u32 * yd[t * n1 + j] as u32 % q).collect::<Vec<_>>());
                        rhs.push(target[(i * n1 + j) * n2 + k]);
                    }
                }
                match solve_by_enumeration(&coef, &rhs, r, q).into_iter().next() {
                    Some(z) => zs.push(z),
                    None => break,
                }
            }
            if zs.len() != n2 {
                continue;
            }
            let x: Vec<u32> = (0..n0).flat_map(|i| (0..r).flat_map(move |t| (0..n2).map(move |_| (i, t)))).map(|(i, t)| xd[t * n0 + i] as u32).collect();
            let y: Vec<u32> = (0..n0)
                .flat_map(|_| (0..n1).flat_map(move |j| (0..r).map(move |t| (j, t))))
                .map(|(j, t)| yd[t * n1 + j] as u32)
                .collect();
            let z: Vec<u32> = (0..r).flat_map(|t| (0..n1).flat_map(move |_| (0..n2).map(move |k| (t, k)))).map(|(t, k)| zs[k][t]).collect();
            let triple = DecompositionTriple::full(fp_hm([n0, r, n2], &x, &f), fp_hm([n0, n1, r], &y, &f), fp_hm([r, n1, n2], &z, &f))?;
            return Ok(RankCertificate { kind: CertificateKind::ExactRank { q: f.q, candidates: spent }, triple, residual: None });
        }
    }
    Err(Error::Verification("no tensor decomposition found up to the trivial bound".into()))
}

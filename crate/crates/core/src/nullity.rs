//! Rank–nullity for matrices and hypermatrices.
//!
//! The nullity of `A` (m×n×p, `p` minimal) is taken to be the largest number of zero depth
//! slices of `Prod(X0, A, X1)` over invertible pairs `(X0, X1)`. A decomposition
//! `A = Σ_{t∈S} Prod_Δ(t)(U, V, W)` turns into such a pair by completing the unused slices of
//! `U` and `W` to an invertible pair and inverting it.

use std::ops::ControlFlow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dependence::{pair_dependence_exact, MatrixFamily};
use crate::error::{Error, Result};
use crate::hypermatrix::Hypermatrix;
use crate::inverse::{pair_invertible, recover_outer_inverse, HyperPair, OuterInversePair};
use crate::matrix::Matrix;
use crate::numeric::SolverConfig;
use crate::product::identity_pair;
use crate::random::RandomScalar;
use crate::rank::{bm_rank_exhaustive, for_each_decomposition, generic_rank_pipeline, DecompositionTriple};
use crate::scalar::{Complex, Field, Fp, Ring};
use crate::util::Odometer;

// ---------------------------------------------------------------- matrices

/// `A = Σ_{t∈S} U[:,t]·V[t,:]` with `U: m×ℓ`, `V: ℓ×n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDecomposition<T: Ring> {
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    pub support: Vec<usize>,
}

impl<T: Ring> MatrixDecomposition<T> {
    pub fn new(u: Matrix<T>, v: Matrix<T>, support: Vec<usize>) -> Result<Self> {
        if u.cols() != v.rows() {
            return Err(Error::Conformability(format!("U has {} columns, V has {} rows", u.cols(), v.rows())));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) || support.iter().any(|&t| t >= u.cols()) {
            return Err(Error::Shape(format!("support {support:?} must be increasing and below {}", u.cols())));
        }
        Ok(MatrixDecomposition { u, v, support })
    }

    pub fn r(&self) -> usize {
        self.support.len()
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        let d = self.u.domain();
        Matrix::from_fn(self.u.rows(), self.v.cols(), d, |i, j| {
            self.support.iter().fold(T::zero(d), |acc, &t| acc.add(&self.u.get(i, t).mul(self.v.get(t, j))))
        })
    }
}

fn complement(n: usize, s: &[usize]) -> Vec<usize> {
    (0..n).filter(|t| !s.contains(t)).collect()
}

/// With `X` invertible and the columns `zero_cols` of `A·X` zero,
/// `A = Σ_{t∉zero_cols} Prod_Δ(t)(A·X, X⁻¹)`.
pub fn matrix_nullity_sufficiency<T: Field>(a: &Matrix<T>, x: &Matrix<T>, zero_cols: &[usize]) -> Result<MatrixDecomposition<T>> {
    let n = a.cols();
    if x.rows() != n || x.cols() != n {
        return Err(Error::Shape(format!("X must be {n}x{n}, got {}x{}", x.rows(), x.cols())));
    }
    let x_inv = x.inverse().map_err(|_| Error::NotInvertible("X is singular".into()))?;
    let ax = a.matmul(x)?;
    if let Some(&c) = zero_cols.iter().find(|&&c| c >= n || !ax.col(c).iter().all(|v| v.is_zero(a.domain()))) {
        return Err(Error::Hypothesis(format!("column {c} of A·X is not zero")));
    }
    let dec = MatrixDecomposition::new(ax, x_inv, complement(n, zero_cols))?;
    if !dec.reconstruct().approx_eq(a) {
        return Err(Error::Verification("sufficiency decomposition does not reconstruct A".into()));
    }
    Ok(dec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixNullityCertificate<T: Ring> {
    /// The completed `V`; columns of `A·V⁻¹` outside the support vanish.
    pub v: Matrix<T>,
    pub v_inv: Matrix<T>,
    pub zero_columns: Vec<usize>,
}

impl<T: Ring> MatrixNullityCertificate<T> {
    pub fn nullity(&self) -> usize {
        self.zero_columns.len()
    }
}

/// Zeroes rows of `V` outside the support and fills them with identity rows that keep the
/// rows independent.
pub fn matrix_nullity_necessity<T: Field>(a: &Matrix<T>, dec: &MatrixDecomposition<T>) -> Result<MatrixNullityCertificate<T>> {
    let n = a.cols();
    let d = a.domain().clone();
    let l = dec.u.cols();
    if l > n || dec.v.cols() != n || dec.u.rows() != a.rows() {
        return Err(Error::Shape(format!("decomposition with ℓ={l} does not fit a {}x{n} matrix", a.rows())));
    }
    if !dec.reconstruct().approx_eq(a) {
        return Err(Error::Precondition("decomposition does not reconstruct A".into()));
    }
    let s = &dec.support;
    let s_rows = Matrix::from_fn(s.len(), n, &d, |r, j| dec.v.get(s[r], j).clone());
    if s_rows.rank() < s.len() {
        return Err(Error::Precondition("rows of V on the support are linearly dependent; the decomposition overstates the rank".into()));
    }
    let mut rows: Vec<Option<Vec<T>>> = vec![None; n];
    for &t in s {
        rows[t] = Some(dec.v.row(t));
    }
    let mut basis: Vec<Vec<T>> = s.iter().map(|&t| dec.v.row(t)).collect();
    let mut next_unit = 0;
    for slot in complement(n, s) {
        loop {
            let e: Vec<T> = (0..n).map(|j| if j == next_unit { T::one(&d) } else { T::zero(&d) }).collect();
            next_unit += 1;
            let mut trial = basis.clone();
            trial.push(e.clone());
            let m = Matrix::from_fn(trial.len(), n, &d, |r, j| trial[r][j].clone());
            if m.rank() == trial.len() {
                basis = trial;
                rows[slot] = Some(e);
                break;
            }
        }
    }
    let v = Matrix::from_fn(n, n, &d, |r, j| rows[r].as_ref().expect("every row filled")[j].clone());
    let v_inv = v.inverse().map_err(|_| Error::Completion("completed V is singular".into()))?;
    let zero_columns = complement(n, s);
    let image = a.matmul(&v_inv)?;
    if zero_columns.iter().any(|&c| !image.col(c).iter().all(|x| x.is_zero(&d))) {
        return Err(Error::Verification("A·V⁻¹ has a nonzero column outside the support".into()));
    }
    Ok(MatrixNullityCertificate { v, v_inv, zero_columns })
}

// ---------------------------------------------------------------- hypermatrices

#[derive(Debug, Clone, PartialEq)]
pub struct NullityCertificate<T: Ring> {
    /// `(X0, X1)`, sending `A` to a hypermatrix with zero depth slices `zero_slices`.
    pub pair: HyperPair<T>,
    /// `(Y0, Y1)`, the inverse of `pair`.
    pub inverse: OuterInversePair<T>,
    pub zero_slices: Vec<usize>,
    /// The certificate is for `Aᵀ^k`, chosen so the depth is the smallest side.
    pub transpose_power: usize,
    /// Largest relative norm among the claimed zero slices (floating domains).
    pub residual: Option<f64>,
}

impl<T: Field> NullityCertificate<T> {
    pub fn nullity(&self) -> usize {
        self.zero_slices.len()
    }

    /// Re-checks invertibility and the zero slices against `a` (before transposing).
    pub fn verify(&self, a: &Hypermatrix<T>) -> Result<()> {
        let rep = pair_invertible(&self.pair);
        if !rep.invertible {
            return Err(Error::Verification(format!("pair not invertible: {}", rep.diagnostic.map(|d| d.to_string()).unwrap_or_default())));
        }
        let target = a.transpose_pow(self.transpose_power);
        let image = self.pair.act(&target)?;
        if let Some(&k) = self.zero_slices.iter().find(|&&k| !slice_is_zero(&image, k, target.frob_norm())) {
            return Err(Error::Verification(format!("depth slice {k} of the image is not zero")));
        }
        Ok(())
    }
}

fn slice_norm<T: Ring>(h: &Hypermatrix<T>, k: usize) -> f64 {
    let [m, n, _] = h.shape();
    (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| h.get(i, j, k).magnitude().powi(2)).sum::<f64>().sqrt()
}

fn slice_is_zero<T: Ring>(h: &Hypermatrix<T>, k: usize, scale: f64) -> bool {
    let d = h.domain();
    match T::tolerance(d) {
        None => {
            let [m, n, _] = h.shape();
            (0..m).all(|i| (0..n).all(|j| h.get(i, j, k).is_zero(d)))
        }
        Some(tol) => slice_norm(h, k) <= tol * (1.0 + scale),
    }
}

fn zero_slices_of<T: Ring>(h: &Hypermatrix<T>, scale: f64) -> Vec<usize> {
    (0..h.shape()[2]).filter(|&k| slice_is_zero(h, k, scale)).collect()
}

/// With `(X0, X1)` invertible and slices `zero_slices` of `Prod(X0, A, X1)` zero,
/// `A = Σ_{t∉zero_slices} Prod_Δ(t)(Y0, Prod(X0, A, X1), Y1)`.
pub fn hyper_nullity_sufficiency<T: Field>(a: &Hypermatrix<T>, pair: &HyperPair<T>, zero_slices: &[usize]) -> Result<DecompositionTriple<T>> {
    let inv = recover_outer_inverse(pair)?;
    let g = pair.act(a)?;
    let p = g.shape()[2];
    if let Some(&k) = zero_slices.iter().find(|&&k| k >= p || !slice_is_zero(&g, k, a.frob_norm())) {
        return Err(Error::Hypothesis(format!("depth slice {k} of Prod(X0, A, X1) is not zero")));
    }
    let dec = DecompositionTriple::new(inv.c, g, inv.d, complement(p, zero_slices))?.normalized();
    if !dec.reconstruct()?.close_to(a) {
        return Err(Error::Verification("sufficiency decomposition does not reconstruct A".into()));
    }
    Ok(dec)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletionOptions {
    /// Random completions tried after the structured ones.
    pub retries: usize,
    /// Upper bound on exhaustive completions over finite fields.
    pub exhaustive_budget: u64,
    pub seed: u64,
}

impl Default for CompletionOptions {
    fn default() -> Self {
        CompletionOptions { retries: 32, exhaustive_budget: 1 << 16, seed: 0 }
    }
}

/// Moves the supported terms to the front and pads with zero terms up to `ℓ = p`.
fn to_square_support<T: Ring>(dec: &DecompositionTriple<T>) -> Result<DecompositionTriple<T>> {
    let [m, n, p] = dec.target_shape();
    let s = dec.support();
    if s.len() > p {
        return Err(Error::Precondition(format!("{} terms exceed the depth {p}", s.len())));
    }
    if dec.ell() == p {
        return Ok(dec.normalized());
    }
    let d = dec.domain();
    let src = |t: usize| s.get(t).copied();
    let x = Hypermatrix::from_fn([m, p, p], d, |i, t, k| src(t).map_or(T::zero(d), |o| dec.x().get(i, o, k).clone()));
    let y = Hypermatrix::from_fn([m, n, p], d, |i, j, t| src(t).map_or(T::zero(d), |o| dec.y().get(i, j, o).clone()));
    let z = Hypermatrix::from_fn([p, n, p], d, |t, j, k| src(t).map_or(T::zero(d), |o| dec.z().get(o, j, k).clone()));
    DecompositionTriple::new(x, y, z, (0..s.len()).collect())
}

fn term_vanishes<T: Ring>(dec: &DecompositionTriple<T>, t: usize) -> bool {
    let (x, y, z) = (dec.x(), dec.y(), dec.z());
    let d = dec.domain();
    let [m, n, p] = dec.target_shape();
    (0..m).all(|i| (0..n).all(|j| (0..p).all(|k| x.get(i, t, k).mul(y.get(i, j, t)).mul(z.get(t, j, k)).is_zero(d))))
}

fn identity_pattern_at<T: Ring>(dec: &DecompositionTriple<T>, t: usize) -> bool {
    let d = dec.domain();
    let [m, n, p] = dec.target_shape();
    let want = |k: usize| if k == t { T::one(d) } else { T::zero(d) };
    (0..m).all(|i| (0..p).all(|k| dec.x().get(i, t, k).approx_eq(&want(k), d)))
        && (0..n).all(|j| (0..p).all(|k| dec.z().get(t, j, k).approx_eq(&want(k), d)))
}

/// A supported term that can be folded into the others, when one is visible without a
/// search: a vanishing term, two terms sharing their `X` and `Z` slices, or two
/// identity-pattern terms whose `V` slices are diagonal rescalings of each other.
fn reducible_term<T: Field>(dec: &DecompositionTriple<T>) -> Option<usize> {
    let s = dec.support();
    if let Some(&t) = s.iter().find(|&&t| term_vanishes(dec, t)) {
        return Some(t);
    }
    let d = dec.domain();
    let [m, n, p] = dec.target_shape();
    for (a, &t0) in s.iter().enumerate() {
        for &t1 in &s[a + 1..] {
            let same_x = (0..m).all(|i| (0..p).all(|k| dec.x().get(i, t0, k).approx_eq(dec.x().get(i, t1, k), d)));
            let same_z = (0..n).all(|j| (0..p).all(|k| dec.z().get(t0, j, k).approx_eq(dec.z().get(t1, j, k), d)));
            if same_x && same_z {
                return Some(t1);
            }
            if T::is_exact(d) && identity_pattern_at(dec, t0) && identity_pattern_at(dec, t1) {
                let slice = |t: usize| Matrix::from_fn(m, n, d, |i, j| dec.y().get(i, j, t).clone());
                if let Ok(fam) = MatrixFamily::new(vec![slice(t0), slice(t1)]) {
                    if let Ok(Some(_)) = pair_dependence_exact(&fam) {
                        return Some(t1);
                    }
                }
            }
        }
    }
    None
}

/// Fills the unused slices of `U` and `W` until `(U, W)` is an invertible pair.
fn complete_pair<T: Field + RandomScalar>(dec: &DecompositionTriple<T>, opts: &CompletionOptions) -> Result<HyperPair<T>> {
    let [m, n, p] = dec.target_shape();
    let d = dec.domain().clone();
    let free = complement(p, dec.support());
    let (ju, jw) = identity_pair::<T>(m, n, p, &d);
    let build = |fu: &dyn Fn(usize, usize, usize) -> T, fw: &dyn Fn(usize, usize, usize) -> T| -> Result<HyperPair<T>> {
        let u = Hypermatrix::from_fn([m, p, p], &d, |i, t, k| if free.contains(&t) { fu(i, t, k) } else { dec.x().get(i, t, k).clone() });
        let w = Hypermatrix::from_fn([p, n, p], &d, |t, j, k| if free.contains(&t) { fw(t, j, k) } else { dec.z().get(t, j, k).clone() });
        HyperPair::new(u, w)
    };
    let id_u = |i: usize, t: usize, k: usize| ju.get(i, t, k).clone();
    let id_w = |t: usize, j: usize, k: usize| jw.get(t, j, k).clone();
    let accept = |pair: &HyperPair<T>| pair_invertible(pair).invertible;

    let pair = build(&id_u, &id_w)?;
    if accept(&pair) {
        return Ok(pair);
    }
    if free.is_empty() {
        return Err(Error::Completion("the supported slices alone do not form an invertible pair".into()));
    }

    let n_free_u = m * free.len() * p;
    let n_free_w = free.len() * n * p;
    if let Some(elems) = T::elements(&d) {
        let q = elems.len() as f64;
        if q.powi((n_free_u + n_free_w) as i32) <= opts.exhaustive_budget as f64 {
            let mut odo = Odometer::new(n_free_u + n_free_w, elems.len() as u16);
            let slot = |t: usize| free.iter().position(|&f| f == t).expect("free slot");
            while let Some(dg) = odo.next() {
                let fu = |i: usize, t: usize, k: usize| elems[dg[(i * free.len() + slot(t)) * p + k] as usize].clone();
                let fw = |t: usize, j: usize, k: usize| elems[dg[n_free_u + (slot(t) * n + j) * p + k] as usize].clone();
                let pair = build(&fu, &fw)?;
                if accept(&pair) {
                    return Ok(pair);
                }
            }
            return Err(Error::Completion(format!("no completion of {} free slices gives an invertible pair", free.len())));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for attempt in 0..opts.retries {
        let ru = Hypermatrix::<T>::from_fn([m, p, p], &d, |_, _, _| T::sample(&d, &mut rng));
        let rw = Hypermatrix::<T>::from_fn([p, n, p], &d, |_, _, _| T::sample(&d, &mut rng));
        let rand_u = |i: usize, t: usize, k: usize| ru.get(i, t, k).clone();
        let rand_w = |t: usize, j: usize, k: usize| rw.get(t, j, k).clone();
        let pair = match attempt % 3 {
            0 => build(&id_u, &rand_w)?,
            1 => build(&rand_u, &id_w)?,
            _ => build(&rand_u, &rand_w)?,
        };
        if accept(&pair) {
            return Ok(pair);
        }
    }
    Err(Error::Completion(format!("no invertible completion after identity pattern and {} random tries", opts.retries)))
}

/// Builds the nullity certificate of a decomposition: `|Z| = p - r`.
pub fn hyper_nullity_necessity<T: Field + RandomScalar>(
    a: &Hypermatrix<T>,
    dec: &DecompositionTriple<T>,
    opts: &CompletionOptions,
) -> Result<NullityCertificate<T>> {
    if dec.target_shape() != a.shape() {
        return Err(Error::Shape(format!("decomposition targets {:?}, A is {:?}", dec.target_shape(), a.shape())));
    }
    if !dec.reconstruct()?.close_to(a) {
        return Err(Error::Precondition("decomposition does not reconstruct A".into()));
    }
    let sq = to_square_support(dec)?;
    if !sq.reconstruct()?.close_to(a) {
        return Err(Error::Verification("zeroing unused slices changed the reconstruction".into()));
    }
    if let Some(t) = reducible_term(&sq) {
        return Err(Error::Precondition(format!("term {t} is reducible; the decomposition overstates the rank")));
    }
    let pair_uw = complete_pair(&sq, opts)?;
    if !bm_product_close(&pair_uw, sq.y(), a)? {
        return Err(Error::Verification("completed pair no longer reconstructs A".into()));
    }
    let inv = recover_outer_inverse(&pair_uw)?;
    let pair = inv.as_pair();
    let inverse = recover_outer_inverse(&pair)?;
    let image = pair.act(a)?;
    let zero_slices = complement(a.shape()[2], sq.support());
    let scale = a.frob_norm();
    if let Some(&k) = zero_slices.iter().find(|&&k| !slice_is_zero(&image, k, scale)) {
        return Err(Error::Verification(format!("depth slice {k} of the image is not zero")));
    }
    let residual =
        T::tolerance(a.domain()).map(|_| zero_slices.iter().map(|&k| slice_norm(&image, k) / scale.max(f64::MIN_POSITIVE)).fold(0.0, f64::max));
    Ok(NullityCertificate { pair, inverse, zero_slices, transpose_power: 0, residual })
}

fn bm_product_close<T: Ring>(pair: &HyperPair<T>, v: &Hypermatrix<T>, a: &Hypermatrix<T>) -> Result<bool> {
    Ok(pair.act(v)?.close_to(a))
}

/// Transpose power that puts the smallest side last.
pub fn depth_min_power(shape: [usize; 3]) -> usize {
    let [m, n, p] = shape;
    if p <= m && p <= n {
        0
    } else if m <= n {
        // Aᵀ has shape (n, p, m).
        1
    } else {
        2
    }
}

fn identity_certificate<T: Field>(a: &Hypermatrix<T>, power: usize) -> Result<NullityCertificate<T>> {
    let [m, n, p] = a.shape();
    let (j0, j1) = identity_pair(m, n, p, a.domain());
    let pair = HyperPair::new(j0, j1)?;
    let inverse = recover_outer_inverse(&pair)?;
    let zero_slices = zero_slices_of(a, a.frob_norm());
    let residual = T::tolerance(a.domain()).map(|_| 0.0);
    Ok(NullityCertificate { pair, inverse, zero_slices, transpose_power: power, residual })
}

/// Via exact BM-rank over GF(q): searches the rank-r decompositions in order for one whose
/// pair completes.
pub fn nullity_via_rank_exact(a: &Hypermatrix<Fp>, budget: u64, opts: &CompletionOptions) -> Result<NullityCertificate<Fp>> {
    let power = depth_min_power(a.shape());
    let at = a.transpose_pow(power);
    let p = at.shape()[2];
    let rank = bm_rank_exhaustive(&at, budget)?;
    let r = rank.r();
    if r == 0 || r == p {
        return identity_certificate(&at, power);
    }
    let mut found = None;
    let mut last_err = None;
    for_each_decomposition(&at, r, budget, |dec| match hyper_nullity_necessity(&at, &dec, opts) {
        Ok(c) => {
            found = Some(c);
            ControlFlow::Break(())
        }
        Err(e) => {
            last_err = Some(e);
            ControlFlow::Continue(())
        }
    })?;
    let mut cert = found.ok_or_else(|| {
        Error::Completion(format!("no rank-{r} decomposition completes to an invertible pair ({})", last_err.map(|e| e.to_string()).unwrap_or_default()))
    })?;
    cert.transpose_power = power;
    Ok(cert)
}

/// Via the numeric generic-rank pipeline.
pub fn nullity_via_rank_numeric(a: &Hypermatrix<Complex>, cfg: &SolverConfig, opts: &CompletionOptions) -> Result<NullityCertificate<Complex>> {
    let power = depth_min_power(a.shape());
    let at = a.transpose_pow(power);
    let report = generic_rank_pipeline(&at, cfg, None)?;
    let mut cert = hyper_nullity_necessity(&at, &report.certificate.triple, opts)?;
    cert.transpose_power = power;
    Ok(cert)
}

/// Via a caller-supplied decomposition of `Aᵀ^k` (k from [`depth_min_power`]).
pub fn nullity_from_decomposition<T: Field + RandomScalar>(
    a: &Hypermatrix<T>,
    dec: &DecompositionTriple<T>,
    opts: &CompletionOptions,
) -> Result<NullityCertificate<T>> {
    let power = depth_min_power(a.shape());
    let at = a.transpose_pow(power);
    if dec.r() == 0 || at.is_zero() {
        return identity_certificate(&at, power);
    }
    let mut cert = hyper_nullity_necessity(&at, dec, opts)?;
    cert.transpose_power = power;
    Ok(cert)
}

/// Every invertible pair of the given shape over GF(q) with its inverse, in lexicographic
/// order of `(X0, X1)`.
pub fn invertible_pairs(m: usize, n: usize, p: usize, field: &crate::scalar::PrimeField, budget: u64) -> Result<Vec<(HyperPair<Fp>, OuterInversePair<Fp>)>> {
    let (na, nb) = (m * p * p, p * n * p);
    crate::util::check_budget(field.q, na + nb, budget)?;
    let mut out = Vec::new();
    let mut odo = Odometer::new(na + nb, field.q);
    while let Some(dg) = odo.next() {
        let vals: Vec<Fp> = dg.iter().map(|&v| field.elem(v as i64)).collect();
        let a = Hypermatrix::new([m, p, p], vals[..na].to_vec(), *field)?;
        let b = Hypermatrix::new([p, n, p], vals[na..].to_vec(), *field)?;
        let pair = HyperPair::new(a, b)?;
        if let Ok(inv) = recover_outer_inverse(&pair) {
            out.push((pair, inv));
        }
    }
    Ok(out)
}

/// Maximises the zero depth slices over `pairs`; the first maximiser wins.
pub fn nullity_over_pairs(a: &Hypermatrix<Fp>, pairs: &[(HyperPair<Fp>, OuterInversePair<Fp>)]) -> Result<NullityCertificate<Fp>> {
    let mut best: Option<(usize, Vec<usize>)> = None;
    for (idx, (pair, _)) in pairs.iter().enumerate() {
        let z = zero_slices_of(&pair.act(a)?, 0.0);
        if best.as_ref().is_none_or(|(_, bz)| z.len() > bz.len()) {
            let full = z.len() == a.shape()[2];
            best = Some((idx, z));
            if full {
                break;
            }
        }
    }
    let (idx, zero_slices) = best.ok_or_else(|| Error::Completion("no invertible pair of this shape".into()))?;
    let (pair, inverse) = pairs[idx].clone();
    Ok(NullityCertificate { pair, inverse, zero_slices, transpose_power: 0, residual: None })
}

/// Exhaustive oracle over all invertible pairs.
pub fn nullity_direct_search(a: &Hypermatrix<Fp>, budget: u64) -> Result<NullityCertificate<Fp>> {
    let power = depth_min_power(a.shape());
    let at = a.transpose_pow(power);
    let [m, n, p] = at.shape();
    let pairs = invertible_pairs(m, n, p, at.domain(), budget)?;
    let mut cert = nullity_over_pairs(&at, &pairs)?;
    cert.transpose_power = power;
    Ok(cert)
}

//! Left-right diagonal dependence of matrix families.
//!
//! Two notions are supported. [`DependenceNotion::Nontrivial`] asks for
//! `Σ_t diag(x_t)·M_t·diag(y_t) = 0` with at least one nonzero term. That notion holds
//! as soon as two members share a nonzero position, so it is weak. The slice reduction
//! and hyperdeterminant results need [`DependenceNotion::Pivoted`]: some nonzero member
//! `M_τ` equals `Σ_{t≠τ} diag(u_t)·M_t·diag(v_t)`, i.e. the witness has `x_τ = -1`,
//! `y_τ = 1`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypermatrix::Hypermatrix;
use crate::matrix::Matrix;
use crate::numeric::{BilinearSystem, Row, SolverConfig, Var};
use crate::rank::DecompositionTriple;
use crate::scalar::{Complex, Field, Fp, PrimeField, Ring};
use crate::util::{check_budget, combinations, Odometer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DependenceNotion {
    Nontrivial,
    Pivoted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFamily<T: Ring> {
    members: Vec<Matrix<T>>,
}

impl<T: Ring> MatrixFamily<T> {
    pub fn new(members: Vec<Matrix<T>>) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::Shape("empty matrix family".into()))?;
        let (m, n) = (first.rows(), first.cols());
        if let Some(bad) = members.iter().position(|x| (x.rows(), x.cols()) != (m, n)) {
            return Err(Error::Shape(format!(
                "member {bad} is {}x{}, expected {m}x{n}",
                members[bad].rows(),
                members[bad].cols()
            )));
        }
        Ok(MatrixFamily { members })
    }

    pub fn from_depth_slices(h: &Hypermatrix<T>) -> Self {
        MatrixFamily { members: h.depth_slices() }
    }

    pub fn members(&self) -> &[Matrix<T>] {
        &self.members
    }
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
    pub fn rows(&self) -> usize {
        self.members[0].rows()
    }
    pub fn cols(&self) -> usize {
        self.members[0].cols()
    }
    pub fn domain(&self) -> &T::Domain {
        self.members[0].domain()
    }

    pub fn subset(&self, idx: &[usize]) -> Self {
        MatrixFamily { members: idx.iter().map(|&i| self.members[i].clone()).collect() }
    }

    pub fn frob_norm(&self) -> f64 {
        self.members.iter().map(|m| m.frob_norm().powi(2)).sum::<f64>().sqrt()
    }
}

/// Row scalings `x_t` (length m) and column scalings `y_t` (length n), one pair per member.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalWitness<T: Ring> {
    pub x: Vec<Vec<T>>,
    pub y: Vec<Vec<T>>,
}

impl<T: Ring> DiagonalWitness<T> {
    pub fn terms(&self, f: &MatrixFamily<T>) -> Result<Vec<Matrix<T>>> {
        if self.x.len() != f.len() || self.y.len() != f.len() {
            return Err(Error::Shape(format!("witness has {} / {} vectors for {} members", self.x.len(), self.y.len(), f.len())));
        }
        f.members
            .iter()
            .zip(self.x.iter().zip(&self.y))
            .map(|(m, (x, y))| {
                if x.len() != m.rows() || y.len() != m.cols() {
                    return Err(Error::Shape(format!(
                        "witness vectors of length {}, {} for a {}x{} member",
                        x.len(),
                        y.len(),
                        m.rows(),
                        m.cols()
                    )));
                }
                Ok(m.scale_rows_cols(x, y))
            })
            .collect()
    }
}

/// `Σ_t diag(x_t)·M_t·diag(y_t)`
pub fn combination_residual<T: Ring>(f: &MatrixFamily<T>, w: &DiagonalWitness<T>) -> Result<Matrix<T>> {
    let terms = w.terms(f)?;
    let mut acc = Matrix::zeros(f.rows(), f.cols(), f.domain());
    for t in &terms {
        acc = acc.add(t)?;
    }
    Ok(acc)
}

/// Nonzero-term test. Over the complex numbers a term must clear a margin well above
/// the residual threshold so that rounding noise cannot pass for a relation.
pub fn is_nontrivial<T: Ring>(f: &MatrixFamily<T>, w: &DiagonalWitness<T>, tol: Option<f64>) -> Result<bool> {
    let terms = w.terms(f)?;
    Ok(match tol {
        None => terms.iter().any(|t| !t.is_zero()),
        Some(tol) => {
            let margin = tol.sqrt() * (1.0 + f.frob_norm());
            terms.iter().any(|t| t.frob_norm() > margin)
        }
    })
}

/// Whether `w` witnesses dependence of `f` under `notion`; returns the residual norm.
pub fn check_witness<T: Ring>(f: &MatrixFamily<T>, w: &DiagonalWitness<T>, notion: DependenceNotion, tol: Option<f64>) -> Result<f64> {
    let res = combination_residual(f, w)?;
    let norm = res.frob_norm();
    let zero = match tol {
        None => res.is_zero(),
        Some(tol) => norm <= tol * (1.0 + f.frob_norm()),
    };
    if !zero {
        return Err(Error::Verification(format!("combination residual {norm:.3e} is not zero")));
    }
    if !is_nontrivial(f, w, tol)? {
        return Err(Error::Verification("every term of the combination vanishes".into()));
    }
    if notion == DependenceNotion::Pivoted && pivot_of(f, w).is_none() {
        return Err(Error::Verification("no member enters with unit scalings".into()));
    }
    Ok(norm)
}

/// Index of a nonzero member whose scalings are `x = -1`, `y = 1`.
pub fn pivot_of<T: Ring>(f: &MatrixFamily<T>, w: &DiagonalWitness<T>) -> Option<usize> {
    let d = f.domain();
    let minus = T::one(d).neg();
    let one = T::one(d);
    (0..f.len()).rev().find(|&t| {
        !f.members[t].is_zero() && w.x[t].iter().all(|a| a.approx_eq(&minus, d)) && w.y[t].iter().all(|b| b.approx_eq(&one, d))
    })
}

fn pivoted_from_parts<T: Ring>(f: &MatrixFamily<T>, tau: usize, u: Vec<Vec<T>>, v: Vec<Vec<T>>) -> DiagonalWitness<T> {
    let d = f.domain();
    let (mut x, mut y) = (u, v);
    x.insert(tau, vec![T::one(d).neg(); f.rows()]);
    y.insert(tau, vec![T::one(d); f.cols()]);
    DiagonalWitness { x, y }
}

// ---------------------------------------------------------------- exhaustive search

/// Exhaustive search over GF(q). `None` means independent over this field.
pub fn is_dependent_exact(f: &MatrixFamily<Fp>, notion: DependenceNotion, budget: u64) -> Result<Option<DiagonalWitness<Fp>>> {
    let field = *f.domain();
    let (p, m, n) = (f.len(), f.rows(), f.cols());
    match notion {
        DependenceNotion::Nontrivial => {
            check_budget(field.q, p * (m + n), budget)?;
            let mut xs = Odometer::new(p * m, field.q);
            while let Some(xd) = xs.next() {
                if xd.iter().all(|&v| v == 0) {
                    continue;
                }
                let x = split(xd, p, m, &field);
                let mut ys = Odometer::new(p * n, field.q);
                while let Some(yd) = ys.next() {
                    let w = DiagonalWitness { x: x.clone(), y: split(yd, p, n, &field) };
                    if combination_residual(f, &w)?.is_zero() && is_nontrivial(f, &w, None)? {
                        return Ok(Some(w));
                    }
                }
            }
            Ok(None)
        }
        DependenceNotion::Pivoted => {
            let taus: Vec<usize> = (0..p).rev().filter(|&t| !f.members[t].is_zero()).collect();
            let per = (p - 1) * (m + n);
            let needed = taus.len() as f64 * (field.q as f64).powi(per as i32);
            if needed > budget as f64 {
                return Err(Error::Budget { needed, budget });
            }
            for tau in taus {
                let mut us = Odometer::new((p - 1) * m, field.q);
                while let Some(ud) = us.next() {
                    let u = split(ud, p - 1, m, &field);
                    let mut vs = Odometer::new((p - 1) * n, field.q);
                    while let Some(vd) = vs.next() {
                        let w = pivoted_from_parts(f, tau, u.clone(), split(vd, p - 1, n, &field));
                        if combination_residual(f, &w)?.is_zero() {
                            return Ok(Some(w));
                        }
                    }
                }
            }
            Ok(None)
        }
    }
}

fn split(digits: &[u16], blocks: usize, len: usize, f: &PrimeField) -> Vec<Vec<Fp>> {
    (0..blocks).map(|b| digits[b * len..(b + 1) * len].iter().map(|&v| f.elem(v as i64)).collect()).collect()
}

/// Exact pivoted test for a pair when one member has no zero entry: `M_τ` is a
/// two-sided diagonal rescaling of the other member iff the entrywise ratio matrix is
/// rank one.
pub fn pair_dependence_exact<T: Field>(f: &MatrixFamily<T>) -> Result<Option<DiagonalWitness<T>>> {
    if f.len() != 2 {
        return Err(Error::Precondition(format!("pair test needs 2 members, got {}", f.len())));
    }
    let d = f.domain().clone();
    let nonzero = |m: &Matrix<T>| m.data().iter().all(|x| !x.is_zero(&d));
    for (base, tau) in [(0usize, 1usize), (1, 0)] {
        let (b, t) = (&f.members[base], &f.members[tau]);
        if !nonzero(b) || t.is_zero() {
            continue;
        }
        let (m, n) = (b.rows(), b.cols());
        let mut ratio = Matrix::zeros(m, n, &d);
        for i in 0..m {
            for j in 0..n {
                ratio.set(i, j, t.get(i, j).div(b.get(i, j), &d)?);
            }
        }
        // Rank one: factor through a nonzero pivot and check every entry.
        let (pi, pj) = (0..m)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !ratio.get(i, j).is_zero(&d))
            .expect("tau member is nonzero");
        let piv_inv = ratio.get(pi, pj).inv(&d)?;
        let u: Vec<T> = (0..m).map(|i| ratio.get(i, pj).clone()).collect();
        let v: Vec<T> = (0..n).map(|j| ratio.get(pi, j).mul(&piv_inv)).collect();
        let rank_one = (0..m).all(|i| (0..n).all(|j| u[i].mul(&v[j]).approx_eq(ratio.get(i, j), &d)));
        if rank_one {
            return Ok(Some(pivoted_from_parts(f, tau, vec![u], vec![v])));
        }
        return Ok(None);
    }
    Err(Error::Precondition("pair test needs one member without zero entries and a nonzero other member".into()))
}

// ---------------------------------------------------------------- numeric search

/// Solves `M_τ = Σ_{t≠τ} diag(u_t)·M_t·diag(v_t)` numerically.
pub(crate) fn pivoted_numeric(
    f: &MatrixFamily<Complex>,
    tau: usize,
    cfg: &SolverConfig,
    rng: &mut ChaCha8Rng,
    restarts: usize,
) -> Option<(Vec<Vec<Complex>>, Vec<Vec<Complex>>, f64)> {
    let (p, m, n) = (f.len(), f.rows(), f.cols());
    let others: Vec<usize> = (0..p).filter(|&t| t != tau).collect();
    let mut sys = BilinearSystem::new(others.len() * m, others.len() * n);
    for i in 0..m {
        for j in 0..n {
            let mut row = Row { c: -f.members[tau].get(i, j), ..Default::default() };
            for (s, &t) in others.iter().enumerate() {
                row.product(*f.members[t].get(i, j), Var::Free(s * m + i), Var::Free(s * n + j));
            }
            sys.rows.push(row);
        }
    }
    let threshold = cfg.tol * (1.0 + f.frob_norm());
    let sol = sys.solve(cfg, rng, threshold, restarts)?;
    let u = (0..others.len()).map(|s| sol.u[s * m..(s + 1) * m].to_vec()).collect();
    let v = (0..others.len()).map(|s| sol.v[s * n..(s + 1) * n].to_vec()).collect();
    Some((u, v, sol.residual))
}

/// Randomized search over the complex numbers. `None` means nothing was found within
/// the budget; it is not a proof of independence.
pub fn is_dependent_numeric(f: &MatrixFamily<Complex>, notion: DependenceNotion, cfg: &SolverConfig) -> Option<DiagonalWitness<Complex>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let tol = cfg.tol;
    let scale = 1.0 + f.frob_norm();
    match notion {
        DependenceNotion::Pivoted => {
            for tau in (0..f.len()).rev() {
                if f.members[tau].frob_norm() <= tol * scale || f.len() < 2 {
                    continue;
                }
                if let Some((u, v, _)) = pivoted_numeric(f, tau, cfg, &mut rng, cfg.restarts) {
                    let w = pivoted_from_parts(f, tau, u, v);
                    if check_witness(f, &w, notion, Some(tol)).is_ok() {
                        return Some(w);
                    }
                }
            }
            None
        }
        DependenceNotion::Nontrivial => nontrivial_numeric(f, cfg, &mut rng),
    }
}

/// Pins `x_τ[i] = y_τ[j] = 1` at a position where `M_τ` is nonzero, which keeps that
/// term away from zero, and solves for every other scaling. Positions where no other
/// member is nonzero cannot cancel and are skipped.
fn nontrivial_numeric(f: &MatrixFamily<Complex>, cfg: &SolverConfig, rng: &mut ChaCha8Rng) -> Option<DiagonalWitness<Complex>> {
    let (p, m, n) = (f.len(), f.rows(), f.cols());
    let floor = cfg.tol.sqrt() * (1.0 + f.frob_norm());
    let mut pins: Vec<(usize, usize, usize)> = Vec::new();
    for tau in 0..p {
        for i in 0..m {
            for j in 0..n {
                let here = f.members[tau].get(i, j).norm();
                let shared = (0..p).any(|t| t != tau && f.members[t].get(i, j).norm() > cfg.tol * (1.0 + f.frob_norm()));
                if here > floor && shared {
                    pins.push((tau, i, j));
                }
            }
        }
    }
    pins.sort_by(|a, b| f.members[b.0].get(b.1, b.2).norm().total_cmp(&f.members[a.0].get(a.1, a.2).norm()));
    if pins.is_empty() {
        return None;
    }
    let one = Complex::new(1.0, 0.0);
    for attempt in 0..cfg.restarts.max(1) {
        let (tau, pi, pj) = pins[attempt % pins.len()];
        let mut n_u = 0;
        let xv: Vec<Vec<Var>> = (0..p)
            .map(|t| {
                (0..m)
                    .map(|i| {
                        if (t, i) == (tau, pi) {
                            Var::Fixed(one)
                        } else {
                            n_u += 1;
                            Var::Free(n_u - 1)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut n_v = 0;
        let yv: Vec<Vec<Var>> = (0..p)
            .map(|t| {
                (0..n)
                    .map(|j| {
                        if (t, j) == (tau, pj) {
                            Var::Fixed(one)
                        } else {
                            n_v += 1;
                            Var::Free(n_v - 1)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut sys = BilinearSystem::new(n_u, n_v);
        for a in 0..m {
            for b in 0..n {
                let mut row = Row::default();
                for t in 0..p {
                    let c = *f.members[t].get(a, b);
                    if c != Complex::new(0.0, 0.0) {
                        row.product(c, xv[t][a], yv[t][b]);
                    }
                }
                sys.rows.push(row);
            }
        }
        let threshold = cfg.tol * (1.0 + f.frob_norm());
        if let Some(sol) = sys.solve(cfg, rng, threshold, 1) {
            let pick = |vars: &Vec<Vec<Var>>, vals: &[Complex]| -> Vec<Vec<Complex>> {
                vars.iter()
                    .map(|row| {
                        row.iter()
                            .map(|v| match v {
                                Var::Free(ix) => vals[*ix],
                                Var::Fixed(c) => *c,
                            })
                            .collect()
                    })
                    .collect()
            };
            let w = DiagonalWitness { x: pick(&xv, &sol.u), y: pick(&yv, &sol.v) };
            if check_witness(f, &w, DependenceNotion::Nontrivial, Some(cfg.tol)).is_ok() {
                return Some(w);
            }
        }
    }
    None
}

// ---------------------------------------------------------------- one elimination round

/// The map `x ↦ diag(left)·x·diag(right)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagTerm<T: Ring> {
    pub left: Vec<T>,
    pub right: Vec<T>,
}

/// `diag(left)·c_source·diag(right)`
#[derive(Debug, Clone, PartialEq)]
pub struct RhsTerm<T: Ring> {
    pub left: Vec<T>,
    pub source: usize,
    pub right: Vec<T>,
}

/// Rows `Σ_t coeff[k][t](x_t) = rhs[k]` whose coefficients are sums of two-sided diagonal
/// maps acting on the m×n unknowns `x_t`. The right-hand sides refer to the original
/// constants `c_source`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSystem<T: Ring> {
    pub m: usize,
    pub n: usize,
    pub coeffs: Vec<Vec<Vec<DiagTerm<T>>>>,
    pub rhs: Vec<Vec<RhsTerm<T>>>,
    pub domain: T::Domain,
}

fn hadamard<T: Ring>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.mul(y)).collect()
}

fn multiplier<T: Ring>(terms: &[DiagTerm<T>], m: usize, n: usize, d: &T::Domain) -> Matrix<T> {
    Matrix::from_fn(m, n, d, |i, j| terms.iter().fold(T::zero(d), |acc, t| acc.add(&t.left[i].mul(&t.right[j]))))
}

impl<T: Ring> DiagonalSystem<T> {
    /// The system `H[:,:,k] = Σ_t diag(X[:,t,k])·x_t·diag(Z[t,:,k])` whose solution is
    /// `x_t = Y[:,:,t]` for `H = Prod(X, Y, Z)`.
    pub fn from_triple(x: &Hypermatrix<T>, y: &Hypermatrix<T>, z: &Hypermatrix<T>) -> Result<Self> {
        let [m, n, p, l] = crate::product::conformable(x, y, z)?;
        let d = x.domain().clone();
        let coeffs = (0..p)
            .map(|k| {
                (0..l)
                    .map(|t| {
                        vec![DiagTerm {
                            left: (0..m).map(|i| x.get(i, t, k).clone()).collect(),
                            right: (0..n).map(|j| z.get(t, j, k).clone()).collect(),
                        }]
                    })
                    .collect()
            })
            .collect();
        let rhs = (0..p).map(|k| vec![RhsTerm { left: vec![T::one(&d); m], source: k, right: vec![T::one(&d); n] }]).collect();
        Ok(DiagonalSystem { m, n, coeffs, rhs, domain: d })
    }

    pub fn rows(&self) -> usize {
        self.coeffs.len()
    }

    /// The entrywise multiplier `H` with `coeff[k][t](x) = H ∘ x`.
    pub fn hadamard_multiplier(&self, k: usize, t: usize) -> Matrix<T> {
        multiplier(&self.coeffs[k][t], self.m, self.n, &self.domain)
    }

    /// Per-row residuals `Σ_t coeff(x_t) - rhs` for unknowns `x` and constants `c`.
    pub fn residual(&self, x: &[Matrix<T>], c: &[Matrix<T>]) -> Result<Vec<Matrix<T>>> {
        let d = &self.domain;
        (0..self.rows())
            .map(|k| {
                let mut acc = Matrix::zeros(self.m, self.n, d);
                for (t, terms) in self.coeffs[k].iter().enumerate() {
                    for term in terms {
                        acc = acc.add(&x[t].scale_rows_cols(&term.left, &term.right))?;
                    }
                }
                for term in &self.rhs[k] {
                    acc = acc.sub(&c[term.source].scale_rows_cols(&term.left, &term.right))?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// One division-free elimination of `x_{t*}` using row `k*`:
    /// `R_k ← -A[t*,k]·R_{k*}·B[t*,k] + A[t*,k*]·R_k·B[t*,k*]` for every `k ≠ k*`.
    ///
    /// Bounded on [`Ring`] only, so no scalar division can happen.
    pub fn eliminate_round(&self, t_star: usize, k_star: usize) -> Result<Self> {
        if k_star >= self.rows() || t_star >= self.coeffs[k_star].len() {
            return Err(Error::Index(format!("pivot ({t_star}, {k_star}) outside the system")));
        }
        let piv = match self.coeffs[k_star][t_star].as_slice() {
            [single] => single.clone(),
            _ => return Err(Error::Precondition("pivot coefficient must be a single diagonal pair".into())),
        };
        if multiplier(std::slice::from_ref(&piv), self.m, self.n, &self.domain).is_zero() {
            return Err(Error::Precondition(format!("degenerate pivot ({t_star}, {k_star}): coefficient diagonals multiply to zero")));
        }
        let mut out = self.clone();
        for k in 0..self.rows() {
            if k == k_star {
                continue;
            }
            let (a, b) = match self.coeffs[k][t_star].as_slice() {
                [single] => (single.left.clone(), single.right.clone()),
                _ => return Err(Error::Precondition(format!("row {k} has a compound coefficient on the pivot variable"))),
            };
            let minus_a: Vec<T> = a.iter().map(|v| v.neg()).collect();
            for t in 0..self.coeffs[k].len() {
                let mut terms: Vec<DiagTerm<T>> = self.coeffs[k_star][t]
                    .iter()
                    .map(|c| DiagTerm { left: hadamard(&minus_a, &c.left), right: hadamard(&c.right, &b) })
                    .collect();
                terms.extend(
                    self.coeffs[k][t].iter().map(|c| DiagTerm { left: hadamard(&piv.left, &c.left), right: hadamard(&c.right, &piv.right) }),
                );
                out.coeffs[k][t] = terms;
            }
            let mut rhs: Vec<RhsTerm<T>> = self.rhs[k_star]
                .iter()
                .map(|r| RhsTerm { left: hadamard(&minus_a, &r.left), source: r.source, right: hadamard(&r.right, &b) })
                .collect();
            rhs.extend(
                self.rhs[k].iter().map(|r| RhsTerm { left: hadamard(&piv.left, &r.left), source: r.source, right: hadamard(&r.right, &piv.right) }),
            );
            out.rhs[k] = rhs;
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------- low-rank relation

#[derive(Debug, Clone, PartialEq)]
pub enum LowRankRelation<T: Ring> {
    /// A depth slice is already zero.
    ZeroSlice { k: usize },
    /// Depth slices `slices` admit `witness`. Term `q` of the witness scales depth slice
    /// `terms[q]`; the `t`-th slice of the subset carries `ℓ+1-t` terms.
    Dependent { slices: Vec<usize>, terms: Vec<usize>, witness: DiagonalWitness<T>, residual: f64 },
}

/// For `H = Prod(D)` with contracted dimension `ℓ < min(m,n,p)`, searches the
/// `(ℓ+1)`-subsets of depth slices for a relation
/// `0 = Σ_t Σ_{i≤ℓ-t} diag(x_it)·M_t·diag(y_ti)`. `search` receives the family in which
/// each `M_t` is repeated once per term, so a pivoted search leaves the last slice with
/// unit scalings.
pub fn low_rank_relation<T: Field>(
    h: &Hypermatrix<T>,
    dec: &DecompositionTriple<T>,
    mut search: impl FnMut(&MatrixFamily<T>) -> Result<Option<DiagonalWitness<T>>>,
) -> Result<LowRankRelation<T>> {
    let [m, n, p] = h.shape();
    let l = dec.ell();
    if l >= m.min(n).min(p) {
        return Err(Error::Precondition(format!("contracted dimension {l} is not below min{:?}", h.shape())));
    }
    let rec = dec.reconstruct()?;
    if !rec.close_to(h) {
        return Err(Error::Precondition(format!("decomposition misses its target by {:.3e}", rec.distance(h))));
    }
    let fam = MatrixFamily::from_depth_slices(h);
    if let Some(k) = (0..p).find(|&k| fam.members[k].is_zero()) {
        return Ok(LowRankRelation::ZeroSlice { k });
    }
    for subset in combinations(p, l + 1) {
        let terms: Vec<usize> = subset.iter().enumerate().flat_map(|(t, &k)| std::iter::repeat_n(k, l + 1 - t)).collect();
        let sub = fam.subset(&terms);
        if let Some(w) = search(&sub)? {
            let residual = combination_residual(&sub, &w)?.frob_norm();
            return Ok(LowRankRelation::Dependent { slices: subset, terms, witness: w, residual });
        }
    }
    Err(Error::Verification(format!("no dependent {}-subset of depth slices found", l + 1)))
}

/// Convenience search closures.
pub fn numeric_search(notion: DependenceNotion, cfg: SolverConfig) -> impl FnMut(&MatrixFamily<Complex>) -> Result<Option<DiagonalWitness<Complex>>> {
    move |f| Ok(is_dependent_numeric(f, notion, &cfg))
}

pub fn exhaustive_search(notion: DependenceNotion, budget: u64) -> impl FnMut(&MatrixFamily<Fp>) -> Result<Option<DiagonalWitness<Fp>>> {
    move |f| is_dependent_exact(f, notion, budget)
}

// ---------------------------------------------------------------- determinantal constraints

/// The 2×2 minor `g[i0,j0]·g[i1,j1] - g[i0,j1]·g[i1,j0]` of
/// `g[i,j] = B[i,j,r]/B[i,j,0] + Σ_{0<t<r} X[i,t,0]·(B[i,j,t]/B[i,j,0])·Y[t,j,0]`.
pub fn determinantal_residual<T: Field>(
    b: &Hypermatrix<T>,
    x: &Hypermatrix<T>,
    y: &Hypermatrix<T>,
    rows: (usize, usize),
    cols: (usize, usize),
) -> Result<T> {
    let [m, n, r1] = b.shape();
    if r1 < 2 {
        return Err(Error::Shape(format!("need r+1 >= 2 depth slices, got {r1}")));
    }
    let r = r1 - 1;
    if x.shape() != [m, r, 1] || y.shape() != [r, n, 1] {
        return Err(Error::Shape(format!("X must be {:?} and Y {:?}, got {:?} and {:?}", [m, r, 1], [r, n, 1], x.shape(), y.shape())));
    }
    let (i0, i1) = rows;
    let (j0, j1) = cols;
    if !(i0 < i1 && i1 < m && j0 < j1 && j1 < n) {
        return Err(Error::Index(format!("rows {rows:?} / cols {cols:?} must be increasing and within {m}x{n}")));
    }
    let d = b.domain();
    for i in 0..m {
        for j in 0..n {
            if b.get(i, j, 0).is_zero(d) {
                return Err(Error::Precondition(format!("first depth slice vanishes at ({i},{j})")));
            }
        }
    }
    let g = |i: usize, j: usize| -> Result<T> {
        let base = b.get(i, j, 0);
        let mut acc = b.get(i, j, r).div(base, d)?;
        for t in 1..r {
            acc = acc.add(&x.get(i, t, 0).mul(&b.get(i, j, t).div(base, d)?).mul(y.get(t, j, 0)));
        }
        Ok(acc)
    };
    Ok(g(i0, j0)?.mul(&g(i1, j1)?).sub(&g(i0, j1)?.mul(&g(i1, j0)?)))
}

/// `(m+n)·(r-1) < (m-1)·(n-1)`
pub fn rank_feasibility(m: usize, n: usize, r: usize) -> Result<bool> {
    if r < 1 || r >= m.min(n) {
        return Err(Error::Precondition(format!("need 1 <= r < min(m, n), got m={m}, n={n}, r={r}")));
    }
    Ok((m + n) * (r - 1) < (m - 1) * (n - 1))
}

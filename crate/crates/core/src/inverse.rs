//! Inverse pairs: `(C, D)` inverts `(A, B)` when `Prod(C, Prod(A, X, B), D) = X` for all `X`.
//!
//! The sandwich action of a pair on `X[i,j,:]` is the p×p matrix
//! `F_ij[t,s] = A[i,s,t]·B[s,j,t]`, so composing two pairs multiplies these blocks. An
//! inverse pair exists iff every block is invertible and, for each `(t,k)`, the m×n matrix
//! `G_tk[i,j] = F_ij⁻¹[k,t]` factors as `c_i·d_j`.

use crate::error::{Error, Result};
use crate::hypermatrix::Hypermatrix;
use crate::matrix::Matrix;
use crate::product::bm_product;
use crate::scalar::{Field, Ring};

/// `A: (m,p,p)`, `B: (p,n,p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperPair<T: Ring> {
    pub a: Hypermatrix<T>,
    pub b: Hypermatrix<T>,
}

/// The inverse `(C, D)` of a pair. `gauge` records how the per-block rank-one factors
/// were normalised.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterInversePair<T: Ring> {
    pub c: Hypermatrix<T>,
    pub d: Hypermatrix<T>,
    pub gauge: Gauge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// Entry-wise inverse of a scaling pair.
    Scaling,
    /// First nonzero `d` entry of every `(t,k)` factor is one, scanning `j` upwards.
    FirstNonzeroD,
}

impl<T: Ring> HyperPair<T> {
    pub fn new(a: Hypermatrix<T>, b: Hypermatrix<T>) -> Result<Self> {
        let [_, p0, p1] = a.shape();
        let [p2, _, p3] = b.shape();
        if p0 != p1 || p1 != p2 || p2 != p3 {
            return Err(Error::Shape(format!("pair needs (m,p,p) and (p,n,p), got {:?} and {:?}", a.shape(), b.shape())));
        }
        Ok(HyperPair { a, b })
    }

    pub fn m(&self) -> usize {
        self.a.shape()[0]
    }
    pub fn n(&self) -> usize {
        self.b.shape()[1]
    }
    pub fn p(&self) -> usize {
        self.a.shape()[1]
    }
    pub fn domain(&self) -> &T::Domain {
        self.a.domain()
    }

    /// `Prod(A, X, B)`
    pub fn act(&self, x: &Hypermatrix<T>) -> Result<Hypermatrix<T>> {
        bm_product(&self.a, x, &self.b)
    }
}

impl<T: Ring> OuterInversePair<T> {
    pub fn as_pair(&self) -> HyperPair<T> {
        HyperPair { a: self.c.clone(), b: self.d.clone() }
    }

    /// `Prod(C, Y, D)`
    pub fn act(&self, y: &Hypermatrix<T>) -> Result<Hypermatrix<T>> {
        bm_product(&self.c, y, &self.d)
    }
}

/// `A[i,t,k] = α[i,t]·[t=k]`, `B[t,j,k] = β[t,j]·[t=k]`, acting as
/// `Prod(A,X,B)[i,j,k] = α[i,k]·X[i,j,k]·β[k,j]`.
pub fn scaling_pair<T: Ring>(alpha: &Matrix<T>, beta: &Matrix<T>) -> Result<HyperPair<T>> {
    let (m, p) = (alpha.rows(), alpha.cols());
    let n = beta.cols();
    if beta.rows() != p {
        return Err(Error::Shape(format!("alpha is {m}x{p} but beta is {}x{n}", beta.rows())));
    }
    let d = alpha.domain();
    if alpha.data().iter().chain(beta.data()).any(|v| v.is_zero(d)) {
        return Err(Error::Precondition("scaling entries must be nonzero".into()));
    }
    let a = Hypermatrix::from_fn([m, p, p], d, |i, t, k| if t == k { alpha.get(i, t).clone() } else { T::zero(d) });
    let b = Hypermatrix::from_fn([p, n, p], d, |t, j, k| if t == k { beta.get(t, j).clone() } else { T::zero(d) });
    HyperPair::new(a, b)
}

/// Inverts a scaling pair entry by entry on its diagonal support.
pub fn scaling_inverse<T: Field>(pair: &HyperPair<T>) -> Result<OuterInversePair<T>> {
    let d = pair.domain().clone();
    let (a, b) = (&pair.a, &pair.b);
    let [m, p, _] = a.shape();
    let n = pair.n();
    let check = |h: &Hypermatrix<T>, name: &str, on: &dyn Fn(usize, usize, usize) -> bool| -> Result<()> {
        let [x, y, z] = h.shape();
        for i in 0..x {
            for j in 0..y {
                for k in 0..z {
                    let zero = h.get(i, j, k).is_zero(&d);
                    if on(i, j, k) == zero {
                        return Err(Error::Precondition(format!(
                            "{name}[{i},{j},{k}] breaks the scaling pattern ({})",
                            if zero { "zero on the diagonal" } else { "nonzero off the diagonal" }
                        )));
                    }
                }
            }
        }
        Ok(())
    };
    check(a, "A", &|_, t, k| t == k)?;
    check(b, "B", &|t, _, k| t == k)?;
    let mut c = Hypermatrix::zeros([m, p, p], &d);
    let mut dd = Hypermatrix::zeros([p, n, p], &d);
    for t in 0..p {
        for i in 0..m {
            c.set(i, t, t, a.get(i, t, t).inv(&d)?);
        }
        for j in 0..n {
            dd.set(t, j, t, b.get(t, j, t).inv(&d)?);
        }
    }
    Ok(OuterInversePair { c, d: dd, gauge: Gauge::Scaling })
}

/// Block-diagonal `(m·n·p)²` matrix, stored as its m·n dense p×p blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatteningMatrix<T: Ring> {
    m: usize,
    n: usize,
    p: usize,
    blocks: Vec<Matrix<T>>,
}

impl<T: Ring> FlatteningMatrix<T> {
    pub fn block(&self, i: usize, j: usize) -> &Matrix<T> {
        &self.blocks[i * self.n + j]
    }
    pub fn blocks(&self) -> &[Matrix<T>] {
        &self.blocks
    }
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.p)
    }

    /// Entry of the full matrix; zero outside the blocks.
    pub fn entry(&self, row: usize, col: usize) -> T {
        if row / self.p != col / self.p {
            return T::zero(self.blocks[0].domain());
        }
        // Blocks are stored in (i, j) order, which is also the order of row / p.
        self.blocks[row / self.p].get(row % self.p, col % self.p).clone()
    }
}

/// `F[i·n·p + j·p + t, i·n·p + j·p + s] = A[i,s,t]·B[s,j,t]`
pub fn flatten<T: Ring>(pair: &HyperPair<T>) -> FlatteningMatrix<T> {
    let (m, n, p) = (pair.m(), pair.n(), pair.p());
    let d = pair.domain();
    let blocks = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| Matrix::from_fn(p, p, d, |t, s| pair.a.get(i, s, t).mul(pair.b.get(s, j, t))))
        .collect();
    FlatteningMatrix { m, n, p, blocks }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    SingularBlock { i: usize, j: usize },
    /// `G_tk` has a nonzero 2×2 minor on rows `rows` and columns `cols`.
    NotFactorable { t: usize, k: usize, rows: (usize, usize), cols: (usize, usize) },
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::SingularBlock { i, j } => write!(f, "block ({i},{j}) of the flattening matrix is singular"),
            Diagnostic::NotFactorable { t, k, rows, cols } => {
                write!(f, "G[{t},{k}] is not rank one: minor on rows {rows:?}, cols {cols:?} is nonzero")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvertibilityReport {
    pub invertible: bool,
    pub diagnostic: Option<Diagnostic>,
}

fn minor_vanishes<T: Ring>(g: &Matrix<T>, r: (usize, usize), c: (usize, usize)) -> bool {
    let d = g.domain();
    let lhs = g.get(r.0, c.0).mul(g.get(r.1, c.1));
    let rhs = g.get(r.0, c.1).mul(g.get(r.1, c.0));
    match T::tolerance(d) {
        None => lhs.approx_eq(&rhs, d),
        Some(tol) => lhs.sub(&rhs).magnitude() <= tol * (1.0 + lhs.magnitude() + rhs.magnitude()),
    }
}

fn first_bad_minor<T: Ring>(g: &Matrix<T>) -> Option<((usize, usize), (usize, usize))> {
    let (m, n) = (g.rows(), g.cols());
    for i0 in 0..m {
        for i1 in i0 + 1..m {
            for j0 in 0..n {
                for j1 in j0 + 1..n {
                    if !minor_vanishes(g, (i0, i1), (j0, j1)) {
                        return Some(((i0, i1), (j0, j1)));
                    }
                }
            }
        }
    }
    None
}

fn block_inverses<T: Field>(f: &FlatteningMatrix<T>) -> std::result::Result<Vec<Matrix<T>>, Diagnostic> {
    let n = f.n;
    f.blocks
        .iter()
        .enumerate()
        .map(|(b, blk)| blk.inverse().map_err(|_| Diagnostic::SingularBlock { i: b / n, j: b % n }))
        .collect()
}

/// `G_tk[i,j] = F_ij⁻¹[k,t]`
fn g_matrix<T: Ring>(inv: &[Matrix<T>], m: usize, n: usize, t: usize, k: usize) -> Matrix<T> {
    Matrix::from_fn(m, n, inv[0].domain(), |i, j| inv[i * n + j].get(k, t).clone())
}

pub fn pair_invertible<T: Field>(pair: &HyperPair<T>) -> InvertibilityReport {
    match analyse(pair) {
        Ok(_) => InvertibilityReport { invertible: true, diagnostic: None },
        Err(d) => InvertibilityReport { invertible: false, diagnostic: Some(d) },
    }
}

fn analyse<T: Field>(pair: &HyperPair<T>) -> std::result::Result<Vec<Matrix<T>>, Diagnostic> {
    let f = flatten(pair);
    let inv = block_inverses(&f)?;
    let (m, n, p) = (f.m, f.n, f.p);
    for t in 0..p {
        for k in 0..p {
            if let Some((rows, cols)) = first_bad_minor(&g_matrix(&inv, m, n, t, k)) {
                return Err(Diagnostic::NotFactorable { t, k, rows, cols });
            }
        }
    }
    Ok(inv)
}

/// Solves `C[i,t,k]·D[t,j,k] = G_tk[i,j]` block by block.
pub fn recover_outer_inverse<T: Field>(pair: &HyperPair<T>) -> Result<OuterInversePair<T>> {
    let inv = analyse(pair).map_err(|e| Error::NotInvertible(e.to_string()))?;
    let (m, n, p) = (pair.m(), pair.n(), pair.p());
    let d = pair.domain().clone();
    let mut c = Hypermatrix::zeros([m, p, p], &d);
    let mut dd = Hypermatrix::zeros([p, n, p], &d);
    for t in 0..p {
        for k in 0..p {
            let g = g_matrix(&inv, m, n, t, k);
            let Some(j0) = (0..n).find(|&j| (0..m).any(|i| !g.get(i, j).is_zero(&d))) else {
                continue;
            };
            // Largest entry of the pivot column keeps the numeric division well posed.
            let i0 = (0..m).max_by(|&a, &b| g.get(a, j0).magnitude().total_cmp(&g.get(b, j0).magnitude())).expect("m > 0");
            let piv = g.get(i0, j0).inv(&d)?;
            for i in 0..m {
                c.set(i, t, k, g.get(i, j0).clone());
            }
            for j in 0..n {
                dd.set(t, j, k, if j == j0 { T::one(&d) } else { g.get(i0, j).mul(&piv) });
            }
            for i in 0..m {
                for j in 0..n {
                    let prod = c.get(i, t, k).mul(dd.get(t, j, k));
                    let ok = match T::tolerance(&d) {
                        None => prod.approx_eq(g.get(i, j), &d),
                        Some(tol) => prod.sub(g.get(i, j)).magnitude() <= tol * (1.0 + g.get(i, j).magnitude()),
                    };
                    if !ok {
                        return Err(Error::NotInvertible(format!("G[{t},{k}] does not factor at ({i},{j})")));
                    }
                }
            }
        }
    }
    Ok(OuterInversePair { c, d: dd, gauge: Gauge::FirstNonzeroD })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    /// Max over probes of `‖Prod(C, Prod(A,X,B), D) - X‖`.
    pub residual: f64,
    /// Max residual of `Prod(Prod(Xᵀ,Bᵀ,Aᵀ), Dᵀ, Cᵀ) = Xᵀ`.
    pub transpose_residual: f64,
    /// Max residual of `Prod(Dᵀ², Cᵀ², Prod(Bᵀ²,Aᵀ²,Xᵀ²)) = Xᵀ²`.
    pub transpose2_residual: f64,
    /// Every identity held under the domain's equality.
    pub holds: bool,
}

pub fn sandwich_check<T: Ring>(pair: &HyperPair<T>, inv: &OuterInversePair<T>, probes: &[Hypermatrix<T>]) -> Result<SandwichReport> {
    let (a, b, c, d) = (&pair.a, &pair.b, &inv.c, &inv.d);
    let (at, bt, ct, dt) = (a.transpose(), b.transpose(), c.transpose(), d.transpose());
    let (a2, b2, c2, d2) = (a.transpose_pow(2), b.transpose_pow(2), c.transpose_pow(2), d.transpose_pow(2));
    let mut rep = SandwichReport { residual: 0.0, transpose_residual: 0.0, transpose2_residual: 0.0, holds: true };
    for x in probes {
        let direct = bm_product(c, &bm_product(a, x, b)?, d)?;
        let xt = x.transpose();
        let first = bm_product(&bm_product(&xt, &bt, &at)?, &dt, &ct)?;
        let x2 = x.transpose_pow(2);
        let second = bm_product(&d2, &c2, &bm_product(&b2, &a2, &x2)?)?;
        rep.residual = rep.residual.max(direct.distance(x));
        rep.transpose_residual = rep.transpose_residual.max(first.distance(&xt));
        rep.transpose2_residual = rep.transpose2_residual.max(second.distance(&x2));
        rep.holds &= direct.close_to(x) && first.close_to(&xt) && second.close_to(&x2);
    }
    Ok(rep)
}

/// The m·n·p unit hypermatrices; the sandwich map is linear, so they suffice as probes.
pub fn unit_probes<T: Ring>(shape: [usize; 3], d: &T::Domain) -> Vec<Hypermatrix<T>> {
    let [m, n, p] = shape;
    (0..m * n * p)
        .map(|e| Hypermatrix::zeros(shape, d).with_entry([e / (n * p), (e / p) % n, e % p], T::one(d)).expect("in range"))
        .collect()
}

//! The ternary product, its background-weighted generalization, outer products and the
//! identity pair.

use crate::error::{Error, Result};
use crate::hypermatrix::Hypermatrix;
use crate::scalar::Ring;

/// Checks `a0: (n0,l,n2)`, `a1: (n0,n1,l)`, `a2: (l,n1,n2)` and returns `[n0,n1,n2,l]`.
pub fn conformable<T: Ring>(a0: &Hypermatrix<T>, a1: &Hypermatrix<T>, a2: &Hypermatrix<T>) -> Result<[usize; 4]> {
    let [n0, l, n2] = a0.shape();
    let n1 = a1.shape()[1];
    let want1 = [n0, n1, l];
    if a1.shape() != want1 {
        return Err(Error::Conformability(format!(
            "second leg: expected shape {want1:?} to match first leg {:?}, found {:?}",
            a0.shape(),
            a1.shape()
        )));
    }
    let want2 = [l, n1, n2];
    if a2.shape() != want2 {
        return Err(Error::Conformability(format!("third leg: expected shape {want2:?}, found {:?}", a2.shape())));
    }
    if a0.domain() != a1.domain() || a0.domain() != a2.domain() {
        return Err(Error::Conformability("legs live in different scalar domains".into()));
    }
    Ok([n0, n1, n2, l])
}

/// `Prod(a0,a1,a2)[i0,i1,i2] = Σ_j a0[i0,j,i2] · a1[i0,i1,j] · a2[j,i1,i2]`
pub fn bm_product<T: Ring>(a0: &Hypermatrix<T>, a1: &Hypermatrix<T>, a2: &Hypermatrix<T>) -> Result<Hypermatrix<T>> {
    let [n0, n1, n2, l] = conformable(a0, a1, a2)?;
    let d = a0.domain();
    Ok(Hypermatrix::from_fn([n0, n1, n2], d, |i0, i1, i2| {
        let mut acc = T::zero(d);
        for j in 0..l {
            acc = acc.add(&a0.get(i0, j, i2).mul(a1.get(i0, i1, j)).mul(a2.get(j, i1, i2)));
        }
        acc
    }))
}

pub fn general_bm_product<T: Ring>(
    a0: &Hypermatrix<T>,
    a1: &Hypermatrix<T>,
    a2: &Hypermatrix<T>,
    background: &Hypermatrix<T>,
) -> Result<Hypermatrix<T>> {
    let [n0, n1, n2, l] = conformable(a0, a1, a2)?;
    if background.shape() != [l, l, l] {
        return Err(Error::Conformability(format!(
            "background: expected cubic side {l}, found {:?}",
            background.shape()
        )));
    }
    let d = a0.domain();
    let support: Vec<([usize; 3], &T)> = (0..l)
        .flat_map(|x| (0..l).flat_map(move |y| (0..l).map(move |z| [x, y, z])))
        .map(|[x, y, z]| ([x, y, z], background.get(x, y, z)))
        .filter(|(_, b)| !b.is_zero(d))
        .collect();
    Ok(Hypermatrix::from_fn([n0, n1, n2], d, |i0, i1, i2| {
        let mut acc = T::zero(d);
        for ([j0, j1, j2], b) in &support {
            acc = acc.add(&a0.get(i0, *j0, i2).mul(a1.get(i0, i1, *j1)).mul(a2.get(*j2, i1, i2)).mul(b));
        }
        acc
    }))
}

pub fn kronecker_delta<T: Ring>(n: usize, d: &T::Domain) -> Hypermatrix<T> {
    Hypermatrix::from_fn([n, n, n], d, |i, j, k| if i == j && j == k { T::one(d) } else { T::zero(d) })
}

/// Single 1 at `(t,t,t)`.
pub fn delta_t<T: Ring>(n: usize, t: usize, d: &T::Domain) -> Result<Hypermatrix<T>> {
    if t >= n {
        return Err(Error::Index(format!("delta index {t} outside side {n}")));
    }
    Ok(Hypermatrix::from_fn([n, n, n], d, |i, j, k| if i == t && j == t && k == t { T::one(d) } else { T::zero(d) }))
}

/// `(J0, J1)` with `J0: (m,p,p)`, `J0[i,t,k] = [t=k]` and `J1: (p,n,p)`, `J1[t,j,k] = [t=k]`.
pub fn identity_pair<T: Ring>(m: usize, n: usize, p: usize, d: &T::Domain) -> (Hypermatrix<T>, Hypermatrix<T>) {
    let pick = |t: usize, k: usize| if t == k { T::one(d) } else { T::zero(d) };
    (Hypermatrix::from_fn([m, p, p], d, |_, t, k| pick(t, k)), Hypermatrix::from_fn([p, n, p], d, |t, _, k| pick(t, k)))
}

/// Product of a column slice `(n0,1,n2)`, a depth slice `(n0,n1,1)` and a row slice `(1,n1,n2)`.
pub fn outer_product<T: Ring>(col: &Hypermatrix<T>, depth: &Hypermatrix<T>, row: &Hypermatrix<T>) -> Result<Hypermatrix<T>> {
    if col.shape()[1] != 1 {
        return Err(Error::Conformability(format!("first leg must be a column slice, found {:?}", col.shape())));
    }
    bm_product(col, depth, row)
}

/// Slices `(X, Y, Z)` whose outer product is `x ⊗ y ⊗ z`.
pub fn cp_embed<T: Ring>(x: &[T], y: &[T], z: &[T], d: &T::Domain) -> (Hypermatrix<T>, Hypermatrix<T>, Hypermatrix<T>) {
    let (m, n, p) = (x.len(), y.len(), z.len());
    (
        Hypermatrix::from_fn([m, 1, p], d, |i, _, _| x[i].clone()),
        Hypermatrix::from_fn([m, n, 1], d, |_, j, _| y[j].clone()),
        Hypermatrix::from_fn([1, n, p], d, |_, _, k| z[k].clone()),
    )
}

/// `Prod(a, x, b) - c` for `a: (1,l,n2)`, `x: (1,1,l)`, `b: (l,1,n2)`, `c: (1,1,n2)`.
pub fn general_linear_residual<T: Ring>(
    a: &Hypermatrix<T>,
    x: &Hypermatrix<T>,
    b: &Hypermatrix<T>,
    c: &Hypermatrix<T>,
) -> Result<Hypermatrix<T>> {
    if a.shape()[0] != 1 || x.shape()[..2] != [1, 1] {
        return Err(Error::Conformability(format!(
            "linear system legs must have shapes (1,l,n2), (1,1,l), (l,1,n2); found {:?}, {:?}",
            a.shape(),
            x.shape()
        )));
    }
    let lhs = bm_product(a, x, b)?;
    if lhs.shape() != c.shape() {
        return Err(Error::Conformability(format!("right-hand side: expected {:?}, found {:?}", lhs.shape(), c.shape())));
    }
    lhs.sub(c)
}

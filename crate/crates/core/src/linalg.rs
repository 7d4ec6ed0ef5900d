//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{Complex, DMatrix, Schur, LU};

use crate::error::{Error, Result};
use crate::scalar::{CMatrix, Scalar};

/// 2-norm condition number σ_max / σ_min; `inf` for singular matrices and
/// `1` for the empty matrix.
pub fn condition_number<T: Scalar>(m: &CMatrix<T>) -> f64 {
    if m.nrows() == 0 {
        return 1.0;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().fold(T::zero(), |a, &b| a.max(b)).as_f64();
    let min = sv
        .iter()
        .fold(T::max_value().unwrap(), |a, &b| a.min(b))
        .as_f64();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// LU factorization of a square matrix, reused across right-hand sides.
pub struct Factorization<T: Scalar> {
    lu: LU<Complex<T>, nalgebra::Dyn, nalgebra::Dyn>,
    dim: usize,
}

impl<T: Scalar> Factorization<T> {
    pub fn new(m: &CMatrix<T>) -> Self {
        assert!(m.is_square(), "factorization needs a square matrix");
        Factorization {
            dim: m.nrows(),
            lu: m.clone().lu(),
        }
    }

    /// Solves `M X = B`.
    pub fn solve(&self, rhs: &CMatrix<T>) -> Result<CMatrix<T>> {
        if self.dim == 0 {
            return Ok(CMatrix::zeros(0, rhs.ncols()));
        }
        self.lu
            .solve(rhs)
            .ok_or_else(|| Error::Solve("matrix is singular".into()))
    }
}

pub fn identity<T: Scalar>(n: usize) -> CMatrix<T> {
    CMatrix::identity(n, n)
}

/// Frobenius norm as `f64`.
pub fn norm<T: Scalar>(m: &CMatrix<T>) -> f64 {
    m.norm().as_f64()
}

pub fn max_abs_diff<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let d = x - y;
            d.re.hypot(d.im).as_f64()
        })
        .fold(0.0, f64::max)
}

/// Eigenvalues of a square complex matrix via the complex Schur form.
pub fn eigenvalues<T: Scalar>(m: &CMatrix<T>) -> Vec<Complex<T>> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![m[(0, 0)]];
    }
    let schur = Schur::try_new(m.clone(), T::default_epsilon(), 0)
        .expect("unbounded Schur iteration terminates");
    let (_, t) = schur.unpack();
    (0..n).map(|i| t[(i, i)]).collect()
}

/// Places `blocks` on a 2×2 grid: `[[a, b], [c, d]]`.
pub fn block2<T: Scalar>(
    a: &CMatrix<T>,
    b: &CMatrix<T>,
    c: &CMatrix<T>,
    d: &CMatrix<T>,
) -> CMatrix<T> {
    let (r0, c0) = (a.nrows(), a.ncols());
    assert_eq!(b.nrows(), r0);
    assert_eq!(c.ncols(), c0);
    assert_eq!(d.nrows(), c.nrows());
    assert_eq!(d.ncols(), b.ncols());
    let mut out = CMatrix::zeros(r0 + c.nrows(), c0 + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, c0), b.shape()).copy_from(b);
    out.view_mut((r0, 0), c.shape()).copy_from(c);
    out.view_mut((r0, c0), d.shape()).copy_from(d);
    out
}

pub fn hstack<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = CMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn vstack<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    assert_eq!(a.ncols(), b.ncols());
    let mut out = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

pub fn real_part<T: Scalar>(m: &CMatrix<T>) -> DMatrix<T> {
    m.map(|z| z.re)
}

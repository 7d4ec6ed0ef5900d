//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};

use nalgebra::{DMatrix, RealField};
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating-point type the compiler is generic over.
///
/// Netlists are parsed into `f64`; everything downstream of elaboration
/// runs in `T`. Exact rational arithmetic is not offered because every
/// coupling enters through a square root.
pub trait Scalar:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Condition number above which an elimination matrix counts as singular.
    const SINGULAR_CONDITION: f64;

    /// Lossless conversion for literals and parsed parameters.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar representable as f64")
    }
}

impl Scalar for f64 {
    const SINGULAR_CONDITION: f64 = 1e12;
}

impl Scalar for f32 {
    const SINGULAR_CONDITION: f64 = 1e6;
}

pub type C<T> = Complex<T>;

/// Dense complex matrix, the currency of the compiler.
pub type CMatrix<T> = DMatrix<Complex<T>>;

pub fn c<T: Scalar>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub fn to_complex<T: Scalar>(m: &DMatrix<T>) -> CMatrix<T> {
    m.map(|x| Complex::new(x, T::zero()))
}

//! Floating-point scalar abstraction.
//!
//! All matrix entries are produced from exact rationals (or square roots of
//! exact rationals) computed upstream; the scalar type only carries the final
//! numeric value. Everything downstream of [`crate::rep`] is generic over
//! [`Float`] so the pipeline can run at `f32` or `f64`.

use num::ToPrimitive;

use crate::Rational;

/// Scalar for representation matrices and solver numerics.
pub trait Float: nalgebra::RealField + Copy {
    fn from_double(v: f64) -> Self;

    fn to_double(self) -> f64;

    /// Nearest scalar to an exact rational.
    fn from_rational(r: &Rational) -> Self {
        Self::from_double(rational_to_f64(r))
    }

    /// `sqrt(r)` for a nonnegative exact rational radicand.
    fn sqrt_rational(r: &Rational) -> Self {
        Self::from_double(rational_to_f64(r).sqrt())
    }
}

impl Float for f64 {
    fn from_double(v: f64) -> Self {
        v
    }
    fn to_double(self) -> f64 {
        self
    }
}

impl Float for f32 {
    fn from_double(v: f64) -> Self {
        v as f32
    }
    fn to_double(self) -> f64 {
        self as f64
    }
}

/// Rational to nearest double. Falls back to the quotient of the parts if the
/// combined conversion fails (it does not for the magnitudes in this crate).
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    #[test]
    fn rational_conversion_is_exact_for_dyadics() {
        let r = Rational::new(BigInt::from(49), BigInt::from(4));
        assert_eq!(rational_to_f64(&r), 12.25);
        assert_eq!(f64::sqrt_rational(&r), 3.5);
        assert_eq!(f32::from_rational(&r), 12.25f32);
    }
}

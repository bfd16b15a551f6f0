//! Exact rational coefficients.
//!
//! All coefficient arithmetic in the crate goes through this alias so the
//! representation can be swapped in one place if ever needed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number of unbounded size.
pub type Q = BigRational;

/// Rational from an integer.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational from numerator/denominator.
pub fn qr(n: i64, d: i64) -> Q {
    assert!(d != 0, "zero denominator");
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Render a rational as `p` or `p/q` (never a float).
pub fn render(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Rational square root, if one exists: returns `r > 0` with `r^2 = x`.
pub fn sqrt_exact(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some(Q::zero());
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Rational cube root, if one exists (sign preserved).
pub fn cbrt_exact(x: &Q) -> Option<Q> {
    if x.is_zero() {
        return Some(Q::zero());
    }
    let neg = x.is_negative();
    let a = x.abs();
    let n = a.numer().cbrt();
    let d = a.denom().cbrt();
    if &(&n * &n * &n) == a.numer() && &(&d * &d * &d) == a.denom() {
        let r = Q::new(n, d);
        Some(if neg { -r } else { r })
    } else {
        None
    }
}

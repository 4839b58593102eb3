//! Exact rational scalars and small arithmetic helpers.
//!
//! Every algebraic computation in this crate runs over `Q` (arbitrary-precision
//! rationals, always in lowest terms with positive denominator). Floating point
//! appears only in the holonomy quadratures, which convert once at the end.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational scalar: the ground field of the whole crate.
pub type Q = BigRational;

/// Integer as a rational.
pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Rational from an integer numerator/denominator pair.
///
/// # Panics
/// Panics when `den == 0`.
pub fn qr(num: i64, den: i64) -> Q {
    assert!(den != 0, "zero denominator");
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Exact factorial as a rational (handy for series coefficients).
pub fn factorial(k: usize) -> Q {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    Q::from_integer(acc)
}

/// Binomial coefficient as a machine integer; the sizes used here stay tiny.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Lossy conversion for handoff to the numeric holonomy kernels.
pub fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Fallback for numerators/denominators outside f64 range; the crate
        // never produces these in the numeric paths, but stay total.
        let digits = 18;
        let scale = BigInt::from(10u64.pow(digits));
        let scaled = (q * Q::from_integer(scale.clone())).round().to_integer();
        scaled.to_f64().unwrap_or(f64::NAN) / 1e18
    })
}

/// Exact conversion of a finite double into its dyadic rational value.
pub fn q_from_f64(x: f64) -> Result<Q, Error> {
    if !x.is_finite() {
        return Err(Error::BadRational(format!("{x}")));
    }
    Q::from_float(x).ok_or_else(|| Error::BadRational(format!("{x}")))
}

/// Render as `"num"` for integers and `"num/den"` otherwise.
pub fn format_q(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `"num"` or `"num/den"` with optional sign, in lowest terms.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let bad = || Error::BadRational(s.to_string());
    let mut parts = s.splitn(2, '/');
    let num: BigInt = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    match parts.next() {
        None => Ok(Q::from_integer(num)),
        Some(d) => {
            let den: BigInt = d.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(num, den))
        }
    }
}

/// Absolute value helper (used by residual reporting).
pub fn q_abs(q: &Q) -> Q {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "7", "-3", "22/7", "-5/9"] {
            let q = parse_q(s).unwrap();
            assert_eq!(format_q(&q), s);
        }
        // Reduction to lowest terms.
        assert_eq!(format_q(&parse_q("6/4").unwrap()), "3/2");
        assert_eq!(format_q(&parse_q("3/-6").unwrap()), "-1/2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(0), qi(1));
        assert_eq!(factorial(5), qi(120));
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn f64_conversion() {
        assert_eq!(q_to_f64(&qr(1, 4)), 0.25);
        assert!((q_to_f64(&qr(-22, 7)) + 22.0 / 7.0).abs() < 1e-15);
    }
}

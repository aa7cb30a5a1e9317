//! Exact rational scalars used throughout the engine.
//!
//! Every coefficient, integral and certificate value is a [`Q`]
//! (arbitrary-precision rational); no operation introduces floating point.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

pub type Q = BigRational;

/// Integer as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Fraction `num/den`.
pub fn qr(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical `p` or `p/q` rendering used in reports and the cache file.
pub fn q_str(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Inverse of [`q_str`]. Accepts an optional leading minus sign.
pub fn q_parse(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Q::from_integer(n))
    }
}

/// n! as a rational.
pub fn factorial(n: u32) -> Q {
    let mut acc = BigInt::from(1);
    for k in 2..=n as u64 {
        acc *= BigInt::from(k);
    }
    Q::from_integer(acc)
}

/// Binomial coefficient C(n, k) for n >= 0.
pub fn binomial(n: u32, k: u32) -> Q {
    if k > n {
        return Q::zero();
    }
    let mut acc = BigInt::from(1);
    for t in 0..k as u64 {
        acc = acc * BigInt::from(n as u64 - t) / BigInt::from(t + 1);
    }
    Q::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for s in ["0", "-7", "3/2", "-22/7"] {
            let q = q_parse(s).unwrap();
            assert_eq!(q_str(&q), s);
        }
        assert_eq!(q_str(&q_parse("4/2").unwrap()), "2");
        assert!(q_parse("1/0").is_none());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), qi(6));
        assert_eq!(binomial(5, 0), qi(1));
        assert_eq!(binomial(3, 5), qi(0));
        assert_eq!(factorial(5), qi(120));
    }
}

//! Exact arithmetic for translates of subtori of the multiplicative torus.
//!
//! The crate computes, over arbitrary-precision rationals and with certified
//! interval arithmetic for the few irrational constants involved:
//!
//! * integer lattice normal forms, saturations, quotient metrics and shortest
//!   vectors ([`lattice`]);
//! * exact convex geometry in low dimension: hulls, volumes, Minkowski sums,
//!   mixed volumes and the projected-prism degree functional ([`polytope`]);
//! * degrees, binomial divisors, torsion closures and obstruction degrees of
//!   torus translates presented by saturated lattices with characters
//!   ([`torus`]);
//! * Weil heights of algebraic numbers and rational points together with the
//!   classical Lehmer-type lower-bound constants ([`heights`]);
//! * the function-field counterpart over `Q(t)`, where every height is an
//!   exactly computable integer ([`funfield`]).
//!
//! All domain values are immutable and every operation is a pure function, so
//! the whole crate is safe for concurrent use.

pub mod error;
pub mod factor;
pub mod funfield;
pub mod heights;
pub mod interval;
pub mod lattice;
pub mod polytope;
pub mod torus;
pub mod unipoly;
pub mod verify;

pub use error::{Error, Result};

/// Arbitrary-precision integer used throughout.
pub type Int = num::BigInt;
/// Arbitrary-precision rational used throughout.
pub type Rat = num::BigRational;

use num::{One, Zero};

/// `n!` as a big integer.
pub fn factorial(n: usize) -> Int {
    let mut acc = Int::one();
    for i in 2..=n {
        acc *= Int::from(i);
    }
    acc
}

/// Binomial coefficient `C(n, k)` as a big integer; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// Parses a rational from `"p/q"` or a plain integer string.
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<Int> {
        t.trim()
            .parse::<Int>()
            .map_err(|_| Error::Parse(format!("invalid integer `{t}`")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
    }
}

/// Renders a rational as `"p/q"`, or just `"p"` for integers.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(factorial(0), Int::one());
        assert_eq!(factorial(5), Int::from(120));
        assert_eq!(binomial(2, 1), Int::from(2));
        assert_eq!(binomial(5, 2), Int::from(10));
        assert_eq!(binomial(3, 7), Int::zero());
    }

    #[test]
    fn rational_strings_round_trip() {
        let r = rat_from_str("-22/4").unwrap();
        assert_eq!(rat_to_string(&r), "-11/2");
        assert_eq!(rat_to_string(&rat_from_str("17").unwrap()), "17");
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("x").is_err());
    }
}

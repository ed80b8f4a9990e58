//! Integer factorization: deterministic Miller-Rabin for 64-bit, probabilistic
//! (with many rounds) plus Pollard rho for larger inputs. Inputs in this crate
//! are small; the big-integer path exists so nothing silently overflows.

use crate::{Int, Rat};
use num::{Integer, One, Signed, Zero};
use std::collections::BTreeMap;

/// Prime factorization of `|n|` as `prime -> exponent`; `n` must be nonzero.
pub fn factorize(n: &Int) -> BTreeMap<Int, u64> {
    assert!(!n.is_zero(), "factorize(0)");
    let mut out = BTreeMap::new();
    let mut m = n.abs();
    if m.is_one() {
        return out;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = Int::from(p);
        while (&m % &p).is_zero() {
            *out.entry(p.clone()).or_insert(0) += 1;
            m /= &p;
        }
        if m.is_one() {
            return out;
        }
    }
    let mut stack = vec![m];
    while let Some(v) = stack.pop() {
        if v.is_one() {
            continue;
        }
        if is_prime(&v) {
            *out.entry(v).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(&v);
        stack.push(&v / &d);
        stack.push(d);
    }
    out
}

/// Factorization of a nonzero rational: `prime -> signed exponent`.
pub fn factorize_rat(x: &Rat) -> BTreeMap<Int, i64> {
    assert!(!x.is_zero(), "factorize_rat(0)");
    let mut out: BTreeMap<Int, i64> = BTreeMap::new();
    for (p, e) in factorize(x.numer()) {
        *out.entry(p).or_insert(0) += e as i64;
    }
    for (p, e) in factorize(x.denom()) {
        *out.entry(p).or_insert(0) -= e as i64;
    }
    out.retain(|_, e| *e != 0);
    out
}

fn mod_pow(mut base: Int, mut exp: Int, modulus: &Int) -> Int {
    let mut acc = Int::one();
    base %= modulus;
    while exp.is_positive() {
        if exp.is_odd() {
            acc = acc * &base % modulus;
        }
        base = &base * &base % modulus;
        exp >>= 1;
    }
    acc
}

/// Miller-Rabin primality test; deterministic for inputs below 3.3 * 10^24
/// thanks to the fixed witness set, probabilistic but overwhelmingly reliable
/// beyond that.
pub fn is_prime(n: &Int) -> bool {
    if *n < Int::from(2) {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let p = Int::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - Int::one();
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = mod_pow(Int::from(a), d.clone(), n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &Int) -> Int {
    if n.is_even() {
        return Int::from(2);
    }
    let mut c = Int::one();
    loop {
        let mut x = Int::from(2);
        let mut y = Int::from(2);
        let mut d = Int::one();
        let f = |v: &Int| (v * v + &c) % n;
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1;
    }
}

/// Multiplicative independence of positive rationals: their exponent vectors
/// over the union of appearing primes must have trivial integer kernel.
pub fn multiplicatively_independent(values: &[Rat]) -> bool {
    use crate::lattice::{kernel_basis, IntMatrix};
    let facs: Vec<BTreeMap<Int, i64>> = values.iter().map(factorize_rat).collect();
    let mut primes: Vec<Int> = facs
        .iter()
        .flat_map(|f| f.keys().cloned())
        .collect();
    primes.sort();
    primes.dedup();
    if primes.is_empty() {
        // every value is 1
        return values.is_empty();
    }
    // rows = values, columns = primes; independence <=> zero kernel of the
    // transpose action on exponent rows
    let m = IntMatrix::from_fn(primes.len(), values.len(), |i, j| {
        Int::from(*facs[j].get(&primes[i]).unwrap_or(&0))
    });
    kernel_basis(&m).rank() == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorizations() {
        let f = factorize(&Int::from(360));
        assert_eq!(f.get(&Int::from(2)), Some(&3));
        assert_eq!(f.get(&Int::from(3)), Some(&2));
        assert_eq!(f.get(&Int::from(5)), Some(&1));
        let f = factorize(&Int::from(-97));
        assert_eq!(f.get(&Int::from(97)), Some(&1));
        assert!(factorize(&Int::one()).is_empty());
        // semiprime beyond the trial division range
        let f = factorize(&(Int::from(1000003) * Int::from(1000033)));
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn rational_factorization() {
        let f = factorize_rat(&Rat::new(Int::from(4), Int::from(9)));
        assert_eq!(f.get(&Int::from(2)), Some(&2));
        assert_eq!(f.get(&Int::from(3)), Some(&-2));
    }

    #[test]
    fn primality() {
        assert!(is_prime(&Int::from(2)));
        assert!(is_prime(&Int::from(1000003)));
        assert!(!is_prime(&Int::from(1000001)));
        assert!(!is_prime(&Int::one()));
    }

    #[test]
    fn independence() {
        let r = |p: i64, q: i64| Rat::new(Int::from(p), Int::from(q));
        assert!(multiplicatively_independent(&[r(2, 1), r(3, 1)]));
        assert!(multiplicatively_independent(&[r(2, 1), r(3, 2)]));
        // 4 = 2^2 is dependent on 2
        assert!(!multiplicatively_independent(&[r(2, 1), r(4, 1)]));
        // 6 = 2 * 3
        assert!(!multiplicatively_independent(&[r(2, 1), r(3, 1), r(6, 1)]));
        // g = 1 is never independent
        assert!(!multiplicatively_independent(&[r(1, 1)]));
        assert!(multiplicatively_independent(&[]));
    }
}

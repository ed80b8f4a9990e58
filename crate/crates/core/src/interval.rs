//! Certified interval arithmetic over exact rationals.
//!
//! Every value is an inclusion interval `[lo, hi]` with rational endpoints.
//! Field operations are exact; the transcendental ones (`ln`, `pi`, roots)
//! round outward at a caller-chosen precision, so an interval always encloses
//! the mathematical value. Comparisons are decided by refining the precision
//! until the intervals separate, or a cap is reached.

use crate::{Error, Int, Rat, Result};
use num::{Integer, One, Signed, Zero};

/// Default working precision in bits.
pub const DEFAULT_BITS: u32 = 128;
/// Hard cap for precision refinement.
pub const CAP_BITS: u32 = 16384;

#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    lo: Rat,
    hi: Rat,
}

fn two_pow(bits: u32) -> Int {
    Int::one() << bits
}

fn floor_div(a: &Int, b: &Int) -> Int {
    a.div_floor(b)
}

fn ceil_div(a: &Int, b: &Int) -> Int {
    a.div_ceil(b)
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn exact(v: Rat) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn from_int(v: i64) -> Self {
        Self::exact(Rat::from(Int::from(v)))
    }

    pub fn zero() -> Self {
        Self::exact(Rat::zero())
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from(Int::from(2))
    }

    pub fn contains(&self, v: &Rat) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// `true` iff every point of `self` is `<=` every point of `other`.
    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    /// Certified comparison against an exact rational: `Some(true)` if the
    /// whole interval is `<= v`, `Some(false)` if it is `> v`, else undecided.
    pub fn le_rat(&self, v: &Rat) -> Option<bool> {
        if self.hi <= *v {
            Some(true)
        } else if self.lo > *v {
            Some(false)
        } else {
            None
        }
    }

    pub fn ge_rat(&self, v: &Rat) -> Option<bool> {
        if self.lo >= *v {
            Some(true)
        } else if self.hi < *v {
            Some(false)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, c: &Rat) -> Interval {
        if c.is_negative() {
            Interval::new(&self.hi * c, &self.lo * c)
        } else {
            Interval::new(&self.lo * c, &self.hi * c)
        }
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.lo.is_negative() != self.hi.is_negative() || self.lo.is_zero() || self.hi.is_zero()
        {
            return Err(Error::DivisionByZero);
        }
        Ok(Interval::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn square(&self) -> Interval {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if !self.lo.is_negative() {
            Interval::new(a, b)
        } else if !self.hi.is_positive() {
            Interval::new(b, a)
        } else {
            Interval::new(Rat::zero(), a.max(b))
        }
    }

    /// Integer power by repeated squaring (exponent may be negative).
    pub fn powi(&self, e: i64) -> Result<Interval> {
        if e < 0 {
            return self.powi(-e)?.recip();
        }
        let mut acc = Interval::exact(Rat::one());
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        Ok(acc)
    }

    /// Outward rounding of both endpoints onto the grid `2^-bits`.
    pub fn compress(&self, bits: u32) -> Interval {
        let scale = two_pow(bits);
        let lo = floor_div(&(self.lo.numer() * &scale), self.lo.denom());
        let hi = ceil_div(&(self.hi.numer() * &scale), self.hi.denom());
        Interval::new(
            Rat::new(lo, scale.clone()),
            Rat::new(hi, scale),
        )
    }

    /// Certified `sqrt`; requires a non-negative interval.
    pub fn sqrt(&self, bits: u32) -> Result<Interval> {
        Ok(Interval::new(
            sqrt_rat_down(&self.lo, bits)?,
            sqrt_rat_up(&self.hi, bits)?,
        ))
    }

    /// Certified `k`-th root; requires a non-negative interval and `k >= 1`.
    pub fn kth_root(&self, k: u32, bits: u32) -> Result<Interval> {
        if k == 0 {
            return Err(Error::Invalid("zeroth root".into()));
        }
        if k == 1 {
            return Ok(self.clone());
        }
        Ok(Interval::new(
            kth_root_rat_down(&self.lo, k, bits)?,
            kth_root_rat_up(&self.hi, k, bits)?,
        ))
    }

    /// Certified natural logarithm; requires a strictly positive interval.
    pub fn ln(&self, bits: u32) -> Result<Interval> {
        let lo = ln_rat(&self.lo, bits)?;
        let hi = ln_rat(&self.hi, bits)?;
        Ok(Interval::new(lo.lo, hi.hi))
    }

    /// Decimal rendering of the midpoint, together with a radius in ulps of
    /// the last printed digit. Deterministic.
    pub fn decimal(&self, digits: u32) -> String {
        rat_to_decimal(&self.mid(), digits)
    }
}

/// Decimal expansion of a rational, truncated toward zero at `digits` places.
pub fn rat_to_decimal(x: &Rat, digits: u32) -> String {
    let sign = if x.is_negative() { "-" } else { "" };
    let ax = x.abs();
    let pow = Int::from(10u32).pow(digits);
    let scaled = floor_div(&(ax.numer() * &pow), ax.denom());
    let (ip, fp) = scaled.div_rem(&pow);
    let mut frac = fp.to_string();
    while (frac.len() as u32) < digits {
        frac.insert(0, '0');
    }
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{frac}")
    }
}

fn check_nonneg(x: &Rat) -> Result<()> {
    if x.is_negative() {
        Err(Error::Invalid("root of a negative number".into()))
    } else {
        Ok(())
    }
}

fn sqrt_rat_down(x: &Rat, bits: u32) -> Result<Rat> {
    check_nonneg(x)?;
    let scale = two_pow(2 * bits);
    let a = floor_div(&(x.numer() * scale), x.denom());
    let r = a.sqrt();
    Ok(Rat::new(r, two_pow(bits)))
}

fn sqrt_rat_up(x: &Rat, bits: u32) -> Result<Rat> {
    check_nonneg(x)?;
    let scale = two_pow(2 * bits);
    let a = ceil_div(&(x.numer() * scale), x.denom());
    let r = a.sqrt();
    let r = if &r * &r >= a { r } else { r + 1 };
    Ok(Rat::new(r, two_pow(bits)))
}

fn kth_root_rat_down(x: &Rat, k: u32, bits: u32) -> Result<Rat> {
    check_nonneg(x)?;
    let scale = two_pow(k * bits);
    let a = floor_div(&(x.numer() * scale), x.denom());
    let r = a.nth_root(k);
    Ok(Rat::new(r, two_pow(bits)))
}

fn kth_root_rat_up(x: &Rat, k: u32, bits: u32) -> Result<Rat> {
    check_nonneg(x)?;
    let scale = two_pow(k * bits);
    let a = ceil_div(&(x.numer() * scale), x.denom());
    let r = a.nth_root(k);
    let r = if r.pow(k) >= a { r } else { r + 1 };
    Ok(Rat::new(r, two_pow(bits)))
}

/// atanh(u) for rational u in (0, 1/2), as a scaled-integer enclosure.
/// Returns `[s_lo, s_hi]` with `s/2^W` enclosing atanh(u), `W = bits + 32`.
fn atanh_scaled(u: &Rat, bits: u32) -> (Int, Int, u32) {
    let w = bits + 32;
    let scale = two_pow(w);
    // u and u^2 as directed scaled integers
    let u_lo = floor_div(&(u.numer() * &scale), u.denom());
    let u_hi = &u_lo + 1;
    let u2 = u * u;
    let u2_lo = floor_div(&(u2.numer() * &scale), u2.denom());
    let u2_hi = &u2_lo + 1;

    let mut p_lo = u_lo;
    let mut p_hi = u_hi;
    let mut s_lo = Int::zero();
    let mut s_hi = Int::zero();
    let mut j: u64 = 0;
    loop {
        let d = Int::from(2 * j + 1);
        s_lo += floor_div(&p_lo, &d);
        s_hi += ceil_div(&p_hi, &d);
        // next power u^{2j+3}
        p_lo = floor_div(&(&p_lo * &u2_lo), &scale);
        p_hi = ceil_div(&(&p_hi * &u2_hi), &scale);
        j += 1;
        if p_hi < Int::from(2 * j + 1) {
            // geometric tail: remaining sum <= p_hi / (1 - u^2) <= 2 * p_hi
            s_hi += Int::from(2) * &p_hi + 2;
            break;
        }
    }
    (s_lo, s_hi, w)
}

/// Certified enclosure of `ln 2`.
pub fn ln2(bits: u32) -> Interval {
    // ln 2 = 2 atanh(1/3)
    let (lo, hi, w) = atanh_scaled(&Rat::new(Int::one(), Int::from(3)), bits);
    let scale = two_pow(w);
    Interval::new(
        Rat::new(Int::from(2) * lo, scale.clone()),
        Rat::new(Int::from(2) * hi, scale),
    )
}

/// Certified enclosure of `ln x` for a positive rational `x`.
pub fn ln_rat(x: &Rat, bits: u32) -> Result<Interval> {
    if !x.is_positive() {
        return Err(Error::Invalid("logarithm of a non-positive number".into()));
    }
    if x.is_one() {
        return Ok(Interval::zero());
    }
    if *x < Rat::one() {
        return Ok(ln_rat(&x.recip(), bits)?.neg());
    }
    // write x = 2^e * m with m in [1, 2)
    let mut e: i64 = (x.numer().bits() as i64) - (x.denom().bits() as i64);
    let two = Rat::from(Int::from(2));
    let pow2 = |k: i64| -> Rat {
        if k >= 0 {
            Rat::from(Int::one() << (k as u64))
        } else {
            Rat::new(Int::one(), Int::one() << ((-k) as u64))
        }
    };
    let mut m = x / pow2(e);
    while m >= two {
        m /= &two;
        e += 1;
    }
    while m < Rat::one() {
        m *= &two;
        e -= 1;
    }
    // ln m = 2 atanh((m-1)/(m+1)), argument in [0, 1/3]
    let lnm = if m.is_one() {
        Interval::zero()
    } else {
        let u = (&m - Rat::one()) / (&m + Rat::one());
        let (lo, hi, w) = atanh_scaled(&u, bits);
        let scale = two_pow(w);
        Interval::new(
            Rat::new(Int::from(2) * lo, scale.clone()),
            Rat::new(Int::from(2) * hi, scale),
        )
    };
    let l2 = ln2(bits).scale(&Rat::from(Int::from(e)));
    Ok(l2.add(&lnm).compress(bits))
}

/// arctan(1/k) as a scaled-integer enclosure at width `w`.
fn atan_inv_scaled(k: u64, w: u32) -> (Int, Int) {
    let scale = two_pow(w);
    let k2 = Int::from(k) * Int::from(k);
    let mut pow = Int::from(k); // k^{2j+1}
    let mut s_lo = Int::zero();
    let mut s_hi = Int::zero();
    let mut j: u64 = 0;
    loop {
        let d = Int::from(2 * j + 1) * &pow;
        let t_lo = floor_div(&scale, &d);
        let t_hi = &t_lo + 1;
        if j % 2 == 0 {
            s_lo += &t_lo;
            s_hi += &t_hi;
        } else {
            s_lo -= &t_hi;
            s_hi -= &t_lo;
        }
        pow *= &k2;
        j += 1;
        let next_d = Int::from(2 * j + 1) * &pow;
        if next_d > scale {
            // alternating tail: bounded by the next term's magnitude
            if j % 2 == 0 {
                s_hi += ceil_div(&scale, &next_d) + 1;
            } else {
                s_lo -= ceil_div(&scale, &next_d) + 1;
            }
            break;
        }
    }
    (s_lo, s_hi)
}

/// Certified enclosure of pi (Machin's formula).
pub fn pi(bits: u32) -> Interval {
    let w = bits + 32;
    let scale = two_pow(w);
    let (a5_lo, a5_hi) = atan_inv_scaled(5, w);
    let (a239_lo, a239_hi) = atan_inv_scaled(239, w);
    let lo = Int::from(16) * a5_lo - Int::from(4) * a239_hi;
    let hi = Int::from(16) * a5_hi - Int::from(4) * a239_lo;
    Interval::new(Rat::new(lo, scale.clone()), Rat::new(hi, scale)).compress(bits)
}

/// Refines `f` over doubling precisions until it returns a decision.
pub fn refine_decide<F>(start_bits: u32, cap_bits: u32, f: F) -> Result<bool>
where
    F: Fn(u32) -> Option<bool>,
{
    let mut bits = start_bits.max(16);
    loop {
        if let Some(v) = f(bits) {
            return Ok(v);
        }
        if bits >= cap_bits {
            return Err(Error::PrecisionExhausted);
        }
        bits = (bits * 2).min(cap_bits);
    }
}

/// `Gamma(1 + k/2)^2` written as `r * pi^s` with `r` rational and `s` in {0,1}.
pub fn gamma_half_plus_one_sq(k: u32) -> (Rat, u32) {
    if k % 2 == 0 {
        let f = crate::factorial((k / 2) as usize);
        (Rat::from(&f * &f), 0)
    } else {
        // Gamma(1 + k/2) = (k!! / 2^{(k+1)/2}) sqrt(pi)
        let mut dfact = Int::one();
        let mut i = k as i64;
        while i >= 1 {
            dfact *= Int::from(i);
            i -= 2;
        }
        let denom = Int::one() << (k + 1);
        (Rat::new(&dfact * &dfact, denom), 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat_from_str;

    /// Parses a decimal literal into a rational.
    fn dec(decimal: &str) -> Rat {
        let neg = decimal.starts_with('-');
        let d = decimal.trim_start_matches('-');
        let (ip, fp) = d.split_once('.').unwrap_or((d, ""));
        let den = Int::from(10u32).pow(fp.len() as u32);
        let num = format!("{ip}{fp}").parse::<Int>().unwrap();
        let r = Rat::new(num, den);
        if neg {
            -r
        } else {
            r
        }
    }

    fn assert_encloses(iv: &Interval, decimal: &str, width_bits: u32) {
        let v = dec(decimal);
        // the decimal is only accurate to its printed digits
        let digits = decimal.split_once('.').map_or(0, |(_, f)| f.len()) as u32;
        let tol = Rat::new(Int::one(), Int::from(10u32).pow(digits.saturating_sub(1)));
        let outer = Interval::new(&v - &tol, &v + &tol);
        assert!(
            outer.contains_interval(iv),
            "interval {:?} is not within {} of {}",
            iv,
            tol,
            decimal
        );
        let w = Rat::new(Int::one(), Int::one() << width_bits);
        assert!(iv.width() <= w, "interval too wide: {:?}", iv.width());
    }

    #[test]
    fn ln_values() {
        let l2 = ln2(128);
        assert_encloses(&l2, "0.69314718055994530941723212145817656807", 100);
        let l8 = ln_rat(&Rat::from(Int::from(8)), 128).unwrap();
        assert_encloses(&l8, "2.07944154167983592825169636437452970422", 100);
        let l5_12 = ln_rat(&Rat::from(Int::from(5)), 192)
            .unwrap()
            .scale(&Rat::new(Int::one(), Int::from(12)));
        assert_encloses(&l5_12, "0.13411982603617503121672994443551563662", 150);
        let lhalf = ln_rat(&Rat::new(Int::one(), Int::from(2)), 128).unwrap();
        assert_encloses(&lhalf, "-0.69314718055994530941723212145817656807", 100);
        assert!(ln_rat(&Rat::zero(), 64).is_err());
    }

    #[test]
    fn pi_value() {
        let p = pi(256);
        assert_encloses(
            &p,
            "3.14159265358979323846264338327950288419716939937510",
            200,
        );
    }

    #[test]
    fn roots() {
        let s2 = Interval::from_int(2).sqrt(128).unwrap();
        assert_encloses(&s2, "1.41421356237309504880168872420969807856", 100);
        let c = Interval::from_int(27).kth_root(3, 128).unwrap();
        assert!(c.contains(&Rat::from(Int::from(3))));
        assert!(c.width() <= Rat::new(Int::one(), Int::one() << 100));
        // golden ratio ingredient
        let s5 = Interval::from_int(5).sqrt(192).unwrap();
        let phi = s5
            .add(&Interval::from_int(1))
            .scale(&Rat::new(Int::one(), Int::from(2)));
        let half_ln_phi = phi
            .ln(192)
            .unwrap()
            .scale(&Rat::new(Int::one(), Int::from(2)));
        assert_encloses(
            &half_ln_phi,
            "0.24060591252980172374887945671218421156",
            150,
        );
    }

    #[test]
    fn interval_algebra() {
        let a = Interval::new(rat_from_str("-1").unwrap(), rat_from_str("2").unwrap());
        let sq = a.square();
        assert_eq!(sq.lo(), &Rat::zero());
        assert_eq!(sq.hi(), &Rat::from(Int::from(4)));
        let b = Interval::from_int(3);
        assert!(a.mul(&b).contains(&Rat::from(Int::from(-3))));
        assert!(a.recip().is_err());
        let c = Interval::new(rat_from_str("1/3").unwrap(), rat_from_str("1/2").unwrap());
        let r = c.recip().unwrap();
        assert_eq!(r.lo(), &Rat::from(Int::from(2)));
        assert_eq!(r.hi(), &Rat::from(Int::from(3)));
        assert_eq!(
            a.powi(2).unwrap().hi(),
            &Rat::from(Int::from(4))
        );
    }

    #[test]
    fn decimal_rendering() {
        let x = rat_from_str("-22/7").unwrap();
        assert_eq!(rat_to_decimal(&x, 4), "-3.1428");
        assert_eq!(rat_to_decimal(&Rat::from(Int::from(5)), 0), "5");
    }

    #[test]
    fn gamma_squares() {
        // Gamma(3/2)^2 = pi/4, Gamma(2)^2 = 1, Gamma(5/2)^2 = 9 pi / 16
        assert_eq!(gamma_half_plus_one_sq(1), (Rat::new(Int::one(), Int::from(4)), 1));
        assert_eq!(gamma_half_plus_one_sq(2), (Rat::one(), 0));
        assert_eq!(
            gamma_half_plus_one_sq(3),
            (Rat::new(Int::from(9), Int::from(16)), 1)
        );
        assert_eq!(gamma_half_plus_one_sq(4), (Rat::from(Int::from(4)), 0));
    }

    #[test]
    fn refine_decides() {
        // decide ln 2 < 0.6932 by refinement
        let target = rat_from_str("6932/10000").unwrap();
        let got = refine_decide(16, 1024, |bits| ln2(bits).le_rat(&target)).unwrap();
        assert!(got);
    }
}

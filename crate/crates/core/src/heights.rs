//! Weil heights of algebraic numbers and rational points, and evaluators for
//! the explicit Lehmer-type lower-bound constants and inequalities.
//!
//! The height of an algebraic number is `(1/d) log M(P)` for its defining
//! polynomial `P`; the Mahler measure is enclosed rigorously by iterating the
//! Graeffe root-squaring map with interval coefficients and sandwiching with
//! the Landau / coefficient-bound inequalities
//! `||P||_2 2^{-d} <= M(P) <= ||P||_2`. Root-of-unity detection is exact
//! (cyclotomic divisibility), never numeric.

use crate::interval::{gamma_half_plus_one_sq, ln2, ln_rat, pi, refine_decide, Interval};
use crate::lattice::QuotientLattice;
use crate::torus::{
    obstruction_degree, torsion_closure, translate_degree, Obstruction, TorusTranslate,
};
use crate::{binomial, Error, Int, Rat, Result};
use num::{Integer, One, Signed, Zero};

/// An algebraic number given by a content-free integer defining polynomial,
/// not divisible by `x`. Coefficients are stored low to high.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicNumber {
    coeffs: Vec<Int>,
}

impl AlgebraicNumber {
    pub fn from_coeffs(coeffs: Vec<Int>) -> Result<Self> {
        let mut c = coeffs;
        while c.last().is_some_and(Int::is_zero) {
            c.pop();
        }
        if c.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        if c.len() == 1 {
            return Err(Error::Invalid("constant polynomial defines no algebraic number".into()));
        }
        if c[0].is_zero() {
            return Err(Error::Invalid("polynomial is divisible by x".into()));
        }
        let mut content = Int::zero();
        for x in &c {
            content = content.gcd(x);
        }
        if !content.is_one() {
            for x in c.iter_mut() {
                *x = &*x / &content;
            }
        }
        if c.last().expect("nonempty").is_negative() {
            for x in c.iter_mut() {
                *x = -x.clone();
            }
        }
        Ok(AlgebraicNumber { coeffs: c })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }
}

/// Exact division of integer polynomials; `None` if it does not divide.
fn poly_div_exact(num: &[Int], den: &[Int]) -> Option<Vec<Int>> {
    let dn = num.len() as isize - 1;
    let dd = den.len() as isize - 1;
    if dn < dd {
        return None;
    }
    let mut rem: Vec<Int> = num.to_vec();
    let lead = den.last().expect("nonzero divisor");
    let mut quot = vec![Int::zero(); (dn - dd + 1) as usize];
    for k in (0..quot.len()).rev() {
        let top = rem[k + dd as usize].clone();
        if top.is_zero() {
            continue;
        }
        let (q, r) = top.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        quot[k] = q.clone();
        for (j, d) in den.iter().enumerate() {
            let v = &rem[k + j] - &q * d;
            rem[k + j] = v;
        }
    }
    if rem.iter().all(Int::is_zero) {
        Some(quot)
    } else {
        None
    }
}

/// `Phi_n` with integer coefficients, low to high.
pub fn cyclotomic(n: u64) -> Vec<Int> {
    fn build(n: u64, cache: &mut Vec<Option<Vec<Int>>>) -> Vec<Int> {
        if let Some(c) = &cache[n as usize] {
            return c.clone();
        }
        // x^n - 1 divided by all proper cyclotomic divisors
        let mut num = vec![Int::zero(); n as usize + 1];
        num[0] = -Int::one();
        num[n as usize] = Int::one();
        for d in 1..n {
            if n % d == 0 {
                let phi_d = build(d, cache);
                num = poly_div_exact(&num, &phi_d).expect("cyclotomic divisibility");
            }
        }
        cache[n as usize] = Some(num.clone());
        num
    }
    let mut cache = vec![None; n as usize + 1];
    build(n, &mut cache)
}

fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Divides out every cyclotomic factor (with multiplicity); the quotient has
/// no root of unity among its roots.
pub fn strip_cyclotomic_factors(p: &AlgebraicNumber) -> Vec<Int> {
    let d = p.degree() as u64;
    let mut cur = p.coeffs().to_vec();
    // phi(k) <= d forces k <= 2 d^2 + 2 (phi(k) >= sqrt(k/2))
    let k_max = 2 * d * d + 2;
    for k in 1..=k_max {
        if euler_phi(k) > d {
            continue;
        }
        let phi_k = cyclotomic(k);
        while cur.len() >= phi_k.len() {
            match poly_div_exact(&cur, &phi_k) {
                Some(q) => cur = q,
                None => break,
            }
        }
        if cur.len() == 1 {
            break;
        }
    }
    cur
}

/// True iff every root of `P` is a root of unity; decided exactly by
/// cyclotomic divisibility.
pub fn is_root_of_unity(p: &AlgebraicNumber) -> bool {
    strip_cyclotomic_factors(p).len() == 1
}

/// One Graeffe root-squaring step with interval coefficients:
/// `P(x) P(-x) = Q(x^2)`, so the roots of `Q` are the squared roots of `P`.
fn graeffe_step(coeffs: &[Interval]) -> Vec<Interval> {
    let d = coeffs.len() - 1;
    let mut out = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let mut acc = coeffs[k].square();
        let mut l = 1;
        while l <= k && k + l <= d {
            let prod = coeffs[k - l].mul(&coeffs[k + l]);
            let signed = if l % 2 == 0 { prod } else { prod.neg() };
            acc = acc.add(&signed.scale(&Rat::from(Int::from(2))));
            l += 1;
        }
        if k % 2 == 1 {
            acc = acc.neg();
        }
        out.push(acc);
    }
    out
}

/// Floor of `log2` of a positive rational.
fn floor_log2(x: &Rat) -> i64 {
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    let pow = |k: i64| -> Rat {
        if k >= 0 {
            Rat::from(Int::one() << k as u64)
        } else {
            Rat::new(Int::one(), Int::one() << (-k) as u64)
        }
    };
    while pow(e) > *x {
        e -= 1;
    }
    while pow(e + 1) <= *x {
        e += 1;
    }
    e
}

/// Certified interval for the height `(1/d) log M(P)` of `P`'s roots, of
/// width at most `tol`. Cyclotomic factors are removed exactly first, so
/// torsion inputs return the exact interval `[0, 0]`.
pub fn mahler_height(p: &AlgebraicNumber, tol: &Rat, max_bits: u32) -> Result<Interval> {
    let d_orig = p.degree();
    let stripped = strip_cyclotomic_factors(p);
    if stripped.len() == 1 {
        // the quotient is a unit: every root was a root of unity
        debug_assert!(stripped[0].abs().is_one());
        return Ok(Interval::zero());
    }
    let d = stripped.len() - 1;
    // choose the Graeffe depth so the Landau sandwich gap
    // d * ln2 / 2^j is below tol * d_orig / 2
    let target = tol * Rat::from(Int::from(d_orig as i64)) / Rat::from(Int::from(2));
    let mut j_steps = 1u32;
    {
        let mut gap = Rat::from(Int::from(d as i64)); // ln 2 < 1
        let half = Rat::new(Int::one(), Int::from(2));
        while gap > target {
            gap *= &half;
            j_steps += 1;
        }
    }
    let mut bits = 256u32.max(8 * j_steps);
    loop {
        let mut coeffs: Vec<Interval> = stripped
            .iter()
            .map(|c| Interval::exact(Rat::from(c.clone())))
            .collect();
        let mut t_scale = Int::zero(); // R_j = P^{(j)} / 2^{T_j}
        for _ in 0..j_steps {
            coeffs = graeffe_step(&coeffs);
            // normalize by an exact power of two
            let max_abs = coeffs
                .iter()
                .map(|c| c.lo().abs().max(c.hi().abs()))
                .max()
                .expect("nonempty");
            let s = if max_abs.is_zero() { 0 } else { floor_log2(&max_abs) };
            let scale = if s >= 0 {
                Rat::new(Int::one(), Int::one() << s as u64)
            } else {
                Rat::from(Int::one() << (-s) as u64)
            };
            for c in coeffs.iter_mut() {
                *c = c.scale(&scale).compress(bits);
            }
            t_scale = Int::from(2) * t_scale + Int::from(s);
        }
        // ||R||_2 as an interval
        let mut norm_sq = Interval::zero();
        for c in &coeffs {
            norm_sq = norm_sq.add(&c.square());
        }
        if !norm_sq.lo().is_positive() {
            if bits >= max_bits {
                return Err(Error::PrecisionExhausted);
            }
            bits = (bits * 2).min(max_bits);
            continue;
        }
        let norm = norm_sq.sqrt(bits)?;
        // log M(R) in [ln ||R|| - d ln 2, ln ||R||]
        let ln_norm = norm.ln(bits)?;
        let l2 = ln2(bits);
        let log_m_r = Interval::new(
            (ln_norm.lo() - l2.hi() * Rat::from(Int::from(d as i64))).clone(),
            ln_norm.hi().clone(),
        );
        // log M(P) = (T ln2 + log M(R)) / 2^j ; height divides by d_orig
        let t_ln2 = l2.scale(&Rat::from(t_scale.clone()));
        let denom = Rat::from(Int::one() << j_steps) * Rat::from(Int::from(d_orig as i64));
        let h = t_ln2.add(&log_m_r).scale(&denom.recip());
        if h.width() <= *tol {
            return Ok(h);
        }
        if bits >= max_bits {
            return Err(Error::PrecisionExhausted);
        }
        bits = (bits * 2).min(max_bits);
    }
}

/// Weil height of a rational point `(1 : a_1 : ... : a_N)`, represented
/// exactly as `log` of an integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointHeight {
    base: Int,
}

impl PointHeight {
    /// `h = log(base)`.
    pub fn base(&self) -> &Int {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_one()
    }

    pub fn symbolic(&self) -> String {
        format!("log({})", self.base)
    }

    pub fn interval(&self, bits: u32) -> Interval {
        ln_rat(&Rat::from(self.base.clone()), bits).expect("base >= 1")
    }
}

/// Exact height of a point with nonzero rational coordinates:
/// `sum_p log p * max_j(0, -v_p(a_j)) + log max(1, |a_j|)`, evaluated in
/// closed form as the log of the sup-norm of the coprime integer coordinate
/// vector.
pub fn rational_point_height(coords: &[Rat]) -> Result<PointHeight> {
    for c in coords {
        if c.is_zero() {
            return Err(Error::Invalid("zero coordinate".into()));
        }
    }
    let mut d = Int::one();
    for c in coords {
        d = d.lcm(c.denom());
    }
    let mut entries: Vec<Int> = vec![d.clone()];
    for c in coords {
        entries.push((c.numer() * &d / c.denom()).abs());
    }
    let mut g = Int::zero();
    for e in &entries {
        g = g.gcd(e);
    }
    let max = entries.iter().max().expect("nonempty").clone();
    Ok(PointHeight { base: max / g })
}

/// Height of a nonzero rational number: `log max(|num|, |den|)`.
pub fn rational_height(x: &Rat) -> Result<PointHeight> {
    rational_point_height(std::slice::from_ref(x))
}

/// The classical lower-bound constants of the introduction, certified.
#[derive(Debug, Clone)]
pub struct ClassicalBounds {
    /// `1/2 log((1 + sqrt 5)/2)`: Schinzel's totally-real constant.
    pub schinzel: Interval,
    /// `log(5)/12`: the Amoroso-Dvornicich abelian-extension constant.
    pub abelian: Interval,
    /// `c/D (log log(3D) / log(2D))^3`.
    pub dobrowolski: Interval,
    /// `c/D (log log(3D))^3 / (log(2D))^4`.
    pub amoroso_delsinne: Interval,
}

pub fn schinzel_constant(bits: u32) -> Interval {
    let phi = Interval::from_int(5)
        .sqrt(bits)
        .expect("sqrt of 5")
        .add(&Interval::from_int(1))
        .scale(&Rat::new(Int::one(), Int::from(2)));
    phi.ln(bits)
        .expect("phi > 1")
        .scale(&Rat::new(Int::one(), Int::from(2)))
}

pub fn abelian_constant(bits: u32) -> Interval {
    ln_rat(&Rat::from(Int::from(5)), bits)
        .expect("5 > 0")
        .scale(&Rat::new(Int::one(), Int::from(12)))
}

pub fn classical_lower_bounds(degree: u64, c: &Rat, bits: u32) -> Result<ClassicalBounds> {
    if degree < 1 {
        return Err(Error::Invalid("degree must be >= 1".into()));
    }
    if !c.is_positive() {
        return Err(Error::Invalid("the Lehmer constant must be positive".into()));
    }
    let d = Rat::from(Int::from(degree));
    let log3d = ln_rat(&(&d * Rat::from(Int::from(3))), bits)?;
    let log2d = ln_rat(&(&d * Rat::from(Int::from(2))), bits)?;
    let loglog3d = log3d.ln(bits)?;
    let c_over_d = Interval::exact(c / &d);
    let dobrowolski = c_over_d.mul(&loglog3d.div(&log2d)?.powi(3)?);
    let amoroso_delsinne = c_over_d.mul(&loglog3d.powi(3)?.div(&log2d.powi(4)?)?);
    Ok(ClassicalBounds {
        schinzel: schinzel_constant(bits),
        abelian: abelian_constant(bits),
        dobrowolski,
        amoroso_delsinne,
    })
}

/// The structural constants attached to dimension data `(N, p, n)`.
#[derive(Debug, Clone)]
pub struct StructuralConstants {
    pub ambient: usize,
    pub p: usize,
    pub n: usize,
    /// Sharp constant `c(N,p,n) = 2 ((N+1)^2 (p-n) C(N,p) C(N,p-1))^{-1/2}`,
    /// squared (exact rational).
    pub c_sharp_sq: Rat,
    pub c_sharp: Interval,
    /// `(N^{-3/2} 2^{-N})^2`, the printed floor for `c_1(N)`, squared.
    pub c1_floor_sq: Rat,
    /// Does `c_sharp >= floor` hold (exact rational comparison of squares)?
    pub c_floor_holds: bool,
    /// Obstruction constant `c_3(N,p,n)`; `c3_pow_2k` is `c_3^{2(p-n)}`
    /// (rational times a power of pi, so nearly exact).
    pub c3: Interval,
    pub c3_pow_2k: Interval,
    /// `(4^N N^{3/2})^2`: square of the printed coarse bound for `c_3`.
    pub c3_coarse_sq: Rat,
    pub c3_coarse_holds: bool,
    /// Sharp constant of the codimension bound,
    /// `sqrt(pi)/((N+1) sqrt(k)) (C(N,n) C(N,p) Gamma(1+k/2)^2)^{-1/(2k)}`.
    pub c4_sharp: Interval,
    /// `2^{-N} N^{-2}`: the printed floor for `c_4(N)` (exact rational).
    pub c4_floor: Rat,
    pub c4_floor_holds: bool,
}

pub fn structural_constants(
    ambient: usize,
    p: usize,
    n: usize,
    bits: u32,
) -> Result<StructuralConstants> {
    if !(n < p && p <= ambient) {
        return Err(Error::Invalid(format!(
            "need 0 <= n < p <= N, got N={ambient}, p={p}, n={n}"
        )));
    }
    let k = (p - n) as u32;
    let big_n = ambient as i64;
    let cnp = binomial(ambient, p);
    let cnp1 = binomial(ambient, p - 1);
    let cnn = binomial(ambient, n);

    let c_sharp_sq = Rat::new(
        Int::from(4),
        Int::from((big_n + 1) * (big_n + 1)) * Int::from(k) * &cnp * &cnp1,
    );
    let c_sharp = Interval::exact(c_sharp_sq.clone()).sqrt(bits)?;
    let c1_floor_sq = Rat::new(
        Int::one(),
        Int::from(big_n).pow(3) * Int::from(4).pow(ambient as u32),
    );
    let c_floor_holds = c_sharp_sq >= c1_floor_sq;

    // c3^{2k} = 4^k (C(N,p) C(N,p-1))^k (C(N,n) C(N,p)) Gamma(1+k/2)^2 / pi^k
    let (gamma_sq_rat, s) = gamma_half_plus_one_sq(k);
    let rational_part = Rat::from(Int::from(4).pow(k))
        * Rat::from(&cnp * &cnp1).pow(k as i32)
        * Rat::from(&cnn * &cnp)
        * &gamma_sq_rat;
    let pi_iv = pi(bits);
    let c3_pow_2k = pi_iv.powi(s as i64 - k as i64)?.scale(&rational_part);
    let c3 = c3_pow_2k.kth_root(2 * k, bits)?;
    let c3_coarse_sq = Rat::from(Int::from(16).pow(ambient as u32) * Int::from(big_n).pow(3));
    let coarse_pow_2k = Interval::exact(c3_coarse_sq.clone()).powi(k as i64)?;
    let c3_coarse_holds = c3_pow_2k.certainly_le(&coarse_pow_2k);

    // c4^{2k} = pi^{k - s} / ( ((N+1)^2 k)^k C(N,n) C(N,p) gamma_sq_rat )
    let denom = Rat::from(Int::from((big_n + 1) * (big_n + 1)) * Int::from(k)).pow(k as i32)
        * Rat::from(&cnn * &cnp)
        * &gamma_sq_rat;
    let c4_pow_2k = pi_iv.powi(k as i64 - s as i64)?.scale(&denom.recip());
    let c4_sharp = c4_pow_2k.kth_root(2 * k, bits)?;
    let c4_floor = Rat::new(
        Int::one(),
        (Int::one() << ambient) * Int::from(big_n) * Int::from(big_n),
    );
    let c4_floor_holds = {
        let floor_pow = Interval::exact(c4_floor.clone()).powi(2 * k as i64)?;
        floor_pow.certainly_le(&c4_pow_2k)
    };

    Ok(StructuralConstants {
        ambient,
        p,
        n,
        c_sharp_sq,
        c_sharp,
        c1_floor_sq,
        c_floor_holds,
        c3,
        c3_pow_2k,
        c3_coarse_sq,
        c3_coarse_holds,
        c4_sharp,
        c4_floor,
        c4_floor_holds,
    })
}

/// A named certified value inside a [`BoundReport`].
#[derive(Debug, Clone)]
pub struct NamedBound {
    pub name: String,
    pub symbolic: String,
    pub value: Interval,
    /// When the instance is a rational point: does `h(point) >= value` hold
    /// (certified)?
    pub holds_for_point: Option<bool>,
}

/// Output of the Lehmer-type lower-bound evaluators.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub ambient: usize,
    pub dim_x: usize,
    pub dim_u: usize,
    pub deg_x: Int,
    pub deg_u: Int,
    /// `None` when `X` is itself a torsion variety (obstruction infinite).
    pub omega: Option<Int>,
    pub lambda: Option<Vec<Int>>,
    pub m_k_symbolic: String,
    pub m_k: Interval,
    /// Exact height of the presented point, when its coordinates are
    /// rational.
    pub point_height: Option<PointHeight>,
    pub bounds: Vec<NamedBound>,
    pub torsion_variety: bool,
    pub conditional_on_independence: bool,
}

fn certify_point_ge(height: &PointHeight, bound: &Interval, bits: u32) -> Option<bool> {
    refine_decide(bits, crate::interval::CAP_BITS, |b| {
        let h = height.interval(b);
        if h.lo() >= bound.hi() {
            Some(true)
        } else if h.hi() < bound.lo() {
            Some(false)
        } else {
            None
        }
    })
    .ok()
}

/// Lower bound of the headline theorem:
/// `mu_abs(X) >= c(N,p,n) m(K) deg(U_X) / omega(X; U_X)`, together with the
/// sharper monomial form `2/((N+1) sqrt(p-n)) h(alpha^lambda) / ||lambda||`
/// at the minimizing exponent vector.
pub fn thm13_bound(x: &TorusTranslate, m_k: &Interval, m_k_symbolic: &str, bits: u32) -> Result<BoundReport> {
    let ambient = x.ambient_dim();
    let closure = torsion_closure(x)?;
    let u = &closure.translate;
    let dim_x = x.dim();
    let dim_u = u.dim();
    let deg_x = translate_degree(x)?;
    let deg_u = translate_degree(u)?;
    let point_height = x
        .rational_coordinates()
        .map(|c| rational_point_height(&c))
        .transpose()?;
    let conditional = matches!(
        x.point().independence(),
        crate::torus::Independence::Asserted
    );

    let mut report = BoundReport {
        ambient,
        dim_x,
        dim_u,
        deg_x,
        deg_u: deg_u.clone(),
        omega: None,
        lambda: None,
        m_k_symbolic: m_k_symbolic.to_string(),
        m_k: m_k.clone(),
        point_height,
        bounds: Vec::new(),
        torsion_variety: dim_x == dim_u,
        conditional_on_independence: conditional,
    };
    if report.torsion_variety {
        // the bound degenerates to zero
        report.bounds.push(NamedBound {
            name: "thm13".into(),
            symbolic: "0 (X is a torsion variety)".into(),
            value: Interval::zero(),
            holds_for_point: Some(true),
        });
        return Ok(report);
    }

    let Obstruction::Finite { omega, lambda } = obstruction_degree(x, u)? else {
        unreachable!("dim X < dim U")
    };
    let consts = structural_constants(ambient, dim_u, dim_x, bits)?;
    let ratio = Rat::from(deg_u.clone()) / Rat::from(omega.clone());
    let sharp = consts.c_sharp.mul(m_k).scale(&ratio);
    let floor_const = Interval::exact(consts.c1_floor_sq.clone()).sqrt(bits)?;
    let floor = floor_const.mul(m_k).scale(&ratio);

    let mut bounds = vec![
        NamedBound {
            name: "thm13_sharp".into(),
            symbolic: format!(
                "c({ambient},{dim_u},{dim_x}) * m_K * {deg_u}/{omega}  (c^2 = {})",
                crate::rat_to_string(&consts.c_sharp_sq)
            ),
            value: sharp,
            holds_for_point: None,
        },
        NamedBound {
            name: "thm13_floor".into(),
            symbolic: format!("N^(-3/2) 2^(-N) * m_K * {deg_u}/{omega}"),
            value: floor,
            holds_for_point: None,
        },
    ];

    // the monomial form at the minimizing lambda, when the monomial value
    // is a known rational
    let free = x.point().free_exponents(&lambda);
    let monomial_rational = x
        .point()
        .generators()
        .iter()
        .zip(&free)
        .try_fold(Rat::one(), |acc, (g, e)| {
            use num::ToPrimitive;
            let v = g.value.as_ref()?;
            let exp = e.to_i64()?;
            let mut term = Rat::one();
            let base = if exp >= 0 { v.clone() } else { v.recip() };
            for _ in 0..exp.unsigned_abs() {
                term *= &base;
            }
            Some(acc * term)
        });
    if let Some(r) = monomial_rational {
        // height ignores the root-of-unity torsion factor
        let h_alpha_lambda = rational_height(&r)?;
        let quotient = QuotientLattice::new(x.gamma().clone(), u.gamma().clone())?;
        let norm_sq = quotient.norm_sq(&lambda)?;
        let k = dim_u - dim_x;
        // 2/((N+1) sqrt(k)) * h(alpha^lambda) / ||lambda||_perp
        let denom_sq = Rat::from(Int::from(((ambient + 1) * (ambient + 1) * k) as i64)) * &norm_sq;
        let inv_denom = Interval::exact(denom_sq).sqrt(bits)?.recip()?;
        let monomial_bound = h_alpha_lambda
            .interval(bits)
            .mul(&inv_denom)
            .scale(&Rat::from(Int::from(2)));
        bounds.push(NamedBound {
            name: "monomial_bound".into(),
            symbolic: format!(
                "2/((N+1) sqrt({k})) * {} / sqrt({})",
                h_alpha_lambda.symbolic(),
                crate::rat_to_string(&norm_sq)
            ),
            value: monomial_bound,
            holds_for_point: None,
        });
    }

    if let Some(h) = &report.point_height {
        for b in bounds.iter_mut() {
            b.holds_for_point = certify_point_ge(h, &b.value, bits);
        }
    }
    report.omega = Some(omega);
    report.lambda = Some(lambda);
    report.bounds = bounds;
    Ok(report)
}

/// Lower bound of the codimension corollary:
/// `mu_abs(X) >= 2^{-N} N^{-2} m(K) (deg U_X / deg X)^{1/codim}`, plus the
/// sharper intermediate form from its proof.
pub fn cor15_bound(x: &TorusTranslate, m_k: &Interval, m_k_symbolic: &str, bits: u32) -> Result<BoundReport> {
    let ambient = x.ambient_dim();
    let closure = torsion_closure(x)?;
    let u = &closure.translate;
    let dim_x = x.dim();
    let dim_u = u.dim();
    let deg_x = translate_degree(x)?;
    let deg_u = translate_degree(u)?;
    let point_height = x
        .rational_coordinates()
        .map(|c| rational_point_height(&c))
        .transpose()?;
    let conditional = matches!(
        x.point().independence(),
        crate::torus::Independence::Asserted
    );
    let mut report = BoundReport {
        ambient,
        dim_x,
        dim_u,
        deg_x: deg_x.clone(),
        deg_u: deg_u.clone(),
        omega: None,
        lambda: None,
        m_k_symbolic: m_k_symbolic.to_string(),
        m_k: m_k.clone(),
        point_height,
        bounds: Vec::new(),
        torsion_variety: dim_x == dim_u,
        conditional_on_independence: conditional,
    };
    if report.torsion_variety {
        report.bounds.push(NamedBound {
            name: "cor15".into(),
            symbolic: "0 (deg U = deg X exponent undefined)".into(),
            value: Interval::zero(),
            holds_for_point: Some(true),
        });
        return Ok(report);
    }
    let k = (dim_u - dim_x) as u32;
    let consts = structural_constants(ambient, dim_u, dim_x, bits)?;
    let ratio = Rat::from(deg_u.clone()) / Rat::from(deg_x.clone());
    let ratio_root = Interval::exact(ratio).kth_root(k, bits)?;
    let printed = Interval::exact(consts.c4_floor.clone())
        .mul(m_k)
        .mul(&ratio_root);
    let sharp = consts.c4_sharp.mul(m_k).mul(&ratio_root);
    let mut bounds = vec![
        NamedBound {
            name: "cor15_printed".into(),
            symbolic: format!(
                "2^(-N) N^(-2) * m_K * ({deg_u}/{})^(1/{k})",
                report.deg_x
            ),
            value: printed,
            holds_for_point: None,
        },
        NamedBound {
            name: "cor15_sharp".into(),
            symbolic: format!(
                "sqrt(pi)/((N+1) sqrt({k})) (C(N,n)C(N,p) Gamma(1+{k}/2)^2)^(-1/(2*{k})) * m_K * ({deg_u}/{})^(1/{k})",
                report.deg_x
            ),
            value: sharp,
            holds_for_point: None,
        },
    ];
    if let Some(h) = &report.point_height {
        for b in bounds.iter_mut() {
            b.holds_for_point = certify_point_ge(h, &b.value, bits);
        }
    }
    report.bounds = bounds;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(coeffs: &[i64]) -> AlgebraicNumber {
        AlgebraicNumber::from_coeffs(coeffs.iter().map(|&c| Int::from(c)).collect()).unwrap()
    }

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(Int::from(p), Int::from(q))
    }

    fn tol(exp: u32) -> Rat {
        Rat::new(Int::one(), Int::from(10u32).pow(exp))
    }

    fn dec(s: &str) -> Rat {
        let (ip, fp) = s.split_once('.').unwrap();
        let den = Int::from(10u32).pow(fp.len() as u32);
        Rat::new(format!("{ip}{fp}").parse::<Int>().unwrap(), den)
    }

    #[test]
    fn algebraic_number_normalization() {
        let p = AlgebraicNumber::from_coeffs(vec![Int::from(-2), Int::from(2)]).unwrap();
        assert_eq!(p.coeffs(), &[Int::from(-1), Int::one()]);
        assert!(AlgebraicNumber::from_coeffs(vec![Int::zero()]).is_err());
        assert!(AlgebraicNumber::from_coeffs(vec![Int::from(3)]).is_err());
        assert!(AlgebraicNumber::from_coeffs(vec![Int::zero(), Int::one()]).is_err());
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), vec![Int::from(-1), Int::one()]);
        assert_eq!(cyclotomic(2), vec![Int::one(), Int::one()]);
        assert_eq!(cyclotomic(3), vec![Int::one(), Int::one(), Int::one()]);
        assert_eq!(cyclotomic(4), vec![Int::one(), Int::zero(), Int::one()]);
        assert_eq!(
            cyclotomic(6),
            vec![Int::one(), Int::from(-1), Int::one()]
        );
        // phi(105) has a coefficient -2
        let c105 = cyclotomic(105);
        assert!(c105.iter().any(|c| *c == Int::from(-2)));
        assert_eq!(c105.len() - 1, euler_phi(105) as usize);
    }

    #[test]
    fn root_of_unity_detection() {
        assert!(is_root_of_unity(&alg(&[1, 1, 1]))); // x^2 + x + 1
        assert!(is_root_of_unity(&alg(&[-1, 1]))); // x - 1
        assert!(!is_root_of_unity(&alg(&[-1, -1, 1]))); // x^2 - x - 1
        assert!(!is_root_of_unity(&alg(&[-2, 1]))); // x - 2
        // product of cyclotomics
        let p = alg(&[1, 2, 2, 2, 1]); // (x^2+x+1)^2
        assert!(is_root_of_unity(&p));
        // mixed: (x-1)(x-2) has a non-torsion root
        assert!(!is_root_of_unity(&alg(&[2, -3, 1])));
    }

    #[test]
    fn mahler_golden_ratio() {
        let p = alg(&[-1, -1, 1]);
        let h = mahler_height(&p, &tol(12), 1 << 15).unwrap();
        assert!(h.width() <= tol(12));
        let target = dec("0.24060591252980172374887945671218421157");
        assert!((h.mid() - &target).abs() < tol(11));
        // enclosure against the crate's independent route
        let direct = schinzel_constant(256);
        assert!(h.lo() <= direct.hi() && direct.lo() <= h.hi());
    }

    #[test]
    fn mahler_simple_cases() {
        // x - 2 -> log 2
        let h = mahler_height(&alg(&[-2, 1]), &tol(12), 1 << 15).unwrap();
        let l2 = crate::interval::ln2(256);
        assert!(h.lo() <= l2.hi() && l2.lo() <= h.hi());

        // cyclotomics -> exactly zero
        for k in [1u64, 2, 3, 4, 5, 6, 12] {
            let coeffs: Vec<Int> = cyclotomic(k);
            let p = AlgebraicNumber::from_coeffs(coeffs).unwrap();
            let h = mahler_height(&p, &tol(12), 1 << 15).unwrap();
            assert!(h.is_exact() && h.lo().is_zero(), "Phi_{k} must have height 0");
        }

        // 2x^2 - x + 2: both roots on the unit circle, M = 2, h = log(2)/2
        let h = mahler_height(&alg(&[2, -1, 2]), &tol(12), 1 << 15).unwrap();
        let half_l2 = crate::interval::ln2(256).scale(&rat(1, 2));
        assert!(h.lo() <= half_l2.hi() && half_l2.lo() <= h.hi());

        // Lehmer's polynomial: M ~ 1.17628, degree 10
        let lehmer = alg(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let h = mahler_height(&lehmer, &tol(12), 1 << 15).unwrap();
        let target = dec("0.01623576120101885"); // log(1.17628...)/10
        assert!((h.mid() - &target).abs() < tol(10));
        assert!(h.lo().is_positive());
    }

    #[test]
    fn mahler_is_multiplicative_over_factors() {
        // M(PQ) = M(P) M(Q): heights rescale by the degrees
        let p = alg(&[-1, -1, 1]); // golden ratio, degree 2
        let q = alg(&[-2, 1]); // 2, degree 1
        let prod_coeffs = {
            // (x^2 - x - 1)(x - 2) = x^3 - 3x^2 + x + 2
            vec![Int::from(2), Int::one(), Int::from(-3), Int::one()]
        };
        let pq = AlgebraicNumber::from_coeffs(prod_coeffs).unwrap();
        let h_pq = mahler_height(&pq, &tol(13), 1 << 15).unwrap();
        let expected = mahler_height(&p, &tol(14), 1 << 15)
            .unwrap()
            .scale(&rat(2, 3))
            .add(&mahler_height(&q, &tol(14), 1 << 15).unwrap().scale(&rat(1, 3)));
        assert!(
            h_pq.lo() <= expected.hi() && expected.lo() <= h_pq.hi(),
            "mahler not multiplicative: {h_pq:?} vs {expected:?}"
        );
    }

    #[test]
    fn point_heights() {
        let h = rational_point_height(&[rat(1, 1), rat(1, 1)]).unwrap();
        assert!(h.is_zero());
        let h = rational_point_height(&[rat(2, 1), rat(3, 1)]).unwrap();
        assert_eq!(h.base(), &Int::from(3));
        let h = rational_point_height(&[rat(4, 1), rat(8, 1)]).unwrap();
        assert_eq!(h.base(), &Int::from(8));
        let h = rational_point_height(&[rat(1, 2), rat(3, 4)]).unwrap();
        assert_eq!(h.base(), &Int::from(4));
        assert!(rational_point_height(&[rat(0, 1)]).is_err());
        // powers scale heights: h(a^k) = k h(a) on rationals
        let a = rat(3, 5);
        let h1 = rational_height(&a).unwrap();
        let h3 = rational_height(&(&a * &a * &a)).unwrap();
        assert_eq!(h3.base(), &h1.base().pow(3));
    }

    #[test]
    fn point_height_matches_factorization_route() {
        use crate::factor::factorize_rat;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let coords: Vec<Rat> = (0..3)
                .map(|_| {
                    loop {
                        let n = rng.gen_range(-30i64..=30);
                        let d = rng.gen_range(1i64..=30);
                        if n != 0 {
                            return rat(n, d);
                        }
                    }
                })
                .collect();
            let h = rational_point_height(&coords).unwrap();
            // independent route: denominators by prime, then archimedean max
            let mut denom = Rat::one();
            let mut primes: Vec<Int> = Vec::new();
            for c in &coords {
                for (p, _) in factorize_rat(c) {
                    if !primes.contains(&p) {
                        primes.push(p);
                    }
                }
            }
            for p in &primes {
                let max_neg = coords
                    .iter()
                    .map(|c| -factorize_rat(c).get(p).copied().unwrap_or(0))
                    .max()
                    .unwrap()
                    .max(0);
                for _ in 0..max_neg {
                    denom *= Rat::from(p.clone());
                }
            }
            let arch = coords
                .iter()
                .map(|c| c.abs())
                .fold(Rat::one(), |a, b| if b > a { b } else { a });
            let expected = denom * arch;
            assert_eq!(Rat::from(h.base().clone()), expected);
        }
    }

    #[test]
    fn classical_constants() {
        let b = classical_lower_bounds(1, &Rat::one(), 192).unwrap();
        let target = dec("0.13411982603617503121672994443551563662");
        assert!((b.abelian.mid() - &target).abs() < tol(30));
        let target = dec("0.24060591252980172374887945671218421157");
        assert!((b.schinzel.mid() - &target).abs() < tol(30));
        let target = dec("0.00249787051701546165426820474326713393");
        assert!((b.dobrowolski.mid() - &target).abs() < tol(20));
        // monotone decay sanity
        let b10 = classical_lower_bounds(10, &Rat::one(), 128).unwrap();
        let b100 = classical_lower_bounds(100, &Rat::one(), 128).unwrap();
        assert!(b10.dobrowolski.lo() > b100.dobrowolski.hi());
        assert!(b10.amoroso_delsinne.lo() > b100.amoroso_delsinne.hi());
    }

    #[test]
    fn structural_constant_values() {
        let c = structural_constants(2, 1, 0, 192).unwrap();
        assert_eq!(c.c_sharp_sq, rat(2, 9));
        let target = dec("0.47140452079103168293389624140323269286");
        assert!((c.c_sharp.mid() - &target).abs() < tol(30));
        assert!(c.c_floor_holds);
        assert!(c.c3_coarse_holds);
        assert!(c.c4_floor_holds);
        assert_eq!(c.c4_floor, rat(1, 16));
        // floor value check: c(2,1,0) >= 2^-2 2^-3/2 ~ 0.08839
        assert!(*c.c_sharp.lo() > dec("0.088"));

        // every small dimension combination satisfies the printed floors
        for n_amb in 1..=5usize {
            for p in 1..=n_amb {
                for n in 0..p {
                    let c = structural_constants(n_amb, p, n, 128).unwrap();
                    assert!(c.c_floor_holds, "c floor fails at ({n_amb},{p},{n})");
                    assert!(c.c3_coarse_holds, "c3 coarse fails at ({n_amb},{p},{n})");
                    assert!(c.c4_floor_holds, "c4 floor fails at ({n_amb},{p},{n})");
                }
            }
        }
        assert!(structural_constants(2, 3, 0, 64).is_err());
    }

    #[test]
    fn worked_example_thm13() {
        // X = (4, 8): bound = (2/sqrt 18) log 2 * 3 ~ 0.9803, h = log 8
        let x = TorusTranslate::from_rational_point(&[rat(4, 1), rat(8, 1)]).unwrap();
        let m_k = crate::interval::ln2(192);
        let report = thm13_bound(&x, &m_k, "log(2)", 192).unwrap();
        assert_eq!(report.deg_u, Int::from(3));
        assert_eq!(report.omega, Some(Int::one()));
        let sharp = &report.bounds[0];
        let target = dec("0.98025814346854719171390172363523338129");
        assert!((sharp.value.mid() - &target).abs() < tol(9));
        assert!(sharp.value.width() < tol(9));
        assert_eq!(sharp.holds_for_point, Some(true));
        // monomial form: (2/3) log 2 sqrt(13) ~ 1.6661 <= log 8
        let mono = report.bounds.iter().find(|b| b.name == "monomial_bound").unwrap();
        let target = dec("1.66611846730145259642344069075973903073");
        assert!((mono.value.mid() - &target).abs() < tol(9));
        assert_eq!(mono.holds_for_point, Some(true));
        let h = report.point_height.unwrap();
        assert_eq!(h.base(), &Int::from(8));

        // torsion point: bound 0
        let t = TorusTranslate::from_rational_point(&[rat(-1, 1), rat(1, 1)]).unwrap();
        let report = thm13_bound(&t, &m_k, "log(2)", 128).unwrap();
        assert!(report.torsion_variety);
        assert!(report.bounds[0].value.is_exact());
    }

    #[test]
    fn worked_example_cor15() {
        let x = TorusTranslate::from_rational_point(&[rat(4, 1), rat(8, 1)]).unwrap();
        let m_k = crate::interval::ln2(192);
        let report = cor15_bound(&x, &m_k, "log(2)", 192).unwrap();
        // printed: (1/16) log 2 * 3 ~ 0.1300
        let printed = &report.bounds[0];
        let target = dec("0.12996509635498974551573102277340810651");
        assert!((printed.value.mid() - &target).abs() < tol(9));
        assert_eq!(printed.holds_for_point, Some(true));
        // sharp >= printed here
        let sharp = &report.bounds[1];
        assert!(sharp.value.lo() >= printed.value.lo());
        assert_eq!(sharp.holds_for_point, Some(true));

        // point with U = G_m^N: bound = 2^-N N^-2 m_K
        let y = TorusTranslate::from_rational_point(&[rat(2, 1), rat(3, 1)]).unwrap();
        let report = cor15_bound(&y, &m_k, "log(2)", 128).unwrap();
        assert_eq!(report.deg_u, Int::one());
        let expected = crate::interval::ln2(128).scale(&rat(1, 16));
        let got = &report.bounds[0].value;
        assert!(got.lo() <= expected.hi() && expected.lo() <= got.hi());
    }

    #[test]
    fn kronecker_property() {
        // mahler height is zero iff every root is a root of unity
        for coeffs in [
            vec![1i64, 1, 1],
            vec![-1, 0, 0, 1],
            vec![1, 0, 1],
            vec![-1, -1, 1],
            vec![-2, 1],
            vec![3, -1, 4, 1],
        ] {
            let p = alg(&coeffs);
            let h = mahler_height(&p, &tol(10), 1 << 15).unwrap();
            if is_root_of_unity(&p) {
                assert!(h.is_exact() && h.lo().is_zero());
            } else {
                assert!(h.lo().is_positive(), "nonzero height expected for {coeffs:?}");
            }
        }
    }
}

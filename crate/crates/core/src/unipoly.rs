//! Univariate polynomials over the rationals, with exact factorization into
//! irreducibles (squarefree split, Berlekamp modulo a small prime, Hensel
//! lifting, subset recombination). Degrees stay small here; clarity and
//! exactness over asymptotics.

use crate::{Error, Int, Rat, Result};
use num::{Integer, One, Signed, ToPrimitive, Zero};

/// Dense polynomial over `Q`, coefficients low to high, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            QPoly { coeffs: vec![c] }
        }
    }

    pub fn x() -> Self {
        QPoly { coeffs: vec![Rat::zero(), Rat::one()] }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut c = coeffs;
        while c.last().is_some_and(Rat::is_zero) {
            c.pop();
        }
        QPoly { coeffs: c }
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rat::from(Int::from(c))).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; zero polynomial returns `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn neg(&self) -> Self {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let v = &out[i + j] + a * b;
                out[i + j] = v;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn div_rem(&self, den: &Self) -> Result<(Self, Self)> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = den.degree().expect("nonzero");
        let lead = den.leading().expect("nonzero").clone();
        let mut rem = self.coeffs.clone();
        if rem.len() < den.coeffs.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let qlen = rem.len() - dd;
        let mut quot = vec![Rat::zero(); qlen];
        for k in (0..qlen).rev() {
            let q = &rem[k + dd] / &lead;
            if q.is_zero() {
                continue;
            }
            for (j, d) in den.coeffs.iter().enumerate() {
                let v = &rem[k + j] - &q * d;
                rem[k + j] = v;
            }
            quot[k] = q;
        }
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    pub fn rem(&self, den: &Self) -> Result<Self> {
        Ok(self.div_rem(den)?.1)
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, den: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(den)?;
        if !r.is_zero() {
            return Err(Error::Invalid("polynomial division is not exact".into()));
        }
        Ok(q)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Rat::from(Int::from(i as i64 + 1)))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic gcd, via a primitive pseudo-remainder sequence over the
    /// integers (keeps coefficient sizes tame).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let (_, mut a) = self.primitive_parts();
        let (_, mut b) = other.primitive_parts();
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while b.len() > 1 {
            // pseudo-remainder: repeatedly r := lc(b) r - lc(r) x^{dr-db} b
            let db = b.len() - 1;
            let lead = b.last().expect("nonzero").clone();
            let mut rem = a.clone();
            while rem.len() > db {
                let dr = rem.len() - 1;
                let top = rem.last().expect("nonzero").clone();
                for c in rem.iter_mut() {
                    *c = &*c * &lead;
                }
                for (j, d) in b.iter().enumerate() {
                    let v = &rem[dr - db + j] - &top * d;
                    rem[dr - db + j] = v;
                }
                while rem.last().is_some_and(Int::is_zero) {
                    rem.pop();
                }
                if rem.is_empty() {
                    break;
                }
            }
            if rem.is_empty() {
                return QPoly::from_int_vec(&b).monic();
            }
            // primitive part
            let mut g = Int::zero();
            for c in &rem {
                g = g.gcd(c);
            }
            for c in rem.iter_mut() {
                *c = &*c / &g;
            }
            a = b;
            b = rem;
        }
        if b.len() == 1 {
            return QPoly::one();
        }
        QPoly::from_int_vec(&a).monic()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Rational content and primitive integer coefficients (positive lead).
    pub fn primitive_parts(&self) -> (Rat, Vec<Int>) {
        if self.is_zero() {
            return (Rat::zero(), Vec::new());
        }
        let mut lcm = Int::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<Int> = self.coeffs.iter().map(|c| c.numer() * &lcm / c.denom()).collect();
        let mut g = Int::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        let mut prim: Vec<Int> = ints.iter().map(|c| c / &g).collect();
        let mut sign = Int::one();
        if prim.last().expect("nonzero").is_negative() {
            for c in prim.iter_mut() {
                *c = -c.clone();
            }
            sign = -sign;
        }
        (Rat::new(sign * g, lcm), prim)
    }

    pub fn from_int_vec(coeffs: &[Int]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|c| Rat::from(c.clone())).collect())
    }

    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = crate::rat_to_string(c);
            let term = match i {
                0 => cs,
                1 if c.is_one() => var.to_string(),
                1 => format!("{cs}*{var}"),
                _ if c.is_one() => format!("{var}^{i}"),
                _ => format!("{cs}*{var}^{i}"),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

/// Squarefree decomposition (Yun): returns `[(g_i, i)]` with
/// `f = lc * prod g_i^i`, each `g_i` monic squarefree, pairwise coprime.
pub fn squarefree_decomposition(f: &QPoly) -> Vec<(QPoly, u32)> {
    if f.is_constant() {
        return Vec::new();
    }
    let f = f.monic();
    let df = f.derivative();
    let a = f.gcd(&df);
    if a.is_one() {
        return vec![(f, 1)];
    }
    let mut out = Vec::new();
    let mut b = f.div_exact(&a).expect("gcd divides");
    let mut c = df.div_exact(&a).expect("gcd divides derivative");
    let mut i = 1u32;
    loop {
        let d = c.sub(&b.derivative());
        let g = b.gcd(&d);
        if !g.is_one() {
            out.push((g.clone(), i));
        }
        b = b.div_exact(&g).expect("gcd divides");
        c = d.div_exact(&g).expect("gcd divides");
        i += 1;
        if b.is_constant() {
            break;
        }
    }
    out
}

// ---- arithmetic modulo a small prime -------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
struct PPoly {
    p: u64,
    c: Vec<u64>, // low to high, no trailing zeros
}

impl PPoly {
    fn trim(mut c: Vec<u64>, p: u64) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        PPoly { p, c }
    }

    fn zero(p: u64) -> Self {
        PPoly { p, c: Vec::new() }
    }

    fn from_int(f: &[Int], p: u64) -> Self {
        let pi = Int::from(p);
        Self::trim(
            f.iter().map(|x| x.mod_floor(&pi).to_u64().expect("reduced")).collect(),
            p,
        )
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn is_one(&self) -> bool {
        self.c == [1]
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        Self::trim(out, p)
    }

    fn sub(&self, other: &Self) -> Self {
        let p = self.p;
        let n = self.c.len().max(other.c.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            *o = (a + p - b) % p;
        }
        Self::trim(out, p)
    }

    fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => {
                let inv = mod_inv(l, self.p);
                Self::trim(self.c.iter().map(|&x| x * inv % self.p).collect(), self.p)
            }
        }
    }

    fn div_rem(&self, den: &Self) -> (Self, Self) {
        assert!(!den.is_zero());
        let p = self.p;
        if self.c.len() < den.c.len() {
            return (Self::zero(p), self.clone());
        }
        let dd = den.degree();
        let lead_inv = mod_inv(*den.c.last().expect("nonzero"), p);
        let mut rem = self.c.clone();
        let qlen = rem.len() - dd;
        let mut quot = vec![0u64; qlen];
        for k in (0..qlen).rev() {
            let q = rem[k + dd] * lead_inv % p;
            if q == 0 {
                continue;
            }
            quot[k] = q;
            for (j, &d) in den.c.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p - q * d % p) % p;
            }
        }
        (Self::trim(quot, p), Self::trim(rem, p))
    }

    fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return Self::zero(self.p);
        }
        Self::trim(
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * ((i as u64 + 1) % self.p) % self.p)
                .collect(),
            self.p,
        )
    }

    fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut acc = Self::trim(vec![1], self.p);
        let mut base = self.div_rem(modulus).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).div_rem(modulus).1;
            }
            base = base.mul(&base).div_rem(modulus).1;
            e >>= 1;
        }
        acc
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Berlekamp factorization of a monic squarefree polynomial over `F_p`.
fn berlekamp(f: &PPoly) -> Vec<PPoly> {
    let p = f.p;
    let n = f.degree();
    if n == 1 {
        return vec![f.monic()];
    }
    // rows of x^{p i} mod f
    let x = PPoly::trim(vec![0, 1], p);
    let xp = x.pow_mod(p, f);
    let mut pow = PPoly::trim(vec![1], p);
    let mut mat: Vec<Vec<u64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![0u64; n];
        for (j, &c) in pow.c.iter().enumerate() {
            row[j] = c;
        }
        // subtract x^i (the identity)
        row[i] = (row[i] + p - 1) % p;
        mat.push(row);
        if i + 1 < n {
            pow = pow.mul(&xp).div_rem(f).1;
        }
    }
    // nullspace of the transpose action: v with v (x^{p i} - x^i) = 0, i.e.
    // solve M^T v = 0 where rows of M are the residues
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| mat[j][i]).collect())
        .collect();
    // Gaussian elimination over F_p, tracking pivot columns
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0usize;
    for col in 0..n {
        let Some(pr) = (r..n).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = mod_inv(a[r][col], p);
        for j in 0..n {
            a[r][j] = a[r][j] * inv % p;
        }
        for i in 0..n {
            if i != r && a[i][col] != 0 {
                let factor = a[i][col];
                for j in 0..n {
                    a[i][j] = (a[i][j] + p - factor * a[r][j] % p) % p;
                }
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis: Vec<PPoly> = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for &(ri, ci) in &pivots {
            v[ci] = (p - a[ri][free] % p) % p;
        }
        basis.push(PPoly::trim(v, p));
    }
    let r_factors = basis.len();
    let mut factors = vec![f.monic()];
    if r_factors <= 1 {
        return factors;
    }
    for v in basis.iter().filter(|v| v.c.len() > 1) {
        if factors.len() == r_factors {
            break;
        }
        let drained: Vec<PPoly> = std::mem::take(&mut factors);
        let mut next = Vec::new();
        for g in drained {
            if g.degree() == 1 {
                next.push(g);
                continue;
            }
            let mut pieces = vec![g];
            for s in 0..p {
                if pieces.iter().all(|q| q.degree() <= 1) {
                    break;
                }
                let shifted = v.sub(&PPoly::trim(vec![s], p));
                let mut refined = Vec::new();
                for q in pieces.drain(..) {
                    if q.degree() <= 1 {
                        refined.push(q);
                        continue;
                    }
                    let d = q.gcd(&shifted);
                    if d.is_one() || d.degree() == q.degree() {
                        refined.push(q);
                    } else {
                        let (quo, _) = q.div_rem(&d);
                        refined.push(d.monic());
                        refined.push(quo.monic());
                    }
                }
                pieces = refined;
            }
            next.extend(pieces);
        }
        factors = next;
    }
    factors
}

// ---- Hensel lifting --------------------------------------------------------

fn int_mod(a: &Int, m: &Int) -> Int {
    a.mod_floor(m)
}

fn zpoly_mod(f: &[Int], m: &Int) -> Vec<Int> {
    let mut out: Vec<Int> = f.iter().map(|c| int_mod(c, m)).collect();
    while out.last().is_some_and(Int::is_zero) {
        out.pop();
    }
    out
}

fn zpoly_mul_mod(a: &[Int], b: &[Int], m: &Int) -> Vec<Int> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let v = (&out[i + j] + x * y).mod_floor(m);
            out[i + j] = v;
        }
    }
    zpoly_mod(&out, m)
}

/// Division with remainder modulo `m` by a monic divisor.
fn zpoly_divrem_monic_mod(num: &[Int], den: &[Int], m: &Int) -> (Vec<Int>, Vec<Int>) {
    assert!(den.last().is_some_and(Int::is_one), "divisor must be monic");
    if num.len() < den.len() {
        return (Vec::new(), num.to_vec());
    }
    let dd = den.len() - 1;
    let mut rem: Vec<Int> = num.to_vec();
    let qlen = rem.len() - dd;
    let mut quot = vec![Int::zero(); qlen];
    for k in (0..qlen).rev() {
        let q = int_mod(&rem[k + dd], m);
        if q.is_zero() {
            rem[k + dd] = Int::zero();
            continue;
        }
        quot[k] = q.clone();
        for (j, d) in den.iter().enumerate() {
            let v = (&rem[k + j] - &q * d).mod_floor(m);
            rem[k + j] = v;
        }
    }
    (zpoly_mod(&quot, m), zpoly_mod(&rem, m))
}

/// Lifts a coprime monic factorization `f = u w mod p` to modulus `p^K`
/// (linear steps). `f`, `u`, `w` monic.
fn hensel_lift_pair(
    f: &[Int],
    u0: &PPoly,
    w0: &PPoly,
    p: u64,
    steps: u32,
) -> (Vec<Int>, Vec<Int>) {
    // Bezout: a u + b w = 1 over F_p
    let (a0, b0) = {
        // extended Euclid over F_p
        let mut r0 = u0.clone();
        let mut r1 = w0.clone();
        let mut s0 = PPoly::trim(vec![1], p);
        let mut s1 = PPoly::zero(p);
        let mut t0 = PPoly::zero(p);
        let mut t1 = PPoly::trim(vec![1], p);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let ns = s0.sub(&q.mul(&s1));
            let nt = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        // r0 = gcd = constant; normalize to 1
        let inv = mod_inv(*r0.c.last().expect("coprime factors"), p);
        let a = PPoly::trim(s0.c.iter().map(|&c| c * inv % p).collect(), p);
        let b = PPoly::trim(t0.c.iter().map(|&c| c * inv % p).collect(), p);
        (a, b)
    };
    let to_int = |q: &PPoly| -> Vec<Int> { q.c.iter().map(|&c| Int::from(c)).collect() };
    let a_int = to_int(&a0);
    let b_int = to_int(&b0);
    let mut u: Vec<Int> = to_int(u0);
    let mut w: Vec<Int> = to_int(w0);
    let p_int = Int::from(p);
    let mut modulus = p_int.clone();
    for _ in 1..steps {
        let next = &modulus * &p_int;
        // e = (f - u w) / modulus  (exact), then work mod p
        let uw = zpoly_mul_full(&u, &w);
        let mut e: Vec<Int> = Vec::with_capacity(f.len().max(uw.len()));
        for i in 0..f.len().max(uw.len()) {
            let x = f.get(i).cloned().unwrap_or_else(Int::zero);
            let y = uw.get(i).cloned().unwrap_or_else(Int::zero);
            let diff = (x - y).mod_floor(&next);
            e.push(diff / &modulus);
        }
        let e = zpoly_mod(&e, &p_int);
        // sigma = b e mod u, tau = a e + w * ((b e) div u), all mod p
        let be = zpoly_mul_mod(&b_int, &e, &p_int);
        let (q, sigma) = zpoly_divrem_monic_mod(&be, &zpoly_mod(&u, &p_int), &p_int);
        let ae = zpoly_mul_mod(&a_int, &e, &p_int);
        let wq = zpoly_mul_mod(&zpoly_mod(&w, &p_int), &q, &p_int);
        let tau = zpoly_mod(
            &{
                let n = ae.len().max(wq.len());
                (0..n)
                    .map(|i| {
                        (ae.get(i).cloned().unwrap_or_else(Int::zero)
                            + wq.get(i).cloned().unwrap_or_else(Int::zero))
                        .mod_floor(&p_int)
                    })
                    .collect::<Vec<_>>()
            },
            &p_int,
        );
        // u += modulus * sigma; w += modulus * tau
        for (i, s) in sigma.iter().enumerate() {
            if i >= u.len() {
                u.resize(i + 1, Int::zero());
            }
            let v = (&u[i] + &modulus * s).mod_floor(&next);
            u[i] = v;
        }
        for (i, t) in tau.iter().enumerate() {
            if i >= w.len() {
                w.resize(i + 1, Int::zero());
            }
            let v = (&w[i] + &modulus * t).mod_floor(&next);
            w[i] = v;
        }
        u = zpoly_mod(&u, &next);
        w = zpoly_mod(&w, &next);
        modulus = next;
    }
    (u, w)
}

fn zpoly_mul_full(a: &[Int], b: &[Int]) -> Vec<Int> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let v = &out[i + j] + x * y;
            out[i + j] = v;
        }
    }
    out
}

/// Lifts the full monic factor list by binary tree splitting.
fn hensel_lift_tree(f: &[Int], factors: &[PPoly], p: u64, steps: u32) -> Vec<Vec<Int>> {
    if factors.len() == 1 {
        let modulus = Int::from(p).pow(steps);
        return vec![zpoly_mod(f, &modulus)];
    }
    let half = factors.len() / 2;
    let left: PPoly = factors[..half]
        .iter()
        .fold(PPoly::trim(vec![1], p), |acc, g| acc.mul(g));
    let right: PPoly = factors[half..]
        .iter()
        .fold(PPoly::trim(vec![1], p), |acc, g| acc.mul(g));
    let (u, w) = hensel_lift_pair(f, &left, &right, p, steps);
    let mut out = hensel_lift_tree(&u, &factors[..half], p, steps);
    out.extend(hensel_lift_tree(&w, &factors[half..], p, steps));
    out
}

fn symmetric(c: &Int, m: &Int) -> Int {
    let r = c.mod_floor(m);
    if &r * Int::from(2) > *m {
        r - m
    } else {
        r
    }
}

/// Factorization of a monic squarefree integer polynomial into monic integer
/// irreducibles.
fn factor_monic_squarefree(f: &[Int]) -> Vec<Vec<Int>> {
    let d = f.len() - 1;
    if d == 1 {
        return vec![f.to_vec()];
    }
    // pick a prime keeping f squarefree; the discriminant is nonzero, so
    // only finitely many primes fail
    let p = {
        let mut found = None;
        let mut candidate = 3u64;
        while found.is_none() {
            if crate::factor::is_prime(&Int::from(candidate)) {
                let fp = PPoly::from_int(f, candidate);
                if fp.degree() == d && fp.gcd(&fp.derivative()).is_one() {
                    found = Some(candidate);
                }
            }
            candidate += 2;
            assert!(candidate < (1 << 20), "no squarefree reduction prime found");
        }
        found.expect("loop sets it")
    };
    let fp = PPoly::from_int(f, p).monic();
    let mut modular = berlekamp(&fp);
    modular.sort_by(|a, b| a.c.len().cmp(&b.c.len()).then_with(|| a.c.cmp(&b.c)));
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }
    // Landau-Mignotte bound: factor coefficients bounded by 2^d ||f||_2
    let norm_sq: Int = f.iter().map(|c| c * c).sum();
    let bound = (Int::one() << d) * (norm_sq.sqrt() + 1);
    let mut steps = 1u32;
    let mut modulus = Int::from(p);
    while modulus < Int::from(2) * &bound + 1 {
        modulus *= Int::from(p);
        steps += 1;
    }
    let lifted = hensel_lift_tree(f, &modular, p, steps);

    // subset recombination
    let mut remaining: Vec<Vec<Int>> = lifted;
    let mut current = f.to_vec();
    let mut out: Vec<Vec<Int>> = Vec::new();
    let mut size = 1usize;
    'outer: while 2 * size <= remaining.len() {
        let idxs: Vec<usize> = (0..remaining.len()).collect();
        for subset in combinations(&idxs, size) {
            let mut cand = vec![Int::one()];
            for &i in &subset {
                cand = zpoly_mul_mod(&cand, &remaining[i], &modulus);
            }
            let cand_sym: Vec<Int> = cand.iter().map(|c| symmetric(c, &modulus)).collect();
            if let Some(q) = try_divide(&current, &cand_sym) {
                out.push(cand_sym);
                current = q;
                let mut keep = Vec::new();
                for (i, g) in remaining.drain(..).enumerate() {
                    if !subset.contains(&i) {
                        keep.push(g);
                    }
                }
                remaining = keep;
                continue 'outer;
            }
        }
        size += 1;
    }
    if current.len() > 1 {
        out.push(current);
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = items.len();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn try_divide(num: &[Int], den: &[Int]) -> Option<Vec<Int>> {
    if den.len() < 2 || num.len() < den.len() {
        return None;
    }
    if !den.last().is_some_and(Int::is_one) {
        return None;
    }
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = rem.len() - dd;
    let mut quot = vec![Int::zero(); qlen];
    for k in (0..qlen).rev() {
        let q = rem[k + dd].clone();
        if q.is_zero() {
            continue;
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

/// Full factorization over `Q`: returns monic irreducible factors with
/// multiplicities, sorted (degree, then coefficients); the rational content
/// and leading coefficient are dropped.
pub fn factor(poly: &QPoly) -> Vec<(QPoly, u32)> {
    if poly.is_constant() {
        return Vec::new();
    }
    let mut out: Vec<(QPoly, u32)> = Vec::new();
    for (sf, mult) in squarefree_decomposition(poly) {
        let (_, prim) = sf.primitive_parts();
        let d = prim.len() - 1;
        let lead = prim.last().expect("nonzero").clone();
        // monicize: l^{d-1} f(x/l) has integer coefficients a_i l^{d-1-i}
        let monic_int: Vec<Int> = if lead.is_one() {
            prim.clone()
        } else {
            (0..=d)
                .map(|i| {
                    if i == d {
                        Int::one()
                    } else {
                        &prim[i] * lead.pow((d - 1 - i) as u32)
                    }
                })
                .collect()
        };
        let factors_int = factor_monic_squarefree(&monic_int);
        for g in factors_int {
            let g_monic = if lead.is_one() {
                QPoly::from_int_vec(&g).monic()
            } else {
                // map back x -> l x and renormalize
                let mapped: Vec<Rat> = g
                    .iter()
                    .enumerate()
                    .map(|(i, c)| Rat::from(c * lead.pow(i as u32)))
                    .collect();
                QPoly::from_coeffs(mapped).monic()
            };
            out.push((g_monic, mult));
        }
    }
    // merge duplicates (possible across squarefree levels only by bugs, but
    // stay defensive about ordering)
    out.sort_by(|a, b| {
        a.0.deg_or_zero()
            .cmp(&b.0.deg_or_zero())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> QPoly {
        QPoly::from_int_coeffs(coeffs)
    }

    #[test]
    fn arithmetic_and_gcd() {
        let a = p(&[-1, 0, 1]); // x^2 - 1
        let b = p(&[1, 1]); // x + 1
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&b), b.monic());
        assert_eq!(a.eval(&Rat::from(Int::from(3))), Rat::from(Int::from(8)));
        let c = a.mul(&b);
        assert_eq!(c.degree(), Some(3));
        assert_eq!(c.div_exact(&a).unwrap(), b);
    }

    #[test]
    fn squarefree_split() {
        // (x-1)^2 (x+2)
        let f = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]));
        let sf = squarefree_decomposition(&f);
        assert_eq!(sf.len(), 2);
        let ones: Vec<_> = sf.iter().filter(|(_, m)| *m == 1).collect();
        assert_eq!(ones[0].0, p(&[2, 1]).monic());
        let twos: Vec<_> = sf.iter().filter(|(_, m)| *m == 2).collect();
        assert_eq!(twos[0].0, p(&[-1, 1]).monic());
    }

    #[test]
    fn factor_basics() {
        // x^2 - 1 = (x-1)(x+1)
        let fs = factor(&p(&[-1, 0, 1]));
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().any(|(g, m)| *g == p(&[-1, 1]) && *m == 1));
        assert!(fs.iter().any(|(g, m)| *g == p(&[1, 1]) && *m == 1));

        // x^2 + 1 irreducible
        let fs = factor(&p(&[1, 0, 1]));
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].0, p(&[1, 0, 1]));

        // t^2 - 3 t + 2
        let fs = factor(&p(&[2, -3, 1]));
        assert_eq!(fs.len(), 2);

        // x^2 - 2 irreducible
        let fs = factor(&p(&[-2, 0, 1]));
        assert_eq!(fs.len(), 1);

        // constants
        assert!(factor(&QPoly::constant(Rat::from(Int::from(7)))).is_empty());
    }

    #[test]
    fn factor_with_multiplicity_and_lead() {
        // 2 (x-1)^2 (x^2+x+1)
        let f = p(&[-1, 1]).pow(2).mul(&p(&[1, 1, 1])).scale(&Rat::from(Int::from(2)));
        let fs = factor(&f);
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().any(|(g, m)| *g == p(&[-1, 1]) && *m == 2));
        assert!(fs.iter().any(|(g, m)| *g == p(&[1, 1, 1]) && *m == 1));

        // non-monic irreducible: 2x^2 - x + 2 -> monic x^2 - x/2 + 1
        let f = p(&[2, -1, 2]);
        let fs = factor(&f);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].0, f.monic());
    }

    #[test]
    fn factor_products_reconstruct() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            // random product of small factors
            let mut f = QPoly::one();
            let nf = rng.gen_range(1..=3);
            for _ in 0..nf {
                let deg = rng.gen_range(1..=2);
                let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-4..=4)).collect();
                if c[deg] == 0 {
                    c[deg] = 1;
                }
                if deg == 1 && c[0] == 0 {
                    c[0] = 1; // avoid the factor x: places handle it, but keep
                              // this test about generic products
                }
                f = f.mul(&p(&c));
            }
            if f.is_constant() {
                continue;
            }
            let fs = factor(&f);
            // reconstruct the monic normalization
            let mut prod = QPoly::one();
            for (g, m) in &fs {
                prod = prod.mul(&g.pow(*m));
            }
            assert_eq!(prod, f.monic(), "factors of {:?} do not multiply back", f);
            // irreducibility spot check: factors of degree 2 have no rational root
            for (g, _) in &fs {
                if g.deg_or_zero() == 2 {
                    let (_, prim) = g.primitive_parts();
                    // rational roots p/q need p | prim[0], q | prim[2]
                    let p0 = &prim[0];
                    let p2 = &prim[2];
                    for dn in 1..=p2.abs().to_u64().unwrap_or(1).min(20) {
                        for nm in -(p0.abs().to_u64().unwrap_or(1).min(20) as i64)
                            ..=(p0.abs().to_u64().unwrap_or(1).min(20) as i64)
                        {
                            if nm == 0 || p0.is_zero() {
                                continue;
                            }
                            let cand = Rat::new(Int::from(nm), Int::from(dn));
                            assert!(
                                !g.eval(&cand).is_zero(),
                                "degree-2 factor {g:?} has rational root {cand}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn factor_cyclotomic_products() {
        // x^6 - 1 = phi_1 phi_2 phi_3 phi_6
        let mut c = vec![0i64; 7];
        c[0] = -1;
        c[6] = 1;
        let fs = factor(&p(&c));
        assert_eq!(fs.len(), 4);
        assert_eq!(fs.iter().map(|(g, _)| g.deg_or_zero()).sum::<usize>(), 6);
    }
}

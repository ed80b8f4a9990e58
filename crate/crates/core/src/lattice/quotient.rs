//! Quotient lattices `Gamma_X / Gamma_Y` with the metric induced on the
//! orthogonal complement of `Gamma_Y` inside the span of `Gamma_X`, exact
//! first-minimum enumeration, and the certified Minkowski upper bound.

use super::{rat_inverse, IntMatrix, Sublattice};
use crate::interval::{gamma_half_plus_one_sq, pi, Interval};
use crate::{Error, Int, Rat, Result};
use num::{Integer, One, Signed, Zero};

/// `Gamma_Y` inside `Gamma_X`, both saturated, with the quotient metric.
#[derive(Debug, Clone)]
pub struct QuotientLattice {
    gamma_x: Sublattice,
    gamma_y: Sublattice,
    /// Rows are lattice vectors of `Gamma_X` whose classes form a basis of
    /// the quotient.
    comp: IntMatrix,
    /// Gram matrix of the projected complement basis (positive definite).
    gram_perp: Vec<Vec<Rat>>,
    /// Inverse Gram matrix of the `Gamma_Y` basis (empty when rank 0).
    gram_y_inv: Vec<Vec<Rat>>,
}

/// Result of [`QuotientLattice::first_minimum`].
#[derive(Debug, Clone, PartialEq)]
pub enum FirstMinimum {
    /// `Gamma_X = Gamma_Y`: the quotient is trivial, there is no minimum.
    EmptyQuotient,
    Found { lambda: Vec<Int>, min_sq: Rat },
}

fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_sq_int(v: &[Int]) -> Rat {
    Rat::from(dot(v, v))
}

/// Flips the sign so the first nonzero entry is positive.
pub fn sign_normalize(mut v: Vec<Int>) -> Vec<Int> {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    v
}

impl QuotientLattice {
    pub fn new(gamma_x: Sublattice, gamma_y: Sublattice) -> Result<Self> {
        if gamma_x.ambient_dim() != gamma_y.ambient_dim() {
            return Err(Error::Dimension("quotient over different ambient spaces".into()));
        }
        if !gamma_x.is_saturated() || !gamma_y.is_saturated() {
            return Err(Error::NotSaturated("quotient requires saturated lattices".into()));
        }
        if !gamma_x.contains_lattice(&gamma_y) {
            return Err(Error::NotSublattice("Gamma_Y is not contained in Gamma_X".into()));
        }
        let n = gamma_x.ambient_dim();
        let a = gamma_x.rank();
        let b = gamma_y.rank();
        let k = a - b;

        // Gamma_Y in Gamma_X coordinates
        let coords: Vec<Vec<Int>> = gamma_y
            .basis_rows()
            .iter()
            .map(|r| gamma_x.coordinates(r).expect("containment already checked"))
            .collect();
        // complement classes: last k rows of V^{-1} from the SNF of the
        // coordinate matrix, mapped back to Z^N
        let comp = if k == 0 {
            IntMatrix::zero(0, n)
        } else if b == 0 {
            gamma_x.basis().clone()
        } else {
            let c = IntMatrix::from_rows(&coords)?;
            let snf = c.smith_normal_form();
            debug_assert!(
                snf.elementary_divisors().iter().all(Int::is_one),
                "saturated chain must have trivial divisors"
            );
            let vinv = snf.v.inverse_unimodular()?;
            let rows: Vec<Vec<Int>> = (b..a)
                .map(|i| gamma_x.basis().vec_mul(&vinv.row_vec(i)))
                .collect();
            IntMatrix::from_rows(&rows)?
        };

        let gram_y_inv = if b == 0 {
            Vec::new()
        } else {
            let gy = gamma_y.basis().gram().to_rat();
            rat_inverse(&gy).ok_or_else(|| Error::Invalid("degenerate Gram matrix".into()))?
        };

        let q = QuotientLattice {
            gamma_x,
            gamma_y,
            comp,
            gram_perp: Vec::new(),
            gram_y_inv,
        };
        let mut q = q;
        q.gram_perp = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| q.perp_inner(&q.comp.row_vec(i), &q.comp.row_vec(j)))
                    .collect()
            })
            .collect();
        Ok(q)
    }

    pub fn gamma_x(&self) -> &Sublattice {
        &self.gamma_x
    }

    pub fn gamma_y(&self) -> &Sublattice {
        &self.gamma_y
    }

    pub fn rank(&self) -> usize {
        self.comp.rows()
    }

    pub fn gram_perp(&self) -> &[Vec<Rat>] {
        &self.gram_perp
    }

    /// Inner product of the projections of two ambient vectors onto the
    /// orthogonal complement of `Gamma_Y^R`.
    fn perp_inner(&self, u: &[Int], v: &[Int]) -> Rat {
        let uv = Rat::from(dot(u, v));
        if self.gamma_y.rank() == 0 {
            return uv;
        }
        let bu = self.gamma_y.basis().mul_vec(u);
        let bv = self.gamma_y.basis().mul_vec(v);
        let bu: Vec<Rat> = bu.into_iter().map(Rat::from).collect();
        let bv: Vec<Rat> = bv.into_iter().map(Rat::from).collect();
        let mut corr = Rat::zero();
        for (i, row) in self.gram_y_inv.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                corr += &bu[i] * g * &bv[j];
            }
        }
        uv - corr
    }

    /// `||lambda||_perp^2`; errors when `lambda` is not in `Gamma_X`.
    pub fn norm_sq(&self, lambda: &[Int]) -> Result<Rat> {
        if !self.gamma_x.contains_vector(lambda) {
            return Err(Error::NotInLattice(format!("{lambda:?}")));
        }
        Ok(self.perp_inner(lambda, lambda))
    }

    /// Squared covolume of the quotient lattice: `det(gram_perp)`.
    pub fn covolume_sq(&self) -> Rat {
        rat_det(&self.gram_perp)
    }

    /// Ambient representative of the class with quotient coordinates `mu`.
    pub fn class_representative(&self, mu: &[Int]) -> Vec<Int> {
        self.comp.vec_mul(mu)
    }

    /// All classes `mu != 0` with `||mu||_perp^2 <= bound`, with exact norms.
    pub fn classes_up_to(&self, bound: &Rat) -> Vec<(Vec<Int>, Rat)> {
        let k = self.rank();
        if k == 0 {
            return Vec::new();
        }
        let center = vec![Rat::zero(); k];
        enumerate_quadratic(&self.gram_perp, &center, bound)
            .into_iter()
            .filter(|(mu, _)| mu.iter().any(|x| !x.is_zero()))
            .collect()
    }

    /// Representatives of the class of `lambda0` with minimal Euclidean norm
    /// (all ties returned).
    pub fn min_l2_representatives(&self, lambda0: &[Int]) -> Vec<Vec<Int>> {
        let b = self.gamma_y.rank();
        if b == 0 {
            return vec![lambda0.to_vec()];
        }
        let basis = self.gamma_y.basis();
        // || lambda0 + c B ||^2 = perp^2 + (c - c*) G (c - c*)^T
        let bl: Vec<Rat> = basis.mul_vec(lambda0).into_iter().map(Rat::from).collect();
        let cstar: Vec<Rat> = (0..b)
            .map(|i| -dot_rat(&self.gram_y_inv[i], &bl))
            .collect();
        let gram: Vec<Vec<Rat>> = basis.gram().to_rat();
        // radius from the rounded center
        let rounded: Vec<Int> = cstar.iter().map(|x| x.round().to_integer()).collect();
        let diff: Vec<Rat> = rounded
            .iter()
            .zip(&cstar)
            .map(|(c, t)| Rat::from(c.clone()) - t)
            .collect();
        let mut radius = Rat::zero();
        for i in 0..b {
            for j in 0..b {
                radius += &diff[i] * &gram[i][j] * &diff[j];
            }
        }
        let cands = enumerate_quadratic(&gram, &cstar, &radius);
        let min_val = cands.iter().map(|(_, v)| v.clone()).min().expect("nonempty");
        let mut reps: Vec<Vec<Int>> = cands
            .into_iter()
            .filter(|(_, v)| *v == min_val)
            .map(|(c, _)| {
                let shift = basis.vec_mul(&c);
                lambda0.iter().zip(&shift).map(|(a, s)| a + s).collect()
            })
            .collect();
        reps.sort();
        reps.dedup();
        reps
    }

    /// Exhaustive first minimum of the quotient metric.
    ///
    /// Among the vectors of minimal `||.||_perp^2` the representative with
    /// minimal Euclidean norm is chosen, sign-normalized so its first nonzero
    /// entry is positive, ties broken lexicographically.
    pub fn first_minimum(&self) -> FirstMinimum {
        let k = self.rank();
        if k == 0 {
            return FirstMinimum::EmptyQuotient;
        }
        let init = (0..k)
            .map(|i| self.gram_perp[i][i].clone())
            .min()
            .expect("rank >= 1");
        let classes = self.classes_up_to(&init);
        let min_sq = classes
            .iter()
            .map(|(_, v)| v.clone())
            .min()
            .expect("diagonal class attains the initial bound");
        let mut best: Option<(Rat, Vec<Int>)> = None;
        for (mu, _) in classes.iter().filter(|(_, v)| *v == min_sq) {
            let rep0 = self.class_representative(mu);
            for rep in self.min_l2_representatives(&rep0) {
                let l2 = norm_sq_int(&rep);
                let cand = sign_normalize(rep);
                match &mut best {
                    None => best = Some((l2, cand)),
                    Some((bl2, bv)) => {
                        if l2 < *bl2 || (l2 == *bl2 && cand < *bv) {
                            *bl2 = l2;
                            *bv = cand;
                        }
                    }
                }
            }
        }
        let (_, lambda) = best.expect("minimal class exists");
        FirstMinimum::Found { lambda, min_sq }
    }

    /// Certified upper interval for the square of the Minkowski bound
    /// `(2/sqrt(pi)) Gamma(1 + k/2)^{1/k} Vol(quotient)^{1/k}`.
    ///
    /// Exact (degenerate interval) for rank 1, where the constant is 1.
    pub fn minkowski_bound_sq(&self, bits: u32) -> Result<Interval> {
        let k = self.rank() as u32;
        if k == 0 {
            return Err(Error::Invalid("Minkowski bound of an empty quotient".into()));
        }
        let covol_sq = self.covolume_sq();
        // bound^2 = 4 * (r * covol^2)^{1/k} * pi^{(s - k)/k},  Gamma^2 = r pi^s
        let (r, s) = gamma_half_plus_one_sq(k);
        let base = Interval::exact(&r * &covol_sq);
        if s == k {
            // rank 1: everything rational
            return Ok(base.scale(&Rat::from(Int::from(4))));
        }
        let root = base.kth_root(k, bits)?;
        let pi_pow = pi(bits).powi(s as i64 - k as i64)?.kth_root(k, bits)?;
        Ok(root.mul(&pi_pow).scale(&Rat::from(Int::from(4))))
    }
}

fn rat_det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::one();
    }
    let mut a = m.to_vec();
    let mut det = Rat::one();
    for j in 0..n {
        let Some(p) = (j..n).find(|&i| !a[i][j].is_zero()) else {
            return Rat::zero();
        };
        if p != j {
            a.swap(j, p);
            det = -det;
        }
        let pivot = a[j][j].clone();
        det *= &pivot;
        for i in j + 1..n {
            if !a[i][j].is_zero() {
                let f = &a[i][j] / &pivot;
                for l in j..n {
                    let v = &a[i][l] - &f * &a[j][l];
                    a[i][l] = v;
                }
            }
        }
    }
    det
}

/// Unit-lower-triangular `L` and positive diagonal `d` with `G = L D L^T`.
fn ldl(g: &[Vec<Rat>]) -> Result<(Vec<Vec<Rat>>, Vec<Rat>)> {
    let n = g.len();
    let mut l = vec![vec![Rat::zero(); n]; n];
    let mut d = vec![Rat::zero(); n];
    for i in 0..n {
        let mut di = g[i][i].clone();
        for m in 0..i {
            di -= &l[i][m] * &l[i][m] * &d[m];
        }
        if !di.is_positive() {
            return Err(Error::Invalid("quadratic form is not positive definite".into()));
        }
        d[i] = di;
        l[i][i] = Rat::one();
        for j in i + 1..n {
            let mut v = g[j][i].clone();
            for m in 0..i {
                v -= &l[j][m] * &l[i][m] * &d[m];
            }
            l[j][i] = v / &d[i];
        }
    }
    Ok((l, d))
}

fn rat_floor(x: &Rat) -> Int {
    x.floor().to_integer()
}

fn rat_ceil(x: &Rat) -> Int {
    x.ceil().to_integer()
}

/// Rational upper bound on `sqrt(x)` for `x >= 0`.
fn sqrt_upper(x: &Rat) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    let bits = 16u32;
    let scale = Int::one() << (2 * bits);
    let a = (x.numer() * &scale).div_ceil(x.denom());
    let r = a.sqrt() + 1;
    Rat::new(r, Int::one() << bits)
}

/// All integer points `c` with `(c - t) G (c - t)^T <= bound` for a positive
/// definite rational form `G`, by exact recursive enumeration. Returns the
/// exact form value with each point.
pub fn enumerate_quadratic(
    g: &[Vec<Rat>],
    center: &[Rat],
    bound: &Rat,
) -> Vec<(Vec<Int>, Rat)> {
    let n = g.len();
    if n == 0 || bound.is_negative() {
        return Vec::new();
    }
    let (l, d) = ldl(g).expect("enumeration needs a positive definite form");
    let mut out = Vec::new();
    let mut current = vec![Int::zero(); n];
    // process coordinates from the last to the first:
    // q = sum_i d_i (x_i + sum_{j>i} L_ji x_j)^2  with  x = c - t
    fn recurse(
        g_l: &[Vec<Rat>],
        d: &[Rat],
        center: &[Rat],
        level: isize,
        rem: Rat,
        current: &mut Vec<Int>,
        out: &mut Vec<(Vec<Int>, Rat)>,
        total: &Rat,
    ) {
        if level < 0 {
            out.push((current.clone(), total - &rem));
            return;
        }
        let i = level as usize;
        let n = current.len();
        // offset o_i = sum_{j>i} L_ji (c_j - t_j)
        let mut offset = Rat::zero();
        for j in i + 1..n {
            offset += &g_l[j][i] * (Rat::from(current[j].clone()) - &center[j]);
        }
        // d_i (c_i - t_i + o_i)^2 <= rem
        let r = sqrt_upper(&(&rem / &d[i]));
        let mid = &center[i] - &offset;
        let lo = rat_ceil(&(&mid - &r));
        let hi = rat_floor(&(&mid + &r));
        let mut c = lo;
        while c <= hi {
            let y = Rat::from(c.clone()) - &mid;
            let term = &d[i] * &y * &y;
            if term <= rem {
                current[i] = c.clone();
                recurse(g_l, d, center, level - 1, &rem - &term, current, out, total);
            }
            c += 1;
        }
        current[level as usize] = Int::zero();
    }
    recurse(
        &l,
        &d,
        center,
        n as isize - 1,
        bound.clone(),
        &mut current,
        &mut out,
        bound,
    );
    out
}

//! Heights over `Q(t)`: the function-field world where every quantity is an
//! exactly computable integer or rational.
//!
//! Constants play the role of roots of unity and varieties defined over the
//! constant field play the role of torsion varieties. Places are the monic
//! `Q`-irreducible polynomials in `t` plus the place at infinity, weighted by
//! their degrees so the product formula holds verbatim.

use crate::lattice::{kernel_basis, IntMatrix, QuotientLattice, Sublattice};
use crate::torus::{
    degree_from_gamma, obstruction_from_lattices, parametrization_from_kernel, Obstruction,
};
use crate::unipoly::{factor, QPoly};
use crate::{Error, Int, Rat, Result};
use num::{Integer, One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Reduced rational function in one variable `t` over `Q`: numerator and
/// denominator coprime, denominator monic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatFun {
    num: QPoly,
    den: QPoly,
}

impl RatFun {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFun { num: QPoly::zero(), den: QPoly::one() });
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g)?;
        let mut den = den.div_exact(&g)?;
        let lead = den.leading().expect("nonzero").clone();
        if !lead.is_one() {
            num = num.scale(&lead.recip());
            den = den.scale(&lead.recip());
        }
        Ok(RatFun { num, den })
    }

    pub fn zero() -> Self {
        RatFun { num: QPoly::zero(), den: QPoly::one() }
    }

    pub fn constant(c: Rat) -> Self {
        RatFun { num: QPoly::constant(c), den: QPoly::one() }
    }

    pub fn t() -> Self {
        RatFun { num: QPoly::x(), den: QPoly::one() }
    }

    pub fn from_poly(p: QPoly) -> Self {
        RatFun { num: p, den: QPoly::one() }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The constant value, for constant functions.
    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("denominators nonzero")
    }

    /// Both inputs reduced, so only the cross gcds need cancelling.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = other.den.div_exact(&g1).expect("gcd divides");
        let n2 = other.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let mut num = n1.mul(&n2);
        let mut den = d1.mul(&d2);
        let lead = den.leading().expect("nonzero").clone();
        if !lead.is_one() {
            num = num.scale(&lead.recip());
            den = den.scale(&lead.recip());
        }
        RatFun { num, den }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lead = self.num.leading().expect("nonzero").clone();
        Ok(RatFun {
            num: self.den.scale(&lead.recip()),
            den: self.num.scale(&lead.recip()),
        })
    }

    /// `self^e`; no reduction needed, powers of a reduced fraction stay
    /// reduced.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::constant(Rat::one()));
        }
        let base = if e > 0 { self.clone() } else { self.recip()? };
        let k = e.unsigned_abs() as u32;
        Ok(RatFun { num: base.num.pow(k), den: base.den.pow(k) })
    }

    /// Height of the scalar: `max(deg num, deg den)`.
    pub fn height(&self) -> usize {
        self.num.deg_or_zero().max(self.den.deg_or_zero())
    }

    pub fn to_string_t(&self) -> String {
        if self.den.is_one() {
            self.num.to_string_var("t")
        } else {
            format!("({}) / ({})", self.num.to_string_var("t"), self.den.to_string_var("t"))
        }
    }
}

/// Projective point over `Q(t)`, canonicalized to coprime primitive integer
/// polynomial coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FFPoint {
    coords: Vec<QPoly>,
}

fn rat_gcd(a: &Rat, b: &Rat) -> Rat {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    Rat::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

impl FFPoint {
    /// Canonicalizes projective coordinates: clears denominators, divides by
    /// the polynomial gcd and the rational content, fixes the sign.
    pub fn new(coords: &[RatFun]) -> Result<Self> {
        if coords.iter().all(RatFun::is_zero) {
            return Err(Error::Invalid("all projective coordinates are zero".into()));
        }
        // common denominator
        let mut lcm = QPoly::one();
        for c in coords {
            let g = lcm.gcd(c.den());
            lcm = lcm.mul(&c.den().div_exact(&g)?);
        }
        let mut polys: Vec<QPoly> = coords
            .iter()
            .map(|c| c.num().mul(&lcm.div_exact(c.den()).expect("lcm divisible")))
            .collect();
        // polynomial gcd
        let mut g = QPoly::zero();
        for p in &polys {
            g = if g.is_zero() { p.clone() } else { g.gcd(p) };
        }
        if !g.is_constant() {
            for p in polys.iter_mut() {
                *p = p.div_exact(&g).expect("gcd divides");
            }
        }
        // rational content
        let mut content = Rat::zero();
        for p in &polys {
            for c in p.coeffs() {
                content = rat_gcd(&content, c);
            }
        }
        for p in polys.iter_mut() {
            *p = p.scale(&content.recip());
        }
        // sign: first nonzero coordinate has positive leading coefficient
        if let Some(first) = polys.iter().find(|p| !p.is_zero()) {
            if first.leading().expect("nonzero").is_negative() {
                for p in polys.iter_mut() {
                    *p = p.neg();
                }
            }
        }
        Ok(FFPoint { coords: polys })
    }

    /// Affine point `(1 : a_1 : ... : a_N)`.
    pub fn from_affine(coords: &[RatFun]) -> Result<Self> {
        let mut all = vec![RatFun::constant(Rat::one())];
        all.extend_from_slice(coords);
        Self::new(&all)
    }

    pub fn coords(&self) -> &[QPoly] {
        &self.coords
    }

    /// `h(alpha) = max_j deg(alpha_j)` on coprime polynomial coordinates.
    pub fn height(&self) -> usize {
        self.coords.iter().map(QPoly::deg_or_zero).max().unwrap_or(0)
    }
}

/// A place of `Q(t)`: a monic irreducible polynomial or the point at
/// infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Finite(QPoly),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.deg_or_zero(),
            Place::Infinity => 1,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Place::Finite(p) => p.to_string_var("t"),
            Place::Infinity => "infinity".into(),
        }
    }
}

/// Order matrix of a coordinate vector: rows indexed by places, columns by
/// coordinates, entries `ord_v(alpha_j)`.
#[derive(Debug, Clone)]
pub struct OrdMatrix {
    pub places: Vec<Place>,
    pub matrix: IntMatrix,
}

impl OrdMatrix {
    pub fn place_degrees(&self) -> Vec<usize> {
        self.places.iter().map(Place::degree).collect()
    }

    /// `sum_v deg(v) max(0, -(O lambda)_v)`: the height of the monomial
    /// `alpha^lambda`.
    pub fn monomial_height(&self, lambda: &[Int]) -> Int {
        let ol = self.matrix.mul_vec(lambda);
        let mut h = Int::zero();
        for (v, place) in self.places.iter().enumerate() {
            if ol[v].is_negative() {
                h += Int::from(place.degree() as i64) * (-ol[v].clone());
            }
        }
        h
    }

    /// Product formula: every column sums to zero with degree weights.
    pub fn product_formula_holds(&self) -> bool {
        let degs = self.place_degrees();
        (0..self.matrix.cols()).all(|j| {
            let s: Int = (0..self.matrix.rows())
                .map(|i| Int::from(degs[i] as i64) * self.matrix.get(i, j))
                .sum();
            s.is_zero()
        })
    }
}

/// Factors every coordinate and assembles the order matrix over the
/// `Q`-irreducible places that appear, plus the place at infinity whenever a
/// coordinate is nonconstant.
pub fn ord_matrix(alpha: &[RatFun]) -> Result<OrdMatrix> {
    for a in alpha {
        if a.is_zero() {
            return Err(Error::Invalid("ord matrix of a zero coordinate".into()));
        }
    }
    let mut finite: Vec<QPoly> = Vec::new();
    let mut per_coord: Vec<Vec<(QPoly, i64)>> = Vec::new();
    for a in alpha {
        let mut ords: Vec<(QPoly, i64)> = Vec::new();
        for (f, m) in factor(a.num()) {
            ords.push((f, m as i64));
        }
        for (f, m) in factor(a.den()) {
            match ords.iter_mut().find(|(g, _)| *g == f) {
                Some((_, e)) => *e -= m as i64,
                None => ords.push((f, -(m as i64))),
            }
        }
        ords.retain(|(_, e)| *e != 0);
        for (f, _) in &ords {
            if !finite.contains(f) {
                finite.push(f.clone());
            }
        }
        per_coord.push(ords);
    }
    finite.sort_by(|a, b| {
        a.deg_or_zero()
            .cmp(&b.deg_or_zero())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    let include_infinity = alpha.iter().any(|a| !a.is_constant());
    let mut places: Vec<Place> = finite.iter().cloned().map(Place::Finite).collect();
    if include_infinity {
        places.push(Place::Infinity);
    }
    let rows = places.len();
    let cols = alpha.len();
    let matrix = IntMatrix::from_fn(rows, cols, |i, j| match &places[i] {
        Place::Finite(f) => Int::from(
            per_coord[j]
                .iter()
                .find(|(g, _)| g == f)
                .map(|(_, e)| *e)
                .unwrap_or(0),
        ),
        Place::Infinity => {
            Int::from(alpha[j].den().deg_or_zero() as i64 - alpha[j].num().deg_or_zero() as i64)
        }
    });
    Ok(OrdMatrix { places, matrix })
}

/// Height of the affine point `(1 : alpha_1 : ... : alpha_N)`.
pub fn ff_point_height(alpha: &[RatFun]) -> Result<usize> {
    Ok(FFPoint::from_affine(alpha)?.height())
}

/// `h(alpha^lambda)` via the order matrix.
pub fn ff_monomial_height(alpha: &[RatFun], lambda: &[Int]) -> Result<Int> {
    if alpha.len() != lambda.len() {
        return Err(Error::Dimension("monomial exponent length".into()));
    }
    Ok(ord_matrix(alpha)?.monomial_height(lambda))
}

/// Translate of a subtorus over `Q(t)`: a saturated lattice and a point with
/// nonzero rational-function coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FFTranslate {
    ambient: usize,
    gamma: Sublattice,
    point: Vec<RatFun>,
}

impl FFTranslate {
    pub fn new(gamma: Sublattice, point: Vec<RatFun>) -> Result<Self> {
        let ambient = gamma.ambient_dim();
        if point.len() != ambient {
            return Err(Error::Dimension("point length mismatch".into()));
        }
        if !gamma.is_saturated() {
            return Err(Error::NotSaturated("translate lattice must be saturated".into()));
        }
        if point.iter().any(RatFun::is_zero) {
            return Err(Error::Invalid("point coordinates must be nonzero".into()));
        }
        Ok(FFTranslate { ambient, gamma, point })
    }

    /// A point of the full torus.
    pub fn from_point(point: Vec<RatFun>) -> Result<Self> {
        let n = point.len();
        Self::new(Sublattice::full(n), point)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn gamma(&self) -> &Sublattice {
        &self.gamma
    }

    pub fn point(&self) -> &[RatFun] {
        &self.point
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.gamma.rank()
    }

    /// `alpha^lambda` as an exact rational function.
    pub fn monomial(&self, lambda: &[Int]) -> Result<RatFun> {
        let mut acc = RatFun::constant(Rat::one());
        for (a, e) in self.point.iter().zip(lambda) {
            let exp = e.to_i64().ok_or_else(|| Error::Invalid("exponent overflow".into()))?;
            acc = acc.mul(&a.pow(exp)?);
        }
        Ok(acc)
    }
}

/// Result of [`ff_torsion_closure`].
#[derive(Debug, Clone)]
pub struct FFClosure {
    pub translate: FFTranslate,
    /// Constant values `alpha^gamma` on a basis of the closure lattice.
    pub constants: Vec<Rat>,
    /// `Gamma_U = Gamma_X`: the input is already defined over the constants.
    pub defined_over_k: bool,
}

/// Smallest variety defined over the constant field containing `X`:
/// `Gamma_U = Gamma_X ∩ {lambda : O lambda = 0}`.
pub fn ff_torsion_closure(x: &FFTranslate) -> Result<FFClosure> {
    let orders = ord_matrix(x.point())?;
    let const_kernel = kernel_basis(&orders.matrix);
    let gamma_u = x.gamma().intersect(&const_kernel)?;
    debug_assert!(gamma_u.is_saturated());
    let mut constants = Vec::new();
    for row in gamma_u.basis_rows() {
        let v = x.monomial(&row)?;
        let c = v
            .constant_value()
            .expect("monomials in the closure lattice are constant");
        constants.push(c);
    }
    let defined_over_k = gamma_u.rank() == x.gamma().rank();
    let translate = FFTranslate::new(gamma_u, x.point().to_vec())?;
    Ok(FFClosure { translate, constants, defined_over_k })
}

/// One sampled point in [`ff_verify_bounds`].
#[derive(Debug, Clone)]
pub struct FFSample {
    pub height: Int,
    pub main_bound_holds: bool,
    pub monomial_bound_holds: bool,
}

/// Report of the transplanted height lower-bound verification.
#[derive(Debug, Clone)]
pub struct FFBoundsReport {
    pub vacuous: bool,
    pub ambient: usize,
    pub dim_x: usize,
    pub dim_u: usize,
    pub deg_u: Option<Int>,
    pub omega: Option<Int>,
    pub lambda: Option<Vec<Int>>,
    /// `c(N,p,n)^2 deg(U)^2 / omega^2` with `m(k(t)) = 1`, exact.
    pub bound_sq: Option<Rat>,
    /// `||lambda*||_perp^2` and `h(alpha^lambda*)` for the monomial form.
    pub lambda_norm_sq: Option<Rat>,
    pub monomial_height: Option<Int>,
    pub samples: Vec<FFSample>,
    pub violations: usize,
}

/// Verifies the function-field analogues of the height lower bounds on
/// sampled points `zeta = alpha * phi_B(s)`, in exact arithmetic (all
/// comparisons squared). Violations would contradict a theorem, so any
/// nonzero count is bug evidence.
pub fn ff_verify_bounds(
    x: &FFTranslate,
    samples: usize,
    seed: u64,
    degree_bound: usize,
) -> Result<FFBoundsReport> {
    let n_amb = x.ambient_dim();
    let closure = ff_torsion_closure(x)?;
    let dim_x = x.dim();
    let dim_u = closure.translate.dim();
    if closure.defined_over_k {
        return Ok(FFBoundsReport {
            vacuous: true,
            ambient: n_amb,
            dim_x,
            dim_u,
            deg_u: None,
            omega: None,
            lambda: None,
            bound_sq: None,
            lambda_norm_sq: None,
            monomial_height: None,
            samples: Vec::new(),
            violations: 0,
        });
    }
    let gamma_u = closure.translate.gamma();
    let deg_u = degree_from_gamma(gamma_u)?;
    let Obstruction::Finite { omega, lambda } = obstruction_from_lattices(x.gamma(), gamma_u)?
    else {
        unreachable!("not defined over k, so dim X < dim U");
    };
    // c(N,p,n)^2 = 4 / ((N+1)^2 (p-n) C(N,p) C(N,p-1)), m(k(t)) = 1
    let k = dim_u - dim_x;
    let c_sq = Rat::new(
        Int::from(4),
        Int::from(((n_amb + 1) * (n_amb + 1) * k) as i64)
            * crate::binomial(n_amb, dim_u)
            * crate::binomial(n_amb, dim_u - 1),
    );
    let bound_sq = c_sq * Rat::from(&deg_u * &deg_u) / Rat::from(&omega * &omega);
    let quotient = QuotientLattice::new(x.gamma().clone(), gamma_u.clone())?;
    let lambda_norm_sq = quotient.norm_sq(&lambda)?;
    let h_monomial = ff_monomial_height(x.point(), &lambda)?;
    debug_assert!(h_monomial >= Int::one(), "m(k(t)) = 1");

    let b = parametrization_from_kernel(x.gamma())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out_samples = Vec::with_capacity(samples);
    let mut violations = 0usize;
    for _ in 0..samples {
        // random s in (Q[t] \ 0)^{dim X}
        let s: Vec<RatFun> = (0..dim_x)
            .map(|_| loop {
                let deg = rng.gen_range(0..=degree_bound);
                let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-3..=3)).collect();
                let p = QPoly::from_int_coeffs(&coeffs);
                if !p.is_zero() {
                    return RatFun::from_poly(p);
                }
            })
            .collect();
        // zeta_j = alpha_j * prod_i s_i^{B_{i j}}
        let mut zeta: Vec<RatFun> = Vec::with_capacity(n_amb);
        for j in 0..n_amb {
            let mut c = x.point()[j].clone();
            for (i, si) in s.iter().enumerate() {
                let e = b.matrix().get(i, j).to_i64().expect("small exponent");
                c = c.mul(&si.pow(e)?);
            }
            zeta.push(c);
        }
        let h = Int::from(ff_point_height(&zeta)? as i64);
        let h_sq = Rat::from(&h * &h);
        let main_bound_holds = h_sq >= bound_sq;
        // monomial form: h^2 (N+1)^2 k ||lambda||^2 >= 4 h(alpha^lambda)^2
        let lhs = &h_sq * Rat::from(Int::from(((n_amb + 1) * (n_amb + 1) * k) as i64))
            * &lambda_norm_sq;
        let rhs = Rat::from(Int::from(4) * &h_monomial * &h_monomial);
        let monomial_bound_holds = lhs >= rhs;
        if !main_bound_holds || !monomial_bound_holds {
            violations += 1;
        }
        out_samples.push(FFSample { height: h, main_bound_holds, monomial_bound_holds });
    }
    Ok(FFBoundsReport {
        vacuous: false,
        ambient: n_amb,
        dim_x,
        dim_u,
        deg_u: Some(deg_u),
        omega: Some(omega),
        lambda: Some(lambda),
        bound_sq: Some(bound_sq),
        lambda_norm_sq: Some(lambda_norm_sq),
        monomial_height: Some(h_monomial),
        samples: out_samples,
        violations,
    })
}

/// Homogeneous form in `x_0..x_N` with coefficients in `Q[t]`, primitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperForm {
    ambient: usize,
    deg_x: usize,
    terms: Vec<(Vec<u32>, QPoly)>,
    was_primitive: bool,
}

impl HyperForm {
    pub fn new(ambient: usize, terms: Vec<(Vec<u32>, QPoly)>) -> Result<Self> {
        let mut merged: Vec<(Vec<u32>, QPoly)> = Vec::new();
        for (e, c) in terms {
            if e.len() != ambient + 1 {
                return Err(Error::Dimension("exponent tuple length".into()));
            }
            if c.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|(f, _)| *f == e) {
                Some((_, acc)) => *acc = acc.add(&c),
                None => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        if merged.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let deg_x = merged[0].0.iter().sum::<u32>() as usize;
        for (e, _) in &merged {
            if e.iter().sum::<u32>() as usize != deg_x {
                return Err(Error::Invalid("form is not homogeneous in x".into()));
            }
        }
        merged.sort_by(|a, b| a.0.cmp(&b.0));
        // primitivity in t: polynomial content and rational content
        let mut content = QPoly::zero();
        for (_, c) in &merged {
            content = if content.is_zero() { c.clone() } else { content.gcd(c) };
        }
        let mut was_primitive = true;
        if !content.is_constant() {
            was_primitive = false;
            for (_, c) in merged.iter_mut() {
                *c = c.div_exact(&content).expect("content divides");
            }
        }
        let mut rc = Rat::zero();
        for (_, c) in &merged {
            for x in c.coeffs() {
                rc = rat_gcd(&rc, x);
            }
        }
        if !rc.is_one() {
            was_primitive = false;
            for (_, c) in merged.iter_mut() {
                *c = c.scale(&rc.recip());
            }
        }
        Ok(HyperForm { ambient, deg_x, terms: merged, was_primitive })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn terms(&self) -> &[(Vec<u32>, QPoly)] {
        &self.terms
    }

    pub fn deg_x(&self) -> usize {
        self.deg_x
    }

    pub fn deg_t(&self) -> usize {
        self.terms.iter().map(|(_, c)| c.deg_or_zero()).max().unwrap_or(0)
    }

    pub fn was_primitive(&self) -> bool {
        self.was_primitive
    }
}

/// `h = deg_t(f)` and `deg = deg_x(f)` of a primitive hypersurface form: the
/// height and degree of its divisor (the hypersurface case of the Bezout
/// identity). The note reports when the input had to be normalized.
pub fn hyperform_invariants(f: &HyperForm) -> (usize, usize, Option<String>) {
    let note = if f.was_primitive() {
        None
    } else {
        Some("input had nontrivial content; invariants refer to the primitive form".to_string())
    };
    (f.deg_t(), f.deg_x(), note)
}

/// Report of [`ff_bezout_split_check`].
#[derive(Debug, Clone)]
pub struct BezoutSplitReport {
    pub form_deg_t: usize,
    pub sum_of_heights: usize,
    pub holds: bool,
}

/// For the split form `prod_i (d_i(t) x_1 - n_i(t) x_0)` the primitive
/// `t`-degree equals the sum of the root heights, exactly.
pub fn ff_bezout_split_check(roots: &[RatFun]) -> Result<BezoutSplitReport> {
    if roots.is_empty() {
        return Err(Error::Invalid("no roots given".into()));
    }
    // product as a homogeneous bivariate polynomial: coefficient of x1^k x0^{m-k}
    let mut coeffs: Vec<QPoly> = vec![QPoly::one()];
    for r in roots {
        // d(t) x1 - n(t) x0
        let d = r.den().clone();
        let n = r.num().clone();
        let mut next = vec![QPoly::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            // times d x1
            next[k + 1] = next[k + 1].add(&c.mul(&d));
            // times -n x0
            next[k] = next[k].add(&c.mul(&n).neg());
        }
        coeffs = next;
    }
    // primitive in t (Gauss: product of primitives is primitive up to
    // rational content)
    let mut content = QPoly::zero();
    for c in &coeffs {
        if !c.is_zero() {
            content = if content.is_zero() { c.clone() } else { content.gcd(c) };
        }
    }
    let form_deg_t = if content.is_constant() {
        coeffs.iter().map(QPoly::deg_or_zero).max().unwrap_or(0)
    } else {
        coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.div_exact(&content).expect("content divides").deg_or_zero())
            .max()
            .unwrap_or(0)
    };
    let sum_of_heights: usize = roots.iter().map(RatFun::height).sum();
    Ok(BezoutSplitReport { form_deg_t, sum_of_heights, holds: form_deg_t == sum_of_heights })
}

/// One sampled line section in [`ff_essmin_upper_sample`].
#[derive(Debug, Clone)]
pub struct LineSample {
    pub line: [Int; 3],
    pub residual_deg_t: usize,
    /// Average height of the `deg` intersection points; a point of height at
    /// most this value exists on the section.
    pub average_height: Rat,
}

#[derive(Debug, Clone)]
pub struct EssminReport {
    pub h: usize,
    pub deg: usize,
    pub lines: Vec<LineSample>,
    pub degenerate_lines_resampled: usize,
    /// Every sampled line satisfies `residual <= h`, hence carries a point of
    /// height at most `h/deg`.
    pub holds: bool,
    /// How many lines attained the generic equality `residual = h`.
    pub generic_equality_count: usize,
}

/// Polynomials in one variable over `Q(t)` (coefficients are rational
/// functions); just enough arithmetic for a squarefreeness check.
fn rpoly_gcd_nontrivial(a: &[RatFun], b: &[RatFun]) -> bool {
    fn trim(mut v: Vec<RatFun>) -> Vec<RatFun> {
        while v.last().is_some_and(RatFun::is_zero) {
            v.pop();
        }
        v
    }
    fn rem(num: &[RatFun], den: &[RatFun]) -> Vec<RatFun> {
        let mut rem: Vec<RatFun> = num.to_vec();
        let dd = den.len() - 1;
        let lead_inv = den.last().expect("nonzero").recip().expect("nonzero lead");
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let q = rem.last().expect("nonempty").mul(&lead_inv);
            for (j, d) in den.iter().enumerate() {
                let sub = q.mul(d);
                rem[k + j] = rem[k + j].add(&sub.mul(&RatFun::constant(-Rat::one())));
            }
            rem = trim(rem);
            if rem.is_empty() {
                break;
            }
        }
        rem
    }
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a.len() > 1
}

/// Samples `k`-rational lines through a plane-curve family and checks the
/// averaged essential-minimum upper bound: each clean section has total
/// height `h(X)`, so some point on it has height at most `h(X)/deg(X)`.
pub fn ff_essmin_upper_sample(f: &HyperForm, trials: usize, seed: u64) -> Result<EssminReport> {
    if f.ambient_dim() != 2 {
        return Err(Error::Dimension("essential-minimum sampling works in P^2".into()));
    }
    let h = f.deg_t();
    let deg = f.deg_x();
    if deg == 0 {
        return Err(Error::Invalid("constant form".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // irreducibility heuristic: a random dehomogenization must be squarefree
    {
        let mut checked = false;
        for _ in 0..8 {
            let c = Int::from(rng.gen_range(-5i64..=5));
            // substitute x0 = 1, x2 = c: polynomial in x1 over Q(t)
            let mut uni: Vec<RatFun> = vec![RatFun::zero(); deg + 1];
            for (e, coeff) in f.terms() {
                let scale = Rat::from(c.pow(e[2]));
                let idx = e[1] as usize;
                uni[idx] = uni[idx]
                    .add(&RatFun::from_poly(coeff.scale(&scale)));
            }
            while uni.last().is_some_and(RatFun::is_zero) {
                uni.pop();
            }
            if uni.len() <= 1 {
                continue;
            }
            let deriv: Vec<RatFun> = uni[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.mul(&RatFun::constant(Rat::from(Int::from(i as i64 + 1)))))
                .collect();
            if rpoly_gcd_nontrivial(&uni, &deriv) {
                return Err(Error::Invalid(
                    "form looks reducible (non-squarefree dehomogenization)".into(),
                ));
            }
            checked = true;
            break;
        }
        if !checked {
            return Err(Error::Invalid("could not dehomogenize the form".into()));
        }
    }

    let mut lines = Vec::with_capacity(trials);
    let mut degenerate = 0usize;
    let mut generic_equality = 0usize;
    let budget = 40 * trials.max(1);
    let mut attempts = 0usize;
    while lines.len() < trials && attempts < budget {
        attempts += 1;
        let a: Vec<Int> = (0..3).map(|_| Int::from(rng.gen_range(-4i64..=4))).collect();
        if a.iter().all(Int::is_zero) {
            continue;
        }
        // two independent integer points on the line a.x = 0
        let candidates = [
            vec![Int::zero(), a[2].clone(), -a[1].clone()],
            vec![a[2].clone(), Int::zero(), -a[0].clone()],
            vec![a[1].clone(), -a[0].clone(), Int::zero()],
        ];
        let mut span: Vec<Vec<Int>> = Vec::new();
        for cand in candidates {
            if cand.iter().all(Int::is_zero) {
                continue;
            }
            let independent = match span.first() {
                None => true,
                Some(p) => {
                    // 2x3 rank check via cross products
                    (0..3).any(|i| {
                        let j = (i + 1) % 3;
                        !(&p[i] * &cand[j] - &p[j] * &cand[i]).is_zero()
                    })
                }
            };
            if independent {
                span.push(cand);
            }
            if span.len() == 2 {
                break;
            }
        }
        if span.len() < 2 {
            continue;
        }
        let (p_pt, q_pt) = (&span[0], &span[1]);
        // g(u, v) = f(u P + v Q): homogeneous of degree deg in (u, v)
        // represented as coefficients of u^i v^{deg - i}
        let mut g: Vec<QPoly> = vec![QPoly::zero(); deg + 1];
        for (e, coeff) in f.terms() {
            // expand prod_m (u P_m + v Q_m)^{e_m}
            let mut factor_poly: Vec<Rat> = vec![Rat::one()]; // coeffs of u^i
            for m in 0..3 {
                let pm = Rat::from(p_pt[m].clone());
                let qm = Rat::from(q_pt[m].clone());
                for _ in 0..e[m] {
                    let mut next = vec![Rat::zero(); factor_poly.len() + 1];
                    for (i, c) in factor_poly.iter().enumerate() {
                        let vu = &next[i + 1] + c * &pm;
                        next[i + 1] = vu;
                        let vv = &next[i] + c * &qm;
                        next[i] = vv;
                    }
                    factor_poly = next;
                }
            }
            for (i, c) in factor_poly.iter().enumerate() {
                if !c.is_zero() {
                    g[i] = g[i].add(&coeff.scale(c));
                }
            }
        }
        if g.iter().all(QPoly::is_zero) {
            degenerate += 1;
            continue;
        }
        // strip the t-content
        let mut content = QPoly::zero();
        for c in g.iter().filter(|c| !c.is_zero()) {
            content = if content.is_zero() { c.clone() } else { content.gcd(c) };
        }
        let residual: usize = g
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| {
                if content.is_constant() {
                    c.deg_or_zero()
                } else {
                    c.div_exact(&content).expect("content divides").deg_or_zero()
                }
            })
            .max()
            .unwrap_or(0);
        assert!(residual <= h, "substitution cannot raise the t-degree");
        if residual < h {
            // special line (through a base point or a bad fiber); resample
            degenerate += 1;
            continue;
        }
        generic_equality += 1;
        lines.push(LineSample {
            line: [a[0].clone(), a[1].clone(), a[2].clone()],
            residual_deg_t: residual,
            average_height: Rat::new(Int::from(residual as i64), Int::from(deg as i64)),
        });
    }
    let holds = lines.len() == trials
        && lines
            .iter()
            .all(|l| l.average_height <= Rat::new(Int::from(h as i64), Int::from(deg as i64)));
    Ok(EssminReport {
        h,
        deg,
        lines,
        degenerate_lines_resampled: degenerate,
        holds,
        generic_equality_count: generic_equality,
    })
}

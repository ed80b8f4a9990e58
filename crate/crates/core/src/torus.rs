//! Translates of subtori of the multiplicative torus, presented by saturated
//! lattices with characters.
//!
//! A character is presented, never computed in a number field: a point is a
//! torsion part (exponents of a fixed root of unity) together with a monomial
//! in declared multiplicatively independent generators. This makes "is the
//! value a root of unity" decidable by pure exponent arithmetic, and for
//! rational generator values the independence assertion is verified exactly
//! by prime factorization.

use crate::factor::multiplicatively_independent;
use crate::lattice::{kernel_basis, IntMatrix, QuotientLattice, Sublattice};
use crate::lattice::FirstMinimum;
use crate::polytope::{mixed_volume, prism_degree, RatPolytope};
use crate::{binomial, factorial, Error, Int, Rat, Result};
use num::{Integer, One, Signed, Zero};

/// Monomial parametrization of a subtorus: `N` vectors in `Z^p` spanning
/// `Z^p`, stored as the `p x N` matrix whose columns are the vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parametrization {
    matrix: IntMatrix,
}

impl Parametrization {
    /// Validates that the columns span all of `Z^p`.
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        let p = matrix.rows();
        if p > 0 {
            let snf = matrix.smith_normal_form();
            if snf.rank() != p || !snf.elementary_divisors().iter().all(Int::is_one) {
                return Err(Error::NotSurjective);
            }
        }
        Ok(Parametrization { matrix })
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.cols()
    }

    /// Dimension `p` of the parametrized subtorus.
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// The exponent vectors `b_1, ..., b_N` in `Z^p`.
    pub fn vectors(&self) -> Vec<Vec<Int>> {
        (0..self.matrix.cols()).map(|j| self.matrix.col_vec(j)).collect()
    }

    /// `conv(0, b_1, ..., b_N)` in `Q^p`.
    pub fn q_polytope(&self) -> RatPolytope {
        let p = self.dim();
        if p == 0 {
            return RatPolytope::origin(0);
        }
        let mut pts: Vec<Vec<Int>> = vec![vec![Int::zero(); p]];
        pts.extend(self.vectors());
        RatPolytope::from_integer_points(p, &pts).expect("vertex set is nonempty")
    }

    /// `lambda_1 b_1 + ... + lambda_N b_N`.
    pub fn apply(&self, lambda: &[Int]) -> Vec<Int> {
        self.matrix.mul_vec(lambda)
    }

    /// Saturated kernel `{lambda : M_B lambda = 0}`; cuts out the subtorus.
    pub fn kernel(&self) -> Sublattice {
        kernel_basis(&self.matrix)
    }
}

/// Realizes a saturated sublattice as the kernel of a parametrization:
/// the rows of `M_B` are a basis of the integer orthogonal complement.
pub fn parametrization_from_kernel(gamma: &Sublattice) -> Result<Parametrization> {
    if !gamma.is_saturated() {
        return Err(Error::NotSaturated("parametrization needs a saturated kernel".into()));
    }
    let perp = kernel_basis(gamma.basis());
    Parametrization::new(perp.basis().clone())
}

/// Saturated kernel of a parametrization (inverse of
/// [`parametrization_from_kernel`] up to basis choice).
pub fn kernel_from_parametrization(b: &Parametrization) -> Sublattice {
    b.kernel()
}

/// One generator of a character presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    /// Exact positive rational value, when known.
    pub value: Option<Rat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Independence {
    /// Rational values supplied and verified independent by factorization.
    VerifiedRational,
    /// No values (or not all); the user's independence assertion is recorded
    /// and downstream outputs are conditional on it.
    Asserted,
}

/// A character of `Z^N` presented as a torsion part plus a monomial in
/// declared independent generators:
/// `rho(lambda) = zeta_m^{<a, lambda>} * prod_i g_i^{(E^T lambda)_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterPresentation {
    modulus: Int,
    torsion_exponents: Vec<Int>,
    generators: Vec<Generator>,
    /// `N x r`; row `j` holds the generator exponents of coordinate `j`.
    exponents: IntMatrix,
    independence: Independence,
}

/// Value of a character at a lattice vector, in presented form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterValue {
    pub modulus: Int,
    /// `k` with torsion part `zeta_m^k`, reduced into `[0, m)`.
    pub torsion: Int,
    /// Exponent of each generator.
    pub exponents: Vec<Int>,
    /// Exact rational value when the torsion part is `+-1` and all generator
    /// values are known.
    pub rational: Option<Rat>,
}

impl CharacterValue {
    pub fn is_one(&self) -> bool {
        self.torsion.is_zero() && self.exponents.iter().all(Int::is_zero)
    }

    pub fn is_torsion(&self) -> bool {
        self.exponents.iter().all(Int::is_zero)
    }

    pub fn symbolic(&self) -> String {
        let mut parts = Vec::new();
        if !self.torsion.is_zero() {
            parts.push(format!("zeta_{}^{}", self.modulus, self.torsion));
        }
        for (i, e) in self.exponents.iter().enumerate() {
            if !e.is_zero() {
                parts.push(format!("g{i}^{e}"));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl CharacterPresentation {
    pub fn new(
        ambient: usize,
        modulus: Int,
        torsion_exponents: Vec<Int>,
        generators: Vec<Generator>,
        exponents: IntMatrix,
    ) -> Result<Self> {
        if modulus < Int::one() {
            return Err(Error::Invalid("torsion modulus must be >= 1".into()));
        }
        if torsion_exponents.len() != ambient {
            return Err(Error::Dimension("torsion exponent vector length".into()));
        }
        if exponents.rows() != ambient || exponents.cols() != generators.len() {
            return Err(Error::Dimension("exponent matrix shape".into()));
        }
        {
            let mut labels: Vec<&String> = generators.iter().map(|g| &g.label).collect();
            labels.sort();
            labels.dedup();
            if labels.len() != generators.len() {
                return Err(Error::Invalid("duplicate generator labels".into()));
            }
        }
        let torsion_exponents = torsion_exponents
            .into_iter()
            .map(|a| a.mod_floor(&modulus))
            .collect();
        let values: Vec<&Rat> = generators.iter().filter_map(|g| g.value.as_ref()).collect();
        let independence = if values.len() == generators.len() {
            for v in &values {
                if !v.is_positive() {
                    return Err(Error::Invalid(
                        "generator values must be positive rationals; encode signs in the torsion part"
                            .into(),
                    ));
                }
            }
            let owned: Vec<Rat> = values.into_iter().cloned().collect();
            if !multiplicatively_independent(&owned) {
                return Err(Error::Invalid(
                    "generator values are not multiplicatively independent".into(),
                ));
            }
            Independence::VerifiedRational
        } else {
            Independence::Asserted
        };
        Ok(CharacterPresentation {
            modulus,
            torsion_exponents,
            generators,
            exponents,
            independence,
        })
    }

    /// The trivial character (subtorus case).
    pub fn trivial(ambient: usize) -> Self {
        CharacterPresentation {
            modulus: Int::one(),
            torsion_exponents: vec![Int::zero(); ambient],
            generators: Vec::new(),
            exponents: IntMatrix::zero(ambient, 0),
            independence: Independence::VerifiedRational,
        }
    }

    /// Presentation of a point with nonzero rational coordinates: signs go to
    /// the torsion part (`m = 2`), absolute values are factored over the
    /// primes that appear, one generator per prime. Independence holds by
    /// construction.
    pub fn from_rational_point(coords: &[Rat]) -> Result<Self> {
        let n = coords.len();
        for c in coords {
            if c.is_zero() {
                return Err(Error::Invalid("point coordinates must be nonzero".into()));
            }
        }
        let facs: Vec<_> = coords.iter().map(|c| crate::factor::factorize_rat(&c.abs())).collect();
        let mut primes: Vec<Int> = facs.iter().flat_map(|f| f.keys().cloned()).collect();
        primes.sort();
        primes.dedup();
        let generators: Vec<Generator> = primes
            .iter()
            .map(|p| Generator { label: format!("p{p}"), value: Some(Rat::from(p.clone())) })
            .collect();
        let exponents = IntMatrix::from_fn(n, primes.len(), |j, i| {
            Int::from(*facs[j].get(&primes[i]).unwrap_or(&0))
        });
        let torsion: Vec<Int> = coords
            .iter()
            .map(|c| if c.is_negative() { Int::one() } else { Int::zero() })
            .collect();
        Self::new(n, Int::from(2), torsion, generators, exponents)
    }

    pub fn ambient_dim(&self) -> usize {
        self.torsion_exponents.len()
    }

    pub fn modulus(&self) -> &Int {
        &self.modulus
    }

    pub fn torsion_exponents(&self) -> &[Int] {
        &self.torsion_exponents
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn exponent_matrix(&self) -> &IntMatrix {
        &self.exponents
    }

    pub fn independence(&self) -> Independence {
        self.independence
    }

    /// `E^T lambda`: the generator exponents of `rho(lambda)`.
    pub fn free_exponents(&self, lambda: &[Int]) -> Vec<Int> {
        (0..self.generators.len())
            .map(|i| {
                lambda
                    .iter()
                    .enumerate()
                    .map(|(j, l)| l * self.exponents.get(j, i))
                    .sum()
            })
            .collect()
    }

    pub fn eval(&self, lambda: &[Int]) -> CharacterValue {
        let torsion: Int = self
            .torsion_exponents
            .iter()
            .zip(lambda)
            .map(|(a, l)| a * l)
            .sum::<Int>()
            .mod_floor(&self.modulus);
        let exponents = self.free_exponents(lambda);
        let rational = self.rational_value(&torsion, &exponents);
        CharacterValue { modulus: self.modulus.clone(), torsion, exponents, rational }
    }

    fn rational_value(&self, torsion: &Int, exponents: &[Int]) -> Option<Rat> {
        let doubled = (Int::from(2) * torsion).mod_floor(&self.modulus);
        if !doubled.is_zero() {
            return None; // the torsion factor is not +-1
        }
        let mut acc = if torsion.is_zero() { Rat::one() } else { -Rat::one() };
        for (g, e) in self.generators.iter().zip(exponents) {
            let v = g.value.as_ref()?;
            acc *= rat_pow(v, e);
        }
        Some(acc)
    }

    /// Is `rho(lambda)` a root of unity? Decidable: exactly when the free
    /// part vanishes.
    pub fn is_torsion_at(&self, lambda: &[Int]) -> bool {
        self.free_exponents(lambda).iter().all(Int::is_zero)
    }

    /// The complex-conjugate presentation. Generator values are positive
    /// rationals, hence real and fixed by conjugation; only the torsion part
    /// inverts.
    pub fn conjugate(&self) -> Self {
        let torsion = self
            .torsion_exponents
            .iter()
            .map(|a| (-a).mod_floor(&self.modulus))
            .collect();
        CharacterPresentation {
            modulus: self.modulus.clone(),
            torsion_exponents: torsion,
            generators: self.generators.clone(),
            exponents: self.exponents.clone(),
            independence: self.independence,
        }
    }

    /// The inverse presentation (negated exponents everywhere).
    pub fn inverse(&self) -> Self {
        let torsion = self
            .torsion_exponents
            .iter()
            .map(|a| (-a).mod_floor(&self.modulus))
            .collect();
        let exponents = IntMatrix::from_fn(self.exponents.rows(), self.exponents.cols(), |i, j| {
            -self.exponents.get(i, j).clone()
        });
        CharacterPresentation {
            modulus: self.modulus.clone(),
            torsion_exponents: torsion,
            generators: self.generators.clone(),
            exponents,
            independence: self.independence,
        }
    }

    /// Rewrites the presentation over a common modulus and generator list
    /// (union by label, sorted). Fails on conflicting values for a label.
    fn harmonized_with(&self, other: &Self) -> Result<(Self, Self)> {
        let modulus = self.modulus.lcm(&other.modulus);
        let mut labels: Vec<String> = self
            .generators
            .iter()
            .chain(&other.generators)
            .map(|g| g.label.clone())
            .collect();
        labels.sort();
        labels.dedup();
        for l in &labels {
            let a = self.generators.iter().find(|g| g.label == *l);
            let b = other.generators.iter().find(|g| g.label == *l);
            if let (Some(a), Some(b)) = (a, b) {
                if a.value != b.value {
                    return Err(Error::IncompatiblePresentation(format!(
                        "generator `{l}` has conflicting values"
                    )));
                }
            }
        }
        let rewrite = |p: &Self| -> Result<Self> {
            let scale = &modulus / &p.modulus;
            let torsion: Vec<Int> =
                p.torsion_exponents.iter().map(|a| (a * &scale).mod_floor(&modulus)).collect();
            let generators: Vec<Generator> = labels
                .iter()
                .map(|l| {
                    self.generators
                        .iter()
                        .chain(&other.generators)
                        .find(|g| g.label == *l)
                        .cloned()
                        .expect("label from union")
                })
                .collect();
            let exponents = IntMatrix::from_fn(p.ambient_dim(), labels.len(), |j, i| {
                match p.generators.iter().position(|g| g.label == labels[i]) {
                    Some(old) => p.exponents.get(j, old).clone(),
                    None => Int::zero(),
                }
            });
            CharacterPresentation::new(p.ambient_dim(), modulus.clone(), torsion, generators, exponents)
        };
        Ok((rewrite(self)?, rewrite(other)?))
    }
}

fn rat_pow(base: &Rat, e: &Int) -> Rat {
    use num::ToPrimitive;
    let exp = e.to_i64().expect("generator exponent fits in i64");
    if exp == 0 {
        return Rat::one();
    }
    let mut acc = Rat::one();
    let mut b = if exp > 0 { base.clone() } else { base.recip() };
    let mut k = exp.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        k >>= 1;
    }
    acc
}

/// A translate `X = beta * T(Gamma)` of a subtorus, with the point given by a
/// character presentation of all of `Z^N` (the restriction to `Gamma` is the
/// character of the translate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusTranslate {
    ambient: usize,
    gamma: Sublattice,
    point: CharacterPresentation,
}

/// Result of [`torsion_closure`].
#[derive(Debug, Clone)]
pub struct TorsionClosure {
    pub translate: TorusTranslate,
    /// True when the restricted character is trivial, i.e. the closure is an
    /// honest subtorus rather than a torsion translate.
    pub is_subtorus: bool,
}

/// Result of [`obstruction_degree`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// `dim X = dim Y`; no divisor of `Y` contains `X`.
    Infinite,
    Finite { omega: Int, lambda: Vec<Int> },
}

impl TorusTranslate {
    pub fn new(ambient: usize, gamma: Sublattice, point: CharacterPresentation) -> Result<Self> {
        if gamma.ambient_dim() != ambient || point.ambient_dim() != ambient {
            return Err(Error::Dimension("ambient dimension mismatch".into()));
        }
        if !gamma.is_saturated() {
            return Err(Error::NotSaturated("translate lattice must be saturated".into()));
        }
        Ok(TorusTranslate { ambient, gamma, point })
    }

    /// The full torus through a rational point (the lattice is all of `Z^N`).
    pub fn from_rational_point(coords: &[Rat]) -> Result<Self> {
        let n = coords.len();
        Self::new(
            n,
            Sublattice::full(n),
            CharacterPresentation::from_rational_point(coords)?,
        )
    }

    /// A subtorus (trivial character) with the given saturated lattice.
    pub fn subtorus(gamma: Sublattice) -> Result<Self> {
        let n = gamma.ambient_dim();
        Self::new(n, gamma, CharacterPresentation::trivial(n))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn gamma(&self) -> &Sublattice {
        &self.gamma
    }

    pub fn point(&self) -> &CharacterPresentation {
        &self.point
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.gamma.rank()
    }

    /// Exact rational coordinates of the presented point, when computable.
    pub fn rational_coordinates(&self) -> Option<Vec<Rat>> {
        (0..self.ambient)
            .map(|j| {
                let mut e = vec![Int::zero(); self.ambient];
                e[j] = Int::one();
                self.point.eval(&e).rational
            })
            .collect()
    }
}

/// One binomial generator `x^lambda - rho(lambda)` per basis vector of
/// `Gamma`, the value in presented form.
pub fn binomial_generators(x: &TorusTranslate) -> Vec<(Vec<Int>, CharacterValue)> {
    x.gamma()
        .basis_rows()
        .into_iter()
        .map(|l| {
            let v = x.point().eval(&l);
            (l, v)
        })
        .collect()
}

/// Degree of the projective closure of the translate under the standard
/// embedding: `p! Vol_p(Q_B)` for any parametrization with kernel `Gamma`.
/// Depends only on the lattice.
pub fn translate_degree(x: &TorusTranslate) -> Result<Int> {
    degree_from_gamma(x.gamma())
}

pub fn degree_from_gamma(gamma: &Sublattice) -> Result<Int> {
    let b = parametrization_from_kernel(gamma)?;
    let p = b.dim();
    if p == 0 {
        return Ok(Int::one());
    }
    let vol = b.q_polytope().hull_volume();
    let deg = Rat::from(factorial(p)) * vol;
    debug_assert!(deg.denom().is_one());
    Ok(deg.to_integer())
}

/// Degree of the divisor cut on `Y` by `x^lambda - gamma` for any `gamma`
/// avoiding the excluded value; independent of `gamma`.
///
/// Computed by two independent routes and asserted equal: the mixed volume
/// `MV([0, M_B(lambda)], Q_B, ..., Q_B)` and the projected-prism value
/// `(p-1)! Vol_{p-1}(pi(Q_B)) ||M_B(lambda)||`.
pub fn binomial_divisor_degree(y: &TorusTranslate, lambda: &[Int]) -> Result<Int> {
    binomial_divisor_degree_gamma(y.gamma(), lambda)
}

/// Lattice-level form of [`binomial_divisor_degree`]: the degree depends only
/// on `Gamma_Y` and `lambda`, never on character values.
pub fn binomial_divisor_degree_gamma(gamma_y: &Sublattice, lambda: &[Int]) -> Result<Int> {
    if lambda.len() != gamma_y.ambient_dim() {
        return Err(Error::Dimension("lambda length mismatch".into()));
    }
    if gamma_y.contains_vector(lambda) {
        return Err(Error::Invalid(
            "lambda lies in Gamma_Y: the binomial is constant on Y".into(),
        ));
    }
    let b = parametrization_from_kernel(gamma_y)?;
    let p = b.dim();
    if p == 0 {
        return Err(Error::Invalid("Y is a point; it has no divisors".into()));
    }
    let v = b.apply(lambda);
    debug_assert!(v.iter().any(|x| !x.is_zero()));
    let v_rat: Vec<Rat> = v.iter().map(|x| Rat::from(x.clone())).collect();
    let q = b.q_polytope();

    // route 1: inclusion-exclusion mixed volume
    let seg = RatPolytope::segment_to(&v_rat);
    let mut family: Vec<&RatPolytope> = vec![&seg];
    for _ in 1..p {
        family.push(&q);
    }
    let mv = mixed_volume(&family)?;

    // route 2: orthogonal prism
    let prism = prism_degree(&q, &v_rat)?;

    assert_eq!(mv, prism, "mixed-volume and prism degree routes disagree");
    debug_assert!(mv.denom().is_one() && !mv.is_negative());
    Ok(mv.to_integer())
}

/// Covolume sandwich for the degree: returns
/// `(covol^2 / C(N,p), deg, C(N,p) covol^2)` and asserts the enclosure of
/// `deg^2`.
pub fn degree_bounds_eq6(y: &TorusTranslate) -> Result<(Rat, Int, Rat)> {
    let deg = translate_degree(y)?;
    let covol_sq = y.gamma().covolume_sq();
    let c = Rat::from(binomial(y.ambient_dim(), y.dim()));
    let lower = &covol_sq / &c;
    let upper = &covol_sq * &c;
    let deg_sq = Rat::from(&deg * &deg);
    assert!(
        lower <= deg_sq && deg_sq <= upper,
        "degree/covolume sandwich violated: {lower} <= {deg_sq} <= {upper}"
    );
    Ok((lower, deg, upper))
}

/// `X ⊆ Y` as translates: lattice containment plus character agreement on
/// `Gamma_Y`.
pub fn is_subtranslate(x: &TorusTranslate, y: &TorusTranslate) -> Result<bool> {
    if x.ambient_dim() != y.ambient_dim() {
        return Err(Error::Dimension("sub-translate test across ambients".into()));
    }
    let (px, py) = x.point().harmonized_with(y.point())?;
    if !x.gamma().contains_lattice(y.gamma()) {
        return Ok(false);
    }
    for row in y.gamma().basis_rows() {
        let vx = px.eval(&row);
        let vy = py.eval(&row);
        if vx.torsion != vy.torsion || vx.exponents != vy.exponents {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest torsion variety containing `X`:
/// `Gamma_U = {lambda in Gamma_X : rho(lambda) is a root of unity}
///          = Gamma_X ∩ ker(E^T)`, with the restricted torsion character.
pub fn torsion_closure(x: &TorusTranslate) -> Result<TorsionClosure> {
    let n = x.ambient_dim();
    let et = x.point().exponent_matrix().transpose();
    let free_kernel = kernel_basis(&et);
    let gamma_u = x.gamma().intersect(&free_kernel)?;
    debug_assert!(gamma_u.is_saturated());
    let is_subtorus = gamma_u
        .basis_rows()
        .iter()
        .all(|row| x.point().eval(row).torsion.is_zero());
    let point = CharacterPresentation::new(
        n,
        x.point().modulus().clone(),
        x.point().torsion_exponents().to_vec(),
        x.point().generators().to_vec(),
        IntMatrix::zero(n, x.point().generators().len()),
    )?;
    let translate = TorusTranslate::new(n, gamma_u, point)?;
    Ok(TorsionClosure { translate, is_subtorus })
}

/// Obstruction degree of `X` inside `Y`: the minimal degree of a binomial
/// divisor of `Y` containing `X`, with a minimizing exponent vector. The
/// minimum is taken over the algebraic closure; over non-closed subfields a
/// binomial need not realize it.
///
/// The search enumerates quotient classes by increasing quotient norm,
/// seeded at the first minimum and pruned by the lattice lower bound
/// `deg >= ||lambda||_perp deg(Y) / sqrt(C(N,p) C(N,p-1))`.
pub fn obstruction_degree(x: &TorusTranslate, y: &TorusTranslate) -> Result<Obstruction> {
    if !is_subtranslate(x, y)? {
        return Err(Error::NotSubtranslate(
            "obstruction degree needs X contained in Y".into(),
        ));
    }
    obstruction_from_lattices(x.gamma(), y.gamma())
}

/// Lattice-level obstruction search: `Gamma_X` contains `Gamma_Y`, both
/// saturated. Character data never enters the degree.
pub fn obstruction_from_lattices(
    gamma_x: &Sublattice,
    gamma_y: &Sublattice,
) -> Result<Obstruction> {
    if gamma_x.rank() == gamma_y.rank() {
        // X = Y (containment plus equal rank); no divisor of Y contains X
        return Ok(Obstruction::Infinite);
    }
    let n = gamma_x.ambient_dim();
    let p = n - gamma_y.rank();
    let quotient = QuotientLattice::new(gamma_x.clone(), gamma_y.clone())?;
    let FirstMinimum::Found { lambda: seed, .. } = quotient.first_minimum() else {
        unreachable!("rank gap is positive");
    };
    let deg_y = degree_from_gamma(gamma_y)?;
    let omega0 = binomial_divisor_degree_gamma(gamma_y, &seed)?;

    // Every lambda with deg <= omega0 satisfies
    // ||lambda||_perp^2 <= omega0^2 C(N,p) C(N,p-1) / deg(Y)^2.
    let c_prod = Rat::from(binomial(n, p) * binomial(n, p - 1));
    let deg_y_sq = Rat::from(&deg_y * &deg_y);
    let bound_sq = Rat::from(&omega0 * &omega0) * &c_prod / &deg_y_sq;
    let mut classes = quotient.classes_up_to(&bound_sq);
    classes.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let mut seen: Vec<Vec<Int>> = Vec::new();
    let mut best: Option<(Int, Rat, Vec<Int>)> = None; // (deg, norm_sq, rep)
    for (mu, norm_sq) in classes {
        if let Some((bd, _, _)) = &best {
            // in increasing norm order: once the lattice lower bound exceeds
            // the incumbent, no later class can match it
            if &norm_sq * &deg_y_sq > Rat::from(bd * bd) * &c_prod {
                break;
            }
        }
        let key = crate::lattice::sign_normalize(mu.clone());
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let rep0 = quotient.class_representative(&mu);
        let deg = binomial_divisor_degree_gamma(gamma_y, &rep0)?;
        let candidate_better = match &best {
            None => true,
            Some((bd, bn, _)) => deg < *bd || (deg == *bd && norm_sq < *bn),
        };
        let tie = matches!(&best, Some((bd, bn, _)) if deg == *bd && norm_sq == *bn);
        if candidate_better || tie {
            // canonical representative: minimal Euclidean norm, then
            // sign-normalized lexicographic order (over both signs)
            let mut reps = Vec::new();
            for r in quotient.min_l2_representatives(&rep0) {
                reps.push(crate::lattice::sign_normalize(r));
            }
            let neg: Vec<Int> = rep0.iter().map(|v| -v.clone()).collect();
            for r in quotient.min_l2_representatives(&neg) {
                reps.push(crate::lattice::sign_normalize(r));
            }
            reps.sort_by(|a, b| {
                crate::lattice::norm_sq_int(a)
                    .cmp(&crate::lattice::norm_sq_int(b))
                    .then_with(|| a.cmp(b))
            });
            let rep = reps.into_iter().next().expect("nonempty representative set");
            match &mut best {
                Some((bd, bn, br)) if tie => {
                    if rep < *br {
                        *bd = deg;
                        *bn = norm_sq;
                        *br = rep;
                    }
                }
                _ => best = Some((deg, norm_sq, rep)),
            }
        }
    }
    let (omega, _, lambda) = best.expect("the seed class is enumerated");
    Ok(Obstruction::Finite { omega, lambda })
}

/// Coordinatewise product of two translates of the same subtorus: torsion
/// exponents add modulo the common modulus, exponent matrices add.
pub fn hadamard_product(x1: &TorusTranslate, x2: &TorusTranslate) -> Result<TorusTranslate> {
    if x1.ambient_dim() != x2.ambient_dim() {
        return Err(Error::Dimension("Hadamard product across ambients".into()));
    }
    if x1.gamma() != x2.gamma() {
        return Err(Error::IncompatiblePresentation(
            "Hadamard product needs identical lattices".into(),
        ));
    }
    let (p1, p2) = x1.point().harmonized_with(x2.point())?;
    let n = x1.ambient_dim();
    let modulus = p1.modulus().clone();
    let torsion: Vec<Int> = p1
        .torsion_exponents()
        .iter()
        .zip(p2.torsion_exponents())
        .map(|(a, b)| (a + b).mod_floor(&modulus))
        .collect();
    let exponents = IntMatrix::from_fn(n, p1.generators().len(), |i, j| {
        p1.exponent_matrix().get(i, j) + p2.exponent_matrix().get(i, j)
    });
    let point =
        CharacterPresentation::new(n, modulus, torsion, p1.generators().to_vec(), exponents)?;
    TorusTranslate::new(n, x1.gamma().clone(), point)
}

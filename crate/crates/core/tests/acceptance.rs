//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured evidence (visible with `--nocapture`); a failing assertion
//! fails the criterion.

use essmin_core::funfield::{
    ff_bezout_split_check, ff_essmin_upper_sample, ff_verify_bounds, ord_matrix, FFTranslate,
    HyperForm,
};
use essmin_core::heights::{
    cyclotomic, is_root_of_unity, mahler_height, thm13_bound,
    AlgebraicNumber,
};
use essmin_core::interval::{ln2, Interval};
use essmin_core::lattice::{FirstMinimum, QuotientLattice, Sublattice};
use essmin_core::polytope::{mixed_volume, prism_degree, RatPolytope};
use essmin_core::torus::{
    binomial_divisor_degree_gamma, degree_bounds_eq6, degree_from_gamma, hadamard_product,
    kernel_from_parametrization, obstruction_degree, obstruction_from_lattices,
    parametrization_from_kernel, torsion_closure, Obstruction, TorusTranslate,
};
use essmin_core::verify::{
    rand_lattice_pair, rand_parametrization, rand_positive_rat, rand_ratfun, rand_saturated,
    rand_vector_outside,
};
use essmin_core::{binomial, Int, Rat};
use num::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn rat(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

fn dec(s: &str) -> Rat {
    let neg = s.starts_with('-');
    let d = s.trim_start_matches('-');
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

fn tol(exp: u32) -> Rat {
    Rat::new(Int::one(), Int::from(10u32).pow(exp))
}

/// The interval agrees with a reference decimal to within `eps`.
fn close_to(iv: &Interval, reference: &str, eps: &Rat) -> bool {
    let v = dec(reference);
    let outer = Interval::new(&v - eps, &v + eps);
    outer.contains_interval(iv)
}

/// Criterion 1: the mixed-volume route and the projected-prism route
/// compute the same integer degree on >= 200 seeded random instances
/// (N <= 5, p <= 4, |entries| <= 4), in at most 60 seconds.
#[test]
fn criterion_1_dual_route_degree_equality() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20260811);
    let mut checked = 0;
    while checked < 200 {
        let p = rng.gen_range(1..=4usize);
        let n = rng.gen_range(p.max(2)..=5usize);
        let b = rand_parametrization(&mut rng, p, n, 4);
        let lambda: Vec<Int> = loop {
            let l: Vec<Int> = (0..n).map(|_| Int::from(rng.gen_range(-4..=4))).collect();
            if b.apply(&l).iter().any(|x| !x.is_zero()) {
                break l;
            }
        };
        let v: Vec<Rat> = b.apply(&lambda).into_iter().map(Rat::from).collect();
        let q = b.q_polytope();
        let seg = RatPolytope::segment_to(&v);
        let mut family: Vec<&RatPolytope> = vec![&seg];
        for _ in 1..p {
            family.push(&q);
        }
        let route_mv = mixed_volume(&family).expect("well formed");
        let route_prism = prism_degree(&q, &v).expect("nonzero direction");
        assert_eq!(
            route_mv, route_prism,
            "routes disagree at p={p}, N={n}, lambda={lambda:?}"
        );
        assert!(route_mv.denom().is_one(), "degree must be an integer");
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "criterion 1 exceeded 60 s: {elapsed:?}");
    println!("criterion 1 PASS: dual-route equality on {checked} instances in {elapsed:?}");
}

/// Criterion 2: the degree/quotient-norm sandwich holds exactly (squared
/// form) on the same instance family, and the degree/covolume sandwich holds
/// for >= 100 random saturated lattices.
#[test]
fn criterion_2_degree_sandwiches() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260811);
    let mut checked = 0;
    while checked < 200 {
        let p = rng.gen_range(1..=4usize);
        let n = rng.gen_range(p.max(2)..=5usize);
        let b = rand_parametrization(&mut rng, p, n, 4);
        let gamma_y = kernel_from_parametrization(&b);
        let gamma_x = Sublattice::full(n);
        let lambda = rand_vector_outside(&mut rng, &gamma_x, &gamma_y, 4);
        let deg = binomial_divisor_degree_gamma(&gamma_y, &lambda).expect("valid lambda");
        let deg_y = degree_from_gamma(&gamma_y).expect("saturated");
        let quotient = QuotientLattice::new(gamma_x, gamma_y).expect("valid pair");
        let norm_sq = quotient.norm_sq(&lambda).expect("in Gamma_X");
        let cc = Rat::from(binomial(n, p) * binomial(n, p - 1));
        let ratio_sq = Rat::from(&deg * &deg) / (&norm_sq * Rat::from(&deg_y * &deg_y));
        assert!(
            cc.recip() <= ratio_sq && ratio_sq <= cc,
            "degree/norm sandwich fails at N={n}, p={p}: ratio^2={ratio_sq}"
        );
        checked += 1;
    }

    let mut sandwiches = 0;
    while sandwiches < 100 {
        let n = rng.gen_range(1..=5usize);
        let gy = rand_saturated(&mut rng, n, 4);
        if gy.rank() == n {
            continue; // a point has no covolume sandwich to test
        }
        let y = TorusTranslate::subtorus(gy).expect("saturated");
        // asserts the sandwich internally
        let (lo, deg, hi) = degree_bounds_eq6(&y).expect("ok");
        let deg_sq = Rat::from(&deg * &deg);
        assert!(lo <= deg_sq && deg_sq <= hi);
        sandwiches += 1;
    }
    println!("criterion 2 PASS: degree/norm sandwich on {checked} instances, covolume sandwich on {sandwiches}");
}

/// Criterion 3: the enumerated first minimum never exceeds the certified
/// Minkowski bound (>= 100 random quotients), and the computed obstruction
/// degree respects both the exact c3 bound and the printed coarse bound.
#[test]
fn criterion_3_minkowski_and_obstruction_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(31415926);
    let mut minkowski = 0;
    while minkowski < 100 {
        let n = rng.gen_range(2..=5usize);
        let (gx, gy) = rand_lattice_pair(&mut rng, n, 4);
        let q = QuotientLattice::new(gx, gy).expect("valid");
        let FirstMinimum::Found { min_sq, .. } = q.first_minimum() else {
            continue;
        };
        let bound = q.minkowski_bound_sq(128).expect("rank >= 1");
        assert!(
            min_sq <= *bound.hi(),
            "first minimum {min_sq} above Minkowski bound {bound:?}"
        );
        minkowski += 1;
    }

    let mut bounded = 0;
    while bounded < 100 {
        let n = rng.gen_range(2..=4usize);
        let (gx, gy) = rand_lattice_pair(&mut rng, n, 2);
        let p = n - gy.rank();
        let ndim = n - gx.rank();
        let k = (p - ndim) as u32;
        let Obstruction::Finite { omega, .. } =
            obstruction_from_lattices(&gx, &gy).expect("proper pair")
        else {
            panic!("finite obstruction expected");
        };
        let deg_x = degree_from_gamma(&gx).expect("ok");
        let deg_y = degree_from_gamma(&gy).expect("ok");
        let lhs = Rat::from(omega.pow(2 * k));
        let scale = Rat::from(&deg_x * &deg_x) * Rat::from(deg_y.pow(2 * k - 2));
        // exact c3 bound, certified by refinement
        let holds = essmin_core::interval::refine_decide(128, 1 << 14, |bits| {
            let c = essmin_core::heights::structural_constants(n, p, ndim, bits).ok()?;
            c.c3_pow_2k.scale(&scale).ge_rat(&lhs)
        });
        assert_eq!(holds, Ok(true), "sharp c3 bound fails: omega={omega} N={n} p={p} n={ndim}");
        // printed coarse bound 4^N N^{3/2}, compared in the 2k-th power
        let coarse = Rat::from(
            Int::from(16).pow(n as u32).pow(k) * Int::from(n as i64).pow(3 * k),
        ) * &scale;
        assert!(lhs <= coarse, "coarse bound fails: omega={omega} N={n}");
        bounded += 1;
    }
    println!("criterion 3 PASS: Minkowski on {minkowski} quotients, obstruction bounds on {bounded} pairs");
}

/// Criterion 4: the worked pipeline at X = (4, 8).
#[test]
fn criterion_4_worked_example_pipeline() {
    let x = TorusTranslate::from_rational_point(&[rat(4, 1), rat(8, 1)]).unwrap();
    let u = torsion_closure(&x).unwrap();
    assert_eq!(u.translate.gamma().basis_rows(), vec![vec![Int::from(3), Int::from(-2)]]);
    assert_eq!(
        essmin_core::torus::translate_degree(&u.translate).unwrap(),
        Int::from(3)
    );
    let Obstruction::Finite { omega, lambda } = obstruction_degree(&x, &u.translate).unwrap()
    else {
        panic!("finite omega expected");
    };
    assert_eq!(omega, Int::one());
    let neg: Vec<Int> = lambda.iter().map(|v| -v.clone()).collect();
    let target = vec![Int::one(), Int::from(-1)];
    assert!(lambda == target || neg == target, "lambda = +-(1,-1), got {lambda:?}");

    let m_k = ln2(192);
    let report = thm13_bound(&x, &m_k, "log(2)", 192).unwrap();
    let sharp = &report.bounds[0];
    // (2/sqrt 18) log 2 * 3 = sqrt(2) log 2, to 1e-9
    assert!(sharp.value.width() <= tol(9));
    assert!(
        close_to(&sharp.value, "0.980258143468547191713901723635", &tol(9)),
        "thm13 bound interval off: {:?}",
        sharp.value
    );
    // log 8 >= bound
    assert_eq!(sharp.holds_for_point, Some(true));
    let h = report.point_height.as_ref().unwrap();
    assert_eq!(h.base(), &Int::from(8));

    // monomial form: (2/3) log 2 sqrt(13) <= log 8
    let mono = report.bounds.iter().find(|b| b.name == "monomial_bound").unwrap();
    assert!(
        close_to(&mono.value, "1.666118467301452596423440690760", &tol(9)),
        "monomial bound value off: {:?}",
        mono.value
    );
    assert_eq!(mono.holds_for_point, Some(true));
    println!(
        "criterion 4 PASS: Gamma_U = span{{(3,-2)}}, deg U = 3, omega = 1 at lambda = {lambda:?}, \
         bound = {}, monomial bound = {}, h = log 8",
        sharp.value.decimal(10),
        mono.value.decimal(10)
    );
}

/// Criterion 5: Mahler heights. Golden ratio within 1e-12 of half the log
/// of the golden ratio, cyclotomics exactly zero and detected as torsion,
/// log(5)/12 reproduced to 1e-12.
#[test]
fn criterion_5_mahler_and_constants() {
    let golden = AlgebraicNumber::from_coeffs(vec![Int::from(-1), Int::from(-1), Int::one()])
        .unwrap();
    let h = mahler_height(&golden, &tol(12), 1 << 15).unwrap();
    assert!(h.width() <= tol(12));
    assert!(
        close_to(&h, "0.240605912529801723748879456712", &tol(12)),
        "golden-ratio height off: {h:?}"
    );

    for k in 1..=30u64 {
        let p = AlgebraicNumber::from_coeffs(cyclotomic(k)).unwrap();
        let h = mahler_height(&p, &tol(12), 1 << 15).unwrap();
        assert!(h.is_exact() && h.lo().is_zero(), "Phi_{k} must have height exactly 0");
        assert!(is_root_of_unity(&p), "Phi_{k} must be recognized as torsion");
    }

    let eq2 = essmin_core::heights::abelian_constant(192);
    assert!(
        close_to(&eq2, "0.134119826036175031216729944436", &tol(12)),
        "log(5)/12 off: {eq2:?}"
    );
    println!("criterion 5 PASS: golden = {}, 30 cyclotomics exact 0, log(5)/12 = {}",
        h.decimal(14), eq2.decimal(14));
}

/// Criterion 6: the function-field suite. Product formula on every sampled
/// order matrix; zero violations of the transplanted height lower bounds
/// over >= 100 seeded translates (N <= 4); exact split-form
/// Bezout on >= 100 forms; essential-minimum sampling on >= 20 families.
/// Total runtime <= 120 s.
#[test]
fn criterion_6_function_field_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(27182818);

    // product formula + verified bounds
    let mut verified = 0;
    let mut vacuous = 0;
    while verified < 100 {
        let n = rng.gen_range(1..=4usize);
        let alpha: Vec<_> = (0..n).map(|_| rand_ratfun(&mut rng, 2)).collect();
        let orders = ord_matrix(&alpha).expect("nonzero coordinates");
        assert!(orders.product_formula_holds(), "product formula fails for {alpha:?}");
        let Ok(x) = FFTranslate::from_point(alpha) else { continue };
        let report = ff_verify_bounds(&x, 5, 1000 + verified as u64, 3).expect("ok");
        if report.vacuous {
            vacuous += 1;
            if vacuous > 400 {
                panic!("sampler keeps producing constant points");
            }
            continue;
        }
        assert_eq!(report.violations, 0, "height inequality violated at {:?}", x.point());
        verified += 1;
    }

    // split-form Bezout
    for case in 0..100 {
        let count = rng.gen_range(1..=4usize);
        let roots: Vec<_> = (0..count).map(|_| rand_ratfun(&mut rng, 2)).collect();
        let rep = ff_bezout_split_check(&roots).expect("nonempty");
        assert!(rep.holds, "split Bezout fails on case {case}: {roots:?}");
    }

    // essential-minimum sampling on plane-curve families
    let mut families = 0;
    let mut attempts = 0;
    while families < 20 {
        attempts += 1;
        assert!(attempts < 400, "family sampler stalled");
        let c1 = rng.gen_range(1..=3i64);
        let c2 = rng.gen_range(1..=3i64);
        let c3 = rng.gen_range(0..=2i64);
        let f = HyperForm::new(
            2,
            vec![
                (vec![0, 1, 1], essmin_core::unipoly::QPoly::from_int_coeffs(&[c1])),
                (vec![2, 0, 0], essmin_core::unipoly::QPoly::from_int_coeffs(&[0, -c2])),
                (vec![0, 2, 0], essmin_core::unipoly::QPoly::from_int_coeffs(&[c3, 1])),
            ],
        )
        .expect("homogeneous");
        match ff_essmin_upper_sample(&f, 5, 500 + families as u64) {
            Ok(rep) => {
                assert!(rep.holds, "essential-minimum sampling failed");
                // every clean section carries a point of height <= h/deg
                for l in &rep.lines {
                    assert!(
                        l.average_height
                            <= Rat::new(Int::from(rep.h as i64), Int::from(rep.deg as i64))
                    );
                }
                families += 1;
            }
            Err(_) => continue, // rejected as possibly reducible
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "criterion 6 exceeded 120 s: {elapsed:?}");
    println!(
        "criterion 6 PASS: product formula + bounds on {verified} translates, \
         100 split forms, {families} plane families in {elapsed:?}"
    );
}

/// Criterion 7: for >= 50 random points with positive rational coordinates
/// the torsion closure of the Hadamard square is a subtorus.
#[test]
fn criterion_7_hadamard_square_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(16180339);
    for case in 0..50 {
        let n = rng.gen_range(1..=4usize);
        let coords: Vec<Rat> = (0..n).map(|_| rand_positive_rat(&mut rng, 9)).collect();
        let x = TorusTranslate::from_rational_point(&coords).expect("nonzero");
        let sq = hadamard_product(&x, &x).expect("same lattice");
        let u = torsion_closure(&sq).expect("ok");
        assert!(u.is_subtorus, "case {case}: closure not a subtorus at {coords:?}");
    }
    println!("criterion 7 PASS: 50 Hadamard squares close to subtori");
}

/// Criterion 8: saturate idempotence and the kernel/parametrization round
/// trip, exhaustively over the saturated sublattices of Z^3 with basis
/// entries in [-2, 2].
#[test]
fn criterion_8_exhaustive_z3_round_trips() {
    let vals = [-2i64, -1, 0, 1, 2];
    let mut vectors: Vec<Vec<Int>> = Vec::new();
    for a in vals {
        for b in vals {
            for c in vals {
                if (a, b, c) != (0, 0, 0) {
                    vectors.push(vec![Int::from(a), Int::from(b), Int::from(c)]);
                }
            }
        }
    }
    let mut seen: std::collections::BTreeSet<String> = std::collections::BTreeSet::new();
    let mut check = |g: &Sublattice| {
        let key = format!("{:?}", g.basis_rows());
        if !seen.insert(key) {
            return;
        }
        assert!(g.is_saturated());
        assert_eq!(&g.saturate(), g, "saturate must fix saturated lattices");
        assert_eq!(g.saturate().saturate(), g.saturate(), "idempotence");
        let b = parametrization_from_kernel(g).expect("saturated");
        assert_eq!(&kernel_from_parametrization(&b), g, "round trip failed");
    };

    // rank 0
    check(&Sublattice::zero(3));
    // rank 1 and 2 from exhaustive bases; rank 3 is Z^3 itself
    let mut r1 = 0usize;
    for v in &vectors {
        if let Ok(g) = Sublattice::from_basis(3, std::slice::from_ref(v)) {
            if g.is_saturated() {
                check(&g);
                r1 += 1;
            }
        }
    }
    let mut r2 = 0usize;
    for (i, v) in vectors.iter().enumerate() {
        for w in vectors.iter().skip(i + 1) {
            if let Ok(g) = Sublattice::from_basis(3, &[v.clone(), w.clone()]) {
                if g.is_saturated() {
                    check(&g);
                    r2 += 1;
                }
            }
        }
    }
    check(&Sublattice::full(3));
    assert!(r1 > 0 && r2 > 0);
    println!(
        "criterion 8 PASS: {} distinct saturated sublattices of Z^3 (from {} rank-1 and {} rank-2 bases)",
        seen.len(),
        r1,
        r2
    );
}

//! Independent brute-force oracles: exhaustive box enumerations, generic
//! hyperplane-section root counts, and Ehrhart differencing, checked against
//! the library's structured algorithms on seeded random instances.

use essmin_core::lattice::{FirstMinimum, QuotientLattice};
use essmin_core::polytope::RatPolytope;
use essmin_core::torus::{
    binomial_divisor_degree_gamma, degree_from_gamma, kernel_from_parametrization,
    obstruction_from_lattices, Obstruction, Parametrization,
};
use essmin_core::unipoly::QPoly;
use essmin_core::verify::{rand_lattice_pair, rand_parametrization};
use essmin_core::{Int, Rat};
use num::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// All coefficient vectors in `[-radius, radius]^rank`.
fn coefficient_box(rank: usize, radius: i64) -> Vec<Vec<Int>> {
    let mut out: Vec<Vec<Int>> = vec![Vec::new()];
    for _ in 0..rank {
        let mut next = Vec::with_capacity(out.len() * (2 * radius as usize + 1));
        for prefix in &out {
            for v in -radius..=radius {
                let mut p = prefix.clone();
                p.push(Int::from(v));
                next.push(p);
            }
        }
        out = next;
    }
    out
}

#[test]
fn first_minimum_matches_box_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(97);
    for _ in 0..40 {
        let n = rng.gen_range(2..=4usize);
        let (gx, gy) = rand_lattice_pair(&mut rng, n, 2);
        let q = QuotientLattice::new(gx.clone(), gy.clone()).expect("valid");
        let FirstMinimum::Found { lambda, min_sq } = q.first_minimum() else {
            panic!("rank gap is positive");
        };
        // the returned vector certifies the value
        assert_eq!(q.norm_sq(&lambda).expect("in Gamma_X"), min_sq);
        assert!(!gy.contains_vector(&lambda));
        // exhaustive box of Gamma_X coefficients
        let mut best: Option<Rat> = None;
        for coeffs in coefficient_box(gx.rank(), 6) {
            let v = gx.basis().vec_mul(&coeffs);
            if gy.contains_vector(&v) {
                continue;
            }
            let norm = q.norm_sq(&v).expect("in Gamma_X");
            if best.as_ref().is_none_or(|b| norm < *b) {
                best = Some(norm);
            }
        }
        let box_min = best.expect("unit coefficient vectors are outside Gamma_Y");
        assert!(min_sq <= box_min, "library minimum exceeds a box candidate");
        assert_eq!(min_sq, box_min, "box enumeration found a smaller vector");
    }
}

#[test]
fn obstruction_matches_box_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(193);
    for _ in 0..25 {
        let n = rng.gen_range(2..=3usize);
        let (gx, gy) = rand_lattice_pair(&mut rng, n, 2);
        let Obstruction::Finite { omega, lambda } =
            obstruction_from_lattices(&gx, &gy).expect("proper pair")
        else {
            panic!("finite obstruction expected");
        };
        // certificate
        assert_eq!(
            binomial_divisor_degree_gamma(&gy, &lambda).expect("valid"),
            omega
        );
        // brute force over a coefficient box
        let mut best: Option<Int> = None;
        for coeffs in coefficient_box(gx.rank(), 6) {
            let v = gx.basis().vec_mul(&coeffs);
            if gy.contains_vector(&v) {
                continue;
            }
            let deg = binomial_divisor_degree_gamma(&gy, &v).expect("valid");
            if best.as_ref().is_none_or(|b| deg < *b) {
                best = Some(deg);
            }
        }
        let box_min = best.expect("nonempty box");
        assert!(omega <= box_min);
        assert_eq!(omega, box_min, "box enumeration found a smaller divisor degree");
    }
}

/// Degree of the closure of a one-parameter monomial curve, counted as the
/// number of nonzero roots of a generic hyperplane section.
fn curve_degree_by_section(b: &Parametrization, rng: &mut ChaCha8Rng) -> Int {
    assert_eq!(b.dim(), 1);
    let exps: Vec<i64> = b
        .vectors()
        .iter()
        .map(|v| {
            use num::ToPrimitive;
            v[0].to_i64().expect("small exponent")
        })
        .collect();
    let min_exp = exps.iter().copied().min().unwrap_or(0).min(0);
    // l(s) = c_0 s^{-min} + sum_j c_j s^{b_j - min}
    let degree_of = |coeffs: &[i64]| -> Int {
        let mut poly = vec![Rat::zero(); 1];
        let mut add = |e: usize, c: i64| {
            if poly.len() <= e {
                poly.resize(e + 1, Rat::zero());
            }
            poly[e] += Rat::from(Int::from(c));
        };
        add((-min_exp) as usize, coeffs[0]);
        for (j, &e) in exps.iter().enumerate() {
            add((e - min_exp) as usize, coeffs[j + 1]);
        }
        let p = QPoly::from_coeffs(poly);
        let ord0 = p.coeffs().iter().take_while(|c| c.is_zero()).count();
        Int::from((p.deg_or_zero() - ord0) as i64)
    };
    // two independent generic draws must agree
    let draw = |rng: &mut ChaCha8Rng| -> Vec<i64> {
        (0..=exps.len()).map(|_| rng.gen_range(1..=97)).collect()
    };
    let d1 = degree_of(&draw(rng));
    let d2 = degree_of(&draw(rng));
    assert_eq!(d1, d2, "section count not generic");
    d1
}

#[test]
fn curve_degrees_match_generic_sections() {
    let mut rng = ChaCha8Rng::seed_from_u64(1009);

    // cuspidal cubic {(s^2, s^3)} and the twisted cubic {(s, s^2, s^3)}
    let cusp = Parametrization::new(
        essmin_core::lattice::IntMatrix::from_rows(&[vec![Int::from(2), Int::from(3)]]).unwrap(),
    )
    .unwrap();
    assert_eq!(curve_degree_by_section(&cusp, &mut rng), Int::from(3));
    assert_eq!(
        degree_from_gamma(&kernel_from_parametrization(&cusp)).unwrap(),
        Int::from(3)
    );
    let twisted = Parametrization::new(
        essmin_core::lattice::IntMatrix::from_rows(&[vec![
            Int::from(1),
            Int::from(2),
            Int::from(3),
        ]])
        .unwrap(),
    )
    .unwrap();
    assert_eq!(curve_degree_by_section(&twisted, &mut rng), Int::from(3));
    assert_eq!(
        degree_from_gamma(&kernel_from_parametrization(&twisted)).unwrap(),
        Int::from(3)
    );

    // random monomial curves
    for _ in 0..40 {
        let n = rng.gen_range(2..=5usize);
        let b = rand_parametrization(&mut rng, 1, n, 4);
        let gamma = kernel_from_parametrization(&b);
        let lib = degree_from_gamma(&gamma).unwrap();
        let oracle = curve_degree_by_section(&b, &mut rng);
        assert_eq!(lib, oracle, "degree mismatch for B = {:?}", b.vectors());
    }
}

#[test]
fn volumes_match_ehrhart_differencing() {
    let mut rng = ChaCha8Rng::seed_from_u64(4021);
    let dim = 3usize;
    for _ in 0..10 {
        let pts: Vec<Vec<Int>> = (0..5)
            .map(|_| (0..dim).map(|_| Int::from(rng.gen_range(-2i64..=2))).collect())
            .collect();
        let q = RatPolytope::from_integer_points(dim, &pts).unwrap();
        if q.affine_rank() < dim {
            assert_eq!(q.hull_volume(), Rat::zero());
            continue;
        }
        // L(k) = #(kQ ∩ Z^3); the third finite difference is 3! Vol(Q)
        let count = |k: i64| -> i64 {
            let scaled = q.scale(&Rat::from(Int::from(k)));
            let lo_hi: Vec<(i64, i64)> = (0..dim)
                .map(|c| {
                    use num::ToPrimitive;
                    let lo = scaled
                        .vertices()
                        .iter()
                        .map(|v| v[c].floor().to_integer())
                        .min()
                        .unwrap();
                    let hi = scaled
                        .vertices()
                        .iter()
                        .map(|v| v[c].ceil().to_integer())
                        .max()
                        .unwrap();
                    (lo.to_i64().unwrap(), hi.to_i64().unwrap())
                })
                .collect();
            let mut total = 0i64;
            for x in lo_hi[0].0..=lo_hi[0].1 {
                for y in lo_hi[1].0..=lo_hi[1].1 {
                    for z in lo_hi[2].0..=lo_hi[2].1 {
                        let p = vec![
                            Rat::from(Int::from(x)),
                            Rat::from(Int::from(y)),
                            Rat::from(Int::from(z)),
                        ];
                        if scaled.contains_point(&p) {
                            total += 1;
                        }
                    }
                }
            }
            total
        };
        let l0 = count(0);
        let l1 = count(1);
        let l2 = count(2);
        let l3 = count(3);
        let third_difference = l3 - 3 * l2 + 3 * l1 - l0;
        assert_eq!(
            Rat::new(Int::from(third_difference), Int::from(6)),
            q.hull_volume(),
            "Ehrhart differencing disagrees for {:?}",
            q.vertices()
        );
    }
}

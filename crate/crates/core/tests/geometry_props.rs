use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;
use snowflake_core::geometry::{disk_pairs, fit_product, next_pairs, phi_image, product_ball, CellCount, Family};
use snowflake_core::spectral::{invert_spectrum, rational, s_of_ell, SpectrumRecipe};
use snowflake_core::{exponents, pf_eigenvalue, IntMatrix, Number, Slope};

fn g32() -> Family {
    Family::snowflake(&IntMatrix::scalar(4), Slope::integer(8)).unwrap()
}

proptest! {
    #[test]
    fn phi_scales_each_degree(entries in prop::collection::vec((0u32..4, 0u64..1000), 0..6), r in 2u64..40) {
        let mut c = CellCount::new();
        for &(d, n) in &entries {
            c.add(d, BigUint::from(n));
        }
        let img = phi_image(&c, r);
        for (d, n) in c.iter() {
            prop_assert_eq!(img.get(d), n * BigUint::from(r).pow(d));
        }
        prop_assert_eq!(phi_image(&phi_image(&c, r), r), phi_image(&c, r * r));
    }

    #[test]
    fn disk_area_dominates_the_central_region(n in -20000i64..20000) {
        let d = g32().disk(1, n).unwrap();
        prop_assert!(d.area.total() >= BigUint::from(3u32) * BigUint::from(n.unsigned_abs()).pow(2));
        prop_assert!(d.perimeter <= 8 * n.unsigned_abs() as u128);
    }

    #[test]
    fn s_of_ell_recurrence(idx in 0usize..4, ell in 1u32..=6) {
        let a = [rational(2, 1), rational(5, 2), rational(3, 1), rational(7, 3)][idx].clone();
        let cur = s_of_ell(&Number::Exact(a.clone()), ell).unwrap();
        let prev = s_of_ell(&Number::Exact(a), ell - 1).unwrap();
        let (Number::Exact(cur), Number::Exact(prev)) = (cur, prev) else { panic!("exact input") };
        prop_assert_eq!(cur, rational(2, 1) - prev.recip());
    }
}

#[test]
fn ball_inequalities_for_g32() {
    let table = g32().ball_table(5, 8).unwrap();
    for k in 3..=5usize {
        let level = &table[k - 2];
        let lower = &table[k - 3];
        let mut ratios = Vec::new();
        for (b, lb) in level.iter().zip(lower) {
            assert!(b.shell.total() <= b.boundary.total(), "shell k={k} j={}", b.j);
            assert!(lb.boundary.total() <= b.boundary.total());
            ratios.push(ratio(&b.boundary.total(), &lb.boundary.total()));
        }
        let last = ratios[ratios.len() - 1];
        assert!((last / ratios[ratios.len() - 2] - 1.0).abs() < 0.01, "k={k} ratios {ratios:?}");
        assert!(ratios.iter().all(|&x| x >= 1.0 && x <= 1.01 * last), "k={k} ratios {ratios:?}");
        for w in level[3..].windows(2) {
            let g = ratio(&w[1].boundary.total(), &w[0].boundary.total());
            assert!((3.5..8.0).contains(&g), "k={k} j={} growth {g}", w[1].j);
        }
    }
    for w in table[0].windows(2) {
        assert!(w[1].interior.total() >= phi_image(&w[0].interior, 8).total());
    }
}

fn ratio(a: &BigUint, b: &BigUint) -> f64 {
    snowflake_core::fit::ln_big(a).exp() / snowflake_core::fit::ln_big(b).exp()
}

#[test]
fn ball_fits() {
    let z = Family::z2(2).unwrap();
    let (fit, _) = z.fit_ball_exponent(3, &(4..=12).collect::<Vec<_>>()).unwrap();
    assert!((fit.fit.slope - 2.0).abs() < 0.1, "{}", fit.fit.slope);
    for k in 3..=5 {
        let (fit, _) = g32().fit_ball_exponent(k, &(3..=8).collect::<Vec<_>>()).unwrap();
        assert!((fit.fit.slope - 3.0).abs() <= 0.3, "k={k} slope {}", fit.fit.slope);
    }
    let g52 = Family::snowflake(&IntMatrix::scalar(16), Slope::integer(32)).unwrap();
    let (fit, _) = g52.fit_ball_exponent(4, &(5..=12).collect::<Vec<_>>()).unwrap();
    assert!((fit.fit.slope - 2.5).abs() <= 0.125, "{}", fit.fit.slope);
}

#[test]
fn disk_fits() {
    let ds: Vec<u32> = (2..=12).collect();
    let (fit, _) = g32().fit_disk_exponent(1, &ds).unwrap();
    assert!((fit.fit.slope - 3.0).abs() < 0.3);
    let g52 = Family::snowflake(&IntMatrix::scalar(16), Slope::integer(32)).unwrap();
    let (fit, _) = g52.fit_disk_exponent(1, &(2..=8).collect::<Vec<_>>()).unwrap();
    assert!((fit.fit.slope - 2.5).abs() < 0.25);
    let (fit, _) = Family::z2(2).unwrap().fit_disk_exponent(1, &ds).unwrap();
    assert!((fit.fit.slope - 2.0).abs() < 1e-9);
}

#[test]
fn product_balls_follow_s_of_ell() {
    let z = Family::z2(2).unwrap();
    let rows = z.disk_rows(1, &(1..=12).collect::<Vec<_>>()).unwrap();
    let one = product_ball(&disk_pairs(&rows).unwrap()).unwrap();
    assert!((fit_product(&one).unwrap().slope - 1.5).abs() < 1e-9);
    let two = product_ball(&next_pairs(&one)).unwrap();
    assert!((fit_product(&two).unwrap().slope - 4.0 / 3.0).abs() < 1e-9);

    let g52 = Family::snowflake(&IntMatrix::scalar(16), Slope::integer(32)).unwrap();
    let rows = g52.disk_rows(1, &(2..=8).collect::<Vec<_>>()).unwrap();
    let lv = product_ball(&disk_pairs(&rows).unwrap()).unwrap();
    assert!((fit_product(&lv).unwrap().slope - 1.6).abs() < 0.08);
    let exact = product_ball(&[(rational(8, 1), rational(4, 1))]).unwrap();
    assert_eq!(exact[0].volume, BigRational::from_integer(2.into()));
}

#[test]
fn exact_exponents_for_powers_of_two() {
    for (p, q) in [(3u32, 1u32), (5, 2), (7, 3)] {
        let rep = exponents(&IntMatrix::scalar(4u64.pow(q)), Slope::integer(1 << p)).unwrap();
        assert_eq!(rep.dehn_exponent, Number::Exact(rational(p as i64, q as i64)));
    }
    let l = pf_eigenvalue(&IntMatrix::new(vec![vec![1, 1], vec![2, 1]]).unwrap(), 1e-12).unwrap();
    assert!((l.to_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-9);
}

#[test]
fn spectrum_round_trip() {
    let recipe = invert_spectrum(&rational(8, 5), 2).unwrap();
    assert_eq!(recipe, SpectrumRecipe::Snowflake { q: 1, ell: 1, p: 5, q_prime: 2 });
    assert_eq!(recipe.exponent(), rational(8, 5));
    for s in [rational(3, 2), rational(5, 2), rational(7, 5), rational(4, 3)] {
        for k in 1..=4 {
            if let Ok(r) = invert_spectrum(&s, k) {
                assert_eq!(r.exponent(), s);
                assert_eq!(r.dimension(), k);
            }
        }
    }
}

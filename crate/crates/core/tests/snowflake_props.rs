use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use snowflake_core::britton::Solver;
use snowflake_core::snowflake::{uniform_s_count, Body, Policy, Sign, SnowflakeParams, Terminal};
use snowflake_core::{IntMatrix, Slope};

fn matrices() -> Vec<(IntMatrix, Slope)> {
    vec![
        (IntMatrix::scalar(4), Slope::integer(8)),
        (IntMatrix::new(vec![vec![1, 1], vec![2, 1]]).unwrap(), Slope::integer(4)),
        (IntMatrix::scalar(3), Slope::new(7, 2).unwrap()),
        (IntMatrix::scalar(16), Slope::integer(32)),
    ]
}

fn policy() -> impl Strategy<Value = Policy> {
    prop_oneof![Just(Policy::Nearest), Just(Policy::Floor), Just(Policy::Ceil)]
}

fn check_tree(sp: &SnowflakeParams, w: &snowflake_core::SnowflakeWord) {
    if let Body::Composite(strands) = &w.body {
        for s in strands {
            assert!(s.remainder.unsigned_abs() < sp.slope.p);
            assert!(s.child.n.unsigned_abs() < w.n.unsigned_abs());
            check_tree(sp, &s.child);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn built_words_are_consistent(idx in 0usize..4, n in -5000i64..5000, pol in policy(), neg in any::<bool>()) {
        let (p, r) = &matrices()[idx];
        let sp = SnowflakeParams::new(p, *r).unwrap().with_policy(pol);
        let sign = if neg { Sign::Negative } else { Sign::Positive };
        for v in 1..=sp.graph.vertex_count() {
            let w = sp.build(v, n, sign).unwrap();
            check_tree(&sp, &w);
            let st = w.stats();
            let flat = w.flatten();
            prop_assert_eq!(flat.len() as u128, st.length);
            prop_assert!(st.d_min <= st.d_max);
            if st.s_count > 0 {
                prop_assert!(st.s_count <= st.length);
                let cap = (r.as_rational() * &sp.n0 + BigRational::one()) * BigRational::from_integer((2 * st.s_count).into());
                prop_assert!(BigRational::from_integer(st.length.into()) <= cap);
            }
            prop_assert!(sp.verify(&w, 0).unwrap().ok);
        }
    }

    #[test]
    fn solver_agrees_with_structure(idx in 0usize..3, n in -600i64..600, pol in policy()) {
        let (p, r) = &matrices()[idx];
        let sp = SnowflakeParams::new(p, *r).unwrap().with_policy(pol);
        let solver = Solver::new(p, *r).unwrap();
        let w = sp.build(1, n, Sign::Positive).unwrap();
        let verdict = sp.verify(&w, 5000).unwrap();
        prop_assert!(verdict.ok);
        prop_assert_eq!(solver.power_of_c(1, &w.flatten()).unwrap(), Some(n));
    }

    #[test]
    fn negative_word_is_reverse_shape(idx in 0usize..3, n in 1i64..3000) {
        let (p, r) = &matrices()[idx];
        let sp = SnowflakeParams::new(p, *r).unwrap();
        let pos = sp.build(1, n, Sign::Positive).unwrap().stats();
        let neg = sp.build(1, n, Sign::Negative).unwrap().stats();
        prop_assert_eq!(pos, neg);
    }
}

#[test]
fn uniform_depth_counts_match_the_matrix_formula() {
    for (p, r) in [(IntMatrix::scalar(4), 8u64), (IntMatrix::new(vec![vec![1, 1], vec![2, 1]]).unwrap(), 4)] {
        let sp = SnowflakeParams::new(&p, Slope::integer(r)).unwrap().with_terminal(Terminal::Unit).unwrap();
        for v in 1..=p.dim() {
            for k in 1..=8u32 {
                let st = sp.word_stats(v, sp.power(k).unwrap()).unwrap();
                assert_eq!(num_bigint::BigUint::from(st.s_count), uniform_s_count(&p, v, k), "v={v} k={k}");
                assert_eq!((st.d_min, st.d_max), (k, k));
            }
        }
    }
}

#[test]
fn row_convention_example() {
    let p = IntMatrix::new(vec![vec![1, 1], vec![2, 1]]).unwrap();
    assert_eq!(uniform_s_count(&p, 1, 2), num_bigint::BigUint::from(14u32));
    assert_eq!(uniform_s_count(&p, 2, 2), num_bigint::BigUint::from(2u32 * (3 + 7)));
}

#[test]
fn depth_is_logarithmic() {
    let sp = SnowflakeParams::new(&IntMatrix::scalar(4), Slope::integer(8)).unwrap();
    for d in 2..=12u32 {
        let st = sp.word_stats(1, sp.power(d).unwrap()).unwrap();
        assert!(st.d_max <= d, "depth {} at N = 8^{d}", st.d_max);
    }
}

#[test]
fn fits_reach_alpha() {
    let sp = SnowflakeParams::new(&IntMatrix::scalar(4), Slope::integer(8)).unwrap();
    let fit = sp.fit_alpha(1, &(2..=12).collect::<Vec<_>>()).unwrap();
    assert!((fit.fit.slope - 1.5).abs() < 0.15);
    assert!(fit.c0 > 0.0 && fit.c0 <= fit.c1);
    assert!(sp.fit_alpha(1, &[2, 3]).is_err());
}

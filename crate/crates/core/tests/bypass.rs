mod common;

use checkers_core::amplitude::exact_row;
use checkers_core::bypass::{absorbed_exact, edge_fluxes, StairStep};
use checkers_core::{
    amplitude_bypass, blocking_check, conservation_bypass, kirchhoff_check, BypassSet, Error, Evaluated,
    ExactAmplitude, Limits, MassParam, Mode, Rational, Site,
};
use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn exact_bypass(s: Site, set: &BypassSet, m: &Rational) -> ExactAmplitude {
    let mass = MassParam::rational(m.clone()).unwrap();
    match amplitude_bypass(s, set, &mass, Mode::Exact, true, &Limits::default()).unwrap() {
        Evaluated::Exact(a) => a,
        Evaluated::Float(_) => unreachable!(),
    }
}

fn brute_bypass(s: Site, set: &BypassSet, m: &Rational) -> ExactAmplitude {
    let forbidden = |x: i64, t: i64| Site::new(x, t).is_ok_and(|p| set.contains(p));
    amplitude_from_counts(&turn_counts(s.n(), s.tau(), &forbidden), m, s.tau())
}

#[test]
fn single_site_example() {
    let set = BypassSet::new([site(2, 2)]);
    for m in [q(1, 1), q(1, 2), q(3, 7)] {
        let a = exact_bypass(site(0, 4), &set, &m);
        let m2 = &m * &m;
        assert_eq!(a, ExactAmplitude { a1: -(&m2 * &m), a2: -m2.clone(), k: 3 });
        let d = Rational::one() + &m2;
        assert_eq!(a.prob(&m), &m2 * &m2 / (&d * &d));
    }
    assert!(!blocking_check(&set, 10).unwrap());
    assert_eq!(conservation_bypass(&set, &q(1, 1), &Limits::default()), Err(Error::NonBlocking));
}

#[test]
fn rows_and_caps_conserve() {
    let limits = Limits::default();
    for m in [q(1, 1), q(3, 7)] {
        for tau in [3, 4, 5, 10] {
            let set = BypassSet::full_row(tau).unwrap();
            assert!(blocking_check(&set, tau).unwrap());
            assert!(conservation_bypass(&set, &m, &limits).unwrap().is_one());
        }
        for n in 1..=5 {
            for mu_hat in 1..=3 {
                let set = BypassSet::row_cap(n, mu_hat).unwrap();
                assert!(blocking_check(&set, 100).unwrap(), "cap n={n} mu={mu_hat}");
                assert!(conservation_bypass(&set, &m, &limits).unwrap().is_one());
            }
        }
    }
}

#[test]
fn full_row_absorption_is_the_plain_row() {
    let m = q(2, 5);
    let absorbed = absorbed_exact(&BypassSet::full_row(7).unwrap(), &m, &Limits::default()).unwrap();
    let row = exact_row(7, &m, &Limits::default()).unwrap();
    for (s, a) in absorbed {
        assert_eq!(a, row.amplitude(s.n()));
    }
}

#[test]
fn origin_and_malformed_files_are_rejected() {
    assert_eq!(BypassSet::from_json_str("[[0,0],[1,1]]"), Err(Error::OriginInBypass));
    for text in ["[[1,2]", "{}", "[[1]]", "[[1,2,3]]", "[[\"a\",1]]", "[[0,-1]]"] {
        assert!(matches!(BypassSet::from_json_str(text), Err(Error::MalformedBypass(_))), "{text}");
    }
    let set = BypassSet::from_json_str(" [[ -1 , 3 ], [2,2]] ").unwrap();
    assert_eq!(BypassSet::from_json_str(&set.to_json_string()).unwrap(), set);
}

#[test]
fn seed_current_and_empty_set_balance() {
    let fluxes = edge_fluxes(6, &BypassSet::default(), &q(1, 1), &Limits::default()).unwrap();
    let seed = fluxes.iter().find(|e| e.from == (0, 0)).unwrap();
    assert_eq!((seed.to, seed.j.clone()), ((1, 1), Rational::one()));
    assert!(kirchhoff_check(20, &BypassSet::default(), &q(1, 1), &Limits::default()).unwrap().is_empty());
}

#[test]
fn staircase_shapes() {
    let set = BypassSet::staircase(3, &[StairStep::Diagonal, StairStep::Up, StairStep::Left]).unwrap();
    assert!(blocking_check(&set, 50).unwrap());
    assert!(conservation_bypass(&set, &q(1, 2), &Limits::default()).unwrap().is_one());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Removing sites that no path can visit before `s` leaves the plain amplitude.
    #[test]
    fn sets_outside_the_past_cone_change_nothing(tau in 2i64..14, j in 0i64..14, p in 1i64..6, d in 1i64..6) {
        let j = j % tau;
        let s = site(2 * j + 2 - tau, tau);
        let m = q(p, d);
        let set = BypassSet::new((1..tau).flat_map(|t| {
            (0..t).map(move |i| site(2 * i + 2 - t, t)).filter(move |x| !s.is_in_future_of(*x))
        }));
        let plain = exact_row(tau, &m, &Limits::default()).unwrap().amplitude(s.n());
        prop_assert_eq!(exact_bypass(s, &set, &m), plain);
    }

    #[test]
    fn staircases_match_path_oracle(start in 1i64..5, code in 0u64..729, p in 1i64..5, d in 1i64..5) {
        let set = BypassSet::staircase_from_code(start, code).unwrap();
        let m = q(p, d);
        prop_assume!(set.max_tau().unwrap() <= 12);
        for s in reachable_sites(set.max_tau().unwrap()) {
            prop_assert_eq!(exact_bypass(s, &set, &m), brute_bypass(s, &set, &m), "at {}", s);
        }
    }

    #[test]
    fn random_staircases_block_and_conserve(start in 1i64..7, code in 0u64..59049, p in 1i64..5, d in 1i64..5) {
        let set = BypassSet::staircase_from_code(start, code).unwrap();
        let m = q(p, d);
        prop_assert!(blocking_check(&set, 200).unwrap());
        prop_assert!(conservation_bypass(&set, &m, &Limits::default()).unwrap().is_one());
        prop_assert!(kirchhoff_check(20, &set, &m, &Limits::default()).unwrap().is_empty());
    }

    #[test]
    fn random_sites_balance_currents(members in proptest::collection::vec((1i64..10, 0i64..10), 0..8)) {
        let set = BypassSet::new(members.into_iter().map(|(t, j)| site(2 * (j % t) + 2 - t, t)));
        let v = kirchhoff_check(12, &set, &q(2, 3), &Limits::default()).unwrap();
        prop_assert!(v.is_empty());
    }

    #[test]
    fn removing_a_row_member_is_sane(tau in 2i64..8) {
        let set = BypassSet::full_row(tau).unwrap();
        let hole = set.iter().next().unwrap();
        let open = set.without(hole);
        prop_assert_eq!(open.len() + 1, set.len());
        prop_assert!(!blocking_check(&open, tau).unwrap());
        prop_assert!(conservation_bypass(&open, &q(1, 1), &Limits::default()).is_err());
        prop_assert!(!Rational::zero().is_one());
    }
}

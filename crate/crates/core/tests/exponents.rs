use diophant_core::cf::CFNumber;
use diophant_core::exponents::*;
use diophant_core::{rat, Rat};
use num_traits::One;

/// Slack for comparing tail estimates taken over different windows.
fn slack() -> Rat {
    rat(1, 20)
}

#[test]
fn ordering_chain() {
    for (spec, depth) in [
        ("power:1/2", 12),
        ("power:1", 10),
        ("power:2", 7),
        ("super", 6),
    ] {
        let mut cf = CFNumber::parse(spec).unwrap();
        let omega = omega_regular(&mut cf, depth, None)
            .unwrap()
            .tail_estimate
            .unwrap();
        let hh = omega_hat_hat_number(&mut cf, depth, None)
            .unwrap()
            .tail_estimate
            .unwrap();
        assert!(hh.lo() <= &(omega.hi() + slack()), "{spec}");
        assert!(hh.hi() >= &(Rat::one() - slack()), "{spec}");
    }
}

#[test]
fn no_lambda_is_certifiably_above_one_half() {
    let cap = rat(1, 2) + rat(1, 1_000_000);
    for (spec, depth) in [
        ("power:1/3", 14),
        ("power:1", 12),
        ("power:3", 6),
        ("super", 8),
        ("sqrt2", 10),
    ] {
        let mut cf = CFNumber::parse(spec).unwrap();
        let seq = convergent_hyperbolic(&mut cf, depth).unwrap();
        let e = omega_hat_hat_lattice(&seq, None).unwrap();
        for (k, v) in &e.trace {
            assert!(v.lo() < &cap, "{spec} k={k}");
        }
    }
}

#[test]
fn trace_widths_are_refined() {
    let mut cf = CFNumber::parse("power:1").unwrap();
    let e = omega_hat_hat_lattice_of(&mut cf, 12, None).unwrap();
    for (_, v) in &e.trace {
        assert!(v.width() <= rat(1, 10_000));
    }
    let n = omega_hat_hat_number(&mut cf, 12, None).unwrap();
    assert_eq!(n.trace.len(), e.trace.len());
}

#[test]
fn premise_fails_for_bounded_quotients() {
    for spec in ["golden", "sqrt2", "quotients:1,3,1,3"] {
        let mut cf = CFNumber::parse(spec).unwrap();
        let r = verify_lemma2_premise(&mut cf, 12).unwrap();
        assert_ne!(r.verdict, Verdict::Certified, "{spec}");
    }
}

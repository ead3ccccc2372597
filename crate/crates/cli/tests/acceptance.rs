//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::time::{Duration, Instant};

use diophant::run;
use diophant_core::cf::CFNumber;
use diophant_core::exact::{phi_enclose, sqrt_enclose, to_decimal, RoundDir};
use diophant_core::exponents::*;
use diophant_core::lattice::*;
use diophant_core::{rat, Rat, RatInterval};
use serde_json::Value;

const BUDGET: u64 = 100_000_000;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn cli(args: &[&str]) -> (i32, String) {
    let out = run(std::iter::once("diophant").chain(args.iter().copied()));
    (out.code, out.stdout)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(started: Instant, limit: u64, what: &str) -> Result<(), String> {
    let took = started.elapsed();
    ensure(
        took <= Duration::from_secs(limit),
        format!("{what} took {took:.1?}, limit {limit} s"),
    )
}

fn gamma_runs() -> [(&'static str, Rat, usize); 3] {
    [
        ("1/2", rat(1, 2), 18),
        ("1", rat(1, 1), 14),
        ("2", rat(2, 1), 10),
    ]
}

fn spectrum_point() -> Check {
    let mut seen = Vec::new();
    for (g, _, depth) in gamma_runs() {
        let started = Instant::now();
        let (code, out) = cli(&[
            "verify",
            "spectrum-point",
            "--gamma",
            g,
            "--depth",
            &depth.to_string(),
            "--tol",
            "1/100",
        ]);
        within(started, 60, &format!("γ = {g}"))?;
        let doc: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        ensure(code == 0, format!("γ = {g}: exit {code}"))?;
        let report = &doc["data"]["reports"][0];
        ensure(
            report["verdict"] == "certified",
            format!("γ = {g}: {}", report["verdict"]),
        )?;
        let tail = &report["estimate"]["tail_estimate"]["dec"];
        seen.push(format!(
            "γ={g}: [{}, {}]",
            tail[0].as_str().unwrap_or("?"),
            tail[1].as_str().unwrap_or("?")
        ));
    }
    Ok(seen.join("; "))
}

fn golden_vanishes() -> Check {
    let started = Instant::now();
    let mut cf = number("golden")?;
    let est = omega_hat_hat_lattice_of(&mut cf, 24, None).map_err(|e| e.to_string())?;
    ensure(
        est.provenance == Provenance::DirectProfile,
        "not the direct-profile regime",
    )?;
    ensure(
        est.tail_estimate == Some(RatInterval::point(rat(0, 1))),
        "estimate is not exactly 0",
    )?;
    let ts: Vec<Rat> = (0..=40).map(|i| rat(10, 1) + rat(990 * i, 40)).collect();
    let f = direct_weak_profile(&mut cf, &ts, BUDGET).map_err(|e| e.to_string())?;
    let root_phi = sqrt_enclose(&phi_enclose(256), 256).map_err(|e| e.to_string())?;
    let first = f[0].1.clone().ok_or("empty ball at t = 10")?;
    for (t, v) in &f {
        let v = v.as_ref().ok_or(format!("empty ball at t = {t}"))?;
        ensure(
            v.overlaps(&root_phi) && v.width() < rat(1, 1_000_000),
            format!("f(t) ≠ √φ at t = {t}"),
        )?;
    }
    within(started, 30, "golden")?;
    Ok(format!(
        "ω̂̂ = 0 (direct-profile), f ≡ √φ ≈ {} at {} points of [10, 1000]",
        to_decimal(first.lo(), 8, RoundDir::Down),
        ts.len()
    ))
}

fn super_growth() -> Check {
    let started = Instant::now();
    let mut cf = number("super")?.with_max_digits(2_000_000);
    let seq = convergent_hyperbolic(&mut cf, 10).map_err(|e| e.to_string())?;
    let est = omega_hat_hat_lattice(&seq, None).map_err(|e| e.to_string())?;
    let offset = est.index_offset.ok_or("no index offset")?;
    let lambda = |k: i64| -> Result<RatInterval, String> {
        est.trace
            .iter()
            .find(|(i, _)| *i as i64 + offset == k)
            .map(|(_, v)| v.clone())
            .ok_or(format!("no λ for v_{k}"))
    };
    let mut prev: Option<RatInterval> = None;
    let mut shown = Vec::new();
    for k in 5..=9i64 {
        let v = lambda(k)?;
        let target = rat(k, 2 * k + 2);
        let band = RatInterval::new(&target - rat(1, 50), &target + rat(1, 50));
        ensure(
            v.is_subset_of(&band),
            format!("λ_{k} = {v:?} misses {target}"),
        )?;
        if let Some(p) = &prev {
            ensure(p.certainly_lt(&v), format!("λ_{k} not above λ_{}", k - 1))?;
        }
        shown.push(to_decimal(&v.midpoint(), 4, RoundDir::Down));
        prev = Some(v);
    }
    within(started, 60, "super")?;
    Ok(format!("λ_5..λ_9 = {}", shown.join(", ")))
}

fn number(rule: &str) -> Result<CFNumber, String> {
    CFNumber::parse(rule).map_err(|e| e.to_string())
}

fn rational_infinite() -> Check {
    for rule in ["rational:10/7", "rational:355/113", "rational:144/89"] {
        let (code, out) = cli(&["exponents", "--rule", rule, "--depth", "6"]);
        let doc: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        ensure(code == 0, format!("{rule}: exit {code}"))?;
        for name in [
            "omega",
            "omega_hat",
            "omega_hat_hat",
            "omega_hat_hat_lattice",
        ] {
            ensure(
                doc["data"]["estimates"][name]["infinite"] == true,
                format!("{rule}: {name} finite"),
            )?;
        }
    }
    Ok("all four exponents infinite for three rational inputs".into())
}

fn classical_sandwich() -> Check {
    let mut shown = Vec::new();
    for rule in ["golden", "sqrt2", "power:1", "super"] {
        let mut cf = number(rule)?;
        let report = verify_classical_sandwich(&mut cf, 25).map_err(|e| e.to_string())?;
        let rows = report.rows.len();
        ensure(rows > 0, format!("{rule}: no rows"))?;
        ensure(
            report.rows.iter().all(|r| r.holds == Some(true)),
            format!("{rule}: a row fails"),
        )?;
        ensure(
            report.verdict == Verdict::Certified
                || report.notes.iter().any(|n| n.contains("budget")),
            format!("{rule}: {}", report.verdict.as_str()),
        )?;
        shown.push(format!(
            "{rule} k≤{}",
            report.rows.last().map_or(0, |r| r.k)
        ));
    }
    Ok(shown.join(", "))
}

fn gamma_sandwiches() -> Check {
    for (g, gamma, _) in gamma_runs() {
        for report in [
            verify_denominator_sandwich(&gamma, 10, 100_000).map_err(|e| e.to_string())?,
            verify_product_bounds(&gamma, 10, 100_000).map_err(|e| e.to_string())?,
        ] {
            ensure(
                report.verdict == Verdict::Certified,
                format!("{} γ = {g}: {}", report.claim, report.verdict.as_str()),
            )?;
        }
    }
    Ok("denominator and product bounds certified for γ = 1/2, 1, 2".into())
}

fn lemma3_and_half() -> Check {
    let half = rat(1, 2);
    for (g, gamma, depth) in gamma_runs() {
        let report =
            verify_spectrum_point(&gamma, depth, &rat(1, 100), &SpectrumOptions::default())
                .map_err(|e| e.to_string())?;
        let est = report.estimate.as_ref().ok_or("no estimate")?;
        ensure(
            est.trace.iter().all(|(_, v)| v.lo() <= &half),
            format!("γ = {g}: λ certifiably above 1/2"),
        )?;
        let cf = &mut number(&format!("power:{gamma}"))?;
        let seq = convergent_hyperbolic(cf, depth).map_err(|e| e.to_string())?;
        let growth = verify_lemma3_growth(&seq).map_err(|e| e.to_string())?;
        ensure(
            growth.verdict == Verdict::Certified,
            format!("γ = {g}: growth {}", growth.verdict.as_str()),
        )?;
    }
    Ok("growth bound certified and every λ ≤ 1/2 in all three runs".into())
}

fn minima_agree() -> Check {
    let started = Instant::now();
    let bound = rat(500, 1);
    for rule in ["sqrt2", "golden", "power:1"] {
        let mut cf = number(rule)?;
        let brute = brute_minima(&mut cf, &bound, MinimaKind::Relative, BUDGET)
            .map_err(|e| e.to_string())?;
        let conv = relative_minima_convergent(&mut cf, &bound).map_err(|e| e.to_string())?;
        ensure(
            brute.class_keys() == conv.class_keys(),
            format!("{rule}: relative minima differ"),
        )?;
        let hyp = brute_minima(&mut cf, &bound, MinimaKind::Hyperbolic, BUDGET)
            .map_err(|e| e.to_string())?;
        ensure(
            hyp.class_keys().is_subset(&brute.class_keys()),
            format!("{rule}: hyperbolic ⊄ relative"),
        )?;
        let ts: Vec<Rat> = (0..20).map(|i| rat(3 + 25 * i, 1)).collect();
        let f = direct_weak_profile(&mut cf, &ts, BUDGET).map_err(|e| e.to_string())?;
        for (t, v) in &f {
            let Some(idx) = hyp.points.iter().rposition(|p| p.sup.hi() <= t) else {
                ensure(
                    v.is_none(),
                    format!("{rule}: f({t}) defined below the first minimum"),
                )?;
                continue;
            };
            let v = v.as_ref().ok_or(format!("{rule}: f({t}) undefined"))?;
            let step = sqrt_enclose(&hyp.points[idx].pi2, 256).map_err(|e| e.to_string())?;
            ensure(v.overlaps(&step), format!("{rule}: f({t}) off the step"))?;
        }
    }
    within(started, 120, "minima")?;
    Ok("√2, φ, power:1 agree up to T = 500; f matches the step function at 20 points".into())
}

fn dirichlet() -> Check {
    let ts: Vec<Rat> = [1, 3, 10, 42, 100, 333, 1000, 2718, 5000, 10_000]
        .iter()
        .map(|&t| rat(t, 1))
        .collect();
    for rule in ["golden", "sqrt2"] {
        let mut cf = number(rule)?;
        let report = verify_dirichlet(&mut cf, &ts, &rat(1, 1)).map_err(|e| e.to_string())?;
        ensure(
            report.verdict == Verdict::Certified,
            format!("{rule}: {}", report.verdict.as_str()),
        )?;
        ensure(
            report.rows.len() == ts.len(),
            format!("{rule}: {} rows", report.rows.len()),
        )?;
    }
    Ok("γ = 1 certified at 10 values of t for φ and √2".into())
}

fn deterministic() -> Check {
    let runs: [&[&str]; 4] = [
        &[
            "verify",
            "spectrum-point",
            "--gamma",
            "1/2,1,2",
            "--depth",
            "10",
        ],
        &["exponents", "--rule", "power:1", "--depth", "10"],
        &[
            "minima", "--rule", "sqrt2", "--bound", "300", "--mode", "brute", "--format", "csv",
        ],
        &["profile", "--rule", "power:1/2", "--t", "5,50,500"],
    ];
    for args in runs {
        let a = cli(args);
        let b = cli(args);
        ensure(a == b, format!("{} differs between runs", args.join(" ")))?;
    }
    Ok("four commands byte-identical across runs".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("spectrum point certified for γ = 1/2, 1, 2", spectrum_point),
        ("golden ratio exponent vanishes", golden_vanishes),
        ("super growth exponents approach k/(2k+2)", super_growth),
        ("rational inputs are infinite", rational_infinite),
        ("classical sandwich", classical_sandwich),
        ("γ sandwiches", gamma_sandwiches),
        ("growth lemma and λ ≤ 1/2", lemma3_and_half),
        ("brute and convergent minima agree", minima_agree),
        ("Dirichlet certificates", dirichlet),
        ("deterministic output", deterministic),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = check();
        let took = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({took:.1} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.1} s): {why}", i + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}

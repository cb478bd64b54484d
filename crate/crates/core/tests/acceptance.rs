//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach the terminal.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use motsteen_core::integral::z12::only_documented_warning;
use motsteen_core::verify::{self, Suite, VerifyConfig};
use motsteen_core::{Prime, Scheme, SchemeId, Status, SuiteReport};

/// Every compatible (scheme, prime) pair swept by the global criteria.
fn scheme_pairs() -> Vec<Scheme> {
    let p = |n| Prime::new(n).unwrap();
    [
        (SchemeId::AlgClosed, 2),
        (SchemeId::AlgClosed, 3),
        (SchemeId::RealP2, 2),
        (SchemeId::RealOddP, 3),
        (SchemeId::FiniteField { q: 3 }, 2),
        (SchemeId::FiniteField { q: 5 }, 2),
        (SchemeId::FiniteField { q: 7 }, 3),
        (SchemeId::FiniteField { q: 19 }, 3),
        (SchemeId::ZHalf, 2),
    ]
    .into_iter()
    .map(|(id, n)| Scheme::new(id, p(n)).unwrap())
    .collect()
}

fn scheme(id: SchemeId, p: u32) -> Scheme {
    Scheme::new(id, Prime::new(p).unwrap()).unwrap()
}

fn run(suite: Suite, s: &Scheme, dmax: i64, wmax: i64) -> SuiteReport {
    verify::run_one(suite, &VerifyConfig::new(s.clone(), dmax, wmax)).unwrap_or_else(|e| {
        let mut r = SuiteReport::new(suite.name());
        r.push(motsteen_core::Check::new("evaluation", Status::Fail, 0, e.to_string()));
        r
    })
}

fn check<'a>(r: &'a SuiteReport, name: &str) -> &'a motsteen_core::Check {
    r.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("{} has no check '{name}'", r.suite))
}

fn cases(r: &SuiteReport) -> u64 {
    r.checks.iter().map(|c| c.cases).sum()
}

/// Outcome of one criterion.
struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn from_reports(reports: &[(String, SuiteReport)], extra: impl FnOnce(&[(String, SuiteReport)]) -> Option<String>) -> Self {
        let failing = reports.iter().find_map(|(label, r)| {
            r.first_failure().map(|c| format!("{label}: {} ({})", c.name, c.counterexample.clone().unwrap_or_default()))
        });
        let extra = extra(reports);
        let total: u64 = reports.iter().map(|(_, r)| cases(r)).sum();
        match failing.or(extra) {
            Some(why) => Outcome { pass: false, detail: why },
            None => Outcome { pass: true, detail: format!("{total} cases over {} configurations", reports.len()) },
        }
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let t = start.elapsed();
    o.detail = format!("{}, {:.1}s (limit {}s)", o.detail, t.as_secs_f64(), limit.as_secs());
    if t >= limit {
        o.pass = false;
    }
    o
}

fn label(s: &Scheme) -> String {
    format!("{} p={}", s.name(), s.p())
}

fn c1_beta_squared() -> Outcome {
    timed(Duration::from_secs(120), || {
        let reports: Vec<_> = scheme_pairs().iter().map(|s| (label(s), run(Suite::Beta2, s, 40, 3))).collect();
        Outcome::from_reports(&reports, |_| None)
    })
}

fn c2_blocks() -> Outcome {
    timed(Duration::from_secs(60), || {
        let reports: Vec<_> = [2, 3]
            .into_iter()
            .map(|p| {
                let s = Scheme::alg_closed(Prime::new(p).unwrap());
                (label(&s), run(Suite::Blocks, &s, 0, 0))
            })
            .collect();
        Outcome::from_reports(&reports, |rs| {
            rs.iter().find(|(_, r)| cases(r) != 4u64.pow(5)).map(|(l, r)| format!("{l}: {} blocks, expected 1024", cases(r)))
        })
    })
}

fn c3_conjugation() -> Outcome {
    let schemes = [
        scheme(SchemeId::RealP2, 2),
        scheme(SchemeId::AlgClosed, 3),
        scheme(SchemeId::FiniteField { q: 7 }, 3),
        scheme(SchemeId::ZHalf, 2),
    ];
    let reports: Vec<_> = schemes.iter().map(|s| (label(s), run(Suite::Chi, s, 20, 3))).collect();
    Outcome::from_reports(&reports, |_| None)
}

fn c4_products() -> Outcome {
    let reports: Vec<_> = [2, 3]
        .into_iter()
        .map(|p| {
            let s = Scheme::alg_closed(Prime::new(p).unwrap());
            (label(&s), run(Suite::Products, &s, 0, 0))
        })
        .collect();
    for (l, r) in &reports {
        for c in &r.checks {
            println!("    [{l}] {} {}: {}", c.status, c.name, c.detail);
            if let Some(x) = &c.counterexample {
                println!("        counterexample: {x}");
            }
        }
    }
    Outcome::from_reports(&reports, |rs| {
        rs.iter().find_map(|(l, r)| {
            let uniform = check(r, "exactly one convention holds uniformly").status == Status::Pass;
            let other_fails = check(r, "product formula, delta_(k-1) convention").status != Status::Pass;
            (!uniform || !other_fails).then(|| format!("{l}: conventions do not separate"))
        })
    })
}

fn c5_linear() -> Outcome {
    let reports: Vec<_> = [2, 3]
        .into_iter()
        .map(|p| {
            let s = Scheme::alg_closed(Prime::new(p).unwrap());
            (label(&s), run(Suite::Linear, &s, 0, 0))
        })
        .collect();
    Outcome::from_reports(&reports, |_| None)
}

fn c6_degrees() -> Outcome {
    let reports: Vec<_> = [2, 3]
        .into_iter()
        .map(|p| {
            let s = Scheme::alg_closed(Prime::new(p).unwrap());
            (label(&s), run(Suite::Degrees, &s, 30, 0))
        })
        .collect();
    Outcome::from_reports(&reports, |_| None)
}

fn c7_freeness() -> Outcome {
    let reports: Vec<_> = [2, 3]
        .into_iter()
        .map(|p| {
            let s = Scheme::alg_closed(Prime::new(p).unwrap());
            (label(&s), run(Suite::Freeness, &s, 30, 3))
        })
        .collect();
    Outcome::from_reports(&reports, |_| None)
}

fn c8_pullback() -> Outcome {
    let reports: Vec<_> = scheme_pairs().iter().map(|s| (label(s), run(Suite::Pullback, s, 16, 3))).collect();
    Outcome::from_reports(&reports, |_| None)
}

fn c9_schemes() -> Outcome {
    let real = scheme(SchemeId::RealP2, 2);
    let ff = scheme(SchemeId::FiniteField { q: 7 }, 3);
    let zh = scheme(SchemeId::ZHalf, 2);
    let reports = vec![
        (label(&real), run(Suite::Kerbasis, &real, 25, 3)),
        (label(&ff), run(Suite::Kerbasis, &ff, 25, 3)),
        (label(&zh), run(Suite::Z12, &zh, 0, 0)),
    ];
    Outcome::from_reports(&reports, |rs| {
        let (_, ffr) = &rs[1];
        let needed = ["coefficient Bockstein", "ker beta dims = square-zero presentation counts"];
        if let Some(n) = needed.iter().find(|n| check(ffr, n).status != Status::Pass) {
            return Some(format!("finite field: {n}"));
        }
        let (_, z) = &rs[2];
        (!only_documented_warning(z)).then(|| "z-half: unexpected non-pass".to_string())
    })
}

fn c10_embedding() -> Outcome {
    let schemes = [
        scheme(SchemeId::AlgClosed, 2),
        scheme(SchemeId::AlgClosed, 3),
        scheme(SchemeId::RealP2, 2),
        scheme(SchemeId::FiniteField { q: 7 }, 3),
    ];
    let reports: Vec<_> = schemes.iter().map(|s| (label(s), run(Suite::Embedding, s, 20, 3))).collect();
    Outcome::from_reports(&reports, |_| None)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("beta^2 = 0, all schemes, degree <= 40", c1_beta_squared),
        ("block acyclicity, supp m in {0..4}, m_i <= 3", c2_blocks),
        ("conjugation: multiplicative, involutive, coefficient values", c3_conjugation),
        ("product relations: one delta convention holds uniformly", c4_products),
        ("linear relations vanish", c5_linear),
        ("degree formula for y_(a,U), degree <= 30", c6_degrees),
        ("freeness of the y-basis of im beta, degree <= 30", c7_freeness),
        ("pullback: p-torsion augmentation ideal, commutative, associative", c8_pullback),
        ("scheme instances: real, F_7 at p = 3, Z[1/2]", c9_schemes),
        ("MZ presentation embeds injectively, degree <= 20", c10_embedding),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status}: {name} ({})", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

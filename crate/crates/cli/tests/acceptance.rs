//! One line per acceptance criterion; exits non-zero if any is red.

use std::process::Command;
use std::time::{Duration, Instant};

use qplane::coeff::{parse_q, QParam};
use qplane::spectra::example8_report;
use qplane::suites::{self, CellResult, Status, Suite, SuiteConfig};

struct Outcome {
    ok: bool,
    detail: String,
}

fn config(q: &str, suite: Suite, trunc: usize, max_degree: usize) -> SuiteConfig {
    SuiteConfig { q: parse_q(q).unwrap(), trunc, max_degree, seed: 2024, suites: vec![suite] }
}

/// Run the cells accepted by `keep`, optionally under a time budget.
fn run(cfg: &SuiteConfig, keep: impl Fn(&suites::Cell) -> bool, budget: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let results: Vec<CellResult> = suites::plan(cfg).iter().filter(|c| keep(c)).flat_map(|c| suites::run_cell(cfg, c)).collect();
    let took = start.elapsed();
    let failed: Vec<&CellResult> = results.iter().filter(|r| r.status == Status::Fail).collect();
    let samples: usize = results.iter().map(|r| r.samples).sum();
    let in_time = budget.is_none_or(|b| took <= b);
    let mut detail = format!("{} checks over {} identity cells in {:.2?}", samples, results.len(), took);
    if let Some(f) = failed.first() {
        detail.push_str(&format!("; first failure: {} at ({}, {}): {}", f.identity, f.d, f.l, f.message.as_deref().unwrap_or("")));
    }
    if !in_time {
        detail.push_str(&format!("; over the {:?} budget", budget.unwrap()));
    }
    Outcome { ok: failed.is_empty() && in_time && samples > 0, detail }
}

fn all(_: &suites::Cell) -> bool {
    true
}

fn qmul_relation() -> Outcome {
    run(&config("2/3", Suite::Qmul, 12, 0), |c| c.d <= 8, Some(Duration::from_secs(1)))
}

fn qmul_agreement() -> Outcome {
    run(&config("2/3", Suite::Qmul, 12, 0), |c| c.d == 9, Some(Duration::from_secs(5)))
}

fn diagonal() -> Outcome {
    run(&config("1/2", Suite::Diagonal, 10, 6), all, Some(Duration::from_secs(30)))
}

fn theta() -> Outcome {
    run(&config("1/2", Suite::Theta, 10, 6), all, None)
}

fn homotopy() -> Outcome {
    run(&config("1/2", Suite::Homotopy, 10, 4), all, None)
}

fn cohomology() -> Outcome {
    run(&config("(1+i)/3", Suite::Cohomology, 10, 4), all, None)
}

fn formal() -> Outcome {
    run(&config("1/2", Suite::Formal, 10, 0), all, None)
}

fn mixed() -> Outcome {
    run(&config("1/3", Suite::Mixed, 8, 6), all, None)
}

fn decomposition() -> Outcome {
    run(&config("1/2", Suite::Decomposition, 8, 6), all, None)
}

fn gamma() -> Outcome {
    run(&config("2/3", Suite::Gamma, 8, 4), all, None)
}

fn koszul() -> Outcome {
    run(&config("1/2", Suite::Koszul, 4, 0), all, None)
}

fn shift_example() -> Outcome {
    let start = Instant::now();
    let qs: Vec<QParam> = ["1/2", "1/3", "(1+i)/4"].iter().map(|s| parse_q(s).unwrap()).collect();
    let mut bad = vec![];
    for q in &qs {
        match example8_report(q) {
            Ok(r) if r.region_equality && !r.taylor_is_q_closed => {}
            Ok(r) => bad.push(format!("q = {}: got {:?}", q, r.putinar)),
            Err(e) => bad.push(format!("q = {}: {}", q, e)),
        }
    }
    let took = start.elapsed();
    let ok = bad.is_empty() && took < Duration::from_secs(1);
    Outcome { ok, detail: if bad.is_empty() { format!("3 values of q in {:.2?}", took) } else { bad.join("; ") } }
}

fn determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_qplane");
    let dir = std::env::temp_dir().join(format!("qplane-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut outputs = vec![];
    for w in ["1", "4"] {
        let out = dir.join(format!("report-{}.json", w));
        let status = Command::new(exe)
            .args(["verify", "--suite", "diagonal,mixed,koszul", "--q", "1/2", "--trunc", "6", "--max-degree", "3", "--seed", "11"])
            .args(["--workers", w, "--out"])
            .arg(&out)
            .status()
            .expect("run qplane");
        outputs.push((status.code(), std::fs::read(&out).unwrap_or_default()));
    }
    let _ = std::fs::remove_dir_all(&dir);
    let same = outputs[0].1 == outputs[1].1 && !outputs[0].1.is_empty();
    let codes = outputs[0].0 == Some(0) && outputs[1].0 == Some(0);
    Outcome {
        ok: same && codes,
        detail: format!("{} bytes, exit codes {:?} / {:?}, identical: {}", outputs[0].1.len(), outputs[0].0, outputs[1].0, same),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("quantum-plane relation and commutation", qmul_relation),
        ("three-way multiplication agreement", qmul_agreement),
        ("diagonal complex identities", diagonal),
        ("operator T round trips", theta),
        ("homotopy identities", homotopy),
        ("cohomology surrogates", cohomology),
        ("formal/holomorphic complex witnesses", formal),
        ("mixed operator identities", mixed),
        ("graded decomposition", decomposition),
        ("product corrections", gamma),
        ("Koszul oracle", koszul),
        ("shift example closure", shift_example),
        ("determinism across worker counts", determinism),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.ok {
            failures += 1;
        }
        println!("{} {:>2}. {}: {}", if o.ok { "PASS" } else { "FAIL" }, i + 1, name, o.detail);
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

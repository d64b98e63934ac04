//! Acceptance gate: one line per criterion, non-zero exit if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use charid_core::suites::{descent_suite, golden_suite, oracle_suite, pseudo_null_suite, tower_suite, SuiteOutcome};

const SEED: u64 = 42;

struct Verdict {
    ok: bool,
    detail: String,
}

fn rate(n: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        n as f64 / total as f64
    }
}

fn failures(s: &SuiteOutcome) -> String {
    let bad: Vec<&String> = s.log.iter().filter(|l| l.contains("FAIL") || l.contains("inconclusive")).take(5).collect();
    if bad.is_empty() {
        String::new()
    } else {
        format!("; first problems: {bad:?}")
    }
}

fn golden() -> Verdict {
    let s = golden_suite(1000);
    Verdict {
        ok: s.cases == 8 && s.passed == 8 && s.accepted,
        detail: format!("{}{}", s.summary_line(), failures(&s)),
    }
}

fn pseudo_null() -> Verdict {
    let start = Instant::now();
    let s = pseudo_null_suite(SEED, 300);
    let secs = start.elapsed().as_secs_f64();
    let ok = s.cases == 300
        && s.failed == 0
        && rate(s.resolved + s.inconclusive, s.cases) < 0.05
        && s.inconclusive == 0
        && secs < 300.0;
    Verdict {
        ok,
        detail: format!("{} in {secs:.1} s{}", s.summary_line(), failures(&s)),
    }
}

fn descent() -> Verdict {
    let s = descent_suite(SEED, 300, 50);
    let injected = s.log.iter().filter(|l| l.contains("(t)")).count();
    let ok = s.cases == 300 && s.failed == 0 && rate(s.inconclusive, s.cases) < 0.05 && injected == 50;
    Verdict {
        ok,
        detail: format!("{} ({injected} with an injected (t) factor){}", s.summary_line(), failures(&s)),
    }
}

fn oracle() -> Verdict {
    let s = oracle_suite(SEED, 100);
    let ok = s.cases == 100 && s.failed == 0 && rate(s.inconclusive, s.cases) < 0.05;
    Verdict {
        ok,
        detail: format!("{} (inconclusive = unstable fit){}", s.summary_line(), failures(&s)),
    }
}

fn tower() -> Verdict {
    let s = tower_suite(SEED, 50);
    let ok = s.cases == 54 && s.failed == 0 && s.inconclusive == 0;
    Verdict {
        ok,
        detail: format!("{}{}", s.summary_line(), failures(&s)),
    }
}

fn determinism() -> Verdict {
    let run = |threads: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_charid"));
        cmd.args(["selftest", "--seed", "42"]);
        if let Some(t) = threads {
            cmd.env("RAYON_NUM_THREADS", t);
        }
        let out = cmd.output().expect("selftest runs");
        (out.status.code(), out.stdout)
    };
    let first = run(None);
    let second = run(None);
    let third = run(Some("3"));
    let ok = first.0 == Some(0) && first == second && first == third && !first.1.is_empty();
    Verdict {
        ok,
        detail: format!(
            "3 runs of `selftest --seed 42`, {} bytes each, exit {:?}, identical: {}",
            first.1.len(),
            first.0,
            first == second && first == third
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 6] = [
        ("golden vectors", golden),
        ("pseudo-null suite", pseudo_null),
        ("descent identity suite", descent),
        ("oracle cross-check", oracle),
        ("tower suite", tower),
        ("selftest determinism", determinism),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        all &= v.ok;
        println!("criterion {} {name}: {} | {}", i + 1, if v.ok { "PASS" } else { "FAIL" }, v.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

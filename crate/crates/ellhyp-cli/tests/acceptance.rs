//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ellhyp_cli::output::to_json;
use ellhyp_cli::{run_verify, Record, RunConfig};

const SEED: u64 = 20_240_601;

/// What one identity id must deliver within a criterion.
struct Want {
    id: &'static str,
    draws: usize,
    tol: f64,
}

const fn want(id: &'static str, draws: usize, tol: f64) -> Want {
    Want { id, draws, tol }
}

struct Criterion {
    n: u32,
    name: &'static str,
    wants: &'static [Want],
    limit: Duration,
    random_bases: bool,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

static CRITERIA: &[Criterion] = &[
    Criterion { n: 1, name: "elliptic beta integral", wants: &[want("ell-int", 50, 1e-9)], limit: secs(60), random_bases: true },
    Criterion { n: 2, name: "terminating 10V9 summation", wants: &[want("ft-sum", 200, 1e-11)], limit: secs(5), random_bases: true },
    Criterion { n: 3, name: "residue expansion", wants: &[want("res", 20, 1e-8)], limit: secs(60), random_bases: false },
    Criterion {
        n: 4,
        name: "E7 transformations",
        wants: &[want("e7-1", 20, 1e-8), want("e7-2-composition", 5, 1e-12), want("e7-3-involution", 20, 1e-13)],
        limit: secs(120),
        random_bases: false,
    },
    Criterion {
        n: 5,
        name: "contiguous relation and difference equation",
        wants: &[want("con1", 10, 1e-8), want("eheq-rn", 10, 1e-8), want("eheq-sol1", 10, 1e-8)],
        limit: secs(180),
        random_bases: false,
    },
    Criterion { n: 6, name: "biorthogonality Gram matrix", wants: &[want("biorth-gram", 1, 1e-8)], limit: secs(120), random_bases: false },
    Criterion {
        n: 7,
        name: "root system integrals",
        wants: &[
            want("an-n1", 5, 1e-8),
            want("an-n2", 1, 1e-6),
            want("cn1-n2", 1, 1e-7),
            want("cn2-selberg-n2", 1, 1e-7),
            want("rains-n2", 1, 1e-5),
            want("sintb-recursion", 1, 1e-7),
        ],
        limit: secs(1800),
        random_bases: false,
    },
    Criterion {
        n: 8,
        name: "Bailey machinery",
        wants: &[want("d-reflection", 20, 1e-14), want("rec-int-e7-1", 5, 1e-10), want("rec-int-m0", 2, 1e-8), want("str", 5, 1e-7)],
        limit: secs(600),
        random_bases: false,
    },
    Criterion {
        n: 9,
        name: "superconformal indices",
        wants: &[want("sci-plethystic", 100, 1e-9), want("seiberg-2-3", 2, 1e-9), want("seiberg-2-4", 2, 1e-8)],
        limit: secs(300),
        random_bases: false,
    },
    Criterion {
        n: 10,
        name: "modular properties",
        wants: &[want("gamma-modular", 100, 1e-11), want("theta-modular", 100, 1e-11)],
        limit: secs(60),
        random_bases: false,
    },
];

fn check(c: &Criterion) -> (bool, String) {
    let ids: Vec<&str> = c.wants.iter().map(|w| w.id).collect();
    let cfg = RunConfig { seed: SEED, random_bases: c.random_bases, ..RunConfig::default() };
    let start = Instant::now();
    let recs = match run_verify(&ids.join(","), &cfg) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let took = start.elapsed();
    let mut ok = took < c.limit;
    let mut parts = Vec::new();
    for w in c.wants {
        let mine: Vec<&Record> = recs.iter().filter(|r| r.report.identity_id == w.id).collect();
        let worst = mine.iter().map(|r| r.report.rel_err).fold(0.0f64, |m, e| if e.is_nan() { f64::INFINITY } else { m.max(e) });
        let good = mine.len() == w.draws && mine.iter().all(|r| r.pass() && r.report.rel_err <= w.tol);
        ok &= good;
        let mut s = format!("{} {}x worst {:.1e} <= {:.0e}", w.id, mine.len(), worst, w.tol);
        if let Some(e) = mine.iter().find_map(|r| r.error.as_ref()) {
            s.push_str(&format!(" [{e}]"));
        }
        parts.push(s);
    }
    (ok, format!("{}; {:.1} s of {} s", parts.join(", "), took.as_secs_f64(), c.limit.as_secs()))
}

/// Two full runs with different thread counts must serialize identically.
fn determinism() -> (bool, String) {
    let start = Instant::now();
    let run = |threads| {
        let cfg = RunConfig { seed: SEED, threads, ..RunConfig::default() };
        run_verify("all", &cfg).map(|r| to_json(&r, false))
    };
    match (run(1), run(4)) {
        (Ok(a), Ok(b)) => {
            let n = a.matches("\"identity_id\"").count();
            (a == b, format!("{n} reports, {} bytes, identical: {}; {:.1} s", a.len(), a == b, start.elapsed().as_secs_f64()))
        }
        (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
    }
}

fn main() -> ExitCode {
    let mut all = true;
    for c in CRITERIA {
        let (ok, msg) = check(c);
        all &= ok;
        println!("criterion {:>2} {}: {} ({msg})", c.n, if ok { "PASS" } else { "FAIL" }, c.name);
    }
    let (ok, msg) = determinism();
    all &= ok;
    println!("criterion 11 {}: determinism ({msg})", if ok { "PASS" } else { "FAIL" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hpmp::approx::{feasibility_threshold, max_l_partition, RATIO_SLACK};
use hpmp::instance::{format_instance, generate_euclidean, parse_instance, save_instance};
use hpmp::matching::{min_weight_perfect_matching, TOLERANCE};
use hpmp::oracle::{
    brute_hpmp, brute_matching, brute_two_factor, max_l_exhaustive, OracleLimitConfig,
};
use hpmp::two_factor::{build_gadget, min_weight_two_factor};
use hpmp::{solve, Branch, Error};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn matching_oracle() -> Outcome {
    let mut rng = common::rng(0xa1);
    let limits = OracleLimitConfig::default();
    let (mut compared, mut both_infeasible) = (0, 0);
    for case in 0..50 {
        let n = 2 * rng.gen_range(2..=6);
        let density = if case % 2 == 0 {
            1.0
        } else {
            rng.gen_range(0.3..0.8)
        };
        let g = common::random_graph(&mut rng, n, density);
        match (min_weight_perfect_matching(&g), brute_matching(&g, &limits)) {
            (Ok(m), Ok(b)) => {
                ensure!(
                    (m.weight - b.weight).abs() <= TOLERANCE,
                    "case {case} (n={n}): blossom {} vs brute {}",
                    m.weight,
                    b.weight
                );
                compared += 1;
            }
            (Err(Error::NoPerfectMatching(_)), Err(Error::NoPerfectMatching(_))) => {
                both_infeasible += 1
            }
            (a, b) => return Err(format!("case {case}: {a:?} vs {b:?}")),
        }
    }
    Ok(format!(
        "{compared} weights equal, {both_infeasible} agreed no perfect matching"
    ))
}

fn two_factor_oracle() -> Outcome {
    let limits = OracleLimitConfig::default();
    for case in 0..50u64 {
        let n = 3 + (case as usize % 6);
        let inst = generate_euclidean(n, 1000 + case, 100.0).map_err(|e| e.to_string())?;
        let m = n * (n - 1) / 2;
        let gadget = build_gadget(&inst);
        ensure!(
            gadget.graph.vertex_count() == 2 * n + 2 * m && gadget.graph.edge_count() == 5 * m,
            "n={n}: gadget has {} vertices, {} edges",
            gadget.graph.vertex_count(),
            gadget.graph.edge_count()
        );
        let f = min_weight_two_factor(&inst).map_err(|e| e.to_string())?;
        let b = brute_two_factor(&inst, &limits).map_err(|e| e.to_string())?;
        ensure!(
            (f.weight() - b.weight()).abs() <= TOLERANCE,
            "case {case} (n={n}): gadget {} vs brute {}",
            f.weight(),
            b.weight()
        );
    }
    Ok("50 instances, n in 3..=8".into())
}

fn lemma_partition() -> Outcome {
    for n in 6..=60 {
        let (_, l) = max_l_partition(n).map_err(|e| e.to_string())?;
        let exhaustive = max_l_exhaustive(n).map_err(|e| e.to_string())?;
        ensure!(
            l == exhaustive,
            "n={n}: construction {l}, exhaustive {exhaustive}"
        );
        ensure!(l <= 2 * n.div_ceil(5), "n={n}: l={l} exceeds bound");
        if n % 5 == 0 {
            ensure!(l == 2 * n / 5, "n={n}: l={l}, expected {}", 2 * n / 5);
        }
    }
    Ok("n in 6..=60".into())
}

fn ratio_guarantees() -> Outcome {
    let mut rng = common::rng(0xa4);
    let mut solves = 0;
    let mut per_branch = [0usize; 3];
    for case in 0..200u64 {
        let n = rng.gen_range(9..=40);
        let inst = generate_euclidean(n, 4000 + case, 100.0).map_err(|e| e.to_string())?;
        for p in 1..=feasibility_threshold(n) {
            let (h, report) = solve(&inst, p).map_err(|e| format!("n={n} p={p}: {e}"))?;
            ensure!(
                h.p() == p && h.cycles().len() == p,
                "n={n} p={p}: {} cycles",
                h.p()
            );
            let mut seen = vec![false; n];
            for c in h.cycles() {
                ensure!(c.len() >= 3, "n={n} p={p}: cycle of length {}", c.len());
                for &v in c {
                    ensure!(!seen[v], "n={n} p={p}: vertex {v} twice");
                    seen[v] = true;
                }
            }
            ensure!(seen.iter().all(|&s| s), "n={n} p={p}: vertex missing");
            let expected = match report.q.cmp(&p) {
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Greater => 3,
                std::cmp::Ordering::Less => 2,
            };
            ensure!(
                report.guaranteed_ratio == expected,
                "n={n} p={p}: wrong bound"
            );
            ensure!(
                report.ub <= f64::from(expected) * report.lb + RATIO_SLACK,
                "n={n} p={p}: ub {} > {expected} x lb {}",
                report.ub,
                report.lb
            );
            per_branch[report.branch as usize] += 1;
            solves += 1;
        }
    }
    Ok(format!(
        "{solves} solves (equal {}, merge {}, split {})",
        per_branch[0], per_branch[1], per_branch[2]
    ))
}

fn true_ratio() -> Outcome {
    let limits = OracleLimitConfig::default();
    let (mut ratios, mut inapplicable) = (Vec::new(), 0);
    let mut worst: f64 = 0.0;
    for case in 0..30u64 {
        let n = 9 + (case as usize % 2);
        let inst = generate_euclidean(n, 5000 + case, 100.0).map_err(|e| e.to_string())?;
        for p in [2, 3] {
            let exact = brute_hpmp(&inst, p, &limits).map_err(|e| e.to_string())?;
            match solve(&inst, p) {
                Ok((h, _)) => {
                    let r = h.weight() / exact.weight();
                    ensure!(r <= 3.0 + 1e-9, "case {case} n={n} p={p}: ratio {r}");
                    worst = worst.max(r);
                    ratios.push(r);
                }
                Err(Error::AlgorithmInapplicable { .. }) if p > feasibility_threshold(n) => {
                    inapplicable += 1
                }
                Err(e) => return Err(format!("case {case} n={n} p={p}: {e}")),
            }
        }
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(format!(
        "{} solved, mean {mean:.4}, max {worst:.4}, {inapplicable} inapplicable (p above threshold)",
        ratios.len()
    ))
}

fn desk_scale() -> Outcome {
    ensure!(
        format!("{:.2}", 1018.72_f64 / 782.29) == "1.30",
        "ratio arithmetic gave {:.2}",
        1018.72_f64 / 782.29
    );
    let mut slowest = Duration::ZERO;
    let mut branches = Vec::new();
    for seed in 1..=5 {
        let inst = generate_euclidean(100, seed, 100.0).map_err(|e| e.to_string())?;
        for p in [2, 10, 18] {
            let start = Instant::now();
            let (_, report) = solve(&inst, p).map_err(|e| format!("seed {seed} p={p}: {e}"))?;
            let elapsed = start.elapsed();
            ensure!(
                elapsed < Duration::from_secs(60),
                "seed {seed} p={p}: {elapsed:?}"
            );
            ensure!(
                report.branch == Branch::for_counts(report.q, p),
                "seed {seed} p={p}: branch {} with q={}",
                report.branch,
                report.q
            );
            slowest = slowest.max(elapsed);
            branches.push(format!("{}/{}", report.q, report.branch));
        }
    }
    Ok(format!(
        "15 solves, slowest {:.1} ms, q/branch {}",
        slowest.as_secs_f64() * 1e3,
        branches.join(" ")
    ))
}

fn failure_mode() -> Outcome {
    let inst = common::two_pentagons();
    let f = min_weight_two_factor(&inst).map_err(|e| e.to_string())?;
    ensure!(f.sizes() == vec![5, 5], "2-factor sizes {:?}", f.sizes());
    for cycle in f.cycles() {
        let first = cycle[0] / 5;
        ensure!(
            cycle.iter().all(|&v| v / 5 == first),
            "cycle {cycle:?} crosses clusters"
        );
    }
    match solve(&inst, 3) {
        Err(Error::AlgorithmInapplicable {
            components: 2,
            p: 3,
        }) => {}
        other => return Err(format!("expected inapplicable, got {other:?}")),
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("pent.hpmp");
    save_instance(&inst, &path).map_err(|e| e.to_string())?;
    let code = Command::new(env!("CARGO_BIN_EXE_hpmp"))
        .args(["solve", "--in", path.to_str().unwrap(), "--p", "3"])
        .output()
        .map_err(|e| e.to_string())?
        .status
        .code();
    ensure!(code == Some(3), "CLI exit code {code:?}");
    Ok("two 5-cycles, p=3 inapplicable, exit code 3".into())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let o = Command::new(env!("CARGO_BIN_EXE_hpmp"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(
            o.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        Ok(o.stdout)
    };
    let mut files = Vec::new();
    for name in ["a.hpmp", "b.hpmp"] {
        let path = dir.path().join(name);
        let p = path.to_str().unwrap();
        run(&["gen", "--n", "100", "--seed", "3", "--out", p])?;
        files.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure!(files[0] == files[1], "instance files differ");

    let a = dir.path().join("a.hpmp");
    let a = a.to_str().unwrap();
    let cycles_of = |out: Vec<u8>| -> String {
        String::from_utf8_lossy(&out)
            .lines()
            .filter(|l| l.starts_with("cycle "))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let s1 = cycles_of(run(&["solve", "--in", a, "--p", "10", "--cycles"])?);
    let s2 = cycles_of(run(&["solve", "--in", a, "--p", "10", "--cycles"])?);
    ensure!(!s1.is_empty() && s1 == s2, "solutions differ between runs");

    let bench = [
        "bench",
        "--n",
        "100",
        "--p-list",
        "2,10,18",
        "--seeds",
        "1..5",
        "--no-times",
    ];
    ensure!(
        run(&bench)? == run(&bench)?,
        "bench CSV differs between runs"
    );

    let text = String::from_utf8(files[0].clone()).map_err(|e| e.to_string())?;
    let inst = parse_instance(&text).map_err(|e| e.to_string())?;
    ensure!(
        format_instance(&inst) == text,
        "instance text does not round-trip"
    );
    let fresh = generate_euclidean(100, 3, 100.0).map_err(|e| e.to_string())?;
    ensure!(
        inst.coords() == fresh.coords(),
        "parsed coordinates differ from generator"
    );
    ensure!(
        (0..100)
            .all(|i| (0..100).all(|j| inst.weight(i, j).to_bits() == fresh.weight(i, j).to_bits())),
        "parsed weights differ from generator"
    );
    Ok("gen, solve and bench CSV byte-identical, round trip exact".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("AC1 matching oracle equivalence", matching_oracle),
        ("AC2 2-factor oracle equivalence", two_factor_oracle),
        ("AC3 leftover-partition bound", lemma_partition),
        ("AC4 ratio guarantees", ratio_guarantees),
        ("AC5 true ratio vs exact optimum", true_ratio),
        ("AC6 n=100 timing and branches", desk_scale),
        ("AC7 inapplicable on two 5-cycles", failure_mode),
        ("AC8 determinism and formats", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} ({secs:.1} s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name} ({secs:.1} s): {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

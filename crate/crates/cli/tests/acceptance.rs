//! Acceptance criteria. Runs every criterion, prints one line each, and
//! exits non-zero if any fails or overruns its time budget.

use std::collections::HashSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use tasep_core::verify::{bijection, tableaux};
use tasep_core::weights::{verify_flux_balance, verify_flux_counts, verify_flux_identities, verify_marked_properties};
use tasep_core::{
    build_generator, cycle_decomposition, enumerate_marked, enumerate_trees, mu, simulate, solve_stationary,
    stationary_weights, total_variation, Configuration, FluxTable, Rates,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn counts() -> Outcome {
    const TREES: [usize; 11] = [1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786];
    const MARKED: [usize; 10] = [2, 6, 20, 70, 252, 924, 3432, 12870, 48620, 184756];
    for (n, &want) in TREES.iter().enumerate() {
        let got = enumerate_trees(n).len();
        ensure(got == want, || format!("|T_{n}| = {got}, expected {want}"))?;
    }
    for (i, &want) in MARKED.iter().enumerate() {
        let n = i + 1;
        let got = enumerate_marked(n).map_err(|e| e.to_string())?.len();
        ensure(got == want, || format!("|T^_{n}| = {got}, expected {want}"))?;
    }
    Ok("|T_n| = C_(n+1) for n = 0..10, |T^_n| = binom(2n, n) for n = 1..10".into())
}

fn small_fixture() -> Outcome {
    let mut got: Vec<(String, String)> = enumerate_trees(2)
        .iter()
        .map(|t| (t.reduce().to_glyphs(), mu(t).to_string()))
        .collect();
    let mut want: Vec<(String, String)> = [("∘∘", "a^2"), ("•∘", "a"), ("•∘", "b"), ("••", "b^2"), ("∘•", "ab")]
        .iter()
        .map(|(c, w)| (c.to_string(), w.to_string()))
        .collect();
    got.sort();
    want.sort();
    ensure(got == want, || format!("got {got:?}"))?;
    Ok("n=2 (configuration, weight) multiset matches".into())
}

fn oracle_equivalence() -> Outcome {
    let grid = Rates::test_grid();
    for n in 1..=8 {
        let sw = stationary_weights(n);
        for rates in &grid {
            let exact = solve_stationary(&build_generator(n, rates).map_err(|e| e.to_string())?)
                .map_err(|e| format!("n={n} {rates}: {e}"))?;
            let trees = sw.distribution(rates);
            ensure(exact.probabilities() == trees.as_slice(), || format!("n={n} {rates}: distributions differ"))?;
        }
    }
    let p = stationary_weights(2).distribution(&Rates::unit());
    let idx = "10".parse::<Configuration>().unwrap().index();
    ensure(p[idx] == BigRational::new(2.into(), 5.into()), || format!("P(•∘) = {}", p[idx]))?;
    Ok("exact equality for n = 1..8 on the 25-point grid; P(•∘) = 2/5 at n=2".into())
}

fn bijection_suite() -> Outcome {
    for n in 1..=8 {
        let r = bijection(n).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("n={n}: {}", r.failure.clone().unwrap_or_default()))?;
    }
    let lens = |n| -> Result<Vec<usize>, String> {
        let mut v: Vec<usize> = cycle_decomposition(n).map_err(|e| e.to_string())?.iter().map(Vec::len).collect();
        v.sort();
        Ok(v)
    };
    ensure(lens(2)? == [3, 3], || "n=2 cycles are not two 3-cycles".into())?;
    ensure(lens(3)? == [4, 4, 4, 4, 4], || "n=3 cycles are not five 4-cycles".into())?;
    Ok("pi permutes T^_n, sigma inverts it, every step is a legal move (n = 1..8); cycles 2x3 and 5x4".into())
}

fn proof_identities() -> Outcome {
    let grid = Rates::test_grid();
    for n in 1..=8 {
        let sw = stationary_weights(n);
        let table = FluxTable::new(n).map_err(|e| e.to_string())?;
        let r = verify_flux_counts(&sw, &table);
        ensure(r.passed(), || format!("counting identity: {:?}", r.failure))?;
        for rates in &grid {
            let r = verify_flux_identities(&sw, &table, rates);
            ensure(r.passed(), || format!("weighted identity: {:?}", r.failure))?;
        }
        let r = verify_marked_properties(n).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("properties (a)/(b): {:?}", r.failure))?;
    }
    Ok("counting and weighted flux identities, properties (a) and (b), n = 1..8".into())
}

fn flux_balance() -> Outcome {
    for n in 1..=8 {
        let sw = stationary_weights(n);
        for rates in Rates::test_grid() {
            let r = verify_flux_balance(&sw, &rates);
            ensure(r.passed(), || format!("{:?}", r.failure))?;
        }
    }
    Ok("inflow = outflow for every configuration, n = 1..8, 25 rate points".into())
}

fn tableaux_bijection() -> Outcome {
    for n in 0..=8 {
        let r = tableaux(n);
        ensure(r.passed(), || format!("n={n}: {:?}", r.failure))?;
    }
    Ok("phi is a bijection onto Catalan tableaux of index n+1, n = 0..8".into())
}

fn stochastic() -> Outcome {
    let exact = solve_stationary(&build_generator(3, &Rates::unit()).unwrap()).unwrap();
    let run = simulate(3, &Rates::unit(), 1_000_000, 100_000, 7).map_err(|e| e.to_string())?;
    let tv = total_variation(&run.empirical(), &exact);
    ensure(tv < 0.02, || format!("TV = {tv}"))?;

    let bin = env!("CARGO_BIN_EXE_tasep");
    let args = ["simulate", "--n", "3", "--alpha", "1/1", "--beta", "1/1", "--events", "1000000", "--seed", "7"];
    let first = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
    let second = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
    ensure(first.status.success(), || String::from_utf8_lossy(&first.stderr).into_owned())?;
    ensure(first.stdout == second.stdout, || "reruns differ".into())?;
    let text = String::from_utf8_lossy(&first.stdout);
    let cli_tv: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("tv\t"))
        .and_then(|v| v.parse().ok())
        .ok_or("no tv line in output")?;
    ensure(cli_tv < 0.02, || format!("CLI TV = {cli_tv}"))?;
    Ok(format!("TV = {tv:.5} < 0.02; CLI reruns byte-identical"))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("AC1 counts", Duration::from_secs(10), counts),
        ("AC2 n=2 fixture", Duration::from_secs(1), small_fixture),
        ("AC3 oracle equivalence", Duration::from_secs(120), oracle_equivalence),
        ("AC4 bijection suite", Duration::from_secs(60), bijection_suite),
        ("AC5 proof identities", Duration::from_secs(120), proof_identities),
        ("AC6 flux balance", Duration::from_secs(60), flux_balance),
        ("AC7 tableaux bijection", Duration::from_secs(120), tableaux_bijection),
        ("AC8 stochastic cross-check", Duration::from_secs(30), stochastic),
    ];
    let filter: HashSet<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, budget, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        match outcome {
            Ok(msg) if elapsed <= budget => println!("PASS {name} [{elapsed:.2?} / {budget:?}]: {msg}"),
            Ok(msg) => {
                failed += 1;
                println!("FAIL {name} [{elapsed:.2?} exceeds {budget:?}]: {msg}");
            }
            Err(msg) => {
                failed += 1;
                println!("FAIL {name} [{elapsed:.2?}]: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}

use std::collections::HashSet;
use std::fmt::Write;

use serde::Serialize;
use serde_json::json;
use tasep_core::count::tree_count;
use tasep_core::export::{distribution_csv, render_probability, DistributionDoc, WeightsDoc};
use tasep_core::rates::{format_decimal, format_rational};
use tasep_core::verify::run_suite;
use tasep_core::{
    build_generator, cycle_decomposition, density_profile, enumerate_marked, enumerate_trees, mu, mu_hat, phi,
    simulate, solve_stationary, stationary_weights, total_variation, validate_tableau, Error, Rates, Suite, Tree,
};

use crate::{Cli, Command, Format, Method};

const TREE_LIMIT: u128 = 1_000_000;

pub struct Output {
    pub text: String,
    pub code: u8,
}

pub struct Failure {
    pub message: String,
    pub code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DegenerateKernel(_) => 1,
            _ => 2,
        };
        Failure { message: e.to_string(), code }
    }
}

fn ok(text: String) -> Result<Output, Failure> {
    Ok(Output { text, code: 0 })
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn guard(n: usize, force: bool) -> Result<(), Failure> {
    let count = tree_count(n);
    if count > TREE_LIMIT && !force {
        return Err(Error::TooLarge { n, count, limit: TREE_LIMIT }.into());
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Enumerate { n, marked } => {
            guard(*n, cli.force)?;
            enumerate(*n, *marked, cli.format)
        }
        Command::Stationary { n, alpha, beta, symbolic, decimals, method } => {
            guard(*n, cli.force)?;
            stationary(*n, alpha.as_deref(), beta.as_deref(), *symbolic, *decimals, *method, cli.format)
        }
        Command::Verify { n, checks, grid } => {
            guard(*n, cli.force)?;
            verify(*n, checks, grid.as_deref(), cli.format)
        }
        Command::Simulate { n, alpha, beta, events, burn_in, seed } => {
            guard(*n, cli.force)?;
            let burn_in = burn_in.unwrap_or(events / 10);
            simulate_cmd(*n, alpha, beta, *events, burn_in, *seed, cli.format)
        }
        Command::Tableaux { n, tree } => match (n, tree) {
            (_, Some(t)) => tableau_of(t, cli.format),
            (Some(n), None) => {
                guard(*n, cli.force)?;
                tableaux_table(*n, cli.format)
            }
            (None, None) => Err(Failure { message: "pass --n or --tree".into(), code: 2 }),
        },
        Command::Cycles { n } => {
            guard(*n, cli.force)?;
            cycles(*n, cli.format)
        }
    }
}

fn enumerate(n: usize, marked: bool, format: Format) -> Result<Output, Failure> {
    #[derive(Serialize)]
    struct Row {
        tree: String,
        config: String,
        l: u32,
        r: u32,
        #[serde(skip_serializing_if = "Option::is_none")]
        bond: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        l_hat: Option<u32>,
        #[serde(skip_serializing_if = "Option::is_none")]
        r_hat: Option<u32>,
    }

    let rows: Vec<Row> = if marked {
        enumerate_marked(n)?
            .iter()
            .map(|m| {
                let w = mu(m.tree());
                let h = mu_hat(m);
                Row {
                    tree: m.to_string(),
                    config: m.tree().reduce().to_string(),
                    l: w.l,
                    r: w.r,
                    bond: Some(m.bond().to_string()),
                    l_hat: Some(h.l),
                    r_hat: Some(h.r),
                }
            })
            .collect()
    } else {
        enumerate_trees(n)
            .iter()
            .map(|t| {
                let w = mu(t);
                Row { tree: t.to_string(), config: t.reduce().to_string(), l: w.l, r: w.r, bond: None, l_hat: None, r_hat: None }
            })
            .collect()
    };

    let mut out = String::new();
    match format {
        Format::Json => out = json_line(&rows),
        Format::Csv | Format::Text => {
            let sep = if format == Format::Csv { "," } else { "\t" };
            if format == Format::Csv {
                let header = if marked { "tree,config,l,r,bond,l_hat,r_hat" } else { "tree,config,l,r" };
                out.push_str(header);
                out.push('\n');
            }
            for row in &rows {
                let mut fields = vec![row.tree.clone(), row.config.clone(), row.l.to_string(), row.r.to_string()];
                if let (Some(b), Some(lh), Some(rh)) = (&row.bond, row.l_hat, row.r_hat) {
                    fields.extend([b.clone(), lh.to_string(), rh.to_string()]);
                }
                out.push_str(&fields.join(sep));
                out.push('\n');
            }
        }
    }
    ok(out)
}

fn stationary(
    n: usize,
    alpha: Option<&str>,
    beta: Option<&str>,
    symbolic: bool,
    decimals: Option<usize>,
    method: Method,
    format: Format,
) -> Result<Output, Failure> {
    let weights = stationary_weights(n);
    if symbolic {
        return ok(match format {
            Format::Json => json_line(&WeightsDoc::new(&weights)),
            Format::Csv => {
                let mut s = String::from("config,weight\n");
                for (c, w) in weights.iter() {
                    writeln!(s, "{c},{w}").unwrap();
                }
                writeln!(s, "Z,{}", weights.partition_function()).unwrap();
                s
            }
            Format::Text => {
                let mut s = String::new();
                for (c, w) in weights.iter() {
                    writeln!(s, "{c}\t{w}").unwrap();
                }
                writeln!(s, "Z\t{}", weights.partition_function()).unwrap();
                s
            }
        });
    }

    if n == 0 {
        return Err(Error::NoSites(0).into());
    }
    let rates = Rates::parse(alpha.unwrap_or("1/1"), beta.unwrap_or("1/1"))?;
    let dist = match method {
        Method::Trees => tasep_core::StationaryDistribution::new(n, weights.distribution(&rates))?,
        Method::Oracle => solve_stationary(&build_generator(n, &rates)?)?,
    };
    let density = density_profile(&dist);
    let probs = dist.probabilities();
    ok(match format {
        Format::Json => json_line(&DistributionDoc::new(n, &rates, probs, &density, None)),
        Format::Csv => distribution_csv(n, probs, decimals),
        Format::Text => {
            let mut s = String::new();
            for (c, p) in dist.iter() {
                match decimals {
                    Some(d) => writeln!(s, "{c}\t{}\t{}", format_rational(p), format_decimal(p, d)).unwrap(),
                    None => writeln!(s, "{c}\t{}", format_rational(p)).unwrap(),
                }
            }
            for (k, rho) in density.iter().enumerate() {
                writeln!(s, "rho[{}]\t{}", k + 1, render_probability(rho, None)).unwrap();
            }
            s
        }
    })
}

fn parse_grid(grid: Option<&str>) -> Result<Vec<Rates>, Failure> {
    match grid {
        None => Ok(Rates::test_grid()),
        Some(g) => g
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<Rates>().map_err(Failure::from))
            .collect(),
    }
}

fn verify(n: usize, checks: &str, grid: Option<&str>, format: Format) -> Result<Output, Failure> {
    let suites = Suite::parse_list(checks)?;
    if suites.is_empty() {
        return Err(Failure { message: "no checks selected".into(), code: 2 });
    }
    let grid = parse_grid(grid)?;
    let mut reports = Vec::new();
    for s in suites {
        reports.extend(run_suite(s, n, &grid)?);
    }
    let passed = reports.iter().all(|r| r.passed());
    let text = match format {
        Format::Json => json_line(&json!({ "n": n, "passed": passed, "reports": reports })),
        Format::Csv => {
            let mut s = String::from("check,passed,cases,summary,failure\n");
            for r in &reports {
                writeln!(
                    s,
                    "{},{},{},\"{}\",\"{}\"",
                    r.name,
                    r.passed(),
                    r.checked,
                    r.summary.replace('"', "\"\""),
                    r.failure.clone().unwrap_or_default().replace('"', "\"\"")
                )
                .unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                write!(s, "{status} {} ({} cases): {}", r.name, r.checked, r.summary).unwrap();
                if let Some(f) = &r.failure {
                    write!(s, "; first counterexample: {f}").unwrap();
                }
                s.push('\n');
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if failed == 0 {
                s.push_str("all checks passed\n");
            } else {
                writeln!(s, "{failed} check(s) failed").unwrap();
            }
            s
        }
    };
    Ok(Output { text, code: if passed { 0 } else { 1 } })
}

fn simulate_cmd(n: usize, alpha: &str, beta: &str, events: u64, burn_in: u64, seed: u64, format: Format) -> Result<Output, Failure> {
    let rates = Rates::parse(alpha, beta)?;
    let run = simulate(n, &rates, events, burn_in, seed)?;
    let exact = solve_stationary(&build_generator(n, &rates)?)?;
    let empirical = run.empirical();
    let tv = total_variation(&empirical, &exact);

    #[derive(Serialize)]
    struct State {
        config: String,
        empirical: String,
        exact: String,
        deviation: String,
    }
    let states: Vec<State> = exact
        .iter()
        .map(|(c, p)| {
            let e = empirical[c.index()];
            let x = format_decimal(p, 6).parse::<f64>().expect("decimal");
            State {
                config: c.to_string(),
                empirical: format!("{e:.6}"),
                exact: format_decimal(p, 6),
                deviation: format!("{:.6}", e - x),
            }
        })
        .collect();

    ok(match format {
        Format::Json => json_line(&json!({
            "n": n,
            "alpha": run.alpha,
            "beta": run.beta,
            "events": events,
            "burn_in": burn_in,
            "seed": seed,
            "states": states,
            "tv": format!("{tv:.6}"),
        })),
        Format::Csv => {
            let mut s = String::from("config,empirical,exact\n");
            for st in &states {
                writeln!(s, "{},{},{}", st.config, st.empirical, st.exact).unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "n={n} alpha={} beta={} events={events} burn_in={burn_in} seed={seed}\nconfig\tempirical\texact\tdeviation\n",
                run.alpha, run.beta
            );
            for st in &states {
                writeln!(s, "{}\t{}\t{}\t{}", st.config, st.empirical, st.exact, st.deviation).unwrap();
            }
            writeln!(s, "tv\t{tv:.6}").unwrap();
            s
        }
    })
}

fn tableau_of(serial: &str, format: Format) -> Result<Output, Failure> {
    let tree: Tree = serial.parse()?;
    let tab = phi(&tree);
    let violations = validate_tableau(&tab, Some(tree.n() + 1));
    let valid = violations.is_empty();
    let text = match format {
        Format::Json => json_line(&json!({ "tree": tree, "tableau": tab, "valid": valid })),
        Format::Csv => format!("tree,shape,fill,index,valid\n{tree},{:?},{tab},{},{valid}\n", tab.shape().parts(), tab.index()),
        Format::Text => {
            let mut s = format!("tree\t{tree}\nshape\t{:?}\nindex\t{}\nvalid\t{valid}\n", tab.shape().parts(), tab.index());
            s.push_str(&tab.to_ascii());
            for v in &violations {
                writeln!(s, "violation\t{v}").unwrap();
            }
            s
        }
    };
    Ok(Output { text, code: if valid { 0 } else { 1 } })
}

fn tableaux_table(n: usize, format: Format) -> Result<Output, Failure> {
    let trees = enumerate_trees(n);
    let rows: Vec<_> = trees
        .iter()
        .map(|t| {
            let tab = phi(t);
            let valid = validate_tableau(&tab, Some(n + 1)).is_empty();
            (t, tab, valid)
        })
        .collect();
    let all_valid = rows.iter().all(|r| r.2);
    let injective = rows.iter().map(|r| &r.1).collect::<HashSet<_>>().len() == rows.len();
    let text = match format {
        Format::Json => {
            let items: Vec<_> = rows.iter().map(|(t, tab, v)| json!({ "tree": t, "tableau": tab, "valid": v })).collect();
            json_line(&items)
        }
        Format::Csv => {
            let mut s = String::from("tree,shape,fill,index,valid\n");
            for (t, tab, v) in &rows {
                writeln!(s, "{t},\"{:?}\",{tab},{},{v}", tab.shape().parts(), tab.index()).unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (t, tab, v) in &rows {
                writeln!(s, "{t}\t{:?}\t{tab}\t{}", tab.shape().parts(), if *v { "valid" } else { "INVALID" }).unwrap();
            }
            writeln!(
                s,
                "{} tableaux of index {}; all valid: {all_valid}; injective: {injective}",
                rows.len(),
                n + 1
            )
            .unwrap();
            s
        }
    };
    Ok(Output { text, code: if all_valid && injective { 0 } else { 1 } })
}

fn cycles(n: usize, format: Format) -> Result<Output, Failure> {
    let cycles = cycle_decomposition(n)?;
    ok(match format {
        Format::Json => json_line(&tasep_core::export::cycles_json(&cycles)),
        Format::Csv => {
            let mut s = String::from("cycle,position,marked_tree\n");
            for (i, c) in cycles.iter().enumerate() {
                for (j, t) in c.iter().enumerate() {
                    writeln!(s, "{i},{j},{t}").unwrap();
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &cycles {
                let names: Vec<String> = c.iter().map(ToString::to_string).collect();
                writeln!(s, "{}", names.join(" -> ")).unwrap();
            }
            s
        }
    })
}

//! Invariant suites grouped the way the command line selects them.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::bijection::{cycle_decomposition, pi, sigma};
use crate::check::{CheckReport, Checker};
use crate::config::{active_bonds, Configuration};
use crate::count::{marked_tree_count, tree_count};
use crate::error::{Error, Result};
use crate::marked::enumerate_marked;
use crate::oracle::{build_generator, solve_stationary};
use crate::rates::Rates;
use crate::tableaux::{enumerate_catalan_tableaux, lattice_path, phi, phi_inverse, validate_tableau, Tableau};
use crate::tree::{enumerate_trees, Tree};
use crate::weights::{
    stationary_weights, verify_flux_balance, verify_flux_counts, verify_flux_identities, verify_marked_properties,
    FluxTable,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Counts,
    Lemma1,
    Bijection,
    Flux,
    MarkedProperties,
    Oracle,
    Tableaux,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Counts,
        Suite::Lemma1,
        Suite::Bijection,
        Suite::Flux,
        Suite::MarkedProperties,
        Suite::Oracle,
        Suite::Tableaux,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Counts => "counts",
            Suite::Lemma1 => "lemma1",
            Suite::Bijection => "bijection",
            Suite::Flux => "flux",
            Suite::MarkedProperties => "marked-properties",
            Suite::Oracle => "oracle",
            Suite::Tableaux => "tableaux",
        }
    }

    /// Whether the suite involves marked trees or dynamics.
    pub fn needs_sites(self) -> bool {
        !matches!(self, Suite::Counts | Suite::Tableaux)
    }

    /// Parses a comma-separated list; `all` selects every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown check {s:?}") })
    }
}

/// Runs one suite for `n` sites; rate-dependent parts use every point of
/// `grid`.
pub fn run_suite(suite: Suite, n: usize, grid: &[Rates]) -> Result<Vec<CheckReport>> {
    if n == 0 && suite.needs_sites() {
        return Err(Error::NoSites(0));
    }
    Ok(match suite {
        Suite::Counts => vec![counts(n)],
        Suite::Lemma1 => vec![lemma1(n)],
        Suite::Bijection => vec![bijection(n)?],
        Suite::Flux => flux(n, grid)?,
        Suite::MarkedProperties => vec![verify_marked_properties(n)?],
        Suite::Oracle => vec![oracle(n, grid)?],
        Suite::Tableaux => vec![tableaux(n)],
    })
}

pub fn counts(n: usize) -> CheckReport {
    let mut chk = Checker::new("counts");
    let trees = enumerate_trees(n);
    let expected = tree_count(n);
    chk.check(trees.len() as u128 == expected, || format!("|T_{n}| = {}, expected {expected}", trees.len()));

    let serial: HashSet<String> = trees.iter().map(ToString::to_string).collect();
    chk.check(serial.len() == trees.len(), || "duplicate serializations".into());
    for t in &trees {
        let back: Result<Tree> = t.to_string().parse();
        chk.check(back.as_ref() == Ok(t), || format!("{t} does not survive a round trip"));
    }

    let image: HashSet<Configuration> = trees.iter().map(Tree::reduce).collect();
    chk.check(image.len() == 1 << n, || format!("reduction hits {} of {} configurations", image.len(), 1 << n));

    let z = stationary_weights(n).partition_function();
    chk.check(u128::from(z.coefficient_sum()) == expected, || format!("Z_{n}(1,1) = {}", z.coefficient_sum()));

    let mut summary = format!("|T_{n}| = {}", trees.len());
    if n >= 1 {
        let marked = enumerate_marked(n).expect("n >= 1");
        let want = marked_tree_count(n);
        chk.check(marked.len() as u128 == want, || format!("|T^_{n}| = {}, expected {want}", marked.len()));
        let mut fiber: HashMap<&Tree, usize> = HashMap::new();
        for m in &marked {
            *fiber.entry(m.tree()).or_default() += 1;
        }
        for t in &trees {
            let lbvs = t.last_branching_vertices().len();
            chk.check(fiber.get(t).copied().unwrap_or(0) == lbvs, || format!("fiber of {t} differs from its LBV count"));
        }
        summary.push_str(&format!(", |T^_{n}| = {}", marked.len()));
    }
    chk.finish(summary)
}

/// Last branching vertices, read left to right, are the active bonds.
pub fn lemma1(n: usize) -> CheckReport {
    let mut chk = Checker::new("lemma1");
    let trees = enumerate_trees(n);
    for t in &trees {
        let lbvs = t.last_branching_vertices();
        chk.check(!lbvs.is_empty(), || format!("{t} has no last branching vertex"));
        chk.check(n == 0 || !lbvs.contains(&0), || format!("root of {t} is a last branching vertex"));
        let bonds: Result<Vec<_>> = lbvs.iter().map(|&v| t.bond_of_lbv(v)).collect();
        let active = active_bonds(&t.reduce());
        chk.check(bonds.as_ref() == Ok(&active), || {
            format!("{t}: LBV bonds {bonds:?} vs active bonds {active:?} of {}", t.reduce())
        });
    }
    chk.finish(format!("n={n}: LBVs match active bonds on {} trees", trees.len()))
}

pub fn bijection(n: usize) -> Result<CheckReport> {
    let mut chk = Checker::new("bijection");
    let marked = enumerate_marked(n)?;
    let domain: HashSet<_> = marked.iter().collect();
    let mut image = HashSet::with_capacity(marked.len());
    for t in &marked {
        let p = pi(t);
        chk.check(domain.contains(&p), || format!("pi({t}) = {p} is outside the domain"));
        chk.check(
            p.tree().endpoint_count() == t.tree().endpoint_count()
                && p.tree().internal_count() == t.tree().internal_count(),
            || format!("pi({t}) changes the vertex counts"),
        );
        chk.check(sigma(&p) == *t, || format!("sigma(pi({t})) = {}", sigma(&p)));
        chk.check(pi(&sigma(t)) == *t, || format!("pi(sigma({t})) = {}", pi(&sigma(t))));

        let from = t.tree().reduce();
        let bond = t.bond();
        let to = p.tree().reduce();
        chk.check(bond.is_active(&from) && bond.apply(&from) == to, || {
            format!("pi({t}) realizes {from} -> {to}, expected the {bond} move")
        });
        image.insert(p);
    }
    chk.check(image.len() == marked.len(), || format!("pi has {} images for {} elements", image.len(), marked.len()));

    // for each tree and each legal move there is exactly one mark realizing it
    let mut per_tree: HashMap<&Tree, Vec<Configuration>> = HashMap::new();
    let images: Vec<_> = marked.iter().map(|t| (t, pi(t).tree().reduce())).collect();
    for (t, to) in &images {
        per_tree.entry(t.tree()).or_default().push(to.clone());
    }
    for (tree, mut targets) in per_tree {
        let from = tree.reduce();
        let mut legal: Vec<Configuration> = active_bonds(&from).iter().map(|b| b.apply(&from)).collect();
        targets.sort();
        legal.sort();
        chk.check(targets == legal, || format!("{tree}: marks reach {targets:?}, legal moves {legal:?}"));
    }

    let cycles = cycle_decomposition(n)?;
    let mut lengths: BTreeMap<usize, usize> = BTreeMap::new();
    for c in &cycles {
        *lengths.entry(c.len()).or_default() += 1;
    }
    let structure: Vec<String> = lengths
        .iter()
        .map(|(len, count)| format!("{count} cycle{} of length {len}", if *count == 1 { "" } else { "s" }))
        .collect();
    Ok(chk.finish(format!("n={n}: pi permutes {} marked trees; {}", marked.len(), structure.join(", "))))
}

pub fn flux(n: usize, grid: &[Rates]) -> Result<Vec<CheckReport>> {
    let weights = stationary_weights(n);
    let table = FluxTable::new(n)?;
    let mut out = vec![verify_flux_counts(&weights, &table)];
    let per_point: Vec<(CheckReport, CheckReport)> = grid
        .par_iter()
        .map(|r| (verify_flux_identities(&weights, &table, r), verify_flux_balance(&weights, r)))
        .collect();
    out.push(merge("flux-identities", per_point.iter().map(|p| &p.0), n, grid.len()));
    out.push(merge("flux-balance", per_point.iter().map(|p| &p.1), n, grid.len()));
    Ok(out)
}

fn merge<'a>(name: &str, reports: impl Iterator<Item = &'a CheckReport>, n: usize, points: usize) -> CheckReport {
    let mut checked = 0;
    let mut failure = None;
    for r in reports {
        checked += r.checked;
        if failure.is_none() {
            failure = r.failure.clone();
        }
    }
    CheckReport {
        name: name.into(),
        checked,
        summary: format!("n={n}: exact over {points} rate points"),
        failure,
    }
}

/// Exact equality between the master-equation solution and the tree measure.
pub fn oracle(n: usize, grid: &[Rates]) -> Result<CheckReport> {
    let weights = stationary_weights(n);
    let results: Vec<Result<(Rates, Option<String>, u64)>> = grid
        .par_iter()
        .map(|rates| {
            let g = build_generator(n, rates)?;
            let mut issues = None;
            let bonds: usize = Configuration::all(n).map(|c| active_bonds(&c).len()).sum();
            if g.nonzero_off_diagonal() != bonds {
                issues = Some(format!("generator has {} entries, expected {bonds}", g.nonzero_off_diagonal()));
            }
            for i in 0..g.states() {
                let row = (0..g.states()).fold(BigRational::zero(), |acc, j| acc + g.entry(i, j));
                if issues.is_none() && !row.is_zero() {
                    issues = Some(format!("row {i} sums to {row}"));
                }
            }
            let exact = solve_stationary(&g)?;
            let trees = weights.distribution(rates);
            if issues.is_none() {
                if let Some((c, p)) = exact.iter().find(|(c, p)| **p != trees[c.index()]) {
                    issues = Some(format!("config {c}: oracle {p}, trees {}", trees[c.index()]));
                }
            }
            Ok((rates.clone(), issues, 1 << n))
        })
        .collect();
    let mut chk = Checker::new("oracle");
    for r in results {
        let (rates, issue, _) = r?;
        chk.check(issue.is_none(), || format!("{rates}: {}", issue.unwrap_or_default()));
    }
    Ok(chk.finish(format!("n={n}: oracle equals tree measure at {} rate points", grid.len())))
}

pub fn tableaux(n: usize) -> CheckReport {
    let mut chk = Checker::new("tableaux");
    let trees = enumerate_trees(n);
    let images: Vec<Tableau> = trees.iter().map(phi).collect();
    let mut shape_of: HashMap<Configuration, &[usize]> = HashMap::new();
    for (t, tab) in trees.iter().zip(&images) {
        let v = validate_tableau(tab, Some(n + 1));
        chk.check(v.is_empty(), || format!("phi({t}) = {tab} is invalid: {v:?}"));
        chk.check(tab.ones() + 1 == tab.shape().columns(), || format!("phi({t}) has {} ones", tab.ones()));
        let back = phi_inverse(tab);
        chk.check(back.as_ref() == Ok(t), || format!("phi_inverse(phi({t})) = {back:?}"));
        let shape = lattice_path(t);
        let c = t.reduce();
        chk.check(shape.columns() == c.particles() + 1 && shape.rows() == c.len() - c.particles() + 1, || {
            format!("shape of {t} does not match {c}")
        });
        let prev = *shape_of.entry(c.clone()).or_insert(tab.shape().parts());
        chk.check(prev == tab.shape().parts(), || format!("shape differs within the fiber of {c}"));
    }
    let distinct: HashSet<&Tableau> = images.iter().collect();
    chk.check(distinct.len() == images.len(), || "phi is not injective".into());
    let all = enumerate_catalan_tableaux(n + 1);
    chk.check(all.len() == images.len(), || {
        format!("{} tableaux of index {} but {} trees", all.len(), n + 1, images.len())
    });
    let enumerated: HashSet<&Tableau> = all.iter().collect();
    chk.check(distinct == enumerated, || "image differs from the enumerated tableaux".into());
    for tab in &all {
        let tree = phi_inverse(tab);
        chk.check(tree.as_ref().map(phi).as_ref() == Ok(tab), || format!("phi(phi_inverse({tab})) differs"));
    }
    chk.finish(format!("n={n}: {} trees <-> {} Catalan tableaux of index {}", trees.len(), all.len(), n + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_suites() {
        assert_eq!(Suite::parse_list("all").unwrap().len(), 7);
        assert_eq!(Suite::parse_list("flux,counts,flux").unwrap(), [Suite::Counts, Suite::Flux]);
        assert!(Suite::parse_list("nope").is_err());
    }

    #[test]
    fn every_suite_passes_for_n3() {
        let grid = [Rates::unit(), Rates::from_ratios((1, 2), (1, 3)).unwrap()];
        for s in Suite::ALL {
            for r in run_suite(s, 3, &grid).unwrap() {
                assert!(r.passed(), "{r:?}");
            }
        }
        let b = bijection(3).unwrap();
        assert!(b.summary.contains("5 cycles of length 4"), "{}", b.summary);
    }

    #[test]
    fn n0_limits() {
        assert!(counts(0).passed());
        assert!(tableaux(0).passed());
        assert_eq!(run_suite(Suite::Oracle, 0, &[]).unwrap_err(), Error::NoSites(0));
    }
}

//! Exact tree weights in the inverse rates `a = 1/α`, `b = 1/β`, the
//! stationary measure they induce, and the flux identities behind it.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bijection::pi;
use crate::check::{CheckReport, Checker};
use crate::config::{active_bonds, Configuration};
use crate::error::Result;
use crate::marked::{enumerate_marked, MarkedTree};
use crate::rates::{Rate, Rates};
use crate::tree::{enumerate_trees, Side, Tree};

/// `a^l b^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct WeightMonomial {
    pub l: u32,
    pub r: u32,
}

impl WeightMonomial {
    pub const ONE: WeightMonomial = WeightMonomial { l: 0, r: 0 };

    pub fn new(l: u32, r: u32) -> Self {
        WeightMonomial { l, r }
    }

    pub fn times(self, other: WeightMonomial) -> WeightMonomial {
        WeightMonomial { l: self.l + other.l, r: self.r + other.r }
    }

    /// The factor by which a bond's rate is divided out: `a` for entry,
    /// `b` for exit, `1` in the bulk (since `α = 1/a`, `β = 1/b`).
    pub fn of_rate(rate: Rate) -> WeightMonomial {
        match rate {
            Rate::Alpha => WeightMonomial::new(1, 0),
            Rate::Beta => WeightMonomial::new(0, 1),
            Rate::One => WeightMonomial::ONE,
        }
    }
}

impl fmt::Display for WeightMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.l == 0 && self.r == 0 {
            return f.write_str("1");
        }
        for (var, exp) in [('a', self.l), ('b', self.r)] {
            match exp {
                0 => {}
                1 => write!(f, "{var}")?,
                e => write!(f, "{var}^{e}")?,
            }
        }
        Ok(())
    }
}

/// Polynomial in `a`, `b` with positive integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct WeightPolynomial {
    terms: BTreeMap<WeightMonomial, u64>,
}

impl WeightPolynomial {
    pub fn zero() -> Self {
        WeightPolynomial::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: WeightMonomial, coeff: u64) {
        if coeff > 0 {
            *self.terms.entry(m).or_insert(0) += coeff;
        }
    }

    /// Removes `coeff` copies of `m`; `false` if not enough are present.
    pub fn remove_term(&mut self, m: WeightMonomial, coeff: u64) -> bool {
        match self.terms.get_mut(&m) {
            Some(c) if *c >= coeff => {
                *c -= coeff;
                if *c == 0 {
                    self.terms.remove(&m);
                }
                true
            }
            _ => false,
        }
    }

    pub fn add_assign(&mut self, other: &WeightPolynomial) {
        for (&m, &c) in &other.terms {
            self.add_term(m, c);
        }
    }

    pub fn mul_monomial(&self, m: WeightMonomial) -> WeightPolynomial {
        WeightPolynomial { terms: self.terms.iter().map(|(&k, &c)| (k.times(m), c)).collect() }
    }

    pub fn mul(&self, other: &WeightPolynomial) -> WeightPolynomial {
        let mut out = WeightPolynomial::zero();
        for (&m1, &c1) in &self.terms {
            for (&m2, &c2) in &other.terms {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        out
    }

    /// Terms in lexicographic `(l, r)` order.
    pub fn terms(&self) -> impl Iterator<Item = (WeightMonomial, u64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    /// Value at `a = b = 1`.
    pub fn coefficient_sum(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn degree(&self) -> (u32, u32) {
        self.terms.keys().fold((0, 0), |(l, r), m| (l.max(m.l), r.max(m.r)))
    }

    pub fn eval(&self, rates: &Rates) -> BigRational {
        Evaluator::new(rates, self.degree()).eval(self)
    }
}

impl From<WeightMonomial> for WeightPolynomial {
    fn from(m: WeightMonomial) -> Self {
        let mut p = WeightPolynomial::zero();
        p.add_term(m, 1);
        p
    }
}

impl fmt::Display for WeightPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match (c, m == WeightMonomial::ONE) {
                (1, _) => write!(f, "{m}")?,
                (c, true) => write!(f, "{c}")?,
                (c, false) => write!(f, "{c}{m}")?,
            }
        }
        Ok(())
    }
}

/// Cached powers of `a` and `b` for repeated exact evaluation.
#[derive(Debug, Clone)]
pub struct Evaluator {
    a_pows: Vec<BigRational>,
    b_pows: Vec<BigRational>,
}

impl Evaluator {
    pub fn new(rates: &Rates, (max_l, max_r): (u32, u32)) -> Self {
        let pows = |x: BigRational, k: u32| {
            let mut v = vec![BigRational::one()];
            for i in 0..k as usize {
                let next = &v[i] * &x;
                v.push(next);
            }
            v
        };
        Evaluator { a_pows: pows(rates.a(), max_l), b_pows: pows(rates.b(), max_r) }
    }

    pub fn eval(&self, p: &WeightPolynomial) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in p.terms() {
            acc += &self.a_pows[m.l as usize] * &self.b_pows[m.r as usize] * BigRational::from_integer(c.into());
        }
        acc
    }
}

/// `μ(T) = a^l b^r`.
pub fn mu(t: &Tree) -> WeightMonomial {
    let (l, r) = t.weight_exponents();
    WeightMonomial::new(l, r)
}

/// `μ̂`: as `μ` of the underlying tree, but the marked vertex is not counted
/// when it sits on the path from the root to an extreme endpoint.
pub fn mu_hat(t: &MarkedTree) -> WeightMonomial {
    let tree = t.tree();
    let layout = tree.layout();
    let mark = t.mark();
    let first = layout.endpoints[0];
    let last = *layout.endpoints.last().expect("at least two endpoints");
    let on_path = |leaf: usize| {
        let mut cur = layout.parent[leaf];
        while let Some(v) = cur {
            if v == mark {
                return layout.side[v] != Side::Root;
            }
            cur = layout.parent[v];
        }
        false
    };
    let WeightMonomial { l, r } = mu(tree);
    WeightMonomial::new(l - u32::from(on_path(first)), r - u32::from(on_path(last)))
}

/// Unnormalized stationary weights per configuration, indexed by state index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationaryWeights {
    n: usize,
    weights: Vec<WeightPolynomial>,
}

impl StationaryWeights {
    /// Sums `μ(T)` over the given trees, grouped by reduced configuration.
    pub fn from_trees<'a>(n: usize, trees: impl IntoIterator<Item = &'a Tree>) -> Self {
        let mut weights = vec![WeightPolynomial::zero(); 1 << n];
        for t in trees {
            debug_assert_eq!(t.n(), n);
            weights[t.reduce().index()].add_term(mu(t), 1);
        }
        StationaryWeights { n, weights }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, c: &Configuration) -> &WeightPolynomial {
        &self.weights[c.index()]
    }

    pub fn weight_by_index(&self, index: usize) -> &WeightPolynomial {
        &self.weights[index]
    }

    /// Mutable access, for perturbation tests.
    pub fn weight_mut(&mut self, index: usize) -> &mut WeightPolynomial {
        &mut self.weights[index]
    }

    /// `(configuration, weight)` in state-index order.
    pub fn iter(&self) -> impl Iterator<Item = (Configuration, &WeightPolynomial)> {
        let n = self.n;
        self.weights.iter().enumerate().map(move |(i, w)| (Configuration::from_index(n, i), w))
    }

    /// `Z_n`, the sum of all weights.
    pub fn partition_function(&self) -> WeightPolynomial {
        let mut z = WeightPolynomial::zero();
        for w in &self.weights {
            z.add_assign(w);
        }
        z
    }

    fn evaluator(&self, rates: &Rates) -> Evaluator {
        let deg = self.weights.iter().fold((0, 0), |(l, r), w| {
            let (dl, dr) = w.degree();
            (l.max(dl), r.max(dr))
        });
        Evaluator::new(rates, (deg.0 + 1, deg.1 + 1))
    }

    /// Unnormalized weights evaluated at `rates`, by state index.
    pub fn evaluate(&self, rates: &Rates) -> Vec<BigRational> {
        let ev = self.evaluator(rates);
        self.weights.iter().map(|w| ev.eval(w)).collect()
    }

    /// Normalized probabilities at `rates`, by state index.
    pub fn distribution(&self, rates: &Rates) -> Vec<BigRational> {
        let values = self.evaluate(rates);
        let z: BigRational = values.iter().fold(BigRational::zero(), |acc, v| acc + v);
        values.into_iter().map(|v| v / &z).collect()
    }
}

/// The tree-induced weights for `n` sites.
pub fn stationary_weights(n: usize) -> StationaryWeights {
    let trees = enumerate_trees(n);
    StationaryWeights::from_trees(n, &trees)
}

/// All transitions `(from, to, rate)` by state index, from the rate table.
pub fn transitions(n: usize) -> Vec<(usize, usize, Rate)> {
    Configuration::all(n)
        .flat_map(|c| {
            active_bonds(&c)
                .into_iter()
                .map(move |b| (c.index(), b.apply(&c).index(), b.rate()))
        })
        .collect()
}

/// Marked trees bucketed by `(R f T̂, R f π T̂)`.
#[derive(Debug, Clone)]
pub struct FluxTable {
    n: usize,
    sets: BTreeMap<(usize, usize), Vec<MarkedTree>>,
}

impl FluxTable {
    pub fn new(n: usize) -> Result<Self> {
        let mut sets: BTreeMap<(usize, usize), Vec<MarkedTree>> = BTreeMap::new();
        for t in enumerate_marked(n)? {
            let from = t.tree().reduce().index();
            let to = pi(&t).tree().reduce().index();
            sets.entry((from, to)).or_default().push(t);
        }
        Ok(FluxTable { n, sets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `F(from → to)`; empty when no marked tree realizes the pair.
    pub fn get(&self, from: &Configuration, to: &Configuration) -> &[MarkedTree] {
        self.sets.get(&(from.index(), to.index())).map_or(&[], Vec::as_slice)
    }

    /// Non-empty flux sets keyed by `(from, to)` state indices.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &[MarkedTree])> {
        self.sets.iter().map(|(&k, v)| (k, v.as_slice()))
    }
}

/// `F(C' → C)`: marked trees reducing to `C'` whose `pi` image reduces to `C`.
pub fn flux_set(n: usize, from: &Configuration, to: &Configuration) -> Result<Vec<MarkedTree>> {
    Ok(FluxTable::new(n)?.get(from, to).to_vec())
}

fn mu_hat_sum(set: &[MarkedTree]) -> WeightPolynomial {
    let mut p = WeightPolynomial::zero();
    for t in set {
        p.add_term(mu_hat(t), 1);
    }
    p
}

fn pair_label(n: usize, from: usize, to: usize) -> String {
    format!(
        "{} -> {}",
        Configuration::from_index(n, from),
        Configuration::from_index(n, to)
    )
}

/// Counting form at `α = β = 1`: `|F(C' → C)| = |R⁻¹{C'}| · [W(C' → C) > 0]`
/// for every ordered pair, and the two summed set identities.
pub fn verify_flux_counts(weights: &StationaryWeights, table: &FluxTable) -> CheckReport {
    let n = weights.n();
    let states = 1usize << n;
    let fiber: Vec<u64> = (0..states).map(|i| weights.weight_by_index(i).coefficient_sum()).collect();
    let moves: BTreeMap<(usize, usize), Rate> = transitions(n).into_iter().map(|(f, t, r)| ((f, t), r)).collect();
    let mut chk = Checker::new("flux-counts");

    let mut keys: Vec<(usize, usize)> = moves.keys().copied().collect();
    keys.extend(table.iter().map(|(k, _)| k));
    keys.sort_unstable();
    keys.dedup();
    for (from, to) in keys {
        let got = table.sets.get(&(from, to)).map_or(0, |s| s.len() as u64);
        let want = if moves.contains_key(&(from, to)) { fiber[from] } else { 0 };
        chk.check(got == want, || {
            format!("|F({})| = {got}, expected {want}", pair_label(n, from, to))
        });
    }

    // |(Rf)⁻¹{C}| = |R⁻¹{C}| · (outgoing count) and |(Rfπ)⁻¹{C}| = Σ |R⁻¹{C'}|
    let mut out_sets = vec![0u64; states];
    let mut in_sets = vec![0u64; states];
    for ((from, to), set) in table.iter() {
        out_sets[from] += set.len() as u64;
        in_sets[to] += set.len() as u64;
    }
    let mut outflow = vec![0u64; states];
    let mut inflow = vec![0u64; states];
    for &(from, to) in moves.keys() {
        outflow[from] += fiber[from];
        inflow[to] += fiber[from];
    }
    for c in 0..states {
        chk.check(out_sets[c] == outflow[c], || {
            format!("|(Rf)^-1{{{}}}| = {}, expected {}", Configuration::from_index(n, c), out_sets[c], outflow[c])
        });
        chk.check(in_sets[c] == inflow[c], || {
            format!("|(Rf pi)^-1{{{}}}| = {}, expected {}", Configuration::from_index(n, c), in_sets[c], inflow[c])
        });
    }
    let pairs = table.iter().count();
    chk.finish(format!("n={n}: {pairs} non-empty flux sets, counting identities checked"))
}

/// Weighted form: `μ̂(F(C' → C)) = μ(R⁻¹{C'}) · W(C' → C)` at `rates`, for
/// every ordered pair, plus the two summed identities.
pub fn verify_flux_identities(weights: &StationaryWeights, table: &FluxTable, rates: &Rates) -> CheckReport {
    let n = weights.n();
    let states = 1usize << n;
    let ev = weights.evaluator(rates);
    let w: Vec<BigRational> = (0..states).map(|i| ev.eval(weights.weight_by_index(i))).collect();
    let moves: BTreeMap<(usize, usize), Rate> = transitions(n).into_iter().map(|(f, t, r)| ((f, t), r)).collect();
    let mut chk = Checker::new("flux-identities");

    let mut flux_value: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
    for (key, set) in table.iter() {
        flux_value.insert(key, ev.eval(&mu_hat_sum(set)));
    }
    let mut keys: Vec<(usize, usize)> = moves.keys().copied().collect();
    keys.extend(flux_value.keys().copied());
    keys.sort_unstable();
    keys.dedup();
    let zero = BigRational::zero();
    for (from, to) in keys {
        let got = flux_value.get(&(from, to)).unwrap_or(&zero);
        let want = match moves.get(&(from, to)) {
            Some(&rate) => &w[from] * rates.eval(rate),
            None => BigRational::zero(),
        };
        chk.check(*got == want, || {
            format!("mu_hat(F({})) = {got}, expected {want} at {rates}", pair_label(n, from, to))
        });
    }

    let mut out_sets = vec![BigRational::zero(); states];
    let mut in_sets = vec![BigRational::zero(); states];
    for (&(from, to), v) in &flux_value {
        out_sets[from] += v;
        in_sets[to] += v;
    }
    let mut outflow = vec![BigRational::zero(); states];
    let mut inflow = vec![BigRational::zero(); states];
    for (&(from, to), &rate) in &moves {
        let f = &w[from] * rates.eval(rate);
        outflow[from] += &f;
        inflow[to] += f;
    }
    for c in 0..states {
        let cfg = || Configuration::from_index(n, c);
        chk.check(out_sets[c] == outflow[c], || {
            format!("mu_hat((Rf)^-1{{{}}}) = {}, expected {}", cfg(), out_sets[c], outflow[c])
        });
        chk.check(in_sets[c] == inflow[c], || {
            format!("mu_hat((Rf pi)^-1{{{}}}) = {}, expected {}", cfg(), in_sets[c], inflow[c])
        });
    }
    chk.finish(format!("n={n} at {rates}: weighted flux identities checked"))
}

/// Stationarity of the tree measure: for every configuration, weight times
/// total exit rate equals the rate-weighted inflow.
pub fn verify_flux_balance(weights: &StationaryWeights, rates: &Rates) -> CheckReport {
    let n = weights.n();
    let states = 1usize << n;
    let w = weights.evaluate(rates);
    let mut outflow = vec![BigRational::zero(); states];
    let mut inflow = vec![BigRational::zero(); states];
    for (from, to, rate) in transitions(n) {
        let f = &w[from] * rates.eval(rate);
        outflow[from] += &f;
        inflow[to] += f;
    }
    let mut chk = Checker::new("flux-balance");
    for c in 0..states {
        chk.check(outflow[c] == inflow[c], || {
            format!(
                "config {}: outflow {} != inflow {} at {rates}",
                Configuration::from_index(n, c),
                outflow[c],
                inflow[c]
            )
        });
    }
    chk.finish(format!("n={n} at {rates}: balance holds for {states} configurations"))
}

/// Properties of `μ̂` on every marked tree: (a) `μ̂(T̂) · w = μ(f(T̂))` with
/// `w` the inverse rate of the marked bond, (b) `μ̂(π(T̂)) = μ̂(T̂)`.
pub fn verify_marked_properties(n: usize) -> Result<CheckReport> {
    let mut chk = Checker::new("marked-properties");
    let marked = enumerate_marked(n)?;
    for t in &marked {
        let hat = mu_hat(t);
        let shift = WeightMonomial::of_rate(t.bond().rate());
        chk.check(hat.times(shift) == mu(t.tree()), || {
            format!("(a) fails at {t}: mu_hat = {hat}, bond {}, mu = {}", t.bond(), mu(t.tree()))
        });
        let image = pi(t);
        chk.check(mu_hat(&image) == hat, || {
            format!("(b) fails at {t}: mu_hat = {hat}, mu_hat(pi) = {} at {image}", mu_hat(&image))
        });
    }
    Ok(chk.finish(format!("n={n}: properties (a) and (b) hold on {} marked trees", marked.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Bond;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn m(s: &str) -> MarkedTree {
        s.parse().unwrap()
    }

    fn c(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(&t("(((LL)L)L)")).to_string(), "a^2");
        assert_eq!(mu(&t("((LL)(LL))")).to_string(), "ab");
        assert_eq!(mu(&t("(LL)")), WeightMonomial::ONE);
    }

    #[test]
    fn mu_hat_examples() {
        assert_eq!(mu_hat(&m("(((LL)*L)L)")), WeightMonomial::new(1, 0));
        // μ(f) = a b^2 with the mark on the right path gives a b
        let found: Vec<MarkedTree> = enumerate_marked(3)
            .unwrap()
            .into_iter()
            .filter(|x| mu(x.tree()) == WeightMonomial::new(1, 2) && x.bond() == Bond::Exit)
            .collect();
        assert!(!found.is_empty());
        for x in found {
            assert_eq!(mu_hat(&x), WeightMonomial::new(1, 1));
        }
        // bulk marks leave μ unchanged
        let bulk = m("((L(LL)*)L)");
        assert_eq!(bulk.bond(), Bond::Bulk(1));
        assert_eq!(mu_hat(&bulk), mu(bulk.tree()));
    }

    #[test]
    fn n2_weights() {
        let sw = stationary_weights(2);
        let shown: Vec<String> = ["00", "10", "11", "01"].iter().map(|s| sw.weight(&c(s)).to_string()).collect();
        assert_eq!(shown, ["a^2", "b + a", "b^2", "ab"]);
        assert_eq!(sw.partition_function().coefficient_sum(), 5);
    }

    #[test]
    fn n2_unit_probabilities() {
        let p = stationary_weights(2).distribution(&Rates::unit());
        let shown: Vec<String> = p.iter().map(ToString::to_string).collect();
        // state order 00, 10, 01, 11
        assert_eq!(shown, ["1/5", "2/5", "1/5", "1/5"]);
    }

    #[test]
    fn n1_probability() {
        let sw = stationary_weights(1);
        assert_eq!(sw.weight(&c("1")).to_string(), "b");
        assert_eq!(sw.weight(&c("0")).to_string(), "a");
        let rates = Rates::from_ratios((1, 2), (1, 3)).unwrap();
        let p = sw.distribution(&rates);
        // α / (α + β) = (1/2) / (5/6)
        assert_eq!(p[1], BigRational::new(3.into(), 5.into()));
    }

    #[test]
    fn flux_set_examples() {
        assert_eq!(flux_set(2, &c("00"), &c("10")).unwrap().len(), 1);
        assert!(flux_set(2, &c("00"), &c("01")).unwrap().is_empty());
        assert_eq!(flux_set(2, &c("10"), &c("01")).unwrap().len(), 2);
    }

    #[test]
    fn identities_small() {
        for n in 1..=4 {
            let sw = stationary_weights(n);
            let table = FluxTable::new(n).unwrap();
            assert!(verify_flux_counts(&sw, &table).passed());
            let rates = Rates::from_ratios((1, 2), (1, 3)).unwrap();
            let r = verify_flux_identities(&sw, &table, &rates);
            assert!(r.passed(), "{r:?}");
            assert!(verify_flux_balance(&sw, &rates).passed());
            assert!(verify_marked_properties(n).unwrap().passed());
        }
    }

    #[test]
    fn dropping_a_tree_is_caught() {
        let n = 3;
        let trees = enumerate_trees(n);
        let table = FluxTable::new(n).unwrap();
        let perturbed = StationaryWeights::from_trees(n, &trees[1..]);
        let r = verify_flux_identities(&perturbed, &table, &Rates::unit());
        let msg = r.failure.expect("perturbation must be detected");
        assert!(msg.contains("->") || msg.contains("^-1"), "{msg}");
        assert!(!verify_flux_counts(&perturbed, &table).passed());
        assert!(!verify_flux_balance(&perturbed, &Rates::unit()).passed());
    }
}

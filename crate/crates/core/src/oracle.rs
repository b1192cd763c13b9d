//! Exact master-equation oracle: the TASEP generator over all `2^n`
//! configurations and its stationary vector by exact elimination.
//!
//! Nothing here looks at trees. The generator is assembled from the bond
//! table alone, so agreement with the tree measure is a real cross-check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::config::{active_bonds, Configuration};
use crate::error::{Error, Result};
use crate::rates::Rates;

/// Sparse rate matrix `Q`. States are indexed with site 1 as the least
/// significant bit.
#[derive(Debug, Clone)]
pub struct Generator {
    n: usize,
    rates: Rates,
    /// Off-diagonal `(target, rate)` per source state, in bond order.
    rows: Vec<Vec<(usize, BigRational)>>,
}

impl Generator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rates(&self) -> &Rates {
        &self.rates
    }

    pub fn states(&self) -> usize {
        self.rows.len()
    }

    pub fn off_diagonal(&self, from: usize) -> &[(usize, BigRational)] {
        &self.rows[from]
    }

    /// `Q[i][i]`, minus the total exit rate.
    pub fn diagonal(&self, i: usize) -> BigRational {
        -self.rows[i].iter().fold(BigRational::zero(), |acc, (_, r)| acc + r)
    }

    pub fn entry(&self, from: usize, to: usize) -> BigRational {
        if from == to {
            return self.diagonal(from);
        }
        self.rows[from]
            .iter()
            .find(|(t, _)| *t == to)
            .map_or_else(BigRational::zero, |(_, r)| r.clone())
    }

    pub fn nonzero_off_diagonal(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `(πQ)_j` for every `j`.
    pub fn left_apply(&self, p: &[BigRational]) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = (0..self.states()).map(|i| &p[i] * self.diagonal(i)).collect();
        for (from, row) in self.rows.iter().enumerate() {
            for (to, r) in row {
                out[*to] += &p[from] * r;
            }
        }
        out
    }
}

pub fn build_generator(n: usize, rates: &Rates) -> Result<Generator> {
    if n == 0 {
        return Err(Error::NoSites(0));
    }
    let rows = Configuration::all(n)
        .map(|c| {
            active_bonds(&c)
                .into_iter()
                .map(|b| (b.apply(&c).index(), rates.eval(b.rate())))
                .collect()
        })
        .collect();
    Ok(Generator { n, rates: rates.clone(), rows })
}

/// Exact stationary probabilities by state index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationaryDistribution {
    n: usize,
    probs: Vec<BigRational>,
}

impl StationaryDistribution {
    pub fn new(n: usize, probs: Vec<BigRational>) -> Result<Self> {
        if probs.len() != 1 << n {
            return Err(Error::LengthMismatch { expected: 1 << n, got: probs.len() });
        }
        Ok(StationaryDistribution { n, probs })
    }

    pub fn uniform(n: usize) -> Self {
        let p = BigRational::new(BigInt::one(), BigInt::one() << n);
        StationaryDistribution { n, probs: vec![p; 1 << n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probabilities(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn probability(&self, c: &Configuration) -> &BigRational {
        &self.probs[c.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Configuration, &BigRational)> {
        let n = self.n;
        self.probs.iter().enumerate().map(move |(i, p)| (Configuration::from_index(n, i), p))
    }
}

type SparseRow = Vec<(usize, BigInt)>;

fn entry_of(row: &SparseRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &row[i].1)
}

/// `row ← d·row − c·pivot`, then divided by the content of the result.
fn eliminate(row: &SparseRow, pivot: &SparseRow, d: &BigInt, c: &BigInt) -> SparseRow {
    let g = d.gcd(c);
    let (d, c) = (d / &g, c / &g);
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (col, v) = if ci < cj {
            i += 1;
            (ci, &row[i - 1].1 * &d)
        } else if cj < ci {
            j += 1;
            (cj, -(&pivot[j - 1].1 * &c))
        } else {
            i += 1;
            j += 1;
            (ci, &row[i - 1].1 * &d - &pivot[j - 1].1 * &c)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    let content = out.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if !content.is_zero() && !content.is_one() {
        for (_, v) in &mut out {
            *v /= &content;
        }
    }
    out
}

fn lcm_of_denominators(rates: &Rates) -> BigInt {
    rates.alpha().denom().lcm(rates.beta().denom())
}

/// Solves `πQ = 0`, `Σπ = 1` exactly.
///
/// The generator is scaled to integers and transposed; one balance row is
/// replaced by the normalization row. Elimination is fraction-free with
/// content removal; pivots are chosen per column as the sparsest candidate
/// row. A missing pivot means the kernel is not one-dimensional.
pub fn solve_stationary(g: &Generator) -> Result<StationaryDistribution> {
    let size = g.states();
    let scale = BigRational::from_integer(lcm_of_denominators(g.rates()));
    let to_int = |r: &BigRational| -> BigInt {
        let v = r * &scale;
        debug_assert!(v.is_integer());
        v.to_integer()
    };

    // rows of Qᵀ: row j holds Q[i][j] for all i; column `size` is the RHS
    let mut rows: Vec<SparseRow> = vec![Vec::new(); size];
    for i in 0..size {
        rows[i].push((i, to_int(&g.diagonal(i))));
        for (j, r) in g.off_diagonal(i) {
            rows[*j].push((i, to_int(r)));
        }
    }
    rows[size - 1] = (0..size).map(|i| (i, BigInt::one())).chain([(size, BigInt::one())]).collect();
    for row in &mut rows {
        row.sort_unstable_by_key(|e| e.0);
    }

    let mut remaining: Vec<usize> = (0..size).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::with_capacity(size);
    for col in 0..size {
        let best = remaining
            .iter()
            .enumerate()
            .filter(|(_, &r)| entry_of(&rows[r], col).is_some())
            .min_by_key(|(_, &r)| rows[r].len())
            .map(|(pos, &r)| (pos, r));
        let Some((pos, prow)) = best else {
            return Err(Error::DegenerateKernel(g.n()));
        };
        remaining.swap_remove(pos);
        let pivot_row = std::mem::take(&mut rows[prow]);
        let d = entry_of(&pivot_row, col).expect("pivot present").clone();
        for &r in &remaining {
            if let Some(c) = entry_of(&rows[r], col) {
                let c = c.clone();
                rows[r] = eliminate(&rows[r], &pivot_row, &d, &c);
            }
        }
        rows[prow] = pivot_row;
        pivots.push((col, prow));
    }

    let mut x = vec![BigRational::zero(); size];
    for &(col, prow) in pivots.iter().rev() {
        let row = &rows[prow];
        let mut acc = BigRational::zero();
        let mut d = BigInt::zero();
        for (c, v) in row {
            if *c == size {
                acc += BigRational::from_integer(v.clone());
            } else if *c == col {
                d = v.clone();
            } else {
                acc -= &x[*c] * BigRational::from_integer(v.clone());
            }
        }
        x[col] = acc / BigRational::from_integer(d);
    }

    let residual = g.left_apply(&x);
    let total = x.iter().fold(BigRational::zero(), |acc, p| acc + p);
    if residual.iter().any(|r| !r.is_zero()) || !total.is_one() || x.iter().any(|p| !p.is_positive()) {
        return Err(Error::DegenerateKernel(g.n()));
    }
    StationaryDistribution::new(g.n(), x)
}

/// `ρ_k = P(site k filled)`, `k = 1..n`.
pub fn density_profile(dist: &StationaryDistribution) -> Vec<BigRational> {
    (1..=dist.n())
        .map(|k| {
            dist.iter()
                .filter(|(c, _)| c.site(k).is_filled())
                .fold(BigRational::zero(), |acc, (_, p)| acc + p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::format_rational;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn n1_generator() {
        let rates = Rates::from_ratios((1, 2), (1, 3)).unwrap();
        let g = build_generator(1, &rates).unwrap();
        assert_eq!(g.states(), 2);
        assert_eq!(g.entry(0, 1), q(1, 2));
        assert_eq!(g.entry(1, 0), q(1, 3));
        let dist = solve_stationary(&g).unwrap();
        // α / (α + β)
        assert_eq!(dist.probabilities()[1], q(3, 5));
        assert_eq!(density_profile(&dist), vec![q(3, 5)]);
    }

    #[test]
    fn n2_generator_shape() {
        let rates = Rates::from_ratios((1, 2), (1, 3)).unwrap();
        let g = build_generator(2, &rates).unwrap();
        assert_eq!(g.nonzero_off_diagonal(), 5);
        let s = |x: &str| x.parse::<Configuration>().unwrap().index();
        assert_eq!(g.entry(s("00"), s("10")), q(1, 2));
        assert_eq!(g.entry(s("10"), s("01")), q(1, 1));
        assert_eq!(g.entry(s("01"), s("00")), q(1, 3));
        assert_eq!(g.entry(s("01"), s("11")), q(1, 2));
        assert_eq!(g.entry(s("11"), s("10")), q(1, 3));
        assert_eq!(g.diagonal(s("01")), -q(5, 6));
        for i in 0..4 {
            let sum = (0..4).fold(BigRational::zero(), |acc, j| acc + g.entry(i, j));
            assert!(sum.is_zero());
        }
    }

    #[test]
    fn n2_unit_solution() {
        let g = build_generator(2, &Rates::unit()).unwrap();
        let dist = solve_stationary(&g).unwrap();
        let shown: Vec<String> = dist.probabilities().iter().map(format_rational).collect();
        assert_eq!(shown, ["1/5", "2/5", "1/5", "1/5"]);
        assert_eq!(density_profile(&dist), vec![q(3, 5), q(2, 5)]);
    }

    #[test]
    fn uniform_profile() {
        for d in density_profile(&StationaryDistribution::uniform(4)) {
            assert_eq!(d, q(1, 2));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(build_generator(0, &Rates::unit()).unwrap_err(), Error::NoSites(0));
        assert!(StationaryDistribution::new(2, vec![q(1, 1)]).is_err());
    }
}

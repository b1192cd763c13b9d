//! Machine-readable renderings: weight polynomials and profiles as JSON,
//! distributions as CSV. Rationals are `"p/q"` strings.

use num_rational::BigRational;
use serde::Serialize;

use crate::config::Configuration;
use crate::marked::MarkedTree;
use crate::rates::{format_decimal, format_rational, Rates};
use crate::weights::{StationaryWeights, WeightPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub l: u32,
    pub r: u32,
    pub c: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigWeight {
    pub config: String,
    pub poly: Vec<Term>,
}

/// `{"n", "weights": [{"config", "poly": [{"l","r","c"}]}], "Z": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightsDoc {
    pub n: usize,
    pub weights: Vec<ConfigWeight>,
    #[serde(rename = "Z")]
    pub z: Vec<Term>,
}

fn terms(p: &WeightPolynomial) -> Vec<Term> {
    p.terms().map(|(m, c)| Term { l: m.l, r: m.r, c }).collect()
}

impl WeightsDoc {
    pub fn new(sw: &StationaryWeights) -> Self {
        WeightsDoc {
            n: sw.n(),
            weights: sw
                .iter()
                .map(|(c, w)| ConfigWeight { config: c.to_string(), poly: terms(w) })
                .collect(),
            z: terms(&sw.partition_function()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigProbability {
    pub config: String,
    pub probability: String,
}

/// Exact distribution and density profile at fixed rates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistributionDoc {
    pub n: usize,
    pub alpha: String,
    pub beta: String,
    pub distribution: Vec<ConfigProbability>,
    pub density: Vec<String>,
}

/// Renders a probability exactly, or with `digits` decimals when given.
pub fn render_probability(p: &BigRational, digits: Option<usize>) -> String {
    match digits {
        Some(d) => format_decimal(p, d),
        None => format_rational(p),
    }
}

impl DistributionDoc {
    pub fn new(n: usize, rates: &Rates, probs: &[BigRational], density: &[BigRational], digits: Option<usize>) -> Self {
        DistributionDoc {
            n,
            alpha: format_rational(rates.alpha()),
            beta: format_rational(rates.beta()),
            distribution: probs
                .iter()
                .enumerate()
                .map(|(i, p)| ConfigProbability {
                    config: Configuration::from_index(n, i).to_string(),
                    probability: render_probability(p, digits),
                })
                .collect(),
            density: density.iter().map(|d| render_probability(d, digits)).collect(),
        }
    }
}

/// `config,probability` with a header row, in state-index order.
pub fn distribution_csv(n: usize, probs: &[BigRational], digits: Option<usize>) -> String {
    let mut out = String::from("config,probability\n");
    for (i, p) in probs.iter().enumerate() {
        out.push_str(&format!("{},{}\n", Configuration::from_index(n, i), render_probability(p, digits)));
    }
    out
}

/// Cycles as arrays of marked-tree serializations.
pub fn cycles_json(cycles: &[Vec<MarkedTree>]) -> serde_json::Value {
    serde_json::to_value(cycles).expect("marked trees serialize as strings")
}

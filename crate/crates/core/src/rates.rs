//! Transition rates and exact rational parameters.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Symbolic rate attached to a bond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rate {
    Alpha,
    Beta,
    One,
}

/// Parses `p/q` (or a bare integer `p`) into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::BadRational(s.to_string());
    let (num, den) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Renders a rational as `p/q` in lowest terms, always with a denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal rendering with `digits` places; display only.
pub fn format_decimal(r: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (r * BigRational::from_integer(scale.clone())).round().to_integer();
    let neg = scaled < BigInt::zero();
    let abs = if neg { -scaled } else { scaled };
    let int_part = &abs / &scale;
    let frac_part = &abs % &scale;
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
    }
}

/// Boundary rates `(α, β)`, each an exact rational in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rates {
    alpha: BigRational,
    beta: BigRational,
}

impl Rates {
    pub fn new(alpha: BigRational, beta: BigRational) -> Result<Self> {
        check_unit("alpha", &alpha)?;
        check_unit("beta", &beta)?;
        Ok(Rates { alpha, beta })
    }

    pub fn from_ratios(alpha: (i64, i64), beta: (i64, i64)) -> Result<Self> {
        Rates::new(
            BigRational::new(alpha.0.into(), alpha.1.into()),
            BigRational::new(beta.0.into(), beta.1.into()),
        )
    }

    pub fn parse(alpha: &str, beta: &str) -> Result<Self> {
        Rates::new(parse_rational(alpha)?, parse_rational(beta)?)
    }

    /// `α = β = 1`.
    pub fn unit() -> Self {
        Rates { alpha: BigRational::one(), beta: BigRational::one() }
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    /// `a = 1/α`.
    pub fn a(&self) -> BigRational {
        self.alpha.recip()
    }

    /// `b = 1/β`.
    pub fn b(&self) -> BigRational {
        self.beta.recip()
    }

    pub fn eval(&self, rate: Rate) -> BigRational {
        match rate {
            Rate::Alpha => self.alpha.clone(),
            Rate::Beta => self.beta.clone(),
            Rate::One => BigRational::one(),
        }
    }

    /// The `{1, 3/4, 1/2, 1/3, 1/10}²` grid used throughout the checks.
    pub fn test_grid() -> Vec<Rates> {
        const VALUES: [(i64, i64); 5] = [(1, 1), (3, 4), (1, 2), (1, 3), (1, 10)];
        let mut out = Vec::with_capacity(25);
        for &a in &VALUES {
            for &b in &VALUES {
                out.push(Rates::from_ratios(a, b).expect("grid values lie in (0, 1]"));
            }
        }
        out
    }
}

impl fmt::Display for Rates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={} beta={}", format_rational(&self.alpha), format_rational(&self.beta))
    }
}

impl FromStr for Rates {
    type Err = Error;

    /// `"α:β"`, e.g. `"1/2:1/3"`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once(':').ok_or_else(|| Error::BadRational(s.to_string()))?;
        Rates::parse(a, b)
    }
}

fn check_unit(name: &'static str, r: &BigRational) -> Result<()> {
    if r <= &BigRational::zero() || r > &BigRational::one() {
        return Err(Error::RateOutOfRange { name, value: format_rational(r) });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let r = parse_rational("6/8").unwrap();
        assert_eq!(format_rational(&r), "3/4");
        assert_eq!(format_rational(&parse_rational("1").unwrap()), "1/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn range_checks() {
        assert!(Rates::parse("1/2", "1/1").is_ok());
        assert!(matches!(Rates::parse("0/1", "1/2"), Err(Error::RateOutOfRange { name: "alpha", .. })));
        assert!(matches!(Rates::parse("1/2", "3/2"), Err(Error::RateOutOfRange { name: "beta", .. })));
        assert!(Rates::parse("-1/2", "1/2").is_err());
    }

    #[test]
    fn grid_pairs() {
        let g: Rates = "1/2:1/3".parse().unwrap();
        assert_eq!(format_rational(&g.b()), "3/1");
        assert_eq!(Rates::test_grid().len(), 25);
    }

    #[test]
    fn decimals() {
        let r = parse_rational("2/3").unwrap();
        assert_eq!(format_decimal(&r, 4), "0.6667");
        assert_eq!(format_decimal(&parse_rational("1/40").unwrap(), 2), "0.03");
        assert_eq!(format_decimal(&parse_rational("7/2").unwrap(), 0), "4");
    }
}

//! Sparse regularity machinery: p-densities, regular-pair testing, the
//! energy-increment refinement loops, colour and part selection, and the
//! partite counting checks. Densities are exact rationals throughout; p is
//! passed as a rational so every density stays exact.

mod counting;
mod energy;
mod pairs;
mod partition;
mod select;
mod srl;

pub use counting::{
    count_noncompletion_embeddings, count_partite_embeddings, count_poor_embeddings,
    predicted_partite_count, PARTITE_PATTERN_BOUND,
};
pub use energy::{defect_cauchy_schwarz, energy};
pub use pairs::{assess_pair, p_density, AssessMode, PairAssessment, PairConfig};
pub use partition::Partition;
pub use select::{select_colour_and_parts, select_parts_for_colour, SelectConfig, Selection};
pub use srl::{
    srl_partition, strengthened_srl, PairRecord, RegularityDecomposition, SrlConfig, SrlOutcome,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub type BigRat = BigRational;

pub fn big_rat(num: i64, den: i64) -> BigRat {
    BigRat::new(BigInt::from(num), BigInt::from(den))
}

pub fn big_int_rat(num: usize) -> BigRat {
    BigRat::from_integer(BigInt::from(num))
}

pub fn rat_to_f64(r: &BigRat) -> f64 {
    let num = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let den = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    num / den
}

/// Parses a decimal string like "0.15" or "3/20" into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRat, RegularityError> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().map_err(|_| RegularityError::BadRational(s.into()))?;
        let den: BigInt = d.trim().parse().map_err(|_| RegularityError::BadRational(s.into()))?;
        if den == BigInt::from(0) {
            return Err(RegularityError::BadRational(s.into()));
        }
        return Ok(BigRat::new(num, den));
    }
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    let negative = int_part.starts_with('-');
    let int_digits = int_part.trim_start_matches('-');
    if !int_digits.chars().all(|c| c.is_ascii_digit()) || int_digits.is_empty() && frac_part.is_empty()
    {
        return Err(RegularityError::BadRational(s.into()));
    }
    if !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(RegularityError::BadRational(s.into()));
    }
    let mut digits = String::new();
    digits.push_str(if int_digits.is_empty() { "0" } else { int_digits });
    digits.push_str(frac_part);
    let num: BigInt = digits.parse().map_err(|_| RegularityError::BadRational(s.into()))?;
    let den = BigInt::from(10).pow(frac_part.len() as u32);
    let value = BigRat::new(num, den);
    Ok(if negative { -value } else { value })
}

#[derive(Debug, Error)]
pub enum RegularityError {
    #[error("p must be positive")]
    ZeroP,
    #[error("sets for a pair density must be disjoint and nonempty")]
    BadPair,
    #[error("exhaustive pair assessment too large: sides {0} and {1}, bound {2}")]
    ExhaustiveTooLarge(usize, usize, usize),
    #[error("iteration budget exceeded after {rounds} rounds")]
    IterationBudget { rounds: usize, energy_trace: Vec<BigRat> },
    #[error("pattern too large for exact partite counting: {0} vertices")]
    PatternTooLarge(usize),
    #[error("weights must be nonnegative, sum to 1, and satisfy sum rho_i lambda_i = 0")]
    WeightSum,
    #[error("no monochromatic clique of {want} parts found among {have} candidate parts")]
    NoMonochromaticClique { want: usize, have: usize },
    #[error("a chosen coarse part has no usable fine parts left")]
    NoUsableParts,
    #[error("blocks do not partition the ground set")]
    NotAPartition,
    #[error("cannot parse rational from {0:?}")]
    BadRational(String),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

//! The constant pack steering an embedding run. Paper mode evaluates the
//! defining formulas exactly in big rational arithmetic (runnable only for
//! generous mu, used for consistency checks); practical mode takes small
//! user-chosen values and enforces just the structural constraints.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::EmbedderError;
use crate::regularity::{big_int_rat, parse_rational, rat_to_f64, BigRat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantsMode {
    Paper,
    Practical,
}

#[derive(Debug, Clone)]
pub struct ConstantsPack {
    pub mode: ConstantsMode,
    pub degeneracy: usize,
    pub max_degree: usize,
    pub colours: usize,
    pub mu: BigRat,
    /// Colour density guarantee, 1/(2r) unless overridden.
    pub d: BigRat,
    pub h0: BigRat,
    pub ell1: BigRat,
    pub h1: BigRat,
    pub kappa: BigRat,
    pub rho: BigRat,
    /// Host part-count factor K (each part has N/K vertices).
    pub k: BigRat,
    pub k0: BigRat,
}

/// Exponent cap when materialising 2 Delta^{ell_1} in paper mode.
const PAPER_EXPONENT_CAP: u64 = 20_000;

impl ConstantsPack {
    /// Evaluates the defining formulas exactly: h0 = 16 D^5 / mu^3,
    /// ell1 = D^2 h0^2 / mu + 20, h1 = 2 Delta^{ell1}, d = 1/(2r),
    /// kappa = d^D / (20 h1 K), rho = d^D / (4 K0).
    pub fn paper(
        degeneracy: usize,
        max_degree: usize,
        colours: usize,
        mu: BigRat,
        k: BigRat,
        k0: BigRat,
    ) -> Result<Self, EmbedderError> {
        if mu <= BigRat::zero() {
            return Err(EmbedderError::BadConstants("mu must be positive".into()));
        }
        if colours == 0 || degeneracy == 0 || max_degree < 2 {
            return Err(EmbedderError::BadConstants(
                "need r >= 1, D >= 1, Delta >= 2".into(),
            ));
        }
        let d_big = big_int_rat(degeneracy);
        let h0 = big_int_rat(16) * pow_rat(&d_big, 5) / pow_rat(&mu, 3);
        let ell1 = &d_big * &d_big * &h0 * &h0 / &mu + big_int_rat(20);
        if !ell1.is_integer() {
            return Err(EmbedderError::BadConstants(format!(
                "ell1 = {ell1} is not an integer; pick mu so the formulas close"
            )));
        }
        let exponent = ell1
            .to_integer()
            .to_u64()
            .filter(|&e| e <= PAPER_EXPONENT_CAP)
            .ok_or_else(|| {
                EmbedderError::BadConstants(format!(
                    "ell1 = {ell1} exceeds the materialisation cap {PAPER_EXPONENT_CAP}"
                ))
            })?;
        let h1 = big_int_rat(2)
            * BigRat::from_integer(BigInt::from(max_degree).pow(exponent as u32));
        let d = BigRat::new(BigInt::one(), BigInt::from(2 * colours as i64));
        let kappa = pow_rat(&d, degeneracy as u32) / (big_int_rat(20) * &h1 * &k);
        let rho = pow_rat(&d, degeneracy as u32) / (big_int_rat(4) * &k0);
        let pack = ConstantsPack {
            mode: ConstantsMode::Paper,
            degeneracy,
            max_degree,
            colours,
            mu,
            d,
            h0,
            ell1,
            h1,
            kappa,
            rho,
            k,
            k0,
        };
        pack.validate()?;
        Ok(pack)
    }

    /// A practical pack: only h1 >= Delta + 1 and 0 < d, kappa, rho < 1 are
    /// enforced, everything else is the caller's choice.
    #[allow(clippy::too_many_arguments)]
    pub fn practical(
        degeneracy: usize,
        max_degree: usize,
        colours: usize,
        mu: BigRat,
        h0: usize,
        ell1: usize,
        h1: usize,
        kappa: BigRat,
        rho: BigRat,
        k: BigRat,
    ) -> Result<Self, EmbedderError> {
        let d = BigRat::new(BigInt::one(), BigInt::from(2 * colours.max(1) as i64));
        let pack = ConstantsPack {
            mode: ConstantsMode::Practical,
            degeneracy,
            max_degree,
            colours,
            mu,
            d,
            h0: big_int_rat(h0),
            ell1: big_int_rat(ell1),
            h1: big_int_rat(h1),
            kappa,
            rho,
            k: k.clone(),
            k0: k,
        };
        pack.validate()?;
        Ok(pack)
    }

    /// Recomputes the mode's invariants from scratch.
    pub fn validate(&self) -> Result<(), EmbedderError> {
        if self.mu <= BigRat::zero() {
            return Err(EmbedderError::BadConstants("mu must be positive".into()));
        }
        match self.mode {
            ConstantsMode::Paper => {
                let d_big = big_int_rat(self.degeneracy);
                let h0 = big_int_rat(16) * pow_rat(&d_big, 5) / pow_rat(&self.mu, 3);
                if h0 != self.h0 {
                    return Err(EmbedderError::BadConstants("h0 formula violated".into()));
                }
                let ell1 = &d_big * &d_big * &self.h0 * &self.h0 / &self.mu + big_int_rat(20);
                if ell1 != self.ell1 {
                    return Err(EmbedderError::BadConstants("ell1 formula violated".into()));
                }
                let exponent = self
                    .ell1
                    .to_integer()
                    .to_u64()
                    .ok_or_else(|| EmbedderError::BadConstants("ell1 not integral".into()))?;
                let h1 = big_int_rat(2)
                    * BigRat::from_integer(BigInt::from(self.max_degree).pow(exponent as u32));
                if h1 != self.h1 {
                    return Err(EmbedderError::BadConstants("h1 formula violated".into()));
                }
                let d = BigRat::new(BigInt::one(), BigInt::from(2 * self.colours as i64));
                if d != self.d {
                    return Err(EmbedderError::BadConstants("d formula violated".into()));
                }
                let kappa = pow_rat(&self.d, self.degeneracy as u32)
                    / (big_int_rat(20) * &self.h1 * &self.k);
                if kappa != self.kappa {
                    return Err(EmbedderError::BadConstants("kappa formula violated".into()));
                }
                let rho =
                    pow_rat(&self.d, self.degeneracy as u32) / (big_int_rat(4) * &self.k0);
                if rho != self.rho {
                    return Err(EmbedderError::BadConstants("rho formula violated".into()));
                }
            }
            ConstantsMode::Practical => {
                if self.h1 < big_int_rat(self.max_degree + 1) {
                    return Err(EmbedderError::BadConstants(format!(
                        "h1 = {} must be at least Delta + 1 = {}",
                        self.h1,
                        self.max_degree + 1
                    )));
                }
                for (name, value) in
                    [("d", &self.d), ("kappa", &self.kappa), ("rho", &self.rho)]
                {
                    if value <= &BigRat::zero() || value >= &BigRat::one() {
                        return Err(EmbedderError::BadConstants(format!(
                            "{name} = {value} must lie strictly between 0 and 1"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ell1_usize(&self) -> Result<usize, EmbedderError> {
        rat_usize(&self.ell1, "ell1")
    }

    pub fn h1_usize(&self) -> Result<usize, EmbedderError> {
        rat_usize(&self.h1, "h1")
    }

    pub fn h0_usize(&self) -> Result<usize, EmbedderError> {
        rat_usize(&self.h0, "h0")
    }

    pub fn d_f64(&self) -> f64 {
        rat_to_f64(&self.d)
    }

    pub fn kappa_f64(&self) -> f64 {
        rat_to_f64(&self.kappa)
    }

    pub fn rho_f64(&self) -> f64 {
        rat_to_f64(&self.rho)
    }

    /// mu as a small rational for the density oracles.
    pub fn mu_rat64(&self) -> Result<num_rational::Rational64, EmbedderError> {
        let num = self
            .mu
            .numer()
            .to_i64()
            .ok_or_else(|| EmbedderError::BadConstants("mu too large".into()))?;
        let den = self
            .mu
            .denom()
            .to_i64()
            .ok_or_else(|| EmbedderError::BadConstants("mu too large".into()))?;
        Ok(num_rational::Rational64::new(num, den))
    }

    /// The Q length used in maxdegree mode: 2/mu rounded to the nearest even
    /// integer, at least 4.
    pub fn segment_length(&self) -> usize {
        let two_over_mu = rat_to_f64(&(big_int_rat(2) / &self.mu));
        let rounded = 2 * (two_over_mu / 2.0).round() as usize;
        rounded.max(4)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mode": match self.mode { ConstantsMode::Paper => "paper", ConstantsMode::Practical => "practical" },
            "degeneracy": self.degeneracy,
            "max_degree": self.max_degree,
            "colours": self.colours,
            "mu": self.mu.to_string(),
            "d": self.d.to_string(),
            "h0": self.h0.to_string(),
            "ell1": self.ell1.to_string(),
            "h1": self.h1.to_string(),
            "kappa": self.kappa.to_string(),
            "rho": self.rho.to_string(),
            "k": self.k.to_string(),
            "k0": self.k0.to_string(),
        })
    }

    /// Parses a practical pack from the CLI JSON shape.
    pub fn from_json(value: &serde_json::Value) -> Result<Self, EmbedderError> {
        let rat = |field: &str| -> Result<BigRat, EmbedderError> {
            let v = value
                .get(field)
                .ok_or_else(|| EmbedderError::BadConstants(format!("missing field {field}")))?;
            let s = match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            parse_rational(&s)
                .map_err(|e| EmbedderError::BadConstants(format!("field {field}: {e}")))
        };
        let int = |field: &str| -> Result<usize, EmbedderError> {
            let v = value
                .get(field)
                .ok_or_else(|| EmbedderError::BadConstants(format!("missing integer {field}")))?;
            match v {
                serde_json::Value::Number(n) => n.as_u64().map(|v| v as usize),
                serde_json::Value::String(s) => s.parse().ok(),
                _ => None,
            }
            .ok_or_else(|| EmbedderError::BadConstants(format!("bad integer {field}")))
        };
        ConstantsPack::practical(
            int("degeneracy")?,
            int("max_degree")?,
            int("colours")?,
            rat("mu")?,
            int("h0")?,
            int("ell1")?,
            int("h1")?,
            rat("kappa")?,
            rat("rho")?,
            rat("k")?,
        )
    }
}

fn pow_rat(base: &BigRat, exp: u32) -> BigRat {
    let mut acc = BigRat::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

fn rat_usize(r: &BigRat, name: &str) -> Result<usize, EmbedderError> {
    if !r.is_integer() || r.is_negative() {
        return Err(EmbedderError::BadConstants(format!("{name} = {r} is not a small integer")));
    }
    r.to_integer()
        .to_usize()
        .ok_or_else(|| EmbedderError::BadConstants(format!("{name} = {r} does not fit usize")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularity::big_rat;

    #[test]
    fn paper_formulas_hold_exactly() {
        // mu = 2 keeps ell1 materialisable: h0 = 16/8 * D^5 = 2, ell1 = 22.
        let pack = ConstantsPack::paper(
            1,
            2,
            2,
            big_rat(2, 1),
            big_rat(8, 1),
            big_rat(8, 1),
        )
        .unwrap();
        assert_eq!(pack.h0, big_rat(2, 1));
        assert_eq!(pack.ell1, big_rat(22, 1));
        // h1 = 2 * 2^22.
        assert_eq!(pack.h1, big_rat(2 * (1 << 22), 1));
        assert_eq!(pack.d, big_rat(1, 4));
        // kappa = d / (20 h1 K), rho = d / (4 K0).
        assert_eq!(pack.kappa, &pack.d / (big_rat(20, 1) * &pack.h1 * big_rat(8, 1)));
        assert_eq!(pack.rho, &pack.d / (big_rat(4, 1) * big_rat(8, 1)));
        pack.validate().unwrap();
    }

    #[test]
    fn paper_mode_rejects_non_integer_ell1() {
        // mu = 3: h0 = 16 D^5 / 27 is not an integer and ell1 fails too.
        let out = ConstantsPack::paper(1, 2, 1, big_rat(3, 1), big_rat(4, 1), big_rat(4, 1));
        assert!(out.is_err());
    }

    #[test]
    fn practical_structural_constraints() {
        let ok = ConstantsPack::practical(
            2,
            4,
            2,
            big_rat(1, 2),
            6,
            1,
            5,
            big_rat(1, 10),
            big_rat(1, 100),
            big_rat(4, 1),
        );
        assert!(ok.is_ok());
        let bad_h1 = ConstantsPack::practical(
            2,
            4,
            2,
            big_rat(1, 2),
            6,
            1,
            4,
            big_rat(1, 10),
            big_rat(1, 100),
            big_rat(4, 1),
        );
        assert!(bad_h1.is_err());
        let bad_kappa = ConstantsPack::practical(
            2,
            4,
            2,
            big_rat(1, 2),
            6,
            1,
            5,
            big_rat(3, 2),
            big_rat(1, 100),
            big_rat(4, 1),
        );
        assert!(bad_kappa.is_err());
    }

    #[test]
    fn segment_length_rounds_to_even() {
        let pack = |mu: BigRat| {
            ConstantsPack::practical(
                2,
                3,
                2,
                mu,
                6,
                1,
                5,
                big_rat(1, 10),
                big_rat(1, 100),
                big_rat(4, 1),
            )
            .unwrap()
        };
        assert_eq!(pack(big_rat(1, 2)).segment_length(), 4);
        assert_eq!(pack(big_rat(1, 3)).segment_length(), 6);
        // 2/mu = 5 sits between the even integers 4 and 6.
        assert_eq!(pack(big_rat(2, 5)).segment_length(), 6);
        assert_eq!(pack(big_rat(1, 1)).segment_length(), 4);
    }

    #[test]
    fn json_round_trip() {
        let pack = ConstantsPack::practical(
            2,
            4,
            2,
            big_rat(1, 2),
            6,
            1,
            5,
            big_rat(1, 10),
            big_rat(1, 100),
            big_rat(4, 1),
        )
        .unwrap();
        let json = pack.to_json();
        let back = ConstantsPack::from_json(&json).unwrap();
        assert_eq!(back.kappa, pack.kappa);
        assert_eq!(back.h1, pack.h1);
    }
}

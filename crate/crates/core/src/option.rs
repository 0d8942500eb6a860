use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PayoffKind {
    Put,
    Call,
}

impl PayoffKind {
    pub fn payoff(&self, s: f64, strike: f64) -> f64 {
        match self {
            PayoffKind::Put => (strike - s).max(0.0),
            PayoffKind::Call => (s - strike).max(0.0),
        }
    }
}

impl std::str::FromStr for PayoffKind {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "put" => Ok(PayoffKind::Put),
            "call" => Ok(PayoffKind::Call),
            other => Err(crate::Error::Config(format!("unknown payoff `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exercise {
    European,
    /// `dates` equally spaced exercise dates ending at maturity.
    Bermudan { dates: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionSpec {
    pub kind: PayoffKind,
    pub strike: f64,
    pub maturity: f64,
    pub exercise: Exercise,
}

impl OptionSpec {
    pub fn new(kind: PayoffKind, strike: f64, maturity: f64, exercise: Exercise) -> Result<Self> {
        if !(strike > 0.0 && strike.is_finite()) {
            return Err(invalid("strike", format!("must be > 0, got {strike}")));
        }
        if !(maturity > 0.0 && maturity.is_finite()) {
            return Err(invalid("maturity", format!("must be > 0, got {maturity}")));
        }
        if let Exercise::Bermudan { dates: 0 } = exercise {
            return Err(invalid("dates", "a Bermudan contract needs at least one exercise date"));
        }
        Ok(Self {
            kind,
            strike,
            maturity,
            exercise,
        })
    }

    pub fn european(kind: PayoffKind, strike: f64, maturity: f64) -> Result<Self> {
        Self::new(kind, strike, maturity, Exercise::European)
    }

    pub fn bermudan(kind: PayoffKind, strike: f64, maturity: f64, dates: u32) -> Result<Self> {
        Self::new(kind, strike, maturity, Exercise::Bermudan { dates })
    }

    pub fn dates(&self) -> u32 {
        match self.exercise {
            Exercise::European => 1,
            Exercise::Bermudan { dates } => dates,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_contracts() {
        assert!(OptionSpec::bermudan(PayoffKind::Put, 9.0, 1.0, 0).is_err());
        assert!(OptionSpec::european(PayoffKind::Put, -1.0, 1.0).is_err());
        assert!(OptionSpec::european(PayoffKind::Call, 1.0, 0.0).is_err());
        assert_eq!(OptionSpec::european(PayoffKind::Call, 1.0, 1.0).unwrap().dates(), 1);
    }

    #[test]
    fn payoffs() {
        assert_eq!(PayoffKind::Put.payoff(8.0, 9.0), 1.0);
        assert_eq!(PayoffKind::Call.payoff(8.0, 9.0), 0.0);
    }
}

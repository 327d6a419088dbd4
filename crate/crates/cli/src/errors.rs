//! Error plumbing: every failure is classified as a configuration problem
//! (exit 2), a numeric failure (exit 3), or an I/O failure (exit 3), and is
//! reported on stderr as a one-line JSON record.

use bdc_core::capacity::CapacityError;
use bdc_core::channelsim::SimError;
use bdc_core::circular::CircularError;
use bdc_core::toeplitz::ToeplitzError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Config,
    Numeric,
    Io,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            kind: Kind::Config,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self {
            kind: Kind::Numeric,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            Kind::Config => 2,
            Kind::Numeric | Kind::Io => 3,
        }
    }

    /// One-line machine-parseable record for stderr.
    pub fn record(&self) -> String {
        let kind = match self.kind {
            Kind::Config => "config",
            Kind::Numeric => "numeric",
            Kind::Io => "io",
        };
        serde_json::json!({ "error": kind, "message": self.message }).to_string()
    }
}

impl From<CircularError> for CliError {
    fn from(e: CircularError) -> Self {
        let kind = match e {
            CircularError::DivergentEntropy { .. } | CircularError::Numeric(_) => Kind::Numeric,
            _ => Kind::Config,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<ToeplitzError> for CliError {
    fn from(e: ToeplitzError) -> Self {
        let kind = match e {
            ToeplitzError::NotHermitian { .. }
            | ToeplitzError::NoConvergence { .. }
            | ToeplitzError::NegativeEigenvalue(_) => Kind::Numeric,
            ToeplitzError::Io(_) => Kind::Io,
            _ => Kind::Config,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<CapacityError> for CliError {
    fn from(e: CapacityError) -> Self {
        match e {
            CapacityError::Circular(inner) => inner.into(),
            CapacityError::Toeplitz(inner) => inner.into(),
            CapacityError::BesselOverflow { .. } | CapacityError::Invariant(_) => {
                Self::numeric(e.to_string())
            }
            CapacityError::BadEta(_) | CapacityError::BadOrder(_) => Self::config(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Spectral(inner) => inner.into(),
            SimError::Io(_) => Self {
                kind: Kind::Io,
                message: e.to_string(),
            },
            _ => Self::config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self {
            kind: Kind::Io,
            message: e.to_string(),
        }
    }
}

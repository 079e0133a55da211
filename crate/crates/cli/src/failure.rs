use qobdd_core::solver::SolveError;
use qobdd_core::strategy::StrategyError;
use qobdd_core::{ObddError, RejectReason};

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub const USAGE: u8 = 1;
    pub const CHECK: u8 = 2;
    pub const EXPECTATION: u8 = 3;
    pub const BUDGET: u8 = 4;

    pub fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: Self::USAGE,
            message: message.into(),
        }
    }

    pub fn check(message: impl Into<String>) -> Failure {
        Failure {
            code: Self::CHECK,
            message: message.into(),
        }
    }

    pub fn expectation(message: impl Into<String>) -> Failure {
        Failure {
            code: Self::EXPECTATION,
            message: message.into(),
        }
    }

    pub fn budget(message: impl Into<String>) -> Failure {
        Failure {
            code: Self::BUDGET,
            message: message.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::usage(format!("{e:#}"))
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::BudgetExceeded(_) | SolveError::Obdd(ObddError::BudgetExceeded(_)) => {
                Failure::budget(e.to_string())
            }
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<StrategyError> for Failure {
    fn from(e: StrategyError) -> Self {
        match e {
            StrategyError::Obdd(ObddError::BudgetExceeded(_)) => Failure::budget(e.to_string()),
            StrategyError::Rejected(ref r) if r.reason == RejectReason::BudgetExceeded => {
                Failure::budget(e.to_string())
            }
            StrategyError::NotRefutation | StrategyError::Rejected(_) => Failure::check(e.to_string()),
            other => Failure::usage(other.to_string()),
        }
    }
}

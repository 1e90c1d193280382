use hnp_core::Error;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Everything that can stop a command, with its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Malformed input text (position-annotated).
    Parse(String),
    /// Well-formed input that violates the schema.
    Schema(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Parse(_) => "ParseError",
            Failure::Schema(_) => "SchemaError",
            Failure::Core(e) => match e {
                Error::SpecInvalid(_) => "SpecInvalid",
                Error::OrderBudgetExceeded { .. } => "OrderBudgetExceeded",
                Error::NotPrime(_) => "NotPrime",
                Error::PreconditionFailed(_) => "PreconditionFailed",
                Error::SearchBudgetExceeded(_) => "SearchBudgetExceeded",
                Error::EmptyFamily => "EmptyFamily",
                Error::GroupMismatch(_) => "GroupMismatch",
                Error::BudgetExceeded { .. } => "BudgetExceeded",
                Error::NotCyclic => "NotCyclic",
                Error::HypothesisViolated(_) => "HypothesisViolated",
                Error::CertificateUnavailable(_) => "CertificateUnavailable",
                Error::NotCoprime { .. } => "NotCoprime",
                Error::Overflow => "Overflow",
            },
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Parse(m) | Failure::Schema(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }

    /// 1: the mathematics refuses; 2: a resource limit was hit; 3: bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(
                Error::HypothesisViolated(_) | Error::CertificateUnavailable(_) | Error::NotCyclic,
            ) => 1,
            Failure::Core(
                Error::BudgetExceeded { .. }
                | Error::SearchBudgetExceeded(_)
                | Error::OrderBudgetExceeded { .. }
                | Error::Overflow,
            ) => 2,
            _ => 3,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Default, Serialize)]
pub struct Provenance {
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub budgets: Value,
    /// The only field that may differ between identical runs.
    pub timing_ms: u128,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Value,
    pub inputs_digest: String,
    pub exit_code: i32,
    pub results: Value,
    pub provenance: Provenance,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

/// What a command hands back on success.
#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Value,
    pub method: Option<String>,
    pub budgets: Value,
    pub warnings: Vec<String>,
    /// Non-zero when the command ran to completion but is not conclusive.
    pub exit_code: i32,
}

/// sha256 of the canonical (key-sorted, compact) JSON of the inputs.
pub fn digest(inputs: &Value) -> String {
    let bytes = serde_json::to_vec(inputs).expect("JSON values serialize");
    hex::encode(Sha256::digest(&bytes))
}

impl Report {
    pub fn assemble(command: Value, inputs: &Value, outcome: Result<Outcome, Failure>, timing_ms: u128) -> Report {
        let inputs_digest = digest(inputs);
        let version = env!("CARGO_PKG_VERSION");
        match outcome {
            Ok(o) => Report {
                command,
                inputs_digest,
                exit_code: o.exit_code,
                results: o.results,
                provenance: Provenance {
                    version,
                    method: o.method,
                    budgets: o.budgets,
                    timing_ms,
                },
                warnings: o.warnings,
                error: None,
            },
            Err(f) => Report {
                command,
                inputs_digest,
                exit_code: f.exit_code(),
                results: Value::Null,
                provenance: Provenance {
                    version,
                    timing_ms,
                    ..Default::default()
                },
                warnings: vec![],
                error: Some(ErrorInfo {
                    kind: f.kind(),
                    message: f.message(),
                }),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::Core(Error::HypothesisViolated("x".into())).exit_code(), 1);
        assert_eq!(Failure::Core(Error::Overflow).exit_code(), 2);
        assert_eq!(Failure::Core(Error::NotPrime(4)).exit_code(), 3);
        assert_eq!(Failure::Schema("x".into()).exit_code(), 3);
    }

    #[test]
    fn digest_ignores_key_order() {
        let a: Value = serde_json::from_str(r#"{"b":1,"a":[1,2]}"#).unwrap();
        assert_eq!(digest(&a), digest(&json!({"a": [1, 2], "b": 1})));
        assert_ne!(digest(&a), digest(&json!({"a": [2, 1], "b": 1})));
    }
}

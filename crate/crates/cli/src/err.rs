//! Configuration-level errors: anything that prevents a run from starting.
//! These exit with status 2 and a structured `{"error": …}` document;
//! failures *inside* an established run are FAIL verdicts instead (exit 1).

use crate::report::Json;
use std::fmt;

#[derive(Debug, Clone)]
pub struct CliError {
    pub code: String,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> CliError {
        CliError { code: "CONFIG_PARSE".into(), message: message.into() }
    }

    pub fn file(flag: &str, path: &str, cause: &std::io::Error) -> CliError {
        CliError {
            code: "FILE_NOT_FOUND".into(),
            message: format!("{flag}: cannot read '{path}': {cause}"),
        }
    }

    pub fn scale(message: impl Into<String>) -> CliError {
        CliError { code: "SCALE_EXCEEDED".into(), message: message.into() }
    }

    pub fn to_json(&self) -> Json {
        Json::Obj(vec![(
            "error".into(),
            Json::Obj(vec![
                ("code".into(), Json::Str(self.code.clone())),
                ("message".into(), Json::Str(self.message.clone())),
            ]),
        )])
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for CliError {}

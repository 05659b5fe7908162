use serde::Serialize;
use serde_json::Value;

pub const EXIT_OK: u8 = 0;
pub const EXIT_REFUTED: u8 = 1;
pub const EXIT_UNDECIDED: u8 = 2;
pub const EXIT_USAGE: u8 = 3;
pub const EXIT_IO: u8 = 4;

/// What a command produced. `text` is the human rendering; the other fields
/// form the `--json` report.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub exit_status: u8,
    #[serde(skip)]
    pub text: String,
}

impl RunReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<fcone_core::Error> for Failure {
    fn from(e: fcone_core::Error) -> Self {
        Self::usage(e.to_string())
    }
}

pub fn read_json(path: &std::path::Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    })?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("{}: invalid JSON: {e}", path.display())))
}

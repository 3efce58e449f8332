//! Exit codes and the error type carried to `main`.

use std::fmt;

pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Failure::new(EXIT_CONFIG, message)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<pcsteiner::Error> for Failure {
    fn from(e: pcsteiner::Error) -> Self {
        use pcsteiner::Error::*;
        let code = match &e {
            Parse(_) | Json(_) | Io(_) => EXIT_PARSE,
            Capacity(_) => EXIT_CAPACITY,
            Domain(_) | Precondition(_) => EXIT_CONFIG,
            Internal(_) => EXIT_VERIFY,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_PARSE, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::new(EXIT_PARSE, e.to_string())
    }
}

pub type CliResult<T> = Result<T, Failure>;

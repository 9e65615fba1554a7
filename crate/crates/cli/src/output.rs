use std::path::Path;

use clonekit::Error;
use serde_json::{json, Value};

pub const NEGATIVE: u8 = 1;
pub const INPUT: u8 = 2;
pub const RESOURCE: u8 = 3;

/// A finished command: text and JSON renderings of the same result.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub negative: bool,
}

impl Report {
    pub fn new(text: impl Into<String>, json: Value) -> Self {
        Report {
            text: text.into(),
            json,
            negative: false,
        }
    }

    pub fn negative(mut self, negative: bool) -> Self {
        self.negative = negative;
        self
    }

    pub fn code(&self) -> u8 {
        if self.negative {
            NEGATIVE
        } else {
            0
        }
    }

    pub fn print(&self, json: bool) {
        if json {
            println!(
                "{}",
                serde_json::to_string_pretty(&self.json).expect("reports serialize")
            );
        } else {
            let text = self.text.trim_end();
            println!("{text}");
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: INPUT,
            message: message.into(),
        }
    }

    pub fn print(&self, json: bool) {
        if json {
            let v = json!({ "error": self.message, "exit_code": self.code });
            println!("{}", serde_json::to_string_pretty(&v).expect("errors serialize"));
        } else {
            eprintln!("error: {}", self.message);
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceLimit { .. } => RESOURCE,
            Error::InsufficientRelation { .. } | Error::RepCounterexample { .. } => NEGATIVE,
            _ => INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Reads and parses a file, prefixing errors with its path.
pub fn load<T>(path: &Path, parse: impl FnOnce(&str) -> clonekit::Result<T>) -> Result<T, Failure> {
    let text = read(path)?;
    parse(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

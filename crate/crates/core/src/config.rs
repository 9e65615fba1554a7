//! Resource caps and run configuration.
//!
//! Every exponential enumeration in the crate checks its size against a
//! [`Limits`] value before starting. Exceeding a cap is reported as
//! [`Error::ResourceLimit`](crate::Error::ResourceLimit), never by silent
//! truncation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Caps on the sizes of brute-force enumerations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    /// Largest operation table (`t^n` entries) or relation arity built from one.
    pub max_table_len: usize,
    /// Largest number of tables in a single clone layer.
    pub max_layer_size: usize,
    /// Longest word scanned by bounded minimal-element searches.
    pub max_word_len: usize,
    /// Largest candidate space for brute-force filters (`t^(t^n)`, `2^(t^j)`, `|G|^l`).
    pub max_bruteforce: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_table_len: 1 << 20,
            max_layer_size: 1_000_000,
            max_word_len: 12,
            max_bruteforce: 1 << 20,
        }
    }
}

/// Full run configuration as read by the command-line front end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub max_layer_size: usize,
    pub max_word_len: usize,
    pub max_bruteforce_functions: usize,
    pub max_table_len: usize,
    pub thread_count: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        let limits = Limits::default();
        Config {
            max_layer_size: limits.max_layer_size,
            max_word_len: limits.max_word_len,
            max_bruteforce_functions: limits.max_bruteforce,
            max_table_len: limits.max_table_len,
            thread_count: 1,
            seed: 0x5eed,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("max_layer_size", self.max_layer_size),
            ("max_word_len", self.max_word_len),
            ("max_bruteforce_functions", self.max_bruteforce_functions),
            ("max_table_len", self.max_table_len),
            ("thread_count", self.thread_count),
        ];
        for (name, value) in fields {
            if value == 0 {
                return Err(Error::InvalidInput(format!("config field {name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn limits(&self) -> Limits {
        Limits {
            max_table_len: self.max_table_len,
            max_layer_size: self.max_layer_size,
            max_word_len: self.max_word_len,
            max_bruteforce: self.max_bruteforce_functions,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Config = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }
}

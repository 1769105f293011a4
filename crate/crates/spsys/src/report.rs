//! Machine-readable run reports for the command-line tool.
//!
//! A report carries the command echo, an optional digest of the input
//! file, and a `results` object whose rationals are exact (`num`/`den`
//! strings with an advisory float alongside). Wall-clock duration is
//! opt-in: with it omitted, identical runs produce byte-identical reports.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// One tool invocation's outcome, serialized as pretty JSON.
#[derive(Serialize, Debug)]
pub struct RunReport {
    tool: &'static str,
    version: &'static str,
    command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_digest: Option<String>,
    results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    duration_seconds: Option<f64>,
}

impl RunReport {
    pub fn new(command: Vec<String>, results: Value) -> Self {
        RunReport {
            tool: "spsys",
            version: env!("CARGO_PKG_VERSION"),
            command,
            input_digest: None,
            results,
            duration_seconds: None,
        }
    }

    /// Records the SHA-256 of the raw input file the run consumed.
    pub fn with_input_digest(mut self, hex: String) -> Self {
        self.input_digest = Some(hex);
        self
    }

    /// Adds wall-clock duration. Reports with a duration are not
    /// byte-reproducible, so callers only attach it on request.
    pub fn with_duration(mut self, seconds: f64) -> Self {
        self.duration_seconds = Some(seconds);
        self
    }

    pub fn results(&self) -> &Value {
        &self.results
    }

    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut out =
            serde_json::to_string_pretty(self).expect("reports contain only plain data");
        out.push('\n');
        out
    }
}

/// Lowercase hex SHA-256 of arbitrary bytes.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rendering_is_deterministic_and_omits_empty_fields() {
        let make = || {
            RunReport::new(
                vec!["spsys".into(), "lemmas".into(), "--max".into(), "10".into()],
                json!({"violations": 0}),
            )
        };
        let a = make().render();
        let b = make().render();
        assert_eq!(a, b);
        assert!(a.ends_with('\n'));
        assert!(!a.contains("duration_seconds"));
        assert!(!a.contains("input_digest"));

        let timed = make().with_duration(0.25).render();
        assert!(timed.contains("duration_seconds"));
    }

    #[test]
    fn digest_is_stable_sha256() {
        // Independently computable: sha256("abc").
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}

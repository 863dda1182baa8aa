use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const TOOL: &str = "spikeinfo";

/// One JSON object per invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// The arguments the command ran with, defaults filled in.
    pub config: Value,
    pub result: Value,
}

impl Report {
    pub fn new(command: &str, config: Value, result: Value) -> Self {
        Self {
            tool: TOOL.to_string(),
            version: spikeinfo::VERSION.to_string(),
            command: command.to_string(),
            config,
            result,
        }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}

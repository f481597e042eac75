//! Report emission: plain text for humans, a machine-readable JSON block
//! for scripts, deterministic byte-for-byte given identical inputs.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Both,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "both" => Ok(Format::Both),
            other => anyhow::bail!("unknown format '{other}' (text|json|both)"),
        }
    }
}

/// Exit-code convention: 0 = success / condition holds; 1 = checked false
/// with a certificate; 2 = operational failure (handled by `main`).
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub ok: bool,
    pub text: String,
    pub data: Value,
}

impl Report {
    pub fn new(command: &str, ok: bool, text: String, data: Value) -> Self {
        Report {
            command: command.to_string(),
            ok,
            text,
            data,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            1
        }
    }

    pub fn json(&self) -> Value {
        json!({
            "command": self.command,
            "ok": self.ok,
            "exit": self.exit_code(),
            "data": self.data,
        })
    }

    pub fn render(&self, format: Format) -> String {
        let json_block = serde_json::to_string_pretty(&self.json()).expect("serializable");
        match format {
            Format::Text => format!("{}\n", self.text.trim_end()),
            Format::Json => format!("{json_block}\n"),
            Format::Both => format!("{}\n\n{json_block}\n", self.text.trim_end()),
        }
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<()> {
        let rendered = self.render(format);
        print!("{rendered}");
        std::io::stdout().flush().ok();
        if let Some(path) = out {
            std::fs::write(path, rendered)
                .with_context(|| format!("writing report to {}", path.display()))?;
        }
        Ok(())
    }
}

//! Artifact writing: atomic, with the effective config echoed into every
//! output (a `# config:` comment line ahead of CSV headers, an embedded field
//! in JSON documents, a sidecar for binary dumps).

use anyhow::{Context, Result};
use std::path::{Path, PathBuf};

pub struct OutDir {
    root: PathBuf,
    echo: String,
}

impl OutDir {
    pub fn create(root: &Path, echo: String) -> Result<Self> {
        std::fs::create_dir_all(root)
            .with_context(|| format!("creating output directory {}", root.display()))?;
        let out = OutDir { root: root.to_path_buf(), echo };
        out.write_raw("effective_config.json", out.echo.as_bytes())?;
        Ok(out)
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    /// Write bytes atomically (temp file, then rename).
    pub fn write_raw(&self, name: &str, bytes: &[u8]) -> Result<()> {
        let target = self.root.join(name);
        let tmp = self.root.join(format!("{name}.tmp"));
        std::fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
        std::fs::rename(&tmp, &target)
            .with_context(|| format!("renaming into {}", target.display()))?;
        Ok(())
    }

    /// CSV with the config comment ahead of the header row.
    pub fn write_csv(&self, name: &str, csv: &str) -> Result<()> {
        let body = format!("# config: {}\n{csv}", self.echo);
        self.write_raw(name, body.as_bytes())
    }

    /// Pretty JSON with the effective config embedded under `config_echo`.
    pub fn write_json<T: serde::Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let mut doc = serde_json::to_value(value)?;
        if let serde_json::Value::Object(map) = &mut doc {
            map.insert(
                "config_echo".into(),
                serde_json::from_str(&self.echo).unwrap_or(serde_json::Value::Null),
            );
        }
        let body = serde_json::to_string_pretty(&doc)?;
        self.write_raw(name, body.as_bytes())
    }
}

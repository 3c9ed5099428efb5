use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use smoothwig::io::atomic_write;

use crate::config::ExperimentConfig;

/// Creates `dir` and echoes the resolved config into it.
pub fn prepare_dir(dir: &Path, cfg: &ExperimentConfig) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    atomic_write(&dir.join("config.toml"), cfg.to_toml().as_bytes())?;
    Ok(())
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    atomic_write(path, text.as_bytes())?;
    Ok(())
}

use std::path::Path;

use serde::de::DeserializeOwned;
use vqpe_core::{Result, VqpeError};

/// Optional JSON config mirroring the CLI flags, one object per subcommand;
/// flags always win over config values.
#[derive(Debug, Clone, Default)]
pub struct Config {
    root: serde_json::Value,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            VqpeError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?;
        let root = serde_json::from_str(&text).map_err(|e| VqpeError::Parse {
            path: path.display().to_string(),
            detail: e.to_string(),
        })?;
        Ok(Self { root })
    }

    /// Look up `command.key`, deserializing into the requested type.
    pub fn get<T: DeserializeOwned>(&self, command: &str, key: &str) -> Option<T> {
        self.root
            .get(command)
            .and_then(|section| section.get(key))
            .cloned()
            .and_then(|v| serde_json::from_value(v).ok())
    }
}

/// flag > config > default resolution for one parameter.
pub fn resolve<T: DeserializeOwned + Clone>(
    flag: Option<T>,
    cfg: &Config,
    command: &str,
    key: &str,
    default: T,
) -> T {
    flag.or_else(|| cfg.get(command, key)).unwrap_or(default)
}

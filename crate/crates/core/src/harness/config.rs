//! `key = value` configuration files. Keys are long flag names without the
//! leading dashes; blank lines and `#` comments are ignored.

use crate::error::{Error, Result};

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            row: i + 1,
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(Error::Parse {
                row: i + 1,
                msg: format!("bad key `{key}`"),
            });
        }
        out.push((key.replace('_', "-"), value.trim().to_string()));
    }
    Ok(out)
}

/// Flags equivalent to a config file, to be placed before the command-line
/// flags so the latter win.
pub fn config_args(pairs: &[(String, String)]) -> Vec<String> {
    pairs
        .iter()
        .map(|(k, v)| format!("--{k}={v}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let text = "# run\ntrials = 2000\n\nhorizons=20,130  # two\nbase_seed = 7\n";
        let pairs = parse_config(text).unwrap();
        assert_eq!(
            pairs,
            vec![
                ("trials".into(), "2000".into()),
                ("horizons".into(), "20,130".into()),
                ("base-seed".into(), "7".into()),
            ]
        );
        assert_eq!(config_args(&pairs)[1], "--horizons=20,130");
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(parse_config("ok = 1\nnonsense\n"), Err(Error::Parse { row: 2, .. })));
        assert!(parse_config("a b = 1").is_err());
    }
}

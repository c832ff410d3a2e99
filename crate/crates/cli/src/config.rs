//! Flag merging with `--config` files, grid specs and the thread cap.

use std::ffi::OsString;
use std::fs;
use std::str::FromStr;

use crate::output::{CliError, CliResult};

pub const THREADS_ENV: &str = "PHOTON_SCATTER_THREADS";

/// Sample grid `name:start:stop:points`, both ends included.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, start, stop, points] = parts[..] else {
            return Err(format!("grid `{s}` must look like name:start:stop:points"));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("grid `{s}`: `{t}` is not a number"))
        };
        let (start, stop) = (num(start)?, num(stop)?);
        if !(start.is_finite() && stop.is_finite()) {
            return Err(format!("grid `{s}`: ends must be finite"));
        }
        let points: usize = points
            .trim()
            .parse()
            .map_err(|_| format!("grid `{s}`: point count must be a whole number"))?;
        if points < 2 {
            return Err(format!("grid `{s}`: need at least 2 points"));
        }
        Ok(Grid {
            name: name.trim().to_string(),
            start,
            stop,
            points,
        })
    }
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }

    /// Integer lattice sites; every grid point must be a whole number.
    pub fn sites(&self) -> CliResult<Vec<i64>> {
        self.values()
            .into_iter()
            .map(|v| {
                let r = v.round();
                if (v - r).abs() > 1e-9 {
                    Err(CliError::Config(format!(
                        "grid `{}` must land on integer sites, got {v}",
                        self.name
                    )))
                } else {
                    Ok(r as i64)
                }
            })
            .collect()
    }
}

/// Pick the grids for the named variables, in order.
pub fn expect_grids<'a>(grids: &'a [Grid], names: &[&str]) -> CliResult<Vec<&'a Grid>> {
    if grids.len() != names.len() {
        return Err(CliError::Config(format!(
            "expected {} --grid option(s) for {}, got {}",
            names.len(),
            names.join(", "),
            grids.len()
        )));
    }
    names
        .iter()
        .map(|n| {
            grids
                .iter()
                .find(|g| g.name == *n)
                .ok_or_else(|| CliError::Config(format!("missing --grid {n}:start:stop:points")))
        })
        .collect()
}

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config(format!(
                "config line {}: expected key = value",
                n + 1
            )));
        };
        let key = k.trim();
        if key.is_empty() || key.starts_with('-') || key == "config" {
            return Err(CliError::Config(format!(
                "config line {}: bad key `{key}`",
                n + 1
            )));
        }
        out.push((key.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Apply a `--config` file: every key in the file replaces the flags of the
/// same name given on the command line. Returns the argument list for clap.
pub fn merge_config(args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = Some(
                it.next()
                    .ok_or_else(|| CliError::Config("--config needs a path".into()))?,
            );
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = fs::read_to_string(&path).map_err(|e| {
        CliError::Config(format!(
            "cannot read config {}: {e}",
            path.to_string_lossy()
        ))
    })?;
    let entries = parse_config(&text)?;
    let replaced: Vec<String> = entries.iter().map(|(k, _)| format!("--{k}")).collect();
    let mut merged = Vec::with_capacity(rest.len() + 2 * entries.len());
    let mut it = rest.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        let flag = s.split('=').next().unwrap_or("");
        if replaced.iter().any(|r| r == flag) {
            // Every configurable flag takes a value.
            if !s.contains('=') {
                it.next();
            }
            continue;
        }
        merged.push(a);
    }
    for (k, v) in entries {
        merged.push(OsString::from(format!("--{k}={v}")));
    }
    Ok(merged)
}

/// Cap rayon's global pool from the environment.
pub fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            CliError::Config(format!(
                "{THREADS_ENV} must be a positive integer, got `{value}`"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn grid_parsing() {
        let g: Grid = "k:0:2:5".parse().unwrap();
        assert_eq!(g.values(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert!("k:0:2:1".parse::<Grid>().is_err());
        assert!("k:0:2".parse::<Grid>().is_err());
        assert!("k:a:2:4".parse::<Grid>().is_err());
        let s: Grid = "x:-3:3:7".parse().unwrap();
        assert_eq!(s.sites().unwrap(), vec![-3, -2, -1, 0, 1, 2, 3]);
        assert!("x:0:1:3".parse::<Grid>().unwrap().sites().is_err());
    }

    #[test]
    fn config_replaces_flags() {
        let dir = std::env::temp_dir().join(format!("ps-config-{}", std::process::id()));
        std::fs::write(&dir, "# pair\nvbar1 = 3\ngrid = x:0:1:3\n").unwrap();
        let args = os(&[
            "ps",
            "correlation",
            "--vbar1",
            "2",
            "--grid=x:0:9:10",
            "--config",
            dir.to_str().unwrap(),
            "--vbar2",
            "2",
        ]);
        let merged = merge_config(args).unwrap();
        let text: Vec<String> = merged
            .iter()
            .map(|a| a.to_string_lossy().into_owned())
            .collect();
        assert_eq!(
            text,
            [
                "ps",
                "correlation",
                "--vbar2",
                "2",
                "--vbar1=3",
                "--grid=x:0:1:3"
            ]
        );
        std::fs::remove_file(dir).unwrap();
    }

    #[test]
    fn bad_config_lines() {
        assert!(parse_config("omega 1").is_err());
        assert!(parse_config("--omega = 1").is_err());
        assert_eq!(
            parse_config("  \n# c\nE=2 # total\n").unwrap(),
            vec![("E".into(), "2".into())]
        );
    }
}

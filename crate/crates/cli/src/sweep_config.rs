use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::Format;

/// `start:stop:count`, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DtRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl DtRange {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 })
            .collect()
    }
}

impl FromStr for DtRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got `{s}`"));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
        let count: usize = count.trim().parse().map_err(|e| format!("`{count}`: {e}"))?;
        if count == 0 {
            return Err("dt range needs at least one point".into());
        }
        Ok(DtRange { start: num(start)?, stop: num(stop)?, count })
    }
}

/// Sweep settings read from a flat `key = value` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    #[serde(default)]
    pub sigma: Vec<f64>,
    pub tau: Option<f64>,
    #[serde(default)]
    pub dt: Vec<f64>,
    pub dt_range: Option<String>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

impl SweepFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn dt_range(&self) -> Result<Option<DtRange>, String> {
        self.dt_range.as_deref().map(str::parse).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_includes_both_ends() {
        let r: DtRange = "-1:1:5".parse().unwrap();
        assert_eq!(r.values(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!("1:2".parse::<DtRange>().is_err());
        assert!("0:1:0".parse::<DtRange>().is_err());
    }

    #[test]
    fn parses_flat_file() {
        let f = SweepFile::parse(
            "sigma = [0.5, 1.0]\ntau = 1.0\ndt_range = \"-2:2:41\"\nformat = \"json\"\n",
        )
        .unwrap();
        assert_eq!(f.sigma, vec![0.5, 1.0]);
        assert_eq!(f.tau, Some(1.0));
        assert_eq!(f.format, Some(Format::Json));
        assert_eq!(f.dt_range().unwrap().unwrap().values().len(), 41);
        assert!(SweepFile::parse("bogus = 1").is_err());
    }
}

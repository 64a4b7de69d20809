//! Series CSV and JSON summaries.

use std::fs;
use std::path::Path;

use serde::{de::DeserializeOwned, Serialize};

use crate::diagnostics::TimeSeriesRecord;
use crate::error::{Error, Result};

pub const SERIES_HEADER: [&str; 6] = ["t", "energy", "enstrophy", "alpha_energy", "q", "dt"];

pub fn write_series(path: &Path, records: &[TimeSeriesRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(SERIES_HEADER)?;
    for r in records {
        w.serialize((r.t, r.energy, r.enstrophy, r.alpha_energy, r.q, r.dt))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_series(path: &Path) -> Result<Vec<TimeSeriesRecord>> {
    let mut rd = csv::Reader::from_path(path)?;
    let header: Vec<String> = rd.headers()?.iter().map(str::to_owned).collect();
    if header != SERIES_HEADER {
        return Err(Error::Artifact {
            path: path.to_path_buf(),
            reason: format!("unexpected header {header:?}"),
        });
    }
    let mut out: Vec<TimeSeriesRecord> = Vec::new();
    for row in rd.deserialize() {
        let r: TimeSeriesRecord = row?;
        if let Some(prev) = out.last() {
            if !(r.t > prev.t) {
                return Err(Error::Artifact {
                    path: path.to_path_buf(),
                    reason: format!("times not strictly increasing at t = {}", r.t),
                });
            }
        }
        out.push(r);
    }
    Ok(out)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Artifact {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(t: f64, q: f64) -> TimeSeriesRecord {
        TimeSeriesRecord {
            t,
            energy: 0.25,
            enstrophy: 3.0 * std::f64::consts::PI.powi(2),
            alpha_energy: 0.25 + 1e-2 * 3.0,
            q,
            dt: 1e-3,
        }
    }

    #[test]
    fn header_and_order() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        write_series(&p, &[rec(0.0, 0.1), rec(0.5, 0.2)]).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("t,energy,enstrophy,alpha_energy,q,dt\n"));
        fs::write(&p, "t,energy,enstrophy,alpha_energy,q,dt\n0.5,1,1,1,1,1\n0.5,1,1,1,1,1\n").unwrap();
        assert!(read_series(&p).is_err());
        fs::write(&p, "t,energy\n0,1\n").unwrap();
        assert!(read_series(&p).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn series_round_trip_is_exact(qs in prop::collection::vec(0.0f64..1e3, 1..20), scale in 1e-300f64..1e300) {
            let recs: Vec<_> = qs.iter().enumerate().map(|(i, &q)| rec(i as f64 * 0.1, q * scale)).collect();
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("s.csv");
            write_series(&p, &recs).unwrap();
            let back = read_series(&p).unwrap();
            prop_assert_eq!(back, recs);
        }
    }
}

//! Snapshot CSV (`x,y,state`) and run manifest JSON.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{LatticeState, ModelKind, SnapshotSeries};
use crate::error::{Error, Result};
use crate::percolation::{LatticeBox, Site};

/// Writes the non-background sites of `state` in `(x, y)` order.
pub fn write_snapshot_csv<W: Write>(mut w: W, state: &LatticeState) -> Result<()> {
    writeln!(w, "x,y,state")?;
    for (s, c) in state.cells() {
        writeln!(w, "{},{},{}", s.x, s.y, c)?;
    }
    Ok(())
}

/// Reads a snapshot written by [`write_snapshot_csv`]. The CSV does not carry
/// the model kind, box or time, so the caller supplies them.
pub fn read_snapshot_csv<R: BufRead>(r: R, kind: ModelKind, bounds: LatticeBox, time: f64) -> Result<LatticeState> {
    let mut state = LatticeState::empty(kind, bounds, time);
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || (i == 0 && line == "x,y,state") {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: i + 1, message };
        let mut parts = line.split(',');
        let (Some(x), Some(y), Some(c), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
            return Err(parse_err(format!("expected 3 fields in '{line}'")));
        };
        let x: u32 = x.trim().parse().map_err(|e| parse_err(format!("x: {e}")))?;
        let y: u32 = y.trim().parse().map_err(|e| parse_err(format!("y: {e}")))?;
        let c = c.trim().parse().map_err(|e: Error| parse_err(e.to_string()))?;
        state.set(Site::new(x, y), c).map_err(|e| parse_err(e.to_string()))?;
    }
    Ok(state)
}

/// JSON description of a run and the files it produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub seed: u64,
    pub kinds: Vec<ModelKind>,
    pub t_max: f64,
    #[serde(rename = "box")]
    pub bounds: LatticeBox,
    pub checkpoint_times: Vec<f64>,
    pub truncation_flag: bool,
    #[serde(default)]
    pub snapshot_files: Vec<String>,
}

impl RunManifest {
    pub fn from_series(series: &SnapshotSeries, snapshot_files: Vec<String>) -> Self {
        RunManifest {
            seed: series.seed,
            kinds: series.kinds.clone(),
            t_max: series.t_max,
            bounds: series.bounds,
            checkpoint_times: series.checkpoints.iter().map(|c| c.time).collect(),
            truncation_flag: series.truncation_flag,
            snapshot_files,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{coupled_run, BoxPolicy, CellState};

    #[test]
    fn snapshot_csv_roundtrip() {
        let s = coupled_run(5, &ModelKind::ALL, 8.0, &[8.0], BoxPolicy::Default).unwrap();
        for state in &s.checkpoints[0].states {
            let mut buf = Vec::new();
            write_snapshot_csv(&mut buf, state).unwrap();
            let back = read_snapshot_csv(&buf[..], state.kind, state.bounds, state.time).unwrap();
            assert_eq!(&back, state);
        }
    }

    #[test]
    fn csv_rejects_garbage() {
        let b = LatticeBox::square(5).unwrap();
        let bad = "x,y,state\n1,2\n";
        assert!(matches!(read_snapshot_csv(bad.as_bytes(), ModelKind::Competition, b, 0.0), Err(Error::Parse { line: 2, .. })));
        let wrong_state = "x,y,state\n1,2,black\n";
        assert!(read_snapshot_csv(wrong_state.as_bytes(), ModelKind::Competition, b, 0.0).is_err());
        let ok = "x,y,state\n1,2,red\n";
        let s = read_snapshot_csv(ok.as_bytes(), ModelKind::Competition, b, 0.0).unwrap();
        assert_eq!(s.get(Site::new(1, 2)), CellState::Red);
    }

    #[test]
    fn manifest_json_shape() {
        let s = coupled_run(1, &[ModelKind::Competition], 2.0, &[1.0, 2.0], BoxPolicy::Fixed(10)).unwrap();
        let m = RunManifest::from_series(&s, vec!["a.csv".into()]);
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.starts_with(r#"{"seed":1,"kinds":["competition"],"t_max":2.0,"box":{"max_x":10,"max_y":10}"#), "{json}");
        let back: RunManifest = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}

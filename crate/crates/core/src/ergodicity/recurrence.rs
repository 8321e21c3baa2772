use serde::{Deserialize, Serialize};

use crate::stochastic::SamplePath;

/// Times at which a path meets a reference level, and the gaps between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceRecord {
    pub level: f64,
    pub crossing_times: Vec<f64>,
    pub interval_lengths: Vec<f64>,
}

impl RecurrenceRecord {
    pub fn is_empty(&self) -> bool {
        self.crossing_times.is_empty()
    }
}

/// Finds every grid cell where the path meets `level`: a strict sign change
/// of `value - level` (crossing time by linear interpolation) or a node that
/// sits exactly on the level.
pub fn detect_recurrence(path: &SamplePath, level: f64) -> RecurrenceRecord {
    let grid = path.grid();
    let v = path.values();
    let mut crossing_times: Vec<f64> = Vec::new();
    let mut push = |t: f64| {
        if crossing_times.last().is_none_or(|&last| t > last) {
            crossing_times.push(t);
        }
    };
    for k in 0..v.len() {
        let a = v[k] - level;
        if a == 0.0 {
            push(grid.time(k));
            continue;
        }
        if k + 1 < v.len() {
            let b = v[k + 1] - level;
            if b != 0.0 && (a < 0.0) != (b < 0.0) {
                let frac = a / (a - b);
                push(grid.time(k) + frac * grid.dt());
            }
        }
    }
    let interval_lengths = crossing_times.windows(2).map(|w| w[1] - w[0]).collect();
    RecurrenceRecord {
        level,
        crossing_times,
        interval_lengths,
    }
}

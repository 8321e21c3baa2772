//! CSV and JSON artifacts. Floats are written with 17 significant digits so
//! that every file reads back to the same bits.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::emo::EmoOutput;
use crate::ergodicity::CovarianceCurve;
use crate::error::{Error, Result};
use crate::pde::PdeSolution;
use crate::stochastic::{SamplePath, TimeGrid};

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `bytes` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("{} is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

pub fn write_json_atomic<T: Serialize + ?Sized>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn read_to_string(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn two_column_csv(header: &str, rows: impl Iterator<Item = (f64, f64)>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for (a, b) in rows {
        out.push_str(&num(a));
        out.push(',');
        out.push_str(&num(b));
        out.push('\n');
    }
    out
}

/// `t,value` rows.
pub fn path_csv(path: &SamplePath) -> String {
    two_column_csv("t,value", path.grid().times().zip(path.values().iter().copied()))
}

/// `delta,z` rows, `delta` being elapsed time.
pub fn emo_csv(out: &EmoOutput) -> String {
    let g = out.z_path.grid();
    two_column_csv("delta,z", (0..g.len()).map(|k| g.elapsed(k)).zip(out.z_path.values().iter().copied()))
}

pub fn emo_sidecar_json(out: &EmoOutput) -> Result<String> {
    Ok(serde_json::to_string_pretty(&out.sidecar())?)
}

/// `tau,cov` rows.
pub fn covariance_csv(curve: &CovarianceCurve) -> String {
    two_column_csv("tau,cov", curve.lags().iter().copied().zip(curve.cov().iter().copied()))
}

/// `z,delta,C` rows.
pub fn pde_csv(sol: &PdeSolution) -> String {
    let mut out = String::from("z,delta,C\n");
    for (z, d, c) in sol.rows() {
        out.push_str(&format!("{},{},{}\n", num(z), num(d), num(c)));
    }
    out
}

/// Reads a path CSV (`t,value`, or `delta,z` as written for tamed paths) on a
/// uniform time axis.
pub fn read_path_csv<R: Read>(source: R) -> Result<SamplePath> {
    let mut rdr = csv::Reader::from_reader(source);
    let headers = rdr.headers()?.clone();
    let known = headers.len() == 2 && matches!((&headers[0], &headers[1]), ("t", "value") | ("delta", "z"));
    if !known {
        return Err(Error::Parse { line: 1, message: "expected header 't,value' or 'delta,z'".into() });
    }
    let mut t = Vec::new();
    let mut v = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Parse { line, message: format!("bad number in column {}", i + 1) })
        };
        t.push(field(0)?);
        v.push(field(1)?);
    }
    if t.len() < 2 {
        return Err(Error::Parse { line: t.len() + 1, message: "a path needs at least 2 rows".into() });
    }
    let grid = TimeGrid::new(t[0], t[t.len() - 1], t.len() - 1)?;
    let tol = 1e-9 * grid.dt().max(f64::MIN_POSITIVE);
    for (k, &tk) in t.iter().enumerate() {
        if (tk - grid.time(k)).abs() > tol.max(1e-12 * tk.abs()) {
            return Err(Error::Parse {
                line: k + 2,
                message: format!("time {tk} breaks the uniform spacing {}", grid.dt()),
            });
        }
    }
    SamplePath::new(grid, v, 0)
}

pub fn read_path_csv_file(path: impl AsRef<Path>) -> Result<SamplePath> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_path_csv(std::io::BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_csv_round_trips_bits() {
        let grid = TimeGrid::new(0.5, 2.0, 7).unwrap();
        let p = SamplePath::from_fn(grid, |t| (3.0 * t).sin() / 7.0 + 1e-300);
        let back = read_path_csv(path_csv(&p).as_bytes()).unwrap();
        assert_eq!(back.values(), p.values());
        assert_eq!(back.grid(), p.grid());
    }

    #[test]
    fn rejects_non_uniform_axis() {
        let text = "t,value\n0,1\n1,2\n2.5,3\n";
        assert!(matches!(read_path_csv(text.as_bytes()), Err(Error::Parse { line: 3, .. })));
        assert!(read_path_csv("time,value\n0,1\n1,2\n".as_bytes()).is_err());
        assert!(read_path_csv("t,value\n0,1\n".as_bytes()).is_err());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("x.txt");
        write_atomic(&target, b"one").unwrap();
        write_atomic(&target, b"two").unwrap();
        assert_eq!(fs::read(&target).unwrap(), b"two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}

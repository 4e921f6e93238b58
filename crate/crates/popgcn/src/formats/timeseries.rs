//! ROI time-series files: one headerless CSV per subject (`R` rows of `T`
//! values), referenced from a manifest CSV `subject_id,path`. Relative
//! paths resolve against the manifest's directory.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use popgcn_core::features::RoiTimeSeries;
use popgcn_core::DenseMatrix;

use crate::error::{Error, Result};

pub fn write_timeseries_csv(path: &Path, ts: &RoiTimeSeries) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for r in 0..ts.series.rows() {
        let row: Vec<String> = ts.series.row(r).iter().map(|v| v.to_string()).collect();
        out.write_all(row.join(",").as_bytes())
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_timeseries_csv(path: &Path, subject_id: &str) -> Result<RoiTimeSeries> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> =
            line.trim_end().split(',').map(str::parse::<f64>).collect();
        let row = row.map_err(|e| Error::format(path, line_no, format!("bad value: {e}")))?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::format(
                    path,
                    line_no,
                    format!("ragged row: {} values, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::format(path, 1, "empty time-series file"));
    }
    let r = rows.len();
    let t = rows[0].len();
    let series = DenseMatrix::from_vec(r, t, rows.into_iter().flatten().collect());
    RoiTimeSeries::new(subject_id.to_string(), series).map_err(Error::from)
}

pub fn write_manifest_csv(path: &Path, entries: &[(String, PathBuf)]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    out.write_all(b"subject_id,path\n")
        .map_err(|e| Error::io(path, e))?;
    for (id, p) in entries {
        out.write_all(format!("{},{}\n", id, p.display()).as_bytes())
            .map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

/// Manifest rows as `(subject_id, resolved path)`.
pub fn read_manifest_csv(path: &Path) -> Result<Vec<(String, PathBuf)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut lines = BufReader::new(file).lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::format(path, 1, "empty manifest"))?;
    let header = header.map_err(|e| Error::io(path, e))?;
    if header.trim_end() != "subject_id,path" {
        return Err(Error::format(
            path,
            1,
            format!("expected header `subject_id,path`, got `{header}`"),
        ));
    }
    let mut entries = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let (id, rel) = line
            .trim_end()
            .split_once(',')
            .ok_or_else(|| Error::format(path, line_no, "expected `subject_id,path`"))?;
        let p = PathBuf::from(rel);
        let resolved = if p.is_absolute() { p } else { base.join(p) };
        entries.push((id.to_string(), resolved));
    }
    Ok(entries)
}

/// Loads every subject named by the manifest, in manifest order.
pub fn load_cohort(manifest: &Path) -> Result<Vec<RoiTimeSeries>> {
    read_manifest_csv(manifest)?
        .iter()
        .map(|(id, p)| read_timeseries_csv(p, id))
        .collect()
}

/// Writes each subject as `<dir>/<subject_id>.csv` plus a manifest with
/// paths relative to `dir`.
pub fn write_cohort(dir: &Path, manifest_name: &str, cohort: &[RoiTimeSeries]) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut entries = Vec::with_capacity(cohort.len());
    for ts in cohort {
        let file = format!("{}.csv", ts.subject_id);
        write_timeseries_csv(&dir.join(&file), ts)?;
        entries.push((ts.subject_id.clone(), PathBuf::from(file)));
    }
    let manifest = dir.join(manifest_name);
    write_manifest_csv(&manifest, &entries)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn cohort_round_trip() {
        let dir = tempdir().unwrap();
        let ts = RoiTimeSeries::new(
            "s0".into(),
            DenseMatrix::from_vec(2, 4, vec![1.0, 2.5, -3.0, 0.25, 4.0, 5.0, 6.0, 7.0]),
        )
        .unwrap();
        let manifest = write_cohort(dir.path(), "manifest.csv", std::slice::from_ref(&ts)).unwrap();
        let back = load_cohort(&manifest).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].subject_id, "s0");
        assert!(back[0].series.bits_eq(&ts.series));
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "1,2,3\n4,5\n").unwrap();
        assert!(matches!(
            read_timeseries_csv(&path, "s"),
            Err(Error::Format { line: 2, .. })
        ));
    }
}

//! Feature CSV: header `subject_id,f0..f{D-1}`, one row per subject.
//! Columns are renumbered on write; provenance of selected features lives
//! in the run reports, not here.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use popgcn_core::{DenseMatrix, FeatureMatrix};

use crate::error::{Error, Result};

pub fn write_features_csv(path: &Path, subject_ids: &[String], features: &FeatureMatrix) -> Result<()> {
    assert_eq!(subject_ids.len(), features.num_subjects());
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);

    let mut header = String::from("subject_id");
    for i in 0..features.dim() {
        header.push_str(&format!(",f{i}"));
    }
    out.write_all(header.as_bytes())
        .and_then(|_| out.write_all(b"\n"))
        .map_err(|e| Error::io(path, e))?;

    for (id, r) in subject_ids.iter().zip(0..features.num_subjects()) {
        let mut line = id.clone();
        for v in features.values.row(r) {
            line.push(',');
            line.push_str(&v.to_string());
        }
        out.write_all(line.as_bytes())
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_features_csv(path: &Path) -> Result<(Vec<String>, FeatureMatrix)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::format(path, 1, "empty file"))?;
    let header = header.map_err(|e| Error::io(path, e))?;
    let mut cols = header.trim_end().split(',');
    if cols.next() != Some("subject_id") {
        return Err(Error::format(path, 1, "first column must be subject_id"));
    }
    let labels: Vec<String> = cols.map(str::to_string).collect();
    if labels.is_empty() {
        return Err(Error::format(path, 1, "no feature columns"));
    }

    let mut ids = Vec::new();
    let mut data = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.trim_end().split(',');
        ids.push(
            fields
                .next()
                .ok_or_else(|| Error::format(path, line_no, "missing subject_id"))?
                .to_string(),
        );
        let mut count = 0;
        for field in fields {
            let v: f64 = field
                .parse()
                .map_err(|e| Error::format(path, line_no, format!("bad value: {e}")))?;
            data.push(v);
            count += 1;
        }
        if count != labels.len() {
            return Err(Error::format(
                path,
                line_no,
                format!("expected {} values, got {count}", labels.len()),
            ));
        }
    }
    let values = DenseMatrix::from_vec(ids.len(), labels.len(), data);
    let features = FeatureMatrix::new(values, labels)?;
    Ok((ids, features))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let values = DenseMatrix::from_vec(2, 3, vec![0.1, -2.0, 3.5e-7, 1.0 / 3.0, 9.0, 0.0]);
        let features = FeatureMatrix::with_default_labels(values).unwrap();
        let ids = vec!["a".to_string(), "b".to_string()];
        write_features_csv(&path, &ids, &features).unwrap();
        let (back_ids, back) = read_features_csv(&path).unwrap();
        assert_eq!(back_ids, ids);
        assert!(back.values.bits_eq(&features.values));
        assert_eq!(back.labels, features.labels);
    }
}

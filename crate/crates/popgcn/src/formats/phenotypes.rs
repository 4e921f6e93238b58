//! Phenotype CSV: header `subject_id,sex,site,label`, label in {0, 1, ?}
//! where `?` marks unlabeled subjects.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use popgcn_core::population::{PhenotypeRecord, Sex};

use crate::error::{Error, Result};

const HEADER: &str = "subject_id,sex,site,label";

pub fn write_phenotypes_csv(path: &Path, records: &[PhenotypeRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let mut write = |line: String| {
        out.write_all(line.as_bytes())
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|e| Error::io(path, e))
    };
    write(HEADER.to_string())?;
    for r in records {
        let label = match r.label {
            Some(l) => l.to_string(),
            None => "?".to_string(),
        };
        write(format!("{},{},{},{label}", r.subject_id, r.sex.as_str(), r.site))?;
    }
    Ok(())
}

pub fn read_phenotypes_csv(path: &Path) -> Result<Vec<PhenotypeRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::format(path, 1, "empty file"))?;
    let header = header.map_err(|e| Error::io(path, e))?;
    if header.trim_end() != HEADER {
        return Err(Error::format(
            path,
            1,
            format!("expected header `{HEADER}`, got `{header}`"),
        ));
    }

    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        if fields.len() != 4 {
            return Err(Error::format(
                path,
                line_no,
                format!("expected 4 fields, got {}", fields.len()),
            ));
        }
        let subject_id = fields[0].to_string();
        if !seen.insert(subject_id.clone()) {
            return Err(Error::format(
                path,
                line_no,
                format!("duplicate subject_id `{subject_id}`"),
            ));
        }
        let sex = Sex::parse(fields[1])
            .map_err(|e| Error::format(path, line_no, e.to_string()))?;
        let label = match fields[3] {
            "?" => None,
            "0" => Some(0),
            "1" => Some(1),
            other => {
                return Err(Error::format(
                    path,
                    line_no,
                    format!("label must be 0, 1 or ?, got `{other}`"),
                ))
            }
        };
        records.push(PhenotypeRecord {
            subject_id,
            sex,
            site: fields[2].to_string(),
            label,
        });
    }
    Ok(records)
}

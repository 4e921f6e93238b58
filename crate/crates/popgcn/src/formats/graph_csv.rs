//! Graph CSV: header `i,j,weight`, zero-based node indices, one row per
//! unordered pair with `i < j`. Duplicate pairs are an error, not merged.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use popgcn_core::WeightedGraph;

use crate::error::{Error, Result};

const HEADER: &str = "i,j,weight";

pub fn write_graph_csv(path: &Path, graph: &WeightedGraph) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>, line: String| {
        out.write_all(line.as_bytes())
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|e| Error::io(path, e))
    };
    write(&mut out, HEADER.to_string())?;
    for e in graph.edges() {
        write(&mut out, format!("{},{},{}", e.i, e.j, e.weight))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Reads a graph over `num_nodes` nodes (the node count is carried by the
/// companion feature/phenotype files, not the graph file).
pub fn read_graph_csv(path: &Path, num_nodes: usize) -> Result<WeightedGraph> {
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

    let mut edges = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.trim_end().split(',');
        let mut next = |name: &str| {
            fields
                .next()
                .ok_or_else(|| Error::format(path, line_no, format!("missing field `{name}`")))
        };
        let i: usize = next("i")?
            .parse()
            .map_err(|e| Error::format(path, line_no, format!("bad node index: {e}")))?;
        let j: usize = next("j")?
            .parse()
            .map_err(|e| Error::format(path, line_no, format!("bad node index: {e}")))?;
        let weight: f64 = next("weight")?
            .parse()
            .map_err(|e| Error::format(path, line_no, format!("bad weight: {e}")))?;
        if fields.next().is_some() {
            return Err(Error::format(path, line_no, "too many fields"));
        }
        if i >= j {
            return Err(Error::format(
                path,
                line_no,
                format!("rows must satisfy i < j, got ({i}, {j})"),
            ));
        }
        edges.push((i, j, weight));
    }
    WeightedGraph::new(num_nodes, edges).map_err(Error::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("g.csv");
        let g = WeightedGraph::new(4, [(0, 1, 0.5), (1, 3, 2.25), (0, 2, 1.0)]).unwrap();
        write_graph_csv(&path, &g).unwrap();
        let back = read_graph_csv(&path, 4).unwrap();
        assert_eq!(back, g);
        // LF endings, no CR.
        let raw = std::fs::read(&path).unwrap();
        assert!(!raw.contains(&b'\r'));
    }

    #[test]
    fn rejects_misordered_and_duplicate_rows() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("g.csv");
        std::fs::write(&path, "i,j,weight\n2,1,1.0\n").unwrap();
        assert!(matches!(
            read_graph_csv(&path, 4),
            Err(Error::Format { line: 2, .. })
        ));
        std::fs::write(&path, "i,j,weight\n1,2,1.0\n1,2,3.0\n").unwrap();
        assert!(matches!(
            read_graph_csv(&path, 4),
            Err(Error::Core(popgcn_core::Error::DuplicateEdge { i: 1, j: 2 }))
        ));
    }

    #[test]
    fn rejects_wrong_header() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("g.csv");
        std::fs::write(&path, "a,b,w\n").unwrap();
        assert!(matches!(
            read_graph_csv(&path, 2),
            Err(Error::Format { line: 1, .. })
        ));
    }
}

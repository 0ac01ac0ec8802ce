//! The sequence file format and other text exports.
//!
//! A sequence file is UTF-8 CSV: an optional `#`-prefixed header row of
//! strictly increasing change points, then `N` rows by `M` columns of
//! cluster labels, column `m` giving each element's cluster in the `m`-th
//! partition. Labels are arbitrary comma-free tokens and are interned per
//! column independently; they carry no meaning across columns. Without a
//! header the change points default to `0..M-1`.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::BigradeGrid;
use crate::partition::{Partition, PartitionSequence};

pub fn parse_sequence(text: &str) -> Result<PartitionSequence> {
    let mut change_points: Option<Vec<f64>> = None;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut width = 0usize;
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            if !rows.is_empty() || change_points.is_some() {
                return Err(Error::Parse {
                    line: line_no + 1,
                    column: 1,
                    message: "header row must come first".into(),
                });
            }
            let mut points = Vec::new();
            for (col, token) in header.split(',').enumerate() {
                let token = token.trim();
                let value: f64 = token.parse().map_err(|_| Error::Parse {
                    line: line_no + 1,
                    column: col + 1,
                    message: format!("bad change point {token:?}"),
                })?;
                points.push(value);
            }
            if points.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse {
                    line: line_no + 1,
                    column: 1,
                    message: "change points must be strictly increasing".into(),
                });
            }
            change_points = Some(points);
            continue;
        }
        let row: Vec<String> = line.split(',').map(|t| t.trim().to_string()).collect();
        if rows.is_empty() {
            width = row.len();
        } else if row.len() != width {
            return Err(Error::Parse {
                line: line_no + 1,
                column: row.len().min(width) + 1,
                message: format!("row has {} columns, expected {width}", row.len()),
            });
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no label rows".into(),
        });
    }
    let m = width;
    let n = rows.len();
    let points = match change_points {
        Some(points) => {
            if points.len() != m {
                return Err(Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!("header has {} change points for {m} columns", points.len()),
                });
            }
            points
        }
        None => (0..m).map(|k| k as f64).collect(),
    };
    let mut partitions = Vec::with_capacity(m);
    for col in 0..m {
        let labels: Vec<&str> = (0..n).map(|row| rows[row][col].as_str()).collect();
        partitions.push(Partition::from_labels(&labels)?);
    }
    PartitionSequence::new(points, partitions)
}

pub fn parse_sequence_file(path: &Path) -> Result<PartitionSequence> {
    let text = fs::read_to_string(path)?;
    parse_sequence(&text)
}

/// Serialises a sequence with canonical labels: each element's label in a
/// column is its block index in that column's canonical partition, so
/// parsing the output reproduces the sequence exactly.
pub fn write_sequence(seq: &PartitionSequence) -> String {
    let mut out = String::from("# ");
    for (k, t) in seq.change_points().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        out.push_str(&format!("{t}"));
    }
    out.push('\n');
    for x in 0..seq.n_elements() as u32 {
        for (m, p) in seq.partitions().iter().enumerate() {
            if m > 0 {
                out.push(',');
            }
            out.push_str(&p.block_index(x).to_string());
        }
        out.push('\n');
    }
    out
}

/// Grid CSV: `i,j,value` rows over the upper triangle, layers 1-based.
pub fn grid_to_csv(grid: &BigradeGrid) -> String {
    let mut out = String::from("i,j,value\n");
    for (i, j, v) in grid.iter_upper() {
        out.push_str(&format!("{},{},{}\n", i + 1, j + 1, v));
    }
    out
}

/// Square matrix CSV with full-precision values and no header.
pub fn matrix_to_csv(matrix: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in matrix {
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&format!("{v}"));
        }
        out.push('\n');
    }
    out
}

/// Writes via a temporary file in the target directory plus a rename, so
/// readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile_in(dir)?;
    tmp.1.write_all(contents.as_bytes())?;
    tmp.1.sync_all()?;
    drop(tmp.1);
    fs::rename(&tmp.0, path)?;
    Ok(())
}

fn tempfile_in(dir: Option<&Path>) -> Result<(std::path::PathBuf, fs::File)> {
    use std::time::{SystemTime, UNIX_EPOCH};
    let base = dir.unwrap_or_else(|| Path::new("."));
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    for attempt in 0..1000u32 {
        let candidate = base.join(format!(".tmp-{}-{stamp}-{attempt}", std::process::id()));
        match fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&candidate)
        {
            Ok(file) => return Ok((candidate, file)),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(Error::Io(std::io::Error::other("no free temp file name")))
}

//! CSV reading and writing.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use domcftp::spatial::Point;

use crate::error::{CliError, CliResult};

fn csv_err(path: &Path, source: csv::Error) -> CliError {
    CliError::Csv { path: path.to_path_buf(), source }
}

fn parse(path: &Path, line: usize, field: &str) -> CliResult<f64> {
    field.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
        CliError::Input(format!("{}: line {line}: {field:?} is not a finite number", path.display()))
    })
}

/// Reads a pattern from a CSV file with header `x,y`.
pub fn read_points(path: &Path) -> CliResult<Vec<Point>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| CliError::Input(format!("{}: missing column {name:?}", path.display())))
    };
    let (xi, yi) = (col("x")?, col("y")?);
    let mut out = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        out.push(Point::new(parse(path, n + 2, &rec[xi])?, parse(path, n + 2, &rec[yi])?));
    }
    Ok(out)
}

pub fn write_points(path: &Path, points: &[Point]) -> CliResult<()> {
    let rows: Vec<Vec<f64>> = points.iter().map(|p| vec![p.x, p.y]).collect();
    write_table(path, &["x", "y"], &rows)
}

/// Reads a single-column signal; a non-numeric first line is a header.
pub fn read_signal(path: &Path) -> CliResult<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let field = line.split(',').next().unwrap_or("").trim();
        if field.is_empty() || (n == 0 && field.parse::<f64>().is_err()) {
            continue;
        }
        out.push(parse(path, n + 1, field)?);
    }
    if out.is_empty() {
        return Err(CliError::Input(format!("{}: no samples", path.display())));
    }
    Ok(out)
}

/// Writes a numeric table with a header row.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string())).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Writes string records, for tables that mix text and numbers.
pub fn write_records(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))?;
    w.flush().map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let pts = vec![Point::new(0.1, 0.25), Point::new(1.0 / 3.0, 0.0)];
        write_points(&path, &pts).unwrap();
        assert_eq!(read_points(&path).unwrap(), pts);
    }

    #[test]
    fn rejects_bad_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        std::fs::write(&path, "x,y\n0.1,abc\n").unwrap();
        assert!(matches!(read_points(&path), Err(CliError::Input(_))));
        std::fs::write(&path, "a,b\n0.1,0.2\n").unwrap();
        assert!(matches!(read_points(&path), Err(CliError::Input(_))));
    }

    #[test]
    fn signal_with_and_without_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        std::fs::write(&path, "value\n1\n2.5\n").unwrap();
        assert_eq!(read_signal(&path).unwrap(), vec![1.0, 2.5]);
        std::fs::write(&path, "3\n-1\n").unwrap();
        assert_eq!(read_signal(&path).unwrap(), vec![3.0, -1.0]);
        std::fs::write(&path, "value\n").unwrap();
        assert!(read_signal(&path).is_err());
    }
}

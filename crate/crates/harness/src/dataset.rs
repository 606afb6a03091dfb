//! Sparse classification data, one sample per line:
//!
//! ```text
//! +1 3:0.5 17:1
//! -1 2:1.25
//! ```
//!
//! Feature indices are 1-based. Labels must be `+1`, `1`, `-1` or `0`; a
//! `0` label is read as `-1`. Blank lines and lines starting with `#` are
//! skipped. The column count is the largest index seen.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader};
use std::path::Path;

use freefista::Design;
use ndarray::Array1;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone)]
pub struct Dataset {
    pub design: Design<f64>,
    pub labels: Array1<f64>,
}

pub fn load_sparse_dataset(path: &Path) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    parse_sparse_dataset(BufReader::new(file), path)
}

/// Parses from any reader; `path` only labels error messages.
pub fn parse_sparse_dataset(reader: impl BufRead, path: &Path) -> Result<Dataset> {
    let mut labels = Vec::new();
    let mut triplets = Vec::new();
    let mut ncols = 0;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| HarnessError::io(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fail = |message: String| HarnessError::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message,
        };
        let mut tokens = line.split_whitespace();
        let label = match tokens.next().unwrap() {
            "+1" | "1" => 1.0,
            "-1" | "0" => -1.0,
            other => return Err(fail(format!("label '{other}' is not one of +1, -1, 0"))),
        };
        let row = labels.len();
        for token in tokens {
            let (idx, val) = token
                .split_once(':')
                .ok_or_else(|| fail(format!("expected idx:val, got '{token}'")))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| fail(format!("bad feature index '{idx}'")))?;
            if idx == 0 {
                return Err(fail("feature indices start at 1".into()));
            }
            let val: f64 = val
                .parse()
                .map_err(|_| fail(format!("bad feature value '{val}'")))?;
            if !val.is_finite() {
                return Err(fail(format!("non-finite feature value '{val}'")));
            }
            ncols = ncols.max(idx);
            triplets.push((row, idx - 1, val));
        }
        labels.push(label);
    }
    if labels.is_empty() {
        return Err(HarnessError::EmptyDataset(path.to_path_buf()));
    }
    Ok(Dataset {
        design: Design::sparse_from_triplets(labels.len(), ncols, triplets),
        labels: Array1::from(labels),
    })
}

/// Writes the nonzero entries in the format read by [`load_sparse_dataset`].
pub fn write_sparse_dataset(path: &Path, data: &Dataset) -> Result<()> {
    let mut rows = vec![String::new(); data.design.nrows()];
    for (row, label) in rows.iter_mut().zip(&data.labels) {
        row.push_str(if *label > 0.0 { "+1" } else { "-1" });
    }
    for (r, c, v) in data.design.triplets() {
        if v != 0.0 {
            write!(rows[r], " {}:{}", c + 1, v).unwrap();
        }
    }
    let mut text = rows.join("\n");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Dataset> {
        parse_sparse_dataset(text.as_bytes(), Path::new("fixture"))
    }

    #[test]
    fn two_line_fixture() {
        let d = parse("+1 1:1.0\n-1 2:2.0").unwrap();
        assert_eq!((d.design.nrows(), d.design.ncols()), (2, 2));
        assert_eq!(d.design.triplets(), vec![(0, 0, 1.0), (1, 1, 2.0)]);
        assert_eq!(d.labels.to_vec(), vec![1.0, -1.0]);
    }

    #[test]
    fn zero_label_and_comments() {
        let d = parse("# header\n0 3:1\n\n1\n").unwrap();
        assert_eq!(d.labels.to_vec(), vec![-1.0, 1.0]);
        assert_eq!(d.design.ncols(), 3);
    }

    #[test]
    fn errors_name_the_line() {
        for (text, line) in [("+1 1:1\n+1 4\n", 2), ("+2 1:1\n", 1), ("-1 0:1\n", 1), ("+1 1:x\n", 1)] {
            match parse(text) {
                Err(HarnessError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        let err = parse("\n# nothing\n").unwrap_err();
        assert!(matches!(err, HarnessError::EmptyDataset(_)));
        assert_eq!(err.exit_code(), 4);
    }
}

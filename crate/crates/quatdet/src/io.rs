//! Matrix file format: JSON with explicit shape and row-major entries,
//! each entry spelled as its four real components.
//!
//! ```json
//! {"rows": 2, "cols": 2, "entries": [[[1,0,0,0],[0,1,0,0]],
//!                                    [[0,0,1,0],[0,0,0,1]]]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::QMatrix;
use crate::quat::Quaternion;

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<[f64; 4]>>,
}

/// Parses the JSON matrix format; malformed documents report the location
/// inside the text.
pub fn matrix_from_json(text: &str) -> Result<QMatrix> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.rows == 0 || file.cols == 0 {
        return Err(Error::Parse(format!(
            "matrix must be nonempty, got {}x{}",
            file.rows, file.cols
        )));
    }
    if file.entries.len() != file.rows {
        return Err(Error::Parse(format!(
            "declared {} rows but entries holds {}",
            file.rows,
            file.entries.len()
        )));
    }
    for (i, row) in file.entries.iter().enumerate() {
        if row.len() != file.cols {
            return Err(Error::Parse(format!(
                "declared {} cols but row {} holds {}",
                file.cols,
                i,
                row.len()
            )));
        }
        for (j, comp) in row.iter().enumerate() {
            if comp.iter().any(|x| !x.is_finite()) {
                return Err(Error::Parse(format!("non-finite entry at ({i},{j})")));
            }
        }
    }
    Ok(QMatrix::from_fn(file.rows, file.cols, |i, j| {
        let c = file.entries[i][j];
        Quaternion::new(c[0], c[1], c[2], c[3])
    }))
}

/// Serializes a matrix into the JSON matrix format. Output is a single
/// deterministic line; reparsing reproduces the matrix exactly.
pub fn matrix_to_json(m: &QMatrix) -> String {
    let entries: Vec<Vec<[f64; 4]>> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let q = m[(i, j)];
                    [q.a, q.b, q.c, q.d]
                })
                .collect()
        })
        .collect();
    let file = MatrixFile {
        rows: m.rows(),
        cols: m.cols(),
        entries,
    };
    serde_json::to_string(&file).expect("matrix serialization cannot fail")
}

/// Reads a matrix file from disk.
pub fn read_matrix(path: &std::path::Path) -> Result<QMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    matrix_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let m = QMatrix::random(3, 2, &mut rng);
        let text = matrix_to_json(&m);
        let back = matrix_from_json(&text).unwrap();
        assert_eq!(m, back);
        // Emitting again gives byte-identical text.
        assert_eq!(text, matrix_to_json(&back));
    }

    #[test]
    fn scalar_file() {
        let m = matrix_from_json(r#"{"rows":1,"cols":1,"entries":[[[2,0,0,0]]]}"#).unwrap();
        assert_eq!(m[(0, 0)], Quaternion::real(2.0));
    }

    #[test]
    fn bad_documents_rejected() {
        assert!(matrix_from_json("").is_err());
        assert!(matrix_from_json("{").is_err());
        assert!(matrix_from_json(r#"{"rows":0,"cols":0,"entries":[]}"#).is_err());
        assert!(matrix_from_json(r#"{"rows":2,"cols":1,"entries":[[[1,0,0,0]]]}"#).is_err());
        assert!(
            matrix_from_json(r#"{"rows":1,"cols":2,"entries":[[[1,0,0,0]]]}"#).is_err()
        );
        // Parse errors carry a location.
        let err = matrix_from_json("{\n  \"rows\": 1,\n  broken\n}").unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("line"), "{msg}");
    }
}

/// The same JSON structure as [`matrix_to_json`], as a value for embedding
/// into larger documents.
pub fn matrix_to_value(m: &QMatrix) -> serde_json::Value {
    serde_json::from_str(&matrix_to_json(m)).expect("round trip of own output")
}

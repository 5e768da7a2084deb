//! Dense-matrix CSV format shared by dataset export and ingestion.
//!
//! First line: `rows,cols`. Then one matrix row per line, comma-separated
//! decimals written with 17 significant digits so re-ingestion is bit-exact.

use std::io::{BufRead, BufReader, Read, Write};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub fn write_matrix_csv<W: Write>(mut w: W, m: &DMatrix<f64>) -> Result<()> {
    writeln!(w, "{},{}", m.nrows(), m.ncols())?;
    let mut line = String::new();
    for i in 0..m.nrows() {
        line.clear();
        for j in 0..m.ncols() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&format!("{:.16e}", m[(i, j)]));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn read_matrix_csv<R: Read>(r: R) -> Result<DMatrix<f64>> {
    let mut lines = BufReader::new(r).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::CsvFormat("empty matrix file".into()))??;
    let dims: Vec<&str> = header.trim_end().split(',').collect();
    if dims.len() != 2 {
        return Err(Error::CsvFormat(format!(
            "expected `rows,cols` header, got `{header}`"
        )));
    }
    let rows: usize = dims[0]
        .parse()
        .map_err(|e| Error::CsvFormat(format!("bad row count `{}`: {e}", dims[0])))?;
    let cols: usize = dims[1]
        .parse()
        .map_err(|e| Error::CsvFormat(format!("bad col count `{}`: {e}", dims[1])))?;
    let mut data = Vec::with_capacity(rows * cols);
    let mut seen = 0usize;
    for line in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        if seen == rows {
            return Err(Error::CsvFormat("more rows than declared".into()));
        }
        let mut count = 0usize;
        for field in line.split(',') {
            let v: f64 = field
                .parse()
                .map_err(|e| Error::CsvFormat(format!("bad float `{field}`: {e}")))?;
            data.push(v);
            count += 1;
        }
        if count != cols {
            return Err(Error::CsvFormat(format!(
                "row {seen} has {count} fields, expected {cols}"
            )));
        }
        seen += 1;
    }
    if seen != rows {
        return Err(Error::CsvFormat(format!(
            "declared {rows} rows, found {seen}"
        )));
    }
    Ok(DMatrix::from_row_slice(rows, cols, &data))
}

/// Vectors are stored as `n x 1` matrices.
pub fn write_vector_csv<W: Write>(w: W, v: &DVector<f64>) -> Result<()> {
    let m = DMatrix::from_column_slice(v.len(), 1, v.as_slice());
    write_matrix_csv(w, &m)
}

pub fn read_vector_csv<R: Read>(r: R) -> Result<DVector<f64>> {
    let m = read_matrix_csv(r)?;
    if m.ncols() != 1 {
        return Err(Error::CsvFormat(format!(
            "expected a single-column vector, got {} columns",
            m.ncols()
        )));
    }
    Ok(DVector::from_column_slice(m.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_ragged_rows() {
        let text = "2,2\n1.0,2.0\n3.0\n";
        assert!(read_matrix_csv(text.as_bytes()).is_err());
    }

    #[test]
    fn rejects_row_count_mismatch() {
        let text = "3,1\n1.0\n2.0\n";
        assert!(read_matrix_csv(text.as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn matrix_round_trip_is_exact(
            rows in 1usize..6,
            cols in 1usize..6,
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = DMatrix::from_fn(rows, cols, |_, _| {
                // Spread magnitudes widely to exercise the formatter.
                let v: f64 = rng.random_range(-1.0..1.0);
                v * 10f64.powi(rng.random_range(-200..200))
            });
            let mut buf = Vec::new();
            write_matrix_csv(&mut buf, &m).unwrap();
            let back = read_matrix_csv(buf.as_slice()).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}

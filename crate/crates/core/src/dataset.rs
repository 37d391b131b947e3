//! Column-major sample matrices, CSV ingestion and environment slicing.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An immutable `n × m` sample: `n` rows (samples) over `m` named variables,
/// optionally tagged with one environment label per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    environments: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(
        names: Vec<String>,
        columns: Vec<Vec<f64>>,
        environments: Option<Vec<String>>,
    ) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        if columns.len() < 2 {
            return Err(Error::TooFewVariables(columns.len()));
        }
        let n = columns[0].len();
        if n < 2 {
            return Err(Error::TooFewSamples(n));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "column {name:?} has {} rows, expected {n}",
                    col.len()
                )));
            }
            if let Some(row) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row, col: name.clone() });
            }
        }
        if let Some(envs) = &environments {
            if envs.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "{} environment labels for {n} rows",
                    envs.len()
                )));
            }
        }
        Ok(Self { names, columns, environments })
    }

    pub fn n_rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn column(&self, index: usize) -> &[f64] {
        &self.columns[index]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn environments(&self) -> Option<&[String]> {
        self.environments.as_deref()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Columns as borrowed slices, in the order given.
    pub fn view(&self, indices: &[usize]) -> Vec<&[f64]> {
        indices.iter().map(|&i| self.column(i)).collect()
    }

    /// Returns the sub-sample at `rows`, dropping environment labels.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Dataset> {
        let columns = self
            .columns
            .iter()
            .map(|c| rows.iter().map(|&r| c[r]).collect())
            .collect();
        Dataset::new(self.names.clone(), columns, None)
    }

    /// True when both datasets carry the same column names in the same order.
    pub fn same_schema(&self, other: &Dataset) -> bool {
        self.names == other.names
    }
}

/// A response column together with an ordered set of predictor columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSelection {
    pub target: usize,
    pub predictors: Vec<usize>,
}

impl ColumnSelection {
    pub fn new(target: usize, predictors: Vec<usize>, n_cols: usize) -> Result<Self> {
        if target >= n_cols {
            return Err(Error::InvalidSelection(format!(
                "target index {target} out of range for {n_cols} columns"
            )));
        }
        let mut seen = HashSet::new();
        for &p in &predictors {
            if p >= n_cols {
                return Err(Error::InvalidSelection(format!(
                    "predictor index {p} out of range for {n_cols} columns"
                )));
            }
            if p == target {
                return Err(Error::InvalidSelection(format!(
                    "target {target} listed among predictors"
                )));
            }
            if !seen.insert(p) {
                return Err(Error::InvalidSelection(format!("predictor {p} listed twice")));
            }
        }
        Ok(Self { target, predictors })
    }

    /// The target against every other column, in column order.
    pub fn all_others(target: usize, n_cols: usize) -> Result<Self> {
        Self::new(target, (0..n_cols).filter(|&c| c != target).collect(), n_cols)
    }
}

pub fn load_csv(path: impl AsRef<Path>, env_column: Option<&str>) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    read_csv(file, env_column)
}

pub fn read_csv<R: Read>(reader: R, env_column: Option<&str>) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();

    let mut seen = HashSet::new();
    for h in &header {
        if !seen.insert(h.as_str()) {
            return Err(Error::DuplicateColumn(h.clone()));
        }
    }
    let env_idx = match env_column {
        Some(name) => Some(
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::UnknownColumn(name.to_string()))?,
        ),
        None => None,
    };

    let names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != env_idx)
        .map(|(_, h)| h.clone())
        .collect();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    let mut environments = env_idx.map(|_| Vec::new());

    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let mut col = 0;
        for (i, cell) in record.iter().enumerate() {
            if Some(i) == env_idx {
                if let Some(envs) = environments.as_mut() {
                    envs.push(cell.trim().to_string());
                }
                continue;
            }
            let value: f64 = cell.trim().parse().map_err(|_| Error::Parse {
                row,
                col: header[i].clone(),
                value: cell.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::NonFinite { row, col: header[i].clone() });
            }
            columns[col].push(value);
            col += 1;
        }
    }
    Dataset::new(names, columns, environments)
}

/// Writes `d` as CSV. Values use the shortest representation that parses back
/// to the identical `f64`. Environment labels, if any, go in `env_column`
/// (default `env`) as the last column.
pub fn write_csv<W: Write>(d: &Dataset, writer: W, env_column: Option<&str>) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let env_name = env_column.unwrap_or("env");
    let mut header: Vec<&str> = d.names.iter().map(String::as_str).collect();
    if d.environments.is_some() {
        header.push(env_name);
    }
    wtr.write_record(&header)?;
    let mut record = Vec::with_capacity(header.len());
    for row in 0..d.n_rows() {
        record.clear();
        record.extend(d.columns.iter().map(|c| format!("{:?}", c[row])));
        if let Some(envs) = &d.environments {
            record.push(envs[row].clone());
        }
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn save_csv(d: &Dataset, path: impl AsRef<Path>, env_column: Option<&str>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(d, std::io::BufWriter::new(file), env_column)
}

/// Rows tagged `tag`, with environment labels dropped.
pub fn filter_environment(d: &Dataset, tag: &str) -> Result<Dataset> {
    let envs = d.environments.as_ref().ok_or(Error::NoEnvironments)?;
    let rows: Vec<usize> = envs
        .iter()
        .enumerate()
        .filter(|(_, e)| e.as_str() == tag)
        .map(|(i, _)| i)
        .collect();
    match rows.len() {
        0 => Err(Error::UnknownEnvironment(tag.to_string())),
        1 => Err(Error::TooFewEnvironmentRows { tag: tag.to_string(), count: 1 }),
        _ => d.select_rows(&rows),
    }
}

/// Dataset-level normalization hook; the identity. Response ranks need no
/// rescaling. Predictor columns are standardized per search inside FOCI
/// (see [`standardize_column`]).
pub fn standardize_ranks_ready(d: Dataset) -> Dataset {
    d
}

/// `(v - mean) / sd` with the sample standard deviation (divisor `n - 1`).
/// A constant column maps to zeros.
///
/// Multiplying a column by a power of two leaves the result bit-identical.
pub fn standardize_column(column: &[f64]) -> Vec<f64> {
    let n = column.len() as f64;
    let mean = column.iter().sum::<f64>() / n;
    let centred: Vec<f64> = column.iter().map(|v| v - mean).collect();
    let ss: f64 = centred.iter().map(|c| c * c).sum();
    let sd = (ss / (n - 1.0)).sqrt();
    if sd > 0.0 && sd.is_finite() {
        centred.iter().map(|c| c / sd).collect()
    } else {
        vec![0.0; column.len()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str, env: Option<&str>) -> Result<Dataset> {
        read_csv(s.as_bytes(), env)
    }

    #[test]
    fn loads_plain_csv() {
        let d = parse("a,b\n1,2\n3,4\n5,6\n", None).unwrap();
        assert_eq!(d.n_rows(), 3);
        assert_eq!(d.n_cols(), 2);
        assert_eq!(d.column(1), &[2.0, 4.0, 6.0]);
        assert!(d.environments().is_none());
    }

    #[test]
    fn env_column_is_split_off() {
        let d = parse("a,env,b\n1,obs,2\n3,obs,4\n5,int,6\n", Some("env")).unwrap();
        assert_eq!(d.names(), &["a", "b"]);
        assert_eq!(d.environments().unwrap(), &["obs", "obs", "int"]);
        assert_eq!(d.column(1), &[2.0, 4.0, 6.0]);
    }

    #[test]
    fn rejects_bad_cells() {
        let err = parse("a,b\n1,2\nNaN,4\n", None).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 1, ref col } if col == "a"));
        assert!(err.to_string().starts_with("non-finite value at (1,"));

        let err = parse("a,b\n1,2\n3,x\n", None).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 1, .. }));

        assert!(matches!(parse("a,a\n1,2\n3,4\n", None), Err(Error::DuplicateColumn(_))));
        assert!(matches!(parse("a,b\n1,2\n3,4\n", Some("env")), Err(Error::UnknownColumn(_))));
        assert!(matches!(parse("a,b\n1,2\n", None), Err(Error::TooFewSamples(1))));
        assert!(matches!(parse("a\n1\n2\n", None), Err(Error::TooFewVariables(1))));
    }

    #[test]
    fn standardized_columns() {
        let z = standardize_column(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let mean = z.iter().sum::<f64>() / 5.0;
        let var = z.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 4.0;
        assert!(mean.abs() < 1e-15 && (var - 1.0).abs() < 1e-12);
        assert_eq!(standardize_column(&[3.0, 3.0, 3.0]), vec![0.0; 3]);
        let col = [0.3, -1.7, 2.9, 0.01];
        let scaled: Vec<f64> = col.iter().map(|v| v * 8.0).collect();
        assert_eq!(standardize_column(&col), standardize_column(&scaled));
    }

    #[test]
    fn constant_columns_are_admitted() {
        let d = parse("a,b\n1,2\n1,4\n", None).unwrap();
        assert_eq!(standardize_ranks_ready(d.clone()), d);
    }

    #[test]
    fn filters_environments() {
        let d = parse("a,b,env\n1,2,obs\n3,4,obs\n5,6,int\n", Some("env")).unwrap();
        let obs = filter_environment(&d, "obs").unwrap();
        assert_eq!(obs.n_rows(), 2);
        assert!(obs.environments().is_none());
        assert_eq!(obs.names(), d.names());
        assert!(matches!(
            filter_environment(&d, "int"),
            Err(Error::TooFewEnvironmentRows { count: 1, .. })
        ));
        let err = filter_environment(&d, "zzz").unwrap_err();
        assert_eq!(err.to_string(), "unknown environment \"zzz\"");
        assert!(matches!(filter_environment(&obs, "obs"), Err(Error::NoEnvironments)));
    }

    #[test]
    fn selection_validation() {
        assert!(ColumnSelection::new(0, vec![1, 2], 3).is_ok());
        assert!(ColumnSelection::new(0, vec![0, 1], 3).is_err());
        assert!(ColumnSelection::new(0, vec![1, 1], 3).is_err());
        assert!(ColumnSelection::new(3, vec![1], 3).is_err());
        assert_eq!(ColumnSelection::all_others(1, 3).unwrap().predictors, vec![0, 2]);
    }
}

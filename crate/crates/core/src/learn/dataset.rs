use std::collections::HashMap;
use std::io::{Read, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::substream;

/// Discrete data stored column-wise as level indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoricalDataset {
    names: Vec<String>,
    levels: Vec<Vec<String>>,
    columns: Vec<Vec<u32>>,
}

/// Level lists declared up front, read from a JSON sidecar:
/// `{"variables": [{"name": "A", "levels": ["no", "yes"]}, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub variables: Vec<VariableSchema>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableSchema {
    pub name: String,
    pub levels: Vec<String>,
}

impl Schema {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
    }
}

impl CategoricalDataset {
    pub fn new(names: Vec<String>, levels: Vec<Vec<String>>, columns: Vec<Vec<u32>>) -> Result<Self> {
        if names.len() != levels.len() || names.len() != columns.len() {
            return Err(Error::invalid("names, levels and columns must have the same length"));
        }
        let n = columns.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::invalid("dataset needs at least one row"));
        }
        for (v, col) in columns.iter().enumerate() {
            if col.len() != n {
                return Err(Error::invalid(format!("column {} has {} rows, expected {n}", names[v], col.len())));
            }
            if levels[v].is_empty() {
                return Err(Error::invalid(format!("variable {} has no levels", names[v])));
            }
            if let Some(&bad) = col.iter().find(|&&x| x as usize >= levels[v].len()) {
                return Err(Error::invalid(format!("level index {bad} out of range for {}", names[v])));
            }
        }
        Ok(CategoricalDataset { names, levels, columns })
    }

    /// `n` rows of mutually independent variables, each uniform over its
    /// levels; deterministic given `seed`.
    pub fn uniform_noise(names: Vec<String>, levels: Vec<Vec<String>>, n: usize, seed: u64) -> Result<Self> {
        let mut rng = substream(seed, 0);
        let mut columns: Vec<Vec<u32>> = vec![Vec::with_capacity(n); names.len()];
        for _ in 0..n {
            for (col, lv) in columns.iter_mut().zip(&levels) {
                col.push(rng.random_range(0..lv.len().max(1)) as u32);
            }
        }
        CategoricalDataset::new(names, levels, columns)
    }

    pub fn n_rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn levels(&self, var: usize) -> &[String] {
        &self.levels[var]
    }

    pub fn level_count(&self, var: usize) -> usize {
        self.levels[var].len()
    }

    pub fn column(&self, var: usize) -> &[u32] {
        &self.columns[var]
    }

    pub fn value(&self, row: usize, var: usize) -> u32 {
        self.columns[var][row]
    }

    /// A dataset made of the given rows (repeats allowed), same levels.
    pub fn resample(&self, rows: &[usize]) -> CategoricalDataset {
        let columns = self.columns.iter().map(|c| rows.iter().map(|&r| c[r]).collect()).collect();
        CategoricalDataset { names: self.names.clone(), levels: self.levels.clone(), columns }
    }

    /// Reads a CSV whose header holds variable names and whose cells hold
    /// level labels. Without a schema, levels are numbered in order of first
    /// appearance.
    pub fn read_csv<R: Read>(input: R, schema: Option<&Schema>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let names: Vec<String> = reader
            .headers()
            .map_err(|e| Error::parse(1, e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if names.is_empty() {
            return Err(Error::parse(1, "empty header"));
        }
        let mut levels: Vec<Vec<String>> = match schema {
            Some(s) => names
                .iter()
                .enumerate()
                .map(|(i, name)| {
                    s.variables
                        .iter()
                        .find(|v| &v.name == name)
                        .map(|v| v.levels.clone())
                        .ok_or_else(|| Error::parse(1, format!("column {} ({name}) missing from schema", i + 1)))
                })
                .collect::<Result<_>>()?,
            None => vec![Vec::new(); names.len()],
        };
        let mut lookup: Vec<HashMap<String, u32>> = levels
            .iter()
            .map(|ls| ls.iter().enumerate().map(|(i, l)| (l.clone(), i as u32)).collect())
            .collect();
        let mut columns = vec![Vec::new(); names.len()];
        for (n, rec) in reader.records().enumerate() {
            let line = n + 2;
            let rec = rec.map_err(|e| Error::parse(line, e.to_string()))?;
            if rec.len() != names.len() {
                return Err(Error::parse(line, format!("expected {} fields, got {}", names.len(), rec.len())));
            }
            for (v, cell) in rec.iter().enumerate() {
                if cell.is_empty() {
                    return Err(Error::parse(line, format!("missing value for {}", names[v])));
                }
                let idx = match lookup[v].get(cell) {
                    Some(&i) => i,
                    None if schema.is_some() => {
                        return Err(Error::parse(line, format!("level {cell:?} not declared for {}", names[v])));
                    }
                    None => {
                        let i = levels[v].len() as u32;
                        levels[v].push(cell.to_string());
                        lookup[v].insert(cell.to_string(), i);
                        i
                    }
                };
                columns[v].push(idx);
            }
        }
        if columns[0].is_empty() {
            return Err(Error::parse(1, "no data rows"));
        }
        CategoricalDataset::new(names, levels, columns)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::invalid(format!("write failed: {e}"));
        w.write_record(&self.names).map_err(io)?;
        for r in 0..self.n_rows() {
            w.write_record((0..self.n_vars()).map(|v| self.levels[v][self.columns[v][r] as usize].as_str()))
                .map_err(io)?;
        }
        w.flush().map_err(|e| Error::invalid(format!("write failed: {e}")))?;
        Ok(())
    }

    pub fn schema(&self) -> Schema {
        Schema {
            variables: self
                .names
                .iter()
                .zip(&self.levels)
                .map(|(name, levels)| VariableSchema { name: name.clone(), levels: levels.clone() })
                .collect(),
        }
    }
}

//! Tabular ingestion: schema files, CSV parsing, one-hot encoding, seeded
//! train/test splits and standardization.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};

pub const SCHEMA_VERSION: u32 = 1;

/// Standard deviations below this are clamped to 1.
pub const MIN_STD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Numeric,
    Categorical,
    Target,
    /// Present in the file but not used as a predictor (row ids and the like).
    Ignored,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSchema {
    pub name: String,
    pub kind: ColumnKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allowed_values: Option<Vec<String>>,
}

impl ColumnSchema {
    pub fn numeric(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: ColumnKind::Numeric,
            allowed_values: None,
        }
    }

    pub fn ignored(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: ColumnKind::Ignored,
            allowed_values: None,
        }
    }

    pub fn categorical<S: Into<String>>(
        name: impl Into<String>,
        values: impl IntoIterator<Item = S>,
    ) -> Self {
        Self {
            name: name.into(),
            kind: ColumnKind::Categorical,
            allowed_values: Some(values.into_iter().map(Into::into).collect()),
        }
    }

    pub fn target<S: Into<String>>(
        name: impl Into<String>,
        values: impl IntoIterator<Item = S>,
    ) -> Self {
        Self {
            name: name.into(),
            kind: ColumnKind::Target,
            allowed_values: Some(values.into_iter().map(Into::into).collect()),
        }
    }
}

/// Ordered column list, serialized as
/// `{"schema_version": 1, "columns": [{"name", "kind", "allowed_values"?}, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub schema_version: u32,
    pub columns: Vec<ColumnSchema>,
}

impl Schema {
    pub fn new(columns: Vec<ColumnSchema>) -> Result<Self> {
        let schema = Self {
            schema_version: SCHEMA_VERSION,
            columns,
        };
        schema.validate()?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema {
                column: String::new(),
                reason: format!(
                    "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                    self.schema_version
                ),
            });
        }
        let mut seen = HashMap::new();
        for c in &self.columns {
            if seen.insert(c.name.as_str(), ()).is_some() {
                return Err(schema_err(&c.name, "duplicate column name"));
            }
            match (&c.kind, &c.allowed_values) {
                (ColumnKind::Numeric | ColumnKind::Ignored, Some(_)) => {
                    return Err(schema_err(
                        &c.name,
                        "allowed_values only applies to categorical and target columns",
                    ))
                }
                (_, Some(values)) => {
                    if values.is_empty() {
                        return Err(schema_err(&c.name, "allowed_values is empty"));
                    }
                    let mut uniq = HashMap::new();
                    for v in values {
                        if uniq.insert(v.as_str(), ()).is_some() {
                            return Err(schema_err(
                                &c.name,
                                &format!("allowed value `{v}` listed twice"),
                            ));
                        }
                    }
                }
                _ => {}
            }
        }
        let targets = self
            .columns
            .iter()
            .filter(|c| c.kind == ColumnKind::Target)
            .count();
        if targets != 1 {
            return Err(schema_err(
                "",
                &format!("schema needs exactly one target column, found {targets}"),
            ));
        }
        Ok(())
    }

    pub fn target(&self) -> &ColumnSchema {
        self.columns
            .iter()
            .find(|c| c.kind == ColumnKind::Target)
            .expect("validated schema has a target")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let schema: Schema = serde_json::from_str(text)?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Copy of the schema with every categorical and target column's
    /// `allowed_values` filled in from `table` (first-appearance order) when
    /// the schema leaves it open.
    pub fn resolve(&self, table: &RawTable) -> Result<Schema> {
        let positions = table.positions(self, false)?;
        let mut out = self.clone();
        for (col, pos) in out.columns.iter_mut().zip(positions) {
            let Some(pos) = pos else { continue };
            if matches!(col.kind, ColumnKind::Categorical | ColumnKind::Target)
                && col.allowed_values.is_none()
            {
                let mut values: Vec<String> = Vec::new();
                for row in &table.rows {
                    let v = row[pos].trim();
                    if !values.iter().any(|x| x == v) {
                        values.push(v.to_string());
                    }
                }
                if values.is_empty() {
                    return Err(schema_err(&col.name, "no values observed"));
                }
                col.allowed_values = Some(values);
            }
        }
        Ok(out)
    }
}

fn schema_err(column: &str, reason: &str) -> Error {
    Error::Schema {
        column: column.to_string(),
        reason: reason.to_string(),
    }
}

/// Unparsed CSV contents: a header and string cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl RawTable {
    pub fn read<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let header = rdr
            .headers()?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for record in rdr.records() {
            rows.push(record?.iter().map(str::to_string).collect());
        }
        Ok(Self { header, rows })
    }

    pub fn read_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(std::io::BufReader::new(file))
    }

    pub fn write<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv writer emits UTF-8"))
    }

    /// Header position of every schema column. When `require_target` is
    /// false a missing target column maps to `None`.
    fn positions(&self, schema: &Schema, require_target: bool) -> Result<Vec<Option<usize>>> {
        let index: HashMap<&str, usize> = self
            .header
            .iter()
            .enumerate()
            .map(|(i, h)| (h.as_str(), i))
            .collect();
        if index.len() != self.header.len() {
            let dup = self
                .header
                .iter()
                .find(|h| self.header.iter().filter(|x| x == h).count() > 1)
                .cloned()
                .unwrap_or_default();
            return Err(schema_err(&dup, "duplicate header name"));
        }
        let mut out = Vec::with_capacity(schema.columns.len());
        for col in &schema.columns {
            match index.get(col.name.as_str()) {
                Some(&p) => out.push(Some(p)),
                None if col.kind == ColumnKind::Target && !require_target => out.push(None),
                None => return Err(schema_err(&col.name, "missing from CSV header")),
            }
        }
        if let Some(extra) = self
            .header
            .iter()
            .find(|h| !schema.columns.iter().any(|c| &c.name == *h))
        {
            return Err(schema_err(extra, "column is not in the schema"));
        }
        Ok(out)
    }
}

/// Encoded feature matrix with class-index targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: DenseMatrix,
    pub targets: Vec<usize>,
    pub feature_names: Vec<String>,
    pub class_names: Vec<String>,
    pub n_raw_columns: usize,
}

impl Dataset {
    pub fn new(
        features: DenseMatrix,
        targets: Vec<usize>,
        feature_names: Vec<String>,
        class_names: Vec<String>,
        n_raw_columns: usize,
    ) -> Result<Self> {
        if features.rows() != targets.len() {
            return Err(Error::Dimension(format!(
                "{} feature rows but {} targets",
                features.rows(),
                targets.len()
            )));
        }
        if feature_names.len() != features.cols() {
            return Err(Error::Dimension(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                features.cols()
            )));
        }
        if let Some((row, &t)) = targets
            .iter()
            .enumerate()
            .find(|(_, &t)| t >= class_names.len())
        {
            return Err(Error::Label {
                row,
                column: "<target>".into(),
                value: t.to_string(),
            });
        }
        Ok(Self {
            features,
            targets,
            feature_names,
            class_names,
            n_raw_columns,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.targets.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Rows at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select_rows(indices),
            targets: indices.iter().map(|&i| self.targets[i]).collect(),
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
            n_raw_columns: self.n_raw_columns,
        }
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &t in &self.targets {
            counts[t] += 1;
        }
        counts
    }

    pub fn with_features(&self, features: DenseMatrix) -> Result<Dataset> {
        Dataset::new(
            features,
            self.targets.clone(),
            self.feature_names.clone(),
            self.class_names.clone(),
            self.n_raw_columns,
        )
    }
}

/// Output column names for a resolved schema: numeric columns keep their
/// name, categorical columns expand to `name=value`.
pub fn feature_names(schema: &Schema) -> Vec<String> {
    let mut names = Vec::new();
    for col in &schema.columns {
        match col.kind {
            ColumnKind::Numeric => names.push(col.name.clone()),
            ColumnKind::Categorical => {
                for v in col.allowed_values.iter().flatten() {
                    names.push(format!("{}={v}", col.name));
                }
            }
            ColumnKind::Target | ColumnKind::Ignored => {}
        }
    }
    names
}

fn encode_inner(
    table: &RawTable,
    schema: &Schema,
    require_target: bool,
) -> Result<(DenseMatrix, Option<Vec<usize>>, Schema)> {
    schema.validate()?;
    let resolved = schema.resolve(table)?;
    let positions = table.positions(&resolved, require_target)?;
    let names = feature_names(&resolved);
    let width = names.len();
    let mut values = Vec::with_capacity(table.rows.len() * width);
    let target_pos = resolved
        .columns
        .iter()
        .zip(&positions)
        .find(|(c, _)| c.kind == ColumnKind::Target)
        .and_then(|(_, p)| *p);
    let mut targets = target_pos.map(|_| Vec::with_capacity(table.rows.len()));

    for (r, row) in table.rows.iter().enumerate() {
        if row.len() != table.header.len() {
            return Err(Error::Parse {
                row: r,
                column: String::new(),
                value: format!("{} cells, expected {}", row.len(), table.header.len()),
            });
        }
        for (col, pos) in resolved.columns.iter().zip(&positions) {
            let Some(pos) = *pos else { continue };
            let cell = row[pos].trim();
            match col.kind {
                ColumnKind::Numeric => {
                    let v: f64 = cell
                        .parse()
                        .ok()
                        .filter(|v: &f64| v.is_finite())
                        .ok_or_else(|| Error::Parse {
                            row: r,
                            column: col.name.clone(),
                            value: cell.to_string(),
                        })?;
                    values.push(v);
                }
                ColumnKind::Categorical => {
                    let allowed = col.allowed_values.as_deref().unwrap_or_default();
                    let hit =
                        allowed
                            .iter()
                            .position(|a| a == cell)
                            .ok_or_else(|| Error::Label {
                                row: r,
                                column: col.name.clone(),
                                value: cell.to_string(),
                            })?;
                    values.extend((0..allowed.len()).map(|k| if k == hit { 1.0 } else { 0.0 }));
                }
                ColumnKind::Target => {
                    let allowed = col.allowed_values.as_deref().unwrap_or_default();
                    let hit =
                        allowed
                            .iter()
                            .position(|a| a == cell)
                            .ok_or_else(|| Error::Label {
                                row: r,
                                column: col.name.clone(),
                                value: cell.to_string(),
                            })?;
                    if let Some(t) = targets.as_mut() {
                        t.push(hit);
                    }
                }
                ColumnKind::Ignored => {}
            }
        }
    }
    let features = DenseMatrix::new(table.rows.len(), width, values)?;
    Ok((features, targets, resolved))
}

/// Encodes a raw table into a [`Dataset`]. Returns the resolved schema
/// (open categorical value lists filled in) alongside it.
pub fn encode(table: &RawTable, schema: &Schema) -> Result<(Dataset, Schema)> {
    let (features, targets, resolved) = encode_inner(table, schema, true)?;
    let targets = targets.expect("target required");
    let class_names = resolved
        .target()
        .allowed_values
        .clone()
        .expect("resolved target has values");
    let names = feature_names(&resolved);
    let ds = Dataset::new(features, targets, names, class_names, table.header.len())?;
    Ok((ds, resolved))
}

/// Encodes only the predictors; a target column, if present, is checked
/// against the schema and then dropped.
pub fn encode_features(table: &RawTable, schema: &Schema) -> Result<DenseMatrix> {
    let (features, _, _) = encode_inner(table, schema, false)?;
    Ok(features)
}

/// Reads and encodes a CSV file. Numeric columns are parsed as floats,
/// categorical columns become one indicator column per value, and the target
/// column maps to indices into `class_names`. Row order is preserved.
pub fn load_csv(path: impl AsRef<Path>, schema: &Schema) -> Result<Dataset> {
    let table = RawTable::read_path(path)?;
    Ok(encode(&table, schema)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(train_fraction: f64, seed: u64) -> Result<Self> {
        let spec = Self {
            train_fraction,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Parameter(format!(
                "train_fraction must lie in (0, 1), got {}",
                self.train_fraction
            )));
        }
        Ok(())
    }

    /// ⌊rows·fraction + 0.5⌋
    pub fn train_size(&self, rows: usize) -> usize {
        (rows as f64 * self.train_fraction + 0.5).floor() as usize
    }
}

/// Seeded permutation of `0..rows`, cut into (train, test) index lists.
pub fn split_indices(rows: usize, spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    spec.validate()?;
    if rows < 2 {
        return Err(Error::Split(format!("need at least 2 rows, got {rows}")));
    }
    let n_train = spec.train_size(rows);
    if n_train < 1 || n_train >= rows {
        return Err(Error::Split(format!(
            "{rows} rows at fraction {} leaves {n_train} train and {} test rows",
            spec.train_fraction,
            rows.saturating_sub(n_train)
        )));
    }
    let mut idx: Vec<usize> = (0..rows).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    idx.shuffle(&mut rng);
    let test = idx.split_off(n_train);
    Ok((idx, test))
}

pub fn split(ds: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    let (train, test) = split_indices(ds.n_rows(), spec)?;
    Ok((ds.select(&train), ds.select(&test)))
}

/// Per-column mean and population standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub means: DenseVector,
    pub stds: DenseVector,
}

impl ScalerParams {
    /// Zero means, unit deviations.
    pub fn identity(cols: usize) -> Self {
        Self {
            means: DenseVector::zeros(cols),
            stds: DenseVector::from_vec_unchecked(vec![1.0; cols]),
        }
    }

    fn check(&self, x: &DenseMatrix) -> Result<()> {
        if self.means.len() != self.stds.len() || x.cols() != self.means.len() {
            return Err(Error::Dimension(format!(
                "scaler fitted on {} columns applied to {}",
                self.means.len(),
                x.cols()
            )));
        }
        Ok(())
    }
}

pub fn fit_scaler(x: &DenseMatrix) -> Result<ScalerParams> {
    if x.rows() == 0 {
        return Err(Error::Dimension("cannot fit a scaler on zero rows".into()));
    }
    let n = x.rows() as f64;
    let cols = x.cols();
    let mut means = vec![0.0; cols];
    for row in x.row_iter() {
        for (m, v) in means.iter_mut().zip(row) {
            *m += v;
        }
    }
    means.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; cols];
    for row in x.row_iter() {
        for ((s, v), m) in var.iter_mut().zip(row).zip(&means) {
            *s += (v - m) * (v - m);
        }
    }
    let stds = var
        .into_iter()
        .map(|s| {
            let sd = (s / n).sqrt();
            if sd < MIN_STD {
                1.0
            } else {
                sd
            }
        })
        .collect();
    Ok(ScalerParams {
        means: DenseVector::from_vec_unchecked(means),
        stds: DenseVector::from_vec_unchecked(stds),
    })
}

/// (x − mean) / std, column-wise.
pub fn transform(p: &ScalerParams, x: &DenseMatrix) -> Result<DenseMatrix> {
    p.check(x)?;
    let mut values = x.as_slice().to_vec();
    let cols = x.cols().max(1);
    for row in values.chunks_exact_mut(cols) {
        for ((v, m), s) in row.iter_mut().zip(p.means.iter()).zip(p.stds.iter()) {
            *v = (*v - m) / s;
        }
    }
    DenseMatrix::new(x.rows(), x.cols(), values)
}

pub fn inverse_transform(p: &ScalerParams, z: &DenseMatrix) -> Result<DenseMatrix> {
    p.check(z)?;
    let mut values = z.as_slice().to_vec();
    let cols = z.cols().max(1);
    for row in values.chunks_exact_mut(cols) {
        for ((v, m), s) in row.iter_mut().zip(p.means.iter()).zip(p.stds.iter()) {
            *v = *v * s + m;
        }
    }
    DenseMatrix::new(z.rows(), z.cols(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(csv: &str) -> RawTable {
        RawTable::read(csv.as_bytes()).unwrap()
    }

    fn schema_xy() -> Schema {
        Schema::new(vec![
            ColumnSchema::numeric("x"),
            ColumnSchema::target("Target", ["A", "B"]),
        ])
        .unwrap()
    }

    #[test]
    fn transcribes_numeric_and_target() {
        let (ds, _) = encode(&table("x,Target\n1.5,A\n2.5,B\n"), &schema_xy()).unwrap();
        assert_eq!(ds.features.as_slice(), &[1.5, 2.5]);
        assert_eq!(ds.targets, vec![0, 1]);
        assert_eq!(ds.feature_names, vec!["x"]);
    }

    #[test]
    fn header_order_does_not_matter() {
        let (ds, _) = encode(&table("Target,x\nB,1.5\nA,2.5\n"), &schema_xy()).unwrap();
        assert_eq!(ds.features.as_slice(), &[1.5, 2.5]);
        assert_eq!(ds.targets, vec![1, 0]);
    }

    #[test]
    fn one_hot_in_first_appearance_order() {
        let schema = Schema::new(vec![
            ColumnSchema {
                name: "color".into(),
                kind: ColumnKind::Categorical,
                allowed_values: None,
            },
            ColumnSchema::target("y", ["0"]),
        ])
        .unwrap();
        let (ds, resolved) = encode(&table("color,y\nred,0\nblue,0\nred,0\n"), &schema).unwrap();
        assert_eq!(ds.feature_names, vec!["color=red", "color=blue"]);
        assert_eq!(ds.features.as_slice(), &[1.0, 0.0, 0.0, 1.0, 1.0, 0.0]);
        assert_eq!(
            resolved.columns[0].allowed_values.as_deref(),
            Some(&["red".to_string(), "blue".to_string()][..])
        );
    }

    #[test]
    fn graduate_maps_to_first_class() {
        let schema = Schema::new(vec![
            ColumnSchema::numeric("age"),
            ColumnSchema::target("Target", ["Graduate", "Dropout", "Enrolled"]),
        ])
        .unwrap();
        let (ds, _) = encode(&table("age,Target\n20,Graduate\n"), &schema).unwrap();
        assert_eq!(ds.targets, vec![0]);
    }

    #[test]
    fn schema_errors_name_the_column() {
        let err = encode(&table("Target\nA\n"), &schema_xy()).unwrap_err();
        assert!(matches!(err, Error::Schema { ref column, .. } if column == "x"));
        let err = encode(&table("x,z,Target\n1,2,A\n"), &schema_xy()).unwrap_err();
        assert!(matches!(err, Error::Schema { ref column, .. } if column == "z"));
    }

    #[test]
    fn parse_and_label_errors() {
        let err = encode(&table("x,Target\n1,A\nabc,B\n"), &schema_xy()).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 1, ref column, .. } if column == "x"));
        // missing cells are not imputed
        let err = encode(&table("x,Target\n,A\n"), &schema_xy()).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 0, .. }));
        let err = encode(&table("x,Target\n1,C\n"), &schema_xy()).unwrap_err();
        assert!(matches!(err, Error::Label { ref value, .. } if value == "C"));
    }

    #[test]
    fn schema_validation() {
        assert!(Schema::new(vec![ColumnSchema::numeric("x")]).is_err());
        assert!(Schema::new(vec![
            ColumnSchema::target("a", ["x"]),
            ColumnSchema::target("b", ["x"])
        ])
        .is_err());
        assert!(Schema::new(vec![ColumnSchema::target("t", ["a", "a"])]).is_err());
        assert!(Schema::new(vec![ColumnSchema::target("t", Vec::<String>::new())]).is_err());
        let json = schema_xy().to_json().unwrap();
        assert_eq!(Schema::from_json(&json).unwrap(), schema_xy());
        assert!(
            Schema::from_json(&json.replace("\"schema_version\": 1", "\"schema_version\": 2"))
                .is_err()
        );
    }

    #[test]
    fn encode_features_tolerates_missing_target() {
        let x = encode_features(&table("x\n4\n5\n"), &schema_xy()).unwrap();
        assert_eq!(x.as_slice(), &[4.0, 5.0]);
    }

    fn numbered(rows: usize) -> Dataset {
        let x = DenseMatrix::new(rows, 1, (0..rows).map(|i| i as f64).collect()).unwrap();
        Dataset::new(x, vec![0; rows], vec!["i".into()], vec!["only".into()], 2).unwrap()
    }

    #[test]
    fn split_sizes() {
        let spec = SplitSpec::new(0.7, 1).unwrap();
        let (tr, te) = split(&numbered(10), &spec).unwrap();
        assert_eq!((tr.n_rows(), te.n_rows()), (7, 3));
        assert_eq!(spec.train_size(76_519), 53_563);
        assert_eq!(76_519 - spec.train_size(76_519), 22_956);
    }

    #[test]
    fn split_is_deterministic_and_seed_sensitive() {
        let spec = SplitSpec::new(0.7, 99).unwrap();
        assert_eq!(
            split_indices(20, &spec).unwrap(),
            split_indices(20, &spec).unwrap()
        );
        let other = SplitSpec::new(0.7, 100).unwrap();
        assert_ne!(
            split_indices(20, &spec).unwrap(),
            split_indices(20, &other).unwrap()
        );
    }

    #[test]
    fn split_errors() {
        assert!(SplitSpec::new(1.0, 0).is_err());
        assert!(SplitSpec::new(0.0, 0).is_err());
        let spec = SplitSpec::new(0.7, 0).unwrap();
        assert!(matches!(split(&numbered(1), &spec), Err(Error::Split(_))));
        // 2 rows at 0.9 rounds to 2 train, 0 test
        let spec = SplitSpec::new(0.9, 0).unwrap();
        assert!(matches!(split(&numbered(2), &spec), Err(Error::Split(_))));
    }

    #[test]
    fn scaler_examples() {
        let x = DenseMatrix::new(3, 1, vec![1.0, 2.0, 3.0]).unwrap();
        let p = fit_scaler(&x).unwrap();
        assert_eq!(p.means[0], 2.0);
        assert!((p.stds[0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let z = transform(&p, &x).unwrap();
        for (got, want) in z
            .as_slice()
            .iter()
            .zip([-1.224744871391589, 0.0, 1.224744871391589])
        {
            assert!((got - want).abs() < 1e-12);
        }

        let c = fit_scaler(&DenseMatrix::new(3, 1, vec![5.0; 3]).unwrap()).unwrap();
        assert_eq!((c.means[0], c.stds[0]), (5.0, 1.0));
        let single = fit_scaler(&DenseMatrix::new(1, 1, vec![0.0]).unwrap()).unwrap();
        assert_eq!((single.means[0], single.stds[0]), (0.0, 1.0));

        let id = ScalerParams::identity(1);
        assert_eq!(transform(&id, &x).unwrap(), x);
        assert!(fit_scaler(&DenseMatrix::zeros(0, 2)).is_err());
        assert!(transform(&p, &DenseMatrix::zeros(1, 2)).is_err());
    }

    proptest! {
        #[test]
        fn scaler_standardizes_and_round_trips(
            rows in 2usize..30,
            seed in proptest::collection::vec(-1e3..1e3f64, 90)
        ) {
            let cols = 3;
            let values: Vec<f64> = (0..rows * cols).map(|k| seed[k % seed.len()] * (1.0 + (k / seed.len()) as f64)).collect();
            let x = DenseMatrix::new(rows, cols, values).unwrap();
            let p = fit_scaler(&x).unwrap();
            let z = transform(&p, &x).unwrap();
            let back = inverse_transform(&p, &z).unwrap();
            for (a, b) in back.as_slice().iter().zip(x.as_slice()) {
                prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
            }
            for j in 0..cols {
                let col = z.column(j);
                let mean = col.iter().sum::<f64>() / rows as f64;
                prop_assert!(mean.abs() <= 1e-9);
                if p.stds[j] != 1.0 || x.column(j).iter().any(|v| *v != x.get(0, j)) {
                    let sd = (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / rows as f64).sqrt();
                    prop_assert!((sd - 1.0).abs() <= 1e-9);
                }
            }
        }

        #[test]
        fn split_partitions_rows(rows in 2usize..200, frac in 0.05..0.95f64, seed: u64) {
            let spec = SplitSpec::new(frac, seed).unwrap();
            if let Ok((tr, te)) = split_indices(rows, &spec) {
                prop_assert_eq!(tr.len() + te.len(), rows);
                let mut all: Vec<usize> = tr.iter().chain(&te).copied().collect();
                all.sort_unstable();
                prop_assert_eq!(all, (0..rows).collect::<Vec<_>>());
            }
        }

        #[test]
        fn one_hot_rows_sum_to_one(labels in proptest::collection::vec(0usize..4, 1..40)) {
            let names = ["a", "b", "c", "d"];
            let mut csv = String::from("c,t\n");
            for l in &labels {
                csv.push_str(&format!("{},y\n", names[*l]));
            }
            let schema = Schema::new(vec![
                ColumnSchema::categorical("c", names),
                ColumnSchema::target("t", ["y"]),
            ]).unwrap();
            let (ds, _) = encode(&table(&csv), &schema).unwrap();
            for row in ds.features.row_iter() {
                prop_assert_eq!(row.iter().sum::<f64>(), 1.0);
            }
        }
    }
}

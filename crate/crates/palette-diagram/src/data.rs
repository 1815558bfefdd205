//! Parsing and validation of categorical data collections.
//!
//! A collection is an `N x K` matrix of nonnegative values: `N` datasets,
//! each assigning a quantity to the same `K` categories. Inputs arrive as
//! CSV or JSON documents and are validated on construction; every other
//! module operates on a checked [`DataMatrix`].

use serde::Serialize;
use serde_json::Value;

use crate::error::{PaletteError, Result};

/// A validated `N x K` matrix of nonnegative values with optional category
/// names.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Vec<Vec<f64>>,
    category_names: Option<Vec<String>>,
}

impl DataMatrix {
    /// Build a matrix from rows, validating shape and nonnegativity.
    pub fn new(values: Vec<Vec<f64>>, category_names: Option<Vec<String>>) -> Result<Self> {
        if values.is_empty() {
            return Err(PaletteError::EmptyInput);
        }
        let k = values[0].len();
        if k == 0 {
            return Err(PaletteError::EmptyInput);
        }
        for (row, r) in values.iter().enumerate() {
            if r.len() != k {
                return Err(PaletteError::RaggedRows {
                    row,
                    found: r.len(),
                    expected: k,
                });
            }
            for (col, &v) in r.iter().enumerate() {
                if !v.is_finite() {
                    return Err(PaletteError::NotNumeric {
                        row,
                        col,
                        text: v.to_string(),
                    });
                }
                if v < 0.0 {
                    return Err(PaletteError::NegativeValue { row, col, value: v });
                }
            }
        }
        if let Some(names) = &category_names {
            if names.len() != k {
                return Err(PaletteError::MalformedDocument(format!(
                    "{} category names for {} columns",
                    names.len(),
                    k
                )));
            }
        }
        Ok(DataMatrix {
            values,
            category_names,
        })
    }

    /// Number of datasets `N`.
    pub fn n_rows(&self) -> usize {
        self.values.len()
    }

    /// Number of categories `K`.
    pub fn n_cols(&self) -> usize {
        self.values[0].len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn category_names(&self) -> Option<&[String]> {
        self.category_names.as_deref()
    }

    /// Sum of column `k` over all rows.
    pub fn column_sum(&self, k: usize) -> f64 {
        self.values.iter().map(|r| r[k]).sum()
    }

    /// Serialize to the JSON document format accepted by [`parse_json`].
    ///
    /// Round-trips exactly: `parse_json(m.to_json().as_bytes()) == m`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            #[serde(skip_serializing_if = "Option::is_none")]
            categories: Option<&'a [String]>,
            data: &'a [Vec<f64>],
        }
        match &self.category_names {
            Some(names) => serde_json::to_string(&Doc {
                categories: Some(names),
                data: &self.values,
            })
            .expect("matrix serialization cannot fail"),
            None => serde_json::to_string(&self.values).expect("matrix serialization cannot fail"),
        }
    }
}

/// Parse CSV text: comma-separated decimal fields, optional header row with
/// category names. Whitespace around fields is trimmed; trailing blank lines
/// are ignored.
pub fn parse_csv(bytes: &[u8], has_header: bool) -> Result<DataMatrix> {
    let text = std::str::from_utf8(bytes).map_err(|_| PaletteError::InvalidUtf8)?;
    let mut lines: Vec<&str> = text.split('\n').collect();
    while lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }
    if lines.is_empty() {
        return Err(PaletteError::EmptyInput);
    }

    let mut names = None;
    let mut data_lines = &lines[..];
    if has_header {
        names = Some(
            lines[0]
                .split(',')
                .map(|f| f.trim().to_string())
                .collect::<Vec<_>>(),
        );
        data_lines = &lines[1..];
    }
    if data_lines.is_empty() {
        return Err(PaletteError::EmptyInput);
    }

    let mut values = Vec::with_capacity(data_lines.len());
    let mut expected = names.as_ref().map(|n| n.len());
    for (row, line) in data_lines.iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        let expected = *expected.get_or_insert(fields.len());
        if fields.len() != expected {
            return Err(PaletteError::RaggedRows {
                row,
                found: fields.len(),
                expected,
            });
        }
        let mut parsed = Vec::with_capacity(fields.len());
        for (col, field) in fields.iter().enumerate() {
            parsed.push(parse_field(field, row, col)?);
        }
        values.push(parsed);
    }
    DataMatrix::new(values, names)
}

fn parse_field(field: &str, row: usize, col: usize) -> Result<f64> {
    let trimmed = field.trim();
    let not_numeric = || PaletteError::NotNumeric {
        row,
        col,
        text: trimmed.to_string(),
    };
    let v: f64 = trimmed.parse().map_err(|_| not_numeric())?;
    if !v.is_finite() {
        return Err(not_numeric());
    }
    if v < 0.0 {
        return Err(PaletteError::NegativeValue { row, col, value: v });
    }
    Ok(v)
}

/// Parse a JSON document: either an array of equal-length numeric arrays, or
/// an object with a `"data"` array and an optional `"categories"` string
/// list.
pub fn parse_json(bytes: &[u8]) -> Result<DataMatrix> {
    let text = std::str::from_utf8(bytes).map_err(|_| PaletteError::InvalidUtf8)?;
    let doc: Value =
        serde_json::from_str(text).map_err(|e| PaletteError::MalformedDocument(e.to_string()))?;

    let (names, data) = match &doc {
        Value::Array(rows) => (None, rows),
        Value::Object(map) => {
            let data = match map.get("data") {
                Some(Value::Array(rows)) => rows,
                Some(_) => {
                    return Err(PaletteError::MalformedDocument(
                        "\"data\" must be an array of arrays".into(),
                    ))
                }
                None => {
                    return Err(PaletteError::MalformedDocument(
                        "missing \"data\" key".into(),
                    ))
                }
            };
            let names = match map.get("categories") {
                Some(Value::Array(items)) => {
                    let mut names = Vec::with_capacity(items.len());
                    for item in items {
                        match item {
                            Value::String(s) => names.push(s.clone()),
                            other => {
                                return Err(PaletteError::MalformedDocument(format!(
                                    "category name is not a string: {other}"
                                )))
                            }
                        }
                    }
                    Some(names)
                }
                Some(other) => {
                    return Err(PaletteError::MalformedDocument(format!(
                        "\"categories\" must be an array of strings, got {other}"
                    )))
                }
                None => None,
            };
            (names, data)
        }
        other => {
            return Err(PaletteError::MalformedDocument(format!(
                "expected array or object at top level, got {other}"
            )))
        }
    };

    if data.is_empty() {
        return Err(PaletteError::EmptyInput);
    }
    let mut values = Vec::with_capacity(data.len());
    let mut expected = None;
    for (row, item) in data.iter().enumerate() {
        let Value::Array(fields) = item else {
            return Err(PaletteError::MalformedDocument(format!(
                "row {row} is not an array"
            )));
        };
        let expected = *expected.get_or_insert(fields.len());
        if fields.len() != expected {
            return Err(PaletteError::RaggedRows {
                row,
                found: fields.len(),
                expected,
            });
        }
        let mut parsed = Vec::with_capacity(fields.len());
        for (col, field) in fields.iter().enumerate() {
            let v = field.as_f64().ok_or_else(|| PaletteError::NotNumeric {
                row,
                col,
                text: field.to_string(),
            })?;
            if !v.is_finite() {
                return Err(PaletteError::NotNumeric {
                    row,
                    col,
                    text: field.to_string(),
                });
            }
            if v < 0.0 {
                return Err(PaletteError::NegativeValue { row, col, value: v });
            }
            parsed.push(v);
        }
        values.push(parsed);
    }
    DataMatrix::new(values, names)
}

/// Scale each row to sum to 1, preserving within-row proportions.
pub fn normalize_rows(m: &DataMatrix) -> Result<DataMatrix> {
    let mut values = Vec::with_capacity(m.n_rows());
    for (row, r) in m.rows().iter().enumerate() {
        let sum: f64 = r.iter().sum();
        if sum == 0.0 {
            return Err(PaletteError::ZeroRow(row));
        }
        values.push(r.iter().map(|v| v / sum).collect());
    }
    DataMatrix::new(values, m.category_names.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_without_header() {
        let m = parse_csv(b"1,2\n3,4\n", false).unwrap();
        assert_eq!(m.rows(), &[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!((m.n_rows(), m.n_cols()), (2, 2));
        assert!(m.category_names().is_none());
    }

    #[test]
    fn csv_with_header() {
        let m = parse_csv(b"a,b\n1,0\n", true).unwrap();
        assert_eq!(m.rows(), &[vec![1.0, 0.0]]);
        assert_eq!(m.category_names().unwrap(), ["a", "b"]);
    }

    #[test]
    fn csv_negative_value_rejected() {
        let err = parse_csv(b"1,-2\n", false).unwrap_err();
        assert!(matches!(
            err,
            PaletteError::NegativeValue { row: 0, col: 1, .. }
        ));
    }

    #[test]
    fn csv_ragged_rows_rejected() {
        let err = parse_csv(b"1,2\n3\n", false).unwrap_err();
        assert!(matches!(
            err,
            PaletteError::RaggedRows {
                row: 1,
                found: 1,
                expected: 2
            }
        ));
    }

    #[test]
    fn csv_header_width_mismatch_rejected() {
        let err = parse_csv(b"a,b,c\n1,2\n", true).unwrap_err();
        assert!(matches!(
            err,
            PaletteError::RaggedRows {
                row: 0,
                found: 2,
                expected: 3
            }
        ));
    }

    #[test]
    fn csv_not_numeric_rejected() {
        let err = parse_csv(b"1,x\n", false).unwrap_err();
        assert!(matches!(err, PaletteError::NotNumeric { row: 0, col: 1, .. }));
    }

    #[test]
    fn csv_rejects_non_finite() {
        assert!(matches!(
            parse_csv(b"1,inf\n", false).unwrap_err(),
            PaletteError::NotNumeric { .. }
        ));
        assert!(matches!(
            parse_csv(b"NaN\n", false).unwrap_err(),
            PaletteError::NotNumeric { .. }
        ));
    }

    #[test]
    fn csv_empty_input() {
        assert!(matches!(
            parse_csv(b"", false).unwrap_err(),
            PaletteError::EmptyInput
        ));
        assert!(matches!(
            parse_csv(b"\n\n", false).unwrap_err(),
            PaletteError::EmptyInput
        ));
        // A header with no data rows is still empty.
        assert!(matches!(
            parse_csv(b"a,b\n", true).unwrap_err(),
            PaletteError::EmptyInput
        ));
    }

    #[test]
    fn csv_trims_whitespace_and_trailing_blank_line() {
        let m = parse_csv(b" 1 ,\t2\r\n3, 4 \n\n", false).unwrap();
        assert_eq!(m.rows(), &[vec![1.0, 2.0], vec![3.0, 4.0]]);
    }

    #[test]
    fn csv_invalid_utf8() {
        assert!(matches!(
            parse_csv(&[0xff, 0xfe, 0x31], false).unwrap_err(),
            PaletteError::InvalidUtf8
        ));
    }

    #[test]
    fn json_array_form() {
        let m = parse_json(b"[[1,2],[3,4]]").unwrap();
        assert_eq!(m.rows(), &[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert!(m.category_names().is_none());
    }

    #[test]
    fn json_object_form() {
        let m = parse_json(br#"{"categories":["a","b"],"data":[[1,0]]}"#).unwrap();
        assert_eq!(m.rows(), &[vec![1.0, 0.0]]);
        assert_eq!(m.category_names().unwrap(), ["a", "b"]);
    }

    #[test]
    fn json_object_without_categories() {
        let m = parse_json(br#"{"data":[[1,0]]}"#).unwrap();
        assert!(m.category_names().is_none());
    }

    #[test]
    fn json_ragged_rows() {
        let err = parse_json(b"[[1],[1,2]]").unwrap_err();
        assert!(matches!(
            err,
            PaletteError::RaggedRows {
                row: 1,
                found: 2,
                expected: 1
            }
        ));
    }

    #[test]
    fn json_malformed() {
        assert!(matches!(
            parse_json(b"{not json").unwrap_err(),
            PaletteError::MalformedDocument(_)
        ));
        assert!(matches!(
            parse_json(b"42").unwrap_err(),
            PaletteError::MalformedDocument(_)
        ));
        assert!(matches!(
            parse_json(br#"{"categories":["a"],"data":[[1,0]]}"#).unwrap_err(),
            PaletteError::MalformedDocument(_)
        ));
        assert!(matches!(
            parse_json(br#"{"data":[["1","0"]]}"#).unwrap_err(),
            PaletteError::NotNumeric { .. }
        ));
    }

    #[test]
    fn json_negative_and_empty() {
        assert!(matches!(
            parse_json(b"[[1,-2]]").unwrap_err(),
            PaletteError::NegativeValue { .. }
        ));
        assert!(matches!(
            parse_json(b"[]").unwrap_err(),
            PaletteError::EmptyInput
        ));
    }

    #[test]
    fn normalize_simple() {
        let m = DataMatrix::new(vec![vec![1.0, 3.0]], None).unwrap();
        assert_eq!(normalize_rows(&m).unwrap().rows(), &[vec![0.25, 0.75]]);
    }

    #[test]
    fn normalize_zero_row() {
        let m = DataMatrix::new(vec![vec![0.0, 0.0]], None).unwrap();
        assert!(matches!(
            normalize_rows(&m).unwrap_err(),
            PaletteError::ZeroRow(0)
        ));
    }

    #[test]
    fn normalize_mixed_rows() {
        let m = DataMatrix::new(vec![vec![2.0, 2.0], vec![5.0, 0.0]], None).unwrap();
        let n = normalize_rows(&m).unwrap();
        assert_eq!(n.rows(), &[vec![0.5, 0.5], vec![1.0, 0.0]]);
    }

    #[test]
    fn normalize_rows_sum_to_one() {
        let m = DataMatrix::new(vec![vec![0.3, 1.9, 2.4], vec![7.0, 0.1, 0.01]], None).unwrap();
        let n = normalize_rows(&m).unwrap();
        for r in n.rows() {
            assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn json_round_trip_exact() {
        let m = DataMatrix::new(
            vec![vec![0.1, 2.5e-7, 3.0], vec![1.0 / 3.0, 0.0, 9.9]],
            Some(vec!["a".into(), "b c".into(), "d\"e".into()]),
        )
        .unwrap();
        assert_eq!(parse_json(m.to_json().as_bytes()).unwrap(), m);
        let bare = DataMatrix::new(vec![vec![1.0, 2.0]], None).unwrap();
        assert_eq!(parse_json(bare.to_json().as_bytes()).unwrap(), bare);
    }
}

use std::fmt::Write;
use std::str::FromStr;

use crate::term::Term;
use crate::vocab::PrefixTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Tsv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(OutputFormat::Tsv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}', expected tsv or json")),
        }
    }
}

/// Query answers: one row per solution, columns in `SELECT` order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BindingTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

impl BindingTable {
    /// Single-column table, used for DL answers.
    pub fn column<'a>(name: &str, terms: impl IntoIterator<Item = &'a Term>) -> Self {
        BindingTable {
            header: vec![name.to_string()],
            rows: terms.into_iter().map(|t| vec![t.clone()]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values of one column, in row order.
    pub fn values(&self, var: &str) -> Vec<&Term> {
        match self.header.iter().position(|h| h == var) {
            Some(i) => self.rows.iter().map(|r| &r[i]).collect(),
            None => Vec::new(),
        }
    }

    pub fn render(&self, format: OutputFormat, prefixes: &PrefixTable) -> String {
        match format {
            OutputFormat::Tsv => self.to_tsv(prefixes),
            OutputFormat::Json => self.to_json(prefixes),
        }
    }

    /// Header line of `?var` names, then one tab-separated line per row.
    pub fn to_tsv(&self, prefixes: &PrefixTable) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.header.iter().map(|h| format!("?{h}")).collect();
        let _ = writeln!(out, "{}", header.join("\t"));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|t| t.display_with(prefixes).to_string()).collect();
            let _ = writeln!(out, "{}", cells.join("\t"));
        }
        out
    }

    /// Array of `{variable: term}` objects.
    pub fn to_json(&self, prefixes: &PrefixTable) -> String {
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows
            .iter()
            .map(|row| {
                self.header
                    .iter()
                    .zip(row)
                    .map(|(h, t)| (h.clone(), serde_json::Value::String(t.display_with(prefixes).to_string())))
                    .collect()
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("strings always serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab::{core, default_prefixes};

    fn table() -> BindingTable {
        BindingTable {
            header: vec!["s".into(), "v".into()],
            rows: vec![vec![Term::iri(core("ssd01")), Term::decimal(20.4)]],
        }
    }

    #[test]
    fn tsv() {
        assert_eq!(table().to_tsv(&default_prefixes()), "?s\t?v\nssd:ssd01\t20.4\n");
    }

    #[test]
    fn json() {
        let v: serde_json::Value = serde_json::from_str(&table().to_json(&default_prefixes())).unwrap();
        assert_eq!(v, serde_json::json!([{"s": "ssd:ssd01", "v": "20.4"}]));
    }

    #[test]
    fn format_names() {
        assert_eq!("JSON".parse::<OutputFormat>(), Ok(OutputFormat::Json));
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}

//! CSV tables with a fixed dialect: comma separated, header row, LF line
//! endings, floats written with 17 significant digits.

use crate::error::{Error, Result};

/// Formats a float with 17 significant digits so that parsing it back
/// recovers the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::DimensionMismatch { expected: self.header.len(), actual: row.len() });
        }
        if let Some(bad) = row.iter().find(|f| f.contains([',', '\n', '\r', '"'])) {
            return Err(Error::InvalidArgument(format!("field {bad:?} needs quoting")));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx].as_str()).collect())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .quote_style(csv::QuoteStyle::Never)
            .from_writer(Vec::new());
        writer.write_record(&self.header)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            rows.push(record?.iter().map(str::to_string).collect());
        }
        Ok(Self { header, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(f64::NAN), "NaN");
        assert_eq!(parse_f64(&fmt_f64(f64::INFINITY)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn rejects_ragged_rows_and_commas() {
        let mut t = CsvTable::new(&["a", "b"]);
        assert!(t.push(vec!["1".into()]).is_err());
        assert!(t.push(vec!["1,2".into(), "3".into()]).is_err());
    }

    #[test]
    fn empty_fields_survive() {
        let mut t = CsvTable::new(&["h", "defect"]);
        t.push(vec![fmt_f64(0.5), String::new()]).unwrap();
        let text = t.to_csv_string().unwrap();
        assert_eq!(text, "h,defect\n5.0000000000000000e-1,\n");
        assert_eq!(CsvTable::parse(&text).unwrap(), t);
    }

    proptest! {
        #[test]
        fn float_fields_round_trip(xs in prop::collection::vec(any::<f64>(), 1..20)) {
            let mut t = CsvTable::new(&["i", "x"]);
            for (i, &x) in xs.iter().enumerate() {
                t.push(vec![i.to_string(), fmt_f64(x)]).unwrap();
            }
            let text = t.to_csv_string().unwrap();
            let parsed = CsvTable::parse(&text).unwrap();
            prop_assert_eq!(&parsed, &t);
            // re-emitting parsed numbers reproduces the text byte for byte
            let mut again = CsvTable::new(&["i", "x"]);
            for row in parsed.rows() {
                let x = parse_f64(&row[1]).unwrap();
                again.push(vec![row[0].clone(), fmt_f64(x)]).unwrap();
            }
            prop_assert_eq!(again.to_csv_string().unwrap(), text);
        }
    }
}

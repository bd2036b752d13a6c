use std::path::Path;

use csv::{ReaderBuilder, Trim};

use crate::error::{Error, Result};
use crate::protocol::{Flavor, PricePath};

/// Raw `(label, price)` records from a two-column CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFile {
    pub source: String,
    pub records: Vec<SeriesRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRecord {
    pub label: String,
    pub price: f64,
    /// 1-based line in the source text.
    pub line: u64,
}

impl SeriesFile {
    /// Parses UTF-8 CSV with a header row and exactly two columns.
    pub fn parse(source: impl Into<String>, bytes: &[u8]) -> Result<Self> {
        let mut reader = ReaderBuilder::new()
            .has_headers(true)
            .trim(Trim::All)
            .from_reader(bytes);
        let headers = reader.headers().map_err(|e| csv_error(&e))?.clone();
        if headers.is_empty() {
            return Err(Error::NoData);
        }
        if headers.len() != 2 {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected 2 columns (label, price), found {}", headers.len()),
            });
        }
        let mut records = vec![];
        for row in reader.records() {
            let row = row.map_err(|e| csv_error(&e))?;
            let line = row.position().map_or(0, |p| p.line());
            let raw = &row[1];
            let price: f64 = raw.parse().map_err(|_| Error::Parse {
                line,
                message: format!("cannot parse price {raw:?}"),
            })?;
            if !price.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("price {raw:?} is not finite"),
                });
            }
            records.push(SeriesRecord {
                label: row[0].to_string(),
                price,
                line,
            });
        }
        if records.is_empty() {
            return Err(Error::NoData);
        }
        Ok(Self {
            source: source.into(),
            records,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes =
            std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(path.display().to_string(), &bytes)
    }

    pub fn to_path(&self, flavor: Flavor) -> Result<PricePath> {
        if flavor == Flavor::Positive {
            if let Some(r) = self.records.iter().find(|r| r.price <= 0.0) {
                return Err(Error::DomainAt {
                    line: r.line,
                    message: format!("price {} is not positive", r.price),
                });
            }
        }
        let values = self.records.iter().map(|r| r.price).collect();
        let labels = self.records.iter().map(|r| r.label.clone()).collect();
        PricePath::new(values, flavor)?.with_labels(labels)
    }
}

fn csv_error(e: &csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    let message = match e.kind() {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => format!("expected {expected_len} fields, found {len}"),
        csv::ErrorKind::Utf8 { .. } => "invalid UTF-8".to_string(),
        _ => e.to_string(),
    };
    Error::Parse { line, message }
}

/// CSV text (header row, then `label,price` rows) to a path in file order.
pub fn parse_series(bytes: &[u8], flavor: Flavor) -> Result<PricePath> {
    SeriesFile::parse("<input>", bytes)?.to_path(flavor)
}

pub fn read_series(path: &Path, flavor: Flavor) -> Result<PricePath> {
    SeriesFile::read(path)?.to_path(flavor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_simple_file() {
        let p = parse_series(b"t,p\n0,1\n1,2\n", Flavor::Positive).unwrap();
        assert_eq!(p.values(), &[1.0, 2.0]);
        assert_eq!(p.labels().unwrap(), &["0".to_string(), "1".to_string()]);
    }

    #[test]
    fn accepts_exponents_and_whitespace() {
        let p = parse_series(
            b"date,close\n2001-01-02, 1.5e2\n2001-01-03,-2.5E-1\n",
            Flavor::Absolute,
        )
        .unwrap();
        assert_eq!(p.values(), &[150.0, -0.25]);
    }

    #[test]
    fn empty_body_is_no_data() {
        assert_eq!(parse_series(b"t,p\n", Flavor::Absolute), Err(Error::NoData));
        assert_eq!(parse_series(b"", Flavor::Absolute), Err(Error::NoData));
        assert_eq!(Error::NoData.to_string(), "no data rows");
    }

    #[test]
    fn negative_price_under_positive_flavor() {
        assert_eq!(
            parse_series(b"t,p\n0,-1\n", Flavor::Positive),
            Err(Error::DomainAt {
                line: 2,
                message: "price -1 is not positive".into()
            })
        );
    }

    #[test]
    fn malformed_rows_report_line() {
        match parse_series(b"t,p\n0,1\n1,abc\n", Flavor::Absolute) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse_series(b"t,p\n0,1\n1,2,3\n", Flavor::Absolute) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse_series(b"t,p\n0,1\n1,inf\n", Flavor::Absolute) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_series(b"a,b,c\n1,2,3\n", Flavor::Absolute),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn single_row_is_too_short_for_a_path() {
        assert!(matches!(
            parse_series(b"t,p\n0,1\n", Flavor::Absolute),
            Err(Error::InvalidPath(_))
        ));
    }
}

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use chrono::NaiveDate;
use serde::Deserialize;

use super::types::{
    ExposureStore, ExposureVector, FactorRecord, PerformanceDoc, ReturnRecord, FACTOR_NAMES,
};
use super::CorpusError;

fn io_err(path: &Path, source: std::io::Error) -> CorpusError {
    CorpusError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn malformed(path: &Path, line: usize, message: impl ToString) -> CorpusError {
    CorpusError::Malformed {
        path: path.display().to_string(),
        line,
        message: message.to_string(),
    }
}

/// Load `docs.jsonl`: one `PerformanceDoc` object per line.
///
/// Duplicate `(company_id, fiscal_period)` pairs and records violating the
/// document invariants are rejected with the offending line number.
pub fn load_docs(path: &Path) -> Result<Vec<PerformanceDoc>, CorpusError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut docs = Vec::new();
    let mut seen: HashSet<(String, String)> = HashSet::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: PerformanceDoc =
            serde_json::from_str(&line).map_err(|e| malformed(path, lineno, e))?;
        doc.validate().map_err(|m| malformed(path, lineno, m))?;
        let key = (doc.company_id.clone(), doc.fiscal_period.clone());
        if !seen.insert(key) {
            return Err(CorpusError::Duplicate {
                company_id: doc.company_id,
                fiscal_period: doc.fiscal_period,
            });
        }
        docs.push(doc);
    }
    if docs.is_empty() {
        log::warn!("{}: no documents loaded", path.display());
    }
    log::info!("{}: loaded {} documents", path.display(), docs.len());
    Ok(docs)
}

/// Load `exposures.csv` with header `company_id,as_of,<20 factor columns>`.
pub fn load_exposures(path: &Path) -> Result<ExposureStore, CorpusError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_err(path, 0, e))?;
    let headers = reader.headers().map_err(|e| csv_err(path, 1, e))?.clone();
    let expected: Vec<&str> = ["company_id", "as_of"]
        .into_iter()
        .chain(FACTOR_NAMES)
        .collect();
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(malformed(
            path,
            1,
            format!("header mismatch: expected {:?}", expected.join(",")),
        ));
    }
    let mut store = ExposureStore::new();
    for (i, record) in reader.records().enumerate() {
        let lineno = i + 2;
        let record = record.map_err(|e| csv_err(path, lineno, e))?;
        if record.len() != 22 {
            return Err(malformed(path, lineno, "expected 22 columns"));
        }
        let company_id = record[0].to_string();
        if company_id.is_empty() {
            return Err(malformed(path, lineno, "company_id must be non-empty"));
        }
        let as_of = NaiveDate::parse_from_str(&record[1], "%Y-%m-%d")
            .map_err(|e| malformed(path, lineno, format!("as_of: {e}")))?;
        let mut values = [0.0; 20];
        for (j, value) in values.iter_mut().enumerate() {
            *value = record[j + 2]
                .parse::<f64>()
                .map_err(|e| malformed(path, lineno, format!("{}: {e}", FACTOR_NAMES[j])))?;
            if !value.is_finite() {
                return Err(malformed(
                    path,
                    lineno,
                    format!("{} must be finite", FACTOR_NAMES[j]),
                ));
            }
        }
        store.insert(ExposureVector {
            company_id,
            as_of,
            values,
        });
    }
    Ok(store)
}

/// Daily returns indexed by company and trading day.
#[derive(Debug, Default)]
pub struct ReturnStore {
    by_company: HashMap<String, BTreeMap<NaiveDate, f64>>,
}

impl ReturnStore {
    pub fn get(&self, company_id: &str, date: NaiveDate) -> Option<f64> {
        self.by_company.get(company_id)?.get(&date).copied()
    }

    pub fn insert(&mut self, record: ReturnRecord) {
        self.by_company
            .entry(record.company_id)
            .or_default()
            .insert(record.date, record.ret);
    }
}

#[derive(Deserialize)]
struct ReturnRow {
    company_id: String,
    date: NaiveDate,
    ret: f64,
}

/// Load `returns.csv` (header `company_id,date,ret`).
pub fn load_returns(path: &Path) -> Result<ReturnStore, CorpusError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_err(path, 0, e))?;
    let mut store = ReturnStore::default();
    let mut last_date: HashMap<String, NaiveDate> = HashMap::new();
    for (i, row) in reader.deserialize::<ReturnRow>().enumerate() {
        let lineno = i + 2;
        let row = row.map_err(|e| csv_err(path, lineno, e))?;
        if !(row.ret > -1.0) || !row.ret.is_finite() {
            return Err(malformed(path, lineno, "ret must be finite and > -1"));
        }
        if let Some(prev) = last_date.get(&row.company_id) {
            if row.date <= *prev {
                return Err(malformed(
                    path,
                    lineno,
                    format!("dates not strictly increasing for {}", row.company_id),
                ));
            }
        }
        last_date.insert(row.company_id.clone(), row.date);
        store.insert(ReturnRecord {
            company_id: row.company_id,
            date: row.date,
            ret: row.ret,
        });
    }
    Ok(store)
}

/// Daily factor returns indexed by trading day.
#[derive(Debug, Default)]
pub struct FactorStore {
    by_date: BTreeMap<NaiveDate, FactorRecord>,
}

impl FactorStore {
    pub fn get(&self, date: NaiveDate) -> Option<&FactorRecord> {
        self.by_date.get(&date)
    }

    pub fn insert(&mut self, record: FactorRecord) {
        self.by_date.insert(record.date, record);
    }

    pub fn len(&self) -> usize {
        self.by_date.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_date.is_empty()
    }
}

/// Load `factors.csv` (header `date,mkt_rf,smb,hml,rmw,cma,rf`).
pub fn load_factors(path: &Path) -> Result<FactorStore, CorpusError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_err(path, 0, e))?;
    let mut store = FactorStore::default();
    let mut last: Option<NaiveDate> = None;
    for (i, row) in reader.deserialize::<FactorRecord>().enumerate() {
        let lineno = i + 2;
        let row = row.map_err(|e| csv_err(path, lineno, e))?;
        if !row.is_finite() {
            return Err(malformed(path, lineno, "factor values must be finite"));
        }
        if let Some(prev) = last {
            if row.date <= prev {
                return Err(malformed(path, lineno, "dates not strictly increasing"));
            }
        }
        last = Some(row.date);
        store.insert(row);
    }
    Ok(store)
}

fn csv_err(path: &Path, line: usize, source: csv::Error) -> CorpusError {
    if let csv::ErrorKind::Io(_) = source.kind() {
        if let csv::ErrorKind::Io(io) = source.into_kind() {
            return io_err(path, io);
        }
        unreachable!()
    }
    malformed(path, line, source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    const DOC_LINE: &str = r#"{"company_id":"7203","company_name":"Toyota","announcement_at":"2023-05-10T14:00:00","fiscal_period":"FY2022","text":"Sales rose."}"#;

    #[test]
    fn single_record_loads() {
        let f = write_temp(DOC_LINE);
        let docs = load_docs(f.path()).unwrap();
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].company_id, "7203");
        assert_eq!(docs[0].text, "Sales rose.");
    }

    #[test]
    fn empty_file_yields_empty_list() {
        let f = write_temp("");
        assert!(load_docs(f.path()).unwrap().is_empty());
    }

    #[test]
    fn missing_text_field_names_the_field() {
        let line = r#"{"company_id":"7203","company_name":"Toyota","announcement_at":"2023-05-10T14:00:00","fiscal_period":"FY2022"}"#;
        let f = write_temp(line);
        let err = load_docs(f.path()).unwrap_err().to_string();
        assert!(err.contains("text"), "error should name the field: {err}");
        assert!(err.contains(":1:"), "error should carry the line: {err}");
    }

    #[test]
    fn duplicate_company_period_rejected() {
        let f = write_temp(&format!("{DOC_LINE}\n{DOC_LINE}"));
        let err = load_docs(f.path()).unwrap_err();
        assert!(matches!(err, CorpusError::Duplicate { .. }));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let f = write_temp(&format!("{DOC_LINE}\nnot json"));
        let err = load_docs(f.path()).unwrap_err().to_string();
        assert!(err.contains(":2:"), "{err}");
    }

    #[test]
    fn returns_reject_nonincreasing_dates() {
        let f = write_temp("company_id,date,ret\n7203,2023-01-05,0.01\n7203,2023-01-05,0.02\n");
        assert!(load_returns(f.path()).is_err());
    }

    #[test]
    fn returns_reject_ret_at_or_below_minus_one() {
        let f = write_temp("company_id,date,ret\n7203,2023-01-05,-1.0\n");
        assert!(load_returns(f.path()).is_err());
    }

    #[test]
    fn factors_roundtrip() {
        let f = write_temp(
            "date,mkt_rf,smb,hml,rmw,cma,rf\n2023-01-05,0.001,0.0,-0.002,0.0005,0.0,0.0001\n",
        );
        let store = load_factors(f.path()).unwrap();
        let rec = store
            .get(NaiveDate::from_ymd_opt(2023, 1, 5).unwrap())
            .unwrap();
        assert_eq!(rec.hml, -0.002);
    }

    #[test]
    fn exposures_header_checked() {
        let f = write_temp("company_id,as_of,Wrong\n");
        assert!(load_exposures(f.path()).is_err());
    }
}

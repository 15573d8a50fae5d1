use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use chrono::{NaiveDate, NaiveDateTime, NaiveTime};

use super::CorpusError;

/// A sorted list of trading days, loaded from a one-date-per-line file.
#[derive(Debug, Clone)]
pub struct TradingCalendar {
    days: Vec<NaiveDate>,
    index: HashMap<NaiveDate, usize>,
}

impl TradingCalendar {
    pub fn new(days: Vec<NaiveDate>) -> Result<Self, CorpusError> {
        if days.is_empty() {
            return Err(CorpusError::BadCalendar { line: 0 });
        }
        for (i, pair) in days.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(CorpusError::BadCalendar { line: i + 2 });
            }
        }
        let index = days.iter().enumerate().map(|(i, d)| (*d, i)).collect();
        Ok(Self { days, index })
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let file = File::open(path).map_err(|e| CorpusError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let mut days = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| CorpusError::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let date = NaiveDate::parse_from_str(line, "%Y-%m-%d")
                .map_err(|_| CorpusError::BadCalendar { line: i + 1 })?;
            days.push(date);
        }
        Self::new(days)
    }

    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }

    pub fn day(&self, idx: usize) -> Option<NaiveDate> {
        self.days.get(idx).copied()
    }

    pub fn index_of(&self, date: NaiveDate) -> Option<usize> {
        self.index.get(&date).copied()
    }

    /// Map an announcement timestamp to its event day 0.
    ///
    /// Announcements strictly before `cutoff` map to the first trading day on
    /// or after the announcement date; announcements at or after the cutoff
    /// (or on non-trading days) map to the next trading day.
    pub fn event_day_zero(
        &self,
        announcement_at: NaiveDateTime,
        cutoff: NaiveTime,
    ) -> Result<NaiveDate, CorpusError> {
        let first = self.days[0];
        let last = *self.days.last().unwrap();
        let date = announcement_at.date();
        let gap = |d| CorpusError::CalendarGap {
            date: d,
            first,
            last,
        };
        if date < first || date > last {
            return Err(gap(date));
        }
        let same_day_ok = announcement_at.time() < cutoff;
        let idx = self.days.partition_point(|d| *d < date);
        let candidate = if self.days.get(idx) == Some(&date) && same_day_ok {
            idx
        } else if self.days.get(idx) == Some(&date) {
            idx + 1
        } else {
            idx
        };
        self.days.get(candidate).copied().ok_or_else(|| gap(date))
    }
}

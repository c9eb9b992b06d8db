//! Case series, tweet records and per-day tweet buckets.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::{DateTime, Duration, NaiveDate, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::DailySeries;

/// Default offset for Indian regions (IST, UTC+05:30).
pub const IST_OFFSET_MINUTES: i32 = 330;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("series is empty")]
    EmptySeries,
    #[error("series columns have different lengths ({new}, {recovered}, {deaths})")]
    LengthMismatch {
        new: usize,
        recovered: usize,
        deaths: usize,
    },
    #[error("missing date {0} inside the series")]
    DateGap(NaiveDate),
    #[error("date {0} appears more than once")]
    DuplicateDate(NaiveDate),
    #[error("invalid date range: {from} is after {to}")]
    InvalidRange { from: NaiveDate, to: NaiveDate },
    #[error("date arithmetic overflow")]
    DateOverflow,
}

/// One parsed row of a case file, before assembly into a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseRow {
    pub date: NaiveDate,
    pub new_cases: u64,
    pub recovered: u64,
    pub deaths: u64,
}

/// Gap-free daily counts for one region. Index `i` is `start_date + i` days.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionSeries {
    region_id: String,
    start_date: NaiveDate,
    new_cases: Vec<u64>,
    recovered: Vec<u64>,
    deaths: Vec<u64>,
}

impl RegionSeries {
    pub fn new(
        region_id: impl Into<String>,
        start_date: NaiveDate,
        new_cases: Vec<u64>,
        recovered: Vec<u64>,
        deaths: Vec<u64>,
    ) -> Result<Self, CorpusError> {
        if new_cases.len() != recovered.len() || new_cases.len() != deaths.len() {
            return Err(CorpusError::LengthMismatch {
                new: new_cases.len(),
                recovered: recovered.len(),
                deaths: deaths.len(),
            });
        }
        if new_cases.is_empty() {
            return Err(CorpusError::EmptySeries);
        }
        // The last index must be representable as a date.
        start_date
            .checked_add_signed(Duration::days(new_cases.len() as i64 - 1))
            .ok_or(CorpusError::DateOverflow)?;
        Ok(Self {
            region_id: region_id.into(),
            start_date,
            new_cases,
            recovered,
            deaths,
        })
    }

    /// Assembles rows given in any order into a gap-free series.
    ///
    /// With `zero_fill`, interior dates without a row are filled with zero
    /// counts instead of raising [`CorpusError::DateGap`].
    pub fn from_rows(
        region_id: impl Into<String>,
        mut rows: Vec<CaseRow>,
        zero_fill: bool,
    ) -> Result<Self, CorpusError> {
        if rows.is_empty() {
            return Err(CorpusError::EmptySeries);
        }
        rows.sort_by_key(|r| r.date);
        let start = rows[0].date;
        let mut new_cases = Vec::with_capacity(rows.len());
        let mut recovered = Vec::with_capacity(rows.len());
        let mut deaths = Vec::with_capacity(rows.len());
        let mut expected = start;
        for (i, row) in rows.iter().enumerate() {
            if i > 0 && row.date == rows[i - 1].date {
                return Err(CorpusError::DuplicateDate(row.date));
            }
            while expected < row.date {
                if !zero_fill {
                    return Err(CorpusError::DateGap(expected));
                }
                new_cases.push(0);
                recovered.push(0);
                deaths.push(0);
                expected = expected.succ_opt().ok_or(CorpusError::DateOverflow)?;
            }
            new_cases.push(row.new_cases);
            recovered.push(row.recovered);
            deaths.push(row.deaths);
            expected = match row.date.succ_opt() {
                Some(d) => d,
                None if i + 1 == rows.len() => row.date,
                None => return Err(CorpusError::DateOverflow),
            };
        }
        Self::new(region_id, start, new_cases, recovered, deaths)
    }

    pub fn region_id(&self) -> &str {
        &self.region_id
    }

    pub fn start_date(&self) -> NaiveDate {
        self.start_date
    }

    pub fn end_date(&self) -> NaiveDate {
        self.date_at(self.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.new_cases.len()
    }

    /// Always false; a series holds at least one day.
    pub fn is_empty(&self) -> bool {
        self.new_cases.is_empty()
    }

    pub fn new_cases(&self) -> &[u64] {
        &self.new_cases
    }

    pub fn recovered(&self) -> &[u64] {
        &self.recovered
    }

    pub fn deaths(&self) -> &[u64] {
        &self.deaths
    }

    pub fn date_at(&self, index: usize) -> NaiveDate {
        self.start_date + Duration::days(index as i64)
    }

    /// Index of `date`, if the series covers it.
    pub fn index_of(&self, date: NaiveDate) -> Option<usize> {
        let offset = (date - self.start_date).num_days();
        (offset >= 0 && (offset as usize) < self.len()).then_some(offset as usize)
    }

    pub fn rows(&self) -> impl Iterator<Item = CaseRow> + '_ {
        (0..self.len()).map(move |i| CaseRow {
            date: self.date_at(i),
            new_cases: self.new_cases[i],
            recovered: self.recovered[i],
            deaths: self.deaths[i],
        })
    }

    /// Daily new cases as a real-valued series.
    pub fn new_cases_series(&self) -> DailySeries {
        DailySeries::from_counts(self.start_date, &self.new_cases)
    }

    pub fn recovered_series(&self) -> DailySeries {
        DailySeries::from_counts(self.start_date, &self.recovered)
    }
}

/// A geotagged post.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub id: String,
    pub timestamp: DateTime<Utc>,
    pub region_id: String,
    pub text: String,
}

impl TweetRecord {
    /// Calendar date of the tweet in a zone `utc_offset_minutes` east of UTC.
    pub fn local_date(&self, utc_offset_minutes: i32) -> NaiveDate {
        local_date(self.timestamp, utc_offset_minutes)
    }
}

pub fn local_date(timestamp: DateTime<Utc>, utc_offset_minutes: i32) -> NaiveDate {
    (timestamp + Duration::minutes(utc_offset_minutes as i64)).date_naive()
}

/// Tweet ids per local calendar day, for one region and an inclusive window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayBuckets {
    pub region_id: String,
    pub utc_offset_minutes: i32,
    pub from: NaiveDate,
    pub to: NaiveDate,
    /// Every date in `[from, to]` has an entry, possibly empty.
    pub buckets: BTreeMap<NaiveDate, Vec<String>>,
}

impl DayBuckets {
    pub fn total(&self) -> usize {
        self.buckets.values().map(Vec::len).sum()
    }

    pub fn get(&self, date: NaiveDate) -> Option<&[String]> {
        self.buckets.get(&date).map(Vec::as_slice)
    }
}

/// Iterates the dates of an inclusive range.
pub fn date_range(from: NaiveDate, to: NaiveDate) -> impl Iterator<Item = NaiveDate> {
    from.iter_days().take_while(move |d| *d <= to)
}

/// Groups tweets of `region_id` by local date within `[from, to]`.
///
/// Inside a bucket, ids are ordered by `(timestamp, id)`.
pub fn bucket_by_day(
    tweets: &[TweetRecord],
    region_id: &str,
    utc_offset_minutes: i32,
    from: NaiveDate,
    to: NaiveDate,
) -> Result<DayBuckets, CorpusError> {
    if from > to {
        return Err(CorpusError::InvalidRange { from, to });
    }
    let mut staged: BTreeMap<NaiveDate, Vec<(DateTime<Utc>, &str)>> =
        date_range(from, to).map(|d| (d, Vec::new())).collect();
    for tweet in tweets.iter().filter(|t| t.region_id == region_id) {
        let day = tweet.local_date(utc_offset_minutes);
        if let Some(bucket) = staged.get_mut(&day) {
            bucket.push((tweet.timestamp, tweet.id.as_str()));
        }
    }
    let buckets = staged
        .into_iter()
        .map(|(day, mut entries)| {
            entries.sort();
            (day, entries.into_iter().map(|(_, id)| String::from(id)).collect())
        })
        .collect();
    Ok(DayBuckets {
        region_id: String::from(region_id),
        utc_offset_minutes,
        from,
        to,
        buckets,
    })
}

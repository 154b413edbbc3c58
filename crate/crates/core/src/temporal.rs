//! Temporal activity: daily series, active days, interevent times,
//! burstiness, and circadian/weekly profiles.
//!
//! Timestamps stay in UTC; calendar bucketing applies an explicit whole-hour
//! shift.

use std::collections::BTreeMap;
use std::io::BufRead;

use chrono::{DateTime, Datelike, NaiveDate, Timelike};

use crate::error::{Error, Result};
use crate::model::{EventLog, Layer, Timestamp, UserId};
use crate::stats::{self, Distribution};

/// Whole-hour offset from UTC in `[-12, 14]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TzShift(i32);

impl TzShift {
    pub const UTC: TzShift = TzShift(0);

    pub fn hours(h: i32) -> Result<Self> {
        if !(-12..=14).contains(&h) {
            return Err(Error::InvalidConfig(format!("timezone shift {h} outside [-12, 14]")));
        }
        Ok(TzShift(h))
    }

    pub fn get(self) -> i32 {
        self.0
    }

    fn local(self, t: Timestamp) -> DateTime<chrono::Utc> {
        DateTime::from_timestamp(t + i64::from(self.0) * 3600, 0).expect("timestamp within chrono range")
    }

    pub fn day(self, t: Timestamp) -> NaiveDate {
        self.local(t).date_naive()
    }

    pub fn hour(self, t: Timestamp) -> u32 {
        self.local(t).hour()
    }

    /// Monday = 0 .. Sunday = 6.
    pub fn weekday(self, t: Timestamp) -> u32 {
        self.local(t).weekday().num_days_from_monday()
    }

    pub fn year(self, t: Timestamp) -> i32 {
        self.local(t).year()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DailyRow {
    pub day: NaiveDate,
    pub count_plus: u64,
    pub count_minus: u64,
}

/// Event counts per layer for every day from the first to the last event,
/// zero-filled.
pub fn daily_series(log: &EventLog, shift: TzShift) -> Vec<DailyRow> {
    let (Some(first), Some(last)) = (log.first_timestamp(), log.last_timestamp()) else {
        return Vec::new();
    };
    let start = shift.day(first);
    let n_days = (shift.day(last) - start).num_days() as usize + 1;
    let mut rows: Vec<DailyRow> = start
        .iter_days()
        .take(n_days)
        .map(|day| DailyRow {
            day,
            count_plus: 0,
            count_minus: 0,
        })
        .collect();
    for e in log.events() {
        let i = (shift.day(e.timestamp) - start).num_days() as usize;
        match e.score.layer() {
            Layer::Rewarding => rows[i].count_plus += 1,
            Layer::Punitive => rows[i].count_minus += 1,
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationWindow {
    pub label: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl AnnotationWindow {
    pub fn new(label: impl Into<String>, start: NaiveDate, end: NaiveDate) -> Result<Self> {
        if start > end {
            return Err(Error::InvalidConfig(format!(
                "annotation window starts after it ends ({start} > {end})"
            )));
        }
        Ok(AnnotationWindow {
            label: label.into(),
            start,
            end,
        })
    }

    pub fn contains(&self, day: NaiveDate) -> bool {
        self.start <= day && day <= self.end
    }
}

/// Reads `label,start_date,end_date` rows with ISO-8601 dates. A header row is
/// recognised by an unparseable start date on the first line.
pub fn parse_annotations<R: BufRead>(reader: R) -> Result<Vec<AnnotationWindow>> {
    let mut out = Vec::new();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 3 {
            return Err(Error::Malformed {
                line: i + 1,
                reason: format!("expected 3 fields, found {}", rec.len()),
            });
        }
        let parse = |s: &str| NaiveDate::parse_from_str(s, "%Y-%m-%d");
        match (parse(&rec[1]), parse(&rec[2])) {
            (Ok(start), Ok(end)) => out.push(AnnotationWindow::new(&rec[0], start, end)?),
            (Err(_), _) if i == 0 => continue,
            _ => {
                return Err(Error::Malformed {
                    line: i + 1,
                    reason: "dates must be YYYY-MM-DD".into(),
                })
            }
        }
    }
    Ok(out)
}

/// Labels of all windows covering `day`, joined with `;`.
pub fn annotation_for(day: NaiveDate, windows: &[AnnotationWindow]) -> String {
    windows
        .iter()
        .filter(|w| w.contains(day))
        .map(|w| w.label.as_str())
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ActivityCalendar {
    pub plus: Vec<NaiveDate>,
    pub minus: Vec<NaiveDate>,
}

impl ActivityCalendar {
    pub fn layer(&self, layer: Layer) -> &[NaiveDate] {
        match layer {
            Layer::Rewarding => &self.plus,
            Layer::Punitive => &self.minus,
        }
    }
}

/// Days with at least one event, per layer.
pub fn activity_calendar(log: &EventLog, shift: TzShift) -> ActivityCalendar {
    let mut cal = ActivityCalendar::default();
    for e in log.events() {
        let day = shift.day(e.timestamp);
        let list = match e.score.layer() {
            Layer::Rewarding => &mut cal.plus,
            Layer::Punitive => &mut cal.minus,
        };
        // events are time-ordered, so days arrive non-decreasing
        if list.last() != Some(&day) {
            list.push(day);
        }
    }
    cal
}

/// Gaps between consecutive incoming events on `layer`, per receiving user.
pub fn interevent_by_user(log: &EventLog, layer: Layer) -> BTreeMap<UserId, Vec<i64>> {
    let mut last: BTreeMap<UserId, Timestamp> = BTreeMap::new();
    let mut gaps: BTreeMap<UserId, Vec<i64>> = BTreeMap::new();
    for e in log.events().iter().filter(|e| layer.contains(e.score)) {
        if let Some(prev) = last.insert(e.ratee, e.timestamp) {
            gaps.entry(e.ratee).or_default().push(e.timestamp - prev);
        }
    }
    gaps
}

/// Pooled interevent gaps (seconds) over all users, ordered by user then time.
pub fn interevent_samples(log: &EventLog, layer: Layer) -> Vec<i64> {
    interevent_by_user(log, layer).into_values().flatten().collect()
}

/// Pooled interevent distribution; `None` when no user received two events.
pub fn interevent_distribution(log: &EventLog, layer: Layer) -> Option<Distribution> {
    Distribution::from_values(interevent_samples(log, layer)).ok()
}

/// `B = (sigma - m) / (sigma + m)` with population standard deviation.
pub fn burstiness(deltas: &[f64]) -> Result<f64> {
    if deltas.len() < 2 {
        return Err(Error::Degenerate("burstiness needs at least two samples"));
    }
    let m = stats::mean(deltas);
    let sigma = stats::std_dev(deltas);
    if m + sigma == 0.0 {
        return Err(Error::Degenerate(
            "burstiness undefined when mean and deviation are both zero",
        ));
    }
    Ok((sigma - m) / (sigma + m))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YearlyBurstiness {
    pub year: i32,
    pub layer: Layer,
    pub b: f64,
    pub n_samples: usize,
}

/// Burstiness per UTC calendar year and layer. Gaps are measured between
/// events of the same year only; slices with fewer than two gaps are omitted.
pub fn yearly_burstiness(log: &EventLog) -> Vec<YearlyBurstiness> {
    let mut by_year: BTreeMap<i32, Vec<crate::model::RatingEvent>> = BTreeMap::new();
    for e in log.events() {
        by_year.entry(TzShift::UTC.year(e.timestamp)).or_default().push(*e);
    }
    let mut out = Vec::new();
    for (year, events) in by_year {
        let slice = EventLog::from_events(events);
        for layer in Layer::BOTH {
            let deltas: Vec<f64> = interevent_samples(&slice, layer)
                .into_iter()
                .map(|d| d as f64)
                .collect();
            if let Ok(b) = burstiness(&deltas) {
                out.push(YearlyBurstiness {
                    year,
                    layer,
                    b,
                    n_samples: deltas.len(),
                });
            }
        }
    }
    out
}

/// Fraction of events per bucket, for each layer.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityProfile {
    pub shift: TzShift,
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
    pub plus_events: u64,
    pub minus_events: u64,
}

impl ActivityProfile {
    pub fn layer(&self, layer: Layer) -> &[f64] {
        match layer {
            Layer::Rewarding => &self.plus,
            Layer::Punitive => &self.minus,
        }
    }

    /// True when the layer had no events and its vector is all zeros.
    pub fn is_empty(&self, layer: Layer) -> bool {
        match layer {
            Layer::Rewarding => self.plus_events == 0,
            Layer::Punitive => self.minus_events == 0,
        }
    }
}

fn profile<F>(log: &EventLog, shift: TzShift, bins: usize, bucket: F) -> ActivityProfile
where
    F: Fn(Timestamp) -> usize,
{
    let mut plus = vec![0u64; bins];
    let mut minus = vec![0u64; bins];
    for e in log.events() {
        let b = bucket(e.timestamp);
        match e.score.layer() {
            Layer::Rewarding => plus[b] += 1,
            Layer::Punitive => minus[b] += 1,
        }
    }
    let normalise = |counts: &[u64]| {
        let total: u64 = counts.iter().sum();
        counts
            .iter()
            .map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
            .collect::<Vec<f64>>()
    };
    ActivityProfile {
        shift,
        plus: normalise(&plus),
        minus: normalise(&minus),
        plus_events: plus.iter().sum(),
        minus_events: minus.iter().sum(),
    }
}

/// 24 hourly fractions per layer.
pub fn circadian_profile(log: &EventLog, shift: TzShift) -> ActivityProfile {
    profile(log, shift, 24, |t| shift.hour(t) as usize)
}

/// 7 weekday fractions per layer, Monday first.
pub fn weekly_profile(log: &EventLog, shift: TzShift) -> ActivityProfile {
    profile(log, shift, 7, |t| shift.weekday(t) as usize)
}

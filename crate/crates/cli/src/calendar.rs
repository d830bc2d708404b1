// SPDX-License-Identifier: Apache-2.0

use chrono::{Datelike, NaiveDate};
use chronokg_core::Tick;
use clap::ValueEnum;

/// How time arguments map onto ticks. Stored data is always raw ticks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Calendar {
    /// One tick per year; a date becomes its year.
    Year,
    /// One tick per day counted from 1970-01-01.
    DaysSinceEpoch,
}

/// Accepts a raw tick or an ISO `YYYY-MM-DD` date.
pub fn to_tick(calendar: Calendar, arg: &str) -> Result<Tick, String> {
    if let Ok(t) = arg.parse::<Tick>() {
        return Ok(t);
    }
    let date = NaiveDate::parse_from_str(arg, "%Y-%m-%d")
        .map_err(|_| format!("invalid time {arg:?}: expected an integer tick or YYYY-MM-DD"))?;
    Ok(match calendar {
        Calendar::Year => Tick::from(date.year()),
        Calendar::DaysSinceEpoch => {
            let epoch = NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid date");
            (date - epoch).num_days()
        }
    })
}

//! Argument value parsers: reals written as decimals or exact fractions, and
//! `lo:hi:count` ranges.

use serde::{Deserialize, Serialize};

/// Parses `3.61`, `361/100` or `25/9`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator in {s:?}"))?;
            let den: f64 = den
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator in {s:?}"))?;
            if den == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            num / den
        }
        None => s.parse().map_err(|_| format!("not a number: {s:?}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

/// An evenly spaced range `lo:hi:count`, endpoints included. A bare value is
/// a one-point range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Range {
    pub fn single(x: f64) -> Self {
        Self {
            lo: x,
            hi: x,
            count: 1,
        }
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let r = match parts.as_slice() {
            [x] => Self::single(parse_real(x)?),
            [lo, hi, count] => Self {
                lo: parse_real(lo)?,
                hi: parse_real(hi)?,
                count: count
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad count in {s:?}"))?,
            },
            _ => return Err(format!("expected VALUE or LO:HI:COUNT, got {s:?}")),
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.count == 0 {
            return Err("range count must be at least 1".into());
        }
        if self.count > 1 && !(self.lo < self.hi) {
            return Err(format!("range needs lo < hi, got {}:{}", self.lo, self.hi));
        }
        Ok(())
    }

    /// Checks that every point lies in the open unit interval.
    pub fn validate_unit(&self, name: &str) -> Result<(), String> {
        let ok = |x: f64| x > 0.0 && x < 1.0;
        if ok(self.lo) && (self.count == 1 || ok(self.hi)) {
            Ok(())
        } else {
            Err(format!("{name} range must lie in (0, 1)"))
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let span = self.hi - self.lo;
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.hi
                } else {
                    self.lo + span * i as f64 / last
                }
            })
            .collect()
    }
}

impl std::fmt::Display for Range {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.count == 1 {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}:{}:{}", self.lo, self.hi, self.count)
        }
    }
}

//! Totally ordered phase values: a rational or `+inf`, refined by a rational tag.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, qi, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PhaseLevel {
    Finite(Q),
    Infinite,
}

/// A phase, ordered by level first and tag second. Untagged phases have tag 0;
/// the doubled point `1*` is level 1 with tag 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhaseValue {
    pub level: PhaseLevel,
    pub tag: Q,
}

impl PhaseValue {
    pub fn finite(value: Q) -> Self {
        PhaseValue { level: PhaseLevel::Finite(value), tag: Q::zero() }
    }

    pub fn tagged(value: Q, tag: Q) -> Self {
        PhaseValue { level: PhaseLevel::Finite(value), tag }
    }

    pub fn infinity() -> Self {
        PhaseValue { level: PhaseLevel::Infinite, tag: Q::zero() }
    }

    pub fn value(&self) -> Option<Q> {
        match self.level {
            PhaseLevel::Finite(v) => Some(v),
            PhaseLevel::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.level == PhaseLevel::Infinite
    }

    /// A phase strictly above `self` with nothing attained in between when `self` is the maximum.
    pub fn above(&self) -> Self {
        match self.level {
            PhaseLevel::Finite(v) => PhaseValue::finite(v + qi(1)),
            PhaseLevel::Infinite => PhaseValue { level: PhaseLevel::Infinite, tag: self.tag + qi(1) },
        }
    }

    /// A phase strictly below `self`.
    pub fn below(&self) -> Self {
        match self.level {
            PhaseLevel::Finite(v) => PhaseValue::finite(v - qi(1)),
            PhaseLevel::Infinite => PhaseValue { level: PhaseLevel::Infinite, tag: self.tag - qi(1) },
        }
    }
}

impl Ord for PhaseValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level.cmp(&other.level).then(self.tag.cmp(&other.tag))
    }
}

impl PartialOrd for PhaseValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PhaseValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            PhaseLevel::Finite(v) => write!(f, "{}", fmt_q(&v))?,
            PhaseLevel::Infinite => write!(f, "inf")?,
        }
        if !self.tag.is_zero() {
            write!(f, "*{}", fmt_q(&self.tag))?;
        }
        Ok(())
    }
}

impl FromStr for PhaseValue {
    type Err = Error;

    /// Accepts `p/q`, integers, `inf`, and a `*tag` suffix such as `1*1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation(format!("`{s}` is not a phase value"));
        let (value, tag) = match s.trim().split_once('*') {
            Some((v, t)) => (v, parse_q(t).ok_or_else(bad)?),
            None => (s.trim(), Q::zero()),
        };
        let level = if value == "inf" || value == "+inf" || value == "∞" {
            PhaseLevel::Infinite
        } else {
            PhaseLevel::Finite(parse_q(value).ok_or_else(bad)?)
        };
        Ok(PhaseValue { level, tag })
    }
}

/// The see-saw trichotomy for the phases of `0 -> L -> M -> N -> 0`.
pub fn seesaw_holds(l: PhaseValue, m: PhaseValue, n: PhaseValue) -> bool {
    (l < m && m < n) || (l > m && m > n) || (l == m && m == n)
}

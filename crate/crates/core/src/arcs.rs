//! Closed subsets of the circle `𝕋 = ℝ/ℤ` given as finite unions of closed
//! arcs with rational endpoints, measured in turns.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A position on the circle in turns.
pub type Turn = Ratio<i64>;

fn frac(x: Turn) -> Turn {
    x - x.floor()
}

pub fn turn_to_f64(x: Turn) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Closed subset of `𝕋` stored as sorted, merged intervals of `[0, 1]`.
/// The endpoints `0` and `1` denote the same point.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArcSet {
    intervals: Vec<(Turn, Turn)>,
}

/// An open arc `(start, end)` with `0 < end − start ≤ 1`; length one means the
/// circle punctured at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpenArc {
    pub start: Turn,
    pub end: Turn,
}

impl OpenArc {
    pub fn contains(&self, x: Turn) -> bool {
        let x = frac(x - self.start) + self.start;
        x > self.start && x < self.end
    }

    pub fn midpoint(&self) -> Turn {
        frac((self.start + self.end) / Turn::from_integer(2))
    }

    /// Splits at every listed point lying inside.
    pub fn split_at(&self, points: &[Turn]) -> Vec<OpenArc> {
        let mut cuts: Vec<Turn> = points
            .iter()
            .map(|&p| frac(p - self.start) + self.start)
            .filter(|&p| p > self.start && p < self.end)
            .collect();
        cuts.sort();
        cuts.dedup();
        let mut out = Vec::new();
        let mut prev = self.start;
        for c in cuts {
            out.push(OpenArc { start: prev, end: c });
            prev = c;
        }
        out.push(OpenArc { start: prev, end: self.end });
        out
    }
}

impl ArcSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        Self { intervals: vec![(Turn::zero(), Turn::one())] }
    }

    /// The closed arc running counterclockwise from `start` to `end`;
    /// requires `0 ≤ end − start ≤ 1`.
    pub fn arc(start: Turn, end: Turn) -> Result<Self> {
        let len = end - start;
        if len.is_negative() || len > Turn::one() {
            return Err(Error::Parse(format!("arc [{start}, {end}] must have length in [0, 1]")));
        }
        if len == Turn::one() {
            return Ok(Self::full());
        }
        let s = frac(start);
        let e = s + len;
        let raw = if e <= Turn::one() {
            vec![(s, e)]
        } else {
            vec![(s, Turn::one()), (Turn::zero(), e - Turn::one())]
        };
        Ok(Self::normalized(raw))
    }

    pub fn point(x: Turn) -> Self {
        let s = frac(x);
        Self::normalized(vec![(s, s)])
    }

    pub fn from_arcs(arcs: &[(Turn, Turn)]) -> Result<Self> {
        arcs.iter().try_fold(Self::empty(), |acc, &(a, b)| Ok(acc.union(&Self::arc(a, b)?)))
    }

    fn normalized(mut raw: Vec<(Turn, Turn)>) -> Self {
        raw.sort();
        let mut out: Vec<(Turn, Turn)> = Vec::new();
        for (a, b) in raw {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Self { intervals: out }
    }

    pub fn intervals(&self) -> &[(Turn, Turn)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::normalized(self.intervals.iter().chain(&other.intervals).copied().collect())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut raw = Vec::new();
        for &(a, b) in &self.intervals {
            for &(c, d) in &other.intervals {
                let lo = a.max(c);
                let hi = b.min(d);
                if lo <= hi {
                    raw.push((lo, hi));
                }
            }
        }
        // 0 and 1 coincide
        let zero_a = self.contains(Turn::zero());
        let zero_b = other.contains(Turn::zero());
        if zero_a && zero_b && !raw.iter().any(|&(lo, _)| lo.is_zero()) && !raw.iter().any(|&(_, hi)| hi == Turn::one()) {
            raw.push((Turn::zero(), Turn::zero()));
        }
        Self::normalized(raw)
    }

    pub fn contains(&self, x: Turn) -> bool {
        let x = frac(x);
        self.intervals.iter().any(|&(a, b)| (a <= x && x <= b) || (x.is_zero() && b == Turn::one()))
    }

    /// Membership of a floating-point turn up to `tol`.
    pub fn contains_f64(&self, x: f64, tol: f64) -> bool {
        let x = x - x.floor();
        self.intervals.iter().any(|&(a, b)| {
            let (a, b) = (turn_to_f64(a), turn_to_f64(b));
            let d = if x < a { (a - x).min(x + 1.0 - b) } else if x > b { (x - b).min(a + 1.0 - x) } else { 0.0 };
            d <= tol
        })
    }

    /// Whether `other ⊆ self`.
    pub fn contains_set(&self, other: &Self) -> bool {
        other.intervals.iter().all(|&(a, b)| {
            self.intervals.iter().any(|&(c, d)| c <= a && b <= d)
                || (a == b && self.contains(a))
        })
    }

    /// The open arcs making up `𝕋` minus this set.
    pub fn gaps(&self) -> Vec<OpenArc> {
        if self.intervals.is_empty() {
            let half = Turn::new(1, 2);
            return vec![
                OpenArc { start: Turn::zero(), end: Turn::one() },
                OpenArc { start: half, end: half + Turn::one() },
            ];
        }
        let mut out = Vec::new();
        for w in self.intervals.windows(2) {
            if w[0].1 < w[1].0 {
                out.push(OpenArc { start: w[0].1, end: w[1].0 });
            }
        }
        let first = self.intervals[0];
        let last = *self.intervals.last().expect("nonempty");
        let wrap_end = first.0 + Turn::one();
        let connected = first.0.is_zero() && last.1 == Turn::one();
        if !connected && last.1 < wrap_end {
            let start = last.1;
            let arc = if start >= Turn::one() {
                OpenArc { start: start - Turn::one(), end: first.0 }
            } else {
                OpenArc { start, end: wrap_end }
            };
            out.push(arc);
        }
        out
    }

    pub fn covers_circle(&self) -> bool {
        self.gaps().is_empty()
    }

    /// Nonempty and not the whole circle.
    pub fn is_proper(&self) -> bool {
        !self.is_empty() && !self.covers_circle()
    }

    /// Whether the intersection contains an arc of positive length.
    pub fn overlaps_interior(&self, other: &Self) -> bool {
        self.intersection(other).intervals.iter().any(|&(a, b)| a < b)
    }

    /// Contains an arc of positive length.
    pub fn has_interior(&self) -> bool {
        self.intervals.iter().any(|&(a, b)| a < b)
    }

    pub fn translate(&self, by: Turn) -> Self {
        let raw: Vec<(Turn, Turn)> = self
            .intervals
            .iter()
            .flat_map(|&(a, b)| Self::arc(a + by, b + by).expect("length preserved").intervals)
            .collect();
        Self::normalized(raw)
    }

    /// Whether `x` lies in the interior of the set.
    pub fn interior_contains(&self, x: Turn) -> bool {
        let x = frac(x);
        let gaps = self.gaps();
        self.contains(x)
            && gaps.iter().all(|g| frac(g.start) != x && frac(g.end) != x)
    }

    /// Closure of the complement.
    pub fn complement_closure(&self) -> Self {
        let raw: Vec<(Turn, Turn)> = self
            .gaps()
            .iter()
            .flat_map(|g| Self::arc(g.start, g.end).expect("gap length in (0, 1]").intervals)
            .collect();
        Self::normalized(raw)
    }

    /// Some point of the set.
    pub fn some_point(&self) -> Option<Turn> {
        self.intervals.first().map(|&(a, _)| a)
    }

    pub fn total_length(&self) -> Turn {
        self.intervals.iter().fold(Turn::zero(), |acc, &(a, b)| acc + (b - a))
    }

    pub fn to_f64_pairs(&self) -> Vec<[f64; 2]> {
        self.intervals.iter().map(|&(a, b)| [turn_to_f64(a), turn_to_f64(b)]).collect()
    }
}

impl fmt::Display for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.intervals.iter().map(|(a, b)| format!("[{a}, {b}]")).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

impl Serialize for ArcSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Arcs {
            arcs: Vec<[String; 2]>,
        }
        Arcs { arcs: self.intervals.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect() }.serialize(s)
    }
}

/// Parses `"p/q"`, an integer, or a decimal into a turn.
pub fn parse_turn(s: &str) -> Result<Turn> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad turn {s:?}")))?;
        let q: i64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad turn {s:?}")))?;
        if q == 0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Turn::new(p, q));
    }
    let x: f64 = s.parse().map_err(|_| Error::Parse(format!("bad turn {s:?}")))?;
    turn_from_f64(x)
}

/// Exact conversion of a float with at most nine decimal digits.
pub fn turn_from_f64(x: f64) -> Result<Turn> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("non-finite turn {x}")));
    }
    let scale = 1_000_000_000i64;
    let n = (x * scale as f64).round();
    if (n / scale as f64 - x).abs() > 1e-12 {
        return Err(Error::Parse(format!("turn {x} needs more than nine decimals; use p/q")));
    }
    Ok(Turn::new(n as i64, scale))
}

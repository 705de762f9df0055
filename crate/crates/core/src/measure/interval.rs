use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauge::Gauge;

use super::covering::{ContentEstimate, Covering, Interval, Member, Mode, Piece};

/// One-dimensional content (and measure) of `[a, b]`: `b - a`.
pub fn interval_content(iv: &Interval) -> f64 {
    iv.length()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntervalCoverCheck {
    pub covers: bool,
    pub total_length: f64,
}

/// Whether `pieces` cover `iv`, found by a sweep over the pieces sorted by
/// left endpoint, and their total length.
pub fn verify_interval_cover(iv: &Interval, pieces: &[Interval]) -> IntervalCoverCheck {
    let total_length = pieces.iter().map(Interval::length).sum();
    let mut sorted = pieces.to_vec();
    sorted.sort_by(|x, y| x.start().total_cmp(&y.start()));
    // right end of the covered stretch starting at iv.start()
    let mut reach: Option<f64> = None;
    for p in &sorted {
        match reach {
            None if p.start() > iv.start() => break,
            None => {
                if p.end() >= iv.start() {
                    reach = Some(p.end());
                }
            }
            Some(r) if r >= iv.end() => break,
            Some(r) => {
                if p.start() > r {
                    break;
                }
                reach = Some(r.max(p.end()));
            }
        }
    }
    IntervalCoverCheck {
        covers: reach.is_some_and(|r| r >= iv.end()),
        total_length,
    }
}

/// Slope `c` if `h(t) = c t` for every `t >= 0`.
fn linear_slope(h: &Gauge) -> Result<f64> {
    match h.power_near_zero() {
        (c, alpha, limit) if alpha == 1.0 && limit == f64::INFINITY => Ok(c),
        _ => Err(Error::Unsupported(
            "interval mode supports linear gauges h(t) = c t only".into(),
        )),
    }
}

/// `c (b - a)` for the gauge `c t`. Without `eps` the witness is `[a, b]`
/// itself; with `eps` it is `[a, b]` cut into the fewest equal pieces
/// shorter than `eps`.
pub(crate) fn interval_estimate(iv: &Interval, h: &Gauge, eps: Option<f64>) -> Result<ContentEstimate> {
    let slope = linear_slope(h)?;
    let len = iv.length();
    let (pieces, mode) = match eps {
        None => (1u64, Mode::Content),
        Some(e) => {
            let k = (len / e).floor() + 1.0;
            if k >= u64::MAX as f64 {
                return Err(Error::Unsupported(format!("eps = {e} needs too many pieces")));
            }
            (k as u64, Mode::Premeasure { eps: e })
        }
    };
    let piece = Piece {
        member: Member::Intervals { span: *iv, pieces },
        count: pieces as u128,
        diameter: len / pieces as f64,
    };
    Ok(ContentEstimate {
        value: slope * len,
        witness: Covering::new(vec![piece]),
        exact: true,
        mode,
    })
}

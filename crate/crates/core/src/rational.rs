//! Exact density values and rational snapping.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Exact density `motifs / nodes`.
pub type Density = Ratio<i64>;

pub fn density(motifs: u64, nodes: usize) -> Density {
    if nodes == 0 {
        return Density::from_integer(0);
    }
    Density::new(motifs as i64, nodes as i64)
}

pub fn ceil_to_u64(r: Density) -> u64 {
    r.ceil().to_integer().max(0) as u64
}

pub fn to_f64(r: Density) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Simplest fraction in the half-open interval `(lo, hi]`, found by
/// Stern–Brocot descent. When the interval holds exactly one fraction with
/// denominator at most `max_denom`, that fraction is the one returned;
/// anything else is reported as an error.
pub fn snap_to_fraction(lo: Density, hi: Density, max_denom: i64) -> Result<Density> {
    if lo >= hi {
        return Err(Error::Internal(format!("empty snapping interval ({lo}, {hi}]")));
    }
    if lo < Density::from_integer(0) {
        return Err(Error::Internal("negative snapping interval".into()));
    }
    let (mut lp, mut lq) = (0i64, 1i64);
    let (mut rp, mut rq) = (1i64, 0i64);
    loop {
        // Stride along one side while the mediant stays out of range.
        let (mp, mq) = (lp + rp, lq + rq);
        let med = Density::new(mp, mq);
        if med <= lo {
            // Largest k with (lp + k*rp)/(lq + k*rq) <= lo.
            let k = stride(lp, lq, rp, rq, lo, true).max(1);
            lp += k * rp;
            lq += k * rq;
        } else if med > hi {
            let k = stride(rp, rq, lp, lq, hi, false).max(1);
            rp += k * lp;
            rq += k * lq;
        } else {
            if mq > max_denom {
                return Err(Error::Internal(format!(
                    "no fraction with denominator <= {max_denom} in ({lo}, {hi}]"
                )));
            }
            return Ok(med);
        }
        if lq > max_denom && rq > max_denom {
            return Err(Error::Internal(format!(
                "no fraction with denominator <= {max_denom} in ({lo}, {hi}]"
            )));
        }
    }
}

/// Number of times `(bp, bq)` can be added to `(ap, aq)` while the result
/// stays on the same side of `bound`.
fn stride(ap: i64, aq: i64, bp: i64, bq: i64, bound: Density, left: bool) -> i64 {
    let (n, d) = (*bound.numer() as i128, *bound.denom() as i128);
    let (ap, aq, bp, bq) = (ap as i128, aq as i128, bp as i128, bq as i128);
    // left:  (ap + k bp) d <= n (aq + k bq)  <=>  k (bp d - n bq) <= n aq - ap d
    // right: (ap + k bp) d >  n (aq + k bq)  <=>  k (n bq - bp d) <  ap d - n aq
    let (coef, rhs) = if left { (bp * d - n * bq, n * aq - ap * d) } else { (n * bq - bp * d, ap * d - n * aq) };
    if coef <= 0 {
        return 1;
    }
    let k = if left { rhs / coef } else { (rhs - 1) / coef };
    k.clamp(1, i64::MAX as i128 / 4) as i64
}

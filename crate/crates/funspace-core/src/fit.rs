//! Least-squares slope fitting and the finite-probe limit rule.
//!
//! Numeric limits are undecidable from finitely many samples, so every
//! "tends to zero" / "diverges" verdict in the crate goes through one
//! documented, configurable rule (see [`LimitRule`]); anything that fails
//! both tests is reported as inconclusive rather than guessed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A fitted line `y = slope * x + intercept` in whatever coordinates the
/// caller supplied.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares on raw coordinates; needs at least two distinct xs.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Fit(format!(
            "need at least 2 matching points, got {} xs / {} ys",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all x values coincide".into()));
    }
    let slope = sxy / sxx;
    Ok(LineFit {
        slope,
        intercept: my - slope * mx,
    })
}

/// Least squares on `(ln x, ln y)`; pairs with a non-positive entry are
/// dropped, and at least four surviving points are required so a slope is
/// actually determined by data.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let pairs: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|&(&x, &y)| x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(&x, &y)| (x.ln(), y.ln()))
        .collect();
    if pairs.len() < 4 {
        return Err(Error::Fit(format!(
            "log-log fit needs at least 4 positive points, got {}",
            pairs.len()
        )));
    }
    let lx: Vec<f64> = pairs.iter().map(|&(x, _)| x).collect();
    let ly: Vec<f64> = pairs.iter().map(|&(_, y)| y).collect();
    fit_line(&lx, &ly)
}

/// Verdict on the behaviour of a probed quantity as its argument tends to 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitVerdict {
    TendsToZero,
    Diverges,
    Inconclusive,
}

/// Thresholds of the limit rule. A sequence sampled at decreasing arguments
/// "tends to zero" when its tail is monotone decreasing, the final value is
/// below `zero_tol` and the fitted log-log slope exceeds `min_slope`; it
/// "diverges" when an infinite sample appears, or the tail is monotone
/// increasing past `divergence_threshold`, or the slope drops below
/// `-min_slope`. Everything else is inconclusive.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LimitRule {
    pub zero_tol: f64,
    pub divergence_threshold: f64,
    pub min_slope: f64,
}

impl Default for LimitRule {
    fn default() -> Self {
        Self {
            zero_tol: 1e-3,
            divergence_threshold: 1e3,
            min_slope: 0.1,
        }
    }
}

impl LimitRule {
    /// Classify probes `(argument, value)` with arguments strictly
    /// decreasing toward 0. Returns the verdict and the fitted slope when
    /// one could be computed.
    pub fn classify(&self, probes: &[(f64, f64)]) -> (LimitVerdict, Option<f64>) {
        if probes.is_empty() {
            return (LimitVerdict::Inconclusive, None);
        }
        if probes.iter().any(|&(_, v)| v.is_infinite() || v.is_nan()) {
            return (LimitVerdict::Diverges, None);
        }
        if probes.iter().all(|&(_, v)| v == 0.0) {
            return (LimitVerdict::TendsToZero, None);
        }
        let tail_start = probes.len() / 2;
        let tail = &probes[tail_start..];
        let mono_decreasing = tail.windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-12));
        let mono_increasing = tail.windows(2).all(|w| w[1].1 >= w[0].1 * (1.0 - 1e-12));
        let last = probes.last().unwrap().1;
        let peak = probes.iter().map(|&(_, v)| v).fold(0.0f64, f64::max);

        let xs: Vec<f64> = probes.iter().map(|&(d, _)| d).collect();
        let ys: Vec<f64> = probes.iter().map(|&(_, v)| v).collect();
        let slope = fit_loglog(&xs[tail_start..], &ys[tail_start..])
            .or_else(|_| fit_loglog(&xs, &ys))
            .ok()
            .map(|l| l.slope);

        if mono_decreasing && last < self.zero_tol {
            if let Some(s) = slope {
                if s > self.min_slope {
                    return (LimitVerdict::TendsToZero, slope);
                }
            } else if last == 0.0 {
                return (LimitVerdict::TendsToZero, None);
            }
        }
        if (mono_increasing && peak > self.divergence_threshold)
            || slope.is_some_and(|s| s < -self.min_slope)
        {
            return (LimitVerdict::Diverges, slope);
        }
        (LimitVerdict::Inconclusive, slope)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_fit_recovers_slope() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [3.0, 5.0, 7.0, 9.0];
        let l = fit_line(&xs, &ys).unwrap();
        assert!((l.slope - 2.0).abs() < 1e-12);
        assert!((l.intercept - 1.0).abs() < 1e-12);
    }

    #[test]
    fn loglog_fit_recovers_power() {
        let xs: Vec<f64> = (1..=8).map(|k| 2f64.powi(-k)).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 3.0 * x.powf(0.5)).collect();
        let l = fit_loglog(&xs, &ys).unwrap();
        assert!((l.slope - 0.5).abs() < 1e-10);
    }

    #[test]
    fn loglog_fit_needs_four_points() {
        assert!(matches!(
            fit_loglog(&[1.0, 0.5, 0.25], &[1.0, 1.0, 1.0]),
            Err(Error::Fit(_))
        ));
    }

    #[test]
    fn limit_rule_three_ways() {
        let rule = LimitRule::default();
        let decay: Vec<(f64, f64)> = (2..=24).map(|k| {
            let d = 2f64.powi(-k);
            (d, d.sqrt())
        }).collect();
        assert_eq!(rule.classify(&decay).0, LimitVerdict::TendsToZero);

        let blow: Vec<(f64, f64)> = (2..=24).map(|k| {
            let d = 2f64.powi(-k);
            (d, d.powf(-0.8))
        }).collect();
        assert_eq!(rule.classify(&blow).0, LimitVerdict::Diverges);

        let flat: Vec<(f64, f64)> = (2..=24).map(|k| (2f64.powi(-k), 0.7)).collect();
        assert_eq!(rule.classify(&flat).0, LimitVerdict::Inconclusive);

        let infinite = vec![(0.5, f64::INFINITY)];
        assert_eq!(rule.classify(&infinite).0, LimitVerdict::Diverges);

        let zeros: Vec<(f64, f64)> = (2..=10).map(|k| (2f64.powi(-k), 0.0)).collect();
        assert_eq!(rule.classify(&zeros).0, LimitVerdict::TendsToZero);
    }
}

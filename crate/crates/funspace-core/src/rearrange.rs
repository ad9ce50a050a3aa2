//! Non-increasing rearrangement f*, the maximal function f**, and the
//! distribution function, all exact for grid functions.
//!
//! The rearrangement of a sampled function is a right-continuous step
//! function on (0, T), T = box volume: the absolute values sorted in
//! descending order, each level spanning one cell measure, with equal levels
//! merged into a single segment. Everything downstream (truncated norms,
//! averages) operates on the exact segments, never on a resampling.

use crate::error::{Error, Result};
use crate::measure::SampledFunction;

/// Exact right-continuous non-increasing step function on (0, T).
///
/// Segment `i` carries `levels[i]` on `[breaks[i-1], breaks[i])` with the
/// convention `breaks[-1] = 0`; `breaks` is strictly increasing and ends at
/// the domain length `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecreasingProfile {
    breaks: Vec<f64>,
    levels: Vec<f64>,
    domain: f64,
}

impl DecreasingProfile {
    /// Build from raw segments; validates monotonicity and domain coverage.
    pub fn from_segments(breaks: Vec<f64>, levels: Vec<f64>, domain: f64) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != levels.len() {
            return Err(Error::InvalidSpec(
                "profile needs matching non-empty breaks and levels".into(),
            ));
        }
        if !(domain > 0.0) || !domain.is_finite() {
            return Err(Error::InvalidSpec(format!("profile domain must be positive, got {domain}")));
        }
        let mut prev = 0.0;
        for &b in &breaks {
            if !(b > prev) || !b.is_finite() {
                return Err(Error::InvalidSpec("profile breaks must be strictly increasing".into()));
            }
            prev = b;
        }
        if (breaks.last().unwrap() - domain).abs() > 1e-12 * domain {
            return Err(Error::InvalidSpec(format!(
                "last break {} must equal the domain length {domain}",
                breaks.last().unwrap()
            )));
        }
        for w in levels.windows(2) {
            if w[1] > w[0] {
                return Err(Error::InvalidSpec("profile levels must be non-increasing".into()));
            }
        }
        if levels.iter().any(|&l| l < 0.0 || !l.is_finite()) {
            return Err(Error::InvalidSpec("profile levels must be finite and >= 0".into()));
        }
        Ok(Self { breaks, levels, domain })
    }

    pub fn domain(&self) -> f64 {
        self.domain
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Segments as (start, end, level) triples.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breaks.iter().enumerate().map(|(i, &end)| {
            let start = if i == 0 { 0.0 } else { self.breaks[i - 1] };
            (start, end, self.levels[i])
        })
    }

    /// Value f*(t); right-continuous, defined for t in [0, T).
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..self.domain).contains(&t) {
            return Err(Error::Domain(format!(
                "profile evaluation point {t} outside [0, {})",
                self.domain
            )));
        }
        // first break strictly greater than t
        let idx = self.breaks.partition_point(|&b| b <= t);
        Ok(self.levels[idx.min(self.levels.len() - 1)])
    }

    /// Exact integral of the profile over (0, t).
    pub fn integral_to(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || t > self.domain * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "integration endpoint {t} outside (0, {}]",
                self.domain
            )));
        }
        let mut acc = 0.0;
        for (start, end, level) in self.segments() {
            if start >= t {
                break;
            }
            acc += level * (end.min(t) - start);
        }
        Ok(acc)
    }

    /// Pointwise scaling: returns the profile of |c| * f.
    pub fn scale(&self, c: f64) -> Self {
        Self {
            breaks: self.breaks.clone(),
            levels: self.levels.iter().map(|&l| l * c.abs()).collect(),
            domain: self.domain,
        }
    }

    /// Pointwise power |f|^e as a profile (monotone transforms commute with
    /// the rearrangement).
    pub fn powf(&self, e: f64) -> Result<Self> {
        let levels: Vec<f64> = self.levels.iter().map(|&l| l.powf(e)).collect();
        if levels.iter().any(|l| !l.is_finite()) {
            return Err(Error::Domain(format!("profile power {e} produced non-finite levels")));
        }
        DecreasingProfile::from_segments(self.breaks.clone(), levels, self.domain)
    }

    /// CSV rows `(t_break, level)`: segment end and the level holding up to
    /// it. Exact values, no resampling.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_break,level\n");
        for (_, end, level) in self.segments() {
            out.push_str(&format!("{end},{level}\n"));
        }
        out
    }
}

/// The non-increasing rearrangement of `f`: sorted |values| descending, each
/// holding for one cell measure, ties merged. Equals the infimum formula of
/// the distribution-function definition exactly for step functions.
pub fn rearrangement(f: &SampledFunction) -> DecreasingProfile {
    let cell = f.cell_measure();
    let total = f.cell_count();
    let mut mags: Vec<f64> = f.values.iter().map(|v| v.abs()).collect();
    // descending; magnitudes are finite by construction
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let mut breaks = Vec::new();
    let mut levels = Vec::new();
    let mut i = 0usize;
    while i < total {
        let level = mags[i];
        let mut j = i + 1;
        while j < total && mags[j] == level {
            j += 1;
        }
        // break position as an exact multiple of the cell measure
        let end = if j == total {
            f.box_domain.volume()
        } else {
            j as f64 * cell
        };
        breaks.push(end);
        levels.push(level);
        i = j;
    }
    DecreasingProfile {
        breaks,
        levels,
        domain: f.box_domain.volume(),
    }
}

/// Distribution function: measure of the super-level set `{|f| > lambda}`.
pub fn distribution(f: &SampledFunction, lambda: f64) -> Result<f64> {
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidThreshold(lambda));
    }
    let count = f.values.iter().filter(|v| v.abs() > lambda).count();
    Ok(count as f64 * f.cell_measure())
}

/// The maximal function f**(t) = (1/t) * integral of f* over (0, t),
/// evaluated in closed form from the step segments.
pub fn maximal(profile: &DecreasingProfile, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < profile.domain()) {
        return Err(Error::Domain(format!(
            "maximal function needs t in (0, {}), got {t}",
            profile.domain()
        )));
    }
    Ok(profile.integral_to(t)? / t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::BoxDomain;
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_function(seed: u64, cells: usize, lo: f64, hi: f64) -> SampledFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..cells).map(|_| rng.gen_range(lo..hi)).collect();
        SampledFunction::new(BoxDomain::interval(0.0, 2.0).unwrap(), vec![cells], values).unwrap()
    }

    /// Independent realization of the infimum formula: scan the candidate
    /// levels {0} U {|values|} and take the smallest with distribution <= t.
    fn rearrangement_oracle(f: &SampledFunction, t: f64) -> f64 {
        let mut candidates: Vec<f64> = f.values.iter().map(|v| v.abs()).collect();
        candidates.push(0.0);
        candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for lambda in candidates {
            if distribution(f, lambda).unwrap() <= t {
                return lambda;
            }
        }
        unreachable!("distribution at the max level is zero");
    }

    #[test]
    fn indicator_profile() {
        let f = SampledFunction::indicator_1d(
            BoxDomain::interval(0.0, 2.0).unwrap(),
            8,
            0.5,
            1.5,
            -3.0,
        )
        .unwrap();
        let p = rearrangement(&f);
        assert_eq!(p.levels(), &[3.0, 0.0]);
        assert_eq!(p.breaks(), &[1.0, 2.0]);
        assert_eq!(p.eval(0.999).unwrap(), 3.0);
        assert_eq!(p.eval(1.0).unwrap(), 0.0);
    }

    #[test]
    fn profile_invariant_under_permutation() {
        let f = random_function(3, 64, -5.0, 5.0);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut shuffled = f.values.clone();
        shuffled.shuffle(&mut rng);
        let g = SampledFunction::new(f.box_domain.clone(), f.cells_per_axis.clone(), shuffled)
            .unwrap();
        assert_eq!(rearrangement(&f), rearrangement(&g));
    }

    #[test]
    fn profile_matches_distribution_inversion_oracle() {
        let f = random_function(17, 128, -4.0, 4.0);
        let p = rearrangement(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let t = rng.gen_range(0.0..p.domain());
            assert_eq!(p.eval(t).unwrap(), rearrangement_oracle(&f, t), "t = {t}");
        }
    }

    #[test]
    fn distribution_examples() {
        let f = SampledFunction::indicator_1d(
            BoxDomain::interval(0.0, 2.0).unwrap(),
            8,
            0.0,
            1.0,
            3.0,
        )
        .unwrap();
        assert_eq!(distribution(&f, 3.0).unwrap(), 0.0);
        assert_eq!(distribution(&f, 5.0).unwrap(), 0.0);
        assert_eq!(distribution(&f, 1.0).unwrap(), 1.0);
        assert!(matches!(distribution(&f, -0.1), Err(Error::InvalidThreshold(_))));
    }

    #[test]
    fn distribution_matches_profile_superlevel_measure() {
        let f = random_function(23, 96, -2.0, 2.0);
        let p = rearrangement(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let lambda = rng.gen_range(0.0..2.5);
            let d = distribution(&f, lambda).unwrap();
            // measure where the profile exceeds lambda
            let mut m = 0.0;
            for (start, end, level) in p.segments() {
                if level > lambda {
                    m = end;
                } else {
                    m = m.max(start);
                    break;
                }
            }
            assert!((d - m).abs() < 1e-12, "lambda = {lambda}: {d} vs {m}");
        }
    }

    #[test]
    fn maximal_constant_profile() {
        let p = DecreasingProfile::from_segments(vec![2.0], vec![5.0], 2.0).unwrap();
        for &t in &[0.1, 0.5, 1.9] {
            assert!((maximal(&p, t).unwrap() - 5.0).abs() < 1e-15);
        }
    }

    #[test]
    fn maximal_indicator_halves() {
        let p = DecreasingProfile::from_segments(vec![1.0, 4.0], vec![1.0, 0.0], 4.0).unwrap();
        assert!((maximal(&p, 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(maximal(&p, 0.0), Err(Error::Domain(_))));
        assert!(matches!(maximal(&p, 4.0), Err(Error::Domain(_))));
    }

    /// Blind adaptive quadrature of the step profile over (0, t). The error
    /// estimate of a single run can coincidentally vanish when a jump lands
    /// on a zero of the Gauss/Kronrod difference, so integrate over three
    /// independently randomized pre-partitions and take the median.
    fn quadrature_oracle(p: &DecreasingProfile, t: f64) -> f64 {
        let mut runs: Vec<f64> = (0..3u64)
            .map(|seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
                let mut cuts: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..t)).collect();
                cuts.push(0.0);
                cuts.push(t);
                cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
                cuts.windows(2)
                    .map(|w| {
                        crate::quad::adaptive_gk(&|s| p.eval(s).unwrap(), w[0], w[1], 1e-14, 1e-14)
                            .value
                    })
                    .sum::<f64>()
            })
            .collect();
        runs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        runs[1]
    }

    #[test]
    fn maximal_matches_quadrature_oracle() {
        let f = random_function(29, 16, 0.0, 4.0);
        let p = rearrangement(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..100 {
            let t = rng.gen_range(1e-3..p.domain() * 0.999);
            let direct = maximal(&p, t).unwrap();
            let oracle = quadrature_oracle(&p, t) / t;
            assert!(
                (direct - oracle).abs() <= 1e-12 * (1.0 + oracle),
                "t = {t}: {direct} vs {oracle}"
            );
        }
    }

    #[test]
    fn maximal_dominates_profile_and_decreases() {
        let f = random_function(31, 50, 0.0, 3.0);
        let p = rearrangement(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut ts: Vec<f64> = (0..60).map(|_| rng.gen_range(1e-6..p.domain())).collect();
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let vals: Vec<f64> = ts.iter().map(|&t| maximal(&p, t).unwrap()).collect();
        for (t, v) in ts.iter().zip(&vals) {
            assert!(*v >= p.eval(*t).unwrap() - 1e-12);
        }
        for w in vals.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn subadditivity_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for trial in 0..50 {
            let f = random_function(1000 + trial, 40, -3.0, 3.0);
            let g = random_function(2000 + trial, 40, -3.0, 3.0);
            let sum = f.add(&g).unwrap();
            let pf = rearrangement(&f);
            let pg = rearrangement(&g);
            let ps = rearrangement(&sum);
            for _ in 0..20 {
                let t = rng.gen_range(1e-9..pf.domain());
                let lhs = ps.eval(t).unwrap();
                let rhs = pf.eval(t / 2.0).unwrap() + pg.eval(t / 2.0).unwrap();
                assert!(lhs <= rhs + 1e-12 * (1.0 + rhs), "t = {t}: {lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn monotone_convergence_of_profiles() {
        let f = random_function(41, 32, 0.0, 2.0);
        let p_lim = rearrangement(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let probes: Vec<f64> = (0..40).map(|_| rng.gen_range(1e-9..p_lim.domain())).collect();
        let mut prev = vec![0.0; probes.len()];
        for k in 1..=12 {
            let fk = f.scale(1.0 - 2f64.powi(-k)).unwrap();
            let pk = rearrangement(&fk);
            for (i, &t) in probes.iter().enumerate() {
                let v = pk.eval(t).unwrap();
                assert!(v + 1e-12 >= prev[i], "profile values must increase");
                prev[i] = v;
            }
        }
        for (i, &t) in probes.iter().enumerate() {
            let lim = p_lim.eval(t).unwrap();
            assert!((prev[i] - lim).abs() <= 2e-4 * (1.0 + lim));
        }
    }

    #[test]
    fn scaling_commutes() {
        let f = random_function(5, 24, -1.0, 1.0);
        let p1 = rearrangement(&f.scale(-2.5).unwrap());
        let p2 = rearrangement(&f).scale(2.5);
        assert_eq!(p1.breaks(), p2.breaks());
        for (a, b) in p1.levels().iter().zip(p2.levels()) {
            assert!((a - b).abs() <= 1e-15 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn csv_export_lists_exact_segments() {
        let p = DecreasingProfile::from_segments(vec![0.5, 2.0], vec![3.0, 1.0], 2.0).unwrap();
        assert_eq!(p.to_csv(), "t_break,level\n0.5,3\n2,1\n");
    }
}

//! Uniform-grid model of measurable functions on bounded boxes.
//!
//! Functions are piecewise constant on a uniform grid, so every integral over
//! the box is an exact cell sum. Only finite values are representable: the
//! loader and constructors reject NaN and infinities. All types are immutable
//! after construction and safe to share across threads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used when checking cell alignment of coordinates.
const ALIGN_TOL: f64 = 1e-9;

/// An axis-aligned bounded box in R^n with positive finite volume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidSpec(format!(
                "box needs matching non-empty bounds, got {} lower / {} upper",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::InvalidSpec(format!(
                    "box axis {i}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// 1-d interval helper.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn side(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo)
            .product()
    }

    /// True when `other` sits inside `self` (componentwise, with slack).
    pub fn contains(&self, other: &BoxDomain) -> bool {
        self.dim() == other.dim()
            && self
                .lower
                .iter()
                .zip(&other.lower)
                .all(|(a, b)| *b >= *a - ALIGN_TOL * self.volume().max(1.0))
            && self
                .upper
                .iter()
                .zip(&other.upper)
                .all(|(a, b)| *b <= *a + ALIGN_TOL * self.volume().max(1.0))
    }
}

/// A real-valued function sampled as one value per cell of a uniform grid.
///
/// `values` is row-major: the last axis varies fastest. The cell measure is
/// `volume / cell_count`, identical for every cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub box_domain: BoxDomain,
    pub cells_per_axis: Vec<usize>,
    pub values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(box_domain: BoxDomain, cells_per_axis: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if cells_per_axis.len() != box_domain.dim() {
            return Err(Error::InvalidSpec(format!(
                "cells_per_axis has {} axes, box has {}",
                cells_per_axis.len(),
                box_domain.dim()
            )));
        }
        if cells_per_axis.iter().any(|&c| c == 0) {
            return Err(Error::InvalidSpec("cells_per_axis entries must be positive".into()));
        }
        let count: usize = cells_per_axis.iter().product();
        if values.len() != count {
            return Err(Error::InvalidSpec(format!(
                "expected {} values for grid {:?}, got {}",
                count,
                cells_per_axis,
                values.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "non-finite value at flat index {bad}; only a.e.-finite functions are representable"
            )));
        }
        Ok(Self {
            box_domain,
            cells_per_axis,
            values,
        })
    }

    /// Constant-zero function on the given grid.
    pub fn zeros(box_domain: BoxDomain, cells_per_axis: Vec<usize>) -> Result<Self> {
        let count = cells_per_axis.iter().product();
        Self::new(box_domain, cells_per_axis, vec![0.0; count])
    }

    /// 1-d indicator `height * chi_[lo, hi)` built cell-exactly. The interval
    /// endpoints must be aligned to cell boundaries.
    pub fn indicator_1d(
        box_domain: BoxDomain,
        cells: usize,
        lo: f64,
        hi: f64,
        height: f64,
    ) -> Result<Self> {
        if box_domain.dim() != 1 {
            return Err(Error::Domain("indicator_1d needs a 1-d box".into()));
        }
        let cell = box_domain.side(0) / cells as f64;
        let i0 = aligned_index(lo - box_domain.lower[0], cell)?;
        let i1 = aligned_index(hi - box_domain.lower[0], cell)?;
        if i1 > cells || i0 >= i1 {
            return Err(Error::Domain(format!(
                "indicator [{lo}, {hi}) does not fit the box as a non-empty cell range"
            )));
        }
        let mut values = vec![0.0; cells];
        values[i0..i1].fill(height);
        Self::new(box_domain, vec![cells], values)
    }

    pub fn cell_count(&self) -> usize {
        self.values.len()
    }

    pub fn cell_measure(&self) -> f64 {
        self.box_domain.volume() / self.cell_count() as f64
    }

    /// Side length of one cell along `axis`.
    pub fn cell_side(&self, axis: usize) -> f64 {
        self.box_domain.side(axis) / self.cells_per_axis[axis] as f64
    }

    pub fn same_grid(&self, other: &SampledFunction) -> bool {
        self.box_domain == other.box_domain && self.cells_per_axis == other.cells_per_axis
    }

    fn require_same_grid(&self, other: &SampledFunction) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "grids differ: {:?} on {:?} vs {:?} on {:?}",
                self.cells_per_axis, self.box_domain, other.cells_per_axis, other.box_domain
            )))
        }
    }

    /// New function with the same grid and `op` applied to each value.
    pub fn map(&self, op: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.box_domain.clone(),
            self.cells_per_axis.clone(),
            self.values.iter().map(|&v| op(v)).collect(),
        )
    }

    /// Cellwise combination of two functions on the same grid.
    pub fn zip(&self, other: &SampledFunction, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.require_same_grid(other)?;
        Self::new(
            self.box_domain.clone(),
            self.cells_per_axis.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        )
    }

    pub fn add(&self, other: &SampledFunction) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SampledFunction) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        self.map(|v| c * v)
    }

    /// Exact integral of the function over the box (cell sum).
    pub fn integral(&self) -> f64 {
        let cell = self.cell_measure();
        self.values.iter().sum::<f64>() * cell
    }

    /// Measure of the cells indexed by `set` (an exact multiple of the cell
    /// measure); `set` must index into this grid.
    pub fn measure_of(&self, set: &[usize]) -> Result<f64> {
        for &i in set {
            if i >= self.cell_count() {
                return Err(Error::InvalidSet(format!(
                    "cell index {i} out of range for {} cells",
                    self.cell_count()
                )));
            }
        }
        Ok(set.len() as f64 * self.cell_measure())
    }

    /// `f * chi_E` for a cell-index set `E`.
    pub fn restrict_to_cells(&self, set: &[usize]) -> Result<Self> {
        self.measure_of(set)?; // validates indices
        let mut values = vec![0.0; self.cell_count()];
        for &i in set {
            values[i] = self.values[i];
        }
        Self::new(self.box_domain.clone(), self.cells_per_axis.clone(), values)
    }

    /// Restriction of the function to an aligned sub-box; the sub-box edges
    /// must land on cell boundaries of the parent grid (no resampling).
    pub fn restrict(&self, sub: &BoxDomain) -> Result<Self> {
        if sub.dim() != self.box_domain.dim() {
            return Err(Error::GridMismatch(format!(
                "sub-box dim {} vs parent dim {}",
                sub.dim(),
                self.box_domain.dim()
            )));
        }
        if !self.box_domain.contains(sub) {
            return Err(Error::Domain("sub-box is not contained in the parent box".into()));
        }
        let dim = self.box_domain.dim();
        let mut start = Vec::with_capacity(dim);
        let mut len = Vec::with_capacity(dim);
        for axis in 0..dim {
            let cell = self.cell_side(axis);
            let i0 = aligned_index(sub.lower[axis] - self.box_domain.lower[axis], cell)?;
            let i1 = aligned_index(sub.upper[axis] - self.box_domain.lower[axis], cell)?;
            if i1 <= i0 || i1 > self.cells_per_axis[axis] {
                return Err(Error::Alignment(format!(
                    "sub-box axis {axis} maps to empty or out-of-range cell span [{i0}, {i1})"
                )));
            }
            start.push(i0);
            len.push(i1 - i0);
        }
        let count: usize = len.iter().product();
        let mut values = Vec::with_capacity(count);
        let mut idx = vec![0usize; dim];
        loop {
            let mut flat = 0usize;
            for axis in 0..dim {
                flat = flat * self.cells_per_axis[axis] + (start[axis] + idx[axis]);
            }
            values.push(self.values[flat]);
            // odometer increment over the sub-grid, last axis fastest
            let mut axis = dim;
            loop {
                if axis == 0 {
                    return SampledFunction::new(sub.clone(), len, values);
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < len[axis] {
                    break;
                }
                idx[axis] = 0;
            }
        }
    }

    /// Flat index of the cell whose multi-index is `idx`.
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        let mut flat = 0usize;
        for axis in 0..self.cells_per_axis.len() {
            flat = flat * self.cells_per_axis[axis] + idx[axis];
        }
        flat
    }

    /// Center coordinates of the cell with flat index `flat`.
    pub fn cell_center(&self, mut flat: usize) -> Vec<f64> {
        let dim = self.box_domain.dim();
        let mut idx = vec![0usize; dim];
        for axis in (0..dim).rev() {
            idx[axis] = flat % self.cells_per_axis[axis];
            flat /= self.cells_per_axis[axis];
        }
        (0..dim)
            .map(|axis| self.box_domain.lower[axis] + (idx[axis] as f64 + 0.5) * self.cell_side(axis))
            .collect()
    }
}

/// Nearest integer k with |x - k*cell| <= tol, as a cell index offset.
fn aligned_index(x: f64, cell: f64) -> Result<usize> {
    let ratio = x / cell;
    let k = ratio.round();
    if (ratio - k).abs() > ALIGN_TOL * (1.0 + ratio.abs()) {
        return Err(Error::Alignment(format!(
            "coordinate offset {x} is not an integer multiple of the cell size {cell}"
        )));
    }
    if k < -0.5 {
        return Err(Error::Alignment(format!("coordinate offset {x} is below the box")));
    }
    Ok(k as usize)
}

/// The metric of local convergence in measure on a fixed grid:
/// `d(f, g) = integral of min(1, |f - g|)` over the box.
///
/// On a finite-measure box this metrizes convergence in measure; it is
/// symmetric, vanishes exactly when `f = g` on all cells, and satisfies the
/// triangle inequality.
pub fn dist_in_measure(f: &SampledFunction, g: &SampledFunction) -> Result<f64> {
    let diff = f.sub(g)?;
    let cell = diff.cell_measure();
    Ok(diff.values.iter().map(|v| v.abs().min(1.0)).sum::<f64>() * cell)
}

/// An ordered sequence of cell-index subsets of one grid.
///
/// The `shrinking` constructor enforces the finite realization of a sequence
/// of sets decreasing to the empty set: nested, measures non-increasing, and
/// the final measure at most half the initial one (so constant-measure
/// sequences are rejected).
#[derive(Debug, Clone)]
pub struct MeasurableSetSeq {
    sets: Vec<Vec<usize>>,
    nested: bool,
}

impl MeasurableSetSeq {
    /// Unconstrained sequence (any sets convergent a.e. to the empty set in
    /// the caller's bookkeeping).
    pub fn general(grid: &SampledFunction, sets: Vec<Vec<usize>>) -> Result<Self> {
        for s in &sets {
            grid.measure_of(s)?;
        }
        Ok(Self { sets, nested: false })
    }

    /// Nested non-increasing sequence with measures decreasing toward zero.
    pub fn shrinking(grid: &SampledFunction, sets: Vec<Vec<usize>>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidSequence("need at least one set".into()));
        }
        for s in &sets {
            grid.measure_of(s)?;
        }
        for w in sets.windows(2) {
            let prev: std::collections::HashSet<usize> = w[0].iter().copied().collect();
            if !w[1].iter().all(|i| prev.contains(i)) {
                return Err(Error::InvalidSequence("sets are not nested non-increasing".into()));
            }
        }
        let first = sets.first().unwrap().len();
        let last = sets.last().unwrap().len();
        if first > 0 && (last * 2 > first) {
            return Err(Error::InvalidSequence(format!(
                "measures do not shrink toward zero: first set has {first} cells, last {last}"
            )));
        }
        Ok(Self { sets, nested: true })
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn is_nested(&self) -> bool {
        self.nested
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

// ---------------------------------------------------------------------------
// JSON file format
// ---------------------------------------------------------------------------

/// On-disk JSON shape: `{"box": {"lower": [...], "upper": [...]},
/// "cells": [...], "values": [...]}` with values in row-major order.
#[derive(Serialize, Deserialize)]
struct SampledFunctionJson {
    #[serde(rename = "box")]
    box_domain: BoxDomain,
    cells: Vec<usize>,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn to_json(&self) -> Result<String> {
        let j = SampledFunctionJson {
            box_domain: self.box_domain.clone(),
            cells: self.cells_per_axis.clone(),
            values: self.values.clone(),
        };
        Ok(serde_json::to_string_pretty(&j)?)
    }

    /// Parse and validate the JSON function format; rejects non-finite
    /// entries and shape mismatches.
    pub fn from_json(text: &str) -> Result<Self> {
        let j: SampledFunctionJson = serde_json::from_str(text)?;
        let bd = BoxDomain::new(j.box_domain.lower, j.box_domain.upper)?;
        SampledFunction::new(bd, j.cells, j.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box(cells: usize) -> SampledFunction {
        SampledFunction::zeros(BoxDomain::interval(0.0, 1.0).unwrap(), vec![cells]).unwrap()
    }

    #[test]
    fn measure_of_empty_set_is_zero() {
        let f = unit_box(10);
        assert_eq!(f.measure_of(&[]).unwrap(), 0.0);
    }

    #[test]
    fn measure_of_full_unit_box() {
        let f = unit_box(10);
        let all: Vec<usize> = (0..10).collect();
        assert!((f.measure_of(&all).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn measure_of_three_cells_on_wider_box() {
        let f =
            SampledFunction::zeros(BoxDomain::interval(0.0, 2.0).unwrap(), vec![8]).unwrap();
        assert!((f.measure_of(&[0, 3, 7]).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn measure_of_rejects_out_of_range() {
        let f = unit_box(4);
        assert!(matches!(f.measure_of(&[4]), Err(Error::InvalidSet(_))));
    }

    #[test]
    fn dist_in_measure_identity_and_indicator() {
        let f = SampledFunction::indicator_1d(
            BoxDomain::interval(0.0, 1.0).unwrap(),
            8,
            0.0,
            0.25,
            1.0,
        )
        .unwrap();
        let zero = unit_box(8);
        assert_eq!(dist_in_measure(&f, &f).unwrap(), 0.0);
        assert!((dist_in_measure(&f, &zero).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn dist_in_measure_matches_cell_sum_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let bd = BoxDomain::interval(-1.0, 1.0).unwrap();
        let vals_f: Vec<f64> = (0..64).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let vals_g: Vec<f64> = (0..64).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let f = SampledFunction::new(bd.clone(), vec![64], vals_f.clone()).unwrap();
        let g = SampledFunction::new(bd, vec![64], vals_g.clone()).unwrap();
        let cell = 2.0 / 64.0;
        let oracle: f64 = vals_f
            .iter()
            .zip(&vals_g)
            .map(|(a, b)| (a - b).abs().min(1.0) * cell)
            .sum();
        assert!((dist_in_measure(&f, &g).unwrap() - oracle).abs() < 1e-14);
    }

    #[test]
    fn dist_rejects_grid_mismatch() {
        let f = unit_box(8);
        let g = unit_box(16);
        assert!(matches!(dist_in_measure(&f, &g), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn restrict_whole_box_is_identity() {
        let f = SampledFunction::indicator_1d(
            BoxDomain::interval(0.0, 2.0).unwrap(),
            8,
            0.0,
            1.0,
            1.0,
        )
        .unwrap();
        let r = f.restrict(&f.box_domain.clone()).unwrap();
        assert_eq!(r, f);
    }

    #[test]
    fn restrict_indicator_to_support() {
        let f = SampledFunction::indicator_1d(
            BoxDomain::interval(0.0, 2.0).unwrap(),
            8,
            0.0,
            1.0,
            1.0,
        )
        .unwrap();
        let r = f.restrict(&BoxDomain::interval(0.0, 1.0).unwrap()).unwrap();
        assert_eq!(r.cell_count(), 4);
        assert!(r.values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn restrict_misaligned_errors() {
        let f = unit_box(8);
        let sub = BoxDomain::interval(0.05, 0.5).unwrap();
        assert!(matches!(f.restrict(&sub), Err(Error::Alignment(_))));
    }

    #[test]
    fn restrict_then_integrate_matches_masked_sum() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let bd = BoxDomain::interval(0.0, 2.0).unwrap();
        let vals: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = SampledFunction::new(bd, vec![16], vals.clone()).unwrap();
        let sub = BoxDomain::interval(0.5, 1.5).unwrap();
        let r = f.restrict(&sub).unwrap();
        let cell = 2.0 / 16.0;
        let oracle: f64 = vals[4..12].iter().sum::<f64>() * cell;
        assert!((r.integral() - oracle).abs() < 1e-14);
    }

    #[test]
    fn restrict_2d_block() {
        let bd = BoxDomain::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let values: Vec<f64> = (0..16).map(|i| i as f64).collect();
        let f = SampledFunction::new(bd, vec![4, 4], values).unwrap();
        let sub = BoxDomain::new(vec![0.25, 0.5], vec![0.75, 1.0]).unwrap();
        let r = f.restrict(&sub).unwrap();
        // rows 1..3, cols 2..4 of the 4x4 grid
        assert_eq!(r.values, vec![6.0, 7.0, 10.0, 11.0]);
    }

    #[test]
    fn shrinking_sequence_validation() {
        let f = unit_box(8);
        let ok = MeasurableSetSeq::shrinking(
            &f,
            vec![vec![0, 1, 2, 3], vec![0, 1], vec![0], vec![]],
        )
        .unwrap();
        assert!(ok.is_nested());
        // constant measure rejected
        assert!(matches!(
            MeasurableSetSeq::shrinking(&f, vec![vec![0, 1], vec![0, 1], vec![0, 1]]),
            Err(Error::InvalidSequence(_))
        ));
        // non-nested rejected
        assert!(matches!(
            MeasurableSetSeq::shrinking(&f, vec![vec![0, 1], vec![2]]),
            Err(Error::InvalidSequence(_))
        ));
    }

    #[test]
    fn shrinking_measures_decrease() {
        let f = unit_box(16);
        let sets: Vec<Vec<usize>> = (0..5).map(|k| (0..(8 >> k)).collect()).collect();
        let seq = MeasurableSetSeq::shrinking(&f, sets).unwrap();
        let measures: Vec<f64> = seq
            .sets()
            .iter()
            .map(|s| f.measure_of(s).unwrap())
            .collect();
        assert!(measures.windows(2).all(|w| w[1] <= w[0]));
        assert!(*measures.last().unwrap() <= measures[0] / 2.0);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let f = SampledFunction::indicator_1d(
            BoxDomain::interval(0.0, 2.0).unwrap(),
            8,
            0.5,
            1.0,
            3.0,
        )
        .unwrap();
        let text = f.to_json().unwrap();
        let g = SampledFunction::from_json(&text).unwrap();
        assert_eq!(f, g);

        let bad = r#"{"box": {"lower": [0.0], "upper": [1.0]}, "cells": [2], "values": [1.0, null]}"#;
        assert!(SampledFunction::from_json(bad).is_err());
        let nan = r#"{"box": {"lower": [0.0], "upper": [1.0]}, "cells": [2], "values": [1.0]}"#;
        assert!(SampledFunction::from_json(nan).is_err());
    }

    #[test]
    fn cell_measure_consistency() {
        let f = SampledFunction::zeros(
            BoxDomain::new(vec![0.0, -1.0], vec![2.0, 1.0]).unwrap(),
            vec![10, 20],
        )
        .unwrap();
        let recon = f.cell_measure() * f.cell_count() as f64;
        assert!((recon - f.box_domain.volume()).abs() <= 1e-12 * f.box_domain.volume());
    }
}

//! Weight functions on (0, T).
//!
//! The closed family is `w(t) = c * t^a * (1 + log(t_ref/t))^b` with
//! `t_ref = max(T, 1)` fixed per weight; on it every norm, doubling and
//! vanishing question the crate asks is decidable in closed form. Tabulated
//! weights (piecewise constant on a user grid, log-spaced in practice) are
//! the escape hatch for counterexamples; every verdict derived from them is
//! flagged as empirical.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `w(t) = c * t^a * (1 + log(t_ref/t))^b` on `(0, domain_end)`.
///
/// The log factor is normalized by `t_ref = max(domain_end, 1)`, so it is at
/// least 1 on the whole domain; near 0 this agrees with any other |log t|
/// normalization up to bounded factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLogWeight {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub domain_end: f64,
}

impl PowerLogWeight {
    pub fn new(c: f64, a: f64, b: f64, domain_end: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidSpec(format!("weight scale must be positive, got {c}")));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidSpec("weight exponents must be finite".into()));
        }
        if !(domain_end > 0.0) || !domain_end.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "weight domain end must be positive and finite, got {domain_end}"
            )));
        }
        Ok(Self { c, a, b, domain_end })
    }

    /// Constant weight 1 on (0, domain_end).
    pub fn one(domain_end: f64) -> Result<Self> {
        Self::new(1.0, 0.0, 0.0, domain_end)
    }

    pub fn t_ref(&self) -> f64 {
        self.domain_end.max(1.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.c * t.powf(self.a) * (1.0 + (self.t_ref() / t).ln()).powf(self.b)
    }

    /// The weight of the power-transformed space: `w^e` is again power-log.
    pub fn powf(&self, e: f64) -> Result<Self> {
        Self::new(self.c.powf(e), self.a * e, self.b * e, self.domain_end)
    }

    /// Does `w(t) -> 0` as `t -> 0+`? Decidable from the exponents.
    pub fn vanishes_at_zero(&self) -> bool {
        self.a > 0.0 || (self.a == 0.0 && self.b < 0.0)
    }
}

/// Piecewise-constant weight from a table `(t_i, w_i)`: value `w_i` on
/// `[t_i, t_{i+1})`, extended by `w_0` down to 0 and by the last value up to
/// the domain end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedWeight {
    pub t: Vec<f64>,
    pub w: Vec<f64>,
}

impl TabulatedWeight {
    pub fn new(t: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        if t.len() != w.len() || t.is_empty() {
            return Err(Error::InvalidSpec(
                "tabulated weight needs matching non-empty t and w arrays".into(),
            ));
        }
        let mut prev = 0.0;
        for &ti in &t {
            if !(ti > prev) || !ti.is_finite() {
                return Err(Error::InvalidSpec(
                    "tabulated t values must be positive and strictly increasing".into(),
                ));
            }
            prev = ti;
        }
        if w.iter().any(|&wi| !(wi > 0.0) || !wi.is_finite()) {
            return Err(Error::InvalidSpec("tabulated weight values must be positive and finite".into()));
        }
        Ok(Self { t, w })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let idx = self.t.partition_point(|&ti| ti <= t);
        if idx == 0 {
            self.w[0]
        } else {
            self.w[idx - 1]
        }
    }

    /// Constancy intervals covering `(0, end)`: triples `(lo, hi, value)`.
    pub fn pieces(&self, end: f64) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        let mut lo = 0.0;
        let mut value = self.w[0];
        for (i, &ti) in self.t.iter().enumerate() {
            if ti >= end {
                break;
            }
            if i > 0 || ti > 0.0 {
                if ti > lo {
                    out.push((lo, ti, value));
                    lo = ti;
                }
                value = self.w[i];
            }
        }
        if end > lo {
            out.push((lo, end, value));
        }
        out
    }
}

/// Tabulated weight whose indicator-norm function fails to double: dyadic
/// spikes at `t = 2^-k` of width `2^-2k` carrying mass `2^-k^2`, separated
/// by fillers of negligible mass. The head integral below `2^-k` is then
/// dominated by the next spike's much smaller mass, so `B(2t)/B(t)` at
/// `t = 2^-k` grows like `2^(2k+1)`.
pub fn doubling_failure_spike_weight(depth: u32) -> Result<TabulatedWeight> {
    let depth = depth.clamp(4, 26);
    let mut t = vec![2f64.powi(-2 * depth as i32)];
    let mut w = vec![2f64.powi(-((depth * depth) as i32))];
    for k in (1..=depth as i32).rev() {
        let tk = 2f64.powi(-k);
        t.push(tk);
        w.push(2f64.powi(2 * k - k * k)); // spike level: mass 2^(-k^2) over width 2^(-2k)
        t.push(tk * (1.0 + tk));
        w.push(2f64.powi(-k * k)); // filler level until the next dyadic node
    }
    TabulatedWeight::new(t, w)
}

/// Either member of the weight family, as read from JSON:
/// `{"c": ..., "a": ..., "b": ...}` or `{"tabulated": {"t": [...], "w": [...]}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    PowerLog { c: f64, a: f64, b: f64 },
    Tabulated { tabulated: TabulatedWeight },
}

impl WeightSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: WeightSpec = serde_json::from_str(text)?;
        if let WeightSpec::Tabulated { tabulated } = &spec {
            TabulatedWeight::new(tabulated.t.clone(), tabulated.w.clone())?;
        }
        Ok(spec)
    }
}

/// A weight bound to its domain (0, T).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Weight {
    PowerLog(PowerLogWeight),
    Tabulated(TabulatedWeight),
}

impl Weight {
    pub fn from_spec(spec: &WeightSpec, domain_end: f64) -> Result<Self> {
        match spec {
            WeightSpec::PowerLog { c, a, b } => {
                Ok(Weight::PowerLog(PowerLogWeight::new(*c, *a, *b, domain_end)?))
            }
            WeightSpec::Tabulated { tabulated } => Ok(Weight::Tabulated(TabulatedWeight::new(
                tabulated.t.clone(),
                tabulated.w.clone(),
            )?)),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Weight::PowerLog(w) => w.eval(t),
            Weight::Tabulated(w) => w.eval(t),
        }
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self, Weight::Tabulated(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_log_positive_on_domain() {
        let w = PowerLogWeight::new(2.0, -0.5, 1.5, 0.7).unwrap();
        for &t in &[1e-12, 1e-6, 0.1, 0.69] {
            let v = w.eval(t);
            assert!(v > 0.0 && v.is_finite(), "w({t}) = {v}");
        }
        assert_eq!(w.t_ref(), 1.0);
        let wide = PowerLogWeight::new(1.0, 0.0, 1.0, 5.0).unwrap();
        assert_eq!(wide.t_ref(), 5.0);
    }

    #[test]
    fn vanishing_classification() {
        let t = 1.0;
        assert!(PowerLogWeight::new(1.0, 0.5, 3.0, t).unwrap().vanishes_at_zero());
        assert!(PowerLogWeight::new(1.0, 0.0, -0.2, t).unwrap().vanishes_at_zero());
        assert!(!PowerLogWeight::new(1.0, 0.0, 0.0, t).unwrap().vanishes_at_zero());
        assert!(!PowerLogWeight::new(1.0, -0.3, -2.0, t).unwrap().vanishes_at_zero());
    }

    #[test]
    fn tabulated_piecewise_eval() {
        let w = TabulatedWeight::new(vec![0.25, 0.5, 1.0], vec![4.0, 2.0, 1.0]).unwrap();
        assert_eq!(w.eval(0.1), 4.0); // extended below the first node
        assert_eq!(w.eval(0.25), 4.0);
        assert_eq!(w.eval(0.3), 4.0);
        assert_eq!(w.eval(0.5), 2.0);
        assert_eq!(w.eval(0.75), 2.0);
        assert_eq!(w.eval(1.5), 1.0);
        let pieces = w.pieces(0.8);
        assert_eq!(pieces, vec![(0.0, 0.25, 4.0), (0.25, 0.5, 4.0), (0.5, 0.8, 2.0)]);
    }

    #[test]
    fn weight_spec_json_both_shapes() {
        let p = WeightSpec::from_json(r#"{"c": 1.0, "a": -0.5, "b": 2.0}"#).unwrap();
        assert!(matches!(p, WeightSpec::PowerLog { .. }));
        let t =
            WeightSpec::from_json(r#"{"tabulated": {"t": [0.5, 1.0], "w": [2.0, 1.0]}}"#).unwrap();
        assert!(matches!(t, WeightSpec::Tabulated { .. }));
        assert!(WeightSpec::from_json(r#"{"tabulated": {"t": [1.0, 0.5], "w": [1.0, 1.0]}}"#).is_err());
    }
}

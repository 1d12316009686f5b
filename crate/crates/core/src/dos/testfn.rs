//! Lipschitz test functions with exact sup norm and Lipschitz constant.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Analytic form of a test function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    /// Linear interpolation through sorted knots, constant outside them.
    PiecewiseLinear(Vec<(f64, f64)>),
    /// cos(t x) / √(2π).
    Cos(f64),
    /// sin(t x) / √(2π).
    Sin(f64),
    /// Σ a_k x^k.
    Polynomial(Vec<f64>),
    /// log|x - (e + i eps)|.
    LogDistance { e: f64, eps: f64 },
    /// Σ a_i f_i.
    Combination(Vec<(f64, TestFunction)>),
}

/// A function on [-r, r] together with its sup norm and Lipschitz constant
/// on that interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub shape: Shape,
    pub r: f64,
    pub lip: f64,
    pub sup: f64,
    pub label: String,
}

impl TestFunction {
    pub fn eval(&self, x: f64) -> f64 {
        eval_shape(&self.shape, x)
    }

    /// ‖f‖_∞ + L_f.
    pub fn lip_norm(&self) -> f64 {
        self.sup + self.lip
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>, r: f64, label: impl Into<String>) -> Result<Self> {
        if knots.is_empty() {
            return invalid("piecewise-linear function needs at least one knot");
        }
        if knots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return invalid("knots must be strictly increasing");
        }
        let mut lip = 0.0f64;
        for w in knots.windows(2) {
            let (a, b) = (w[0], w[1]);
            // only segments meeting [-r, r] count
            if b.0 > -r && a.0 < r {
                lip = lip.max(((b.1 - a.1) / (b.0 - a.0)).abs());
            }
        }
        let shape = Shape::PiecewiseLinear(knots);
        // the extremes of a piecewise-linear function sit at knots or at ±r
        let mut sup = eval_shape(&shape, -r).abs().max(eval_shape(&shape, r).abs());
        if let Shape::PiecewiseLinear(k) = &shape {
            for &(x, y) in k {
                if x.abs() <= r {
                    sup = sup.max(y.abs());
                }
            }
        }
        Ok(Self { shape, r, lip, sup, label: label.into() })
    }

    /// |x - a|.
    pub fn abs_tent(a: f64, r: f64) -> Self {
        let shape = Shape::PiecewiseLinear(vec![(-r - 1.0, r + 1.0 + a), (a, 0.0), (r + 1.0, r + 1.0 - a)]);
        let sup = (r + a.abs()).max(0.0);
        Self { shape, r, lip: 1.0, sup, label: format!("abs({a})") }
    }

    /// The ramp f₋ with f₋ = 1 left of e - a, 0 right of e.
    pub fn ramp_below(e: f64, a: f64, r: f64) -> Result<Self> {
        if !(a > 0.0) {
            return invalid("ramp width must be positive");
        }
        let mut f = Self::piecewise_linear(vec![(e - a, 1.0), (e, 0.0)], r, format!("ramp_below({e},{a})"))?;
        f.lip = 1.0 / a;
        Ok(f)
    }

    /// The ramp f₊ with f₊ = 1 left of e, 0 right of e + a.
    pub fn ramp_above(e: f64, a: f64, r: f64) -> Result<Self> {
        if !(a > 0.0) {
            return invalid("ramp width must be positive");
        }
        let mut f = Self::piecewise_linear(vec![(e, 1.0), (e + a, 0.0)], r, format!("ramp_above({e},{a})"))?;
        f.lip = 1.0 / a;
        Ok(f)
    }

    pub fn cos(t: f64, r: f64) -> Self {
        let s = (2.0 * PI).sqrt().recip();
        // cos(0) = 1 is always attained
        let sup = s;
        let lip = s * t.abs() * if t.abs() * r >= PI / 2.0 { 1.0 } else { (t * r).sin().abs() };
        Self { shape: Shape::Cos(t), r, lip, sup, label: format!("cos({t})") }
    }

    pub fn sin(t: f64, r: f64) -> Self {
        let s = (2.0 * PI).sqrt().recip();
        let sup = s * if t.abs() * r >= PI / 2.0 { 1.0 } else { (t * r).sin().abs() };
        // the derivative t cos(t x) is largest at x = 0
        let lip = s * t.abs();
        Self { shape: Shape::Sin(t), r, lip, sup, label: format!("sin({t})") }
    }

    /// Polynomial with sup norm and Lipschitz constant evaluated on a grid of
    /// 20001 points plus the critical points of degree ≤ 2.
    pub fn polynomial(coeffs: Vec<f64>, r: f64) -> Self {
        let deriv: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
        let mut sup = 0.0f64;
        let mut lip = 0.0f64;
        let mut probe = |x: f64| {
            sup = sup.max(horner(&coeffs, x).abs());
            lip = lip.max(horner(&deriv, x).abs());
        };
        let n = 20000;
        for i in 0..=n {
            probe(-r + 2.0 * r * i as f64 / n as f64);
        }
        if coeffs.len() == 3 && coeffs[2] != 0.0 {
            let x = -coeffs[1] / (2.0 * coeffs[2]);
            if x.abs() <= r {
                probe(x);
            }
        }
        let label = format!("poly{coeffs:?}");
        Self { shape: Shape::Polynomial(coeffs), r, lip, sup, label }
    }

    /// log|x - (e + i eps)| on [-r, r].
    pub fn log_distance(e: f64, eps: f64, r: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return invalid("imaginary part must be positive");
        }
        let near = if e.abs() <= r { 0.0 } else { e.abs() - r };
        let far = (e - r).abs().max((e + r).abs());
        let lo = 0.5 * (near * near + eps * eps).ln();
        let hi = 0.5 * (far * far + eps * eps).ln();
        let sup = lo.abs().max(hi.abs());
        // |g'| = |x-e|/((x-e)^2+eps^2) peaks at |x-e| = eps
        let lip = if near <= eps && far >= eps {
            0.5 / eps
        } else {
            let d = if near > eps { near } else { far };
            d / (d * d + eps * eps)
        };
        Ok(Self { shape: Shape::LogDistance { e, eps }, r, lip, sup, label: format!("log|x-({e}+{eps}i)|") })
    }

    /// Σ a_i f_i; the stored norms are the triangle-inequality upper bounds.
    pub fn combination(terms: Vec<(f64, TestFunction)>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return invalid("empty combination");
        };
        let r = first.1.r;
        if terms.iter().any(|(_, f)| f.r != r) {
            return invalid("combined functions must share the interval");
        }
        let lip = terms.iter().map(|(a, f)| a.abs() * f.lip).sum();
        let sup = terms.iter().map(|(a, f)| a.abs() * f.sup).sum();
        let label = terms.iter().map(|(a, f)| format!("{a}*{}", f.label)).collect::<Vec<_>>().join("+");
        Ok(Self { shape: Shape::Combination(terms), r, lip, sup, label })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn eval_shape(shape: &Shape, x: f64) -> f64 {
    match shape {
        Shape::PiecewiseLinear(k) => {
            let first = k[0];
            let last = k[k.len() - 1];
            if x <= first.0 {
                return first.1;
            }
            if x >= last.0 {
                return last.1;
            }
            let i = k.partition_point(|p| p.0 <= x);
            let (a, b) = (k[i - 1], k[i]);
            a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
        }
        Shape::Cos(t) => (t * x).cos() / (2.0 * PI).sqrt(),
        Shape::Sin(t) => (t * x).sin() / (2.0 * PI).sqrt(),
        Shape::Polynomial(c) => horner(c, x),
        Shape::LogDistance { e, eps } => 0.5 * ((x - e).powi(2) + eps * eps).ln(),
        Shape::Combination(terms) => terms.iter().map(|(a, f)| a * f.eval(x)).sum(),
    }
}

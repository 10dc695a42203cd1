//! Scalar kernels shared by every matrix-level routine.
//!
//! * `tau(x, y)` is the divided difference of `exp`, i.e. the integral
//!   of `exp(u x + (1 - u) y)` over `u` in `[0, 1]`.
//! * `rho(x, y)` is the logarithmic-mean kernel `x y (ln x - ln y) / (x - y)`;
//!   it satisfies `rho(x, y) * tau(1 - ln x, 1 - ln y) = e`.
//! * `lambert_w0(t)` is the principal branch of the inverse of `w -> w e^w`
//!   restricted to `t >= 0`.
//!
//! Near-equal arguments switch to truncated Taylor series so neither kernel
//! loses digits to cancellation.

use crate::error::{Error, Result};

/// Relative argument gap below which `tau` and `rho` use their series forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableThreshold {
    relative_switch: f64,
}

impl StableThreshold {
    pub const DEFAULT_SWITCH: f64 = 1e-6;

    pub fn new(relative_switch: f64) -> Result<Self> {
        if !(relative_switch > 0.0 && relative_switch < 1e-3) {
            return Err(Error::InvalidConfig(format!(
                "series switch must lie in (0, 1e-3), got {relative_switch}"
            )));
        }
        Ok(Self { relative_switch })
    }

    pub fn relative_switch(&self) -> f64 {
        self.relative_switch
    }

    /// `tau` evaluated with this switch point.
    pub fn tau(&self, x: f64, y: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Domain { function: "tau", value: x });
        }
        if !y.is_finite() {
            return Err(Error::Domain { function: "tau", value: y });
        }
        Ok(tau_ordered(x.max(y), x.min(y), self.relative_switch))
    }

    /// `rho` evaluated with this switch point.
    pub fn rho(&self, x: f64, y: f64) -> Result<f64> {
        for v in [x, y] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain { function: "rho", value: v });
            }
        }
        Ok(rho_ordered(x.max(y), x.min(y), self.relative_switch))
    }
}

impl Default for StableThreshold {
    fn default() -> Self {
        Self {
            relative_switch: Self::DEFAULT_SWITCH,
        }
    }
}

/// `(e^x - e^y) / (x - y)`, or `e^x` when `x == y`.
pub fn tau(x: f64, y: f64) -> Result<f64> {
    StableThreshold::default().tau(x, y)
}

/// `x y (ln x - ln y) / (x - y)`, or `x` when `x == y`. Both arguments must be positive.
pub fn rho(x: f64, y: f64) -> Result<f64> {
    StableThreshold::default().rho(x, y)
}

/// Principal branch `W0(t)` for `t >= 0`, via Halley iteration.
pub fn lambert_w0(t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain {
            function: "lambert_w0",
            value: t,
        });
    }
    Ok(w0_unchecked(t))
}

// `hi >= lo`. Written as e^hi * (1 - e^-d) / d so that nothing overflows
// when `lo` is very negative.
pub(crate) fn tau_ordered(hi: f64, lo: f64, switch: f64) -> f64 {
    let d = hi - lo;
    let scale = hi.abs().max(lo.abs()).max(1.0);
    let ratio = if d <= switch * scale {
        // (1 - e^-d) / d = 1 - d/2 + d^2/6 - d^3/24 + O(d^4)
        1.0 - d / 2.0 * (1.0 - d / 3.0 * (1.0 - d / 4.0))
    } else {
        -(-d).exp_m1() / d
    };
    hi.exp() * ratio
}

// `hi >= lo > 0`. rho = hi * ln(1 + u) / u with u = (hi - lo) / lo.
pub(crate) fn rho_ordered(hi: f64, lo: f64, switch: f64) -> f64 {
    let d = hi - lo;
    let ratio = if d <= switch * hi {
        let u = d / lo;
        // ln(1 + u) / u = 1 - u/2 + u^2/3 - u^3/4 + O(u^4)
        1.0 - u * (0.5 - u * (1.0 / 3.0 - u * 0.25))
    } else {
        (d / lo).ln_1p() * lo / d
    };
    hi * ratio
}

#[inline]
pub(crate) fn rho_fast(x: f64, y: f64) -> f64 {
    if x >= y {
        rho_ordered(x, y, StableThreshold::DEFAULT_SWITCH)
    } else {
        rho_ordered(y, x, StableThreshold::DEFAULT_SWITCH)
    }
}

#[inline]
pub(crate) fn tau_fast(x: f64, y: f64) -> f64 {
    if x >= y {
        tau_ordered(x, y, StableThreshold::DEFAULT_SWITCH)
    } else {
        tau_ordered(y, x, StableThreshold::DEFAULT_SWITCH)
    }
}

const W0_MAX_ITER: usize = 50;

pub(crate) fn w0_unchecked(t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let mut w = if t < std::f64::consts::E {
        t.ln_1p()
    } else {
        let l = t.ln();
        l - l.ln()
    };
    for _ in 0..W0_MAX_ITER {
        let ew = w.exp();
        let f = w * ew - t;
        if f == 0.0 {
            break;
        }
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs() {
            break;
        }
    }
    w
}

//! Cubic Hermite segments.
//!
//! A segment is the cubic `P(u) = a u³ + b u² + c u + d` on `u ∈ [0, 1]`
//! fixed by its endpoint positions and endpoint derivatives. Derivatives are
//! taken with respect to `u`, so a caller working in physical time scales
//! velocities by the segment duration before building the segment.
//!
//! The printed blending form of this polynomial is sometimes given with a
//! minus sign on the end-velocity basis function `(u³ − u²)`. That variant
//! only satisfies `P'(1) = v_end` when `v_end = 0`; this module uses the
//! standard basis, which agrees with the coefficient matrix below.

use crate::error::{PtaError, Result};

/// Cubic segment between two control points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteSegment {
    pub p_start: f64,
    pub p_end: f64,
    pub v_start: f64,
    pub v_end: f64,
    /// `[a, b, c, d]`, highest power first.
    pub coeffs: [f64; 4],
}

impl HermiteSegment {
    /// Builds the segment from its boundary conditions.
    ///
    /// ```text
    /// | a |   |  2 -2  1  1 |   | p_start |
    /// | b | = | -3  3 -2 -1 | · | p_end   |
    /// | c |   |  0  0  1  0 |   | v_start |
    /// | d |   |  1  0  0  0 |   | v_end   |
    /// ```
    pub fn new(p_start: f64, p_end: f64, v_start: f64, v_end: f64) -> Result<Self> {
        for (name, value) in [
            ("p_start", p_start),
            ("p_end", p_end),
            ("v_start", v_start),
            ("v_end", v_end),
        ] {
            if !value.is_finite() {
                return Err(PtaError::NonFinite(name));
            }
        }
        let a = 2.0 * p_start - 2.0 * p_end + v_start + v_end;
        let b = -3.0 * p_start + 3.0 * p_end - 2.0 * v_start - v_end;
        Ok(Self {
            p_start,
            p_end,
            v_start,
            v_end,
            coeffs: [a, b, v_start, p_start],
        })
    }

    /// Segment spanning `duration` seconds with velocities given per second.
    pub fn over_duration(
        p_start: f64,
        p_end: f64,
        v_start: f64,
        v_end: f64,
        duration: f64,
    ) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(PtaError::NonFinite("duration"));
        }
        Self::new(p_start, p_end, v_start * duration, v_end * duration)
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        check_unit(u)?;
        Ok(self.eval_unchecked(u))
    }

    pub fn eval_deriv(&self, u: f64) -> Result<f64> {
        check_unit(u)?;
        Ok(self.eval_deriv_unchecked(u))
    }

    pub fn eval_second_deriv(&self, u: f64) -> Result<f64> {
        check_unit(u)?;
        let [a, b, _, _] = self.coeffs;
        Ok(6.0 * a * u + 2.0 * b)
    }

    /// Evaluates the blending form directly from the boundary values.
    ///
    /// Exactly at the endpoints this returns the stored positions, so
    /// `eval(0) == p_start` and `eval(1) == p_end` hold bit for bit.
    pub(crate) fn eval_unchecked(&self, u: f64) -> f64 {
        if u == 0.0 {
            return self.p_start;
        }
        if u == 1.0 {
            return self.p_end;
        }
        let u2 = u * u;
        let u3 = u2 * u;
        self.p_start * (2.0 * u3 - 3.0 * u2 + 1.0)
            + self.p_end * (-2.0 * u3 + 3.0 * u2)
            + self.v_start * (u3 - 2.0 * u2 + u)
            + self.v_end * (u3 - u2)
    }

    pub(crate) fn eval_deriv_unchecked(&self, u: f64) -> f64 {
        if u == 0.0 {
            return self.v_start;
        }
        if u == 1.0 {
            return self.v_end;
        }
        let [a, b, c, _] = self.coeffs;
        (3.0 * a * u + 2.0 * b) * u + c
    }
}

fn check_unit(u: f64) -> Result<()> {
    if (0.0..=1.0).contains(&u) {
        Ok(())
    } else {
        Err(PtaError::ParameterOutOfRange(u))
    }
}

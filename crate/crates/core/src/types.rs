//! Value types shared by every module: the fractional order, phase-space
//! points, feedback gains and complex eigenvalues.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Magnitudes at or below this are treated as an exact zero.
pub const TOL_ZERO: f64 = 1e-12;

/// Order `q` of the Caputo derivative, restricted to `0 < q <= 1`.
///
/// `q = 1` is the classical (integer-order) limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 && q <= 1.0 {
            Ok(Self(q))
        } else {
            Err(domain(format!(
                "fractional order must lie in (0, 1], got {q}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// The Matignon threshold `q * pi / 2`.
    pub fn critical_angle(self) -> f64 {
        self.0 * PI / 2.0
    }

    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }
}

impl fmt::Display for FractionalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point `(x1, x2, x3)` of the phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct State3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl State3 {
    pub const ORIGIN: State3 = State3 {
        x1: 0.0,
        x2: 0.0,
        x3: 0.0,
    };

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn norm(self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn max_abs(self) -> f64 {
        self.x1.abs().max(self.x2.abs()).max(self.x3.abs())
    }

    pub fn distance(self, other: State3) -> f64 {
        (self - other).norm()
    }
}

impl Add for State3 {
    type Output = State3;
    fn add(self, o: State3) -> State3 {
        State3::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for State3 {
    type Output = State3;
    fn sub(self, o: State3) -> State3 {
        State3::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Mul<State3> for f64 {
    type Output = State3;
    fn mul(self, x: State3) -> State3 {
        State3::new(self * x.x1, self * x.x2, self * x.x3)
    }
}

impl fmt::Display for State3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x1, self.x2, self.x3)
    }
}

/// How the feedback `u_i` is applied.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ControlMode {
    /// `u = (c1 x1, c2 x2, c2 x3)`.
    #[default]
    Literal,
    /// `u = (c1 (x1 - t1), c2 (x2 - t2), c2 (x3 - t3))`, which makes `target`
    /// a fixed point without changing the Jacobian there.
    Anchored { target: State3 },
}

/// Linear feedback gains `(c1, c2)` and the way they are applied.
/// `c1 = c2 = 0` is the uncontrolled system.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ControlParams {
    pub c1: f64,
    pub c2: f64,
    pub mode: ControlMode,
}

impl ControlParams {
    pub const NONE: ControlParams = ControlParams {
        c1: 0.0,
        c2: 0.0,
        mode: ControlMode::Literal,
    };

    pub fn literal(c1: f64, c2: f64) -> Self {
        Self {
            c1,
            c2,
            mode: ControlMode::Literal,
        }
    }

    pub fn anchored(c1: f64, c2: f64, target: State3) -> Self {
        Self {
            c1,
            c2,
            mode: ControlMode::Anchored { target },
        }
    }

    /// The point the feedback pulls towards (origin in literal mode).
    pub fn anchor(&self) -> State3 {
        match self.mode {
            ControlMode::Literal => State3::ORIGIN,
            ControlMode::Anchored { target } => target,
        }
    }
}

/// A complex number; eigenvalues of the (symmetric) Jacobians here are real
/// but the cubic solver may return conjugate pairs for general input.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

/// Argument of a complex value, or a flag for values indistinguishable from 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Arg {
    Angle(f64),
    Zero,
}

impl ComplexValue {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn arg(self) -> Arg {
        complex_arg(self)
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else if self.im < 0.0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// `atan2(im, re)` in `(-pi, pi]`, or [`Arg::Zero`] when `|z| <= TOL_ZERO`.
pub fn complex_arg(z: ComplexValue) -> Arg {
    if z.abs() <= TOL_ZERO {
        return Arg::Zero;
    }
    // atan2(-0.0, x<0) is -pi; fold onto the half-open range.
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    Arg::Angle(im.atan2(z.re))
}

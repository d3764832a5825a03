//! Vector fields of the fractional Lagrange system, with and without linear
//! feedback, plus Jacobians, the coordinate-axis equilibria and the local
//! Lipschitz constant used for existence/uniqueness.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::types::{ControlMode, ControlParams, State3};

/// Dense 3x3 real matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Matrix3(pub [[f64; 3]; 3]);

impl Matrix3 {
    pub const ZERO: Matrix3 = Matrix3([[0.0; 3]; 3]);

    pub fn mul_vec(&self, x: State3) -> State3 {
        let v = x.to_array();
        let row = |r: &[f64; 3]| r[0] * v[0] + r[1] * v[1] + r[2] * v[2];
        State3::new(row(&self.0[0]), row(&self.0[1]), row(&self.0[2]))
    }

    pub fn transpose(&self) -> Matrix3 {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in self.0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t[j][i] = *v;
            }
        }
        Matrix3(t)
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Sum of the three 2x2 principal minors.
    pub fn principal_minor_sum(&self) -> f64 {
        let m = &self.0;
        (m[0][0] * m[1][1] - m[0][1] * m[1][0])
            + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
            + (m[1][1] * m[2][2] - m[1][2] * m[2][1])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// `A` of the matrix form: single unit entry at row 3, column 2.
pub const MATRIX_A: Matrix3 = Matrix3([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);

/// `B` of the matrix form: swaps the first two coordinates.
pub const MATRIX_B: Matrix3 = Matrix3([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);

/// Which coordinate axis an equilibrium sits on. `E0` is the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    E0,
    E1,
    E2,
    E3,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::E0, Family::E1, Family::E2, Family::E3];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::E0 => "e0",
            Family::E1 => "e1",
            Family::E2 => "e2",
            Family::E3 => "e3",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "e0" => Ok(Family::E0),
            "e1" => Ok(Family::E1),
            "e2" => Ok(Family::E2),
            "e3" => Ok(Family::E3),
            other => Err(domain(format!("unknown equilibrium family '{other}'"))),
        }
    }
}

/// The equilibrium `e_i^m`; `m` is ignored for [`Family::E0`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumSpec {
    pub family: Family,
    pub m: f64,
}

impl EquilibriumSpec {
    pub fn new(family: Family, m: f64) -> Self {
        Self { family, m }
    }

    pub fn origin() -> Self {
        Self {
            family: Family::E0,
            m: 0.0,
        }
    }

    pub fn point(&self) -> State3 {
        let m = self.m;
        match self.family {
            Family::E0 => State3::ORIGIN,
            Family::E1 => State3::new(m, 0.0, 0.0),
            Family::E2 => State3::new(0.0, m, 0.0),
            Family::E3 => State3::new(0.0, 0.0, m),
        }
    }
}

impl fmt::Display for EquilibriumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::E0 => write!(f, "e0"),
            fam => write!(f, "{fam}^{}", self.m),
        }
    }
}

/// `(x2 x3, x1 x3, x1 x2)`.
pub fn rhs_uncontrolled(x: State3) -> State3 {
    State3::new(x.x2 * x.x3, x.x1 * x.x3, x.x1 * x.x2)
}

/// The uncontrolled field written as `x1 A x + x3 B x`.
pub fn rhs_matrix_form(x: State3) -> State3 {
    x.x1 * MATRIX_A.mul_vec(x) + x.x3 * MATRIX_B.mul_vec(x)
}

/// Uncontrolled field plus feedback `(c1 d1, c2 d2, c2 d3)`, where `d` is the
/// offset from the anchor (`x` itself in literal mode).
pub fn rhs_controlled(x: State3, c: &ControlParams) -> State3 {
    let f = rhs_uncontrolled(x);
    let d = match c.mode {
        ControlMode::Literal => x,
        ControlMode::Anchored { target } => x - target,
    };
    State3::new(f.x1 + c.c1 * d.x1, f.x2 + c.c2 * d.x2, f.x3 + c.c2 * d.x3)
}

/// Jacobian of the controlled field; the mode does not matter because the
/// feedback is affine with the same linear part.
pub fn jacobian(x: State3, c: &ControlParams) -> Matrix3 {
    Matrix3([[c.c1, x.x3, x.x2], [x.x3, c.c2, x.x1], [x.x2, x.x1, c.c2]])
}

/// Local Lipschitz constant `1 + sqrt(2) + 2 (|x0| + delta)` of the
/// uncontrolled field on the box of half-width `delta` around `x0`. The
/// leading `1 + sqrt(2)` is `|A|_F + |B|_F`.
pub fn lipschitz_bound(x0: State3, delta: f64) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(domain(format!(
            "delta must be a finite positive number, got {delta}"
        )));
    }
    Ok(MATRIX_A.frobenius_norm() + MATRIX_B.frobenius_norm() + 2.0 * (x0.norm() + delta))
}

/// Euclidean norm of the controlled field evaluated at the equilibrium point.
pub fn equilibrium_residual(spec: &EquilibriumSpec, c: &ControlParams) -> f64 {
    rhs_controlled(spec.point(), c).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn uncontrolled_examples() {
        assert_eq!(rhs_uncontrolled(State3::ORIGIN), State3::ORIGIN);
        assert_eq!(rhs_uncontrolled(State3::new(5.0, 0.0, 0.0)), State3::ORIGIN);
        assert_eq!(
            rhs_uncontrolled(State3::new(1.0, 2.0, 3.0)),
            State3::new(6.0, 3.0, 2.0)
        );
    }

    #[test]
    fn matrix_form_examples() {
        assert_eq!(
            rhs_matrix_form(State3::new(1.0, 2.0, 3.0)),
            State3::new(6.0, 3.0, 2.0)
        );
        assert_eq!(rhs_matrix_form(State3::ORIGIN), State3::ORIGIN);
        assert_eq!(
            rhs_matrix_form(State3::new(1.0, 1.0, 1.0)),
            State3::new(1.0, 1.0, 1.0)
        );
    }

    #[test]
    fn constant_matrices() {
        assert_eq!(MATRIX_A.frobenius_norm(), 1.0);
        assert_eq!(MATRIX_B.frobenius_norm(), SQRT_2);
        assert_eq!(
            MATRIX_A.0.iter().flatten().filter(|v| **v != 0.0).count(),
            1
        );
        assert_eq!(MATRIX_A.0[2][1], 1.0);
        assert_eq!(MATRIX_B.0[0][1], 1.0);
        assert_eq!(MATRIX_B.0[1][0], 1.0);
    }

    #[test]
    fn controlled_examples() {
        let c = ControlParams::literal(-1.75, -2.0);
        assert_eq!(rhs_controlled(State3::ORIGIN, &c), State3::ORIGIN);
        assert_eq!(
            rhs_controlled(State3::new(0.0, 0.0, 1.75), &c),
            State3::new(0.0, 0.0, -3.5)
        );
        let target = State3::new(0.0, 0.0, 1.75);
        let a = ControlParams::anchored(-1.75, -2.0, target);
        assert_eq!(rhs_controlled(target, &a), State3::ORIGIN);
    }

    #[test]
    fn jacobian_examples() {
        let j = jacobian(State3::ORIGIN, &ControlParams::literal(-0.2, -0.8));
        assert_eq!(
            j,
            Matrix3([[-0.2, 0.0, 0.0], [0.0, -0.8, 0.0], [0.0, 0.0, -0.8]])
        );
        let j = jacobian(State3::new(1.0, 0.0, 0.0), &ControlParams::NONE);
        assert_eq!(
            j,
            Matrix3([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]])
        );
        let j = jacobian(State3::new(1.0, 2.0, 3.0), &ControlParams::NONE);
        assert_eq!(
            j,
            Matrix3([[0.0, 3.0, 2.0], [3.0, 0.0, 1.0], [2.0, 1.0, 0.0]])
        );
    }

    #[test]
    fn lipschitz_examples() {
        let l = lipschitz_bound(State3::ORIGIN, 1.0).unwrap();
        assert!((l - (3.0 + SQRT_2)).abs() < 1e-15);
        assert!((l - 4.41421).abs() < 1e-5);
        let l = lipschitz_bound(State3::new(1.0, 0.0, 0.0), 0.5).unwrap();
        assert!((l - 5.41421).abs() < 1e-5);
        let l = lipschitz_bound(State3::ORIGIN, 1e-300).unwrap();
        assert_eq!(l, 1.0 + SQRT_2);
        assert!(lipschitz_bound(State3::ORIGIN, 0.0).is_err());
        assert!(lipschitz_bound(State3::ORIGIN, -1.0).is_err());
    }

    #[test]
    fn residual_examples() {
        assert_eq!(
            equilibrium_residual(&EquilibriumSpec::new(Family::E2, 7.0), &ControlParams::NONE),
            0.0
        );
        let r = equilibrium_residual(
            &EquilibriumSpec::new(Family::E3, 1.75),
            &ControlParams::literal(-1.75, -2.0),
        );
        assert_eq!(r, 3.5);
        let r = equilibrium_residual(
            &EquilibriumSpec::origin(),
            &ControlParams::literal(3.0, -9.0),
        );
        assert_eq!(r, 0.0);
    }

    #[test]
    fn family_parse() {
        assert_eq!("E3".parse::<Family>().unwrap(), Family::E3);
        assert!("e4".parse::<Family>().is_err());
    }
}

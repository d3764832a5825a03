//! Spectra of the Jacobians at equilibria and the Matignon stability test.
//!
//! Eigenvalues come from two independent routes: closed forms per
//! equilibrium family, and a general real-cubic solver applied to the
//! characteristic polynomial. The closed forms are authoritative; the
//! solver is the cross-check.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::dynamics::{jacobian, EquilibriumSpec, Family, Matrix3};
use crate::error::{domain, Error, Result};
use crate::types::{Arg, ComplexValue, ControlParams, FractionalOrder};

/// `a3 l^3 + a2 l^2 + a1 l + a0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicPoly {
    pub a3: f64,
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

impl CubicPoly {
    pub fn new(a3: f64, a2: f64, a1: f64, a0: f64) -> Self {
        Self { a3, a2, a1, a0 }
    }

    pub fn eval(&self, x: f64) -> f64 {
        ((self.a3 * x + self.a2) * x + self.a1) * x + self.a0
    }

    fn eval_c(&self, z: C) -> C {
        ((C::re(self.a3) * z + C::re(self.a2)) * z + C::re(self.a1)) * z + C::re(self.a0)
    }

    fn deriv_c(&self, z: C) -> C {
        (C::re(3.0 * self.a3) * z + C::re(2.0 * self.a2)) * z + C::re(self.a1)
    }
}

/// Coefficients of `det(J - l I)`; the leading coefficient is always `-1`.
pub fn char_poly(j: &Matrix3) -> CubicPoly {
    CubicPoly::new(-1.0, j.trace(), -j.principal_minor_sum(), j.det())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenSource {
    ClosedForm,
    CubicSolver,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenTriple {
    pub values: [ComplexValue; 3],
    pub source: EigenSource,
}

impl EigenTriple {
    fn real(values: [f64; 3], source: EigenSource) -> Self {
        Self {
            values: values.map(ComplexValue::real),
            source,
        }
    }

    pub fn sum(&self) -> ComplexValue {
        let mut s = C::ZERO;
        for v in self.values {
            s = s + C::from(v);
        }
        s.into()
    }

    pub fn product(&self) -> ComplexValue {
        let mut p = C::re(1.0);
        for v in self.values {
            p = p * C::from(v);
        }
        p.into()
    }

    /// Values sorted by real part, then imaginary part.
    pub fn sorted(&self) -> [ComplexValue; 3] {
        let mut v = self.values;
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    /// Reorders `self` so each position holds the value closest to the
    /// same position of `reference` (greedy, without reuse).
    pub fn aligned_to(&self, reference: &EigenTriple) -> EigenTriple {
        let mut used = [false; 3];
        let values = reference.values.map(|r| {
            let (k, v) = self
                .values
                .iter()
                .enumerate()
                .filter(|(k, _)| !used[*k])
                .min_by(|a, b| {
                    let da = (a.1.re - r.re).hypot(a.1.im - r.im);
                    let db = (b.1.re - r.re).hypot(b.1.im - r.im);
                    da.total_cmp(&db)
                })
                .expect("three values");
            used[k] = true;
            *v
        });
        EigenTriple {
            values,
            source: self.source,
        }
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }
}

impl fmt::Display for EigenTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.values;
        write!(f, "{{{a}, {b}, {c}}}")
    }
}

// Multiple of the discriminant's rounding scale below which roots are treated as repeated.
const REPEATED_ROOT_TOL: f64 = 1e-12;

/// All three roots of a cubic, with multiplicity.
///
/// Normalises and depresses the cubic, then branches on the discriminant:
/// repeated roots in closed form, three real roots by the trigonometric
/// formula, one real root plus a conjugate pair by Cardano. Each root gets a
/// single Newton step, kept only if it lowers the residual.
pub fn solve_cubic(p: &CubicPoly) -> Result<EigenTriple> {
    if p.a3 == 0.0 {
        return Err(Error::Degree);
    }
    if ![p.a2, p.a1, p.a0].iter().all(|v| v.is_finite()) || !p.a3.is_finite() {
        return Err(domain("cubic coefficients must be finite"));
    }
    let b = p.a2 / p.a3;
    let c = p.a1 / p.a3;
    let d = p.a0 / p.a3;
    let shift = b / 3.0;

    let scale = b.abs().max(c.abs().sqrt()).max(d.abs().cbrt());
    if scale == 0.0 {
        return Ok(EigenTriple::real([0.0; 3], EigenSource::CubicSolver));
    }

    // t^3 + pp t + qq = 0 with l = t - b/3
    let pp = c - b * b / 3.0;
    let qq = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    // 4p^3 + 27q^2 is -(product of squared root gaps). Its rounding error is
    // about eps (p^2 s^2 + |q| s^3), which sets the repeated-root threshold.
    let disc = 4.0 * pp * pp * pp + 27.0 * qq * qq;

    let mut roots: [C; 3] = if pp.abs() <= REPEATED_ROOT_TOL * scale * scale
        && qq.abs() <= REPEATED_ROOT_TOL * scale.powi(3)
    {
        [C::ZERO; 3]
    } else if disc.abs() <= REPEATED_ROOT_TOL * (pp * pp * scale * scale + qq.abs() * scale.powi(3))
    {
        let single = 3.0 * qq / pp;
        let double = -1.5 * qq / pp;
        [C::re(single), C::re(double), C::re(double)]
    } else if disc < 0.0 {
        let r = 2.0 * (-pp / 3.0).sqrt();
        let cos_arg = (3.0 * qq / (pp * r)).clamp(-1.0, 1.0);
        let theta = cos_arg.acos() / 3.0;
        [0.0, 1.0, 2.0].map(|k| C::re(r * (theta - 2.0 * PI * k / 3.0).cos()))
    } else {
        let sq = (qq * qq / 4.0 + pp * pp * pp / 27.0).sqrt();
        let sign = if qq >= 0.0 { 1.0 } else { -1.0 };
        let u = (-qq / 2.0 - sign * sq).cbrt();
        let v = if u == 0.0 { 0.0 } else { -pp / (3.0 * u) };
        let re = -(u + v) / 2.0;
        let im = 3f64.sqrt() / 2.0 * (u - v);
        [C::re(u + v), C::new(re, im), C::new(re, -im)]
    };

    for r in roots.iter_mut() {
        *r = polish(p, C::new(r.re - shift, r.im));
    }
    Ok(EigenTriple {
        values: roots.map(Into::into),
        source: EigenSource::CubicSolver,
    })
}

fn polish(p: &CubicPoly, z: C) -> C {
    let f = p.eval_c(z);
    let df = p.deriv_c(z);
    if df.abs() == 0.0 {
        return z;
    }
    let next = z - f / df;
    if next.re.is_finite() && next.im.is_finite() && p.eval_c(next).abs() < f.abs() {
        // keep real roots on the real axis
        if z.im == 0.0 {
            C::re(next.re)
        } else {
            next
        }
    } else {
        z
    }
}

/// Eigenvalues of `J(e, c1, c2)` from the per-family closed forms:
/// `E0: {c1, c2, c2}`, `E1: {c1, c2 + m, c2 - m}`,
/// `E2, E3: {c2, ((c1 + c2) +- sqrt(D)) / 2}` with `D = (c1 - c2)^2 + 4 m^2`.
pub fn eigen_closed_form(spec: &EquilibriumSpec, c1: f64, c2: f64) -> EigenTriple {
    let m = spec.m;
    let values = match spec.family {
        Family::E0 => [c1, c2, c2],
        Family::E1 => [c1, c2 + m, c2 - m],
        Family::E2 | Family::E3 => {
            let delta = (c1 - c2) * (c1 - c2) + 4.0 * m * m;
            let sum = c1 + c2;
            let root = delta.sqrt();
            // Larger-magnitude root first, the other from the product
            // c1 c2 - m^2 to avoid cancellation.
            let big = if sum >= 0.0 {
                (sum + root) / 2.0
            } else {
                (sum - root) / 2.0
            };
            let small = if big == 0.0 {
                0.0
            } else {
                (c1 * c2 - m * m) / big
            };
            let (plus, minus) = if sum >= 0.0 {
                (big, small)
            } else {
                (small, big)
            };
            [c2, plus, minus]
        }
    };
    EigenTriple::real(values, EigenSource::ClosedForm)
}

/// Eigenvalues of the Jacobian at the equilibrium point, computed without
/// the closed forms: [`solve_cubic`] on the characteristic polynomial, then
/// [`refine_symmetric`] against the matrix.
pub fn eigen_numeric(spec: &EquilibriumSpec, c1: f64, c2: f64) -> EigenTriple {
    eigen_of_symmetric(&jacobian(spec.point(), &ControlParams::literal(c1, c2)))
}

/// Eigenvalues of a symmetric 3x3 matrix via the cubic solver plus
/// refinement.
pub fn eigen_of_symmetric(j: &Matrix3) -> EigenTriple {
    let seeds =
        solve_cubic(&char_poly(j)).expect("characteristic polynomial has leading coefficient -1");
    let refined = refine_symmetric(j, seeds.values.map(|v| v.re));
    EigenTriple::real(refined, EigenSource::CubicSolver)
}

/// Simultaneous Newton (Aberth) refinement of eigenvalue estimates of a
/// symmetric matrix, evaluating `det(J - l I)` and its derivative from the
/// shifted matrix rather than from polynomial coefficients.
///
/// Roots that are close together are badly conditioned in coefficient form
/// (a gap `d` costs about `eps s^3 / d` in accuracy), but not as
/// eigenvalues of a symmetric matrix; evaluating on the shifted matrix keeps
/// that conditioning.
pub fn refine_symmetric(j: &Matrix3, seeds: [f64; 3]) -> [f64; 3] {
    let scale = j.0.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut z = seeds;
    // Aberth needs distinct starting points.
    for i in 0..3 {
        for k in 0..i {
            if (z[i] - z[k]).abs() <= 1e-9 * scale {
                let nudge = 1e-7 * scale;
                z[k] -= nudge;
                z[i] += nudge;
            }
        }
    }
    for _ in 0..MAX_REFINE_ITERS {
        let mut done = true;
        let mut next = z;
        for i in 0..3 {
            let shifted = shift(j, z[i]);
            let f = shifted.det();
            let df = -shifted.principal_minor_sum();
            if f == 0.0 {
                continue;
            }
            if df == 0.0 || !f.is_finite() || !df.is_finite() {
                continue;
            }
            let newton = f / df;
            let repulsion: f64 = (0..3)
                .filter(|k| *k != i)
                .map(|k| 1.0 / (z[i] - z[k]))
                .sum();
            let w = newton / (1.0 - newton * repulsion);
            if !w.is_finite() {
                continue;
            }
            next[i] = z[i] - w;
            if w.abs() > 4.0 * f64::EPSILON * z[i].abs().max(scale) {
                done = false;
            }
        }
        if next.iter().all(|v| v.is_finite()) {
            z = next;
        }
        if done {
            break;
        }
    }
    z
}

const MAX_REFINE_ITERS: usize = 100;

fn shift(j: &Matrix3, l: f64) -> Matrix3 {
    let mut m = *j;
    for (i, row) in m.0.iter_mut().enumerate() {
        row[i] -= l;
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityStatus {
    AsymptoticallyStable,
    Unstable,
    /// A zero eigenvalue is present; the equilibrium is not asymptotically stable.
    NotAsymptoticallyStable,
}

impl StabilityStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            StabilityStatus::AsymptoticallyStable => "asymptotically_stable",
            StabilityStatus::Unstable => "unstable",
            StabilityStatus::NotAsymptoticallyStable => "not_asymptotically_stable",
        }
    }

    pub fn is_stable(self) -> bool {
        self == StabilityStatus::AsymptoticallyStable
    }
}

impl fmt::Display for StabilityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    /// `|arg l_i| - q pi / 2` per eigenvalue; `None` for a zero eigenvalue.
    pub margins: [Option<f64>; 3],
}

/// Matignon's test: asymptotically stable iff every eigenvalue satisfies
/// `|arg l| > q pi / 2`. Zero eigenvalues have no argument and make the
/// verdict [`StabilityStatus::NotAsymptoticallyStable`].
pub fn matignon_test(eigs: &EigenTriple, q: FractionalOrder) -> StabilityVerdict {
    let critical = q.critical_angle();
    let margins = eigs.values.map(|v| match v.arg() {
        Arg::Angle(a) => Some(a.abs() - critical),
        Arg::Zero => None,
    });
    let status = if margins.iter().any(Option::is_none) {
        StabilityStatus::NotAsymptoticallyStable
    } else if margins.iter().all(|m| m.is_some_and(|m| m > 0.0)) {
        StabilityStatus::AsymptoticallyStable
    } else {
        StabilityStatus::Unstable
    };
    StabilityVerdict { status, margins }
}

/// Open interval of `m` values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// The open set of `m` for which `e_i^m` is asymptotically stable under
/// gains `(c1, c2)`, or `None` when it is empty. Non-empty only when both
/// gains are negative: `(c2, -c2)` for `E1` and `(-sqrt(c1 c2), sqrt(c1 c2))`
/// for `E2`/`E3`. `E0` has no `m` parameter and is rejected.
pub fn stability_interval_m(family: Family, c1: f64, c2: f64) -> Result<Option<Interval>> {
    if !(c1 < 0.0 && c2 < 0.0) {
        return match family {
            Family::E0 => Err(domain("e0 has no m parameter")),
            _ => Ok(None),
        };
    }
    match family {
        Family::E0 => Err(domain("e0 has no m parameter")),
        Family::E1 => Ok(Some(Interval { lo: c2, hi: -c2 })),
        Family::E2 | Family::E3 => {
            let r = (c1 * c2).sqrt();
            Ok(Some(Interval { lo: -r, hi: r }))
        }
    }
}

pub fn classify(spec: &EquilibriumSpec, c1: f64, c2: f64, q: FractionalOrder) -> StabilityVerdict {
    matignon_test(&eigen_closed_form(spec, c1, c2), q)
}

// Minimal complex arithmetic for the solver.
#[derive(Debug, Clone, Copy, PartialEq)]
struct C {
    re: f64,
    im: f64,
}

impl C {
    const ZERO: C = C { re: 0.0, im: 0.0 };

    fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    fn re(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

impl std::ops::Add for C {
    type Output = C;
    fn add(self, o: C) -> C {
        C::new(self.re + o.re, self.im + o.im)
    }
}

impl std::ops::Sub for C {
    type Output = C;
    fn sub(self, o: C) -> C {
        C::new(self.re - o.re, self.im - o.im)
    }
}

impl std::ops::Mul for C {
    type Output = C;
    fn mul(self, o: C) -> C {
        C::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl std::ops::Div for C {
    type Output = C;
    fn div(self, o: C) -> C {
        let den = o.re * o.re + o.im * o.im;
        C::new(
            (self.re * o.re + self.im * o.im) / den,
            (self.im * o.re - self.re * o.im) / den,
        )
    }
}

impl From<ComplexValue> for C {
    fn from(v: ComplexValue) -> C {
        C::new(v.re, v.im)
    }
}

impl From<C> for ComplexValue {
    fn from(c: C) -> ComplexValue {
        ComplexValue::new(c.re, c.im)
    }
}

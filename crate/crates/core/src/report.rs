//! Structured results behind the `stability`, `sweep`, `table` and
//! `existence` commands, with JSON, CSV and plain-text renderings.

use std::f64::consts::SQRT_2;
use std::fmt::Write as _;

use serde::Serialize;

use crate::dynamics::{
    equilibrium_residual, lipschitz_bound, EquilibriumSpec, Family, MATRIX_A, MATRIX_B,
};
use crate::error::{domain, Result};
use crate::spectral::{
    classify, eigen_closed_form, eigen_numeric, stability_interval_m, Interval, StabilityStatus,
    StabilityVerdict,
};
use crate::types::{ComplexValue, ControlMode, ControlParams, FractionalOrder, State3};

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub equilibrium: EquilibriumInfo,
    pub q: f64,
    pub c1: f64,
    pub c2: f64,
    pub mode: &'static str,
    /// `|F(x_e)|` under the chosen control mode.
    pub residual: f64,
    pub caveat: Option<String>,
    pub eigenvalues_closed_form: [ComplexValue; 3],
    pub eigenvalues_cubic: [ComplexValue; 3],
    pub margins: [Option<f64>; 3],
    pub verdict: StabilityStatus,
    /// `[lo, hi]` open interval, `null` when empty or for `e0`.
    pub stability_interval_m: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumInfo {
    pub family: Family,
    pub m: f64,
    pub point: State3,
}

pub fn stability_report(
    spec: EquilibriumSpec,
    c1: f64,
    c2: f64,
    q: FractionalOrder,
    anchored: bool,
) -> StabilityReport {
    let controls = if anchored {
        ControlParams::anchored(c1, c2, spec.point())
    } else {
        ControlParams::literal(c1, c2)
    };
    let residual = equilibrium_residual(&spec, &controls);
    let caveat = (residual != 0.0).then(|| {
        format!(
            "{} is not a fixed point of the literal controlled system (residual {residual}); \
             the verdict describes the linearisation at that point, realised exactly by --mode anchored",
            spec.point()
        )
    });
    let closed = eigen_closed_form(&spec, c1, c2);
    let cubic = eigen_numeric(&spec, c1, c2);
    let verdict = classify(&spec, c1, c2, q);
    let interval = match spec.family {
        Family::E0 => None,
        f => stability_interval_m(f, c1, c2).ok().flatten(),
    };
    StabilityReport {
        equilibrium: EquilibriumInfo {
            family: spec.family,
            m: spec.m,
            point: spec.point(),
        },
        q: q.get(),
        c1,
        c2,
        mode: match controls.mode {
            ControlMode::Literal => "literal",
            ControlMode::Anchored { .. } => "anchored",
        },
        residual,
        caveat,
        eigenvalues_closed_form: closed.values,
        eigenvalues_cubic: cubic.aligned_to(&closed).values,
        margins: verdict.margins,
        verdict: verdict.status,
        stability_interval_m: interval.map(|i| [i.lo, i.hi]),
    }
}

impl StabilityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let e = &self.equilibrium;
        let _ = writeln!(
            s,
            "equilibrium        {} m={} point={}",
            e.family, e.m, e.point
        );
        let _ = writeln!(
            s,
            "controls           c1={} c2={} mode={}",
            self.c1, self.c2, self.mode
        );
        let _ = writeln!(s, "order              q={}", self.q);
        let _ = writeln!(s, "residual |F(x_e)|  {}", self.residual);
        if let Some(c) = &self.caveat {
            let _ = writeln!(s, "note               {c}");
        }
        let _ = writeln!(
            s,
            "{:<4} {:>24} {:>24} {:>24}",
            "i", "closed form", "cubic solver", "margin"
        );
        for i in 0..3 {
            let margin =
                self.margins[i].map_or("zero eigenvalue".to_string(), |m| format!("{m:.12}"));
            let _ = writeln!(
                s,
                "{:<4} {:>24} {:>24} {:>24}",
                i + 1,
                self.eigenvalues_closed_form[i].to_string(),
                self.eigenvalues_cubic[i].to_string(),
                margin
            );
        }
        let _ = writeln!(s, "verdict            {}", self.verdict);
        let interval = match (self.equilibrium.family, self.stability_interval_m) {
            (Family::E0, _) => "n/a (e0 has no m)".to_string(),
            (_, Some([lo, hi])) => format!("({lo}, {hi})"),
            (_, None) => "empty".to_string(),
        };
        let _ = writeln!(s, "stable m interval  {interval}");
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub m: f64,
    pub eigenvalues: [f64; 3],
    pub verdict: StabilityStatus,
}

/// Closed-form spectrum and verdict at `points` evenly spaced `m` values in
/// `[m_min, m_max]`.
pub fn sweep(
    family: Family,
    c1: f64,
    c2: f64,
    q: FractionalOrder,
    m_min: f64,
    m_max: f64,
    points: usize,
) -> Result<Vec<SweepRow>> {
    if points < 2 {
        return Err(domain("sweep needs at least 2 grid points"));
    }
    if !(m_min.is_finite() && m_max.is_finite() && m_min < m_max) {
        return Err(domain(format!("invalid m range [{m_min}, {m_max}]")));
    }
    let step = (m_max - m_min) / (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            let m = if k == points - 1 {
                m_max
            } else {
                m_min + k as f64 * step
            };
            let spec = EquilibriumSpec::new(family, m);
            let eig = eigen_closed_form(&spec, c1, c2);
            let verdict = crate::spectral::matignon_test(&eig, q);
            SweepRow {
                m,
                eigenvalues: eig.values.map(|v| v.re),
                verdict: verdict.status,
            }
        })
        .collect())
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("m,lambda1,lambda2,lambda3,verdict\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.m, r.eigenvalues[0], r.eigenvalues[1], r.eigenvalues[2], r.verdict
        );
    }
    s
}

/// Grid values of `m` where the verdict changes between consecutive rows,
/// as `(m_before, m_after)` pairs.
pub fn sweep_transitions(rows: &[SweepRow]) -> Vec<(f64, f64)> {
    rows.windows(2)
        .filter(|w| w[0].verdict.is_stable() != w[1].verdict.is_stable())
        .map(|w| (w[0].m, w[1].m))
        .collect()
}

/// One row of the published stability table for the controlled system, as
/// printed there.
#[derive(Debug, Clone, Copy)]
pub struct PublishedRow {
    pub c1: f64,
    pub c2: f64,
    pub spec: EquilibriumSpec,
    pub eigenvalues: [f64; 3],
    pub stable: bool,
}

pub const PUBLISHED_TABLE: [PublishedRow; 4] = [
    PublishedRow {
        c1: -0.2,
        c2: -0.8,
        spec: EquilibriumSpec {
            family: Family::E0,
            m: 0.0,
        },
        eigenvalues: [-0.2, -0.8, -0.8],
        stable: true,
    },
    PublishedRow {
        c1: -2.0,
        c2: -1.85,
        spec: EquilibriumSpec {
            family: Family::E1,
            m: 1.0,
        },
        eigenvalues: [-2.0, -0.85, -2.85],
        stable: true,
    },
    PublishedRow {
        c1: -7.2,
        c2: -0.2,
        spec: EquilibriumSpec {
            family: Family::E2,
            m: -2.0,
        },
        eigenvalues: [-0.2, 0.4182, -7.8182],
        stable: false,
    },
    PublishedRow {
        c1: -1.75,
        c2: -2.0,
        spec: EquilibriumSpec {
            family: Family::E3,
            m: 1.75,
        },
        eigenvalues: [-2.0, -0.9911, -2.7588],
        stable: true,
    },
];

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub row: usize,
    pub c1: f64,
    pub c2: f64,
    pub family: Family,
    pub m: f64,
    pub computed: [f64; 3],
    pub cubic: [f64; 3],
    pub published: [f64; 3],
    pub delta: [f64; 3],
    pub verdict: StabilityStatus,
    pub published_stable: bool,
    pub verdict_matches: bool,
    pub stability_interval_m: Option<[f64; 2]>,
}

pub fn reproduce_table(q: FractionalOrder) -> Vec<TableRow> {
    PUBLISHED_TABLE
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let closed = eigen_closed_form(&p.spec, p.c1, p.c2);
            let cubic = eigen_numeric(&p.spec, p.c1, p.c2);
            let computed = closed.values.map(|v| v.re);
            let verdict: StabilityVerdict = classify(&p.spec, p.c1, p.c2, q);
            let interval: Option<Interval> = match p.spec.family {
                Family::E0 => None,
                f => stability_interval_m(f, p.c1, p.c2).ok().flatten(),
            };
            TableRow {
                row: i + 1,
                c1: p.c1,
                c2: p.c2,
                family: p.spec.family,
                m: p.spec.m,
                computed,
                cubic: cubic.aligned_to(&closed).values.map(|v| v.re),
                published: p.eigenvalues,
                delta: [0, 1, 2].map(|k| computed[k] - p.eigenvalues[k]),
                verdict: verdict.status,
                published_stable: p.stable,
                verdict_matches: verdict.status.is_stable() == p.stable,
                stability_interval_m: interval.map(|i| [i.lo, i.hi]),
            }
        })
        .collect()
}

pub fn table_json(rows: &[TableRow]) -> String {
    serde_json::to_string_pretty(rows).expect("table serialises") + "\n"
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from(
        "row,c1,c2,family,m,lambda1,lambda2,lambda3,published1,published2,published3,delta1,delta2,delta3,verdict,published,matches\n",
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.row,
            r.c1,
            r.c2,
            r.family,
            r.m,
            r.computed[0],
            r.computed[1],
            r.computed[2],
            r.published[0],
            r.published[1],
            r.published[2],
            r.delta[0],
            r.delta[1],
            r.delta[2],
            r.verdict,
            if r.published_stable {
                "stable"
            } else {
                "unstable"
            },
            r.verdict_matches
        );
    }
    s
}

pub fn table_text(rows: &[TableRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<3} {:<15} {:<10} {:<30} {:<27} {:<30} {:<22} {:<9} match",
        "row",
        "c1, c2",
        "e_i^m",
        "computed eigenvalues",
        "published eigenvalues",
        "delta",
        "verdict",
        "published",
    );
    for r in rows {
        let fam = match r.family {
            Family::E0 => "e0".to_string(),
            f => format!("{f} m={}", r.m),
        };
        let _ = writeln!(
            s,
            "{:<3} {:<15} {:<10} {:<30} {:<27} {:<30} {:<22} {:<9} {}",
            r.row,
            format!("{}, {}", r.c1, r.c2),
            fam,
            format!(
                "{:.6} {:.6} {:.6}",
                r.computed[0], r.computed[1], r.computed[2]
            ),
            format!("{} {} {}", r.published[0], r.published[1], r.published[2]),
            format!("{:+.6} {:+.6} {:+.6}", r.delta[0], r.delta[1], r.delta[2]),
            r.verdict.as_str(),
            if r.published_stable {
                "stable"
            } else {
                "unstable"
            },
            if r.verdict_matches { "yes" } else { "NO" }
        );
    }
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct ExistenceReport {
    pub x0: State3,
    pub delta: f64,
    /// `[lo, hi]` per coordinate.
    pub box_d: [[f64; 2]; 3],
    pub norm_a: f64,
    pub norm_b: f64,
    pub lipschitz: f64,
}

pub fn existence_report(x0: State3, delta: f64) -> Result<ExistenceReport> {
    let lipschitz = lipschitz_bound(x0, delta)?;
    Ok(ExistenceReport {
        x0,
        delta,
        box_d: x0.to_array().map(|v| [v - delta, v + delta]),
        norm_a: MATRIX_A.frobenius_norm(),
        norm_b: MATRIX_B.frobenius_norm(),
        lipschitz,
    })
}

impl ExistenceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "x0        {}", self.x0);
        let _ = writeln!(s, "delta     {}", self.delta);
        for (i, [lo, hi]) in self.box_d.iter().enumerate() {
            let _ = writeln!(s, "D[x{}]     [{lo}, {hi}]", i + 1);
        }
        let _ = writeln!(s, "|A|       {}", self.norm_a);
        let _ = writeln!(s, "|B|       {} (sqrt 2 = {SQRT_2})", self.norm_b);
        let _ = writeln!(
            s,
            "L         {}  (= 1 + sqrt 2 + 2 (|x0| + delta))",
            self.lipschitz
        );
        let _ = writeln!(s, "the right-hand side is Lipschitz on D with constant L; the initial value problem has a unique solution");
        s
    }
}

//! Serialisation of trajectories and run manifests: fixed-precision CSV,
//! a minimal SVG plot and the `key=value` manifest format.

use std::fmt::Write as _;

use crate::integrator::Trajectory;

pub const TRAJECTORY_HEADER: &str = "j,t,x1,x2,x3";

/// Plain decimal rendering with exactly 17 significant digits.
pub fn fmt17(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0.0000000000000000".to_string();
    }
    let sci = format!("{:.16e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let mut out = String::from(sign);
    if exp < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(&digits);
    } else {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            out.push_str(&digits);
            out.extend(std::iter::repeat_n('0', int_len - digits.len()));
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    }
    out
}

/// `j,t,x1,x2,x3` CSV, LF line endings, one trailing newline.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut s = String::with_capacity(96 * (traj.len() + 1));
    s.push_str(TRAJECTORY_HEADER);
    s.push('\n');
    for sample in &traj.samples {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            sample.j,
            fmt17(sample.t),
            fmt17(sample.x.x1),
            fmt17(sample.x.x2),
            fmt17(sample.x.x3)
        );
    }
    s
}

/// Reproducibility record written next to every output file. Parameters use
/// the same keys as the command-line flags, so the manifest doubles as a
/// `--config` file for re-running the command.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub params: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            params: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("command={}\nversion={}\n", self.command, self.version);
        for (k, v) in &self.params {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    /// Path of the sidecar manifest for an output file.
    pub fn sidecar_path(output: &str) -> String {
        format!("{output}.manifest")
    }
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value, got '{line}'", n + 1))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

const PANEL_W: f64 = 640.0;
const PANEL_H: f64 = 200.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_V: f64 = 25.0;
const TICKS: usize = 4;

/// One panel per component plotting `(j, x_i(j))`, stacked vertically.
/// The manifest, if given, is embedded as an XML comment.
pub fn trajectory_svg(traj: &Trajectory, manifest: Option<&RunManifest>) -> String {
    let n = traj.len().max(2) - 1;
    let height = 3.0 * PANEL_H;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PANEL_W}" height="{height}" viewBox="0 0 {PANEL_W} {height}">"#
    );
    if let Some(m) = manifest {
        let _ = writeln!(s, "<!--\n{}-->", m.to_text().replace("--", "- -"));
    }
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let colors = ["#1f77b4", "#d62728", "#2ca02c"];
    for (comp, color) in colors.iter().enumerate() {
        let values: Vec<f64> = traj.samples.iter().map(|p| p.x.to_array()[comp]).collect();
        let (mut lo, mut hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
                (a.min(*v), b.max(*v))
            });
        if !(hi - lo > 1e-12 * hi.abs().max(lo.abs()).max(1e-300)) {
            lo -= 0.5;
            hi += 0.5;
        }
        let top = comp as f64 * PANEL_H + MARGIN_V;
        let plot_h = PANEL_H - 2.0 * MARGIN_V;
        let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
        let sx = |j: f64| MARGIN_L + plot_w * j / n as f64;
        let sy = |v: f64| top + plot_h * (hi - v) / (hi - lo);

        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN_L}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black" stroke-width="1"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" font-family="sans-serif">x{}(n)</text>"#,
            MARGIN_L + 4.0,
            top - 6.0,
            comp + 1
        );
        for k in 0..=TICKS {
            let frac = k as f64 / TICKS as f64;
            let v = lo + (hi - lo) * frac;
            let y = sy(v);
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{y:.2}" x2="{MARGIN_L}" y2="{y:.2}" stroke="black"/><text x="{}" y="{:.2}" font-size="10" font-family="sans-serif" text-anchor="end">{}</text>"#,
                MARGIN_L - 4.0,
                MARGIN_L - 6.0,
                y + 3.0,
                tick_label(v)
            );
            let j = n as f64 * frac;
            let x = sx(j);
            let bottom = top + plot_h;
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" font-size="10" font-family="sans-serif" text-anchor="middle">{}</text>"#,
                bottom + 4.0,
                bottom + 15.0,
                j.round() as usize
            );
        }
        let mut points = String::new();
        for (j, v) in values.iter().enumerate() {
            let _ = write!(points, "{:.2},{:.2} ", sx(j as f64), sy(*v));
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.2" points="{}"/>"#,
            color,
            points.trim_end()
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.2e}")
    } else {
        format!("{v:.4}")
    }
}

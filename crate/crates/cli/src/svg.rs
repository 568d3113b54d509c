//! Self-contained static SVG charts (800x600): distribution bars, sweep
//! heatmaps and curves, and tomography error-bar plots. Text output is
//! deterministic so charts can be diffed in tests.

use std::fmt::Write;

use dtqw_core::observables::PositionDistribution;
use dtqw_core::sweep::{SecondAxisKind, SweepResult};

use crate::formats::{fmt_sig, TomographyRow};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

const H_COLOR: &str = "#d62728";
const V_COLOR: &str = "#1f77b4";
const SERIES: [&str; 6] = [
    "#d62728", "#1f77b4", "#722f37", "#2ca02c", "#9467bd", "#8c564b",
];

struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn sx(&self, x: f64) -> f64 {
        self.left + (x - self.x0) / (self.x1 - self.x0) * self.width
    }

    fn sy(&self, y: f64) -> f64 {
        self.top + self.height - (y - self.y0) / (self.y1 - self.y0) * self.height
    }

    fn axes(&self, out: &mut String, x_label: &str, y_label: &str) {
        let _ = write!(
            out,
            "<rect x='{:.2}' y='{:.2}' width='{:.2}' height='{:.2}' fill='none' stroke='#333' stroke-width='1'/>",
            self.left, self.top, self.width, self.height
        );
        for tick in ticks(self.x0, self.x1) {
            let x = self.sx(tick);
            let _ = write!(
                out,
                "<line x1='{x:.2}' y1='{0:.2}' x2='{x:.2}' y2='{1:.2}' stroke='#333'/>",
                self.top + self.height,
                self.top + self.height + 5.0
            );
            let _ = write!(
                out,
                "<text x='{x:.2}' y='{:.2}' font-size='12' text-anchor='middle'>{}</text>",
                self.top + self.height + 18.0,
                fmt_sig(tick, 6)
            );
        }
        for tick in ticks(self.y0, self.y1) {
            let y = self.sy(tick);
            let _ = write!(
                out,
                "<line x1='{0:.2}' y1='{y:.2}' x2='{1:.2}' y2='{y:.2}' stroke='#333'/>",
                self.left - 5.0,
                self.left
            );
            let _ = write!(
                out,
                "<text x='{:.2}' y='{:.2}' font-size='12' text-anchor='end'>{}</text>",
                self.left - 8.0,
                y + 4.0,
                fmt_sig(tick, 6)
            );
        }
        let _ = write!(
            out,
            "<text x='{:.2}' y='{:.2}' font-size='13' text-anchor='middle'>{x_label}</text>",
            self.left + self.width / 2.0,
            self.top + self.height + 38.0
        );
        let _ = write!(
            out,
            "<text x='{:.2}' y='{:.2}' font-size='13' text-anchor='middle' transform='rotate(-90 {0:.2} {1:.2})'>{y_label}</text>",
            self.left - 45.0,
            self.top + self.height / 2.0
        );
    }
}

/// Tick positions on a 1-2-5 ladder, at most seven per axis.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) || !span.is_finite() {
        return vec![lo];
    }
    let magnitude = 10f64.powf((span / 5.0).log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|s| span / s <= 6.5)
        .unwrap_or(10.0 * magnitude);
    let mut t = (lo / step).ceil() * step;
    if t == -0.0 {
        t = 0.0;
    }
    let mut out = Vec::new();
    while t <= hi + 1e-9 * span {
        out.push(t);
        t += step;
    }
    out
}

fn document(body: &str) -> String {
    format!(
        "<svg xmlns='http://www.w3.org/2000/svg' viewBox='0 0 {WIDTH} {HEIGHT}' \
         font-family='Helvetica, Arial, sans-serif'>\
         <rect width='{WIDTH}' height='{HEIGHT}' fill='white'/>{body}</svg>\n"
    )
}

fn title(out: &mut String, text: &str) {
    let _ = write!(
        out,
        "<text x='{:.2}' y='28' font-size='16' text-anchor='middle'>{text}</text>",
        WIDTH / 2.0
    );
}

fn legend_entry(out: &mut String, x: f64, y: f64, color: &str, label: &str) {
    let _ = write!(
        out,
        "<rect x='{x:.2}' y='{:.2}' width='12' height='12' fill='{color}'/>\
         <text x='{:.2}' y='{:.2}' font-size='12'>{label}</text>",
        y - 10.0,
        x + 16.0,
        y
    );
}

/// Grouped per-site bars, H and V side by side.
pub fn distribution_chart(dist: &PositionDistribution, subtitle: &str) -> String {
    let t = dist.t as f64;
    let y_max = dist
        .p_total
        .iter()
        .cloned()
        .fold(0.0f64, f64::max)
        .max(1e-9);
    let frame = Frame {
        left: 80.0,
        top: 60.0,
        width: 670.0,
        height: 470.0,
        x0: -t - 1.0,
        x1: t + 1.0,
        y0: 0.0,
        y1: y_max * 1.15,
    };
    let mut body = String::new();
    title(&mut body, subtitle);
    let slot = frame.width / (2.0 * t + 3.0);
    let bar = (slot * 0.42).max(0.8);
    for (x, p_h, p_v, _) in dist.iter() {
        if p_h <= 0.0 && p_v <= 0.0 {
            continue;
        }
        let center = frame.sx(x as f64);
        for (value, offset, color) in [(p_h, -bar, H_COLOR), (p_v, 0.0, V_COLOR)] {
            if value <= 0.0 {
                continue;
            }
            let y = frame.sy(value);
            let _ = write!(
                body,
                "<rect x='{:.2}' y='{y:.2}' width='{bar:.2}' height='{:.2}' fill='{color}'/>",
                center + offset,
                frame.sy(0.0) - y
            );
        }
    }
    frame.axes(&mut body, "position x", "probability");
    legend_entry(&mut body, frame.left + frame.width - 120.0, 78.0, H_COLOR, "H");
    legend_entry(&mut body, frame.left + frame.width - 60.0, 78.0, V_COLOR, "V");
    document(&body)
}

fn axis_label(kind: SecondAxisKind) -> &'static str {
    match kind {
        SecondAxisKind::Phi => "phi (rad)",
        SecondAxisKind::Gamma => "gamma",
    }
}

/// One polyline per second-axis row, entropy and IPR panels stacked.
pub fn curves_chart(result: &SweepResult, subtitle: &str) -> String {
    let grid = &result.grid;
    let mut body = String::new();
    title(&mut body, subtitle);
    let panels = [
        ("entanglement entropy", 60.0, true),
        ("IPR", 330.0, false),
    ];
    for (label, top, is_entropy) in panels {
        let mut y_max = 0.0f64;
        for row in 0..grid.n_rows() {
            for col in 0..grid.n_cols() {
                let v = if is_entropy {
                    result.s_e_at(row, col)
                } else {
                    result.ipr_at(row, col)
                };
                y_max = y_max.max(v);
            }
        }
        let frame = Frame {
            left: 80.0,
            top,
            width: 640.0,
            height: 200.0,
            x0: grid.theta_axis[0],
            x1: *grid.theta_axis.last().expect("validated non-empty"),
            y0: 0.0,
            y1: (y_max * 1.12).max(1e-9),
        };
        for row in 0..grid.n_rows() {
            let color = SERIES[row % SERIES.len()];
            let mut points = String::new();
            for col in 0..grid.n_cols() {
                let v = if is_entropy {
                    result.s_e_at(row, col)
                } else {
                    result.ipr_at(row, col)
                };
                let _ = write!(
                    points,
                    "{:.2},{:.2} ",
                    frame.sx(grid.theta_axis[col]),
                    frame.sy(v)
                );
            }
            let _ = write!(
                body,
                "<polyline points='{}' fill='none' stroke='{color}' stroke-width='1.5'/>",
                points.trim_end()
            );
            legend_entry(
                &mut body,
                frame.left + frame.width + 4.0,
                frame.top + 14.0 + 18.0 * row as f64,
                color,
                &format!(
                    "{} = {}",
                    grid.second_axis_kind.name(),
                    fmt_sig(grid.second_axis[row], 6)
                ),
            );
        }
        frame.axes(&mut body, "theta (deg)", label);
    }
    document(&body)
}

/// Five-anchor sequential color ramp over [0, 1].
fn ramp(v: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 5] = [
        (0.00, [68.0, 1.0, 84.0]),
        (0.25, [59.0, 82.0, 139.0]),
        (0.50, [33.0, 145.0, 140.0]),
        (0.75, [94.0, 201.0, 98.0]),
        (1.00, [253.0, 231.0, 37.0]),
    ];
    let v = v.clamp(0.0, 1.0);
    let mut rgb = STOPS[4].1;
    for pair in STOPS.windows(2) {
        let (lo, lo_c) = pair[0];
        let (hi, hi_c) = pair[1];
        if v <= hi {
            let f = if hi > lo { (v - lo) / (hi - lo) } else { 0.0 };
            rgb = [
                lo_c[0] + f * (hi_c[0] - lo_c[0]),
                lo_c[1] + f * (hi_c[1] - lo_c[1]),
                lo_c[2] + f * (hi_c[2] - lo_c[2]),
            ];
            break;
        }
    }
    format!(
        "#{:02x}{:02x}{:02x}",
        rgb[0].round() as u8,
        rgb[1].round() as u8,
        rgb[2].round() as u8
    )
}

/// Entropy and IPR heat panels over (theta, second axis) with colorbars.
pub fn heatmap_chart(result: &SweepResult, subtitle: &str) -> String {
    let grid = &result.grid;
    let mut body = String::new();
    title(&mut body, subtitle);
    let panels = [("entanglement entropy", 70.0, true), ("IPR", 440.0, false)];
    for (label, left, is_entropy) in panels {
        let frame = Frame {
            left,
            top: 70.0,
            width: 290.0,
            height: 420.0,
            x0: grid.theta_axis[0],
            x1: *grid.theta_axis.last().expect("validated non-empty"),
            y0: grid.second_axis[0],
            y1: *grid.second_axis.last().expect("validated non-empty"),
        };
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for row in 0..grid.n_rows() {
            for col in 0..grid.n_cols() {
                let v = if is_entropy {
                    result.s_e_at(row, col)
                } else {
                    result.ipr_at(row, col)
                };
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        let span = (hi - lo).max(1e-12);
        let cell_w = frame.width / grid.n_cols() as f64;
        let cell_h = frame.height / grid.n_rows() as f64;
        for row in 0..grid.n_rows() {
            for col in 0..grid.n_cols() {
                let v = if is_entropy {
                    result.s_e_at(row, col)
                } else {
                    result.ipr_at(row, col)
                };
                let _ = write!(
                    body,
                    "<rect x='{:.2}' y='{:.2}' width='{:.2}' height='{:.2}' fill='{}'/>",
                    frame.left + col as f64 * cell_w,
                    frame.top + frame.height - (row + 1) as f64 * cell_h,
                    cell_w + 0.5,
                    cell_h + 0.5,
                    ramp((v - lo) / span)
                );
            }
        }
        frame.axes(&mut body, "theta (deg)", axis_label(grid.second_axis_kind));
        let _ = write!(
            body,
            "<text x='{:.2}' y='60' font-size='13' text-anchor='middle'>{label}</text>",
            frame.left + frame.width / 2.0
        );
        // colorbar
        for i in 0..32 {
            let f = i as f64 / 31.0;
            let _ = write!(
                body,
                "<rect x='{:.2}' y='{:.2}' width='{:.2}' height='9' fill='{}'/>",
                frame.left + f * (frame.width - 9.0),
                frame.top + frame.height + 48.0,
                (frame.width - 9.0) / 31.0 + 0.5,
                ramp(f)
            );
        }
        let _ = write!(
            body,
            "<text x='{:.2}' y='{:.2}' font-size='11' text-anchor='start'>{}</text>\
             <text x='{:.2}' y='{:.2}' font-size='11' text-anchor='end'>{}</text>",
            frame.left,
            frame.top + frame.height + 72.0,
            fmt_sig(lo, 4),
            frame.left + frame.width,
            frame.top + frame.height + 72.0,
            fmt_sig(hi, 4)
        );
    }
    document(&body)
}

/// Reconstructed entropy and IPR versus loss with 1-sigma whiskers, laid
/// over the exact numerical curves.
pub fn tomography_chart(
    rows: &[TomographyRow],
    exact: &[(f64, f64, f64)],
    subtitle: &str,
) -> String {
    let mut body = String::new();
    title(&mut body, subtitle);
    let gammas: Vec<f64> = rows.iter().map(|r| r.gamma).collect();
    let x0 = gammas.iter().cloned().fold(f64::INFINITY, f64::min);
    let x1 = gammas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let pad = ((x1 - x0) * 0.05).max(1e-3);
    let panels = [("entanglement entropy", 60.0, true), ("IPR", 330.0, false)];
    for (label, top, is_entropy) in panels {
        let mut y_max = 0.0f64;
        for r in rows {
            let (est, err) = if is_entropy {
                (r.s_e_est, r.s_e_err)
            } else {
                (r.ipr_est, r.ipr_err)
            };
            y_max = y_max.max(est + 3.0 * err);
        }
        for &(_, s_e, ipr) in exact {
            y_max = y_max.max(if is_entropy { s_e } else { ipr });
        }
        let frame = Frame {
            left: 80.0,
            top,
            width: 640.0,
            height: 200.0,
            x0: x0 - pad,
            x1: x1 + pad,
            y0: 0.0,
            y1: (y_max * 1.12).max(1e-9),
        };
        let mut points = String::new();
        for &(g, s_e, ipr) in exact {
            let v = if is_entropy { s_e } else { ipr };
            let _ = write!(points, "{:.2},{:.2} ", frame.sx(g), frame.sy(v));
        }
        let _ = write!(
            body,
            "<polyline points='{}' fill='none' stroke='#888' stroke-width='1.2'/>",
            points.trim_end()
        );
        for r in rows {
            let (est, err) = if is_entropy {
                (r.s_e_est, r.s_e_err)
            } else {
                (r.ipr_est, r.ipr_err)
            };
            let x = frame.sx(r.gamma);
            let (y_lo, y_hi, y_mid) = (frame.sy(est - err), frame.sy(est + err), frame.sy(est));
            let (x_l, x_r) = (x - 4.0, x + 4.0);
            let color = if is_entropy { H_COLOR } else { V_COLOR };
            let _ = write!(
                body,
                "<line x1='{x:.2}' y1='{y_lo:.2}' x2='{x:.2}' y2='{y_hi:.2}' stroke='{color}' stroke-width='1.2'/>\
                 <line x1='{x_l:.2}' y1='{y_hi:.2}' x2='{x_r:.2}' y2='{y_hi:.2}' stroke='{color}'/>\
                 <line x1='{x_l:.2}' y1='{y_lo:.2}' x2='{x_r:.2}' y2='{y_lo:.2}' stroke='{color}'/>\
                 <circle cx='{x:.2}' cy='{y_mid:.2}' r='3' fill='{color}'/>",
            );
        }
        frame.axes(&mut body, "gamma", label);
    }
    document(&body)
}

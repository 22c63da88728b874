//! Stacked-area SVG rendering of schedules.
//!
//! Time runs left to right; each job's resource share is stacked in index
//! order below the unit-resource line. Line schedules can carry an overlay
//! of the dual lines `d_j` and of `γ`.

use std::fmt::Write as _;

use resched_core::{PiecewiseLinear, Schedule};

pub const PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f",
    "#bab0ac", "#17becf", "#bcbd22",
];

const MARGIN_LEFT: f64 = 50.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 40.0;

#[derive(Debug, Clone, PartialEq)]
pub struct DualOverlay {
    /// `(α_j, v_j)` per job.
    pub lines: Vec<(f64, f64)>,
    pub gamma: PiecewiseLinear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    pub width: u32,
    pub height: u32,
    pub duals: Option<DualOverlay>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { width: 800, height: 400, duals: None }
    }
}

/// Pixel geometry shared by the renderer and its tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub t_max: f64,
    pub plot_w: f64,
    pub plot_h: f64,
}

impl Frame {
    pub fn x(&self, t: f64) -> f64 {
        MARGIN_LEFT + t / self.t_max * self.plot_w
    }

    /// Resource level `u` in `[0, 1]` to pixels.
    pub fn y(&self, u: f64) -> f64 {
        MARGIN_TOP + (1.0 - u) * self.plot_h
    }
}

pub fn frame(schedule: &Schedule, opts: &SvgOptions) -> Frame {
    let mut t_max = schedule.grid().last().copied().unwrap_or(0.0);
    if let Some(d) = &opts.duals {
        t_max = d.lines.iter().map(|(a, v)| a * v).fold(t_max, f64::max);
    }
    if t_max <= 0.0 {
        t_max = 1.0;
    }
    Frame {
        t_max,
        plot_w: (opts.width as f64 - MARGIN_LEFT - MARGIN_RIGHT).max(1.0),
        plot_h: (opts.height as f64 - MARGIN_TOP - MARGIN_BOTTOM).max(1.0),
    }
}

pub fn render(schedule: &Schedule, opts: &SvgOptions) -> String {
    let f = frame(schedule, opts);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        opts.width, opts.height, opts.width, opts.height
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");

    let grid = schedule.grid();
    if grid.len() >= 2 {
        let samples: Vec<Vec<f64>> = schedule.assignments().iter().map(|a| a.sample(&grid)).collect();
        for (j, rates) in samples.iter().enumerate() {
            let _ = writeln!(s, "<g class=\"job\" data-job=\"{j}\" fill=\"{}\">", PALETTE[j % PALETTE.len()]);
            for (k, w) in grid.windows(2).enumerate() {
                let rate = rates[k];
                if rate <= 0.0 {
                    continue;
                }
                let base: f64 = samples[..j].iter().map(|r| r[k]).sum();
                let _ = writeln!(
                    s,
                    "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\"/>",
                    f.x(w[0]),
                    f.y(base + rate),
                    f.x(w[1]) - f.x(w[0]),
                    rate * f.plot_h
                );
            }
            let _ = writeln!(s, "</g>");
        }
    }

    if let Some(d) = &opts.duals {
        overlay(&mut s, &f, d);
    }
    axes(&mut s, &f);
    s.push_str("</svg>\n");
    s
}

fn overlay(s: &mut String, f: &Frame, d: &DualOverlay) {
    let top = d.lines.iter().map(|(a, _)| *a).fold(0.0, f64::max);
    if top <= 0.0 {
        return;
    }
    let y = |v: f64| f.y(v / top);
    let _ = writeln!(s, "<g class=\"duals\" fill=\"none\" stroke-width=\"1.5\">");
    for (j, (a, v)) in d.lines.iter().enumerate() {
        let _ = writeln!(
            s,
            "<line class=\"dual\" x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"{}\"/>",
            f.x(0.0),
            y(*a),
            f.x(a * v),
            y(0.0),
            PALETTE[j % PALETTE.len()]
        );
    }
    let bps = d.gamma.breakpoints();
    let mut pts = String::new();
    for (k, seg) in d.gamma.segments().iter().enumerate() {
        let (a, b) = (bps[k], bps[k + 1]);
        let _ = write!(
            pts,
            "{:.3},{:.3} {:.3},{:.3} ",
            f.x(a),
            y(seg.value),
            f.x(b),
            y(seg.value + seg.slope * (b - a))
        );
    }
    let _ = writeln!(
        s,
        "<polyline class=\"gamma\" points=\"{}\" stroke=\"black\" stroke-dasharray=\"4 2\"/>",
        pts.trim_end()
    );
    let _ = writeln!(s, "</g>");
}

fn axes(s: &mut String, f: &Frame) {
    let (x0, x1) = (f.x(0.0), f.x(f.t_max));
    let (y0, y1) = (f.y(0.0), f.y(1.0));
    let _ = writeln!(s, "<g class=\"axes\" stroke=\"black\" font-family=\"sans-serif\" font-size=\"11\">");
    let _ = writeln!(s, "<line x1=\"{x0:.3}\" y1=\"{y0:.3}\" x2=\"{x1:.3}\" y2=\"{y0:.3}\"/>");
    let _ = writeln!(s, "<line x1=\"{x0:.3}\" y1=\"{y0:.3}\" x2=\"{x0:.3}\" y2=\"{y1:.3}\"/>");
    let _ = writeln!(
        s,
        "<line class=\"capacity\" x1=\"{x0:.3}\" y1=\"{y1:.3}\" x2=\"{x1:.3}\" y2=\"{y1:.3}\" stroke-dasharray=\"6 3\"/>"
    );
    let _ = writeln!(s, "<text x=\"{:.3}\" y=\"{:.3}\" stroke=\"none\" text-anchor=\"end\">1</text>", x0 - 6.0, y1 + 4.0);
    let _ = writeln!(s, "<text x=\"{:.3}\" y=\"{:.3}\" stroke=\"none\" text-anchor=\"end\">0</text>", x0 - 6.0, y0 + 4.0);
    for k in 0..=4 {
        let t = f.t_max * k as f64 / 4.0;
        let _ = writeln!(
            s,
            "<text x=\"{:.3}\" y=\"{:.3}\" stroke=\"none\" text-anchor=\"middle\">{}</text>",
            f.x(t),
            y0 + 16.0,
            tick_label(t)
        );
    }
    let _ = writeln!(s, "</g>");
}

fn tick_label(t: f64) -> String {
    let s = format!("{t:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

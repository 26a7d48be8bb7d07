//! Static SVG figures: per-feature two-group boxplots and a strip plot of
//! canonical scores. Output bytes depend only on the input values.

use std::fmt::Write;

use accentgram_core::Dataset;

use crate::error::{CliError, CliResult};

const COLORS: [&str; 2] = ["#1f77b4", "#d62728"];
const W: f64 = 420.0;
const H: f64 = 360.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

/// Tukey box summary with linearly interpolated quartiles.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxStats {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn box_stats(values: &[f64]) -> CliResult<BoxStats> {
    if values.len() < 2 {
        return Err(CliError::Core(accentgram_core::Error::InvalidData(format!(
            "boxplot needs n >= 2 per group, got {}",
            values.len()
        ))));
    }
    let mut s = values.to_vec();
    s.sort_by(f64::total_cmp);
    let (q1, median, q3) = (quantile(&s, 0.25), quantile(&s, 0.5), quantile(&s, 0.75));
    let iqr = q3 - q1;
    let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let inside: Vec<f64> = s.iter().copied().filter(|&v| v >= lo_fence && v <= hi_fence).collect();
    Ok(BoxStats {
        q1,
        median,
        q3,
        whisker_low: inside[0],
        whisker_high: inside[inside.len() - 1],
        outliers: s.iter().copied().filter(|&v| v < lo_fence || v > hi_fence).collect(),
    })
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Scale {
    lo: f64,
    hi: f64,
    a: f64,
    b: f64,
}

impl Scale {
    /// Maps `[lo, hi]` (padded 5%) onto pixel range `[a, b]`.
    fn new(lo: f64, hi: f64, a: f64, b: f64) -> Self {
        let pad = if hi > lo { 0.05 * (hi - lo) } else { 1.0 };
        Self {
            lo: lo - pad,
            hi: hi + pad,
            a,
            b,
        }
    }

    fn px(&self, v: f64) -> f64 {
        self.a + (v - self.lo) / (self.hi - self.lo) * (self.b - self.a)
    }

    fn ticks(&self) -> Vec<f64> {
        let span = self.hi - self.lo;
        let raw = span / 8.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 2.5, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let mut t = (self.lo / step).ceil() * step;
        let mut out = Vec::new();
        while t <= self.hi + 1e-9 * step {
            out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
            t += step;
        }
        out
    }
}

fn header(out: &mut String, title: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        esc(title)
    )
    .unwrap();
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Two-group boxplot of one feature column (1-based `feature`).
pub fn boxplot_svg(dataset: &Dataset, feature: usize, name: &str) -> CliResult<String> {
    let groups = dataset.feature_by_group(feature - 1);
    let stats = [box_stats(&groups[0])?, box_stats(&groups[1])?];
    let all = groups.iter().flatten().copied();
    let (lo, hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    let y = Scale::new(lo, hi, H - BOTTOM, TOP);

    let mut s = String::new();
    header(&mut s, &format!("{name} by group"));
    for t in y.ticks() {
        let py = y.px(t);
        writeln!(
            s,
            r##"<line x1="{LEFT:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#e0e0e0"/>"##,
            W - RIGHT
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py + 4.0,
            fmt_tick(t)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<line x1="{LEFT:.2}" y1="{TOP:.2}" x2="{LEFT:.2}" y2="{:.2}" stroke="black"/>"#,
        H - BOTTOM
    )
    .unwrap();
    let slot = (W - LEFT - RIGHT) / 2.0;
    for (g, b) in stats.iter().enumerate() {
        let cx = LEFT + slot * (g as f64 + 0.5);
        let half = slot * 0.25;
        let color = COLORS[g];
        writeln!(s, r#"<g class="box" data-group="{}">"#, esc(&dataset.labels()[g])).unwrap();
        for (from, to) in [(b.whisker_low, b.q1), (b.q3, b.whisker_high)] {
            writeln!(
                s,
                r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black"/>"#,
                y.px(from),
                y.px(to)
            )
            .unwrap();
        }
        for cap in [b.whisker_low, b.whisker_high] {
            writeln!(
                s,
                r#"<line class="whisker" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" data-value="{cap}"/>"#,
                cx - half / 2.0,
                y.px(cap),
                cx + half / 2.0,
                y.px(cap)
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{color}" fill-opacity="0.35" stroke="{color}"/>"#,
            cx - half,
            y.px(b.q3),
            2.0 * half,
            (y.px(b.q1) - y.px(b.q3)).max(0.5)
        )
        .unwrap();
        writeln!(
            s,
            r#"<line class="median" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2" data-value="{}"/>"#,
            cx - half,
            y.px(b.median),
            cx + half,
            y.px(b.median),
            b.median
        )
        .unwrap();
        for &o in &b.outliers {
            writeln!(
                s,
                r#"<circle class="outlier" cx="{cx:.2}" cy="{:.2}" r="3" fill="none" stroke="{color}" data-value="{o}"/>"#,
                y.px(o)
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{} (n={})</text>"#,
            H - BOTTOM + 20.0,
            esc(&dataset.labels()[g]),
            groups[g].len()
        )
        .unwrap();
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Canonical scores on a horizontal axis, one row per group, with centroid
/// markers.
pub fn cda_strip_svg(labels: &[String; 2], scores: &[(String, f64)]) -> CliResult<String> {
    let per_group: Vec<Vec<f64>> = labels
        .iter()
        .map(|l| scores.iter().filter(|(g, _)| g == l).map(|(_, v)| *v).collect())
        .collect();
    if let Some(g) = per_group.iter().position(Vec::is_empty) {
        return Err(CliError::Core(accentgram_core::Error::InvalidData(format!(
            "no canonical scores for group {}",
            labels[g]
        ))));
    }
    let (lo, hi) = scores
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), (_, v)| {
            (l.min(*v), h.max(*v))
        });
    let x = Scale::new(lo, hi, LEFT + 30.0, W - RIGHT);
    let mut s = String::new();
    header(&mut s, "Canonical discriminant scores by group");
    let axis_y = H - BOTTOM;
    writeln!(
        s,
        r#"<line x1="{:.2}" y1="{axis_y:.2}" x2="{:.2}" y2="{axis_y:.2}" stroke="black"/>"#,
        LEFT + 30.0,
        W - RIGHT
    )
    .unwrap();
    for t in x.ticks() {
        let px = x.px(t);
        writeln!(
            s,
            r##"<line x1="{px:.2}" y1="{TOP:.2}" x2="{px:.2}" y2="{axis_y:.2}" stroke="#e0e0e0"/>"##
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            axis_y + 16.0,
            fmt_tick(t)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">canonical score</text>"#,
        (LEFT + W) / 2.0,
        H - 12.0
    )
    .unwrap();
    let band = (axis_y - TOP) / 2.0;
    for (g, vals) in per_group.iter().enumerate() {
        let cy = TOP + band * (g as f64 + 0.5);
        writeln!(s, r#"<g class="strip" data-group="{}">"#, esc(&labels[g])).unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT + 24.0,
            cy + 4.0,
            esc(&labels[g])
        )
        .unwrap();
        for (i, &v) in vals.iter().enumerate() {
            // fixed vertical spread instead of random jitter
            let dy = ((i % 7) as f64 - 3.0) * band * 0.08;
            writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}" fill-opacity="0.6"/>"#,
                x.px(v),
                cy + dy,
                COLORS[g]
            )
            .unwrap();
        }
        let m = vals.iter().sum::<f64>() / vals.len() as f64;
        writeln!(
            s,
            r#"<line class="centroid" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2" data-value="{m}"/>"#,
            x.px(m),
            cy - band * 0.35,
            x.px(m),
            cy + band * 0.35
        )
        .unwrap();
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

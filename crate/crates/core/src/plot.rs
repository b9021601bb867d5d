//! Deterministic SVG plots of the agreement distributions.
//!
//! Two figures mirror the report layout: overlaid histograms with KDE
//! curves on a shared kappa axis, and per-conditioning strips with the
//! raw observations (jittered dots), a violin outline, and a mean
//! marker. All coordinates are fixed-precision, so identical inputs
//! (and jitter seed) produce identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::report::AnalysisReport;
use crate::stats::HISTOGRAM_RANGE;

const PALETTE: [&str; 7] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#b07aa1", "#76b7b2", "#edc948", "#9c755f",
];
const MEAN_COLOR: &str = "#d62728";
const DOT_COLOR: &str = "#222222";

fn px(v: f64) -> String {
    format!("{v:.3}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn svg_header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif">"##,
        w = px(width),
        h = px(height),
    );
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>"##,
        w = px(width),
        h = px(height),
    );
}

/// Overlaid normalized histograms (translucent) and KDE polylines, one
/// color per conditioning, shared kappa axis over [-1, 1].
pub fn plot_distributions(report: &AnalysisReport, path: &Path) -> Result<()> {
    if report.summaries.is_empty() {
        return Err(Error::EmptyReport);
    }
    let (left, right, top, bottom) = (60.0, 180.0, 30.0, 55.0);
    let (plot_w, plot_h) = (650.0, 430.0);
    let (width, height) = (left + plot_w + right, top + plot_h + bottom);
    let (x_lo, x_hi) = HISTOGRAM_RANGE;

    let mut y_max = 0.0f64;
    for summary in report.summaries.values() {
        for bin in &summary.histogram {
            y_max = y_max.max(bin.density);
        }
        for point in &summary.kde {
            y_max = y_max.max(point.density);
        }
    }
    if y_max <= 0.0 {
        y_max = 1.0;
    }
    y_max *= 1.05;

    let x_px = |v: f64| left + (v - x_lo) / (x_hi - x_lo) * plot_w;
    let y_px = |d: f64| top + plot_h * (1.0 - d / y_max);

    let mut out = String::new();
    svg_header(&mut out, width, height);

    // axes and ticks
    let _ = writeln!(
        out,
        r##"<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="#000000"/>"##,
        x0 = px(left),
        x1 = px(left + plot_w),
        y1 = px(top + plot_h),
    );
    let _ = writeln!(
        out,
        r##"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="#000000"/>"##,
        x0 = px(left),
        y0 = px(top),
        y1 = px(top + plot_h),
    );
    for i in 0..=4 {
        let v = x_lo + (x_hi - x_lo) * i as f64 / 4.0;
        let x = x_px(v);
        let _ = writeln!(
            out,
            r##"<line x1="{x}" y1="{y0}" x2="{x}" y2="{y1}" stroke="#000000"/>"##,
            x = px(x),
            y0 = px(top + plot_h),
            y1 = px(top + plot_h + 5.0),
        );
        let _ = writeln!(
            out,
            r##"<text class="xtick" x="{x}" y="{y}" text-anchor="middle" font-size="11">{v:.1}</text>"##,
            x = px(x),
            y = px(top + plot_h + 18.0),
        );
    }
    for i in 0..=4 {
        let d = y_max * i as f64 / 4.0;
        let y = y_px(d);
        let _ = writeln!(
            out,
            r##"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="#000000"/>"##,
            x0 = px(left - 5.0),
            x1 = px(left),
            y = px(y),
        );
        let _ = writeln!(
            out,
            r##"<text class="ytick" x="{x}" y="{y}" text-anchor="end" dominant-baseline="middle" font-size="11">{d:.2}</text>"##,
            x = px(left - 8.0),
            y = px(y),
        );
    }
    let _ = writeln!(
        out,
        r##"<text x="{x}" y="{y}" text-anchor="middle" font-size="13">Cohen's kappa (mean over annotation pairs)</text>"##,
        x = px(left + plot_w / 2.0),
        y = px(height - 14.0),
    );
    let _ = writeln!(
        out,
        r##"<text x="{x}" y="{y}" text-anchor="middle" font-size="13" transform="rotate(-90 {x} {y})">density</text>"##,
        x = px(16.0),
        y = px(top + plot_h / 2.0),
    );

    for (i, (kind, summary)) in report.summaries.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            out,
            r##"<g class="hist" id="hist-{kind}" fill="{color}" fill-opacity="0.25">"##
        );
        for bin in &summary.histogram {
            if bin.density <= 0.0 {
                continue;
            }
            let x = x_px(bin.left);
            let w = x_px(bin.right) - x;
            let y = y_px(bin.density);
            let _ = writeln!(
                out,
                r##"<rect x="{x}" y="{y}" width="{w}" height="{h}"/>"##,
                x = px(x),
                y = px(y),
                w = px(w),
                h = px(top + plot_h - y),
            );
        }
        let _ = writeln!(out, "</g>");

        if !summary.kde.is_empty() {
            let points: Vec<String> = summary
                .kde
                .iter()
                .map(|p| format!("{},{}", px(x_px(p.x.clamp(x_lo, x_hi))), px(y_px(p.density))))
                .collect();
            let _ = writeln!(
                out,
                r##"<polyline class="kde" id="kde-{kind}" fill="none" stroke="{color}" stroke-width="1.8" points="{points}"/>"##,
                points = points.join(" "),
            );
        }
    }

    // legend
    let legend_x = left + plot_w + 20.0;
    for (i, kind) in report.summaries.keys().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = top + 10.0 + i as f64 * 20.0;
        let _ = writeln!(
            out,
            r##"<rect x="{x}" y="{y}" width="12" height="12" fill="{color}" fill-opacity="0.6"/>"##,
            x = px(legend_x),
            y = px(y),
        );
        let _ = writeln!(
            out,
            r##"<text x="{x}" y="{y}" font-size="12">{kind}</text>"##,
            x = px(legend_x + 18.0),
            y = px(y + 10.0),
        );
    }

    let _ = writeln!(out, "</svg>");
    write_file(path, &out)
}

/// Per-conditioning strip/violin chart: jittered observation dots, a
/// symmetric KDE outline, and a mean marker. The horizontal jitter is
/// drawn from a seeded ChaCha8 stream, so a fixed seed fixes the bytes.
pub fn plot_strips(report: &AnalysisReport, jitter_seed: u64, path: &Path) -> Result<()> {
    if report.summaries.is_empty() {
        return Err(Error::EmptyReport);
    }
    let conditionings = report.conditionings();
    let (left, top, bottom, right) = (60.0, 30.0, 95.0, 20.0);
    let col_w = 110.0;
    let plot_h = 400.0;
    let width = left + col_w * conditionings.len() as f64 + right;
    let height = top + plot_h + bottom;
    let (v_lo, v_hi) = HISTOGRAM_RANGE;
    let y_px = |v: f64| top + plot_h * (1.0 - (v - v_lo) / (v_hi - v_lo));

    let max_density = report
        .summaries
        .values()
        .flat_map(|s| s.kde.iter().map(|p| p.density))
        .fold(0.0f64, f64::max);
    let violin_scale = if max_density > 0.0 {
        col_w * 0.42 / max_density
    } else {
        0.0
    };

    let mut out = String::new();
    svg_header(&mut out, width, height);

    let _ = writeln!(
        out,
        r##"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="#000000"/>"##,
        x0 = px(left),
        y0 = px(top),
        y1 = px(top + plot_h),
    );
    for i in 0..=4 {
        let v = v_lo + (v_hi - v_lo) * i as f64 / 4.0;
        let y = y_px(v);
        let _ = writeln!(
            out,
            r##"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="#000000"/>"##,
            x0 = px(left - 5.0),
            x1 = px(left),
            y = px(y),
        );
        let _ = writeln!(
            out,
            r##"<text class="ytick" x="{x}" y="{y}" text-anchor="end" dominant-baseline="middle" font-size="11">{v:.1}</text>"##,
            x = px(left - 8.0),
            y = px(y),
        );
    }
    let _ = writeln!(
        out,
        r##"<text x="{x}" y="{y}" text-anchor="middle" font-size="13" transform="rotate(-90 {x} {y})">Cohen's kappa (mean over annotation pairs)</text>"##,
        x = px(16.0),
        y = px(top + plot_h / 2.0),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(jitter_seed);
    let mut uniform = move || (rng.next_u32() >> 8) as f64 / (1u32 << 24) as f64;

    for (i, &kind) in conditionings.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let center = left + col_w * (i as f64 + 0.5);
        let summary = &report.summaries[&kind];
        let _ = writeln!(out, r##"<g class="strip" id="strip-{kind}">"##);

        if !summary.kde.is_empty() && violin_scale > 0.0 {
            let mut points = Vec::with_capacity(summary.kde.len() * 2);
            for p in &summary.kde {
                let v = p.x.clamp(v_lo, v_hi);
                points.push(format!(
                    "{},{}",
                    px(center + p.density * violin_scale),
                    px(y_px(v))
                ));
            }
            for p in summary.kde.iter().rev() {
                let v = p.x.clamp(v_lo, v_hi);
                points.push(format!(
                    "{},{}",
                    px(center - p.density * violin_scale),
                    px(y_px(v))
                ));
            }
            let _ = writeln!(
                out,
                r##"<polygon class="violin" fill="{color}" fill-opacity="0.25" stroke="{color}" stroke-width="1" points="{points}"/>"##,
                points = points.join(" "),
            );
        }

        for record in report.per_lesion.iter().filter(|r| r.conditioning == kind) {
            let jitter = (uniform() - 0.5) * col_w * 0.36;
            let _ = writeln!(
                out,
                r##"<circle class="sample" cx="{cx}" cy="{cy}" r="1.6" fill="{DOT_COLOR}" fill-opacity="0.5"/>"##,
                cx = px(center + jitter),
                cy = px(y_px(record.mean_kappa.clamp(v_lo, v_hi))),
            );
        }

        let _ = writeln!(
            out,
            r##"<circle class="mean" cx="{cx}" cy="{cy}" r="4" fill="{MEAN_COLOR}"/>"##,
            cx = px(center),
            cy = px(y_px(summary.mean.clamp(v_lo, v_hi))),
        );

        let label_y = top + plot_h + 14.0;
        let _ = writeln!(
            out,
            r##"<text x="{x}" y="{y}" text-anchor="end" font-size="11" transform="rotate(-35 {x} {y})">{kind}</text>"##,
            x = px(center),
            y = px(label_y),
        );
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, "</svg>");
    write_file(path, &out)
}

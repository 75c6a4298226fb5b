//! Minimal standalone SVG plots: log-log energy against volume with the
//! fitted line and a target-slope guide.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

use super::{FitResult, SweepRow};

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 56.0;

/// Write a log-log scatter of `(μ, total)` with the fitted line (solid) and
/// the target slope (dashed, anchored at the first point).
pub fn plot_loglog(
    path: &Path,
    rows: &[SweepRow],
    fit: &FitResult,
    target_slope: f64,
    title: &str,
) -> Result<()> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| !r.flagged)
        .map(|r| (r.mu.log10(), r.total.log10()))
        .collect();
    let (x0, x1) = span(pts.iter().map(|p| p.0));
    let (y0, y1) = span(pts.iter().map(|p| p.1));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0).max(1e-12) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0).max(1e-12) * (H - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="monospace" font-size="14">{}</text>"#,
        MARGIN, title
    );
    // axes
    let _ = writeln!(
        s,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN,
        t = MARGIN
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="monospace" font-size="12">log10 mu</text>"#,
        W / 2.0 - 30.0,
        H - 16.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" font-family="monospace" font-size="12" transform="rotate(-90 14 {})">log10 total</text>"#,
        H / 2.0,
        H / 2.0
    );
    // fitted line across the x-range (fit is in natural logs)
    let ln10 = std::f64::consts::LN_10;
    let yfit = |x: f64| (fit.intercept + fit.slope * x * ln10) / ln10;
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="steelblue" stroke-width="1.5"/>"#,
        sx(x0),
        sy(yfit(x0)),
        sx(x1),
        sy(yfit(x1))
    );
    // target-slope guide through the first point
    if let Some(&(px, py)) = pts.first() {
        let yg = |x: f64| py + target_slope * (x - px);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="6 4"/>"#,
            sx(x0),
            sy(yg(x0)),
            sx(x1),
            sy(yg(x1))
        );
    }
    for &(x, y) in &pts {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="firebrick"/>"#,
            sx(x),
            sy(y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="40" font-family="monospace" font-size="12">slope {:.5}  target {:.5}</text>"#,
        MARGIN, fit.slope, target_slope
    );
    let _ = writeln!(s, "</svg>");
    std::fs::write(path, s)?;
    Ok(())
}

fn span<I: Iterator<Item = f64>>(iter: I) -> (f64, f64) {
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for v in iter {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

//! SVG heatmaps: model and reference panels on a shared diverging scale.

use std::fmt::Write as _;

use gen_pde::pde::SolutionGrid;

/// Blue-white-red diverging map over `[-limit, limit]`.
fn color(v: f64, limit: f64) -> (u8, u8, u8) {
    let t = if limit > 0.0 { (v / limit).clamp(-1.0, 1.0) } else { 0.0 };
    let lerp = |a: f64, b: f64, s: f64| (a + (b - a) * s).round() as u8;
    let (lo, mid, hi) = ((59.0, 76.0, 192.0), (221.0, 221.0, 221.0), (180.0, 4.0, 38.0));
    if t < 0.0 {
        let s = t + 1.0;
        (lerp(lo.0, mid.0, s), lerp(lo.1, mid.1, s), lerp(lo.2, mid.2, s))
    } else {
        (lerp(mid.0, hi.0, t), lerp(mid.1, hi.1, t), lerp(mid.2, hi.2, t))
    }
}

fn panel(
    out: &mut String,
    grid: &SolutionGrid,
    values: &[f64],
    limit: f64,
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    title: &str,
) {
    let (nx, nt) = (grid.nx(), grid.nt());
    let cell_w = w / nt as f64;
    let cell_h = h / nx as f64;
    let _ = write!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\">{title}</text>",
        x0,
        y0 - 6.0
    );
    for ix in 0..nx {
        for it in 0..nt {
            let v = values[ix * nt + it];
            let (r, g, b) = color(v, limit);
            // t runs right, x runs up
            let px = x0 + it as f64 * cell_w;
            let py = y0 + (nx - 1 - ix) as f64 * cell_h;
            let _ = write!(
                out,
                "<rect x=\"{px:.2}\" y=\"{py:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"rgb({r},{g},{b})\"/>",
                cell_w + 0.05,
                cell_h + 0.05
            );
        }
    }
    let _ = write!(
        out,
        "<rect x=\"{x0:.1}\" y=\"{y0:.1}\" width=\"{w:.1}\" height=\"{h:.1}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.6\"/>"
    );
}

/// Render model values next to the reference (when present) with the color
/// limits taken from the reference so both panels share scales.
pub fn heatmap(grid: &SolutionGrid) -> String {
    let limit = grid
        .reference
        .as_deref()
        .unwrap_or(&grid.values)
        .iter()
        .filter(|v| v.is_finite())
        .fold(0.0f64, |m, &v| m.max(v.abs()));

    let (pw, ph) = (330.0, 280.0);
    let panels = if grid.reference.is_some() { 2.0 } else { 1.0 };
    let width = 20.0 + panels * (pw + 26.0) + 46.0;
    let height = ph + 58.0;
    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    panel(&mut out, grid, &grid.values, limit, 20.0, 30.0, pw, ph, &grid.meta.model);
    if let Some(reference) = &grid.reference {
        panel(&mut out, grid, reference, limit, 20.0 + pw + 26.0, 30.0, pw, ph, "reference");
    }
    // colorbar
    let cb_x = 20.0 + panels * (pw + 26.0);
    let steps = 64;
    for i in 0..steps {
        let v = limit * (1.0 - 2.0 * i as f64 / (steps - 1) as f64);
        let (r, g, b) = color(v, limit);
        let _ = write!(
            out,
            "<rect x=\"{cb_x:.1}\" y=\"{:.2}\" width=\"14\" height=\"{:.2}\" fill=\"rgb({r},{g},{b})\"/>",
            30.0 + ph * i as f64 / steps as f64,
            ph / steps as f64 + 0.1
        );
    }
    let _ = write!(
        out,
        "<text x=\"{:.1}\" y=\"40\" font-family=\"sans-serif\" font-size=\"11\">{limit:.3}</text>",
        cb_x + 17.0
    );
    let _ = write!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\">{:.3}</text>",
        cb_x + 17.0,
        30.0 + ph,
        -limit
    );
    let _ = write!(
        out,
        "<text x=\"20\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\">t right, x up; domain [{}, {}] x [{}, {}]</text>",
        height - 12.0,
        grid.xs.first().unwrap(),
        grid.xs.last().unwrap(),
        grid.ts.first().unwrap(),
        grid.ts.last().unwrap()
    );
    out.push_str("</svg>");
    out
}

//! Fixed-template SVG: graphs of piecewise linear functions with dots at the
//! breakpoints, and the norm-one profile as a grid of glyphs.

use std::fmt::Write;

use ramification::arith::ProfileRow;
use ramification::rat::{fmt_rat, to_f64};
use ramification::{Glyph, PlFunc, Rat};

#[derive(Clone, Debug)]
pub struct Palette {
    pub line: String,
    pub dot: String,
}

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const LEFT: f64 = 56.0;
const BOTTOM: f64 = 312.0;
const PLOT_W: f64 = 392.0;
const PLOT_H: f64 = 264.0;

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="serif" font-size="12">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Graph of `f` on `[0, x_max]`, with `r` horizontal and `s` vertical.
pub fn plot(f: &PlFunc, x_max: &Rat, title: &str, palette: &Palette) -> String {
    let y_max = f.eval(x_max).unwrap_or_else(|_| x_max.clone());
    let (xm, ym) = (to_f64(x_max).max(1e-9), to_f64(&y_max).max(1e-9));
    let sx = |x: &Rat| LEFT + to_f64(x) / xm * PLOT_W;
    let sy = |y: &Rat| BOTTOM - to_f64(y) / ym * PLOT_H;

    let mut out = String::new();
    header(&mut out, WIDTH, HEIGHT, title);
    let _ = writeln!(
        out,
        r##"<g stroke="#444" stroke-width="1"><line x1="{LEFT:.2}" y1="{BOTTOM:.2}" x2="{:.2}" y2="{BOTTOM:.2}"/><line x1="{LEFT:.2}" y1="{BOTTOM:.2}" x2="{LEFT:.2}" y2="{:.2}"/></g>"##,
        LEFT + PLOT_W + 8.0,
        BOTTOM - PLOT_H - 8.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-style="italic">r</text><text x="{:.2}" y="{:.2}" font-style="italic">s</text>"#,
        LEFT + PLOT_W + 12.0,
        BOTTOM + 4.0,
        LEFT - 4.0,
        BOTTOM - PLOT_H - 12.0
    );

    let diag_end = if y_max >= *x_max { x_max.clone() } else { y_max.clone() };
    let _ = writeln!(
        out,
        r##"<line x1="{LEFT:.2}" y1="{BOTTOM:.2}" x2="{:.2}" y2="{:.2}" stroke="#bbb" stroke-dasharray="4 3"/>"##,
        sx(&diag_end),
        sy(&diag_end)
    );

    let mut points: Vec<(Rat, Rat)> = f
        .breakpoints()
        .iter()
        .filter(|(x, _)| x <= x_max)
        .cloned()
        .collect();
    if points.last().map_or(true, |(x, _)| x < x_max) {
        points.push((x_max.clone(), y_max.clone()));
    }
    let path: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
        escape(&palette.line),
        path.join(" ")
    );

    for (x, y) in f.kinks().iter().filter(|(x, _)| x <= x_max) {
        let (px, py) = (sx(x), sy(y));
        let _ = writeln!(
            out,
            r#"<circle cx="{px:.2}" cy="{py:.2}" r="3.5" fill="{}"/>"#,
            escape(&palette.dot)
        );
        let _ = writeln!(
            out,
            r##"<line x1="{px:.2}" y1="{py:.2}" x2="{px:.2}" y2="{BOTTOM:.2}" stroke="#ccc" stroke-dasharray="2 2"/>"##
        );
        let _ = writeln!(
            out,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            BOTTOM + 16.0,
            fmt_rat(x)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py + 4.0,
            fmt_rat(y)
        );
    }
    out.push_str("</svg>\n");
    out
}

const CELL: f64 = 36.0;

fn glyph(out: &mut String, cx: f64, cy: f64, g: Glyph, color: &str) {
    let r = 10.0;
    match g {
        Glyph::Empty => {
            let _ = writeln!(
                out,
                r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.1}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
            );
        }
        Glyph::Half => {
            let _ = writeln!(
                out,
                r#"<path d="M {cx:.2} {:.2} A {r:.1} {r:.1} 0 0 0 {cx:.2} {:.2} Z" fill="{color}"/>"#,
                cy - r,
                cy + r
            );
            let _ = writeln!(
                out,
                r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.1}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
            );
        }
        Glyph::Full => {
            let _ = writeln!(
                out,
                r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.1}" fill="{color}" stroke="{color}" stroke-width="1.5"/>"#
            );
        }
    }
}

/// One column per depth `r`, one row per filtered object.
pub fn profile(rows: &[ProfileRow], title: &str, palette: &Palette) -> String {
    let labels = ["L¹", "L×", "F×", "I"];
    let left = 56.0;
    let top = 24.0;
    let width = left + CELL * rows.len() as f64 + 16.0;
    let height = top + CELL * labels.len() as f64 + 40.0;
    let mut out = String::new();
    header(&mut out, width, height, title);
    for (i, label) in labels.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#,
            left - 12.0,
            top + CELL * (i as f64 + 0.5) + 4.0
        );
    }
    let color = escape(&palette.dot);
    for (j, row) in rows.iter().enumerate() {
        let cx = left + CELL * (j as f64 + 0.5);
        for (i, g) in [row.torus, row.gm_l, row.gm_f, row.inertia].into_iter().enumerate() {
            glyph(&mut out, cx, top + CELL * (i as f64 + 0.5), g, &color);
        }
        let _ = writeln!(
            out,
            r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            top + CELL * labels.len() as f64 + 20.0,
            fmt_rat(&row.r)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ramification::arith::norm_one_profile;
    use ramification::rat::{int, rat};

    fn palette() -> Palette {
        Palette {
            line: "black".into(),
            dot: "red".into(),
        }
    }

    #[test]
    fn plot_marks_each_kink() {
        let f = PlFunc::from_slopes(&[(rat(1, 2), int(2))], int(1)).unwrap();
        let svg = plot(&f, &int(2), "phi", &palette());
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains(">1/2</text>"));
        assert_eq!(svg, plot(&f, &int(2), "phi", &palette()));
    }

    #[test]
    fn profile_has_one_glyph_per_cell() {
        let rows = norm_one_profile(&rat(3, 2), &int(3)).unwrap();
        let svg = profile(&rows, "profile", &palette());
        let halves = rows
            .iter()
            .flat_map(|r| [r.torus, r.gm_l, r.gm_f, r.inertia])
            .filter(|g| *g == Glyph::Half)
            .count();
        assert_eq!(svg.matches("<path").count(), halves);
        assert_eq!(svg.matches("<circle").count(), rows.len() * 4);
    }
}

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::chords::{chord_value, representative_set, Numbering};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const RADIUS: f64 = 290.0;
const CX: f64 = WIDTH / 2.0;
const CY: f64 = HEIGHT - 40.0;

fn point(angle: f64) -> (f64, f64) {
    (CX + RADIUS * angle.cos(), CY - RADIUS * angle.sin())
}

/// SVG of the upper unit semicircle with the upper vertices of the regular
/// `2n`-gon and the odd-numbered representative chords of `n`.
///
/// Chord `sigma_j` joins vertices `(n-j)/2` and `(n+j)/2`, so the chords are
/// horizontal and stacked by length. Negative chords are drawn in red.
pub fn render_chord_diagram(n: u64) -> Result<String> {
    if !(3..=199).contains(&n) || n % 2 == 0 {
        return Err(Error::OutOfRange(format!(
            "diagram modulus must be odd and in 3..=199, got {n}"
        )));
    }
    let mut svg = String::new();
    let w = &mut svg;
    // writes into a String cannot fail
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(w, r#"<title>Chords associated with n = {n}</title>"#);
    let _ = writeln!(w, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let (x0, y0) = point(0.0);
    let (x1, y1) = point(PI);
    let _ = writeln!(
        w,
        r##"<path d="M {x0:.3} {y0:.3} A {RADIUS} {RADIUS} 0 0 0 {x1:.3} {y1:.3} Z" fill="none" stroke="#808080" stroke-width="1"/>"##
    );
    for i in 0..=n {
        let (x, y) = point(PI * i as f64 / n as f64);
        // even i are also corners of the n-gon
        let r = if i % 2 == 0 { 3.5 } else { 2.0 };
        let _ = writeln!(
            w,
            r##"<circle cx="{x:.3}" cy="{y:.3}" r="{r}" fill="#000000"/>"##
        );
    }
    for chord in representative_set(n, Numbering::Odd)? {
        let j = chord.j();
        let value = chord_value(chord);
        let (xa, ya) = point(PI * ((n - j) / 2) as f64 / n as f64);
        let (xb, yb) = point(PI * ((n + j) / 2) as f64 / n as f64);
        let (color, sign) = if value < 0.0 {
            ("#c0392b", '-')
        } else {
            ("#1f4e9c", '+')
        };
        let _ = writeln!(
            w,
            r#"<line x1="{xa:.3}" y1="{ya:.3}" x2="{xb:.3}" y2="{yb:.3}" stroke="{color}" stroke-width="1.5"/>"#
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="11" text-anchor="start" fill="{color}">σ{j} ({sign}) {:.4}</text>"#,
            xa + 4.0,
            ya - 3.0,
            value.abs()
        );
    }
    let _ = writeln!(w, "</svg>");
    Ok(svg)
}

pub fn emit_chord_diagram(n: u64, path: &Path) -> Result<()> {
    let svg = render_chord_diagram(n)?;
    std::fs::write(path, svg)?;
    Ok(())
}

//! SVG of spectrum points on the two axes, log-modulus radial scale.
//!
//! Each panel is one axis. A point `z` sits at angle `arg z` and radius
//! `log|z| − log r_min`, so the forward orbit `q⁻ᵏz` becomes an evenly spaced
//! spiral instead of piling up near the origin.

use std::fmt::Write;

use qplane_core::{AxisPoint, Complex64, QParameter};

const PANEL: f64 = 360.0;
const MARGIN: f64 = 20.0;
/// Orbit points per spectrum point.
const ORBIT_STEPS: usize = 24;

pub struct PlotInput<'a> {
    pub q: QParameter,
    pub spectrum: &'a [AxisPoint],
    pub undecided: &'a [AxisPoint],
    /// Draw forward orbits through the nonzero points.
    pub orbits: bool,
}

struct Panel {
    log_min: f64,
    log_span: f64,
    cx: f64,
    cy: f64,
}

impl Panel {
    fn place(&self, z: Complex64) -> (f64, f64) {
        let radius = PANEL / 2.0 - MARGIN;
        let r = if z.norm() == 0.0 { 0.0 } else { ((z.norm().log10() - self.log_min) / self.log_span).clamp(0.0, 1.0) * radius };
        let a = z.arg();
        (self.cx + r * a.cos(), self.cy - r * a.sin())
    }
}

fn orbit(z: Complex64, q: QParameter, steps: usize) -> Vec<Complex64> {
    let qi = q.inv();
    let mut out = vec![z];
    for _ in 1..steps {
        let w = out[out.len() - 1] * qi;
        if !w.is_finite() {
            break;
        }
        out.push(w);
    }
    out
}

pub fn render(input: &PlotInput<'_>) -> String {
    let nonzero: Vec<(usize, Complex64)> = input
        .spectrum
        .iter()
        .chain(input.undecided)
        .filter_map(|p| p.axis().map(|a| (a as usize, p.coordinate())))
        .filter(|(_, z)| z.norm() > 0.0)
        .collect();
    // modulus range covers every point and, when drawn, its orbit
    let mut mods: Vec<f64> = nonzero.iter().map(|(_, z)| z.norm()).collect();
    if input.orbits {
        for (_, z) in &nonzero {
            mods.extend(orbit(*z, input.q, ORBIT_STEPS).iter().map(|w| w.norm()));
        }
    }
    let lo = mods.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = mods.iter().copied().fold(0.0, f64::max);
    let (log_min, log_span) = if mods.is_empty() { (-1.0, 2.0) } else { (lo.log10() - 1.0, (hi.log10() - lo.log10() + 1.0).max(1.0)) };
    let panels = [
        Panel { log_min, log_span, cx: PANEL / 2.0, cy: PANEL / 2.0 + MARGIN },
        Panel { log_min, log_span, cx: 1.5 * PANEL, cy: PANEL / 2.0 + MARGIN },
    ];

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = 2.0 * PANEL,
        h = PANEL + MARGIN
    );
    for (k, p) in panels.iter().enumerate() {
        let label = if k == 0 { "x axis" } else { "y axis" };
        let _ = writeln!(s, r#"<text x="{}" y="14" text-anchor="middle">{label}</text>"#, p.cx);
        // decade rings
        let decades = log_span.ceil() as usize;
        for d in 1..=decades {
            let r = (d as f64 / log_span).min(1.0) * (PANEL / 2.0 - MARGIN);
            let _ = writeln!(s, r##"<circle cx="{}" cy="{}" r="{r:.2}" fill="none" stroke="#ddd"/>"##, p.cx, p.cy);
        }
        let _ = writeln!(s, r##"<circle cx="{}" cy="{}" r="2" fill="#999"/>"##, p.cx, p.cy);
    }
    if input.orbits {
        for &(axis, z) in &nonzero {
            let pts: Vec<String> = orbit(z, input.q, ORBIT_STEPS)
                .into_iter()
                .map(|w| {
                    let (x, y) = panels[axis].place(w);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(s, r##"<polyline points="{}" fill="none" stroke="#88a" stroke-width="1"/>"##, pts.join(" "));
        }
    }
    let dot = |s: &mut String, p: &AxisPoint, color: &str| {
        if p.is_origin() {
            for panel in &panels {
                let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="4" fill="{color}"/>"#, panel.cx, panel.cy);
            }
        } else if let Some(axis) = p.axis() {
            let (x, y) = panels[axis as usize].place(p.coordinate());
            let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{color}"/>"#);
        }
    };
    for p in input.spectrum {
        dot(&mut s, p, "#c22");
    }
    for p in input.undecided {
        dot(&mut s, p, "#e90");
    }
    s.push_str("</svg>\n");
    s
}

//! Static SVG of a spectrum scan: one panel per axis of ℂ_xy, scanned points
//! coloured by outcome, and the Putinar region drawn as shaded annuli and
//! backward orbit rays.

use std::fmt::Write;

use qplane::coeff::{Cf, Cq, Field};
use qplane::qtopology::{Axis, Prim};
use qplane::spectra::SpectrumReport;

const PANEL: f64 = 360.0;
const MARGIN: f64 = 30.0;
const SPECTRUM: &str = "#c0392b";
const RESOLVENT: &str = "#7f8c8d";
const REGION: &str = "#f5cba7";

fn xy(z: &Cq) -> (f64, f64) {
    let f = z.to_cf();
    (f.re, f.im)
}

struct Panel {
    left: f64,
    scale: f64,
}

impl Panel {
    fn at(&self, (re, im): (f64, f64)) -> (f64, f64) {
        let c = PANEL / 2.0;
        (self.left + c + re * self.scale, MARGIN + c - im * self.scale)
    }
}

pub fn render(rep: &SpectrumReport) -> String {
    let q = rep.q.value().to_cf();
    let mut radius: f64 = 2.0;
    for s in &rep.samples {
        radius = radius.max(1.2 * s.point.value.magnitude());
    }
    let scale = PANEL / (2.0 * radius);
    let width = 2.0 * PANEL + 3.0 * MARGIN;
    let height = PANEL + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = width,
        h = height
    );
    let _ = writeln!(s, r#"<rect width="{}" height="{}" fill="white"/>"#, width, height);
    for (k, axis) in [Axis::X, Axis::Y].into_iter().enumerate() {
        let p = Panel { left: MARGIN + k as f64 * (PANEL + MARGIN), scale };
        let (cx, cy) = p.at((0.0, 0.0));
        let _ = writeln!(
            s,
            r#"<clipPath id="panel{k}"><rect x="{x}" y="{y}" width="{w}" height="{w}"/></clipPath><g clip-path="url(#panel{k})">"#,
            k = k,
            x = p.left,
            y = MARGIN,
            w = PANEL
        );
        let prims = match axis {
            Axis::X => &rep.putinar.x,
            Axis::Y => &rep.putinar.y,
        };
        for prim in prims {
            region(&mut s, &p, prim, q, radius);
        }
        let _ = writeln!(s, r##"<line x1="{}" y1="{cy}" x2="{}" y2="{cy}" stroke="#bbb"/>"##, p.left, p.left + PANEL);
        let _ = writeln!(s, r##"<line x1="{cx}" y1="{}" x2="{cx}" y2="{}" stroke="#bbb"/>"##, MARGIN, MARGIN + PANEL);
        for smp in &rep.samples {
            if smp.point.axis != axis && !smp.point.is_origin() {
                continue;
            }
            let (x, y) = p.at(xy(&smp.point.value));
            let colour = if smp.is_resolvent() { RESOLVENT } else { SPECTRUM };
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{}"/>"#, x, y, colour);
        }
        let name = if axis == Axis::X { "x-axis (λ, 0)" } else { "y-axis (0, μ)" };
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#, p.left, MARGIN, PANEL, PANEL);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, p.left, MARGIN - 8.0, name);
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}">q = {}; red: spectrum, grey: resolvent, shaded: closure</text>"#,
        MARGIN,
        height - 8.0,
        rep.q
    );
    s.push_str("</svg>");
    s
}

fn region(s: &mut String, p: &Panel, prim: &Prim, q: Cf, radius: f64) {
    let rho = q.abs();
    let (cx, cy) = p.at((0.0, 0.0));
    let r_of = |r2: &qplane::coeff::Q| r2.to_f64().sqrt() * p.scale;
    let ring = |s: &mut String, inner: f64, outer: f64| {
        let _ = writeln!(
            s,
            r#"<path fill="{REGION}" fill-rule="evenodd" d="M {a} {cy} a {o} {o} 0 1 0 {d} 0 a {o} {o} 0 1 0 {nd} 0 Z M {b} {cy} a {i} {i} 0 1 0 {di} 0 a {i} {i} 0 1 0 {ndi} 0 Z"/>"#,
            a = cx - outer,
            o = outer,
            d = 2.0 * outer,
            nd = -2.0 * outer,
            b = cx - inner,
            i = inner,
            di = 2.0 * inner,
            ndi = -2.0 * inner,
        );
    };
    let far = radius * p.scale * 1.5;
    match prim {
        Prim::FullAxis => ring(s, 0.0, far),
        Prim::OriginDisk { r2, .. } => ring(s, 0.0, r_of(r2)),
        Prim::Annulus { inner2, outer2, .. } => ring(s, r_of(inner2), outer2.as_ref().map_or(far, r_of)),
        Prim::AnnulusOrbit { inner2, outer2, .. } => {
            let (mut a, mut b) = (r_of(inner2), r_of(outer2));
            while a < far && rho > 0.0 {
                ring(s, a, b);
                a /= rho;
                b /= rho;
            }
        }
        Prim::Disk { center, r2, .. } => {
            let (x, y) = p.at(xy(center));
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="{}"/>"#, x, y, r_of(r2), REGION);
        }
        Prim::BackwardOrbit { base } => orbit(s, p, base, q, radius, false),
        Prim::ForwardOrbitWithLimit { base } => orbit(s, p, base, q, radius, true),
        Prim::FinitePointSet { points } => {
            for z in points {
                let (x, y) = p.at(xy(z));
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="6" fill="{}"/>"#, x, y, REGION);
            }
        }
    }
}

/// Orbit points inside the panel joined by a polyline.
fn orbit(s: &mut String, p: &Panel, base: &Cq, q: Cf, radius: f64, forward: bool) {
    let mut z = base.to_cf();
    let step = if forward { q } else { Field::div(&Cf::new(1.0, 0.0), &q) };
    let mut pts = vec![];
    for _ in 0..64 {
        let m = z.abs();
        if m > radius * 1.5 || m < radius * 1e-3 {
            break;
        }
        pts.push(p.at((z.re, z.im)));
        z = Field::mul(&z, &step);
    }
    if forward {
        pts.push(p.at((0.0, 0.0)));
    }
    let line: Vec<String> = pts.iter().map(|(x, y)| format!("{:.2},{:.2}", x, y)).collect();
    let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{}" stroke-dasharray="4 3"/>"#, line.join(" "), SPECTRUM);
    for (x, y) in pts {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="none" stroke="{}"/>"#, x, y, SPECTRUM);
    }
}

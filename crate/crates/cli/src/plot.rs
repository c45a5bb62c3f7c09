//! Static SVG of the standard fundamental domain, a sample grid over it and
//! labelled points.

use std::fmt::Write;

use divsum::ModularPoint;

const W: f64 = 480.0;
const H: f64 = 560.0;
const U0: f64 = -0.7;
const U1: f64 = 0.7;
const V1: f64 = 2.2;

fn x(u: f64) -> f64 {
    (u - U0) / (U1 - U0) * W
}

fn y(v: f64) -> f64 {
    H - v / V1 * H
}

fn polyline(points: impl Iterator<Item = (f64, f64)>, style: &str) -> String {
    let pts: Vec<String> = points.map(|(u, v)| format!("{:.2},{:.2}", x(u), y(v))).collect();
    format!("<polyline points=\"{}\" fill=\"none\" {style}/>\n", pts.join(" "))
}

/// Render the domain `{|u| ≤ 1/2, |τ| ≥ 1}`, a regular sample grid inside it,
/// optionally the circle `|τ| = 1/√11` fixed by the Fricke involution, and
/// the given labelled points.
pub fn render(marks: &[(String, ModularPoint)], fricke_circle: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" \
         font-family=\"sans-serif\" font-size=\"11\">"
    );
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    s.push_str(&polyline([(U0, 0.0), (U1, 0.0)].into_iter(), "stroke=\"#999\""));
    let arc = (0..=60).map(|k| {
        let t = std::f64::consts::PI / 3.0 + k as f64 / 60.0 * std::f64::consts::PI / 3.0;
        (t.cos(), t.sin())
    });
    let r3 = 3f64.sqrt() / 2.0;
    s.push_str(&polyline([(-0.5, V1), (-0.5, r3)].into_iter().chain(arc.rev()).chain([(0.5, V1)]), "stroke=\"black\" stroke-width=\"1.5\""));
    // Sample grid.
    for i in 0..=20 {
        let u = -0.5 + i as f64 / 20.0;
        let mut v = (1.0 - u * u).sqrt();
        while v <= V1 {
            let _ = writeln!(s, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1\" fill=\"#8ab\"/>", x(u), y(v));
            v += 0.08;
        }
    }
    if fricke_circle {
        let r = 1.0 / 11f64.sqrt();
        let c = (0..=90).map(|k| {
            let t = k as f64 / 90.0 * std::f64::consts::PI;
            (r * t.cos(), r * t.sin())
        });
        s.push_str(&polyline(c, "stroke=\"#c60\" stroke-dasharray=\"4 3\""));
    }
    for (label, p) in marks {
        if p.u < U0 || p.u > U1 || p.v > V1 {
            continue;
        }
        let _ = writeln!(s, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"#c00\"/>", x(p.u), y(p.v));
        let label = label.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\">{label}</text>", x(p.u) + 6.0, y(p.v) - 6.0);
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_contains_points_and_escapes_labels() {
        let svg = render(&[("a<b".into(), ModularPoint::new(0.1, 1.2))], true);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a&lt;b"));
        assert!(svg.contains("stroke-dasharray"));
    }
}

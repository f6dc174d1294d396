//! Static SVG of a snowflake disk: the central polygon of each subdisk,
//! with strips leading to the subdisks of its strands, placed radially.

use std::f64::consts::PI;
use std::fmt::Write as _;

use snowflake_core::snowflake::Body;
use snowflake_core::{SnowflakeParams, SnowflakeWord};

const PALETTE: [&str; 6] = ["#4e79a7", "#59a14f", "#edc948", "#e15759", "#b07aa1", "#76b7b2"];
const NODE_CAP: usize = 50_000;

struct Canvas {
    out: String,
    nodes: usize,
    max_depth: u32,
}

fn polygon(out: &mut String, pts: &[(f64, f64)], attrs: &str) {
    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let _ = writeln!(out, "<polygon points=\"{}\" {attrs}/>", coords.join(" "));
}

impl Canvas {
    fn node(&mut self, w: &SnowflakeWord, c: (f64, f64), radius: f64, theta: f64, depth: u32) {
        let sides = match &w.body {
            Body::Terminal(edges) => (2 * edges.len()).max(4),
            Body::Composite(strands) => (2 * strands.len()).max(4),
        };
        let pts: Vec<(f64, f64)> = (0..sides)
            .map(|i| {
                let a = theta + 2.0 * PI * i as f64 / sides as f64;
                (c.0 + radius * a.cos(), c.1 + radius * a.sin())
            })
            .collect();
        let fill = PALETTE[depth as usize % PALETTE.len()];
        let _ = writeln!(self.out, "<g><title>c_{}^{}</title>", w.vertex, w.n);
        polygon(&mut self.out, &pts, &format!("fill=\"{fill}\" stroke=\"#222\" stroke-width=\"0.5\""));
        self.out.push_str("</g>\n");
        self.nodes += 1;
    }

    /// Draws the strands of `w` fanned over `wedge` around direction `theta`.
    fn strands(&mut self, w: &SnowflakeWord, c: (f64, f64), radius: f64, theta: f64, wedge: f64, depth: u32) {
        let Body::Composite(strands) = &w.body else { return };
        if depth >= self.max_depth {
            return;
        }
        let k = strands.len() as f64;
        let step = wedge / k;
        let gap = 0.35 * radius;
        let s = 0.9 * (0.5 * step).min(0.5 * PI).sin();
        let rho = (0.55 * radius).min((radius + gap) * s / (1.0 - s));
        if rho < 0.5 {
            return;
        }
        for (i, st) in strands.iter().enumerate() {
            if self.nodes >= NODE_CAP {
                return;
            }
            let a = theta - 0.5 * wedge + (i as f64 + 0.5) * step;
            let (u, n) = ((a.cos(), a.sin()), (-a.sin(), a.cos()));
            let dist = radius + gap + rho;
            let cc = (c.0 + dist * u.0, c.1 + dist * u.1);
            let h = 0.45 * rho;
            let near = (c.0 + radius * u.0, c.1 + radius * u.1);
            let far = (cc.0 - rho * u.0, cc.1 - rho * u.1);
            let strip = [
                (near.0 + h * n.0, near.1 + h * n.1),
                (far.0 + h * n.0, far.1 + h * n.1),
                (far.0 - h * n.0, far.1 - h * n.1),
                (near.0 - h * n.0, near.1 - h * n.1),
            ];
            let _ = writeln!(self.out, "<g><title>s_{} remainder {}</title>", st.edge, st.remainder);
            polygon(&mut self.out, &strip, "fill=\"#bbbbbb\" stroke=\"#555\" stroke-width=\"0.3\"");
            self.out.push_str("</g>\n");
            self.node(&st.child, cc, rho, a, depth + 1);
            self.strands(&st.child, cc, rho, a, step.min(0.75 * PI), depth + 1);
        }
    }
}

/// Positive half above the centre, negative half below.
pub fn svg(sp: &SnowflakeParams, pos: &SnowflakeWord, neg: &SnowflakeWord, max_depth: u32, size: u32) -> String {
    let s = f64::from(size);
    let c = (0.5 * s, 0.5 * s);
    let radius = 0.14 * s;
    let mut cv = Canvas { out: String::new(), nodes: 0, max_depth };
    let _ = writeln!(
        cv.out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(cv.out, "<title>disk for c_{}^{} with r = {}</title>", pos.vertex, pos.n, sp.slope);
    let _ = writeln!(cv.out, "<rect width=\"{size}\" height=\"{size}\" fill=\"#ffffff\"/>");
    cv.strands(pos, c, radius, -0.5 * PI, PI, 0);
    cv.strands(neg, c, radius, 0.5 * PI, PI, 0);
    cv.node(pos, c, radius, 0.0, 0);
    cv.out.push_str("</svg>\n");
    cv.out
}

//! DOT and SVG renderings of graphs and frameworks. These are illustrative
//! only; no verdict depends on them.

use std::fmt::Write as _;

use crate::error::RigidityError;
use crate::framework::{Framework, NormSpec};
use crate::graph::Graph;
use crate::polytope::{colour_framework, FrameworkColouring};

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];
const TIE_COLOUR: &str = "#7f7f7f";

/// Stroke colour for framework colour `k` (1-based).
pub fn colour_hex(k: usize) -> &'static str {
    PALETTE[(k - 1) % PALETTE.len()]
}

pub fn graph_to_dot(g: &Graph) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.vertex_count() {
        let _ = writeln!(out, "  {v};");
    }
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    out.push_str("}\n");
    out
}

fn colouring_of(f: &Framework) -> Option<FrameworkColouring> {
    match f.norm() {
        NormSpec::Polytope(_) => colour_framework(f).ok(),
        NormSpec::Lq(_) => None,
    }
}

/// Pinned vertex positions (first two coordinates) and, for polytopic norms,
/// edges coloured by their maximising facet. Tied edges are dashed grey.
pub fn framework_to_dot(f: &Framework) -> String {
    let colouring = colouring_of(f);
    let mut out = String::from("graph F {\n  node [shape=circle];\n");
    for (v, p) in f.placement().points().iter().enumerate() {
        let y = p.get(1).copied().unwrap_or(0.0);
        let _ = writeln!(out, "  {v} [pos=\"{},{}!\"];", p[0], y);
    }
    for (i, &(a, b)) in f.graph().edges().iter().enumerate() {
        match colouring.as_ref().map(|c| c.colours[i]) {
            Some(Some(k)) => {
                let _ = writeln!(
                    out,
                    "  {a} -- {b} [color=\"{}\", label=\"{k}\"];",
                    colour_hex(k)
                );
            }
            Some(None) => {
                let _ = writeln!(out, "  {a} -- {b} [color=\"{TIE_COLOUR}\", style=dashed];");
            }
            None => {
                let _ = writeln!(out, "  {a} -- {b};");
            }
        }
    }
    out.push_str("}\n");
    out
}

/// SVG drawing of the first two coordinates, with an optional flex drawn
/// as arrows (longest arrow a fifth of the drawing).
pub fn framework_to_svg(f: &Framework, flex: Option<&[f64]>) -> Result<String, RigidityError> {
    let n = f.graph().vertex_count();
    let d = f.dim();
    if let Some(u) = flex {
        if u.len() != n * d {
            return Err(RigidityError::DimensionMismatch {
                expected: n * d,
                got: u.len(),
            });
        }
    }
    let pts: Vec<(f64, f64)> = f
        .placement()
        .points()
        .iter()
        .map(|p| (p[0], p.get(1).copied().unwrap_or(0.0)))
        .collect();
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        lo_x = lo_x.min(x);
        hi_x = hi_x.max(x);
        lo_y = lo_y.min(y);
        hi_y = hi_y.max(y);
    }
    let extent = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
    let size = 400.0;
    let margin = 40.0;
    let s = (size - 2.0 * margin) / extent;
    // SVG y grows downwards.
    let at = |x: f64, y: f64| (margin + (x - lo_x) * s, size - margin - (y - lo_y) * s);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    out.push_str(
        "  <defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#000\"/></marker></defs>\n",
    );
    let colouring = colouring_of(f);
    for (i, &(a, b)) in f.graph().edges().iter().enumerate() {
        let (x1, y1) = at(pts[a].0, pts[a].1);
        let (x2, y2) = at(pts[b].0, pts[b].1);
        let (stroke, dash) = match colouring.as_ref().map(|c| c.colours[i]) {
            Some(Some(k)) => (colour_hex(k), ""),
            Some(None) => (TIE_COLOUR, " stroke-dasharray=\"6 4\""),
            None => ("#333333", ""),
        };
        let _ = writeln!(
            out,
            "  <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"{stroke}\" stroke-width=\"2\"{dash}/>"
        );
    }
    if let Some(u) = flex {
        let vel: Vec<(f64, f64)> = (0..n)
            .map(|v| (u[v * d], if d > 1 { u[v * d + 1] } else { 0.0 }))
            .collect();
        let longest = vel.iter().map(|(x, y)| x.hypot(*y)).fold(0.0, f64::max);
        if longest > 0.0 {
            let k = 0.2 * extent / longest;
            for (v, &(ux, uy)) in vel.iter().enumerate() {
                if ux.hypot(uy) <= 1e-12 * longest {
                    continue;
                }
                let (x1, y1) = at(pts[v].0, pts[v].1);
                let (x2, y2) = at(pts[v].0 + k * ux, pts[v].1 + k * uy);
                let _ = writeln!(
                    out,
                    "  <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"#000\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>"
                );
            }
        }
    }
    for (v, &(x, y)) in pts.iter().enumerate() {
        let (cx, cy) = at(x, y);
        let _ = writeln!(
            out,
            "  <circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"5\" fill=\"#fff\" stroke=\"#000\"/><text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{v}</text>",
            cx + 7.0,
            cy - 7.0
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::Placement;
    use crate::polytope::PolytopeNorm;

    fn example() -> Framework {
        let p = Placement::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 0.9],
            vec![0.0, 1.1],
        ])
        .unwrap();
        Framework::new(
            Graph::complete(4),
            p,
            NormSpec::Polytope(PolytopeNorm::linf(2)),
        )
        .unwrap()
    }

    #[test]
    fn dot_for_graph() {
        assert_eq!(
            graph_to_dot(&Graph::complete(2)),
            "graph G {\n  0;\n  1;\n  0 -- 1;\n}\n"
        );
    }

    #[test]
    fn dot_colours_edges() {
        let dot = framework_to_dot(&example());
        assert!(dot.contains("0 -- 1 [color=\"#1f77b4\", label=\"1\"]"));
        assert!(dot.contains("0 -- 3 [color=\"#d62728\", label=\"2\"]"));
        assert!(dot.contains("3 [pos=\"0,1.1!\"]"));
    }

    #[test]
    fn svg_has_edges_and_arrows() {
        let f = example();
        let u = [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0];
        let svg = framework_to_svg(&f, Some(&u)).unwrap();
        assert_eq!(svg.matches("stroke-width=\"2\"").count(), 6);
        assert_eq!(svg.matches("marker-end").count(), 2);
        assert!(framework_to_svg(&f, Some(&[1.0])).is_err());
    }
}

//! Well-positioned placements along scheme-B move sequences in the plane,
//! keeping both monochrome subgraphs spanning at every step.
//!
//! Placements are built in facet coordinates `y = (x . b_1, x . b_2)`, where
//! the norm is l-infinity and colour 1 means `|y_1| > |y_2|`, then mapped
//! back through the inverse of the facet matrix.

use nalgebra::{Matrix2, Vector2};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::RigidityError;
use crate::framework::{Framework, NormSpec, Placement};
use crate::graph::{edge, spans_all_vertices, Edge, Graph};
use crate::moves::{apply_move, Move, MoveSequence};
use crate::polytope::{colour_framework, maximising_facet, PolytopeNorm};
use crate::rng::{rng_from_seed, Rng};

/// Starting values for the "sufficiently small" quantities of each move.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacementParams {
    /// Skew of the K4 seed and offset of a split vertex.
    pub epsilon: f64,
    /// Shrink factor of a K4 relative to the local edge scale.
    pub r: f64,
    /// Relative jitter around Henneberg line intersections.
    pub delta: f64,
}

impl Default for PlacementParams {
    fn default() -> Self {
        PlacementParams {
            epsilon: 0.1,
            r: 1.0,
            delta: 1e-3,
        }
    }
}

impl PlacementParams {
    fn validate(&self) -> Result<(), RigidityError> {
        for (name, v) in [
            ("epsilon", self.epsilon),
            ("r", self.r),
            ("delta", self.delta),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(RigidityError::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    fn halved(&self, times: i32) -> PlacementParams {
        let f = 0.5f64.powi(times);
        PlacementParams {
            epsilon: self.epsilon * f,
            r: self.r * f,
            delta: self.delta * f,
        }
    }
}

type Point = [f64; 2];

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

fn scale(a: Point, s: f64) -> Point {
    [a[0] * s, a[1] * s]
}

/// Unit vector along facet coordinate `colour` (1 or 2).
fn axis(colour: usize) -> Point {
    if colour == 1 {
        [1.0, 0.0]
    } else {
        [0.0, 1.0]
    }
}

fn other(colour: usize) -> usize {
    3 - colour
}

fn colour_of(a: Point) -> Option<usize> {
    maximising_facet(&a, &PolytopeNorm::linf(2))
}

/// Gap between the dominant and the other coordinate magnitude.
fn margin(a: Point) -> f64 {
    (a[0].abs() - a[1].abs()).abs()
}

/// Signed margin towards `colour`: positive iff `a` has that colour.
fn margin_for(a: Point, colour: usize) -> f64 {
    let (hi, lo) = if colour == 1 {
        (a[0], a[1])
    } else {
        (a[1], a[0])
    };
    hi.abs() - lo.abs()
}

/// Smallest colour margin among the edges at `v`, or 1 for an isolated vertex.
fn local_scale(g: &Graph, pts: &[Point], v: usize) -> f64 {
    g.neighbours(v)
        .into_iter()
        .map(|u| margin(sub(pts[v], pts[u])))
        .fold(None, |acc: Option<f64>, m| {
            Some(acc.map_or(m, |a| a.min(m)))
        })
        .unwrap_or(1.0)
}

fn jitter(rng: &mut Rng, size: f64) -> Point {
    [
        rng.random_range(-1.0..=1.0) * size,
        rng.random_range(-1.0..=1.0) * size,
    ]
}

/// New points and the colour each edge of the new graph must have.
struct Proposal {
    points: Vec<Point>,
    expected: Vec<(Edge, usize)>,
}

/// Places a new vertex so that its edges to `p1` and `p2` have colours 1 and
/// 2: the intersection of `p1 + t b_1` with `p2 + t b_2`, moved off it when
/// that point would nearly coincide with `p1` or `p2`.
fn henneberg1_point(p1: Point, p2: Point) -> (Point, f64) {
    let d = sub(p2, p1);
    let h = d[0].abs().max(d[1].abs());
    let score = |c: Point| margin_for(sub(c, p1), 1).min(margin_for(sub(c, p2), 2));
    let corner = [p2[0], p1[1]];
    let mut best = (corner, score(corner));
    if best.1 < 0.25 * h {
        for off in [[0.5, 0.0], [-0.5, 0.0], [0.0, 0.5], [0.0, -0.5]] {
            let c = add(corner, scale(off, h));
            let s = score(c);
            if s > best.1 {
                best = (c, s);
            }
        }
    }
    best
}

/// Places a new vertex on the line through `p1, p2` (edge colour `c`) where
/// it meets `p3 + t b_{c'}`, moved along the line when that point nearly
/// coincides with `p1` or `p2`. When `p3` itself lies on that line the
/// intersection degenerates, so points `p3 + s b_{c'}` are also scored.
fn henneberg2_point(p1: Point, p2: Point, p3: Point, c: usize) -> (Point, f64) {
    let ci = c - 1;
    let d = sub(p2, p1);
    let star = (p3[ci] - p1[ci]) / d[ci];
    let at = |lam: f64| add(p1, scale(d, lam));
    let score = |p0: Point| {
        margin_for(sub(p0, p1), c)
            .min(margin_for(sub(p0, p2), c))
            .min(margin_for(sub(p0, p3), other(c)))
    };
    let residual = sub(at(star), p3)[1 - ci].abs();
    let eta = (residual / (2.0 * (d[0].abs() + d[1].abs()))).min(0.5);
    let side = 0.5 * margin(sub(p3, p1)).min(margin(sub(p3, p2)));
    let candidates = [
        at(star),
        at(star + eta),
        at(star - eta),
        add(p3, scale(axis(other(c)), side)),
        add(p3, scale(axis(other(c)), -side)),
    ];
    candidates.into_iter().map(|p0| (p0, score(p0))).fold(
        (candidates[0], f64::NEG_INFINITY),
        |best, x| if x.1 > best.1 { x } else { best },
    )
}

fn propose(
    g: &Graph,
    pts: &[Point],
    colours: &dyn Fn(usize, usize) -> usize,
    m: &Move,
    params: PlacementParams,
    rng: &mut Rng,
) -> Result<Proposal, RigidityError> {
    let n = g.vertex_count();
    let mut points = pts.to_vec();
    let mut expected: Vec<(Edge, usize)> = g
        .edges()
        .iter()
        .map(|&(a, b)| ((a, b), colours(a, b)))
        .collect();
    let reroute = |from: usize, to: usize, u: usize, expected: &mut Vec<(Edge, usize)>| {
        let c = colours(from, u);
        expected.retain(|(e, _)| *e != edge(from, u));
        expected.push((edge(to, u), c));
    };
    match m {
        &Move::Henneberg1 { v1, v2 } => {
            let (p0, s) = henneberg1_point(pts[v1], pts[v2]);
            points.push(add(p0, jitter(rng, params.delta * s)));
            expected.extend([((v1, n), 1), ((v2, n), 2)]);
        }
        &Move::Henneberg2 { v1, v2, v3 } => {
            let c = colours(v1, v2);
            let (p0, s) = henneberg2_point(pts[v1], pts[v2], pts[v3], c);
            points.push(add(p0, jitter(rng, params.delta * s)));
            expected.retain(|(e, _)| *e != edge(v1, v2));
            expected.extend([((v1, n), c), ((v2, n), c), ((v3, n), other(c))]);
        }
        Move::VertexSplit { v1, v2, reassigned } => {
            let (v1, v2) = (*v1, *v2);
            let c = colours(v1, v2);
            let h = local_scale(g, pts, v1);
            points.push(add(pts[v1], scale(axis(other(c)), params.epsilon * h)));
            for &u in reassigned {
                reroute(v1, n, u, &mut expected);
            }
            expected.extend([((v1, n), other(c)), ((v2, n), c)]);
        }
        Move::VertexToK4 { v1, assignment } => {
            let v1 = *v1;
            let h = local_scale(g, pts, v1) * params.r;
            let eps = params.epsilon;
            let base = pts[v1];
            let w2 = add(base, [h, 0.0]);
            let w3 = add(w2, [0.0, h * (1.0 - eps)]);
            let w4 = add(base, [0.0, h * (1.0 + eps)]);
            points.extend([w2, w3, w4]);
            let w = [v1, n, n + 1, n + 2];
            for (&u, &j) in assignment {
                let target = w[j as usize - 1];
                if target != v1 {
                    reroute(v1, target, u, &mut expected);
                }
            }
            // Colours of the seed K4 on w1..w4.
            for (a, b, c) in [
                (0, 1, 1),
                (0, 2, 1),
                (2, 3, 1),
                (0, 3, 2),
                (1, 2, 2),
                (1, 3, 2),
            ] {
                expected.push((edge(w[a], w[b]), c));
            }
        }
        Move::VertexToFourCycle { .. } => unreachable!("rejected before proposing"),
    }
    Ok(Proposal { points, expected })
}

/// Every edge has its expected colour and both classes span.
fn accept(g: &Graph, proposal: &Proposal) -> bool {
    let mut class1 = Vec::new();
    let mut class2 = Vec::new();
    if proposal.expected.len() != g.edge_count() {
        return false;
    }
    for &((a, b), want) in &proposal.expected {
        if !g.has_edge(a, b) {
            return false;
        }
        let d = sub(proposal.points[a], proposal.points[b]);
        match colour_of(d) {
            Some(c) if c == want => {
                if c == 1 {
                    class1.push((a, b))
                } else {
                    class2.push((a, b))
                }
            }
            _ => return false,
        }
    }
    spans_all_vertices(g, &class1).unwrap_or(false)
        && spans_all_vertices(g, &class2).unwrap_or(false)
}

/// Result of a construction: the framework and the halvings used per move.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub framework: Framework,
    pub halvings: Vec<u32>,
}

/// Builds a well-positioned placement of the graph produced by `seq` whose
/// two monochrome subgraphs span, following the colour-preserving recipe
/// for each move.
pub fn construct_coloured_placement(
    seq: &MoveSequence,
    norm: &PolytopeNorm,
    params: PlacementParams,
    seed: u64,
) -> Result<Framework, RigidityError> {
    construct_with_report(seq, norm, params, seed).map(|c| c.framework)
}

pub fn construct_with_report(
    seq: &MoveSequence,
    norm: &PolytopeNorm,
    params: PlacementParams,
    seed: u64,
) -> Result<Construction, RigidityError> {
    params.validate()?;
    if norm.dim() != 2 || norm.facet_count() != 2 {
        return Err(RigidityError::InvalidPolytope(
            "construction needs exactly two facets in the plane".into(),
        ));
    }
    let basis = Matrix2::new(
        norm.facet(1)[0],
        norm.facet(1)[1],
        norm.facet(2)[0],
        norm.facet(2)[1],
    );
    let inverse = basis.try_inverse().ok_or_else(|| {
        RigidityError::InvalidPolytope("facets must be linearly independent".into())
    })?;
    if seq.start != Graph::single_vertex() {
        return Err(RigidityError::InvalidParameter(
            "construction starts from K1".into(),
        ));
    }
    for (i, m) in seq.moves.iter().enumerate() {
        if let Move::VertexToFourCycle { .. } = m {
            return Err(RigidityError::UnsupportedMove("v4c", i));
        }
    }

    let mut rng = rng_from_seed(seed);
    let mut g = Graph::single_vertex();
    let mut pts: Vec<Point> = vec![[0.0, 0.0]];
    let mut halvings = Vec::with_capacity(seq.moves.len());
    for (index, m) in seq.moves.iter().enumerate() {
        let next = apply_move(&g, m)?;
        let current: Vec<(Edge, usize)> = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                (
                    (a, b),
                    colour_of(sub(pts[a], pts[b])).expect("well-positioned"),
                )
            })
            .collect();
        let colours = |a: usize, b: usize| {
            let e = edge(a, b);
            current
                .iter()
                .find(|(x, _)| *x == e)
                .map(|(_, c)| *c)
                .expect("edge of the current graph")
        };
        let mut attempt = 0;
        let accepted = loop {
            let p = params.halved(attempt);
            if p.epsilon.min(p.r).min(p.delta) < f64::EPSILON {
                return Err(RigidityError::ParameterUnderflow { move_index: index });
            }
            let proposal = propose(&g, &pts, &colours, m, p, &mut rng)?;
            if accept(&next, &proposal) {
                break proposal;
            }
            attempt += 1;
        };
        halvings.push(attempt as u32);
        pts = accepted.points;
        g = next;
    }

    let identity = basis == Matrix2::identity();
    let placement = Placement::new(
        pts.iter()
            .map(|y| {
                if identity {
                    y.to_vec()
                } else {
                    let x = inverse * Vector2::new(y[0], y[1]);
                    vec![x[0], x[1]]
                }
            })
            .collect(),
    )?;
    let framework = Framework::new(g, placement, NormSpec::Polytope(norm.clone()))?;
    let colouring = colour_framework(&framework)?;
    let spans = |k| spans_all_vertices(framework.graph(), &colouring.class(k)).unwrap_or(false);
    if !colouring.well_positioned || !spans(1) || !spans(2) {
        return Err(RigidityError::ParameterUnderflow {
            move_index: seq.moves.len(),
        });
    }
    Ok(Construction {
        framework,
        halvings,
    })
}

//! SVG, TikZ and JSON output, plus removal of points lying on edges.
//!
//! Plane coordinates are integers in hundredths of a grid step, so the
//! collinearity test is exact: a zero cross product and a strict
//! betweenness check in `i128`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::engine::{GridDrawing, PlanePoint, PLANE_SCALE};
use crate::order::ElemId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("invalid canvas: {0}")]
    InvalidSpec(String),
    #[error("could not move `{0}` off the edges it lies on")]
    Unresolvable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelPlacement {
    #[default]
    Right,
    Above,
    Below,
    Hidden,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanvasSpec {
    /// Pixels (SVG) or points (TikZ) per grid step.
    pub unit: f64,
    pub margin: f64,
    pub node_radius: f64,
    pub labels: LabelPlacement,
    pub font_size: f64,
}

impl Default for CanvasSpec {
    fn default() -> Self {
        CanvasSpec {
            unit: 40.0,
            margin: 30.0,
            node_radius: 5.0,
            labels: LabelPlacement::Right,
            font_size: 12.0,
        }
    }
}

impl CanvasSpec {
    pub fn validate(&self) -> Result<(), RenderError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.unit) {
            return Err(RenderError::InvalidSpec("unit must be positive".into()));
        }
        if !positive(self.node_radius) {
            return Err(RenderError::InvalidSpec("node radius must be positive".into()));
        }
        if !(self.margin.is_finite() && self.margin >= 0.0) || !positive(self.font_size) {
            return Err(RenderError::InvalidSpec("margin and font size must be finite".into()));
        }
        Ok(())
    }
}

/// A point lying in the interior of an edge it is not an endpoint of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Conflict {
    pub element: ElemId,
    pub edge: (ElemId, ElemId),
}

/// Whether `p` lies strictly between `a` and `b` on their segment.
pub fn on_open_segment(p: PlanePoint, a: PlanePoint, b: PlanePoint) -> bool {
    let (ax, ay) = (a.x as i128, a.y as i128);
    let (bx, by) = (b.x as i128, b.y as i128);
    let (px, py) = (p.x as i128, p.y as i128);
    let cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
    if cross != 0 {
        return false;
    }
    let dot_a = (px - ax) * (bx - ax) + (py - ay) * (by - ay);
    let dot_b = (px - bx) * (ax - bx) + (py - by) * (ay - by);
    dot_a > 0 && dot_b > 0
}

pub fn detect_collinear(d: &GridDrawing) -> Vec<Conflict> {
    let mut out = Vec::new();
    for (a, b) in d.cover_edges.iter() {
        for p in 0..d.len() {
            if p != a && p != b && on_open_segment(d.plane[p], d.plane[a], d.plane[b]) {
                out.push(Conflict { element: p, edge: (a, b) });
            }
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PerturbParams {
    /// Offset step in hundredths of a grid step.
    pub epsilon: i64,
    /// Multiples of `epsilon` tried in each direction.
    pub max_steps: i64,
}

impl Default for PerturbParams {
    fn default() -> Self {
        PerturbParams {
            epsilon: 15 * PLANE_SCALE / 100,
            max_steps: 4,
        }
    }
}

/// Moves conflicting points sideways until no point lies on an edge.
///
/// Only `x` changes, so every cover edge keeps rising. A move is accepted
/// when the new conflict set is a strict subset of the old one; offsets
/// `+ε, −ε, +2ε, …` are tried in turn.
pub fn perturb(
    d: &GridDrawing,
    conflicts: &[Conflict],
    params: &PerturbParams,
) -> Result<GridDrawing, RenderError> {
    let mut out = d.clone();
    let mut current: BTreeSet<Conflict> = conflicts.iter().copied().collect();
    if current.is_empty() {
        return Ok(out);
    }
    current = detect_collinear(&out).into_iter().collect();
    while let Some(&first) = current.iter().next() {
        let p = first.element;
        let origin = out.plane[p];
        let mut resolved = false;
        'search: for step in 1..=params.max_steps {
            for sign in [1, -1] {
                out.plane[p] = PlanePoint {
                    x: origin.x + sign * step * params.epsilon,
                    y: origin.y,
                };
                let collides = (0..out.len()).any(|q| q != p && out.plane[q] == out.plane[p]);
                let next: BTreeSet<Conflict> = detect_collinear(&out).into_iter().collect();
                if !collides && next.is_subset(&current) && next.len() < current.len() {
                    current = next;
                    resolved = true;
                    break 'search;
                }
            }
        }
        if !resolved {
            return Err(RenderError::Unresolvable(out.labels[p].clone()));
        }
    }
    Ok(out)
}

/// Detection followed by perturbation with default parameters.
pub fn postprocess(d: &GridDrawing) -> Result<GridDrawing, RenderError> {
    perturb(d, &detect_collinear(d), &PerturbParams::default())
}

struct Frame {
    min_x: i64,
    max_y: i64,
    width: f64,
    height: f64,
}

fn frame(d: &GridDrawing, spec: &CanvasSpec) -> Frame {
    let min_x = d.plane.iter().map(|p| p.x).min().unwrap_or(0);
    let max_x = d.plane.iter().map(|p| p.x).max().unwrap_or(0);
    let min_y = d.plane.iter().map(|p| p.y).min().unwrap_or(0);
    let max_y = d.plane.iter().map(|p| p.y).max().unwrap_or(0);
    let span = |lo: i64, hi: i64| (hi - lo) as f64 / PLANE_SCALE as f64 * spec.unit + 2.0 * spec.margin;
    Frame {
        min_x,
        max_y,
        width: span(min_x, max_x),
        height: span(min_y, max_y),
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// SVG with the y axis flipped so that larger elements appear higher.
pub fn emit_svg(d: &GridDrawing, spec: &CanvasSpec) -> Result<String, RenderError> {
    spec.validate()?;
    let f = frame(d, spec);
    let to_px = |p: PlanePoint| {
        (
            spec.margin + (p.x - f.min_x) as f64 / PLANE_SCALE as f64 * spec.unit,
            spec.margin + (f.max_y - p.y) as f64 / PLANE_SCALE as f64 * spec.unit,
        )
    };
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\">",
        w = f.width,
        h = f.height
    );
    s.push_str("<g stroke=\"black\" stroke-width=\"1\">\n");
    for (a, b) in d.cover_edges.iter() {
        let ((x1, y1), (x2, y2)) = (to_px(d.plane[a]), to_px(d.plane[b]));
        let _ = writeln!(s, "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\"/>");
    }
    s.push_str("</g>\n<g fill=\"white\" stroke=\"black\" stroke-width=\"1\">\n");
    for &p in &d.plane {
        let (cx, cy) = to_px(p);
        let _ = writeln!(s, "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{:.2}\"/>", spec.node_radius);
    }
    s.push_str("</g>\n");
    if spec.labels != LabelPlacement::Hidden {
        let _ = writeln!(s, "<g font-family=\"sans-serif\" font-size=\"{:.2}\">", spec.font_size);
        for (i, &p) in d.plane.iter().enumerate() {
            let (cx, cy) = to_px(p);
            let r = spec.node_radius;
            let (x, y, anchor) = match spec.labels {
                LabelPlacement::Right => (cx + r + 2.0, cy + spec.font_size / 3.0, "start"),
                LabelPlacement::Above => (cx, cy - r - 3.0, "middle"),
                _ => (cx, cy + r + spec.font_size, "middle"),
            };
            let _ = writeln!(
                s,
                "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\">{}</text>",
                xml_escape(&d.labels[i])
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn tex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '{' | '}' | '_' | '#' | '&' | '%' | '$' => {
                out.push('\\');
                out.push(c);
            }
            '\\' => out.push_str("\\textbackslash{}"),
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            _ => out.push(c),
        }
    }
    out
}

/// Standalone TikZ picture; `unit` is read as points per grid step.
pub fn emit_tikz(d: &GridDrawing, spec: &CanvasSpec) -> Result<String, RenderError> {
    spec.validate()?;
    let coord = |p: PlanePoint| {
        let (x, y) = p.to_f64();
        format!("({x:.2},{y:.2})")
    };
    let mut s = String::new();
    s.push_str("\\documentclass[tikz]{standalone}\n\\begin{document}\n");
    let _ = writeln!(s, "\\begin{{tikzpicture}}[x={u:.2}pt,y={u:.2}pt]", u = spec.unit);
    for (a, b) in d.cover_edges.iter() {
        let _ = writeln!(s, "  \\draw {} -- {};", coord(d.plane[a]), coord(d.plane[b]));
    }
    let label_pos = match spec.labels {
        LabelPlacement::Right => Some("right"),
        LabelPlacement::Above => Some("above"),
        LabelPlacement::Below => Some("below"),
        LabelPlacement::Hidden => None,
    };
    for (i, &p) in d.plane.iter().enumerate() {
        let label = label_pos
            .map(|pos| format!(",label={pos}:{{{}}}", tex_escape(&d.labels[i])))
            .unwrap_or_default();
        let _ = writeln!(
            s,
            "  \\node[circle,draw,fill=white,inner sep=0pt,minimum size={:.2}pt{label}] (v{i}) at {} {{}};",
            2.0 * spec.node_radius,
            coord(p)
        );
    }
    s.push_str("\\end{tikzpicture}\n\\end{document}\n");
    Ok(s)
}

#[derive(Serialize)]
struct JsonElement<'a> {
    id: usize,
    label: &'a str,
    grid: [usize; 2],
    plane: [f64; 2],
}

#[derive(Serialize)]
struct JsonDrawing<'a> {
    elements: Vec<JsonElement<'a>>,
    cover_edges: Vec<[usize; 2]>,
    inserted_pairs: Vec<[usize; 2]>,
    passes: usize,
    removed_per_pass: Vec<Vec<[usize; 2]>>,
    methods: &'a [crate::oct::OctMethod],
}

/// The JSON drawing dump. Pairs are element ids; `inserted_pairs` lists
/// `(a, b)` with `a < b` added by the extension.
pub fn emit_json(d: &GridDrawing) -> String {
    let pair = |(a, b): (usize, usize)| [a, b];
    let doc = JsonDrawing {
        elements: (0..d.len())
            .map(|i| {
                let (x, y) = d.plane[i].to_f64();
                JsonElement {
                    id: i,
                    label: &d.labels[i],
                    grid: [d.coords[i].0, d.coords[i].1],
                    plane: [x, y],
                }
            })
            .collect(),
        cover_edges: d.cover_edges.iter().map(pair).collect(),
        inserted_pairs: d.extension.pairs.iter().map(pair).collect(),
        passes: d.extension.passes,
        removed_per_pass: d
            .extension
            .removed_per_pass
            .iter()
            .map(|r| r.iter().copied().map(pair).collect())
            .collect(),
        methods: &d.extension.methods,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("drawing serializes");
    s.push('\n');
    s
}

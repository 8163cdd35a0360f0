//! Static SVG renderings of street rectangles and plane-diagram trees.

use std::fmt::Write;

use streetflow::builder::{Event, MorseTree};
use streetflow::streets::{Street, StreetTriple};
use streetflow::{FoliationSpec, Plane};

const PANEL_W: f64 = 480.0;
const PANEL_H: f64 = 240.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 3] = ["#d95f02", "#1b9e77", "#7570b3"];

fn header(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\" font-family=\"monospace\" font-size=\"11\">\n"
    )
}

/// One panel per plane: each street drawn over its slit interval with a
/// height proportional to its flow time.
pub fn streets(spec: &FoliationSpec, t1: &StreetTriple, t2: &StreetTriple) -> String {
    let m = spec.m.to_f64();
    let mut out = header(2.0 * PANEL_W + 3.0 * MARGIN, PANEL_H + 3.0 * MARGIN);
    for (k, t) in [t1, t2].into_iter().enumerate() {
        let (a, b) = spec.torus(t.plane);
        let costs: Vec<f64> = Street::ORDER.iter().map(|&s| t.height(s).flow_cost(a, b).to_f64()).collect();
        let top = costs.iter().cloned().fold(f64::MIN, f64::max);
        let x0 = MARGIN + k as f64 * (PANEL_W + MARGIN);
        let base = MARGIN + PANEL_H;
        let plane = if t.plane == Plane::One { 1 } else { 2 };
        let _ = writeln!(out, "  <text x=\"{x0:.1}\" y=\"{:.1}\">plane {plane}, m = {}</text>", MARGIN - 16.0, spec.m);
        for (i, &s) in Street::ORDER.iter().enumerate() {
            let iv = t.interval(s);
            let x = x0 + iv.lo.to_f64() / m * PANEL_W;
            let w = iv.measure().to_f64() / m * PANEL_W;
            let h = costs[i] / top * PANEL_H;
            let hv = t.height(s);
            let _ = writeln!(
                out,
                "  <rect x=\"{x:.2}\" y=\"{:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{}\" fill-opacity=\"0.5\" stroke=\"black\"/>",
                base - h,
                COLORS[i]
            );
            let _ = writeln!(
                out,
                "  <text x=\"{:.2}\" y=\"{:.2}\">street {} ({}, {})</text>",
                x + 2.0,
                base - h - 4.0,
                s.label(),
                hv.p,
                hv.q
            );
        }
        let _ = writeln!(
            out,
            "  <line x1=\"{x0:.1}\" y1=\"{base:.1}\" x2=\"{:.1}\" y2=\"{base:.1}\" stroke=\"black\" stroke-width=\"2\"/>",
            x0 + PANEL_W
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Horizontal slot of every vertex: leaves in DFS order from vertex 0,
/// inner vertices at the mean of their subtree.
fn layout(tree: &MorseTree) -> Vec<f64> {
    let n = tree.heights.len();
    let mut adj = vec![Vec::new(); n];
    for e in &tree.edges {
        adj[e.lower].push(e.upper);
        adj[e.upper].push(e.lower);
    }
    let mut x = vec![0.0; n];
    let mut next = 0.0;
    fn visit(v: usize, parent: Option<usize>, adj: &[Vec<usize>], x: &mut [f64], next: &mut f64) {
        let kids: Vec<usize> = adj[v].iter().copied().filter(|&u| Some(u) != parent).collect();
        if kids.is_empty() {
            x[v] = *next;
            *next += 1.0;
            return;
        }
        let mut sum = 0.0;
        for &u in &kids {
            visit(u, Some(v), adj, x, next);
            sum += x[u];
        }
        x[v] = sum / kids.len() as f64;
    }
    visit(0, None, &adj, &mut x, &mut next);
    let slots = next.max(1.0);
    x.iter().map(|s| (s + 0.5) / slots).collect()
}

fn draw_tree(out: &mut String, tree: &MorseTree, x0: f64, y0: f64, w: f64, h: f64) {
    let hs: Vec<f64> = tree.heights.iter().map(|s| s.to_f64()).collect();
    let lo = hs.iter().cloned().fold(f64::MAX, f64::min);
    let hi = hs.iter().cloned().fold(f64::MIN, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let y = |t: f64| y0 + h - (t - lo) / span * h;
    let xs: Vec<f64> = layout(tree).into_iter().map(|f| x0 + f * w).collect();
    for e in &tree.edges {
        let (xa, ya, xb, yb) = (xs[e.lower], y(hs[e.lower]), xs[e.upper], y(hs[e.upper]));
        let _ = writeln!(out, "  <line x1=\"{xa:.2}\" y1=\"{ya:.2}\" x2=\"{xb:.2}\" y2=\"{yb:.2}\" stroke=\"black\"/>");
        let markers: Vec<String> = e.bottom.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "  <text x=\"{:.2}\" y=\"{:.2}\">[{}]</text>", xa + 4.0, ya - 4.0, markers.join(" "));
        for ev in &e.events {
            let t = ev.height().to_f64();
            let f = if yb != ya { (y(t) - ya) / (yb - ya) } else { 0.5 };
            let ex = xa + f * (xb - xa);
            let (fill, sign) = match ev {
                Event::Appear { .. } => ("white", "+"),
                Event::Disappear { .. } => ("black", "-"),
            };
            let _ = writeln!(out, "  <circle cx=\"{ex:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{fill}\" stroke=\"black\"/>", y(t));
            let _ = writeln!(out, "  <text x=\"{:.2}\" y=\"{:.2}\">{sign}{}</text>", ex + 5.0, y(t) + 4.0, ev.marker());
        }
    }
    for (i, (&x, &t)) in xs.iter().zip(&hs).enumerate() {
        let _ = writeln!(out, "  <circle cx=\"{x:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"#1b9e77\"/>", y(t));
        let _ = writeln!(out, "  <text x=\"{:.2}\" y=\"{:.2}\">v{i}</text>", x - 20.0, y(t) + 4.0);
    }
}

pub fn tree(tree: &MorseTree) -> String {
    trees(&[(String::new(), tree.clone())])
}

/// Several trees side by side, each with an optional caption.
pub fn trees(items: &[(String, MorseTree)]) -> String {
    let n = items.len().max(1) as f64;
    let mut out = header(n * (PANEL_W + MARGIN) + MARGIN, PANEL_H + 3.0 * MARGIN);
    for (k, (caption, t)) in items.iter().enumerate() {
        let x0 = MARGIN + k as f64 * (PANEL_W + MARGIN);
        if !caption.is_empty() {
            let _ = writeln!(out, "  <text x=\"{x0:.1}\" y=\"{:.1}\">{caption}</text>", MARGIN - 16.0);
        }
        draw_tree(&mut out, t, x0, MARGIN, PANEL_W, PANEL_H);
    }
    out.push_str("</svg>\n");
    out
}

//! Building data for higher genus: a plane diagram on the sphere, a torus per
//! transversal segment, and the surface obtained by gluing them.
//!
//! The sphere is described by its Morse tree: vertices are centers (leaves)
//! and saddles (trivalent), each with a height. Every edge carries the cyclic
//! list of segments met by a level circle, written just above its lower
//! vertex, followed by the heights where segments start or stop on that edge.

pub mod flux;
pub mod generator;
pub mod minimal;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Event {
    /// Segment `marker` starts here and is inserted at `position` of the cyclic list.
    Appear { height: Scalar, marker: u32, position: usize },
    /// Segment `marker` stops here.
    Disappear { height: Scalar, marker: u32 },
}

impl Event {
    pub fn height(&self) -> &Scalar {
        match self {
            Event::Appear { height, .. } | Event::Disappear { height, .. } => height,
        }
    }

    pub fn marker(&self) -> u32 {
        match self {
            Event::Appear { marker, .. } | Event::Disappear { marker, .. } => *marker,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub lower: usize,
    pub upper: usize,
    pub bottom: Vec<u32>,
    #[serde(default)]
    pub events: Vec<Event>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseTree {
    pub heights: Vec<Scalar>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusData {
    pub a: Scalar,
    pub b: Scalar,
    pub m: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingData {
    pub tree: MorseTree,
    pub tori: Vec<TorusData>,
}

/// Kind of saddle of the glued surface, with its cyclic index tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "indices", rename_all = "snake_case")]
pub enum Saddle {
    /// `<jjkk>`, produced by a center.
    DoubleBoundary([u32; 4]),
    /// `<jjkl>`, produced by a free end of segment `j`.
    Boundary([u32; 4]),
    /// `<jklm>`, a saddle of the sphere.
    Sphere([u32; 4]),
}

impl Saddle {
    pub fn indices(&self) -> [u32; 4] {
        match self {
            Saddle::DoubleBoundary(x) | Saddle::Boundary(x) | Saddle::Sphere(x) => *x,
        }
    }
}

/// Cyclic 4-tuples are equal up to rotation.
pub fn same_saddle_type(x: [u32; 4], y: [u32; 4]) -> bool {
    (0..4).any(|k| {
        let mut r = x;
        r.rotate_left(k);
        r == y
    })
}

impl fmt::Display for Saddle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.indices();
        write!(f, "<{a} {b} {c} {d}>")
    }
}

/// Named failure of a building-data condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: &'static str,
    pub detail: String,
}

fn v(condition: &'static str, detail: impl Into<String>) -> Violation {
    Violation { condition, detail: detail.into() }
}

/// Where each segment starts and stops.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentSpan {
    pub marker: u32,
    pub lower: Scalar,
    pub upper: Scalar,
    pub lower_at_center: bool,
    pub upper_at_center: bool,
}

impl SegmentSpan {
    pub fn measure(&self) -> Scalar {
        &self.upper - &self.lower
    }
}

/// Everything read off a consistent diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramAnalysis {
    pub genus: usize,
    pub spans: Vec<SegmentSpan>,
    pub saddles: Vec<Saddle>,
    pub centers: Vec<(usize, [u32; 2])>,
    pub inner: Vec<usize>,
}

fn is_rotation(x: &[u32], y: &[u32]) -> bool {
    x.len() == y.len() && (x.is_empty() || (0..x.len()).any(|k| x.iter().cycle().skip(k).take(x.len()).eq(y.iter())))
}

/// Cut points when `whole` is the cyclic concatenation of arcs `p` and `q`:
/// the sphere saddle sees the segments on both sides of both cuts.
fn arc_saddle(p: &[u32], q: &[u32]) -> [u32; 4] {
    [p[p.len() - 1], q[0], q[q.len() - 1], p[0]]
}

impl MorseTree {
    fn degree(&self) -> Vec<usize> {
        let mut d = vec![0; self.heights.len()];
        for e in &self.edges {
            d[e.lower] += 1;
            d[e.upper] += 1;
        }
        d
    }

    /// Tree shape and height conditions.
    pub fn shape_violations(&self) -> Vec<Violation> {
        let n = self.heights.len();
        let mut out = Vec::new();
        if n < 2 {
            out.push(v("tree", "a tree needs at least two vertices"));
            return out;
        }
        if self.edges.len() + 1 != n {
            out.push(v("tree", format!("{} vertices but {} edges", n, self.edges.len())));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.lower >= n || e.upper >= n {
                out.push(v("tree", format!("edge {i} names a missing vertex")));
                return out;
            }
            if self.heights[e.lower] >= self.heights[e.upper] {
                out.push(v("monotone", format!("edge {i} does not go up")));
            }
        }
        // connectivity by union-find
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.lower), find(&mut parent, e.upper));
            if a == b {
                out.push(v("tree", "the graph has a cycle"));
            }
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        if (0..n).any(|x| find(&mut parent, x) != root) {
            out.push(v("tree", "the graph is disconnected"));
        }
        let deg = self.degree();
        for (i, d) in deg.iter().enumerate() {
            if *d != 1 && *d != 3 {
                out.push(v("trivalent", format!("vertex {i} has degree {d}")));
            }
        }
        let mut hs = self.heights.clone();
        hs.sort();
        if hs.windows(2).any(|w| w[0] == w[1]) {
            out.push(v("distinct_heights", "two vertices share a height"));
        }
        for (i, &d) in deg.iter().enumerate() {
            if d == 3 {
                let up = self.edges.iter().any(|e| e.lower == i);
                let down = self.edges.iter().any(|e| e.upper == i);
                if !(up && down) {
                    out.push(v("saddle_height", format!("saddle {i} is not between its neighbours")));
                }
            }
        }
        out
    }

    /// Run the level-set bookkeeping. Returns the analysis or every violation found.
    pub fn analyze(&self) -> std::result::Result<DiagramAnalysis, Vec<Violation>> {
        let mut out = self.shape_violations();
        if !out.is_empty() {
            return Err(out);
        }
        let n = self.heights.len();
        let deg = self.degree();

        // condition a: every event strictly inside its edge, all heights distinct
        let mut all_heights: Vec<Scalar> = self.heights.clone();
        for (i, e) in self.edges.iter().enumerate() {
            let (lo, hi) = (&self.heights[e.lower], &self.heights[e.upper]);
            for ev in &e.events {
                if ev.height() <= lo || ev.height() >= hi {
                    out.push(v("a", format!("event of segment {} on edge {i} is not inside the edge", ev.marker())));
                }
                all_heights.push(ev.height().clone());
            }
            if e.events.windows(2).any(|w| w[0].height() >= w[1].height()) {
                out.push(v("a", format!("events on edge {i} are not in increasing height")));
            }
        }
        all_heights.sort();
        if all_heights.windows(2).any(|w| w[0] == w[1]) {
            out.push(v("a", "a segment end shares its height with a saddle, center or another end"));
        }

        let mut lower: BTreeMap<u32, (Scalar, bool)> = BTreeMap::new();
        let mut upper: BTreeMap<u32, (Scalar, bool)> = BTreeMap::new();
        let mut saddles = Vec::new();
        let mut centers = Vec::new();
        let mut tops: Vec<Vec<u32>> = Vec::with_capacity(self.edges.len());

        for (i, e) in self.edges.iter().enumerate() {
            if e.bottom.is_empty() {
                out.push(v("b", format!("edge {i} starts with no segment")));
            }
            let mut cur = e.bottom.clone();
            for ev in &e.events {
                match ev {
                    Event::Appear { height, marker, position } => {
                        if cur.contains(marker) || lower.contains_key(marker) {
                            out.push(v("psi", format!("segment {marker} starts twice")));
                            continue;
                        }
                        if *position > cur.len() {
                            out.push(v("psi", format!("segment {marker} inserted past the end")));
                            continue;
                        }
                        cur.insert(*position, *marker);
                        lower.insert(*marker, (height.clone(), false));
                        let k = cur.len();
                        let p = cur.iter().position(|x| x == marker).unwrap();
                        saddles.push(Saddle::Boundary([*marker, *marker, cur[(p + 1) % k], cur[(p + k - 1) % k]]));
                    }
                    Event::Disappear { height, marker } => {
                        let Some(p) = cur.iter().position(|x| x == marker) else {
                            out.push(v("psi", format!("segment {marker} stops on edge {i} without being there")));
                            continue;
                        };
                        let k = cur.len();
                        saddles.push(Saddle::Boundary([*marker, *marker, cur[(p + 1) % k], cur[(p + k - 1) % k]]));
                        cur.remove(p);
                        if upper.insert(*marker, (height.clone(), false)).is_some() {
                            out.push(v("psi", format!("segment {marker} stops twice")));
                        }
                    }
                }
                if cur.is_empty() {
                    out.push(v("b", format!("level circles on edge {i} meet no segment above height {}", ev.height())));
                }
            }
            tops.push(cur);
        }

        let mut inner = Vec::new();
        for x in 0..n {
            let ups: Vec<usize> = (0..self.edges.len()).filter(|&i| self.edges[i].lower == x).collect();
            let downs: Vec<usize> = (0..self.edges.len()).filter(|&i| self.edges[i].upper == x).collect();
            let h = &self.heights[x];
            if deg[x] == 1 {
                let list = if let Some(&i) = ups.first() { &self.edges[i].bottom } else { &tops[downs[0]] };
                if list.len() != 2 {
                    out.push(v("center", format!("center {x} meets {} segments, not 2", list.len())));
                    continue;
                }
                let pair = [list[0], list[1]];
                let ends = if ups.is_empty() { &mut upper } else { &mut lower };
                for m in pair {
                    if ends.insert(m, (h.clone(), true)).is_some() {
                        out.push(v("psi", format!("segment {m} has two ends of one kind")));
                    }
                }
                centers.push((x, pair));
                saddles.push(Saddle::DoubleBoundary([pair[0], pair[0], pair[1], pair[1]]));
                continue;
            }
            inner.push(x);
            let (whole, p, q) = if downs.len() == 1 {
                (tops[downs[0]].clone(), self.edges[ups[0]].bottom.clone(), self.edges[ups[1]].bottom.clone())
            } else {
                (self.edges[ups[0]].bottom.clone(), tops[downs[0]].clone(), tops[downs[1]].clone())
            };
            let joined: Vec<u32> = p.iter().chain(q.iter()).copied().collect();
            if p.is_empty() || q.is_empty() || !is_rotation(&whole, &joined) {
                out.push(v("psi", format!("saddle {x} does not split its circle into two arcs")));
                continue;
            }
            saddles.push(Saddle::Sphere(arc_saddle(&p, &q)));
        }

        let markers: BTreeSet<u32> = lower.keys().chain(upper.keys()).copied().collect();
        let genus = markers.len();
        if markers.iter().copied().ne(1..=genus as u32) {
            out.push(v("psi", "segments must be numbered 1..g"));
        }
        let mut spans = Vec::new();
        for m in &markers {
            match (lower.get(m), upper.get(m)) {
                (Some((lo, lc)), Some((hi, hc))) => {
                    if hi <= lo {
                        out.push(v("measure", format!("segment {m} has nonpositive measure")));
                    }
                    spans.push(SegmentSpan {
                        marker: *m,
                        lower: lo.clone(),
                        upper: hi.clone(),
                        lower_at_center: *lc,
                        upper_at_center: *hc,
                    });
                }
                _ => out.push(v("psi", format!("segment {m} is missing an end"))),
            }
        }
        if out.is_empty() {
            Ok(DiagramAnalysis { genus, spans, saddles, centers, inner })
        } else {
            Err(out)
        }
    }
}

impl BuildingData {
    /// Conditions on the diagram plus the torus measures.
    pub fn validate(&self) -> Vec<Violation> {
        let analysis = match self.tree.analyze() {
            Ok(a) => a,
            Err(vs) => return vs,
        };
        let mut out = Vec::new();
        if self.tori.len() != analysis.genus {
            out.push(v("tori", format!("{} tori for {} segments", self.tori.len(), analysis.genus)));
            return out;
        }
        for (span, t) in analysis.spans.iter().zip(&self.tori) {
            let j = span.marker;
            if !t.a.is_positive() || !t.b.is_positive() || !t.m.is_positive() {
                out.push(v("torus_positive", format!("torus {j} has a nonpositive measure")));
            }
            if t.m != span.measure() {
                out.push(v("measure_match", format!("torus {j} has m = {} but segment {j} has {}", t.m, span.measure())));
            }
            if &t.a + &t.b <= t.m {
                out.push(v("torus_range", format!("torus {j}: |a| + |b| <= m")));
            }
        }
        out
    }

    pub fn glue(&self) -> Result<GluedSurface> {
        let vs = self.validate();
        if !vs.is_empty() {
            return Err(Error::InvalidSpec(vs.into_iter().map(|x| format!("{}: {}", x.condition, x.detail)).collect()));
        }
        let a = self.tree.analyze().expect("validated");
        let g = a.genus;
        let t = a.centers.len();
        let r = a.inner.len();
        if a.saddles.len() != 2 * g - 2 {
            return Err(Error::Inconsistent(format!("{} saddles for genus {g}", a.saddles.len())));
        }
        if t != r + 2 {
            return Err(Error::Inconsistent(format!("t = {t}, r = {r}")));
        }
        classify_counts(g, t, r)?;
        Ok(GluedSurface { genus: g, t, r, saddles: a.saddles, center_pairs: a.centers.iter().map(|c| c.1).collect() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluedSurface {
    pub genus: usize,
    /// Double-boundary saddles (one per center).
    pub t: usize,
    /// Saddles of the sphere.
    pub r: usize,
    pub saddles: Vec<Saddle>,
    /// The two segments meeting at each center.
    pub center_pairs: Vec<[u32; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub genus: usize,
    pub t: usize,
    pub r: usize,
    pub minimal: bool,
    pub simple: bool,
    pub maximal: bool,
    /// Segments with an end at some center.
    pub selected: Vec<u32>,
    /// Lengths of the closed chains of paired boundary saddles, halved.
    pub cycle_type: Vec<usize>,
}

/// Rank and class from the saddle counts alone.
pub fn classify_counts(g: usize, t: usize, r: usize) -> Result<(bool, bool, bool)> {
    let maximal = g >= 2 && r + 2 == g && t == g;
    if maximal && g % 2 == 1 {
        return Err(Error::Classification(format!("a maximal type needs even genus, got g = {g}")));
    }
    Ok((r == 0, t == 2, maximal))
}

impl GluedSurface {
    pub fn classify(&self) -> Result<Classification> {
        let (minimal, simple, maximal) = classify_counts(self.genus, self.t, self.r)?;
        let mut selected: Vec<u32> = self.center_pairs.iter().flatten().copied().collect();
        selected.sort();
        selected.dedup();
        Ok(Classification {
            genus: self.genus,
            t: self.t,
            r: self.r,
            minimal,
            simple,
            maximal,
            selected,
            cycle_type: self.cycle_type()?,
        })
    }

    /// Closed chains in the graph whose vertices are segments and whose edges are centers.
    pub fn cycle_type(&self) -> Result<Vec<usize>> {
        let mut adj: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, [x, y]) in self.center_pairs.iter().enumerate() {
            adj.entry(*x).or_default().push(i);
            adj.entry(*y).or_default().push(i);
        }
        let mut used = vec![false; self.center_pairs.len()];
        let mut cycles = Vec::new();
        for start in 0..self.center_pairs.len() {
            if used[start] {
                continue;
            }
            // walk the component; it is a cycle iff every vertex has degree 2
            let mut stack = vec![start];
            let mut edges = 0;
            let mut verts = BTreeSet::new();
            used[start] = true;
            while let Some(e) = stack.pop() {
                edges += 1;
                for x in self.center_pairs[e] {
                    verts.insert(x);
                    for &f in &adj[&x] {
                        if !used[f] {
                            used[f] = true;
                            stack.push(f);
                        }
                    }
                }
            }
            if verts.iter().all(|x| adj[x].len() == 2) {
                if edges % 2 == 1 {
                    return Err(Error::Inconsistent(format!("odd cycle of {edges} boundary saddles")));
                }
                cycles.push(edges / 2);
            }
        }
        cycles.sort_unstable_by(|a, b| b.cmp(a));
        Ok(cycles)
    }
}

/// Tori whose measures match a diagram: `|a| = |b| = m_j`.
pub fn matching_tori(tree: &MorseTree) -> Result<Vec<TorusData>> {
    let a = tree.analyze().map_err(|vs| Error::InvalidSpec(vs.into_iter().map(|x| x.detail).collect()))?;
    Ok(a.spans.iter().map(|s| TorusData { a: s.measure(), b: s.measure(), m: s.measure() }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn single_edge(bottom: Vec<u32>, events: Vec<Event>) -> MorseTree {
        MorseTree { heights: vec![h(0), h(10)], edges: vec![Edge { lower: 0, upper: 1, bottom, events }] }
    }

    #[test]
    fn genus_two_minimal() {
        let tree = single_edge(vec![1, 2], vec![]);
        let data = BuildingData { tori: matching_tori(&tree).unwrap(), tree };
        assert!(data.validate().is_empty());
        let s = data.glue().unwrap();
        assert_eq!((s.genus, s.t, s.r, s.saddles.len()), (2, 2, 0, 2));
        assert!(matches!(s.saddles[0], Saddle::DoubleBoundary(_)));
        let c = s.classify().unwrap();
        assert!(c.minimal && c.simple);
        assert_eq!(c.cycle_type, [1]);
    }

    #[test]
    fn segment_end_at_saddle_height_breaks_condition_a() {
        // saddle at height 5 and a segment stopping at height 5
        let tree = MorseTree {
            heights: vec![h(0), h(5), h(10), h(12)],
            edges: vec![
                Edge { lower: 0, upper: 1, bottom: vec![1, 2], events: vec![Event::Appear { height: h(2), marker: 3, position: 1 }] },
                Edge { lower: 1, upper: 2, bottom: vec![1, 3], events: vec![] },
                Edge { lower: 1, upper: 3, bottom: vec![2], events: vec![Event::Disappear { height: h(5), marker: 2 }] },
            ],
        };
        let vs = tree.analyze().unwrap_err();
        assert!(vs.iter().any(|x| x.condition == "a"));
    }

    #[test]
    fn empty_band_breaks_condition_b() {
        let tree = single_edge(vec![1, 2], vec![Event::Disappear { height: h(3), marker: 1 }, Event::Disappear { height: h(4), marker: 2 }]);
        let vs = tree.analyze().unwrap_err();
        assert!(vs.iter().any(|x| x.condition == "b"));
    }

    #[test]
    fn mismatched_torus_measure() {
        let tree = single_edge(vec![1, 2], vec![]);
        let mut tori = matching_tori(&tree).unwrap();
        tori[1].m = h(3);
        let vs = BuildingData { tree, tori }.validate();
        assert_eq!(vs[0].condition, "measure_match");
    }

    #[test]
    fn odd_maximal_is_rejected() {
        assert!(matches!(classify_counts(3, 3, 1), Err(Error::Classification(_))));
        assert!(matches!(classify_counts(5, 5, 3), Err(Error::Classification(_))));
        assert_eq!(classify_counts(4, 4, 2).unwrap(), (false, false, true));
        assert_eq!(classify_counts(2, 2, 0).unwrap(), (true, true, true));
    }

    #[test]
    fn three_centers_around_one_saddle_cannot_be_built() {
        // one saddle, three centers, three segments: the two lower centers need four lower ends
        let tree = MorseTree {
            heights: vec![h(0), h(1), h(5), h(10)],
            edges: vec![
                Edge { lower: 0, upper: 2, bottom: vec![1, 2], events: vec![] },
                Edge { lower: 1, upper: 2, bottom: vec![3, 1], events: vec![] },
                Edge { lower: 2, upper: 3, bottom: vec![1, 2, 3, 1], events: vec![] },
            ],
        };
        assert!(tree.analyze().is_err());
    }

    fn genus_four_maximal(top: [Vec<u32>; 2]) -> BuildingData {
        let [t1, t2] = top;
        let tree = MorseTree {
            heights: vec![h(0), h(1), h(3), h(6), h(9), h(10)],
            edges: vec![
                Edge { lower: 0, upper: 2, bottom: vec![1, 2], events: vec![] },
                Edge { lower: 1, upper: 2, bottom: vec![3, 4], events: vec![] },
                Edge { lower: 2, upper: 3, bottom: vec![1, 2, 3, 4], events: vec![] },
                Edge { lower: 3, upper: 4, bottom: t1, events: vec![] },
                Edge { lower: 3, upper: 5, bottom: t2, events: vec![] },
            ],
        };
        BuildingData { tori: matching_tori(&tree).unwrap(), tree }
    }

    #[test]
    fn genus_four_maximal_cycle_types() {
        let one_cycle = genus_four_maximal([vec![2, 3], vec![4, 1]]).glue().unwrap().classify().unwrap();
        assert!(one_cycle.maximal && !one_cycle.minimal);
        assert_eq!((one_cycle.t, one_cycle.r), (4, 2));
        assert_eq!(one_cycle.cycle_type, [2]);
        let two_cycles = genus_four_maximal([vec![1, 2], vec![3, 4]]).glue().unwrap().classify().unwrap();
        assert_eq!(two_cycles.cycle_type, [1, 1]);
    }

    #[test]
    fn saddle_types_are_cyclic() {
        assert!(same_saddle_type([1, 1, 2, 2], [2, 1, 1, 2]));
        assert!(!same_saddle_type([1, 2, 1, 2], [1, 1, 2, 2]));
    }
}

//! Random plane diagrams from a sweep of level circles.
//!
//! The sweep keeps a list of open edges, each with its current cyclic list of
//! segments, and applies births, segment ends, splits, merges and caps at
//! increasing integer heights. Every open circle keeps at least two
//! segments, so any of them can be capped.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{BuildingData, Edge, Event, MorseTree, TorusData};
use crate::scalar::Scalar;

struct Open {
    lower: usize,
    bottom: Vec<u32>,
    cur: Vec<u32>,
    events: Vec<Event>,
    comp: usize,
}

struct Sweep {
    heights: Vec<Scalar>,
    edges: Vec<Edge>,
    open: Vec<Open>,
    /// union-find over components
    parent: Vec<usize>,
    next_marker: u32,
    clock: i64,
}

impl Sweep {
    fn tick(&mut self) -> Scalar {
        self.clock += 1;
        Scalar::from_int(self.clock)
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }

    fn vertex(&mut self) -> usize {
        let h = self.tick();
        self.heights.push(h);
        self.heights.len() - 1
    }

    fn fresh(&mut self) -> u32 {
        self.next_marker += 1;
        self.next_marker
    }

    fn birth(&mut self) {
        let v = self.vertex();
        let (x, y) = (self.fresh(), self.fresh());
        let comp = self.parent.len();
        self.parent.push(comp);
        self.open.push(Open { lower: v, bottom: vec![x, y], cur: vec![x, y], events: vec![], comp });
    }

    fn close(&mut self, i: usize, upper: usize) -> Open {
        let o = self.open.swap_remove(i);
        self.edges.push(Edge { lower: o.lower, upper, bottom: o.bottom.clone(), events: o.events.clone() });
        o
    }

    fn appear<R: Rng>(&mut self, i: usize, rng: &mut R) {
        let h = self.tick();
        let marker = self.fresh();
        let position = rng.gen_range(0..=self.open[i].cur.len());
        self.open[i].cur.insert(position, marker);
        self.open[i].events.push(Event::Appear { height: h, marker, position });
    }

    fn disappear(&mut self, i: usize, k: usize) {
        let h = self.tick();
        let marker = self.open[i].cur.remove(k);
        self.open[i].events.push(Event::Disappear { height: h, marker });
    }

    fn split<R: Rng>(&mut self, i: usize, rng: &mut R) {
        let v = self.vertex();
        let o = self.close(i, v);
        let n = o.cur.len();
        let start = rng.gen_range(0..n);
        let cut = rng.gen_range(2..n - 1);
        let rotated: Vec<u32> = o.cur.iter().cycle().skip(start).take(n).copied().collect();
        let (p, q) = rotated.split_at(cut);
        for part in [p, q] {
            self.open.push(Open { lower: v, bottom: part.to_vec(), cur: part.to_vec(), events: vec![], comp: o.comp });
        }
    }

    fn merge(&mut self, i: usize, j: usize) {
        let v = self.vertex();
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        let x = self.close(hi, v);
        let y = self.close(lo, v);
        let (cx, cy) = (self.find(x.comp), self.find(y.comp));
        self.parent[cx] = cy;
        let joined: Vec<u32> = x.cur.iter().chain(y.cur.iter()).copied().collect();
        self.open.push(Open { lower: v, bottom: joined.clone(), cur: joined, events: vec![], comp: cy });
    }

    fn shrink_and_cap(&mut self, i: usize) {
        while self.open[i].cur.len() > 2 {
            self.disappear(i, 0);
        }
        let v = self.vertex();
        self.close(i, v);
    }

    fn components(&mut self) -> Vec<usize> {
        let comps: Vec<usize> = self.open.iter().map(|o| o.comp).collect();
        comps.into_iter().map(|c| self.find(c)).collect()
    }

    /// Pair of open edges in different components, if any.
    fn mergeable<R: Rng>(&mut self, rng: &mut R) -> Option<(usize, usize)> {
        let comps = self.components();
        let mut pairs = Vec::new();
        for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                if comps[i] != comps[j] {
                    pairs.push((i, j));
                }
            }
        }
        pairs.choose(rng).copied()
    }
}

/// A random valid plane diagram with at most `max_genus` segments.
pub fn random_tree<R: Rng>(rng: &mut R, max_genus: u32, steps: usize) -> MorseTree {
    assert!(max_genus >= 2);
    let mut s = Sweep { heights: vec![], edges: vec![], open: vec![], parent: vec![], next_marker: 0, clock: 0 };
    s.birth();
    for _ in 0..steps {
        let room = max_genus - s.next_marker;
        let i = rng.gen_range(0..s.open.len());
        match rng.gen_range(0..6) {
            0 if room >= 2 => s.birth(),
            1 if room >= 1 => s.appear(i, rng),
            2 if s.open[i].cur.len() > 2 => {
                let k = rng.gen_range(0..s.open[i].cur.len());
                s.disappear(i, k);
            }
            3 if s.open[i].cur.len() >= 4 => s.split(i, rng),
            4 => {
                if let Some((a, b)) = s.mergeable(rng) {
                    s.merge(a, b);
                }
            }
            5 if s.open[i].cur.len() == 2 => {
                let comps = s.components();
                if comps.iter().filter(|&&c| c == comps[i]).count() > 1 {
                    s.shrink_and_cap(i);
                }
            }
            _ => {}
        }
    }
    loop {
        if let Some((a, b)) = s.mergeable(rng) {
            s.merge(a, b);
            continue;
        }
        s.shrink_and_cap(s.open.len() - 1);
        if s.open.is_empty() {
            break;
        }
    }
    MorseTree { heights: s.heights, edges: s.edges }
}

/// Random tori matching the tree, with `|a|, |b|` in `[m, 2m)`.
pub fn random_building_data<R: Rng>(rng: &mut R, max_genus: u32, steps: usize) -> BuildingData {
    let tree = random_tree(rng, max_genus, steps);
    let spans = tree.analyze().expect("the sweep only produces valid diagrams").spans;
    let tori = spans
        .iter()
        .map(|sp| {
            let m = sp.measure();
            let a = &m * &Scalar::ratio(10 + rng.gen_range(0..10), 10);
            let b = &m * &Scalar::ratio(10 + rng.gen_range(0..10), 10);
            TorusData { a, b, m }
        })
        .collect();
    BuildingData { tree, tori }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_data_glues() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen_inner = false;
        for _ in 0..200 {
            let max_genus = rng.gen_range(2..=6);
            let d = random_building_data(&mut rng, max_genus, 30);
            assert!(d.validate().is_empty(), "{:?}", d.validate());
            match d.glue() {
                Ok(s) => {
                    assert_eq!(s.t, s.r + 2);
                    assert_eq!(s.saddles.len(), 2 * s.genus - 2);
                    seen_inner |= s.r > 0;
                }
                Err(crate::Error::Classification(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(seen_inner);
    }
}

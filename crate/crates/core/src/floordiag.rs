//! Floor diagrams of h-transverse polygons and the refined count
//! `G(Δ, g) = Σ_D ν(D) · Π_e [w(e)]_q²`.
//!
//! Floors are numbered bottom to top and elevators point upward. Each floor
//! carries one left and one right boundary direction; these are distributed
//! over the floors as arbitrary (distinct) permutations of the polygon's left
//! and right side slopes, which fixes the floor's divergence
//! `left_shift - right_shift`. Unbounded ends all have weight one: `d_b`
//! bottom ends feed floors from below and `d_t` top ends leave from above.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::polygon::{HPolygon, Shape};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FloorError {
    #[error("diagram has {elements} marked elements but {expected} point conditions")]
    ElementCount { elements: i64, expected: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elevator {
    /// Floor the elevator leaves (0-based, lower).
    pub from: usize,
    /// Floor the elevator enters (0-based, upper).
    pub to: usize,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FloorDiagram {
    /// Left boundary x-advance assigned to each floor.
    pub left_shifts: Vec<i64>,
    /// Right boundary x-advance assigned to each floor.
    pub right_shifts: Vec<i64>,
    /// Bounded elevators, sorted.
    pub elevators: Vec<Elevator>,
    /// Number of bottom ends attached to each floor.
    pub bottom_ends: Vec<u32>,
    /// Number of top ends attached to each floor.
    pub top_ends: Vec<u32>,
    /// Number of point conditions a marking must match.
    pub point_conditions: i64,
}

impl FloorDiagram {
    pub fn floors(&self) -> usize {
        self.bottom_ends.len()
    }

    pub fn divergences(&self) -> Vec<i64> {
        self.left_shifts
            .iter()
            .zip(&self.right_shifts)
            .map(|(l, r)| l - r)
            .collect()
    }

    /// First Betti number of the underlying graph (assumed connected).
    pub fn genus(&self) -> i64 {
        self.elevators.len() as i64 - self.floors() as i64 + 1
    }

    pub fn element_count(&self) -> i64 {
        let ends: u32 = self.bottom_ends.iter().chain(&self.top_ends).sum();
        (self.floors() + self.elevators.len()) as i64 + ends as i64
    }

    /// Net flow at each floor: bottom ends plus incoming weight minus top
    /// ends minus outgoing weight.
    pub fn flows(&self) -> Vec<i64> {
        let mut flow: Vec<i64> = self
            .bottom_ends
            .iter()
            .zip(&self.top_ends)
            .map(|(b, t)| *b as i64 - *t as i64)
            .collect();
        for e in &self.elevators {
            flow[e.to] += e.weight as i64;
            flow[e.from] -= e.weight as i64;
        }
        flow
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.floors());
        for e in &self.elevators {
            uf.union(e.from, e.to);
        }
        (0..self.floors()).all(|k| uf.find(k) == uf.find(0))
    }

    /// Product of squared quantum integers over the bounded elevators.
    pub fn refined_multiplicity(&self) -> LaurentPoly {
        multiplicity_of(&self.weights())
    }

    fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.elevators.iter().map(|e| e.weight).filter(|&w| w > 1).collect();
        w.sort_unstable();
        w
    }

    /// Order of the group permuting parallel equal-weight elevators and
    /// same-floor ends of the same kind.
    pub fn automorphisms(&self) -> u128 {
        let mut aut: u128 = 1;
        for c in self.element_classes().iter().map(|c| c.size) {
            aut *= factorial(c);
        }
        aut
    }

    /// Markings up to automorphism: linear extensions of the marking poset
    /// divided by `|Aut(D)|`.
    pub fn marking_count(&self) -> Result<u128, FloorError> {
        let elements = self.element_count();
        if elements != self.point_conditions {
            return Err(FloorError::ElementCount { elements, expected: self.point_conditions });
        }
        Ok(count_class_words(self.floors(), &self.element_classes()))
    }

    fn element_classes(&self) -> Vec<ElementClass> {
        let h = self.floors();
        let mut classes = Vec::new();
        for k in 0..h {
            if self.bottom_ends[k] > 0 {
                classes.push(ElementClass { after: None, before: Some(k), size: self.bottom_ends[k] as usize });
            }
            if self.top_ends[k] > 0 {
                classes.push(ElementClass { after: Some(k), before: None, size: self.top_ends[k] as usize });
            }
        }
        let mut groups: BTreeMap<Elevator, usize> = BTreeMap::new();
        for e in &self.elevators {
            *groups.entry(*e).or_default() += 1;
        }
        for (e, n) in groups {
            classes.push(ElementClass { after: Some(e.from), before: Some(e.to), size: n });
        }
        classes
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn multiplicity_of(weights: &[u32]) -> LaurentPoly {
    let mut m = LaurentPoly::one();
    for &w in weights {
        let qw = LaurentPoly::quantum_integer(w as i64).expect("weights are positive");
        m = &m * &(&qw * &qw);
    }
    m
}

/// Interchangeable marking elements: `size` copies that must come after
/// floor `after` and before floor `before`.
#[derive(Clone, Copy, Debug)]
struct ElementClass {
    after: Option<usize>,
    before: Option<usize>,
    size: usize,
}

/// Number of words over class labels compatible with the floor chain.
///
/// This is the linear-extension count of the labelled poset divided by the
/// product of class-size factorials. Dynamic programming over downsets:
/// a state is (floors placed, copies placed per class).
fn count_class_words(floors: usize, classes: &[ElementClass]) -> u128 {
    let mut strides = Vec::with_capacity(classes.len());
    let mut total = floors + 1;
    for c in classes {
        strides.push(total);
        total *= c.size + 1;
    }
    let mut memo: Vec<Option<u128>> = vec![None; total];
    let mut placed = vec![0usize; classes.len()];
    words_from(0, &mut placed, floors, classes, &strides, &mut memo)
}

fn words_from(
    floors_placed: usize,
    placed: &mut Vec<usize>,
    floors: usize,
    classes: &[ElementClass],
    strides: &[usize],
    memo: &mut Vec<Option<u128>>,
) -> u128 {
    let idx = floors_placed + placed.iter().zip(strides).map(|(p, s)| p * s).sum::<usize>();
    if let Some(v) = memo[idx] {
        return v;
    }
    let done = floors_placed == floors && placed.iter().zip(classes).all(|(p, c)| *p == c.size);
    if done {
        memo[idx] = Some(1);
        return 1;
    }
    let mut acc: u128 = 0;
    // next floor, once everything that must precede it is in place
    if floors_placed < floors {
        let ready = classes
            .iter()
            .zip(placed.iter())
            .all(|(c, p)| c.before != Some(floors_placed) || *p == c.size);
        if ready {
            acc += words_from(floors_placed + 1, placed, floors, classes, strides, memo);
        }
    }
    for i in 0..classes.len() {
        let c = classes[i];
        if placed[i] == c.size {
            continue;
        }
        if c.after.is_some_and(|f| f >= floors_placed) {
            continue;
        }
        if c.before.is_some_and(|f| f < floors_placed) {
            continue;
        }
        placed[i] += 1;
        let sub = words_from(floors_placed, placed, floors, classes, strides, memo);
        placed[i] -= 1;
        acc = acc.checked_add(sub).expect("marking count overflows u128");
    }
    memo[idx] = Some(acc);
    acc
}

#[derive(Clone)]
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Distinct permutations of a multiset, in lexicographic order.
fn distinct_permutations(items: &[i64]) -> Vec<Vec<i64>> {
    let mut v = items.to_vec();
    v.sort_unstable();
    let mut out = vec![v.clone()];
    loop {
        // next lexicographic permutation
        let n = v.len();
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        out.push(v.clone());
    }
    out
}

/// Partitions of `n` into at most `max_parts` positive parts, parts
/// non-increasing.
fn partitions(n: u32, max_parts: usize) -> Vec<Vec<u32>> {
    fn rec(n: u32, max_part: u32, max_parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        if cur.len() == max_parts {
            return;
        }
        for p in (1..=max_part.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, max_parts, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_parts, &mut Vec::new(), &mut out);
    out
}

struct Search<'a> {
    divs: &'a [i64],
    floors: usize,
    edge_budget: usize,
    template: FloorDiagram,
    out: Vec<FloorDiagram>,
}

#[derive(Clone)]
struct State {
    /// Elevators opened below and not yet closed: (from floor, weight).
    open: Vec<(usize, u32)>,
    elevators: Vec<Elevator>,
    bottom: Vec<u32>,
    top: Vec<u32>,
    rem_bottom: u32,
    rem_top: u32,
    edges_used: usize,
    uf: UnionFind,
}

impl Search<'_> {
    fn floor(&mut self, k: usize, st: State) {
        if k == self.floors {
            if st.edges_used != self.edge_budget {
                return;
            }
            let mut uf = st.uf.clone();
            if (0..self.floors).any(|f| uf.find(f) != uf.find(0)) {
                return;
            }
            let mut d = self.template.clone();
            d.elevators = st.elevators;
            d.elevators.sort_unstable();
            d.bottom_ends = st.bottom;
            d.top_ends = st.top;
            self.out.push(d);
            return;
        }
        // group open elevators by (from, weight)
        let mut groups: Vec<((usize, u32), usize)> = Vec::new();
        for &o in &st.open {
            match groups.last_mut() {
                Some((key, n)) if *key == o => *n += 1,
                _ => groups.push((o, 1)),
            }
        }
        let last = k + 1 == self.floors;
        let mut counts = vec![0usize; groups.len()];
        self.choose_closing(k, &st, &groups, 0, &mut counts, last);
    }

    fn choose_closing(
        &mut self,
        k: usize,
        st: &State,
        groups: &[((usize, u32), usize)],
        gi: usize,
        counts: &mut Vec<usize>,
        last: bool,
    ) {
        if gi < groups.len() {
            let (lo, hi) = if last { (groups[gi].1, groups[gi].1) } else { (0, groups[gi].1) };
            for c in lo..=hi {
                counts[gi] = c;
                self.choose_closing(k, st, groups, gi + 1, counts, last);
            }
            return;
        }
        let mut next = st.clone();
        next.open.clear();
        let mut incoming: i64 = 0;
        for (g, &((from, w), n)) in groups.iter().enumerate() {
            let closed = counts[g];
            for _ in 0..closed {
                next.elevators.push(Elevator { from, to: k, weight: w });
                next.uf.union(from, k);
                incoming += w as i64;
            }
            for _ in closed..n {
                next.open.push((from, w));
            }
        }
        self.choose_ends(k, next, incoming, last);
    }

    fn choose_ends(&mut self, k: usize, st: State, incoming: i64, last: bool) {
        let div = self.divs[k];
        let b_range: Vec<u32> = if last { vec![st.rem_bottom] } else { (0..=st.rem_bottom).collect() };
        let t_range: Vec<u32> = if last { vec![st.rem_top] } else { (0..=st.rem_top).collect() };
        for &b in &b_range {
            for &t in &t_range {
                let out = b as i64 + incoming - t as i64 - div;
                if out < 0 || (last && out != 0) {
                    continue;
                }
                let free_edges = self.edge_budget - st.edges_used;
                if out > 0 && free_edges == 0 {
                    continue;
                }
                let parts_list = if out == 0 { vec![vec![]] } else { partitions(out as u32, free_edges) };
                for parts in parts_list {
                    let mut next = st.clone();
                    next.bottom.push(b);
                    next.top.push(t);
                    next.rem_bottom -= b;
                    next.rem_top -= t;
                    next.edges_used += parts.len();
                    for &w in &parts {
                        next.open.push((k, w));
                    }
                    next.open.sort_unstable();
                    if !last && !self.components_can_connect(k, &mut next) {
                        continue;
                    }
                    self.floor(k + 1, next);
                }
            }
        }
    }

    /// After floor `k`, every component of floors `0..=k` must still have an
    /// open elevator leaving it, otherwise the diagram ends up disconnected.
    fn components_can_connect(&self, k: usize, st: &mut State) -> bool {
        let mut roots: Vec<usize> = (0..=k).map(|f| st.uf.find(f)).collect();
        roots.sort_unstable();
        roots.dedup();
        let open_roots: Vec<usize> = st.open.iter().map(|&(f, _)| f).collect::<Vec<_>>();
        let open_roots: Vec<usize> = open_roots.into_iter().map(|f| st.uf.find(f)).collect();
        roots.iter().all(|r| open_roots.contains(r))
    }
}

/// All floor diagrams of genus `g` for `poly`, in a deterministic order.
pub fn enumerate_diagrams(poly: &HPolygon, g: u32) -> Vec<FloorDiagram> {
    let profile = poly.floor_profile();
    let h = profile.height;
    let edge_budget = h - 1 + g as usize;
    if g as i64 > poly.interior_points() {
        return Vec::new();
    }
    let point_conditions = poly.point_count(g as i64);
    let d_b = profile.bottom_ends();
    let d_t = profile.top_ends();

    let mut out = Vec::new();
    for left in distinct_permutations(&profile.left_shifts) {
        for right in distinct_permutations(&profile.right_shifts) {
            let divs: Vec<i64> = left.iter().zip(&right).map(|(l, r)| l - r).collect();
            // running width must stay positive between floors
            let mut width = d_b;
            let feasible = divs[..h - 1].iter().all(|d| {
                width -= d;
                width >= 1
            });
            if !feasible {
                continue;
            }
            let template = FloorDiagram {
                left_shifts: left.clone(),
                right_shifts: right.clone(),
                elevators: Vec::new(),
                bottom_ends: Vec::new(),
                top_ends: Vec::new(),
                point_conditions,
            };
            let mut search = Search { divs: &divs, floors: h, edge_budget, template, out: Vec::new() };
            let start = State {
                open: Vec::new(),
                elevators: Vec::new(),
                bottom: Vec::new(),
                top: Vec::new(),
                rem_bottom: d_b as u32,
                rem_top: d_t as u32,
                edges_used: 0,
                uf: UnionFind::new(h),
            };
            search.floor(0, start);
            out.extend(search.out);
        }
    }
    out.sort();
    out
}

/// One diagram with its multiplicity and marking count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramReport {
    pub diagram: FloorDiagram,
    pub multiplicity: LaurentPoly,
    pub markings: u128,
}

pub fn diagram_reports(poly: &HPolygon, g: u32) -> Vec<DiagramReport> {
    enumerate_diagrams(poly, g)
        .into_par_iter()
        .map(|d| {
            let markings = d.marking_count().expect("enumerated diagrams match the point count");
            let multiplicity = d.refined_multiplicity();
            DiagramReport { diagram: d, multiplicity, markings }
        })
        .collect()
}

/// The refined tropical invariant `G(Δ, g)`; zero for degenerate shapes.
pub fn refined_invariant(shape: &Shape, g: u32) -> LaurentPoly {
    let poly = match shape {
        Shape::Polygon(p) => p,
        Shape::Degenerate => return LaurentPoly::zero(),
    };
    let diagrams = enumerate_diagrams(poly, g);
    // collect marking counts per multiset of non-trivial weights
    let by_weights: HashMap<Vec<u32>, u128> = diagrams
        .par_iter()
        .map(|d| {
            let nu = d.marking_count().expect("enumerated diagrams match the point count");
            (d.weights(), nu)
        })
        .fold(HashMap::new, |mut acc: HashMap<Vec<u32>, u128>, (w, nu)| {
            *acc.entry(w).or_default() += nu;
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    let mut keys: Vec<&Vec<u32>> = by_weights.keys().collect();
    keys.sort();
    let mut total = LaurentPoly::zero();
    for w in keys {
        total += &multiplicity_of(w).scale(&BigInt::from(by_weights[w]));
    }
    total
}

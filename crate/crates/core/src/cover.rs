//! The universal cover 𝒯 of Γ with its F_n-action and the lifted maps F_i.
//!
//! A vertex is addressed by `(g, b)`: the lift of `b` inside the maximal-tree
//! copy `T̃_g`. The lift of edge `e` starting in `T̃_g` is the cell `(g, e)`;
//! it ends in `T̃_{g x_e}` when `e` is essential and in `T̃_g` otherwise.
//! All operations are exact: geodesics follow reduced edge paths, and
//! Bot/Bt sets are solved algebraically, so nothing here depends on a ball.
//! [`CoverBall`] is only used to enumerate, sample and render.

use crate::algebra::{Kind, Word};
use crate::rep::{reduce_path, BfhRep, EdgePath};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverVertex {
    pub g: Word,
    pub base: usize,
}

/// Lift of `edge` whose initial vertex lies in `T̃_g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverCell {
    pub g: Word,
    pub edge: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoverPath {
    pub start: CoverVertex,
    pub steps: EdgePath,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn from_parity(odd: bool) -> Side {
        if odd {
            Side::Right
        } else {
            Side::Left
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl CoverVertex {
    pub fn new(g: Word, base: usize) -> Self {
        CoverVertex { g, base }
    }

    pub fn translate(&self, h: &Word) -> CoverVertex {
        CoverVertex { g: h.mul(&self.g), base: self.base }
    }

    pub fn display(&self, rep: &BfhRep) -> String {
        if rep.graph.vertices.len() == 1 {
            self.g.display(Kind::Horizontal)
        } else {
            format!("{}@{}", self.g.display(Kind::Horizontal), rep.graph.vertices[self.base])
        }
    }
}

impl CoverCell {
    pub fn new(g: Word, edge: usize) -> Self {
        CoverCell { g, edge }
    }

    pub fn from(&self, rep: &BfhRep) -> CoverVertex {
        CoverVertex { g: self.g.clone(), base: rep.graph.edges[self.edge].from }
    }

    pub fn to(&self, rep: &BfhRep) -> CoverVertex {
        CoverVertex { g: self.g.mul(&x_label(rep, self.edge)), base: rep.graph.edges[self.edge].to }
    }

    pub fn translate(&self, h: &Word) -> CoverCell {
        CoverCell { g: h.mul(&self.g), edge: self.edge }
    }

    pub fn is_essential(&self, rep: &BfhRep) -> bool {
        rep.is_essential(self.edge)
    }

    pub fn is_exceptional(&self, rep: &BfhRep) -> bool {
        rep.separating[self.edge]
    }

    pub fn is_eoe(&self, rep: &BfhRep) -> bool {
        rep.is_eoe(self.edge)
    }

    pub fn height(&self) -> usize {
        self.edge + 1
    }

    pub fn display(&self, rep: &BfhRep) -> String {
        format!("{}:{}", self.g.display(Kind::Horizontal), rep.edge_name(self.edge))
    }
}

/// `x_e` for an essential edge, the empty word otherwise.
pub fn x_label(rep: &BfhRep, e: usize) -> Word {
    match rep.generator[e] {
        Some(x) => Word::gen(x),
        None => Word::empty(),
    }
}

pub fn basepoint(rep: &BfhRep) -> CoverVertex {
    CoverVertex { g: Word::empty(), base: rep.basepoint }
}

/// The cell crossed by a signed step leaving vertex `at`, and the next vertex.
pub fn step(rep: &BfhRep, at: &CoverVertex, s: i32) -> (CoverCell, CoverVertex) {
    let e = s.unsigned_abs() as usize - 1;
    let ed = &rep.graph.edges[e];
    if s > 0 {
        debug_assert_eq!(at.base, ed.from);
        let c = CoverCell { g: at.g.clone(), edge: e };
        let next = CoverVertex { g: at.g.mul(&x_label(rep, e)), base: ed.to };
        (c, next)
    } else {
        debug_assert_eq!(at.base, ed.to);
        let g = at.g.mul(&x_label(rep, e).inverse());
        (CoverCell { g: g.clone(), edge: e }, CoverVertex { g, base: ed.from })
    }
}

impl CoverPath {
    pub fn empty(at: CoverVertex) -> Self {
        CoverPath { start: at, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Cells crossed, with the direction of crossing.
    pub fn cells(&self, rep: &BfhRep) -> Vec<(CoverCell, bool)> {
        let mut at = self.start.clone();
        let mut out = Vec::with_capacity(self.steps.len());
        for &s in &self.steps {
            let (c, next) = step(rep, &at, s);
            out.push((c, s > 0));
            at = next;
        }
        out
    }

    pub fn vertices(&self, rep: &BfhRep) -> Vec<CoverVertex> {
        let mut at = self.start.clone();
        let mut out = vec![at.clone()];
        for &s in &self.steps {
            at = step(rep, &at, s).1;
            out.push(at.clone());
        }
        out
    }

    pub fn end(&self, rep: &BfhRep) -> CoverVertex {
        let mut at = self.start.clone();
        for &s in &self.steps {
            at = step(rep, &at, s).1;
        }
        at
    }

    pub fn reverse(&self, rep: &BfhRep) -> CoverPath {
        CoverPath { start: self.end(rep), steps: self.steps.iter().rev().map(|s| -s).collect() }
    }

    pub fn translate(&self, h: &Word) -> CoverPath {
        CoverPath { start: self.start.translate(h), steps: self.steps.clone() }
    }
}

/// Edge path of Γ from the basepoint to `b` inside the maximal tree, reversed if asked.
fn tree_path(rep: &BfhRep, b: usize, reverse: bool) -> EdgePath {
    let p = &rep.tree_path[b];
    if reverse {
        p.iter().rev().map(|s| -s).collect()
    } else {
        p.clone()
    }
}

/// The unique reduced edge path between two cover vertices.
pub fn geodesic(rep: &BfhRep, u: &CoverVertex, v: &CoverVertex) -> CoverPath {
    let mut steps = tree_path(rep, u.base, true);
    let w = u.g.inverse().mul(&v.g);
    for &a in w.letters() {
        let e = rep.essential_edge[a.unsigned_abs() as usize - 1];
        let ed = &rep.graph.edges[e];
        if a > 0 {
            steps.extend(tree_path(rep, ed.from, false));
            steps.push(e as i32 + 1);
            steps.extend(tree_path(rep, ed.to, true));
        } else {
            steps.extend(tree_path(rep, ed.to, false));
            steps.push(-(e as i32) - 1);
            steps.extend(tree_path(rep, ed.from, true));
        }
    }
    steps.extend(tree_path(rep, v.base, false));
    CoverPath { start: u.clone(), steps: reduce_path(&steps) }
}

pub fn distance(rep: &BfhRep, u: &CoverVertex, v: &CoverVertex) -> usize {
    geodesic(rep, u, v).len()
}

/// Number of cells of `set` crossed by the geodesic from `a` to `b`.
pub fn crossings(rep: &BfhRep, a: &CoverVertex, b: &CoverVertex, set: &BTreeSet<CoverCell>) -> usize {
    geodesic(rep, a, b).cells(rep).iter().filter(|(c, _)| set.contains(c)).count()
}

pub fn side_of(rep: &BfhRep, e: &CoverCell, set: &BTreeSet<CoverCell>, v: &CoverVertex) -> Side {
    Side::from_parity(crossings(rep, &e.from(rep), v, set) % 2 == 1)
}

/// A finite subtree given by its vertices and cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subtree {
    pub vertices: BTreeSet<CoverVertex>,
    pub cells: BTreeSet<CoverCell>,
}

impl Subtree {
    pub fn point(v: CoverVertex) -> Self {
        Subtree { vertices: BTreeSet::from([v]), cells: BTreeSet::new() }
    }

    pub fn add_path(&mut self, rep: &BfhRep, p: &CoverPath) {
        let mut at = p.start.clone();
        self.vertices.insert(at.clone());
        for &s in &p.steps {
            let (c, next) = step(rep, &at, s);
            self.cells.insert(c);
            self.vertices.insert(next.clone());
            at = next;
        }
    }

    pub fn labels(&self) -> BTreeSet<Word> {
        self.vertices.iter().map(|v| v.g.clone()).collect()
    }

    pub fn translate(&self, h: &Word) -> Subtree {
        Subtree {
            vertices: self.vertices.iter().map(|v| v.translate(h)).collect(),
            cells: self.cells.iter().map(|c| c.translate(h)).collect(),
        }
    }

    /// Vertices of degree at most one in the subtree.
    pub fn leaves(&self, rep: &BfhRep) -> Vec<CoverVertex> {
        let mut deg: BTreeMap<&CoverVertex, usize> = self.vertices.iter().map(|v| (v, 0)).collect();
        let ends: Vec<(CoverVertex, CoverVertex)> = self.cells.iter().map(|c| (c.from(rep), c.to(rep))).collect();
        for (a, b) in &ends {
            if let Some(d) = deg.get_mut(a) {
                *d += 1;
            }
            if let Some(d) = deg.get_mut(b) {
                *d += 1;
            }
        }
        deg.into_iter().filter(|(_, d)| *d <= 1).map(|(v, _)| v.clone()).collect()
    }

    pub fn diameter(&self, rep: &BfhRep) -> usize {
        let leaves = self.leaves(rep);
        let mut best = 0;
        for (i, a) in leaves.iter().enumerate() {
            for b in &leaves[i + 1..] {
                best = best.max(distance(rep, a, b));
            }
        }
        best
    }
}

/// Convex hull of a set of vertices.
pub fn hull<'a>(rep: &BfhRep, vertices: impl IntoIterator<Item = &'a CoverVertex>) -> Subtree {
    let mut it = vertices.into_iter();
    let mut t = Subtree::default();
    let Some(first) = it.next() else { return t };
    t.vertices.insert(first.clone());
    for v in it {
        t.add_path(rep, &geodesic(rep, first, v));
    }
    t
}

/// Hull of a set of cells (their endpoints).
pub fn hull_cells<'a>(rep: &BfhRep, cells: impl IntoIterator<Item = &'a CoverCell>) -> Subtree {
    let ends: Vec<CoverVertex> = cells.into_iter().flat_map(|c| [c.from(rep), c.to(rep)]).collect();
    hull(rep, ends.iter())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Incidence {
    Incoming,
    Outgoing,
}

/// Essential cells incident to a label of `u`, not contained in `u`.
pub fn crown(rep: &BfhRep, u: &Subtree) -> Vec<(CoverCell, Incidence)> {
    let labels = u.labels();
    let mut out = BTreeMap::new();
    for g in &labels {
        for &e in &rep.essential_edge {
            let x = x_label(rep, e);
            let outc = CoverCell { g: g.clone(), edge: e };
            if !u.cells.contains(&outc) {
                out.entry(outc).or_insert(Incidence::Outgoing);
            }
            let inc = CoverCell { g: g.mul(&x.inverse()), edge: e };
            if !u.cells.contains(&inc) {
                out.entry(inc).or_insert(Incidence::Incoming);
            }
        }
    }
    out.into_iter().collect()
}

/// Smallest tree containing `u` to which every crown cell attaches.
pub fn completion(rep: &BfhRep, u: &Subtree) -> Subtree {
    let mut pts: Vec<CoverVertex> = u.vertices.iter().cloned().collect();
    for (c, inc) in crown(rep, u) {
        pts.push(match inc {
            Incidence::Outgoing => c.from(rep),
            Incidence::Incoming => c.to(rep),
        });
    }
    let mut t = hull(rep, pts.iter());
    t.cells.extend(u.cells.iter().cloned());
    t
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwinPair {
    pub incoming: CoverCell,
    pub outgoing: CoverCell,
    /// Index i of the shared label x_i.
    pub generator: usize,
    /// Shift sending `incoming` to `outgoing`.
    pub shift: Word,
    /// `shift = conj · x_i^power · conj⁻¹`.
    pub conj: Word,
    pub power: i64,
}

impl TwinPair {
    pub fn translate(&self, h: &Word) -> TwinPair {
        TwinPair {
            incoming: self.incoming.translate(h),
            outgoing: self.outgoing.translate(h),
            generator: self.generator,
            shift: h.mul(&self.shift).mul(&h.inverse()),
            conj: h.mul(&self.conj),
            power: self.power,
        }
    }

    /// The connecting path from i(incoming) to t(outgoing).
    pub fn span(&self, rep: &BfhRep) -> CoverPath {
        geodesic(rep, &self.incoming.from(rep), &self.outgoing.to(rep))
    }
}

/// Pairs each crown cell of `u` with its twin on the same label axis.
pub fn twins(rep: &BfhRep, u: &Subtree) -> Vec<TwinPair> {
    let labels = u.labels();
    let mut out = Vec::new();
    for (c, inc) in crown(rep, u) {
        if inc != Incidence::Incoming {
            continue;
        }
        let i = rep.generator[c.edge].unwrap();
        let x = Word::gen(i);
        // walk the x_i-axis from t(c) while the labels stay in u
        let mut g = c.g.mul(&x);
        let mut m = 0i64;
        while labels.contains(&g.mul(&x)) {
            g = g.mul(&x);
            m += 1;
        }
        let outgoing = CoverCell { g: g.clone(), edge: c.edge };
        let conj = c.g.clone();
        let power = m + 1;
        let shift = conj.mul(&x.pow(power)).mul(&conj.inverse());
        out.push(TwinPair { incoming: c, outgoing, generator: i, shift, conj, power });
    }
    out
}

/// F_i on vertices: `(g, b) ↦ (σ_i(g)·c_{i,b}, b)`.
pub fn lift_vertex(rep: &BfhRep, i: usize, v: &CoverVertex) -> CoverVertex {
    let g = rep.sigma.forward(i).apply(&v.g).mul(&rep.offset[i - 1][v.base]);
    CoverVertex { g, base: v.base }
}

/// Inverse of [`lift_vertex`].
pub fn unlift_vertex(rep: &BfhRep, i: usize, v: &CoverVertex) -> CoverVertex {
    let c = &rep.offset[i - 1][v.base];
    CoverVertex { g: rep.sigma.backward(i).apply(&v.g.mul(&c.inverse())), base: v.base }
}

/// Reduced F_i-image of a path.
pub fn lift_map(rep: &BfhRep, i: usize, p: &CoverPath) -> CoverPath {
    CoverPath { start: lift_vertex(rep, i, &p.start), steps: rep.map_path(i, &p.steps) }
}

pub fn lift_cell(rep: &BfhRep, i: usize, c: &CoverCell) -> CoverPath {
    lift_map(rep, i, &CoverPath { start: c.from(rep), steps: vec![c.edge as i32 + 1] })
}

/// E^i_top: the unique cell of F_i(E) with the label of E.
pub fn top_cell(rep: &BfhRep, e: &CoverCell, i: usize) -> CoverCell {
    lift_cell(rep, i, e)
        .cells(rep)
        .into_iter()
        .find(|(c, _)| c.edge == e.edge)
        .map(|(c, _)| c)
        .expect("filtered image contains its own edge")
}

/// E^i_bot: the unique cell whose i-top is E.
pub fn bot_cell(rep: &BfhRep, e: &CoverCell, i: usize) -> CoverCell {
    let img = &rep.maps[i - 1].images[e.edge];
    let pos = img.iter().position(|&s| s == e.edge as i32 + 1).expect("filtered image");
    let p = rep.label(&img[..pos]);
    let from = rep.graph.edges[e.edge].from;
    let target = e.g.mul(&p.inverse()).mul(&rep.offset[i - 1][from].inverse());
    CoverCell { g: rep.sigma.backward(i).apply(&target), edge: e.edge }
}

/// Bot_i(Y): every cell whose F_i-image crosses Y.
pub fn bot(rep: &BfhRep, y: &CoverCell, i: usize) -> Vec<CoverCell> {
    let mut out = BTreeSet::new();
    for (e2, img) in rep.maps[i - 1].images.iter().enumerate() {
        let from = rep.graph.edges[e2].from;
        for (k, &s) in img.iter().enumerate() {
            if s.unsigned_abs() as usize != y.edge + 1 {
                continue;
            }
            let q = if s > 0 { rep.label(&img[..k]) } else { rep.label(&img[..=k]) };
            let target = y.g.mul(&q.inverse()).mul(&rep.offset[i - 1][from].inverse());
            out.insert(CoverCell { g: rep.sigma.backward(i).apply(&target), edge: e2 });
        }
    }
    out.into_iter().collect()
}

pub fn bt(rep: &BfhRep, e: &CoverCell, i: usize) -> Vec<CoverCell> {
    bot(rep, &top_cell(rep, e, i), i)
}

pub fn bt_all(rep: &BfhRep, e: &CoverCell) -> BTreeSet<CoverCell> {
    (1..=rep.k()).flat_map(|i| bt(rep, e, i)).collect()
}

pub fn bot_star(rep: &BfhRep, e: &CoverCell, i: usize) -> Vec<CoverCell> {
    bt(rep, e, i).into_iter().filter(|c| c != e).collect()
}

/// Indices i for which the label of E is not i-topmost.
pub fn i_set(rep: &BfhRep, e: &CoverCell) -> Vec<usize> {
    (1..=rep.k()).filter(|&i| !rep.topmost(e.edge, i)).collect()
}

/// Representatives of the F_n-orbits of EoE-cells.
pub fn eoe_representatives(rep: &BfhRep) -> Vec<CoverCell> {
    rep.eoe_edges().into_iter().map(|e| CoverCell { g: Word::empty(), edge: e }).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    InconclusiveAtRadius,
}

#[derive(Clone, Debug, Serialize)]
pub struct OneSidedEntry {
    pub edge: String,
    pub verdict: Verdict,
    pub side: Option<Side>,
    pub bt_size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OneSidedReport {
    pub radius: usize,
    pub entries: Vec<OneSidedEntry>,
}

impl OneSidedReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.verdict == Verdict::Pass)
    }
}

fn within(rep: &BfhRep, radius: usize, vs: impl IntoIterator<Item = CoverVertex>) -> bool {
    let o = basepoint(rep);
    vs.into_iter().all(|v| distance(rep, &o, &v) <= radius)
}

/// Bt(E) \ {E} lies on a single side of E.
pub fn check_one_sided(rep: &BfhRep, radius: usize) -> OneSidedReport {
    let mut entries = Vec::new();
    for e in eoe_representatives(rep) {
        let set = bt_all(rep, &e);
        let only = BTreeSet::from([e.clone()]);
        let mut sides = BTreeSet::new();
        for c in set.iter().filter(|c| **c != e) {
            sides.insert(side_of(rep, &e, &only, &c.from(rep)));
            sides.insert(side_of(rep, &e, &only, &c.to(rep)));
        }
        let complete = within(rep, radius, set.iter().flat_map(|c| [c.from(rep), c.to(rep)]));
        let verdict = if !complete {
            Verdict::InconclusiveAtRadius
        } else if sides.len() <= 1 {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        entries.push(OneSidedEntry {
            edge: rep.edge_name(e.edge).to_string(),
            verdict,
            side: if sides.len() == 1 { sides.into_iter().next() } else { None },
            bt_size: set.len(),
        });
    }
    OneSidedReport { radius, entries }
}

/// Quantifier reading used for the tied condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TieReading {
    /// For each geodesic R, `{i : F_i(R) ∋ E^i_top}` is ∅ or I_E.
    PerGeodesic,
    /// Either no R meets any E^i_top, or every R meets E^i_top for all i ∈ I_E.
    Global,
}

#[derive(Clone, Debug, Serialize)]
pub struct TiedEntry {
    pub edge: String,
    pub verdict: Verdict,
    pub i_set: Vec<usize>,
    /// For each probed geodesic, the set of i with E^i_top ∈ F_i(R).
    pub hits: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TiedReport {
    pub radius: usize,
    pub reading: TieReading,
    pub entries: Vec<TiedEntry>,
}

impl TiedReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.verdict == Verdict::Pass)
    }
}

/// Geodesics from E to the leaves of the completion of Bt(E), excluding E.
pub fn tied_geodesics(rep: &BfhRep, e: &CoverCell) -> Vec<CoverPath> {
    let set = bt_all(rep, e);
    let comp = completion(rep, &hull_cells(rep, set.iter()));
    let (a, b) = (e.from(rep), e.to(rep));
    let only = BTreeSet::from([e.clone()]);
    comp.leaves(rep)
        .into_iter()
        .filter(|v| *v != a && *v != b)
        .map(|v| {
            let start = if side_of(rep, e, &only, &v) == Side::Left { a.clone() } else { b.clone() };
            geodesic(rep, &start, &v)
        })
        .collect()
}

pub fn geodesic_hits(rep: &BfhRep, e: &CoverCell, r: &CoverPath) -> Vec<usize> {
    (1..=rep.k())
        .filter(|&i| {
            let top = top_cell(rep, e, i);
            lift_map(rep, i, r).cells(rep).iter().any(|(c, _)| *c == top)
        })
        .collect()
}

pub fn check_tied(rep: &BfhRep, radius: usize, reading: TieReading) -> TiedReport {
    let mut entries = Vec::new();
    for e in eoe_representatives(rep) {
        let iset = i_set(rep, &e);
        let paths = tied_geodesics(rep, &e);
        let hits: Vec<Vec<usize>> = paths.iter().map(|r| geodesic_hits(rep, &e, r)).collect();
        let ok = match reading {
            TieReading::PerGeodesic => hits.iter().all(|h| h.is_empty() || *h == iset),
            TieReading::Global => {
                hits.iter().all(|h| h.is_empty()) || hits.iter().all(|h| iset.iter().all(|i| h.contains(i)))
            }
        };
        let complete = within(rep, radius, paths.iter().map(|p| p.end(rep)));
        let verdict = if !complete {
            Verdict::InconclusiveAtRadius
        } else if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        entries.push(TiedEntry { edge: rep.edge_name(e.edge).to_string(), verdict, i_set: iset, hits });
    }
    TiedReport { radius, reading, entries }
}

/// All vertices and cells within a radius of the basepoint.
#[derive(Clone, Debug)]
pub struct CoverBall {
    pub radius: usize,
    pub vertices: Vec<CoverVertex>,
    pub depth: Vec<usize>,
    pub index: HashMap<CoverVertex, usize>,
    pub cells: Vec<CoverCell>,
}

/// Cells at a vertex with the neighbour across each.
pub fn neighbours(rep: &BfhRep, v: &CoverVertex) -> Vec<(CoverCell, CoverVertex)> {
    let mut out = Vec::new();
    for (e, ed) in rep.graph.edges.iter().enumerate() {
        if ed.from == v.base {
            out.push(step(rep, v, e as i32 + 1));
        }
        if ed.to == v.base {
            out.push(step(rep, v, -(e as i32) - 1));
        }
    }
    out
}

impl CoverBall {
    pub fn new(rep: &BfhRep, radius: usize) -> CoverBall {
        Self::around(rep, &basepoint(rep), radius)
    }

    pub fn around(rep: &BfhRep, center: &CoverVertex, radius: usize) -> CoverBall {
        let mut ball = CoverBall { radius, vertices: Vec::new(), depth: Vec::new(), index: HashMap::new(), cells: Vec::new() };
        ball.index.insert(center.clone(), 0);
        ball.vertices.push(center.clone());
        ball.depth.push(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let d = ball.depth[i];
            if d == radius {
                continue;
            }
            let v = ball.vertices[i].clone();
            for (c, w) in neighbours(rep, &v) {
                if ball.index.contains_key(&w) {
                    continue;
                }
                ball.cells.push(c);
                ball.index.insert(w.clone(), ball.vertices.len());
                ball.vertices.push(w);
                ball.depth.push(d + 1);
                queue.push_back(ball.vertices.len() - 1);
            }
        }
        ball
    }

    /// Grows the ball to a larger radius.
    pub fn expand(&self, rep: &BfhRep, radius: usize) -> CoverBall {
        Self::around(rep, &self.vertices[0], radius.max(self.radius))
    }

    pub fn contains(&self, v: &CoverVertex) -> bool {
        self.index.contains_key(v)
    }

    pub fn contains_cell(&self, rep: &BfhRep, c: &CoverCell) -> bool {
        self.contains(&c.from(rep)) && self.contains(&c.to(rep))
    }

    /// Geodesic between realized vertices.
    pub fn geodesic(&self, rep: &BfhRep, u: &CoverVertex, v: &CoverVertex) -> Result<CoverPath, CoverError> {
        for x in [u, v] {
            if !self.contains(x) {
                return Err(CoverError::OutsideBall(x.display(rep)));
            }
        }
        Ok(geodesic(rep, u, v))
    }

    pub fn to_dot(&self, rep: &BfhRep, thick: &BTreeSet<CoverCell>) -> String {
        let mut s = String::from("graph cover {\n  node [shape=point];\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [xlabel=\"{}\"];", v.display(rep));
        }
        let mut cells = self.cells.clone();
        cells.sort();
        for c in &cells {
            let (a, b) = (self.index[&c.from(rep)], self.index[&c.to(rep)]);
            let kind = if c.is_essential(rep) {
                "essential"
            } else if c.is_exceptional(rep) {
                "exceptional"
            } else {
                "tree"
            };
            let width = if thick.contains(c) { 4 } else { 1 };
            let _ = writeln!(
                s,
                "  v{a} -- v{b} [label=\"{} h{} {kind}\", penwidth={width}];",
                rep.edge_name(c.edge),
                c.height()
            );
        }
        s.push_str("}\n");
        s
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("vertex {0} outside the ball")]
    OutsideBall(String),
}

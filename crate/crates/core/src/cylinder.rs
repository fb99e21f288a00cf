//! Finite balls of the mapping cylinder 𝒦.
//!
//! A vertex of 𝒦 is written `(v, h, b)`: the vertex `(h, b)` of the
//! horizontal tree `𝒯_v`, which corresponds to the group element `v·h`
//! (vertical letters first) when `b` is the basepoint. The vertical
//! `t_j`-cell at `(v, h, b)` ends at `(v t_j, F_j(h, b))`.

use crate::algebra::{GroupElement, Kind, Letter, Word};
use crate::cover::{lift_cell, lift_vertex, neighbours, CoverBall, CoverCell, CoverPath, CoverVertex};
use crate::rep::BfhRep;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KVertex {
    pub v: Word,
    pub x: CoverVertex,
}

/// A horizontal cell of 𝒦.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HCell {
    pub v: Word,
    pub cell: CoverCell,
}

/// The positively oriented `t_j`-cell leaving `from`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VCell {
    pub from: KVertex,
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KCell {
    H(HCell),
    V(VCell),
}

/// The square with bottom `bottom` in `𝒯_v` and direction `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square {
    pub v: Word,
    pub bottom: CoverCell,
    pub j: usize,
}

impl KVertex {
    pub fn new(v: Word, h: Word, base: usize) -> Self {
        KVertex { v, x: CoverVertex::new(h, base) }
    }

    /// Vertex of the group element `g` (at the basepoint).
    pub fn of_element(rep: &BfhRep, g: &GroupElement) -> Self {
        let (v, h) = g.to_vh(&rep.sigma);
        KVertex { v, x: CoverVertex::new(h, rep.basepoint) }
    }

    /// The element `v·h` carrying `(e, e, b)` to this vertex.
    pub fn position(&self, rep: &BfhRep) -> GroupElement {
        GroupElement::from_vh(&rep.sigma, self.v.clone(), &self.x.g)
    }

    pub fn display(&self, rep: &BfhRep) -> String {
        format!("({} ; {})", self.v.display(Kind::Vertical), self.x.display(rep))
    }
}

impl HCell {
    pub fn new(v: Word, cell: CoverCell) -> Self {
        HCell { v, cell }
    }

    pub fn from(&self, rep: &BfhRep) -> KVertex {
        KVertex { v: self.v.clone(), x: self.cell.from(rep) }
    }

    pub fn to(&self, rep: &BfhRep) -> KVertex {
        KVertex { v: self.v.clone(), x: self.cell.to(rep) }
    }

    /// Element carrying the fundamental-domain cell `(e, e, edge)` to this cell.
    pub fn position(&self, rep: &BfhRep) -> GroupElement {
        GroupElement::from_vh(&rep.sigma, self.v.clone(), &self.cell.g)
    }

    pub fn display(&self, rep: &BfhRep) -> String {
        format!("[{} ; {}]", self.v.display(Kind::Vertical), self.cell.display(rep))
    }
}

impl VCell {
    pub fn to(&self, rep: &BfhRep) -> KVertex {
        vertical_target(rep, &self.from, self.j)
    }
}

pub fn vertical_target(rep: &BfhRep, x: &KVertex, j: usize) -> KVertex {
    KVertex { v: x.v.mul(&Word::gen(j)), x: lift_vertex(rep, j, &x.x) }
}

/// The vertex `y` with a `t_j`-cell from `y` to `x`.
pub fn vertical_source(rep: &BfhRep, x: &KVertex, j: usize) -> KVertex {
    let c = &rep.offset[j - 1][x.x.base];
    let h = rep.sigma.backward(j).apply(&x.x.g.mul(&c.inverse()));
    KVertex { v: x.v.mul(&Word::gen(j).inverse()), x: CoverVertex::new(h, x.x.base) }
}

/// Left action of `g` on vertices.
pub fn act_vertex(rep: &BfhRep, g: &GroupElement, x: &KVertex) -> KVertex {
    let (v0, h0) = g.to_vh(&rep.sigma);
    let shift = rep.sigma.psi(&x.v, &h0);
    KVertex { v: v0.mul(&x.v), x: x.x.translate(&shift) }
}

pub fn act_hcell(rep: &BfhRep, g: &GroupElement, c: &HCell) -> HCell {
    let (v0, h0) = g.to_vh(&rep.sigma);
    let shift = rep.sigma.psi(&c.v, &h0);
    HCell { v: v0.mul(&c.v), cell: c.cell.translate(&shift) }
}

pub fn act_vcell(rep: &BfhRep, g: &GroupElement, c: &VCell) -> VCell {
    VCell { from: act_vertex(rep, g, &c.from), j: c.j }
}

pub fn act_cell(rep: &BfhRep, g: &GroupElement, c: &KCell) -> KCell {
    match c {
        KCell::H(h) => KCell::H(act_hcell(rep, g, h)),
        KCell::V(v) => KCell::V(act_vcell(rep, g, v)),
    }
}

pub fn act_square(rep: &BfhRep, g: &GroupElement, s: &Square) -> Square {
    let b = act_hcell(rep, g, &HCell { v: s.v.clone(), cell: s.bottom.clone() });
    Square { v: b.v, bottom: b.cell, j: s.j }
}

impl Square {
    pub fn bottom_cell(&self) -> HCell {
        HCell { v: self.v.clone(), cell: self.bottom.clone() }
    }

    pub fn top_tree(&self) -> Word {
        self.v.mul(&Word::gen(self.j))
    }

    pub fn top(&self, rep: &BfhRep) -> CoverPath {
        lift_cell(rep, self.j, &self.bottom)
    }

    pub fn top_cells(&self, rep: &BfhRep) -> Vec<HCell> {
        let w = self.top_tree();
        self.top(rep).cells(rep).into_iter().map(|(c, _)| HCell { v: w.clone(), cell: c }).collect()
    }

    pub fn left(&self, rep: &BfhRep) -> VCell {
        VCell { from: KVertex { v: self.v.clone(), x: self.bottom.from(rep) }, j: self.j }
    }

    pub fn right(&self, rep: &BfhRep) -> VCell {
        VCell { from: KVertex { v: self.v.clone(), x: self.bottom.to(rep) }, j: self.j }
    }

    /// All cells of the boundary.
    pub fn boundary(&self, rep: &BfhRep) -> Vec<KCell> {
        let mut out = vec![KCell::H(self.bottom_cell()), KCell::V(self.left(rep)), KCell::V(self.right(rep))];
        out.extend(self.top_cells(rep).into_iter().map(KCell::H));
        out
    }

    /// Boundary read as a word in G: bottom, right side, top backwards, left side backwards.
    /// A vertical cell at base vertex `b` reads `t_j c_{j,b}`.
    pub fn boundary_word(&self, rep: &BfhRep) -> Vec<Letter> {
        let ed = &rep.graph.edges[self.bottom.edge];
        let hl = |a: i8| Letter { kind: Kind::Horizontal, base: a.unsigned_abs(), inverse: a < 0 };
        let mut out: Vec<Letter> = Vec::new();
        if let Some(x) = rep.generator[self.bottom.edge] {
            out.push(Letter::x(x as u8));
        }
        out.push(Letter::t(self.j as u8));
        out.extend(rep.offset[self.j - 1][ed.to].letters().iter().map(|&a| hl(a)));
        let top = self.top(rep);
        let steps: Vec<i32> = top.steps.iter().rev().map(|s| -s).collect();
        out.extend(rep.label(&steps).letters().iter().map(|&a| hl(a)));
        out.extend(rep.offset[self.j - 1][ed.from].inverse().letters().iter().map(|&a| hl(a)));
        out.push(Letter::t(self.j as u8).inv());
        out
    }
}

/// Image in the Cayley tree of F_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitImage {
    Vertex(Word),
    Edge(Word, Word),
}

pub fn orbit_map(rep: &BfhRep, c: &KCell) -> OrbitImage {
    match c {
        KCell::H(h) => OrbitImage::Vertex(h.v.clone()),
        KCell::V(v) => OrbitImage::Edge(v.from.v.clone(), vertical_target(rep, &v.from, v.j).v),
    }
}

pub fn orbit_map_vertex(x: &KVertex) -> Word {
    x.v.clone()
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CylinderError {
    #[error("vertex {0} outside the ball")]
    OutsideBall(String),
    #[error("vertices not connected inside the ball")]
    Disconnected,
    #[error("ball too large: {0} vertices exceeds the cap")]
    TooLarge(usize),
}

pub const VERTEX_CAP: usize = 50_000_000;

/// Horizontal trees `𝒯_w` for `|w| ≤ ρ_v`, each realized to radius `ρ_h`
/// around `(w, e, b_0)`. Vertices are numbered `tree * per_tree + local`.
pub struct CylinderBall {
    pub rho_v: usize,
    pub rho_h: usize,
    pub trees: Vec<Word>,
    pub tree_index: HashMap<Word, usize>,
    /// `tree_step[t][2(j-1)]` is the tree `w t_j`, `[2(j-1)+1]` is `w t_j⁻¹`.
    pub tree_step: Vec<Vec<Option<u32>>>,
    pub cover: CoverBall,
    /// Local horizontal adjacency: (neighbour, local cell index).
    pub adj: Vec<Vec<(u32, u32)>>,
    pub cell_index: HashMap<CoverCell, u32>,
    /// `fwd[j-1][x]` = local index of F_j(x), `back[j-1][y]` its preimage.
    pub fwd: Vec<Vec<Option<u32>>>,
    pub back: Vec<Vec<Option<u32>>>,
    /// `square_top[j-1][c]` = local indices of the top cells of the j-square on cell c.
    pub square_top: Vec<Vec<Option<Vec<u32>>>>,
    k: usize,
}

impl CylinderBall {
    pub fn build(rep: &BfhRep, rho_v: usize, rho_h: usize) -> Result<CylinderBall, CylinderError> {
        let k = rep.k();
        // vertical words by BFS in the Cayley tree of F_k
        let mut trees = vec![Word::empty()];
        let mut i = 0;
        while i < trees.len() {
            let w = trees[i].clone();
            i += 1;
            if w.len() == rho_v {
                continue;
            }
            for j in 1..=k as i8 {
                for a in [j, -j] {
                    if w.letters().last() == Some(&-a) {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(a);
                    trees.push(w2);
                }
            }
        }
        let tree_index: HashMap<Word, usize> = trees.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let tree_step = trees
            .iter()
            .map(|w| {
                (1..=k)
                    .flat_map(|j| {
                        let f = w.mul(&Word::gen(j));
                        let b = w.mul(&Word::gen(j).inverse());
                        [tree_index.get(&f).map(|&i| i as u32), tree_index.get(&b).map(|&i| i as u32)]
                    })
                    .collect()
            })
            .collect();
        let cover = CoverBall::new(rep, rho_h);
        let total = cover.vertices.len() * trees.len();
        if total > VERTEX_CAP {
            return Err(CylinderError::TooLarge(total));
        }
        let mut cells: Vec<CoverCell> = cover.cells.clone();
        cells.sort();
        let cell_index: HashMap<CoverCell, u32> = cells.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)).collect();
        let mut adj = vec![Vec::new(); cover.vertices.len()];
        for (ci, c) in cells.iter().enumerate() {
            let a = cover.index[&c.from(rep)] as u32;
            let b = cover.index[&c.to(rep)] as u32;
            adj[a as usize].push((b, ci as u32));
            adj[b as usize].push((a, ci as u32));
        }
        let mut fwd = vec![vec![None; cover.vertices.len()]; k];
        let mut back = vec![vec![None; cover.vertices.len()]; k];
        for j in 1..=k {
            for (xi, x) in cover.vertices.iter().enumerate() {
                if let Some(&y) = cover.index.get(&lift_vertex(rep, j, x)) {
                    fwd[j - 1][xi] = Some(y as u32);
                    back[j - 1][y] = Some(xi as u32);
                }
            }
        }
        let mut square_top = vec![vec![None; cells.len()]; k];
        for j in 1..=k {
            for (ci, c) in cells.iter().enumerate() {
                let top = lift_cell(rep, j, c);
                let ids: Option<Vec<u32>> = top.cells(rep).iter().map(|(d, _)| cell_index.get(d).copied()).collect();
                square_top[j - 1][ci] = ids;
            }
        }
        let mut ball = CylinderBall { rho_v, rho_h, trees, tree_index, tree_step, cover, adj, cell_index, fwd, back, square_top, k };
        ball.cover.cells = cells;
        Ok(ball)
    }

    pub fn per_tree(&self) -> usize {
        self.cover.vertices.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.per_tree() * self.trees.len()
    }

    pub fn id(&self, x: &KVertex) -> Option<usize> {
        let t = *self.tree_index.get(&x.v)?;
        let l = *self.cover.index.get(&x.x)?;
        Some(t * self.per_tree() + l)
    }

    pub fn vertex(&self, id: usize) -> KVertex {
        let (t, l) = (id / self.per_tree(), id % self.per_tree());
        KVertex { v: self.trees[t].clone(), x: self.cover.vertices[l].clone() }
    }

    pub fn contains(&self, x: &KVertex) -> bool {
        self.id(x).is_some()
    }

    pub fn contains_hcell(&self, rep: &BfhRep, c: &HCell) -> bool {
        self.tree_index.contains_key(&c.v) && self.cover.contains_cell(rep, &c.cell)
    }

    /// Neighbouring vertex ids in the 1-skeleton.
    pub fn neighbours(&self, id: usize, out: &mut Vec<usize>) {
        out.clear();
        let p = self.per_tree();
        let (t, l) = (id / p, id % p);
        for &(m, _) in &self.adj[l] {
            out.push(t * p + m as usize);
        }
        for j in 0..self.k {
            if let (Some(t2), Some(m)) = (self.tree_step[t][2 * j], self.fwd[j][l]) {
                out.push(t2 as usize * p + m as usize);
            }
            if let (Some(t2), Some(m)) = (self.tree_step[t][2 * j + 1], self.back[j][l]) {
                out.push(t2 as usize * p + m as usize);
            }
        }
    }

    /// Distances from `src` to every vertex (`u32::MAX` when unreachable).
    pub fn bfs(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.num_vertices()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        let mut nb = Vec::new();
        while let Some(u) = queue.pop_front() {
            self.neighbours(u, &mut nb);
            for &w in &nb {
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn ids(&self, rep: &BfhRep, a: &KVertex, b: &KVertex) -> Result<(usize, usize), CylinderError> {
        let ia = self.id(a).ok_or_else(|| CylinderError::OutsideBall(a.display(rep)))?;
        let ib = self.id(b).ok_or_else(|| CylinderError::OutsideBall(b.display(rep)))?;
        Ok((ia, ib))
    }

    pub fn graph_distance(&self, rep: &BfhRep, a: &KVertex, b: &KVertex) -> Result<usize, CylinderError> {
        let (ia, ib) = self.ids(rep, a, b)?;
        let d = self.bfs(ia)[ib];
        if d == u32::MAX {
            Err(CylinderError::Disconnected)
        } else {
            Ok(d as usize)
        }
    }

    /// A shortest vertex path inside the ball.
    pub fn geodesic_path(&self, rep: &BfhRep, a: &KVertex, b: &KVertex) -> Result<Vec<KVertex>, CylinderError> {
        let (ia, ib) = self.ids(rep, a, b)?;
        let mut parent = vec![u32::MAX; self.num_vertices()];
        parent[ia] = ia as u32;
        let mut queue = VecDeque::from([ia]);
        let mut nb = Vec::new();
        while let Some(u) = queue.pop_front() {
            if u == ib {
                break;
            }
            self.neighbours(u, &mut nb);
            for &w in &nb {
                if parent[w] == u32::MAX {
                    parent[w] = u as u32;
                    queue.push_back(w);
                }
            }
        }
        if parent[ib] == u32::MAX {
            return Err(CylinderError::Disconnected);
        }
        let mut path = vec![ib];
        while *path.last().unwrap() != ia {
            path.push(parent[*path.last().unwrap()] as usize);
        }
        path.reverse();
        Ok(path.into_iter().map(|i| self.vertex(i)).collect())
    }

    /// Every square whose closure lies in the ball.
    pub fn squares(&self) -> impl Iterator<Item = Square> + '_ {
        (0..self.trees.len()).flat_map(move |t| {
            (1..=self.k).flat_map(move |j| {
                let ok = self.tree_step[t][2 * (j - 1)].is_some();
                (0..if ok { self.cover.cells.len() } else { 0 }).filter_map(move |ci| {
                    self.square_top[j - 1][ci].as_ref().map(|_| Square {
                        v: self.trees[t].clone(),
                        bottom: self.cover.cells[ci].clone(),
                        j,
                    })
                })
            })
        })
    }

    pub fn contains_square(&self, rep: &BfhRep, s: &Square) -> bool {
        let Some(&ci) = self.cell_index.get(&s.bottom) else { return false };
        let _ = rep;
        self.tree_index.contains_key(&s.v)
            && self.tree_index.contains_key(&s.top_tree())
            && self.square_top[s.j - 1][ci as usize].is_some()
    }

    pub fn square_count(&self, t: usize, j: usize) -> usize {
        if self.tree_step[t][2 * (j - 1)].is_none() {
            return 0;
        }
        self.square_top[j - 1].iter().filter(|s| s.is_some()).count()
    }

    pub fn stats(&self) -> BallStats {
        let trees = self
            .trees
            .iter()
            .enumerate()
            .map(|(t, w)| TreeStats {
                tree: w.to_strings(Kind::Vertical),
                vertices: self.per_tree(),
                cells: self.cover.cells.len(),
                squares: (1..=self.k).map(|j| self.square_count(t, j)).collect(),
            })
            .collect();
        BallStats {
            rho_v: self.rho_v,
            rho_h: self.rho_h,
            vertices: self.num_vertices(),
            horizontal_cells: self.cover.cells.len() * self.trees.len(),
            trees,
        }
    }

    /// DOT of tree `w` with the tops of its j-squares arriving from `w t_j⁻¹` drawn thick.
    pub fn tree_dot(&self, rep: &BfhRep, w: &Word, overlay: Option<usize>) -> String {
        let mut thick: BTreeSet<u32> = BTreeSet::new();
        if let (Some(j), Some(&t)) = (overlay, self.tree_index.get(w)) {
            if self.tree_step[t][2 * (j - 1) + 1].is_some() {
                for tops in self.square_top[j - 1].iter().flatten() {
                    thick.extend(tops.iter().copied());
                }
            }
        }
        let mut s = format!("graph tree_{} {{\n  node [shape=point];\n", w.to_strings(Kind::Vertical).join("_"));
        for (i, v) in self.cover.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [xlabel=\"{}\"];", v.display(rep));
        }
        for (ci, c) in self.cover.cells.iter().enumerate() {
            let a = self.cover.index[&c.from(rep)];
            let b = self.cover.index[&c.to(rep)];
            let pw = if thick.contains(&(ci as u32)) { 3 } else { 1 };
            let _ = writeln!(s, "  v{a} -- v{b} [label=\"{}\", penwidth={pw}];", rep.edge_name(c.edge));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeStats {
    pub tree: Vec<String>,
    pub vertices: usize,
    pub cells: usize,
    pub squares: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BallStats {
    pub rho_v: usize,
    pub rho_h: usize,
    pub vertices: usize,
    pub horizontal_cells: usize,
    pub trees: Vec<TreeStats>,
}

/// Horizontal neighbours of a vertex of 𝒦 (unbounded).
pub fn horizontal_neighbours(rep: &BfhRep, x: &KVertex) -> Vec<(HCell, KVertex)> {
    neighbours(rep, &x.x)
        .into_iter()
        .map(|(c, y)| (HCell { v: x.v.clone(), cell: c }, KVertex { v: x.v.clone(), x: y }))
        .collect()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SquareCheck {
    pub squares: usize,
    pub violations: usize,
}

/// Every realized square's boundary word is trivial in G.
pub fn check_square_relators(rep: &BfhRep, ball: &CylinderBall) -> SquareCheck {
    use rayon::prelude::*;
    let per: Vec<(usize, usize)> = (0..ball.trees.len())
        .into_par_iter()
        .map(|t| {
            let mut n = 0;
            let mut bad = 0;
            for j in 1..=rep.k() {
                if ball.tree_step[t][2 * (j - 1)].is_none() {
                    continue;
                }
                for (ci, c) in ball.cover.cells.iter().enumerate() {
                    if ball.square_top[j - 1][ci].is_none() {
                        continue;
                    }
                    let s = Square { v: ball.trees[t].clone(), bottom: c.clone(), j };
                    n += 1;
                    if !crate::algebra::normalize(&s.boundary_word(rep), &rep.sigma).is_identity() {
                        bad += 1;
                    }
                }
            }
            (n, bad)
        })
        .collect();
    SquareCheck { squares: per.iter().map(|p| p.0).sum(), violations: per.iter().map(|p| p.1).sum() }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct MultiplicityCheck {
    /// Horizontal cells whose squares are all inside the ball.
    pub checked: usize,
    /// Cells skipped because some square on them leaves the ball.
    pub skipped: usize,
    pub violations: usize,
}

/// The number of j-squares whose top contains a cell equals the number of
/// occurrences of its label in the f_j-images, for every cell whose
/// squares are all realized.
pub fn check_top_multiplicity(rep: &BfhRep, ball: &CylinderBall) -> MultiplicityCheck {
    use rayon::prelude::*;
    let ncells = ball.cover.cells.len();
    let occurrences: Vec<Vec<usize>> = (1..=rep.k())
        .map(|j| {
            (0..rep.num_edges())
                .map(|e| {
                    rep.maps[j - 1].images.iter().flatten().filter(|s| s.unsigned_abs() as usize == e + 1).count()
                })
                .collect()
        })
        .collect();
    // counts are tree-independent in local coordinates: the squares feeding tree w
    // from w t_j⁻¹ have the same local tops in every tree pair.
    let results: Vec<MultiplicityCheck> = (1..=rep.k())
        .into_par_iter()
        .map(|j| {
            let mut counts = vec![0u32; ncells];
            for tops in ball.square_top[j - 1].iter().flatten() {
                for &c in tops {
                    counts[c as usize] += 1;
                }
            }
            let mut r = MultiplicityCheck::default();
            for (ci, c) in ball.cover.cells.iter().enumerate() {
                let bots = crate::cover::bot(rep, c, j);
                let inside = bots.iter().all(|b| {
                    ball.cell_index.get(b).is_some_and(|&bi| ball.square_top[j - 1][bi as usize].is_some())
                });
                if !inside {
                    r.skipped += 1;
                    continue;
                }
                r.checked += 1;
                if counts[ci] as usize != occurrences[j - 1][c.edge] {
                    r.violations += 1;
                }
            }
            r
        })
        .collect();
    let trees_with_pred = |j: usize| (0..ball.trees.len()).filter(|&t| ball.tree_step[t][2 * (j - 1) + 1].is_some()).count();
    let mut total = MultiplicityCheck::default();
    for (j, r) in results.into_iter().enumerate() {
        let m = trees_with_pred(j + 1);
        total.checked += r.checked * m;
        total.skipped += r.skipped * m;
        total.violations += r.violations * m;
    }
    total
}

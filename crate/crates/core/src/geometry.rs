//! Wall distance, properness probes, crossings and finite cubulation over a
//! family of vertical and diagonal walls seen through a query ball.

use crate::algebra::{GroupElement, Kind, Word};
use crate::cover::{neighbours, CoverCell};
use crate::cylinder::*;
use crate::rep::BfhRep;
use crate::walls::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Wall(#[from] WallError),
    #[error(transparent)]
    Cylinder(#[from] CylinderError),
    #[error("vertex {0} outside the query ball")]
    Outside(String),
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FamilyConfig {
    /// Ball whose vertices are compared.
    pub query: Region,
    /// Region of the fundamental cut sets.
    pub cut_region: Region,
    pub margin: Region,
    /// Orbit word-length bound.
    pub max_len: usize,
    pub opts: WallOptions,
}

impl FamilyConfig {
    pub fn new(query: Region, max_len: usize) -> Self {
        FamilyConfig {
            query,
            cut_region: query.grow(1, query.rho_h + 2),
            margin: Region { rho_v: 1, rho_h: 2 },
            max_len,
            opts: WallOptions::default(),
        }
    }
}

/// The wall of a fundamental EoE-cell with its truncated cut set.
pub struct Fundamental {
    pub label: usize,
    pub wall: DiagonalWall,
    pub cuts: CutSet,
    pub topmost: bool,
    /// Replicative generators and inverses; cut sets are invariant under them.
    gens: Vec<GroupElement>,
    /// Cuts of each class, keyed by (class, kind), with their positions.
    members: HashMap<(u32, CutKind), Vec<(KCell, GroupElement)>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum CutKind {
    H(usize),
    V(usize, usize),
}

fn kind_of(c: &KCell) -> CutKind {
    match c {
        KCell::H(h) => CutKind::H(h.cell.edge),
        KCell::V(v) => CutKind::V(v.j, v.from.x.base),
    }
}

fn position(rep: &BfhRep, c: &KCell) -> GroupElement {
    match c {
        KCell::H(h) => h.position(rep),
        KCell::V(v) => v.from.position(rep),
    }
}

const PULL_STEPS: usize = 6;

/// How far a cell lies outside a region.
fn excess(rep: &BfhRep, r: &Region, c: &KCell) -> usize {
    let ex = |x: &KVertex| x.v.len().saturating_sub(r.rho_v) + x.x.g.len().saturating_sub(r.rho_h);
    match c {
        KCell::H(h) => ex(&h.from(rep)).min(ex(&h.to(rep))),
        KCell::V(v) => ex(&v.from).min(ex(&v.to(rep))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Cut,
    NotCut,
    /// The pulled-back cell leaves the cut region.
    Unknown,
}

impl Fundamental {
    pub fn build(rep: &BfhRep, label: usize, cfg: &FamilyConfig) -> Result<Fundamental, WallError> {
        let wall = build_fundamental(rep, label, &cfg.opts)?;
        let cuts = cuts(rep, &wall, cfg.cut_region, cfg.margin, cfg.max_len);
        let mut members: HashMap<(u32, CutKind), Vec<(KCell, GroupElement)>> = HashMap::new();
        let all = cuts.horizontal.keys().map(|h| KCell::H(h.clone())).chain(cuts.vertical.keys().map(|v| KCell::V(v.clone())));
        for c in all {
            let class = cuts.class_of(&c).unwrap();
            let p = position(rep, &c);
            members.entry((class, kind_of(&c))).or_default().push((c, p));
        }
        for v in members.values_mut() {
            v.sort_by(|a, b| a.0.cmp(&b.0));
        }
        let mut gens: Vec<GroupElement> = Vec::new();
        for g in &wall.subgroups.replicative {
            for x in [g.element.clone(), g.element.invert(&rep.sigma)] {
                if !gens.contains(&x) {
                    gens.push(x);
                }
            }
        }
        Ok(Fundamental { label, topmost: rep.topmost_all(label), wall, cuts, members, gens })
    }

    /// Whether `g⁻¹·c` is a cut of this wall. Cells outside the cut region
    /// are first pushed back towards it by replicative generators.
    pub fn member(&self, rep: &BfhRep, g_inv: &GroupElement, c: &KCell) -> Membership {
        match self.pull_back(rep, g_inv, c) {
            None => Membership::Unknown,
            Some(d) if self.cuts.contains(&d) => Membership::Cut,
            Some(_) => Membership::NotCut,
        }
    }

    /// A cell in the cut region equivalent to `g⁻¹·c` under the replicative
    /// subgroup, found by greedy descent.
    pub fn pull_back(&self, rep: &BfhRep, g_inv: &GroupElement, c: &KCell) -> Option<KCell> {
        let r = self.cuts.region;
        let mut d = act_cell(rep, g_inv, c);
        let mut ex = excess(rep, &r, &d);
        for _ in 0..PULL_STEPS {
            if ex == 0 {
                return Some(d);
            }
            let best = self
                .gens
                .iter()
                .map(|s| act_cell(rep, s, &d))
                .map(|x| (excess(rep, &r, &x), x))
                .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))?;
            if best.0 >= ex {
                return None;
            }
            (ex, d) = best;
        }
        (ex == 0).then_some(d)
    }

    /// Elements `g` with `c ∈ g·W(E)`, one per class of cuts of the kind of
    /// `c`, each chosen short.
    fn through(&self, rep: &BfhRep, c: &KCell) -> Vec<(u32, GroupElement)> {
        let spec = &rep.sigma;
        let kc = kind_of(c);
        let pc = position(rep, c);
        let mut out = Vec::new();
        let mut classes: Vec<u32> = self.members.keys().filter(|(_, k)| *k == kc).map(|(cl, _)| *cl).collect();
        classes.sort();
        for cl in classes {
            let list = &self.members[&(cl, kc)];
            let best = list
                .iter()
                .map(|(_, p)| pc.multiply(&p.invert(spec), spec))
                .min_by_key(|g| (g.len(), g.clone()))
                .unwrap();
            out.push((cl, best));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum WallId {
    Vertical { w: String, j: usize },
    Diagonal { label: String, anchor: String },
}

#[derive(Clone, Debug)]
pub struct FamilyWall {
    pub id: WallId,
    pub vertical: Option<VerticalWall>,
    /// Fundamental index and translating element for diagonal walls.
    pub diagonal: Option<(usize, GroupElement)>,
    pub topmost: bool,
    /// Local ids of the query-ball cells that are cuts.
    pub trace: BTreeSet<u32>,
    /// Cells whose membership could not be decided.
    pub unknown_cells: BTreeSet<u32>,
    /// Side bit per query-ball vertex.
    pub sides: Vec<u64>,
    /// Vertices reached from the root through decided cells.
    pub labelled: Vec<u64>,
    /// Ball edges whose cut status contradicts the parity labels.
    pub contradictions: usize,
    pub unknown: usize,
}

fn bit(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(v: &mut [u64], i: usize) {
    v[i / 64] |= 1 << (i % 64);
}

impl FamilyWall {
    pub fn side(&self, id: usize) -> bool {
        bit(&self.sides, id)
    }

    pub fn is_labelled(&self, id: usize) -> bool {
        bit(&self.labelled, id)
    }

    /// Labels are path-independent and cover the whole ball.
    pub fn complete(&self) -> bool {
        self.contradictions == 0 && self.unknown == 0
    }
}

/// Every wall with a cut in the query ball.
pub struct WallFamily<'a> {
    pub rep: &'a BfhRep,
    pub cfg: FamilyConfig,
    pub ball: CylinderBall,
    pub fundamentals: Vec<Fundamental>,
    pub cells: Vec<KCell>,
    pub cell_index: HashMap<KCell, u32>,
    /// Per ball vertex: (neighbour, cell) pairs.
    pub edges: Vec<Vec<(u32, u32)>>,
    pub walls: Vec<FamilyWall>,
}

impl<'a> WallFamily<'a> {
    pub fn build(rep: &'a BfhRep, cfg: FamilyConfig) -> Result<WallFamily<'a>, GeometryError> {
        let ball = CylinderBall::build(rep, cfg.query.rho_v, cfg.query.rho_h)?;
        let fundamentals =
            rep.eoe_edges().into_iter().map(|e| Fundamental::build(rep, e, &cfg)).collect::<Result<Vec<_>, _>>()?;
        let cells = ball_cells(rep, &ball);
        let cell_index: HashMap<KCell, u32> = cells.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)).collect();
        let mut edges = vec![Vec::new(); ball.num_vertices()];
        let mut nb = Vec::new();
        for (u, out) in edges.iter_mut().enumerate() {
            ball.neighbours(u, &mut nb);
            let x = ball.vertex(u);
            for &w in &nb {
                let c = step_cell(rep, &x, &ball.vertex(w));
                out.push((w as u32, cell_index[&c]));
            }
        }
        let mut fam = WallFamily { rep, cfg, ball, fundamentals, cells, cell_index, edges, walls: Vec::new() };
        fam.collect_vertical();
        fam.collect_diagonal();
        Ok(fam)
    }

    fn collect_vertical(&mut self) {
        let mut seen = BTreeSet::new();
        for c in &self.cells {
            if let KCell::V(v) = c {
                let w = VerticalWall { w: v.from.v.clone(), j: v.j };
                if seen.insert(w.clone()) {
                    let n = self.ball.num_vertices();
                    let mut sides = vec![0u64; n.div_ceil(64)];
                    for id in 0..n {
                        if w.side(&self.ball.vertex(id)) == crate::cover::Side::Right {
                            set_bit(&mut sides, id);
                        }
                    }
                    let mut labelled = vec![0u64; n.div_ceil(64)];
                    (0..n).for_each(|id| set_bit(&mut labelled, id));
                    let trace = self
                        .cells
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| matches!(c, KCell::V(x) if x.from.v == w.w && x.j == w.j))
                        .map(|(i, _)| i as u32)
                        .collect();
                    self.walls.push(FamilyWall {
                        id: WallId::Vertical { w: w.w.display(Kind::Vertical), j: w.j },
                        vertical: Some(w),
                        diagonal: None,
                        topmost: false,
                        trace,
                        unknown_cells: BTreeSet::new(),
                        sides,
                        labelled,
                        contradictions: 0,
                        unknown: 0,
                    });
                }
            }
        }
    }

    fn collect_diagonal(&mut self) {
        let rep = self.rep;
        let spec = &rep.sigma;
        // (fundamental, class) pairs already recorded at each cell
        let mut at: HashMap<u32, HashSet<(usize, u32)>> = HashMap::new();
        let mut traces: HashSet<(usize, BTreeSet<u32>)> = HashSet::new();
        for ci in 0..self.cells.len() {
            let c = self.cells[ci].clone();
            for (fi, f) in self.fundamentals.iter().enumerate() {
                for (cl, g) in f.through(rep, &c) {
                    if at.get(&(ci as u32)).is_some_and(|s| s.contains(&(fi, cl))) {
                        continue;
                    }
                    let gi = g.invert(spec);
                    let mut trace = BTreeSet::new();
                    let mut unknown_cells = BTreeSet::new();
                    for (cj, d) in self.cells.iter().enumerate() {
                        match f.member(rep, &gi, d) {
                            Membership::Cut => {
                                trace.insert(cj as u32);
                                let dd = f.pull_back(rep, &gi, d).unwrap();
                                let k = f.cuts.class_of(&dd).unwrap();
                                at.entry(cj as u32).or_default().insert((fi, k));
                            }
                            Membership::Unknown => {
                                unknown_cells.insert(cj as u32);
                            }
                            Membership::NotCut => {}
                        }
                    }
                    if !traces.insert((fi, trace.clone())) {
                        continue;
                    }
                    let anchor = act_hcell(rep, &g, &f.wall.e);
                    let root = self
                        .ball
                        .id(&anchor.to(rep))
                        .or_else(|| {
                            let c = trace.iter().next().copied()?;
                            (0..self.edges.len()).find(|&u| self.edges[u].iter().any(|e| e.1 == c))
                        })
                        .unwrap_or(0);
                    let (sides, labelled, contradictions) = self.parity_labels(root, &trace, &unknown_cells);
                    self.walls.push(FamilyWall {
                        id: WallId::Diagonal { label: rep.edge_name(f.label).to_string(), anchor: anchor.display(rep) },
                        vertical: None,
                        diagonal: Some((fi, g)),
                        topmost: f.topmost,
                        unknown: unknown_cells.len(),
                        trace,
                        unknown_cells,
                        sides,
                        labelled,
                        contradictions,
                    });
                }
            }
        }
    }

    /// Parity labels from `root` through decided cells.
    fn parity_labels(&self, root: usize, trace: &BTreeSet<u32>, unknown: &BTreeSet<u32>) -> (Vec<u64>, Vec<u64>, usize) {
        let n = self.ball.num_vertices();
        let mut label = vec![u8::MAX; n];
        label[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        let mut bad = 0;
        while let Some(u) = queue.pop_front() {
            for &(w, c) in &self.edges[u] {
                if unknown.contains(&c) {
                    continue;
                }
                let want = label[u] ^ u8::from(trace.contains(&c));
                let w = w as usize;
                if label[w] == u8::MAX {
                    label[w] = want;
                    queue.push_back(w);
                } else if label[w] != want {
                    bad += 1;
                }
            }
        }
        let mut sides = vec![0u64; n.div_ceil(64)];
        let mut labelled = vec![0u64; n.div_ceil(64)];
        for (id, &l) in label.iter().enumerate() {
            if l != u8::MAX {
                set_bit(&mut labelled, id);
            }
            if l == 0 {
                set_bit(&mut sides, id);
            }
        }
        (sides, labelled, bad / 2)
    }

    pub fn diagonal_count(&self) -> usize {
        self.walls.iter().filter(|w| w.diagonal.is_some()).count()
    }

    /// Walls whose parity labels are not path-independent in the ball.
    pub fn inconsistent(&self) -> usize {
        self.walls.iter().filter(|w| w.contradictions > 0).count()
    }

    pub fn unknown_tests(&self) -> usize {
        self.walls.iter().map(|w| w.unknown).sum()
    }

    fn vid(&self, x: &KVertex) -> Result<usize, GeometryError> {
        self.ball.id(x).ok_or_else(|| GeometryError::Outside(x.display(self.rep)))
    }

    /// Cells along a ball geodesic.
    pub fn path_cells(&self, a: &KVertex, b: &KVertex) -> Result<Vec<u32>, GeometryError> {
        let path = self.ball.geodesic_path(self.rep, a, b)?;
        Ok(path.windows(2).map(|w| self.cell_index[&step_cell(self.rep, &w[0], &w[1])]).collect())
    }
}

/// Every horizontal and vertical cell of the ball.
pub fn ball_cells(rep: &BfhRep, ball: &CylinderBall) -> Vec<KCell> {
    let mut out = Vec::new();
    for (t, v) in ball.trees.iter().enumerate() {
        for c in &ball.cover.cells {
            out.push(KCell::H(HCell { v: v.clone(), cell: c.clone() }));
        }
        for j in 1..=rep.k() {
            if ball.tree_step[t][2 * (j - 1)].is_none() {
                continue;
            }
            for (l, x) in ball.cover.vertices.iter().enumerate() {
                if ball.fwd[j - 1][l].is_some() {
                    out.push(KCell::V(VCell { from: KVertex { v: v.clone(), x: x.clone() }, j }));
                }
            }
        }
    }
    out
}

/// The cell joining two adjacent vertices.
pub fn step_cell(rep: &BfhRep, a: &KVertex, b: &KVertex) -> KCell {
    if a.v == b.v {
        let (c, _) = neighbours(rep, &a.x).into_iter().find(|(_, y)| *y == b.x).expect("adjacent vertices");
        return KCell::H(HCell { v: a.v.clone(), cell: c });
    }
    for j in 1..=rep.k() {
        if vertical_target(rep, a, j) == *b {
            return KCell::V(VCell { from: a.clone(), j });
        }
        if vertical_target(rep, b, j) == *a {
            return KCell::V(VCell { from: b.clone(), j });
        }
    }
    panic!("vertices {} and {} are not adjacent", a.display(rep), b.display(rep))
}

// ---------------------------------------------------------------- distance

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Distance {
    pub vertical: usize,
    /// Diagonal walls whose side labels differ at the two vertices.
    pub diagonal: usize,
    /// Diagonal walls crossed an odd number of times along a ball geodesic.
    pub diagonal_by_path: usize,
    pub total: usize,
    pub separating: Vec<WallId>,
    /// Walls cutting the geodesic whose labels are undecided along it.
    pub unscoped: usize,
    /// Some counted wall has inconsistent parity labels in the ball.
    pub inconsistent: bool,
}

/// Wall distance between two ball vertices. Diagonal walls count only when
/// every cell of the chosen geodesic is decided for them.
pub fn wall_distance(fam: &WallFamily, a: &KVertex, b: &KVertex) -> Result<Distance, GeometryError> {
    let (ia, ib) = (fam.vid(a)?, fam.vid(b)?);
    let path = fam.path_cells(a, b)?;
    let mut d = Distance { vertical: a.v.inverse().mul(&b.v).len(), ..Default::default() };
    for w in fam.walls.iter().filter(|w| w.diagonal.is_some()) {
        let crossings = path.iter().filter(|c| w.trace.contains(c)).count();
        let scoped = w.is_labelled(ia) && w.is_labelled(ib) && !path.iter().any(|c| w.unknown_cells.contains(c));
        if !scoped {
            if crossings > 0 || path.iter().any(|c| w.unknown_cells.contains(c)) {
                d.unscoped += 1;
            }
            continue;
        }
        let by_side = w.side(ia) != w.side(ib);
        if by_side {
            d.diagonal += 1;
            d.separating.push(w.id.clone());
        }
        if crossings % 2 == 1 {
            d.diagonal_by_path += 1;
        }
        if (by_side || crossings > 0) && w.contradictions > 0 {
            d.inconsistent = true;
        }
    }
    d.total = d.vertical + d.diagonal;
    Ok(d)
}

// ------------------------------------------------------------- properness

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    pub length: usize,
    pub words: usize,
    pub exhaustive: bool,
    pub min_mu: usize,
    pub witness: String,
    /// Lower bound |g|/(2·EoE·C) − 1.
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub c: usize,
    pub eoe: usize,
    pub rows: Vec<ProbeRow>,
    pub monotone: bool,
    pub bound_holds: bool,
    /// Membership tests that left the cut region; those walls were skipped.
    pub unknown: usize,
}

/// Max biblock diameter over the fundamental walls.
pub fn biblock_constant(rep: &BfhRep, fundamentals: &[Fundamental]) -> usize {
    fundamentals.iter().map(|f| f.wall.biblock.diameter(rep)).max().unwrap_or(0).max(1)
}

struct ProbeWall {
    f: usize,
    g_inv: GroupElement,
    parity: bool,
}

/// Minima of μ(e, g) over reduced horizontal words g of each length up to
/// `max_len`. Lengths with at most `exhaustive_cap` words are enumerated,
/// longer ones sampled with `seed`.
pub fn properness_probe(
    rep: &BfhRep,
    fundamentals: &[Fundamental],
    max_len: usize,
    exhaustive_cap: usize,
    samples: usize,
    seed: u64,
) -> ProbeReport {
    use rand::{Rng, SeedableRng};
    let c = biblock_constant(rep, fundamentals);
    let eoe = rep.eoe_count();
    let n = rep.n() as i8;
    let mut rows: Vec<ProbeRow> = Vec::new();
    let mut unknown = 0usize;
    let count = |l: usize| if l == 0 { 1 } else { 2 * rep.n() * (2 * rep.n() - 1).pow(l as u32 - 1) };
    let exhaustive_to = (0..=max_len).take_while(|&l| count(l) <= exhaustive_cap).last().unwrap_or(0);
    let mut best: Vec<(usize, String)> = vec![(usize::MAX, String::new()); max_len + 1];
    let mut words = vec![0usize; max_len + 1];
    // exhaustive part by DFS with incremental parities
    let mut stack: Vec<(Word, Vec<ProbeWall>)> = vec![(Word::empty(), Vec::new())];
    while let Some((w, walls)) = stack.pop() {
        let l = w.len();
        words[l] += 1;
        let mu = walls.iter().filter(|x| x.parity).count();
        if mu < best[l].0 || (mu == best[l].0 && best[l].1.is_empty()) {
            best[l] = (mu, w.display(Kind::Horizontal));
        }
        if l == exhaustive_to {
            continue;
        }
        for a in (1..=n).flat_map(|a| [a, -a]) {
            if w.letters().last() == Some(&-a) {
                continue;
            }
            let mut w2 = w.clone();
            w2.push(a);
            let next = extend(rep, fundamentals, &w, a, &walls, &mut unknown);
            stack.push((w2, next));
        }
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    for l in exhaustive_to + 1..=max_len {
        for _ in 0..samples {
            let mut w = Word::empty();
            let mut walls = Vec::new();
            while w.len() < l {
                let a = rng.gen_range(1..=n) * if rng.gen_bool(0.5) { 1 } else { -1 };
                if w.letters().last() == Some(&-a) {
                    continue;
                }
                walls = extend(rep, fundamentals, &w, a, &walls, &mut unknown);
                w.push(a);
            }
            words[l] += 1;
            let mu = walls.iter().filter(|x| x.parity).count();
            if mu < best[l].0 {
                best[l] = (mu, w.display(Kind::Horizontal));
            }
        }
    }
    let denom = 2.0 * eoe as f64 * c as f64;
    for l in 0..=max_len {
        rows.push(ProbeRow {
            length: l,
            words: words[l],
            exhaustive: l <= exhaustive_to,
            min_mu: best[l].0,
            witness: best[l].1.clone(),
            bound: l as f64 / denom - 1.0,
        });
    }
    let monotone = rows.windows(2).all(|r| r[0].min_mu <= r[1].min_mu);
    let bound_holds = rows.iter().all(|r| r.min_mu as f64 >= r.bound);
    ProbeReport { c, eoe, rows, monotone, bound_holds, unknown }
}

/// Parities after appending the letter `a` to the horizontal path `w`.
fn extend(rep: &BfhRep, fundamentals: &[Fundamental], w: &Word, a: i8, walls: &[ProbeWall], unknown: &mut usize) -> Vec<ProbeWall> {
    let spec = &rep.sigma;
    let edge = rep.essential_edge[a.unsigned_abs() as usize - 1];
    let g = if a > 0 { w.clone() } else { w.mul(&Word::raw(vec![a])) };
    let c = KCell::H(HCell { v: Word::empty(), cell: CoverCell { g, edge } });
    let mut out: Vec<ProbeWall> = Vec::with_capacity(walls.len() + 2);
    let mut hit: HashSet<(usize, u32)> = HashSet::new();
    for x in walls {
        let f = &fundamentals[x.f];
        let mut p = x.parity;
        match f.member(rep, &x.g_inv, &c) {
            Membership::Cut => {
                p = !p;
                let k = f.cuts.class_of(&f.pull_back(rep, &x.g_inv, &c).unwrap()).unwrap();
                hit.insert((x.f, k));
            }
            Membership::Unknown => *unknown += 1,
            Membership::NotCut => {}
        }
        out.push(ProbeWall { f: x.f, g_inv: x.g_inv.clone(), parity: p });
    }
    for (fi, f) in fundamentals.iter().enumerate() {
        for (cl, g) in f.through(rep, &c) {
            if hit.contains(&(fi, cl)) {
                continue;
            }
            out.push(ProbeWall { f: fi, g_inv: g.invert(spec), parity: true });
        }
    }
    out
}

// -------------------------------------------------------------- crossings

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Crossing {
    True,
    FalseAtRadius,
    Unknown,
}

pub fn walls_cross(fam: &WallFamily, a: usize, b: usize) -> Crossing {
    let (x, y) = (&fam.walls[a], &fam.walls[b]);
    if x.contradictions > 0 || y.contradictions > 0 {
        return Crossing::Unknown;
    }
    let mut seen = [0u64; 4];
    for i in 0..x.sides.len() {
        let m = x.labelled[i] & y.labelled[i];
        let (p, q) = (x.sides[i], y.sides[i]);
        seen[0] |= p & q & m;
        seen[1] |= p & !q & m;
        seen[2] |= !p & q & m;
        seen[3] |= !p & !q & m;
    }
    if seen.iter().all(|&s| s != 0) {
        Crossing::True
    } else if x.complete() && y.complete() {
        Crossing::FalseAtRadius
    } else {
        Crossing::Unknown
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossingMatrix {
    pub n: usize,
    pub confirmed: usize,
    pub unknown: usize,
    #[serde(skip)]
    pub adj: Vec<Vec<u64>>,
}

impl CrossingMatrix {
    pub fn get(&self, a: usize, b: usize) -> bool {
        self.adj[a][b / 64] >> (b % 64) & 1 == 1
    }
}

/// Confirmed crossings, dropping pairs of vertical walls and pairs of
/// topmost walls, which never cross.
pub fn crossing_matrix(fam: &WallFamily) -> CrossingMatrix {
    use rayon::prelude::*;
    let n = fam.walls.len();
    let rows: Vec<(Vec<u64>, usize)> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut row = vec![0u64; n.div_ceil(64)];
            let mut unk = 0;
            for b in 0..n {
                if a == b {
                    continue;
                }
                let (x, y) = (&fam.walls[a], &fam.walls[b]);
                if (x.vertical.is_some() && y.vertical.is_some()) || (x.topmost && y.topmost) {
                    continue;
                }
                match walls_cross(fam, a, b) {
                    Crossing::True => row[b / 64] |= 1 << (b % 64),
                    Crossing::Unknown => unk += 1,
                    Crossing::FalseAtRadius => {}
                }
            }
            (row, unk)
        })
        .collect();
    let confirmed = rows.iter().map(|(r, _)| r.iter().map(|x| x.count_ones() as usize).sum::<usize>()).sum::<usize>() / 2;
    let unknown = rows.iter().map(|(_, u)| u).sum::<usize>() / 2;
    CrossingMatrix { n, confirmed, unknown, adj: rows.into_iter().map(|(r, _)| r).collect() }
}

fn bron_kerbosch(m: &CrossingMatrix, r: &mut Vec<usize>, p: Vec<usize>, mut x: Vec<usize>, best: &mut Vec<usize>) {
    if p.is_empty() {
        if x.is_empty() && r.len() > best.len() {
            *best = r.clone();
        }
        return;
    }
    if r.len() + p.len() <= best.len() {
        return;
    }
    let pivot = *p.iter().chain(&x).max_by_key(|&&u| p.iter().filter(|&&v| m.get(u, v)).count()).unwrap();
    let cand: Vec<usize> = p.iter().copied().filter(|&v| !m.get(pivot, v)).collect();
    let mut p = p;
    for v in cand {
        r.push(v);
        let np = p.iter().copied().filter(|&u| m.get(v, u)).collect();
        let nx = x.iter().copied().filter(|&u| m.get(v, u)).collect();
        bron_kerbosch(m, r, np, nx, best);
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CliqueReport {
    pub size: usize,
    pub witness: Vec<WallId>,
    pub vertical_in_witness: usize,
    pub topmost_in_witness: usize,
    pub walls: usize,
    pub confirmed_crossings: usize,
    pub unknown_crossings: usize,
}

/// Largest pairwise-crossing family; among the largest, one containing a
/// vertical wall is preferred.
pub fn max_crossing_family(fam: &WallFamily, m: &CrossingMatrix) -> CliqueReport {
    let mut best = Vec::new();
    bron_kerbosch(m, &mut Vec::new(), (0..m.n).collect(), Vec::new(), &mut best);
    for v in (0..m.n).filter(|&v| fam.walls[v].vertical.is_some()) {
        let nb: Vec<usize> = (0..m.n).filter(|&u| m.get(v, u)).collect();
        if nb.len() + 1 < best.len() {
            continue;
        }
        let mut sub = Vec::new();
        bron_kerbosch(m, &mut vec![v], nb, Vec::new(), &mut sub);
        if sub.len() >= best.len() && !best.iter().any(|&u| fam.walls[u].vertical.is_some()) {
            best = sub;
            break;
        }
    }
    best.sort();
    CliqueReport {
        size: best.len(),
        witness: best.iter().map(|&i| fam.walls[i].id.clone()).collect(),
        vertical_in_witness: best.iter().filter(|&&i| fam.walls[i].vertical.is_some()).count(),
        topmost_in_witness: best.iter().filter(|&&i| fam.walls[i].topmost).count(),
        walls: m.n,
        confirmed_crossings: m.confirmed,
        unknown_crossings: m.unknown,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BridgeBound {
    pub m: usize,
    pub bound: usize,
    /// Bridge address and side with the EoE-cells sharing it.
    pub groups: BTreeMap<String, Vec<String>>,
}

/// M = the largest number of EoE-cells whose main bridge is one same cell,
/// on one same side of it.
pub fn bound_check(rep: &BfhRep, opts: &WallOptions) -> Result<BridgeBound, WallError> {
    let mut bridges: Vec<(usize, CoverCell, CoverCell)> = Vec::new();
    for e in rep.eoe_edges() {
        let w = build_fundamental(rep, e, opts)?;
        if let Some(c) = &w.biblock.companion {
            bridges.push((e, w.e.cell.clone(), c.bridge.cell.clone()));
        }
    }
    let mut groups: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (_, _, b0) in &bridges {
        for (e, ecell, b) in &bridges {
            if b.edge != b0.edge || b.from(rep).base != b0.from(rep).base {
                continue;
            }
            // translate so that the bridges coincide
            let u = b0.g.mul(&b.g.inverse());
            let ec = ecell.translate(&u);
            let da = crate::cover::distance(rep, &ec.from(rep), &b0.from(rep));
            let db = crate::cover::distance(rep, &ec.from(rep), &b0.to(rep));
            let side = if da < db { "from" } else { "to" };
            let key = format!("{} {}", b0.display(rep), side);
            let name = format!("{} ({})", ec.display(rep), rep.edge_name(*e));
            let g = groups.entry(key).or_default();
            if !g.contains(&name) {
                g.push(name);
            }
        }
    }
    let m = groups.values().map(|g| g.len()).max().unwrap_or(0);
    Ok(BridgeBound { m, bound: 2 * m + 2, groups })
}

// ------------------------------------------------------------ cubulation

#[derive(Clone, Debug, Serialize)]
pub struct CubeComplex {
    pub walls: usize,
    pub vertices: usize,
    /// Number of q-cubes for q = 0, 1, ...
    pub cubes: Vec<usize>,
    pub dimension: usize,
    /// Pairs of crossing walls flippable at a vertex whose double flip is
    /// not realized.
    pub empty_squares: usize,
    #[serde(skip)]
    pub orientations: Vec<Vec<u64>>,
    #[serde(skip)]
    pub edges: Vec<(usize, usize, usize)>,
}

fn flip(o: &[u64], s: &[usize]) -> Vec<u64> {
    let mut o = o.to_vec();
    for &i in s {
        o[i / 64] ^= 1 << (i % 64);
    }
    o
}

/// The image of the query ball in the cube complex dual to the family.
/// Vertices are the side assignments realized by ball vertices, edges join
/// assignments differing on one wall, and a q-cube is filled at a vertex for
/// each q pairwise-crossing walls flippable there.
pub fn cubulate(fam: &WallFamily, m: &CrossingMatrix) -> CubeComplex {
    let nw = fam.walls.len();
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut orientations: Vec<Vec<u64>> = Vec::new();
    for id in 0..fam.ball.num_vertices() {
        let mut o = vec![0u64; nw.div_ceil(64)];
        for (i, w) in fam.walls.iter().enumerate() {
            if w.side(id) {
                o[i / 64] |= 1 << (i % 64);
            }
        }
        if !index.contains_key(&o) {
            index.insert(o.clone(), orientations.len());
            orientations.push(o);
        }
    }
    let mut edges = Vec::new();
    let mut cubes: Vec<HashSet<(Vec<usize>, Vec<u64>)>> = Vec::new();
    let mut empty_squares = 0;
    for (u, o) in orientations.iter().enumerate() {
        let fl: Vec<usize> = (0..nw).filter(|&i| index.contains_key(&flip(o, &[i]))).collect();
        for &i in &fl {
            let v = index[&flip(o, &[i])];
            if u < v {
                edges.push((u, v, i));
            }
        }
        for (x, &a) in fl.iter().enumerate() {
            for &b in &fl[x + 1..] {
                if m.get(a, b) && !index.contains_key(&flip(o, &[a, b])) {
                    empty_squares += 1;
                }
            }
        }
        // cliques among the flippable walls, grown in index order
        let mut stack: Vec<Vec<usize>> = fl.iter().map(|&i| vec![i]).collect();
        while let Some(s) = stack.pop() {
            if cubes.len() < s.len() {
                cubes.resize_with(s.len(), HashSet::new);
            }
            let mut base = o.clone();
            for &i in &s {
                base[i / 64] &= !(1 << (i % 64));
            }
            cubes[s.len() - 1].insert((s.clone(), base));
            let last = *s.last().unwrap();
            for &a in fl.iter().filter(|&&a| a > last && s.iter().all(|&b| m.get(a, b))) {
                let mut t = s.clone();
                t.push(a);
                stack.push(t);
            }
        }
    }
    let mut counts = vec![orientations.len()];
    counts.extend(cubes.iter().map(|c| c.len()));
    CubeComplex {
        walls: nw,
        vertices: orientations.len(),
        dimension: counts.len() - 1,
        cubes: counts,
        empty_squares,
        orientations,
        edges,
    }
}

/// DOT of the 1-skeleton.
pub fn cube_dot(cc: &CubeComplex) -> String {
    let mut s = String::from("graph cubes {\n  node [shape=point];\n");
    for v in 0..cc.vertices {
        let _ = writeln!(s, "  c{v};");
    }
    for (a, b, w) in &cc.edges {
        let _ = writeln!(s, "  c{a} -- c{b} [label=\"{w}\"];");
    }
    s.push_str("}\n");
    s
}

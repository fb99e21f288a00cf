//! Vertical and diagonal walls of 𝒦.
//!
//! A diagonal wall is built from one EoE-cell `E`. Its biblock (the white
//! block, plus a companion block when `E` is not topmost) fixes the
//! elementary cuts and the generators of the replicative subgroup ℜ(E). The
//! cut set is the ℜ(E)-orbit of the elementary cuts, enumerated by words of
//! bounded length inside a region, so every statement about it is local.
//!
//! Tops, bottoms and colours only use cover coordinates: every horizontal
//! tree is a copy of the same cover, and the vertical maps act on local
//! coordinates in the same way in every tree.

use crate::algebra::{GroupElement, Kind, Word};
use crate::cover::{
    bot_cell, bot_star, bt, completion, distance, geodesic, hull, lift_cell, lift_vertex, top_cell, twins,
    unlift_vertex, CoverCell, CoverVertex, Side, Subtree, TwinPair,
};
use crate::cylinder::{CylinderBall, HCell, KCell, KVertex, VCell};
use crate::rep::BfhRep;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum WallError {
    #[error("{0} is not an EoE-cell")]
    NotEoe(String),
    #[error("Top(E) depends on the lift index: {0}")]
    TopMismatch(String),
    #[error("colour anchor {0} is not in the coloured tree")]
    Anchor(String),
    #[error("coloured tree is disconnected at {0}")]
    Disconnected(String),
    #[error("no twin pair spans {0}")]
    MissingTwins(String),
    #[error("Bot* has a non-exceptional cell but no bridge candidate exists")]
    NoBridge,
    #[error("vertex {0} has no colour")]
    Uncoloured(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

// ---------------------------------------------------------------- vertical

/// The wall of the vertical cell from `w` to `w t_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VerticalWall {
    pub w: Word,
    pub j: usize,
}

impl VerticalWall {
    /// `Right` on the component of `F_k` containing `w t_j`.
    pub fn side_of_word(&self, u: &Word) -> Side {
        let d = self.w.inverse().mul(u);
        if d.letters().first() == Some(&(self.j as i8)) {
            Side::Right
        } else {
            Side::Left
        }
    }

    pub fn side(&self, x: &KVertex) -> Side {
        self.side_of_word(&x.v)
    }

    pub fn display(&self) -> String {
        format!("V[{} ; t{}]", self.w.display(Kind::Vertical), self.j)
    }
}

/// The vertical walls crossed by the reduced path from `a` to `b` in `F_k`.
pub fn vertical_walls_separating(a: &Word, b: &Word) -> Vec<VerticalWall> {
    let mut at = a.clone();
    let mut out = Vec::new();
    for &l in a.inverse().mul(b).letters() {
        let next = at.mul(&Word::raw(vec![l]));
        if l > 0 {
            out.push(VerticalWall { w: at.clone(), j: l as usize });
        } else {
            out.push(VerticalWall { w: next.clone(), j: (-l) as usize });
        }
        at = next;
    }
    out
}

pub fn vertical_walls_between(g: &GroupElement, g2: &GroupElement) -> usize {
    g.v.inverse().mul(&g2.v).len()
}

// ------------------------------------------------------------ tops/bottoms

#[derive(Clone, Debug)]
pub struct TopBottom {
    /// Bot(E).
    pub bot: BTreeSet<CoverCell>,
    /// Top_j(E), in the coordinates of the tree above by t_j.
    pub top_j: Vec<Subtree>,
    /// Top(i, E).
    pub top_i: Vec<Subtree>,
    /// Top(E), in the tree of E.
    pub top: Subtree,
    /// B(E).
    pub bottom: Subtree,
}

fn image(rep: &BfhRep, j: usize, t: &Subtree) -> Subtree {
    let mut out = Subtree::default();
    for v in &t.vertices {
        out.vertices.insert(lift_vertex(rep, j, v));
    }
    for c in &t.cells {
        out.add_path(rep, &lift_cell(rep, j, c));
    }
    out
}

pub fn top_and_bottom(rep: &BfhRep, e: &CoverCell) -> Result<TopBottom, WallError> {
    if !e.is_eoe(rep) {
        return Err(WallError::NotEoe(e.display(rep)));
    }
    let k = rep.k();
    let mut bot: BTreeSet<CoverCell> = BTreeSet::from([e.clone()]);
    for i in 1..=k {
        bot.extend(bt(rep, e, i));
    }
    let ends: Vec<CoverVertex> = bot.iter().flat_map(|c| [c.from(rep), c.to(rep)]).collect();
    let mut t0 = hull(rep, ends.iter());
    t0.cells.extend(bot.iter().cloned());
    let top_j: Vec<Subtree> = (1..=k).map(|j| image(rep, j, &t0)).collect();
    let g: Vec<Word> = (1..=k).map(|i| top_cell(rep, e, i).g).collect();
    let mut top_i = Vec::with_capacity(k);
    for i in 0..k {
        let mut t = Subtree::default();
        for j in 0..k {
            let s = top_j[j].translate(&g[i].mul(&g[j].inverse()));
            t.vertices.extend(s.vertices);
            t.cells.extend(s.cells);
        }
        top_i.push(t);
    }
    let top = top_i[0].translate(&e.g.mul(&g[0].inverse()));
    for i in 1..k {
        if top_i[i].translate(&e.g.mul(&g[i].inverse())) != top {
            return Err(WallError::TopMismatch(format!("{} at i={}", e.display(rep), i + 1)));
        }
    }
    let mut pre: Vec<CoverVertex> = vec![e.from(rep), e.to(rep)];
    for (i, t) in top_i.iter().enumerate() {
        pre.extend(t.vertices.iter().map(|y| unlift_vertex(rep, i + 1, y)));
    }
    let mut h = hull(rep, pre.iter());
    h.cells.insert(e.clone());
    let bottom = completion(rep, &h);
    Ok(TopBottom { bot, top_j, top_i, top, bottom })
}

// ----------------------------------------------------------------- colours

/// One coordinate of an admissible colour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coord {
    Zero,
    /// Flips exactly across `flips`, equal to `value` at `anchor`.
    Parity { flips: BTreeSet<CoverCell>, anchor: CoverVertex, value: u8 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Role {
    CBottom,
    CTop,
}

/// A c-top or c-bottom: a subtree of the horizontal tree `v` with a k-colour.
#[derive(Clone, Debug)]
pub struct ColoredTree {
    pub role: Role,
    pub v: Word,
    /// Nucleus of a c-top, centre of a c-bottom.
    pub centre: CoverCell,
    pub epsilon: Sign,
    pub tree: Subtree,
    pub coords: Vec<Coord>,
    pub colour: BTreeMap<CoverVertex, Vec<u8>>,
}

impl ColoredTree {
    pub fn colour_at(&self, x: &CoverVertex) -> Option<&[u8]> {
        self.colour.get(x).map(|c| c.as_slice())
    }

    pub fn centre_cell(&self) -> HCell {
        HCell { v: self.v.clone(), cell: self.centre.clone() }
    }

    fn colour_or_err(&self, rep: &BfhRep, x: &CoverVertex) -> Result<Vec<u8>, WallError> {
        self.colour.get(x).cloned().ok_or_else(|| WallError::Uncoloured(x.display(rep)))
    }
}

fn paint(rep: &BfhRep, tree: &Subtree, coords: &[Coord]) -> Result<BTreeMap<CoverVertex, Vec<u8>>, WallError> {
    let mut adj: BTreeMap<&CoverVertex, Vec<(CoverVertex, &CoverCell)>> = BTreeMap::new();
    let ends: Vec<(CoverVertex, CoverVertex, &CoverCell)> =
        tree.cells.iter().map(|c| (c.from(rep), c.to(rep), c)).collect();
    for (a, b, c) in &ends {
        if let Some(v) = tree.vertices.get(a) {
            adj.entry(v).or_default().push((b.clone(), c));
        }
        if let Some(v) = tree.vertices.get(b) {
            adj.entry(v).or_default().push((a.clone(), c));
        }
    }
    let mut out: BTreeMap<CoverVertex, Vec<u8>> =
        tree.vertices.iter().map(|v| (v.clone(), vec![0; coords.len()])).collect();
    for (l, coord) in coords.iter().enumerate() {
        let Coord::Parity { flips, anchor, value } = coord else { continue };
        if !tree.vertices.contains(anchor) {
            return Err(WallError::Anchor(anchor.display(rep)));
        }
        let mut seen: BTreeMap<CoverVertex, u8> = BTreeMap::from([(anchor.clone(), *value)]);
        let mut queue = VecDeque::from([anchor.clone()]);
        while let Some(u) = queue.pop_front() {
            let cu = seen[&u];
            for (w, c) in adj.get(&u).map(|v| v.as_slice()).unwrap_or(&[]) {
                if seen.contains_key(w) {
                    continue;
                }
                seen.insert(w.clone(), cu ^ u8::from(flips.contains(*c)));
                queue.push_back(w.clone());
            }
        }
        if seen.len() != tree.vertices.len() {
            return Err(WallError::Disconnected(anchor.display(rep)));
        }
        for (v, c) in seen {
            out.get_mut(&v).unwrap()[l] = c;
        }
    }
    Ok(out)
}

fn top_hcell(rep: &BfhRep, e: &HCell, i: usize) -> HCell {
    HCell { v: e.v.mul(&Word::gen(i)), cell: top_cell(rep, &e.cell, i) }
}

fn bot_hcell(rep: &BfhRep, e: &HCell, i: usize) -> HCell {
    HCell { v: e.v.mul(&Word::gen(i).inverse()), cell: bot_cell(rep, &e.cell, i) }
}

/// Element of G carrying the cell `a` to the cell `b` (same label).
pub fn carry(rep: &BfhRep, a: &HCell, b: &HCell) -> GroupElement {
    b.position(rep).multiply(&a.position(rep).invert(&rep.sigma), &rep.sigma)
}

/// The (ε, I, F)-c-top with nucleus `f`.
pub fn c_top(rep: &BfhRep, f: &HCell, epsilon: Sign, iset: &[usize]) -> Result<ColoredTree, WallError> {
    let tb = top_and_bottom(rep, &f.cell)?;
    let anchor = f.cell.from(rep);
    let coords: Vec<Coord> = (1..=rep.k())
        .map(|l| {
            if iset.contains(&l) {
                Coord::Parity {
                    flips: BTreeSet::from([f.cell.clone()]),
                    anchor: anchor.clone(),
                    value: u8::from(epsilon == Sign::Plus),
                }
            } else {
                Coord::Parity { flips: bot_star(rep, &f.cell, l).into_iter().collect(), anchor: anchor.clone(), value: 0 }
            }
        })
        .collect();
    let colour = paint(rep, &tb.top, &coords)?;
    Ok(ColoredTree { role: Role::CTop, v: f.v.clone(), centre: f.cell.clone(), epsilon, tree: tb.top, coords, colour })
}

/// The (ε, I, E)-c-bottom with centre `e`.
pub fn c_bottom(rep: &BfhRep, e: &HCell, epsilon: Sign, iset: &[usize]) -> Result<ColoredTree, WallError> {
    let tb = top_and_bottom(rep, &e.cell)?;
    let anchor = e.cell.from(rep);
    let coords: Vec<Coord> = (1..=rep.k())
        .map(|l| {
            if iset.is_empty() {
                Coord::Parity { flips: bot_star(rep, &e.cell, l).into_iter().collect(), anchor: anchor.clone(), value: 0 }
            } else if iset.contains(&l) {
                Coord::Parity {
                    flips: bt(rep, &e.cell, l).into_iter().collect(),
                    anchor: anchor.clone(),
                    value: u8::from(epsilon == Sign::Plus),
                }
            } else {
                Coord::Zero
            }
        })
        .collect();
    let colour = paint(rep, &tb.bottom, &coords)?;
    Ok(ColoredTree { role: Role::CBottom, v: e.v.clone(), centre: e.cell.clone(), epsilon, tree: tb.bottom, coords, colour })
}

// ------------------------------------------------------------------ blocks

#[derive(Clone, Debug)]
pub struct Block {
    pub epsilon: Sign,
    pub iset: Vec<usize>,
    pub centre: HCell,
    pub bottom: ColoredTree,
    pub tops: Vec<ColoredTree>,
}

/// 𝔐(ε, I, E); `iset` is empty for the white block.
pub fn make_block(rep: &BfhRep, e: &HCell, epsilon: Sign, iset: &[usize]) -> Result<Block, WallError> {
    let bottom = c_bottom(rep, e, epsilon, iset)?;
    let mut tops = Vec::new();
    if iset.is_empty() {
        for l in 1..=rep.k() {
            tops.push(c_top(rep, &top_hcell(rep, e, l), epsilon, iset)?);
        }
    } else {
        for &i in iset {
            tops.push(c_top(rep, &top_hcell(rep, e, i), epsilon.flip(), iset)?);
        }
    }
    Ok(Block { epsilon, iset: iset.to_vec(), centre: e.clone(), bottom, tops })
}

impl Block {
    pub fn trees(&self) -> impl Iterator<Item = &ColoredTree> {
        std::iter::once(&self.bottom).chain(self.tops.iter())
    }

    pub fn nuclei(&self) -> Vec<HCell> {
        self.tops.iter().map(|t| t.centre_cell()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum GenKind {
    Lift,
    Stair,
    Horizontal,
    Mirror,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub kind: GenKind,
    /// Lift or stair index; 0 for shifts.
    pub index: usize,
    pub element: GroupElement,
}

/// ℒ_{l, E^l_bot} for every l ∉ I.
pub fn block_lifts(rep: &BfhRep, b: &Block) -> Vec<Generator> {
    (1..=rep.k())
        .filter(|l| !b.iset.contains(l))
        .map(|l| Generator { kind: GenKind::Lift, index: l, element: carry(rep, &bot_hcell(rep, &b.centre, l), &b.centre) })
        .collect()
}

/// Block-lifts of the companion: ℒ_{l,N^l_bot} for N = Z^i_top, i ∈ I and
/// l ∉ I, written as the element carrying N to N^l_top.
pub fn companion_lifts(rep: &BfhRep, c: &Companion, iset: &[usize]) -> Vec<Generator> {
    let mut out = Vec::new();
    for &i in iset {
        let n = top_hcell(rep, &c.z, i);
        for l in (1..=rep.k()).filter(|l| !iset.contains(l)) {
            out.push(Generator { kind: GenKind::Lift, index: l, element: carry(rep, &n, &top_hcell(rep, &n, l)) });
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Stair {
    pub sign: Sign,
    pub index: usize,
    pub element: GroupElement,
    /// The colour at the two ends of the connecting essential cell agree.
    pub colours_agree: bool,
}

fn spanning_pair(rep: &BfhRep, tree: &Subtree, cell: &CoverCell) -> Option<TwinPair> {
    twins(rep, tree).into_iter().find(|p| p.span(rep).cells(rep).iter().any(|(c, _)| c == cell))
}

/// Which stairs of a companion block enter the replicative subgroup.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum StairSigns {
    /// 𝒮_{ε,i}, ε the sign of the block.
    #[default]
    Block,
    Opposite,
    Both,
}

impl StairSigns {
    fn signs(self, eps: Sign) -> Vec<Sign> {
        match self {
            StairSigns::Block => vec![eps],
            StairSigns::Opposite => vec![eps.flip()],
            StairSigns::Both => vec![Sign::Plus, Sign::Minus],
        }
    }
}

/// Lifts of the companion added to the replicative subgroup.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum CompanionLifts {
    #[default]
    None,
    /// Block-lifts of the companion block at its centre.
    Centre,
    /// Lifts at the companion nuclei, see [`companion_lifts`].
    Nucleus,
}

/// Stairs 𝒮_{σ,i} for every i ∈ I.
pub fn block_stairs(rep: &BfhRep, b: &Block, signs: StairSigns) -> Result<Vec<Stair>, WallError> {
    let mut out = Vec::new();
    if b.iset.is_empty() {
        return Ok(out);
    }
    let pb = spanning_pair(rep, &b.bottom.tree, &b.centre.cell)
        .ok_or_else(|| WallError::MissingTwins(b.centre.display(rep)))?;
    let bin = HCell { v: b.bottom.v.clone(), cell: pb.incoming.clone() };
    let bout = HCell { v: b.bottom.v.clone(), cell: pb.outgoing.clone() };
    for (top, &i) in b.tops.iter().zip(&b.iset) {
        let pt = spanning_pair(rep, &top.tree, &top.centre)
            .ok_or_else(|| WallError::MissingTwins(top.centre_cell().display(rep)))?;
        let tin = HCell { v: top.v.clone(), cell: pt.incoming.clone() };
        let tout = HCell { v: top.v.clone(), cell: pt.outgoing.clone() };
        for sign in signs.signs(b.epsilon) {
            let st = match sign {
                Sign::Plus => {
                    let agree = top.colour_or_err(rep, &pt.outgoing.from(rep))?
                        == b.bottom.colour_or_err(rep, &pb.incoming.to(rep))?;
                    Stair { sign, index: i, element: carry(rep, &tout, &bin), colours_agree: agree }
                }
                Sign::Minus => {
                    let agree = top.colour_or_err(rep, &pt.incoming.to(rep))?
                        == b.bottom.colour_or_err(rep, &pb.outgoing.from(rep))?;
                    Stair { sign, index: i, element: carry(rep, &tin, &bout), colours_agree: agree }
                }
            };
            out.push(st);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- biblock

/// Which cell the companion block is centred on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum CompanionReading {
    /// 𝔐(ε, I_E, Z).
    #[default]
    Centre,
    /// 𝔐(ε, I_E, Z^i_top) for every i ∈ I_E.
    Tops,
}

#[derive(Clone, Debug)]
pub struct BridgeCandidate {
    pub pair: TwinPair,
    pub bridge: CoverCell,
    pub twin: CoverCell,
    /// Left translation of the tree coordinates carrying `twin` to `bridge`.
    pub shift: Word,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Companion {
    pub z: HCell,
    pub bridge: HCell,
    pub shift: Word,
    pub indices: Vec<usize>,
    pub blocks: Vec<Block>,
    /// White and companion colours at the two ends of the main bridge.
    pub bridge_colours: (Vec<u8>, Vec<u8>),
}

#[derive(Clone, Debug)]
pub struct Biblock {
    pub e: HCell,
    pub iset: Vec<usize>,
    pub white: Block,
    pub companion: Option<Companion>,
    pub candidates: Vec<BridgeCandidate>,
}

impl Biblock {
    pub fn blocks(&self) -> impl Iterator<Item = &Block> {
        std::iter::once(&self.white).chain(self.companion.iter().flat_map(|c| c.blocks.iter()))
    }

    pub fn trees(&self) -> impl Iterator<Item = &ColoredTree> {
        self.blocks().flat_map(|b| b.trees())
    }

    /// Largest diameter of a coloured tree.
    pub fn diameter(&self, rep: &BfhRep) -> usize {
        self.trees().map(|t| t.tree.diameter(rep)).max().unwrap_or(0)
    }
}

fn far_end(rep: &BfhRep, c: &CoverCell, tree: &Subtree) -> CoverVertex {
    let from = c.from(rep);
    if tree.vertices.contains(&from) {
        c.to(rep)
    } else {
        from
    }
}

fn odd_crossings(rep: &BfhRep, a: &CoverVertex, b: &CoverVertex, set: &BTreeSet<CoverCell>) -> bool {
    geodesic(rep, a, b).cells(rep).iter().filter(|(c, _)| set.contains(c)).count() % 2 == 1
}

/// E-spanning twin pairs of Cr(B(E)) whose bridge has a non-empty index set.
pub fn bridge_candidates(rep: &BfhRep, e: &CoverCell, bottom: &Subtree) -> Vec<BridgeCandidate> {
    let stars: Vec<BTreeSet<CoverCell>> = (1..=rep.k()).map(|i| bot_star(rep, e, i).into_iter().collect()).collect();
    let from = e.from(rep);
    let mut out = Vec::new();
    for p in twins(rep, bottom) {
        let span = p.span(rep);
        let (a, b) = (span.start.clone(), span.end(rep));
        if !stars.iter().any(|s| odd_crossings(rep, &a, &b, s)) {
            continue;
        }
        for (gamma, tw) in [(&p.incoming, &p.outgoing), (&p.outgoing, &p.incoming)] {
            let far = far_end(rep, tw, bottom);
            let indices: Vec<usize> =
                (1..=rep.k()).filter(|&i| odd_crossings(rep, &from, &far, &stars[i - 1])).collect();
            if indices.is_empty() {
                continue;
            }
            out.push(BridgeCandidate {
                pair: p.clone(),
                bridge: tw.clone(),
                twin: gamma.clone(),
                shift: tw.g.mul(&gamma.g.inverse()),
                indices,
            });
        }
    }
    out
}

pub fn biblock(rep: &BfhRep, e: &HCell, reading: CompanionReading) -> Result<Biblock, WallError> {
    let iset = crate::cover::i_set(rep, &e.cell);
    let white = make_block(rep, e, Sign::Plus, &[])?;
    let candidates = bridge_candidates(rep, &e.cell, &white.bottom.tree);
    let needs = (1..=rep.k()).any(|i| bot_star(rep, &e.cell, i).iter().any(|c| !c.is_exceptional(rep)));
    if !needs {
        return Ok(Biblock { e: e.clone(), iset, white, companion: None, candidates });
    }
    let best = candidates
        .iter()
        .max_by(|a, b| {
            let ka = (a.bridge.height(), std::cmp::Reverse(HCell::new(e.v.clone(), a.bridge.clone()).position(rep)));
            let kb = (b.bridge.height(), std::cmp::Reverse(HCell::new(e.v.clone(), b.bridge.clone()).position(rep)));
            ka.cmp(&kb).then_with(|| b.bridge.edge.cmp(&a.bridge.edge))
        })
        .ok_or(WallError::NoBridge)?
        .clone();
    let z = HCell { v: e.v.clone(), cell: e.cell.translate(&best.shift) };
    let (zf, zt) = (z.cell.from(rep), z.cell.to(rep));
    let (bf, bt_) = (best.bridge.from(rep), best.bridge.to(rep));
    let dz = |x: &CoverVertex| distance(rep, x, &bf).min(distance(rep, x, &bt_));
    let epsilon = if dz(&zf) < dz(&zt) { Sign::Plus } else { Sign::Minus };
    let blocks = match reading {
        CompanionReading::Centre => vec![make_block(rep, &z, epsilon, &iset)?],
        CompanionReading::Tops => iset
            .iter()
            .map(|&i| make_block(rep, &top_hcell(rep, &z, i), epsilon, &iset))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let white_end = if white.bottom.tree.vertices.contains(&bf) { bf.clone() } else { bt_.clone() };
    let comp_end = if white_end == bf { bt_.clone() } else { bf.clone() };
    let wc = white.bottom.colour_or_err(rep, &white_end)?;
    let cc = blocks[0].bottom.colour_at(&comp_end).map(|c| c.to_vec()).unwrap_or_default();
    let companion = Companion {
        z,
        bridge: HCell { v: e.v.clone(), cell: best.bridge.clone() },
        shift: best.shift.clone(),
        indices: best.indices.clone(),
        blocks,
        bridge_colours: (wc, cc),
    };
    Ok(Biblock { e: e.clone(), iset, white, companion: Some(companion), candidates })
}

// ---------------------------------------------------------- pairs, mirrors

#[derive(Clone, Debug)]
pub struct PairStatus {
    pub role: Role,
    pub centre: HCell,
    pub pair: TwinPair,
    pub enabled: bool,
    pub colour_in: Vec<u8>,
    pub colour_out: Vec<u8>,
    pub shift: GroupElement,
}

impl PairStatus {
    pub fn nonzero(&self) -> bool {
        self.enabled && self.colour_in.iter().any(|&c| c != 0)
    }
}

/// Enabled/disabled status of every twin pair of every coloured tree.
pub fn enabled_pairs(rep: &BfhRep, bb: &Biblock) -> Result<Vec<PairStatus>, WallError> {
    let mut out = Vec::new();
    for t in bb.trees() {
        for p in twins(rep, &t.tree) {
            let ci = t.colour_or_err(rep, &p.incoming.to(rep))?;
            let co = t.colour_or_err(rep, &p.outgoing.from(rep))?;
            let shift = carry(
                rep,
                &HCell { v: t.v.clone(), cell: p.incoming.clone() },
                &HCell { v: t.v.clone(), cell: p.outgoing.clone() },
            );
            out.push(PairStatus {
                role: t.role,
                centre: t.centre_cell(),
                enabled: ci == co,
                colour_in: ci,
                colour_out: co,
                pair: p,
                shift,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Mirror {
    pub incoming: HCell,
    pub outgoing: HCell,
    pub colour_in: Vec<u8>,
    pub colour_out: Vec<u8>,
    pub element: GroupElement,
}

impl Mirror {
    pub fn agrees(&self) -> bool {
        self.colour_in == self.colour_out
    }

    pub fn nonzero(&self) -> bool {
        self.colour_in.iter().any(|&c| c != 0)
    }
}

/// Shifts between the bridge pairs of the white block and their images in
/// the companion.
pub fn mirrors(rep: &BfhRep, bb: &Biblock) -> Result<Vec<Mirror>, WallError> {
    let Some(comp) = &bb.companion else { return Ok(Vec::new()) };
    let cb = &comp.blocks[0].bottom;
    let wb = &bb.white.bottom;
    let bridges: BTreeSet<&CoverCell> = bb.candidates.iter().map(|c| &c.bridge).collect();
    let v = &bb.e.v;
    let h = |c: &CoverCell| HCell { v: v.clone(), cell: c.clone() };
    let mut out = Vec::new();
    for y in twins(rep, &wb.tree) {
        if !bridges.contains(&y.incoming) && !bridges.contains(&y.outgoing) {
            continue;
        }
        let x = y.translate(&comp.shift);
        for (inc, out_, tin, tout) in [(&x.incoming, &y.outgoing, cb, wb), (&y.incoming, &x.outgoing, wb, cb)] {
            let ci = tin.colour_at(&inc.to(rep)).map(|c| c.to_vec()).unwrap_or_default();
            let co = tout.colour_at(&out_.from(rep)).map(|c| c.to_vec()).unwrap_or_default();
            out.push(Mirror {
                incoming: h(inc),
                outgoing: h(out_),
                colour_in: ci,
                colour_out: co,
                element: carry(rep, &h(inc), &h(out_)),
            });
        }
    }
    Ok(out)
}

// -------------------------------------------------------------- subgroups

#[derive(Clone, Debug, Default, Serialize)]
pub struct Subgroups {
    pub horizontal: Vec<Generator>,
    pub diagonal: Vec<Generator>,
    pub replicative: Vec<Generator>,
    /// Horizontal elements L₁^{-l} h L₂^{l} for lifts or stairs of the same index.
    pub stabilizer: Vec<GroupElement>,
}

fn push_unique(v: &mut Vec<Generator>, g: Generator) {
    if !g.element.is_identity() && !v.iter().any(|x| x.element == g.element) {
        v.push(g);
    }
}

pub fn subgroups(
    rep: &BfhRep,
    bb: &Biblock,
    pairs: &[PairStatus],
    mirrors: &[Mirror],
    stairs: &[Stair],
    opts: &WallOptions,
) -> Subgroups {
    let stab_bound = opts.stab_bound;
    let spec = &rep.sigma;
    let mut s = Subgroups::default();
    for p in pairs.iter().filter(|p| p.nonzero()) {
        push_unique(&mut s.horizontal, Generator { kind: GenKind::Horizontal, index: 0, element: p.shift.clone() });
    }
    s.diagonal = s.horizontal.clone();
    for st in stairs {
        push_unique(&mut s.diagonal, Generator { kind: GenKind::Stair, index: st.index, element: st.element.clone() });
    }
    let mut lifts = block_lifts(rep, &bb.white);
    if let Some(c) = &bb.companion {
        match opts.lifts {
            CompanionLifts::None => {}
            CompanionLifts::Centre => c.blocks.iter().for_each(|b| lifts.extend(block_lifts(rep, b))),
            CompanionLifts::Nucleus => lifts.extend(companion_lifts(rep, c, &bb.iset)),
        }
    }
    for l in &lifts {
        push_unique(&mut s.replicative, l.clone());
    }
    for g in &s.diagonal {
        push_unique(&mut s.replicative, g.clone());
    }
    for m in mirrors.iter().filter(|m| m.agrees() && m.nonzero()) {
        push_unique(&mut s.replicative, Generator { kind: GenKind::Mirror, index: 0, element: m.element.clone() });
    }
    let ladders: Vec<(usize, GroupElement)> = lifts
        .iter()
        .map(|l| (l.index, l.element.clone()))
        .chain(stairs.iter().map(|st| (st.index, st.element.clone())))
        .collect();
    let pow = |g: &GroupElement, n: usize| (0..n).fold(GroupElement::identity(), |acc, _| acc.multiply(g, spec));
    let mut stab: BTreeSet<GroupElement> = BTreeSet::new();
    for h in &s.horizontal {
        for (i1, l1) in &ladders {
            for (i2, l2) in &ladders {
                if i1 != i2 {
                    continue;
                }
                for n in 0..=stab_bound {
                    let g = pow(&l1.invert(spec), n).multiply(&h.element, spec).multiply(&pow(l2, n), spec);
                    if g.v.is_empty() && !g.is_identity() {
                        stab.insert(g);
                    }
                }
            }
        }
    }
    s.stabilizer = stab.into_iter().collect();
    s
}

// ------------------------------------------------------------------- walls

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WallOptions {
    pub reading: CompanionReading,
    pub stairs: StairSigns,
    pub lifts: CompanionLifts,
    /// Exponent bound for the horizontal stabilizer generators.
    pub stab_bound: usize,
}

impl Default for WallOptions {
    fn default() -> Self {
        WallOptions {
            reading: CompanionReading::Centre,
            stairs: StairSigns::Block,
            lifts: CompanionLifts::None,
            stab_bound: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiagonalWall {
    pub e: HCell,
    pub biblock: Biblock,
    pub pairs: Vec<PairStatus>,
    pub mirrors: Vec<Mirror>,
    pub stairs: Vec<Stair>,
    pub subgroups: Subgroups,
    pub elementary: Vec<KCell>,
}

/// Nuclei of every c-top, and the t_i-cells leaving a vertex whose i-th
/// colour coordinate is 1.
pub fn elementary_cuts(bb: &Biblock) -> Vec<KCell> {
    let mut out: BTreeSet<KCell> = BTreeSet::new();
    for b in bb.blocks() {
        for n in b.nuclei() {
            out.insert(KCell::H(n));
        }
    }
    for t in bb.trees() {
        for (x, c) in &t.colour {
            for (i, &ci) in c.iter().enumerate() {
                if ci == 1 {
                    out.insert(KCell::V(VCell { from: KVertex { v: t.v.clone(), x: x.clone() }, j: i + 1 }));
                }
            }
        }
    }
    out.into_iter().collect()
}

pub fn build_wall(rep: &BfhRep, e: &HCell, opts: &WallOptions) -> Result<DiagonalWall, WallError> {
    let bb = biblock(rep, e, opts.reading)?;
    let pairs = enabled_pairs(rep, &bb)?;
    let mirrors = mirrors(rep, &bb)?;
    let mut stairs = Vec::new();
    if let Some(c) = &bb.companion {
        for b in &c.blocks {
            stairs.extend(block_stairs(rep, b, opts.stairs)?);
        }
    }
    let subgroups = subgroups(rep, &bb, &pairs, &mirrors, &stairs, opts);
    let elementary = elementary_cuts(&bb);
    Ok(DiagonalWall { e: e.clone(), biblock: bb, pairs, mirrors, stairs, subgroups, elementary })
}

/// The wall of the fundamental cell with label `edge`.
pub fn build_fundamental(rep: &BfhRep, edge: usize, opts: &WallOptions) -> Result<DiagonalWall, WallError> {
    build_wall(rep, &HCell::new(Word::empty(), CoverCell::new(Word::empty(), edge)), opts)
}

// -------------------------------------------------------------------- cuts

/// Vertices `(v, x)` with `|v| ≤ rho_v` and `|label(x)| ≤ rho_h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Region {
    pub rho_v: usize,
    pub rho_h: usize,
}

impl Region {
    pub fn contains(&self, x: &KVertex) -> bool {
        x.v.len() <= self.rho_v && x.x.g.len() <= self.rho_h
    }

    pub fn touches(&self, rep: &BfhRep, c: &KCell) -> bool {
        match c {
            KCell::H(h) => self.contains(&h.from(rep)) || self.contains(&h.to(rep)),
            KCell::V(vc) => self.contains(&vc.from) || self.contains(&vc.to(rep)),
        }
    }

    pub fn grow(&self, dv: usize, dh: usize) -> Region {
        Region { rho_v: self.rho_v + dv, rho_h: self.rho_h + dh }
    }
}

/// A truncated cut set: the ℜ(E)-orbit of the elementary cuts restricted to
/// `region`. Each cut carries the class of the elementary cut it came from;
/// classes met by a common cut are merged.
#[derive(Clone, Debug)]
pub struct CutSet {
    pub region: Region,
    pub horizontal: HashMap<HCell, u32>,
    pub vertical: HashMap<VCell, u32>,
    /// Orbit elements visited.
    pub elements: usize,
    pub max_len: usize,
    /// Some word of length `max_len + 1` would have reached a new cut.
    pub truncated: bool,
    roots: Vec<u32>,
}

impl CutSet {
    pub fn contains(&self, c: &KCell) -> bool {
        match c {
            KCell::H(h) => self.horizontal.contains_key(h),
            KCell::V(v) => self.vertical.contains_key(v),
        }
    }

    pub fn class_of(&self, c: &KCell) -> Option<u32> {
        let k = match c {
            KCell::H(h) => self.horizontal.get(h),
            KCell::V(v) => self.vertical.get(v),
        }?;
        Some(self.roots[*k as usize])
    }

    /// Class index of elementary cut `i`.
    pub fn class_of_elementary(&self, i: usize) -> u32 {
        self.roots[i]
    }

    pub fn len(&self) -> usize {
        self.horizontal.len() + self.vertical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn horizontal_in_tree(&self, v: &Word) -> BTreeSet<CoverCell> {
        self.horizontal.keys().filter(|h| &h.v == v).map(|h| h.cell.clone()).collect()
    }

    /// Sorted addresses, for stable output.
    pub fn addresses(&self, rep: &BfhRep) -> Vec<String> {
        let mut h: Vec<&HCell> = self.horizontal.keys().collect();
        h.sort();
        let mut v: Vec<&VCell> = self.vertical.keys().collect();
        v.sort();
        h.into_iter()
            .map(|c| c.display(rep))
            .chain(v.into_iter().map(|c| format!("{} t{}", c.from.display(rep), c.j)))
            .collect()
    }
}

fn find(p: &mut [u32], mut a: u32) -> u32 {
    while p[a as usize] != a {
        p[a as usize] = p[p[a as usize] as usize];
        a = p[a as usize];
    }
    a
}

/// Elementary cuts grouped by tree, so that one element `g = v·h` acts on a
/// whole group through a single shift `ψ_w(h)`.
struct Elementary {
    groups: Vec<(Word, Vec<(u32, KCell)>)>,
}

impl Elementary {
    fn new(cells: &[KCell]) -> Elementary {
        let mut by: BTreeMap<Word, Vec<(u32, KCell)>> = BTreeMap::new();
        for (i, c) in cells.iter().enumerate() {
            let w = match c {
                KCell::H(h) => h.v.clone(),
                KCell::V(v) => v.from.v.clone(),
            };
            by.entry(w).or_default().push((i as u32, c.clone()));
        }
        Elementary { groups: by.into_iter().collect() }
    }

    /// Images under `v·h`, skipping trees farther than `max_v` from the root.
    fn images(&self, rep: &BfhRep, v: &Word, h: &Word, max_v: usize, out: &mut Vec<(u32, KCell)>) {
        out.clear();
        for (w, cells) in &self.groups {
            let tree = v.mul(w);
            if tree.len() > max_v {
                continue;
            }
            let shift = rep.sigma.psi(w, h);
            for (i, c) in cells {
                let img = match c {
                    KCell::H(x) => KCell::H(HCell { v: tree.clone(), cell: x.cell.translate(&shift) }),
                    KCell::V(x) => KCell::V(VCell {
                        from: KVertex { v: tree.clone(), x: x.from.x.translate(&shift) },
                        j: x.j,
                    }),
                };
                out.push((*i, img));
            }
        }
    }
}

fn near(c: &KCell, r: &Region) -> bool {
    match c {
        KCell::H(h) => h.v.len() <= r.rho_v && h.cell.g.len() <= r.rho_h + 1,
        KCell::V(v) => v.from.v.len() <= r.rho_v + 1 && v.from.x.g.len() <= r.rho_h,
    }
}

/// Enumerates `g·c` for `g` a product of at most `max_len` generators of
/// ℜ(E) (and inverses) and `c` elementary. Words whose images all miss the
/// region grown by `margin` are dropped.
pub fn cuts(rep: &BfhRep, wall: &DiagonalWall, region: Region, margin: Region, max_len: usize) -> CutSet {
    let spec = &rep.sigma;
    let prune = region.grow(margin.rho_v, margin.rho_h);
    // generators and inverses in vh form
    let mut gens: Vec<(Word, Word)> = Vec::new();
    for g in &wall.subgroups.replicative {
        for x in [g.element.clone(), g.element.invert(spec)] {
            let (v, h) = x.to_vh(spec);
            if !gens.contains(&(v.clone(), h.clone())) {
                gens.push((v, h));
            }
        }
    }
    let elem = Elementary::new(&wall.elementary);
    let m = wall.elementary.len();
    let mut parent: Vec<u32> = (0..m as u32).collect();
    let mut horizontal: HashMap<HCell, u32> = HashMap::new();
    let mut vertical: HashMap<VCell, u32> = HashMap::new();
    let root = (Word::empty(), Word::empty());
    let mut seen: HashSet<(Word, Word)> = HashSet::from([root.clone()]);
    let mut imgs = Vec::new();
    elem.images(rep, &root.0, &root.1, usize::MAX, &mut imgs);
    record(rep, &region, &imgs, &mut parent, &mut horizontal, &mut vertical);
    let mut frontier = vec![root];
    let mut truncated = false;
    for depth in 0..=max_len {
        let mut next = Vec::new();
        for (v, h) in &frontier {
            for (sv, sh) in &gens {
                let nv = v.mul(sv);
                let nh = spec.psi(sv, h).mul(sh);
                let key = (nv, nh);
                if seen.contains(&key) {
                    continue;
                }
                elem.images(rep, &key.0, &key.1, prune.rho_v + 1, &mut imgs);
                if !imgs.iter().any(|(_, c)| near(c, &prune)) {
                    continue;
                }
                if depth == max_len {
                    if !truncated
                        && imgs.iter().any(|(_, c)| region.touches(rep, c) && !cutset_has(&horizontal, &vertical, c))
                    {
                        truncated = true;
                    }
                    continue;
                }
                record(rep, &region, &imgs, &mut parent, &mut horizontal, &mut vertical);
                seen.insert(key.clone());
                next.push(key);
            }
        }
        if depth == max_len || next.is_empty() {
            break;
        }
        frontier = next;
    }
    let roots: Vec<u32> = (0..m as u32).map(|i| find(&mut parent, i)).collect();
    CutSet { region, horizontal, vertical, elements: seen.len(), max_len, truncated, roots }
}

fn record(
    rep: &BfhRep,
    region: &Region,
    images: &[(u32, KCell)],
    parent: &mut [u32],
    horizontal: &mut HashMap<HCell, u32>,
    vertical: &mut HashMap<VCell, u32>,
) {
    for (i, c) in images {
        if !region.touches(rep, c) {
            continue;
        }
        let slot = match c {
            KCell::H(h) => *horizontal.entry(h.clone()).or_insert(*i),
            KCell::V(v) => *vertical.entry(v.clone()).or_insert(*i),
        };
        let (a, b) = (find(parent, slot), find(parent, *i));
        if a != b {
            parent[a.max(b) as usize] = a.min(b);
        }
    }
}

fn cutset_has(h: &HashMap<HCell, u32>, v: &HashMap<VCell, u32>, c: &KCell) -> bool {
    match c {
        KCell::H(x) => h.contains_key(x),
        KCell::V(x) => v.contains_key(x),
    }
}

// --------------------------------------------------------------- even cuts

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SquareType {
    /// No cut in the boundary.
    Empty,
    /// Two vertical cuts, none horizontal.
    TwoVertical,
    /// One horizontal and one vertical cut.
    Mixed,
    /// Two horizontal cuts (bottom and a top cell).
    TwoHorizontal,
    /// Anything else: an odd count, or more than two cuts.
    Violation,
}

pub fn classify(h: usize, v: usize) -> SquareType {
    match (h, v) {
        (0, 0) => SquareType::Empty,
        (0, 2) => SquareType::TwoVertical,
        (1, 1) => SquareType::Mixed,
        (2, 0) => SquareType::TwoHorizontal,
        _ => SquareType::Violation,
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct EvenCutReport {
    pub squares: usize,
    pub typology: BTreeMap<String, usize>,
    pub violations: usize,
    /// Up to 20 offending squares.
    pub examples: Vec<String>,
    pub cuts_in_ball: usize,
    pub truncated: bool,
}

impl EvenCutReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Cut lookups in local ball ids.
pub struct BallCuts {
    /// (tree, local cell).
    pub horizontal: HashSet<(u32, u32)>,
    /// (tree, local vertex, j).
    pub vertical: HashSet<(u32, u32, u8)>,
}

impl BallCuts {
    pub fn new(ball: &CylinderBall, cuts: &CutSet) -> BallCuts {
        let mut horizontal = HashSet::new();
        for h in cuts.horizontal.keys() {
            if let (Some(&t), Some(&c)) = (ball.tree_index.get(&h.v), ball.cell_index.get(&h.cell)) {
                horizontal.insert((t as u32, c));
            }
        }
        let mut vertical = HashSet::new();
        for vc in cuts.vertical.keys() {
            if let (Some(&t), Some(&l)) = (ball.tree_index.get(&vc.from.v), ball.cover.index.get(&vc.from.x)) {
                vertical.insert((t as u32, l as u32, vc.j as u8));
            }
        }
        BallCuts { horizontal, vertical }
    }
}

pub fn check_even_cuts(rep: &BfhRep, ball: &CylinderBall, cuts: &CutSet) -> EvenCutReport {
    use rayon::prelude::*;
    let bc = BallCuts::new(ball, cuts);
    let k = rep.k();
    let per: Vec<(BTreeMap<SquareType, usize>, Vec<String>)> = (0..ball.trees.len())
        .into_par_iter()
        .map(|t| {
            let mut counts: BTreeMap<SquareType, usize> = BTreeMap::new();
            let mut bad = Vec::new();
            for j in 1..=k {
                let Some(up) = ball.tree_step[t][2 * (j - 1)] else { continue };
                for (ci, c) in ball.cover.cells.iter().enumerate() {
                    let Some(tops) = &ball.square_top[j - 1][ci] else { continue };
                    let mut h = usize::from(bc.horizontal.contains(&(t as u32, ci as u32)));
                    h += tops.iter().filter(|&&d| bc.horizontal.contains(&(up, d))).count();
                    let a = ball.cover.index[&c.from(rep)] as u32;
                    let b = ball.cover.index[&c.to(rep)] as u32;
                    let v = usize::from(bc.vertical.contains(&(t as u32, a, j as u8)))
                        + usize::from(bc.vertical.contains(&(t as u32, b, j as u8)));
                    let ty = classify(h, v);
                    *counts.entry(ty).or_default() += 1;
                    if ty == SquareType::Violation && bad.len() < 20 {
                        bad.push(format!(
                            "{} j={} h={h} v={v}",
                            HCell { v: ball.trees[t].clone(), cell: c.clone() }.display(rep),
                            j
                        ));
                    }
                }
            }
            (counts, bad)
        })
        .collect();
    let mut r = EvenCutReport { cuts_in_ball: bc.horizontal.len() + bc.vertical.len(), truncated: cuts.truncated, ..Default::default() };
    for (counts, bad) in per {
        for (ty, n) in counts {
            r.squares += n;
            if ty == SquareType::Violation {
                r.violations += n;
            }
            *r.typology.entry(format!("{ty:?}")).or_default() += n;
        }
        for b in bad {
            if r.examples.len() < 20 {
                r.examples.push(b);
            }
        }
    }
    r
}

// ------------------------------------------------------------------- sides

/// Parity labels of the ball vertices relative to a root.
#[derive(Clone, Debug)]
pub struct SideMap {
    /// 0 or 1 for reached vertices, `u8::MAX` otherwise.
    pub labels: Vec<u8>,
    /// Edges whose two labels disagree with their cut status.
    pub contradictions: usize,
}

impl SideMap {
    /// Side in the convention where the root lies on the right.
    pub fn side(&self, ball: &CylinderBall, x: &KVertex) -> Option<Side> {
        let l = *self.labels.get(ball.id(x)?)?;
        (l != u8::MAX).then(|| if l == 0 { Side::Right } else { Side::Left })
    }
}

/// Labels every ball vertex by the parity of cuts on a BFS path from `root`.
pub fn side_labels(ball: &CylinderBall, bc: &BallCuts, root: usize) -> SideMap {
    let p = ball.per_tree();
    let mut labels = vec![u8::MAX; ball.num_vertices()];
    labels[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut contradictions = 0;
    let edges = |u: usize, out: &mut Vec<(usize, bool)>| {
        out.clear();
        let (t, l) = (u / p, u % p);
        for &(m, ci) in &ball.adj[l] {
            out.push((t * p + m as usize, bc.horizontal.contains(&(t as u32, ci))));
        }
        for j in 0..ball.fwd.len() {
            if let (Some(t2), Some(m)) = (ball.tree_step[t][2 * j], ball.fwd[j][l]) {
                out.push((t2 as usize * p + m as usize, bc.vertical.contains(&(t as u32, l as u32, j as u8 + 1))));
            }
            if let (Some(t2), Some(m)) = (ball.tree_step[t][2 * j + 1], ball.back[j][l]) {
                out.push((t2 as usize * p + m as usize, bc.vertical.contains(&(t2, m, j as u8 + 1))));
            }
        }
    };
    let mut nb = Vec::new();
    while let Some(u) = queue.pop_front() {
        edges(u, &mut nb);
        for &(w, cut) in &nb {
            let want = labels[u] ^ u8::from(cut);
            if labels[w] == u8::MAX {
                labels[w] = want;
                queue.push_back(w);
            } else if labels[w] != want {
                contradictions += 1;
            }
        }
    }
    // every bad edge is seen from both ends
    SideMap { labels, contradictions: contradictions / 2 }
}

/// Side of `x` for the wall of `wall.e`, using the parity map rooted at the
/// right vertex of E.
pub fn side_of_wall(rep: &BfhRep, ball: &CylinderBall, bc: &BallCuts, wall: &DiagonalWall, x: &KVertex) -> Option<Side> {
    let root = ball.id(&wall.e.to(rep))?;
    side_labels(ball, bc, root).side(ball, x)
}

// ------------------------------------------------------------------ output

pub fn wall_json(rep: &BfhRep, wall: &DiagonalWall, cuts: Option<&CutSet>) -> serde_json::Value {
    let bb = &wall.biblock;
    let trees: Vec<serde_json::Value> = bb
        .trees()
        .map(|t| {
            let colour: BTreeMap<String, String> = t
                .colour
                .iter()
                .map(|(x, c)| (x.display(rep), c.iter().map(|d| d.to_string()).collect::<String>()))
                .collect();
            serde_json::json!({
                "role": t.role,
                "centre": t.centre_cell().display(rep),
                "epsilon": t.epsilon,
                "vertices": t.tree.vertices.len(),
                "colour": colour,
            })
        })
        .collect();
    let companion = bb.companion.as_ref().map(|c| {
        serde_json::json!({
            "z": c.z.display(rep),
            "bridge": c.bridge.display(rep),
            "indices": c.indices,
            "epsilon": c.blocks[0].epsilon,
            "bridge_colours": [c.bridge_colours.0, c.bridge_colours.1],
        })
    });
    let elementary: Vec<String> = wall.elementary.iter().map(|c| kcell_display(rep, c)).collect();
    let mut v = serde_json::json!({
        "label": rep.edge_name(wall.e.cell.edge),
        "e": wall.e.display(rep),
        "i_set": bb.iset,
        "trees": trees,
        "companion": companion,
        "stairs": wall.stairs,
        "generators": wall.subgroups,
        "elementary_cuts": elementary,
    });
    if let Some(c) = cuts {
        v["cuts"] = serde_json::json!({
            "region": c.region,
            "max_len": c.max_len,
            "elements": c.elements,
            "truncated": c.truncated,
            "addresses": c.addresses(rep),
        });
    }
    v
}

pub fn kcell_display(rep: &BfhRep, c: &KCell) -> String {
    match c {
        KCell::H(h) => h.display(rep),
        KCell::V(v) => format!("{} t{}", v.from.display(rep), v.j),
    }
}

/// DOT of tree `w` of the ball: horizontal cuts thick, vertices with a
/// vertical cut leaving them drawn as boxes labelled by the directions.
pub fn wall_dot(rep: &BfhRep, ball: &CylinderBall, cuts: &CutSet, w: &Word) -> String {
    let mut s = format!("graph wall_{} {{\n  node [shape=point];\n", w.to_strings(Kind::Vertical).join("_"));
    let mut up: BTreeMap<&CoverVertex, Vec<usize>> = BTreeMap::new();
    for vc in cuts.vertical.keys() {
        if &vc.from.v == w {
            up.entry(&vc.from.x).or_default().push(vc.j);
        }
    }
    for (i, v) in ball.cover.vertices.iter().enumerate() {
        match up.get_mut(v) {
            Some(js) => {
                js.sort();
                let js: Vec<String> = js.iter().map(|j| format!("t{j}")).collect();
                let _ = writeln!(s, "  v{i} [shape=box, label=\"{}\", xlabel=\"{}\"];", js.join(","), v.display(rep));
            }
            None => {
                let _ = writeln!(s, "  v{i} [xlabel=\"{}\"];", v.display(rep));
            }
        }
    }
    for c in &ball.cover.cells {
        let a = ball.cover.index[&c.from(rep)];
        let b = ball.cover.index[&c.to(rep)];
        let thick = cuts.horizontal.contains_key(&HCell { v: w.clone(), cell: c.clone() });
        let pw = if thick { 4 } else { 1 };
        let _ = writeln!(s, "  v{a} -- v{b} [label=\"{}\", penwidth={pw}];", rep.edge_name(c.edge));
    }
    s.push_str("}\n");
    s
}

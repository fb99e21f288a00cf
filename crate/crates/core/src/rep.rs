//! Filtered graphs, filtered homotopy equivalences and well-built trees.
//!
//! Edges are listed in filtration order, so the height of an edge is its
//! position plus one. Edge paths are sequences of signed edge indices
//! (`+(e+1)` crosses edge `e` forward, `-(e+1)` backward).

use crate::algebra::{AlgebraError, Kind, SigmaSpec, Word, DEFAULT_INVERSE_BOUND};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

pub type EdgePath = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGraph {
    pub vertices: Vec<String>,
    /// In filtration order.
    pub edges: Vec<Edge>,
}

impl FiniteGraph {
    pub fn rose(n: usize) -> Self {
        FiniteGraph {
            vertices: vec!["v".into()],
            edges: (1..=n).map(|i| Edge { name: format!("x{i}"), from: 0, to: 0 }).collect(),
        }
    }

    pub fn height(&self, e: usize) -> usize {
        e + 1
    }

    pub fn valency(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.from == v) as usize + (e.to == v) as usize).sum()
    }

    pub fn step_ends(&self, s: i32) -> (usize, usize) {
        let e = &self.edges[s.unsigned_abs() as usize - 1];
        if s > 0 {
            (e.from, e.to)
        } else {
            (e.to, e.from)
        }
    }

    /// Number of connected components after deleting the edges in `skip`.
    fn components(&self, skip: &[bool]) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut count = self.vertices.len();
        for (i, e) in self.edges.iter().enumerate() {
            if skip.get(i).copied().unwrap_or(false) {
                continue;
            }
            let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.components(&[]) == 1
    }

    /// Edges whose removal disconnects the graph.
    pub fn separating_edges(&self) -> Vec<bool> {
        let base = self.components(&[]);
        (0..self.edges.len())
            .map(|i| {
                let mut skip = vec![false; self.edges.len()];
                skip[i] = true;
                self.components(&skip) > base
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredMap {
    /// Image path of each edge.
    pub images: Vec<EdgePath>,
}

/// Unvalidated input.
#[derive(Clone, Debug)]
pub struct RepInput {
    pub graph: FiniteGraph,
    pub maps: Vec<FilteredMap>,
    /// Tree edges; `None` means "compute a well-built tree".
    pub tree: Option<Vec<usize>>,
    /// Optional explicit inverses σ(t_j)⁻¹, as images of x_1..x_n.
    pub inverses: Vec<Option<Vec<Word>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Clause {
    GraphEndpoint,
    GraphDuplicateName,
    GraphValency,
    GraphConnected,
    MapCount,
    MapMissing,
    MapPath,
    MapVertex,
    MapReduced,
    FilteredMap,
    HomotopyEquivalence,
    TreeEdge,
    TreeAcyclic,
    TreeSpanning,
    WellBuilt,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::GraphEndpoint => "graph: endpoint",
            Clause::GraphDuplicateName => "graph: duplicate name",
            Clause::GraphValency => "graph: valency 2",
            Clause::GraphConnected => "graph: connected",
            Clause::MapCount => "maps: count",
            Clause::MapMissing => "filtered map: missing image",
            Clause::MapPath => "filtered map: not an edge path",
            Clause::MapVertex => "filtered map: vertex not fixed",
            Clause::MapReduced => "filtered map: not reduced",
            Clause::FilteredMap => "filtered map",
            Clause::HomotopyEquivalence => "homotopy equivalence",
            Clause::TreeEdge => "tree: unknown edge",
            Clause::TreeAcyclic => "tree: cycle",
            Clause::TreeSpanning => "tree: spanning",
            Clause::WellBuilt => "well-built",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: Clause,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn clauses(&self) -> Vec<Clause> {
        let mut c: Vec<Clause> = self.violations.iter().map(|v| v.clause).collect();
        c.sort();
        c.dedup();
        c
    }

    fn push(&mut self, clause: Clause, detail: impl Into<String>) {
        self.violations.push(Violation { clause, detail: detail.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{}: {}", v.clause, v.detail)?;
        }
        Ok(())
    }
}

#[derive(thiserror::Error, Debug)]
pub enum RepError {
    #[error("toml: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("input: {0}")]
    Input(String),
    #[error("invalid representative:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A validated representative with all derived data.
#[derive(Clone, Debug)]
pub struct BfhRep {
    pub graph: FiniteGraph,
    pub maps: Vec<FilteredMap>,
    pub tree: Vec<bool>,
    pub separating: Vec<bool>,
    /// `generator[e]` is `Some(i)` when edge `e` is essential and labelled x_i.
    pub generator: Vec<Option<usize>>,
    /// Edge carrying x_i, indexed by `i - 1`.
    pub essential_edge: Vec<usize>,
    pub basepoint: usize,
    /// Tree path from the basepoint to each vertex.
    pub tree_path: Vec<EdgePath>,
    /// `offset[j-1][b]` = label of f_j(τ_b).
    pub offset: Vec<Vec<Word>>,
    pub sigma: SigmaSpec,
}

fn is_edge_path(g: &FiniteGraph, p: &[i32]) -> bool {
    p.iter().all(|s| *s != 0 && (s.unsigned_abs() as usize) <= g.edges.len())
        && p.windows(2).all(|w| g.step_ends(w[0]).1 == g.step_ends(w[1]).0)
}

fn path_reduced(p: &[i32]) -> bool {
    p.windows(2).all(|w| w[0] != -w[1])
}

pub fn reduce_path(p: &[i32]) -> EdgePath {
    let mut out: EdgePath = Vec::with_capacity(p.len());
    for &s in p {
        if out.last() == Some(&-s) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    out
}

/// Kruskal in height order: an edge joins the tree unless it closes a cycle.
pub fn well_built_tree(g: &FiniteGraph) -> (Vec<usize>, Vec<usize>) {
    let mut parent: Vec<usize> = (0..g.vertices.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let (mut tree, mut essential) = (Vec::new(), Vec::new());
    for (i, e) in g.edges.iter().enumerate() {
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        if a != b {
            parent[a] = b;
            tree.push(i);
        } else {
            essential.push(i);
        }
    }
    (tree, essential)
}

fn tree_paths(g: &FiniteGraph, tree: &[bool], root: usize) -> Vec<Option<EdgePath>> {
    let mut paths: Vec<Option<EdgePath>> = vec![None; g.vertices.len()];
    paths[root] = Some(Vec::new());
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for (i, e) in g.edges.iter().enumerate() {
            if !tree[i] {
                continue;
            }
            for (s, a, b) in [(i as i32 + 1, e.from, e.to), (-(i as i32) - 1, e.to, e.from)] {
                if a == u && paths[b].is_none() {
                    let mut p = paths[u].clone().unwrap();
                    p.push(s);
                    paths[b] = Some(p);
                    queue.push_back(b);
                }
            }
        }
    }
    paths
}

/// Checks a well-built condition: every tree edge on the loop of an
/// essential edge is lower than it.
pub fn is_well_built(g: &FiniteGraph, tree: &[bool]) -> Vec<usize> {
    let paths = tree_paths(g, tree, 0);
    let mut bad = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        if tree[i] {
            continue;
        }
        let (Some(a), Some(b)) = (&paths[e.from], &paths[e.to]) else { continue };
        let mut p: Vec<i32> = a.iter().rev().map(|s| -s).collect();
        p.extend(b.iter().copied());
        let p = reduce_path(&p);
        if p.iter().any(|s| s.unsigned_abs() as usize - 1 > i) {
            bad.push(i);
        }
    }
    bad
}

/// Checks every clause and returns the full list of violations.
pub fn validate_rep(input: &RepInput) -> ValidationReport {
    validate_inner(input).0
}

fn validate_inner(input: &RepInput) -> (ValidationReport, Option<Vec<bool>>) {
    let mut r = ValidationReport::default();
    let g = &input.graph;
    let nv = g.vertices.len();
    let ne = g.edges.len();

    let mut endpoints_ok = true;
    for e in &g.edges {
        if e.from >= nv || e.to >= nv {
            r.push(Clause::GraphEndpoint, format!("edge {} has an unknown endpoint", e.name));
            endpoints_ok = false;
        }
    }
    let mut names: Vec<&str> = g.edges.iter().map(|e| e.name.as_str()).chain(g.vertices.iter().map(|s| s.as_str())).collect();
    names.sort();
    for w in names.windows(2) {
        if w[0] == w[1] {
            r.push(Clause::GraphDuplicateName, format!("name {} used twice", w[0]));
        }
    }
    if nv == 0 || ne == 0 {
        r.push(Clause::GraphConnected, "empty graph");
        return (r, None);
    }
    if !endpoints_ok {
        return (r, None);
    }
    for v in 0..nv {
        if g.valency(v) == 2 {
            r.push(Clause::GraphValency, format!("vertex {} has valency 2", g.vertices[v]));
        }
    }
    if !g.is_connected() {
        r.push(Clause::GraphConnected, "graph is not connected");
    }

    if input.maps.is_empty() {
        r.push(Clause::MapCount, "no maps given");
    }
    for (j, m) in input.maps.iter().enumerate() {
        if m.images.len() != ne {
            r.push(Clause::MapMissing, format!("f{} has {} images for {} edges", j + 1, m.images.len(), ne));
            continue;
        }
        for (i, p) in m.images.iter().enumerate() {
            let name = &g.edges[i].name;
            if !is_edge_path(g, p) || p.is_empty() {
                r.push(Clause::MapPath, format!("f{}({name}) is not an edge path", j + 1));
                continue;
            }
            let (s, t) = (g.step_ends(p[0]).0, g.step_ends(*p.last().unwrap()).1);
            if s != g.edges[i].from || t != g.edges[i].to {
                r.push(Clause::MapVertex, format!("f{}({name}) does not join the endpoints of {name}", j + 1));
            }
            if !path_reduced(p) {
                r.push(Clause::MapReduced, format!("f{}({name}) is not reduced", j + 1));
            }
            let own = p.iter().filter(|s| s.unsigned_abs() as usize == i + 1).count();
            let forward = p.iter().filter(|&&s| s == i as i32 + 1).count();
            let higher = p.iter().any(|s| s.unsigned_abs() as usize > i + 1);
            if own != 1 || forward != 1 || higher {
                r.push(
                    Clause::FilteredMap,
                    format!("f{}({name}) is not of the form v {name} u with v, u below {name}", j + 1),
                );
            }
        }
    }

    let tree: Vec<bool> = match &input.tree {
        None => {
            let mut t = vec![false; ne];
            for i in well_built_tree(g).0 {
                t[i] = true;
            }
            t
        }
        Some(list) => {
            let mut t = vec![false; ne];
            for &i in list {
                if i >= ne {
                    r.push(Clause::TreeEdge, format!("tree edge index {i} unknown"));
                } else {
                    t[i] = true;
                }
            }
            t
        }
    };
    let tree_count = tree.iter().filter(|b| **b).count();
    let skip: Vec<bool> = tree.iter().map(|b| !b).collect();
    let comps = g.components(&skip);
    if comps != 1 {
        r.push(Clause::TreeSpanning, format!("tree leaves {comps} components"));
    }
    if tree_count + comps != nv {
        r.push(Clause::TreeAcyclic, "tree contains a cycle");
    }
    if comps == 1 && tree_count + 1 == nv {
        for i in is_well_built(g, &tree) {
            r.push(Clause::WellBuilt, format!("tree loop of {} contains a higher edge", g.edges[i].name));
        }
    }
    (r, Some(tree))
}

impl BfhRep {
    pub fn build(input: RepInput) -> Result<BfhRep, RepError> {
        let (mut report, tree) = validate_inner(&input);
        let tree = match tree {
            Some(t) if report.ok() => t,
            _ => return Err(RepError::Invalid(report)),
        };
        let g = input.graph;
        let separating = g.separating_edges();
        let mut generator = vec![None; g.edges.len()];
        let mut essential_edge = Vec::new();
        for i in 0..g.edges.len() {
            if !tree[i] {
                essential_edge.push(i);
                generator[i] = Some(essential_edge.len());
            }
        }
        let n = essential_edge.len();
        let basepoint = 0;
        let tree_path: Vec<EdgePath> = tree_paths(&g, &tree, basepoint).into_iter().map(Option::unwrap).collect();
        let label = |p: &[i32]| -> Word {
            let mut w = Word::empty();
            for &s in p {
                if let Some(x) = generator[s.unsigned_abs() as usize - 1] {
                    w.push(if s > 0 { x as i8 } else { -(x as i8) });
                }
            }
            w
        };
        let mut offset = Vec::new();
        let mut images = Vec::new();
        for m in &input.maps {
            let image_of = |p: &[i32]| -> EdgePath {
                let mut out = Vec::new();
                for &s in p {
                    let img = &m.images[s.unsigned_abs() as usize - 1];
                    if s > 0 {
                        out.extend(img.iter().copied());
                    } else {
                        out.extend(img.iter().rev().map(|x| -x));
                    }
                }
                reduce_path(&out)
            };
            let c: Vec<Word> = tree_path.iter().map(|p| label(&image_of(p))).collect();
            let imgs: Vec<Word> = essential_edge
                .iter()
                .map(|&e| {
                    let ed = &g.edges[e];
                    c[ed.from].mul(&label(&m.images[e])).mul(&c[ed.to].inverse())
                })
                .collect();
            offset.push(c);
            images.push(imgs);
        }
        let sigma = match SigmaSpec::new(n, images, input.inverses.clone(), DEFAULT_INVERSE_BOUND) {
            Ok(s) => s,
            Err(e) => {
                report.push(Clause::HomotopyEquivalence, e.to_string());
                return Err(RepError::Invalid(report));
            }
        };
        Ok(BfhRep { graph: g, maps: input.maps, tree, separating, generator, essential_edge, basepoint, tree_path, offset, sigma })
    }

    pub fn n(&self) -> usize {
        self.sigma.n
    }

    pub fn k(&self) -> usize {
        self.sigma.k
    }

    pub fn num_edges(&self) -> usize {
        self.graph.edges.len()
    }

    pub fn is_essential(&self, e: usize) -> bool {
        !self.tree[e]
    }

    pub fn is_eoe(&self, e: usize) -> bool {
        !self.tree[e] || self.separating[e]
    }

    pub fn eoe_edges(&self) -> Vec<usize> {
        (0..self.num_edges()).filter(|&e| self.is_eoe(e)).collect()
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.graph.edges[e].name
    }

    /// F_n-label of an edge path.
    pub fn label(&self, p: &[i32]) -> Word {
        let mut w = Word::empty();
        for &s in p {
            if let Some(x) = self.generator[s.unsigned_abs() as usize - 1] {
                w.push(if s > 0 { x as i8 } else { -(x as i8) });
            }
        }
        w
    }

    /// Reduced image of an edge path under f_j (1-based).
    pub fn map_path(&self, j: usize, p: &[i32]) -> EdgePath {
        let m = &self.maps[j - 1];
        let mut out = Vec::new();
        for &s in p {
            let img = &m.images[s.unsigned_abs() as usize - 1];
            if s > 0 {
                out.extend(img.iter().copied());
            } else {
                out.extend(img.iter().rev().map(|x| -x));
            }
        }
        reduce_path(&out)
    }

    fn occurrences(&self, j: usize, target: usize, source: usize) -> usize {
        self.maps[j - 1].images[source].iter().filter(|s| s.unsigned_abs() as usize == target + 1).count()
    }

    /// Edge `e` is i-topmost.
    pub fn topmost(&self, e: usize, i: usize) -> bool {
        (0..self.num_edges()).all(|s| self.occurrences(i, e, s) == if s == e { 1 } else { 0 })
    }

    pub fn topmost_all(&self, e: usize) -> bool {
        (1..=self.k()).all(|i| self.topmost(e, i))
    }

    /// Longest run of one letter in the reduced images σ_i(x_j).
    pub fn multiplicity_constant(&self) -> usize {
        let mut m = 1;
        for i in 1..=self.k() {
            for w in &self.sigma.forward(i).images {
                let mut run = 0;
                let mut prev = 0i8;
                for &a in w.letters() {
                    run = if a == prev { run + 1 } else { 1 };
                    prev = a;
                    m = m.max(run);
                }
            }
        }
        m
    }

    pub fn eoe_count(&self) -> usize {
        self.eoe_edges().len()
    }

    pub fn edge_by_name(&self, name: &str) -> Option<usize> {
        self.graph.edges.iter().position(|e| e.name == name)
    }

    pub fn path_string(&self, p: &[i32]) -> String {
        p.iter()
            .map(|&s| {
                let n = self.edge_name(s.unsigned_abs() as usize - 1);
                if s > 0 {
                    n.to_string()
                } else {
                    format!("{n}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<_> = self
            .graph
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                serde_json::json!({
                    "name": e.name,
                    "from": self.graph.vertices[e.from],
                    "to": self.graph.vertices[e.to],
                    "height": i + 1,
                    "tree": self.tree[i],
                    "separating": self.separating[i],
                    "generator": self.generator[i].map(|x| format!("x{x}")),
                })
            })
            .collect();
        let maps: Vec<_> = self
            .maps
            .iter()
            .map(|m| {
                let mut o = serde_json::Map::new();
                for (i, p) in m.images.iter().enumerate() {
                    o.insert(self.edge_name(i).to_string(), self.path_string(p).into());
                }
                serde_json::Value::Object(o)
            })
            .collect();
        let sigma: Vec<_> = (1..=self.k())
            .map(|j| {
                let f: Vec<_> = self.sigma.forward(j).images.iter().map(|w| w.to_strings(Kind::Horizontal)).collect();
                let b: Vec<_> = self.sigma.backward(j).images.iter().map(|w| w.to_strings(Kind::Horizontal)).collect();
                serde_json::json!({ "images": f, "inverse": b })
            })
            .collect();
        serde_json::json!({
            "vertices": self.graph.vertices,
            "edges": edges,
            "maps": maps,
            "sigma": sigma,
            "n": self.n(),
            "k": self.k(),
        })
    }
}

#[derive(Deserialize)]
struct TomlEdge {
    name: String,
    from: String,
    to: String,
}

#[derive(Deserialize)]
struct TomlGraph {
    vertices: Vec<String>,
    edges: Vec<TomlEdge>,
}

#[derive(Deserialize)]
struct TomlTree {
    edges: Vec<String>,
}

#[derive(Deserialize)]
struct TomlRep {
    graph: TomlGraph,
    tree: Option<TomlTree>,
    maps: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    inverse: BTreeMap<String, BTreeMap<String, String>>,
}

fn map_index(key: &str, k_hint: &str) -> Result<usize, RepError> {
    key.strip_prefix('t')
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&j| j >= 1)
        .ok_or_else(|| RepError::Input(format!("{k_hint} key {key:?} must look like t1, t2, ...")))
}

/// Parses a path written with edge names; inverses are `NAME^-1`, `-name`
/// or the upper-cased name.
pub fn parse_path(g: &FiniteGraph, s: &str) -> Result<EdgePath, RepError> {
    let find = |n: &str| g.edges.iter().position(|e| e.name == n);
    s.split_whitespace()
        .map(|tok| {
            if let Some(i) = find(tok) {
                return Ok(i as i32 + 1);
            }
            let stripped = tok.strip_suffix("^-1").or_else(|| tok.strip_prefix('-'));
            if let Some(i) = stripped.and_then(find) {
                return Ok(-(i as i32) - 1);
            }
            if let Some(i) = find(&tok.to_lowercase()) {
                return Ok(-(i as i32) - 1);
            }
            Err(RepError::Input(format!("unknown edge {tok:?}")))
        })
        .collect()
}

impl RepInput {
    pub fn from_toml(text: &str) -> Result<RepInput, RepError> {
        let t: TomlRep = toml::from_str(text)?;
        let vid = |name: &str| t.graph.vertices.iter().position(|v| v == name).unwrap_or(usize::MAX);
        let graph = FiniteGraph {
            vertices: t.graph.vertices.clone(),
            edges: t.graph.edges.iter().map(|e| Edge { name: e.name.clone(), from: vid(&e.from), to: vid(&e.to) }).collect(),
        };
        let tree = match &t.tree {
            None => None,
            Some(tr) => Some(
                tr.edges
                    .iter()
                    .map(|n| {
                        graph.edges.iter().position(|e| &e.name == n).ok_or_else(|| RepError::Input(format!("unknown tree edge {n:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        let k = t.maps.keys().map(|key| map_index(key, "maps")).collect::<Result<Vec<_>, _>>()?.into_iter().max().unwrap_or(0);
        let mut maps = vec![FilteredMap { images: Vec::new() }; k];
        let mut seen = vec![false; k];
        for (key, table) in &t.maps {
            let j = map_index(key, "maps")?;
            seen[j - 1] = true;
            let mut images = Vec::new();
            for e in &graph.edges {
                match table.get(&e.name) {
                    Some(s) => images.push(parse_path(&graph, s)?),
                    None => break,
                }
            }
            if let Some(extra) = table.keys().find(|n| !graph.edges.iter().any(|e| &&e.name == n)) {
                return Err(RepError::Input(format!("map {key} names unknown edge {extra:?}")));
            }
            maps[j - 1] = FilteredMap { images };
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Err(RepError::Input(format!("map t{} missing", j + 1)));
        }
        let mut inverses = vec![None; k];
        for (key, table) in &t.inverse {
            let j = map_index(key, "inverse")?;
            if j > k {
                return Err(RepError::Input(format!("inverse for unknown map {key}")));
            }
            let n = table.len();
            let mut imgs = vec![Word::empty(); n];
            for (x, w) in table {
                let i = x
                    .strip_prefix('x')
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|&i| i >= 1 && i <= n)
                    .ok_or_else(|| RepError::Input(format!("inverse key {x:?}")))?;
                imgs[i - 1] = Word::parse(Kind::Horizontal, w)?;
            }
            inverses[j - 1] = Some(imgs);
        }
        Ok(RepInput { graph, maps, tree, inverses })
    }

    /// A rose whose maps spell the given σ-images.
    pub fn rose(n: usize, images: &[Vec<&str>]) -> RepInput {
        let graph = FiniteGraph::rose(n);
        let maps = images
            .iter()
            .map(|imgs| FilteredMap {
                images: imgs.iter().map(|s| parse_path(&graph, s).expect("rose image")).collect(),
            })
            .collect();
        RepInput { graph, maps, tree: None, inverses: vec![None; images.len()] }
    }
}

impl BfhRep {
    pub fn from_toml(text: &str) -> Result<BfhRep, RepError> {
        BfhRep::build(RepInput::from_toml(text)?)
    }

    pub fn rose(n: usize, images: &[Vec<&str>]) -> Result<BfhRep, RepError> {
        BfhRep::build(RepInput::rose(n, images))
    }
}

/// Built-in fixtures.
pub mod fixtures {
    use super::*;

    pub const FP_TOML: &str = include_str!("../fixtures/fp3.toml");
    pub const F4_TOML: &str = include_str!("../fixtures/f4.toml");
    pub const ALPHA_TOML: &str = include_str!("../fixtures/alpha.toml");

    pub fn fp() -> BfhRep {
        BfhRep::from_toml(FP_TOML).expect("fp fixture")
    }

    pub fn f4() -> BfhRep {
        BfhRep::from_toml(F4_TOML).expect("f4 fixture")
    }

    pub fn alpha() -> BfhRep {
        BfhRep::from_toml(ALPHA_TOML).expect("alpha fixture")
    }

    /// A rose where every map is the identity.
    pub fn identity(n: usize, k: usize) -> BfhRep {
        let imgs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let row: Vec<&str> = imgs.iter().map(|s| s.as_str()).collect();
        BfhRep::rose(n, &vec![row; k]).expect("identity rose")
    }
}

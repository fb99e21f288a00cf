//! Shared representative inputs and the single-clause mutation suite.

use fbf_walls::rep::fixtures;
use fbf_walls::rep::*;

pub fn theta() -> FiniteGraph {
    FiniteGraph {
        vertices: vec!["u".into(), "w".into()],
        edges: ["a", "b", "c"].iter().map(|n| Edge { name: n.to_string(), from: 0, to: 1 }).collect(),
    }
}

pub fn identity_maps(g: &FiniteGraph, k: usize) -> Vec<FilteredMap> {
    let m = FilteredMap { images: (0..g.edges.len()).map(|i| vec![i as i32 + 1]).collect() };
    vec![m; k]
}

pub fn theta_input(tree: Option<Vec<usize>>) -> RepInput {
    let g = theta();
    RepInput { maps: identity_maps(&g, 1), graph: g, tree, inverses: vec![None] }
}

pub fn barbell() -> RepInput {
    let g = FiniteGraph {
        vertices: vec!["u".into(), "w".into()],
        edges: vec![
            Edge { name: "p".into(), from: 0, to: 0 },
            Edge { name: "q".into(), from: 1, to: 1 },
            Edge { name: "s".into(), from: 0, to: 1 },
        ],
    };
    RepInput { maps: identity_maps(&g, 1), graph: g, tree: None, inverses: vec![None] }
}

pub fn fp_input() -> RepInput {
    RepInput::from_toml(fixtures::FP_TOML).unwrap()
}

pub fn mutations() -> Vec<(&'static str, RepInput, Clause)> {
    let mut out = Vec::new();
    let fp = fp_input;
    let path = |i: &RepInput, s: &str| parse_path(&i.graph, s).unwrap();

    let mut m = fp();
    m.graph.vertices.push("w".into());
    m.graph.edges.push(Edge { name: "y".into(), from: 0, to: 1 });
    m.graph.edges.push(Edge { name: "z".into(), from: 1, to: 0 });
    for map in &mut m.maps {
        map.images.push(vec![4]);
        map.images.push(vec![5]);
    }
    out.push(("subdivided petal", m, Clause::GraphValency));

    let mut m = fp();
    m.graph.vertices.push("w".into());
    out.push(("isolated vertex", m, Clause::GraphConnected));

    let mut m = fp();
    m.graph.edges[1].to = 7;
    out.push(("dangling edge", m, Clause::GraphEndpoint));

    let mut m = fp();
    m.graph.edges[1].name = "x1".into();
    out.push(("duplicate name", m, Clause::GraphDuplicateName));

    let mut m = fp();
    m.maps.clear();
    m.inverses.clear();
    out.push(("no maps", m, Clause::MapCount));

    let mut m = fp();
    m.maps[1].images.pop();
    out.push(("missing image", m, Clause::MapMissing));

    let mut m = theta_input(None);
    m.maps[0].images[1] = vec![2, 2];
    out.push(("broken path", m, Clause::MapPath));

    let mut m = theta_input(None);
    m.maps[0].images[2] = vec![-1];
    out.push(("moves a vertex", m, Clause::MapVertex));

    let mut m = fp();
    m.maps[0].images[2] = path(&m, "x3 x1 X1 x1");
    out.push(("unreduced image", m, Clause::MapReduced));

    let mut m = fp();
    m.maps[0].images[1] = path(&m, "x2 x3");
    out.push(("higher edge in image", m, Clause::FilteredMap));

    let mut m = fp();
    m.maps[0].images[2] = path(&m, "x3 x3");
    out.push(("edge repeated", m, Clause::FilteredMap));

    let mut m = fp();
    m.maps[1].images[2] = path(&m, "X3");
    out.push(("edge reversed", m, Clause::FilteredMap));

    let mut m = fp();
    m.maps[0].images[1] = path(&m, "x1");
    out.push(("edge dropped", m, Clause::FilteredMap));

    let mut m = fp();
    m.maps[1].images[0] = path(&m, "x1 x2");
    out.push(("lowest edge lifted", m, Clause::FilteredMap));

    let mut m = fp();
    m.inverses[0] = Some(vec![fbf_walls::algebra::Word::gen(1), fbf_walls::algebra::Word::gen(2), fbf_walls::algebra::Word::gen(3)]);
    out.push(("wrong inverse", m, Clause::HomotopyEquivalence));

    out.push(("unknown tree edge", theta_input(Some(vec![0, 9])), Clause::TreeEdge));
    out.push(("tree with cycle", theta_input(Some(vec![0, 1])), Clause::TreeAcyclic));
    out.push(("tree not spanning", theta_input(Some(vec![])), Clause::TreeSpanning));
    out.push(("tree above loop", theta_input(Some(vec![1])), Clause::WellBuilt));
    out.push(("highest edge in tree", theta_input(Some(vec![2])), Clause::WellBuilt));

    out
}

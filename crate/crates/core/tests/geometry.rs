mod common;

use common::*;
use fbf_walls::cover::{CoverCell, CoverVertex, Subtree};
use fbf_walls::cylinder::*;
use fbf_walls::geometry::*;
use fbf_walls::rep::{fixtures, BfhRep};
use fbf_walls::walls::*;
use proptest::prelude::*;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

fn small(rho_v: usize, rho_h: usize) -> FamilyConfig {
    let mut cfg = FamilyConfig::new(Region { rho_v, rho_h }, 6);
    cfg.cut_region = Region { rho_v: rho_v + 1, rho_h: rho_h + 3 };
    cfg
}

fn identity() -> &'static BfhRep {
    static R: OnceLock<BfhRep> = OnceLock::new();
    R.get_or_init(|| fixtures::identity(2, 2))
}

fn alpha() -> &'static BfhRep {
    static R: OnceLock<BfhRep> = OnceLock::new();
    R.get_or_init(fixtures::alpha)
}

fn alpha_family() -> &'static WallFamily<'static> {
    static F: OnceLock<WallFamily<'static>> = OnceLock::new();
    F.get_or_init(|| WallFamily::build(alpha(), small(1, 2)).unwrap())
}

fn identity_family() -> &'static WallFamily<'static> {
    static F: OnceLock<WallFamily<'static>> = OnceLock::new();
    F.get_or_init(|| WallFamily::build(identity(), small(2, 2)).unwrap())
}

fn origin(rep: &BfhRep) -> KVertex {
    KVertex::new(Word::empty(), Word::empty(), rep.basepoint)
}

use fbf_walls::algebra::Word;

#[test]
fn distance_to_self_is_zero() {
    for fam in [identity_family(), alpha_family()] {
        for id in [0, fam.ball.num_vertices() / 2] {
            let x = fam.ball.vertex(id);
            let d = wall_distance(fam, &x, &x).unwrap();
            assert_eq!((d.total, d.diagonal_by_path, d.unscoped), (0, 0, 0));
        }
    }
}

#[test]
fn vertical_part_counts_the_stable_letters() {
    let rep = identity();
    let fam = identity_family();
    let a = origin(rep);
    let b = KVertex::new(vt("t1 t2"), Word::empty(), rep.basepoint);
    let d = wall_distance(fam, &a, &b).unwrap();
    assert_eq!(d.vertical, 2);
    assert!(d.total >= 2);
}

#[test]
fn identity_walls_are_complete() {
    let fam = identity_family();
    assert!(fam.walls.iter().all(|w| w.complete()));
    // topmost walls meet each tree in one cell
    for w in fam.walls.iter().filter(|w| w.diagonal.is_some()) {
        let mut trees = HashSet::new();
        for &c in &w.trace {
            if let KCell::H(h) = &fam.cells[c as usize] {
                assert!(trees.insert(h.v.clone()), "{:?}", w.id);
            }
        }
    }
}

#[test]
fn fp_distance_across_x3_counts_two_ways() {
    let rep = fixtures::fp();
    let fam = WallFamily::build(&rep, small(1, 2)).unwrap();
    let a = origin(&rep);
    let c = HCell::new(Word::empty(), CoverCell::new(Word::empty(), rep.edge_by_name("x3").unwrap()));
    let b = KVertex { v: Word::empty(), x: c.cell.to(&rep) };
    let d = wall_distance(&fam, &a, &b).unwrap();
    let ci = fam.cell_index[&KCell::H(c)];
    let spanning = fam
        .walls
        .iter()
        .filter(|w| w.trace.contains(&ci) && w.is_labelled(fam.ball.id(&a).unwrap()) && !w.unknown_cells.contains(&ci))
        .count();
    assert_eq!(d.vertical, 0);
    assert_eq!(d.diagonal_by_path, spanning);
    assert!(spanning >= 1);
    if !d.inconsistent {
        assert_eq!(d.diagonal, spanning);
    }
}

#[test]
fn alpha_distances_agree_both_ways() {
    let fam = alpha_family();
    let mut r = rng(5);
    let n = fam.ball.num_vertices();
    use rand::Rng;
    for _ in 0..60 {
        let a = fam.ball.vertex(r.gen_range(0..n));
        let b = fam.ball.vertex(r.gen_range(0..n));
        let d = wall_distance(fam, &a, &b).unwrap();
        assert_eq!(d.diagonal, d.diagonal_by_path, "{} {}", a.display(alpha()), b.display(alpha()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn identity_distance_is_a_pseudometric(i in 0usize..10_000, j in 0usize..10_000, k in 0usize..10_000) {
        let fam = identity_family();
        let n = fam.ball.num_vertices();
        let (a, b, c) = (fam.ball.vertex(i % n), fam.ball.vertex(j % n), fam.ball.vertex(k % n));
        let ab = wall_distance(fam, &a, &b).unwrap().total;
        let ba = wall_distance(fam, &b, &a).unwrap().total;
        let bc = wall_distance(fam, &b, &c).unwrap().total;
        let ac = wall_distance(fam, &a, &c).unwrap().total;
        prop_assert_eq!(ab, ba);
        prop_assert!(ac <= ab + bc);
    }
}

#[test]
fn identity_minima_grow_with_slope_one() {
    let rep = identity();
    let fam = identity_family();
    let p = properness_probe(rep, &fam.fundamentals, 5, 5_000, 50, 1);
    for row in &p.rows {
        assert_eq!(row.min_mu, row.length, "{row:?}");
    }
    assert!(p.monotone && p.bound_holds);
}

/// Diameter of a subtree by breadth-first search along its own cells.
fn bfs_diameter(rep: &BfhRep, t: &Subtree) -> usize {
    let mut adj: HashMap<&CoverVertex, Vec<CoverVertex>> = HashMap::new();
    for c in &t.cells {
        let (a, b) = (c.from(rep), c.to(rep));
        adj.entry(t.vertices.get(&a).unwrap()).or_default().push(b.clone());
        adj.entry(t.vertices.get(&b).unwrap()).or_default().push(a);
    }
    let mut best = 0;
    for s in &t.vertices {
        let mut dist = HashMap::from([(s.clone(), 0usize)]);
        let mut q = VecDeque::from([s.clone()]);
        while let Some(u) = q.pop_front() {
            let du = dist[&u];
            best = best.max(du);
            for w in adj.get(&u).into_iter().flatten() {
                if !dist.contains_key(w) {
                    dist.insert(w.clone(), du + 1);
                    q.push_back(w.clone());
                }
            }
        }
    }
    best
}

#[test]
fn fp_probe_constant_and_monotone_minima() {
    let rep = fixtures::fp();
    let cfg = small(0, 1);
    let fundamentals: Vec<Fundamental> = rep.eoe_edges().into_iter().map(|e| Fundamental::build(&rep, e, &cfg).unwrap()).collect();
    let p = properness_probe(&rep, &fundamentals, 4, 1_000, 0, 3);
    let oracle = fundamentals.iter().flat_map(|f| f.wall.biblock.trees().map(|t| bfs_diameter(&rep, &t.tree))).max().unwrap();
    assert_eq!(p.c, oracle.max(1));
    assert_eq!(p.eoe, rep.eoe_count());
    assert!(p.rows.iter().all(|r| r.exhaustive));
    assert!(p.monotone, "{:?}", p.rows);
    assert!(p.bound_holds);
}

#[test]
fn nested_vertical_walls_do_not_cross() {
    let fam = identity_family();
    let find = |w: &str, j: usize| {
        fam.walls.iter().position(|x| x.id == WallId::Vertical { w: w.to_string(), j }).unwrap()
    };
    let (a, b) = (find("e", 1), find("t1", 1));
    assert_eq!(walls_cross(fam, a, b), Crossing::FalseAtRadius);
}

#[test]
fn vertical_and_diagonal_walls_cross() {
    let fam = identity_family();
    let v = fam.walls.iter().position(|x| x.id == WallId::Vertical { w: "e".into(), j: 1 }).unwrap();
    let hits = (0..fam.walls.len()).filter(|&d| fam.walls[d].diagonal.is_some() && walls_cross(fam, v, d) == Crossing::True);
    // a four-corner witness for each crossing wall
    let mut count = 0;
    for d in hits {
        let (x, y) = (&fam.walls[v], &fam.walls[d]);
        let mut corners = HashSet::new();
        for id in 0..fam.ball.num_vertices() {
            corners.insert((x.side(id), y.side(id)));
        }
        assert_eq!(corners.len(), 4);
        count += 1;
    }
    assert!(count > 0);
}

#[test]
fn identity_clique_is_one_vertical_and_one_topmost() {
    let fam = identity_family();
    let m = crossing_matrix(fam);
    let c = max_crossing_family(fam, &m);
    assert_eq!(c.size, 2);
    assert_eq!((c.vertical_in_witness, c.topmost_in_witness), (1, 1));
    assert_eq!(bound_check(identity(), &WallOptions::default()).unwrap().m, 0);
}

#[test]
fn crossing_square_appears_in_the_complex() {
    let fam = identity_family();
    let m = crossing_matrix(fam);
    let cc = cubulate(fam, &m);
    assert_eq!(cc.cubes[0], cc.vertices);
    assert!(cc.cubes.len() > 2 && cc.cubes[2] > 0);
    assert_eq!(cc.dimension, max_crossing_family(fam, &m).size);
    assert_eq!(cc.empty_squares, 0);
    assert!(cube_dot(&cc).starts_with("graph cubes {"));
}

#[test]
fn bridge_counts() {
    let opts = WallOptions::default();
    assert_eq!(bound_check(alpha(), &opts).unwrap().m, 1);
    let fp = bound_check(&fixtures::fp(), &opts).unwrap();
    assert_eq!((fp.m, fp.bound), (2, 6));
}

#[test]
fn alpha_witness_is_pairwise_crossing() {
    let fam = alpha_family();
    let m = crossing_matrix(fam);
    let c = max_crossing_family(fam, &m);
    assert!(c.size >= 2 * bound_check(alpha(), &WallOptions::default()).unwrap().m + 2);
    assert_eq!(c.vertical_in_witness, 1);
    assert!(c.topmost_in_witness <= 1);
    let idx: Vec<usize> = c.witness.iter().map(|w| fam.walls.iter().position(|x| &x.id == w).unwrap()).collect();
    for (i, &a) in idx.iter().enumerate() {
        for &b in &idx[i + 1..] {
            assert_eq!(walls_cross(fam, a, b), Crossing::True);
        }
    }
}

#[test]
fn wall_ids_are_unique() {
    for fam in [identity_family(), alpha_family()] {
        let ids: HashSet<_> = fam.walls.iter().map(|w| &w.id).collect();
        assert_eq!(ids.len(), fam.walls.len());
    }
}

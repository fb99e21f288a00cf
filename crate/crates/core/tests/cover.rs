mod common;

use common::*;
use fbf_walls::algebra::Word;
use fbf_walls::cover::*;
use fbf_walls::rep::{fixtures, BfhRep};
use std::collections::BTreeSet;

fn cell(s: &str, e: usize) -> CoverCell {
    CoverCell::new(hx(s), e)
}

fn vx(s: &str) -> CoverVertex {
    CoverVertex::new(hx(s), 0)
}

#[test]
fn geodesic_examples() {
    let rep = fixtures::fp();
    let e = vx("");
    assert!(geodesic(&rep, &e, &e).is_empty());
    let p = geodesic(&rep, &e, &vx("x1"));
    assert_eq!(p.cells(&rep), vec![(cell("", 0), true)]);
    // BFS depth in the ball is the graph distance from the basepoint
    let ball = CoverBall::new(&rep, 4);
    let target = vx("x3 x1");
    assert_eq!(ball.depth[ball.index[&target]], 2);
    assert_eq!(distance(&rep, &e, &target), 2);
    for (i, v) in ball.vertices.iter().enumerate() {
        assert_eq!(distance(&rep, &e, v), ball.depth[i]);
    }
}

#[test]
fn geodesic_symmetric_in_barbell() {
    let text = r#"
[graph]
vertices = ["u", "w"]
edges = [
  { name = "p", from = "u", to = "u" },
  { name = "q", from = "w", to = "w" },
  { name = "s", from = "u", to = "w" },
]
[maps.t1]
p = "p"
q = "q"
s = "s"
"#;
    let rep = BfhRep::from_toml(text).unwrap();
    let ball = CoverBall::new(&rep, 5);
    let mut r = rng(1);
    for _ in 0..200 {
        use rand::Rng;
        let a = &ball.vertices[r.gen_range(0..ball.vertices.len())];
        let b = &ball.vertices[r.gen_range(0..ball.vertices.len())];
        let p = geodesic(&rep, a, b);
        assert_eq!(p.end(&rep), *b);
        assert_eq!(p.reverse(&rep), geodesic(&rep, b, a));
    }
    assert!(ball.geodesic(&rep, &ball.vertices[0], &CoverVertex::new(hx("x1 x1 x1 x1 x1 x1"), 0)).is_err());
}

#[test]
fn side_examples() {
    let rep = fixtures::fp();
    let e = cell("", 0);
    let only = BTreeSet::from([e.clone()]);
    assert_eq!(side_of(&rep, &e, &only, &vx("")), Side::Left);
    assert_eq!(side_of(&rep, &e, &only, &vx("x1")), Side::Right);
    let two = BTreeSet::from([e.clone(), cell("x1", 0)]);
    let far = vx("x1 x1 x2");
    let path = geodesic(&rep, &vx(""), &far);
    let count = path.cells(&rep).iter().filter(|(c, _)| two.contains(c)).count();
    assert_eq!(count, 2);
    assert_eq!(side_of(&rep, &e, &two, &far), Side::Left);
}

/// Essential cells of the ball touching a label of `u` and not in `u`.
fn crown_scan(rep: &BfhRep, ball: &CoverBall, u: &Subtree) -> BTreeSet<CoverCell> {
    let labels = u.labels();
    ball.cells
        .iter()
        .filter(|c| c.is_essential(rep) && !u.cells.contains(*c))
        .filter(|c| labels.contains(&c.from(rep).g) || labels.contains(&c.to(rep).g))
        .cloned()
        .collect()
}

#[test]
fn crown_examples() {
    let rep = fixtures::fp();
    let p = Subtree::point(vx(""));
    assert_eq!(crown(&rep, &p).len(), 6);
    let mut seg = Subtree::point(vx(""));
    seg.add_path(&rep, &geodesic(&rep, &vx(""), &vx("x1")));
    let cr: BTreeSet<CoverCell> = crown(&rep, &seg).into_iter().map(|(c, _)| c).collect();
    assert!(!cr.contains(&cell("", 0)));
    assert_eq!(cr.len(), 10);
    let ball = CoverBall::new(&rep, 4);
    assert_eq!(cr, crown_scan(&rep, &ball, &seg));
}

#[test]
fn rose_basepoint_twins() {
    let rep = fixtures::fp();
    let tw = twins(&rep, &Subtree::point(vx("")));
    assert_eq!(tw.len(), 3);
    for t in &tw {
        assert_eq!(t.shift, Word::gen(t.generator));
        assert_eq!(t.incoming.translate(&t.shift), t.outgoing);
    }
}

/// Brute-force twin of an incoming cell among outgoing crown cells.
fn twin_scan(rep: &BfhRep, cr: &[(CoverCell, Incidence)], inc: &CoverCell) -> Vec<CoverCell> {
    let x = rep.generator[inc.edge].unwrap() as i8;
    cr.iter()
        .filter(|(c, k)| *k == Incidence::Outgoing && c.edge == inc.edge)
        .filter(|(c, _)| {
            let lab = geodesic(rep, &inc.from(rep), &c.to(rep)).cells(rep);
            let w = rep.label(&lab.iter().map(|(c, f)| if *f { c.edge as i32 + 1 } else { -(c.edge as i32) - 1 }).collect::<Vec<_>>());
            w.letters().iter().all(|&a| a == x) || w.letters().iter().all(|&a| a == -x)
        })
        .map(|(c, _)| c.clone())
        .collect()
}

#[test]
fn twins_partition_random_subtrees() {
    for (seed, rep) in [(7u64, fixtures::fp()), (8, fixtures::f4())] {
        let ball = CoverBall::new(&rep, 4);
        let mut r = rng(seed);
        for _ in 0..50 {
            let u = random_subtree(&rep, &ball, &mut r, 10);
            let cr = crown(&rep, &u);
            let tw = twins(&rep, &u);
            let mut seen = BTreeSet::new();
            for t in &tw {
                assert!(seen.insert(t.incoming.clone()));
                assert!(seen.insert(t.outgoing.clone()));
                assert_eq!(twin_scan(&rep, &cr, &t.incoming), vec![t.outgoing.clone()]);
                let expect = t.conj.mul(&Word::gen(t.generator).pow(t.power)).mul(&t.conj.inverse());
                assert_eq!(t.shift, expect);
                assert_eq!(t.incoming.translate(&t.shift), t.outgoing);
            }
            let all: BTreeSet<CoverCell> = cr.into_iter().map(|(c, _)| c).collect();
            assert_eq!(seen, all);
        }
    }
}

#[test]
fn completion_attaches_crown() {
    let text = r#"
[graph]
vertices = ["u", "w"]
edges = [
  { name = "a", from = "u", to = "w" },
  { name = "b", from = "u", to = "w" },
  { name = "c", from = "u", to = "w" },
]
[maps.t1]
a = "a"
b = "b"
c = "c"
"#;
    let rep = BfhRep::from_toml(text).unwrap();
    let u = Subtree::point(CoverVertex::new(Word::empty(), 0));
    let comp = completion(&rep, &u);
    // crown cells at T̃_e start at u and end at w, so the tree edge a must be added
    assert_eq!(comp.cells.len(), 1);
    for (c, inc) in crown(&rep, &comp) {
        let attach = if inc == Incidence::Outgoing { c.from(&rep) } else { c.to(&rep) };
        assert!(comp.vertices.contains(&attach));
    }
}

#[test]
fn lift_examples() {
    let fp = fixtures::fp();
    let x3 = cell("", 2);
    let img = lift_cell(&fp, 1, &x3);
    assert_eq!(fp.path_string(&img.steps), "x3 x1");
    assert_eq!(top_cell(&fp, &x3, 1), x3);
    let f4 = fixtures::f4();
    let img = lift_cell(&f4, 2, &cell("", 3));
    assert_eq!(f4.path_string(&img.steps), "x4 x3 x2 x1");
}

#[test]
fn lifts_commute_with_projection() {
    for rep in [fixtures::fp(), fixtures::f4()] {
        let ball = CoverBall::new(&rep, 3);
        for c in &ball.cells {
            for i in 1..=rep.k() {
                let img = lift_cell(&rep, i, c);
                assert_eq!(img.steps, rep.maps[i - 1].images[c.edge]);
                assert_eq!(img.start, lift_vertex(&rep, i, &c.from(&rep)));
                assert_eq!(img.end(&rep), lift_vertex(&rep, i, &c.to(&rep)));
                assert_eq!(top_cell(&rep, &bot_cell(&rep, c, i), i), *c);
            }
        }
    }
}

/// Cells of a ball whose F_i-image crosses the cell `y`.
fn bot_scan(rep: &BfhRep, ball: &CoverBall, y: &CoverCell, i: usize) -> BTreeSet<CoverCell> {
    ball.cells
        .iter()
        .filter(|c| lift_cell(rep, i, c).cells(rep).iter().any(|(d, _)| d == y))
        .cloned()
        .collect()
}

#[test]
fn bt_matches_scan() {
    for rep in [fixtures::fp(), fixtures::f4()] {
        let ball = CoverBall::new(&rep, 5);
        for e in eoe_representatives(&rep) {
            for i in 1..=rep.k() {
                let computed: BTreeSet<CoverCell> = bt(&rep, &e, i).into_iter().collect();
                assert_eq!(computed, bot_scan(&rep, &ball, &top_cell(&rep, &e, i), i));
            }
        }
    }
    let fp = fixtures::fp();
    let x1 = cell("", 0);
    assert_eq!(bt(&fp, &x1, 2), vec![x1.clone()]);
    assert_eq!(bot_star(&fp, &x1, 1), vec![cell("x1 X3", 2)]);
    assert_eq!(bt_all(&fp, &cell("", 2)), BTreeSet::from([cell("", 2)]));
}

#[test]
fn topmost_bt_is_trivial() {
    let rep = fixtures::identity(3, 2);
    for e in eoe_representatives(&rep) {
        assert_eq!(bt_all(&rep, &e), BTreeSet::from([e.clone()]));
    }
}

#[test]
fn fixtures_one_sided_and_tied() {
    let fp = fixtures::fp();
    let os = check_one_sided(&fp, 6);
    assert!(os.passed());
    let tied = check_tied(&fp, 6, TieReading::PerGeodesic);
    assert!(tied.passed());
    let isets: Vec<Vec<usize>> = tied.entries.iter().map(|e| e.i_set.clone()).collect();
    assert_eq!(isets, vec![vec![1], vec![2], vec![]]);

    let f4 = fixtures::f4();
    assert!(check_one_sided(&f4, 6).passed());
    let tied = check_tied(&f4, 6, TieReading::PerGeodesic);
    assert!(tied.passed());
    assert_eq!(tied.entries[0].i_set, vec![1, 2]);

    let id = fixtures::identity(3, 2);
    assert!(check_one_sided(&id, 6).passed());
    let tied = check_tied(&id, 6, TieReading::PerGeodesic);
    assert!(tied.passed() && tied.entries.iter().all(|e| e.i_set.is_empty()));
}

#[test]
fn two_sided_rep_detected() {
    let rep = BfhRep::rose(2, &[vec!["x1", "x1 x2 x1"]]).unwrap();
    let os = check_one_sided(&rep, 6);
    assert!(!os.passed());
    assert_eq!(os.entries[0].verdict, Verdict::Fail);
}

#[test]
fn small_radius_is_inconclusive() {
    let rep = fixtures::f4();
    let os = check_one_sided(&rep, 0);
    assert!(os.entries.iter().any(|e| e.verdict == Verdict::InconclusiveAtRadius));
}

#[test]
fn equivariance() {
    for (seed, rep) in [(3u64, fixtures::fp()), (4, fixtures::f4())] {
        let ball = CoverBall::new(&rep, 3);
        let mut r = rng(seed);
        for _ in 0..20 {
            let h = random_word(&mut r, rep.n(), 4);
            let u = random_subtree(&rep, &ball, &mut r, 6);
            let hu = u.translate(&h);
            let a: BTreeSet<_> = crown(&rep, &hu).into_iter().map(|(c, _)| c).collect();
            let b: BTreeSet<_> = crown(&rep, &u).into_iter().map(|(c, _)| c.translate(&h)).collect();
            assert_eq!(a, b);
            let ta: Vec<_> = twins(&rep, &hu);
            let tb: Vec<_> = twins(&rep, &u).iter().map(|t| t.translate(&h)).collect();
            let key = |v: &Vec<TwinPair>| v.iter().map(|t| (t.incoming.clone(), t.shift.clone())).collect::<BTreeSet<_>>();
            assert_eq!(key(&ta), key(&tb));
            for e in eoe_representatives(&rep) {
                for i in 1..=rep.k() {
                    let lhs: BTreeSet<_> = bt(&rep, &e.translate(&h), i).into_iter().collect();
                    let rhs: BTreeSet<_> = bt(&rep, &e, i).iter().map(|c| c.translate(&h)).collect();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

/// Whenever F_i(X) crosses E^i_top, X^i_top sits on the opposite side of
/// E^i_top from the side X has w.r.t. E exactly when the geodesic between E
/// and X crosses an even number of Bt_i(E)-cells.
#[test]
fn side_flip_parity() {
    for rep in [fixtures::fp(), fixtures::f4()] {
        let ball = CoverBall::new(&rep, 5);
        let mut checked = 0;
        for e in eoe_representatives(&rep) {
            for i in 1..=rep.k() {
                let top = top_cell(&rep, &e, i);
                let set: BTreeSet<CoverCell> = bt(&rep, &e, i).into_iter().collect();
                for x in set.iter().filter(|x| **x != e && ball.contains_cell(&rep, x)) {
                    let only_e = BTreeSet::from([e.clone()]);
                    let only_top = BTreeSet::from([top.clone()]);
                    let sx = side_of(&rep, &e, &only_e, &x.from(&rep));
                    let xt = top_cell(&rep, x, i);
                    let st = side_of(&rep, &top, &only_top, &xt.from(&rep));
                    // cells strictly between E and X
                    let between = between_cells(&rep, &e, x);
                    let n = between.iter().filter(|c| set.contains(c)).count();
                    assert_eq!(sx != st, n % 2 == 0, "E={} X={} i={i}", e.display(&rep), x.display(&rep));
                    checked += 1;
                }
            }
        }
        assert!(checked > 0 || rep.n() == 0);
    }
}

fn between_cells(rep: &BfhRep, a: &CoverCell, b: &CoverCell) -> Vec<CoverCell> {
    let mut best: Option<CoverPath> = None;
    for u in [a.from(rep), a.to(rep)] {
        for v in [b.from(rep), b.to(rep)] {
            let p = geodesic(rep, &u, &v);
            if best.as_ref().map_or(true, |q| p.len() < q.len()) {
                best = Some(p);
            }
        }
    }
    best.unwrap().cells(rep).into_iter().map(|(c, _)| c).collect()
}

#[test]
fn dot_export_marks_cells() {
    let rep = fixtures::fp();
    let ball = CoverBall::new(&rep, 1);
    let dot = ball.to_dot(&rep, &BTreeSet::from([cell("", 0)]));
    assert!(dot.contains("penwidth=4"));
    assert_eq!(dot.matches(" -- ").count(), 6);
}

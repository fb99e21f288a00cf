#![allow(dead_code)]

pub mod reps;

use fbf_walls::algebra::{Kind, Word};
use fbf_walls::cover::*;
use fbf_walls::rep::BfhRep;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn hx(s: &str) -> Word {
    Word::parse(Kind::Horizontal, s).unwrap()
}

pub fn vt(s: &str) -> Word {
    Word::parse(Kind::Vertical, s).unwrap()
}

pub fn random_word(r: &mut StdRng, rank: usize, max_len: usize) -> Word {
    let len = r.gen_range(0..=max_len);
    let mut w = Word::empty();
    while w.len() < len {
        let a = r.gen_range(1..=rank as i8);
        w.push(if r.gen_bool(0.5) { a } else { -a });
    }
    w
}

/// Random subtree grown by attaching neighbours inside a ball.
pub fn random_subtree(rep: &BfhRep, ball: &CoverBall, r: &mut StdRng, max_size: usize) -> Subtree {
    let start = ball.vertices[r.gen_range(0..ball.vertices.len())].clone();
    let mut t = Subtree::point(start);
    let size = r.gen_range(1..=max_size);
    for _ in 0..size * 4 {
        if t.vertices.len() >= size {
            break;
        }
        let vs: Vec<_> = t.vertices.iter().cloned().collect();
        let v = &vs[r.gen_range(0..vs.len())];
        let nb = neighbours(rep, v);
        let (c, w) = &nb[r.gen_range(0..nb.len())];
        if !t.vertices.contains(w) && ball.contains(w) {
            t.cells.insert(c.clone());
            t.vertices.insert(w.clone());
        }
    }
    t
}

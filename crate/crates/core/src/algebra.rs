//! Free-group words, the automorphisms σ(t_j) and normal forms in `F_n ⋊ F_k`.
//!
//! Letters are stored as signed bytes: `+i` is generator `i` (1-based), `-i`
//! its inverse. Whether a word is horizontal (`x`) or vertical (`t`) is
//! carried by context, except for [`Letter`] which records it explicitly.
//!
//! # Conventions
//!
//! The square relator forces `t_j⁻¹ x t_j = σ_j(x)`. For a vertical word
//! `t = a_1 ⋯ a_m` we set `σ_t = σ_{a_1} ∘ ⋯ ∘ σ_{a_m}` (covariant), so that
//! `σ_{t t'} = σ_t ∘ σ_{t'}`. Conjugation `ψ_v(h) = v⁻¹ h v` then reads
//! letters of `v` left to right: `ψ_{ab} = ψ_b ∘ ψ_a`, `ψ_{t_j} = σ_j`,
//! `ψ_{t_j⁻¹} = σ_j⁻¹`. Every other formula in the crate is derived from these.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("generator {kind}{index} out of range (rank {rank})")]
    IndexOutOfRange { kind: char, index: usize, rank: usize },
    #[error("sigma(t{0}) has no inverse within the search bound")]
    NoInverse(usize),
    #[error("supplied inverse for sigma(t{0}) is wrong")]
    BadInverse(usize),
    #[error("sigma table has wrong shape: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("cannot parse letter {0:?}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Horizontal,
    Vertical,
}

impl Kind {
    fn prefix(self) -> char {
        match self {
            Kind::Horizontal => 'x',
            Kind::Vertical => 't',
        }
    }
}

/// A generator or its inverse, tagged with its kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub kind: Kind,
    /// 1-based generator index.
    pub base: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn x(i: u8) -> Self {
        Letter { kind: Kind::Horizontal, base: i, inverse: false }
    }
    pub fn t(j: u8) -> Self {
        Letter { kind: Kind::Vertical, base: j, inverse: false }
    }
    pub fn inv(self) -> Self {
        Letter { inverse: !self.inverse, ..self }
    }
    pub fn signed(self) -> i8 {
        if self.inverse {
            -(self.base as i8)
        } else {
            self.base as i8
        }
    }

    /// Parses `x3`, `X3`, `t1`, `T1`.
    pub fn parse(s: &str) -> Result<Self, AlgebraError> {
        let mut chars = s.chars();
        let c = chars.next().ok_or_else(|| AlgebraError::Parse(s.into()))?;
        let (kind, inverse) = match c {
            'x' => (Kind::Horizontal, false),
            'X' => (Kind::Horizontal, true),
            't' => (Kind::Vertical, false),
            'T' => (Kind::Vertical, true),
            _ => return Err(AlgebraError::Parse(s.into())),
        };
        let base: u8 = chars.as_str().parse().map_err(|_| AlgebraError::Parse(s.into()))?;
        if base == 0 || base > 127 {
            return Err(AlgebraError::Parse(s.into()));
        }
        Ok(Letter { kind, base, inverse })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.kind.prefix();
        let c = if self.inverse { c.to_ascii_uppercase() } else { c };
        write!(f, "{c}{}", self.base)
    }
}

/// A word in a free group. Ordering is shortlex.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<i8>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| {
            // x1 < X1 < x2 < X2 ...
            let key = |a: &i8| (a.unsigned_abs(), *a < 0);
            self.0.iter().map(key).cmp(other.0.iter().map(key))
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Wraps letters without reducing.
    pub fn raw(letters: Vec<i8>) -> Self {
        debug_assert!(letters.iter().all(|&a| a != 0));
        Word(letters)
    }

    /// Wraps letters and freely reduces them.
    pub fn new(letters: Vec<i8>) -> Self {
        Word(letters).reduce()
    }

    pub fn gen(i: usize) -> Self {
        Word(vec![i as i8])
    }

    pub fn letters(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != -w[1])
    }

    pub fn reduce(self) -> Word {
        let mut out: Vec<i8> = Vec::with_capacity(self.0.len());
        for a in self.0 {
            if out.last() == Some(&-a) {
                out.pop();
            } else {
                out.push(a);
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&a| -a).collect())
    }

    /// Product of two reduced words, reduced.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &a in &other.0 {
            if out.last() == Some(&-a) {
                out.pop();
            } else {
                out.push(a);
            }
        }
        Word(out)
    }

    pub fn push(&mut self, a: i8) {
        if self.0.last() == Some(&-a) {
            self.0.pop();
        } else {
            self.0.push(a);
        }
    }

    pub fn pow(&self, p: i64) -> Word {
        let base = if p < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..p.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn max_index(&self) -> usize {
        self.0.iter().map(|a| a.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn parse(kind: Kind, s: &str) -> Result<Word, AlgebraError> {
        let mut v = Vec::new();
        for tok in s.split_whitespace() {
            let l = Letter::parse(tok)?;
            if l.kind != kind {
                return Err(AlgebraError::Parse(tok.into()));
            }
            v.push(l.signed());
        }
        Ok(Word::new(v))
    }

    pub fn to_strings(&self, kind: Kind) -> Vec<String> {
        self.0
            .iter()
            .map(|&a| Letter { kind, base: a.unsigned_abs(), inverse: a < 0 }.to_string())
            .collect()
    }

    pub fn display(&self, kind: Kind) -> String {
        if self.0.is_empty() {
            "e".into()
        } else {
            self.to_strings(kind).join(" ")
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Free reduction of an arbitrary word.
pub fn reduce(w: &Word) -> Word {
    w.clone().reduce()
}

/// An endomorphism of `F_n` given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub images: Vec<Word>,
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Automorphism { images: (1..=n).map(Word::gen).collect() }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Word::empty();
        for &a in w.letters() {
            let img = &self.images[a.unsigned_abs() as usize - 1];
            if a > 0 {
                for &b in img.letters() {
                    out.push(b);
                }
            } else {
                for &b in img.letters().iter().rev() {
                    out.push(-b);
                }
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism { images: other.images.iter().map(|w| self.apply(w)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| *w == Word::gen(i + 1))
    }

    /// Searches for the inverse automorphism.
    ///
    /// A triangular solve is tried first; it handles every map of the form
    /// `x_i ↦ u x_i^{±1} v` with `u, v` in earlier-solved generators. Otherwise
    /// a breadth-first search over reduced words whose σ-image has at most
    /// `bound` letters before reduction.
    pub fn find_inverse(&self, bound: usize) -> Option<Automorphism> {
        let inv = self.triangular_inverse().or_else(|| self.search_inverse(bound))?;
        self.verify_inverse(&inv).then_some(inv)
    }

    pub fn verify_inverse(&self, inv: &Automorphism) -> bool {
        inv.rank() == self.rank() && self.compose(inv).is_identity() && inv.compose(self).is_identity()
    }

    fn triangular_inverse(&self) -> Option<Automorphism> {
        let n = self.rank();
        let mut solved: Vec<Option<Word>> = vec![None; n];
        let mut progress = true;
        while progress {
            progress = false;
            for i in 0..n {
                if solved[i].is_some() {
                    continue;
                }
                let img = self.images[i].letters();
                let gi = (i + 1) as i8;
                let pos: Vec<usize> = (0..img.len()).filter(|&p| img[p].abs() == gi).collect();
                if pos.len() != 1 {
                    continue;
                }
                let p = pos[0];
                let known = |s: &[i8]| s.iter().all(|a| solved[a.unsigned_abs() as usize - 1].is_some());
                if !known(&img[..p]) || !known(&img[p + 1..]) {
                    continue;
                }
                let sub = |s: &[i8]| {
                    let mut out = Word::empty();
                    for &a in s {
                        let w = solved[a.unsigned_abs() as usize - 1].as_ref().unwrap();
                        out = out.mul(&if a > 0 { w.clone() } else { w.inverse() });
                    }
                    out
                };
                let a = sub(&img[..p]);
                let b = sub(&img[p + 1..]);
                let w = if img[p] > 0 {
                    a.inverse().mul(&Word::gen(i + 1)).mul(&b.inverse())
                } else {
                    b.mul(&Word::gen(i + 1)).mul(&a)
                };
                solved[i] = Some(w);
                progress = true;
            }
        }
        let images: Option<Vec<Word>> = solved.into_iter().collect();
        images.map(|images| Automorphism { images })
    }

    fn search_inverse(&self, bound: usize) -> Option<Automorphism> {
        let n = self.rank();
        let mut found: Vec<Option<Word>> = vec![None; n];
        let mut remaining = n;
        // state: (preimage u, σ(u)); cost = accumulated image length
        let mut seen: HashMap<Word, ()> = HashMap::new();
        let mut queue: VecDeque<(Word, Word, usize)> = VecDeque::new();
        queue.push_back((Word::empty(), Word::empty(), 0));
        seen.insert(Word::empty(), ());
        while let Some((u, img, cost)) = queue.pop_front() {
            if img.len() == 1 && img.letters()[0] > 0 {
                let i = img.letters()[0] as usize - 1;
                if found[i].is_none() {
                    found[i] = Some(u.clone());
                    remaining -= 1;
                    if remaining == 0 {
                        break;
                    }
                }
            }
            if seen.len() > 2_000_000 {
                break;
            }
            for g in 1..=n as i8 {
                for a in [g, -g] {
                    if u.letters().last() == Some(&-a) {
                        continue;
                    }
                    let step = self.images[g as usize - 1].len();
                    if cost + step > bound {
                        continue;
                    }
                    let mut u2 = u.clone();
                    u2.push(a);
                    if seen.contains_key(&u2) {
                        continue;
                    }
                    seen.insert(u2.clone(), ());
                    let img2 = img.mul(&self.apply(&Word::raw(vec![a])));
                    queue.push_back((u2, img2, cost + step));
                }
            }
        }
        let images: Option<Vec<Word>> = found.into_iter().collect();
        images.map(|images| Automorphism { images })
    }
}

/// The automorphisms σ(t_1), …, σ(t_k) of `F_n` and their inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaSpec {
    pub n: usize,
    pub k: usize,
    forward: Vec<Automorphism>,
    backward: Vec<Automorphism>,
}

pub const DEFAULT_INVERSE_BOUND: usize = 32;

impl SigmaSpec {
    /// `images[j][i]` is σ(t_{j+1})(x_{i+1}). `inverses`, when given,
    /// overrides the search for the matching index.
    pub fn new(
        n: usize,
        images: Vec<Vec<Word>>,
        inverses: Vec<Option<Vec<Word>>>,
        bound: usize,
    ) -> Result<Self, AlgebraError> {
        let k = images.len();
        let mut forward = Vec::with_capacity(k);
        let mut backward = Vec::with_capacity(k);
        for (j, imgs) in images.into_iter().enumerate() {
            if imgs.len() != n {
                return Err(AlgebraError::Shape { expected: n, got: imgs.len() });
            }
            for w in &imgs {
                if w.max_index() > n {
                    return Err(AlgebraError::IndexOutOfRange { kind: 'x', index: w.max_index(), rank: n });
                }
            }
            let f = Automorphism { images: imgs.into_iter().map(Word::reduce).collect() };
            let b = match inverses.get(j).cloned().flatten() {
                Some(inv) => {
                    let inv = Automorphism { images: inv.into_iter().map(Word::reduce).collect() };
                    if !f.verify_inverse(&inv) {
                        return Err(AlgebraError::BadInverse(j + 1));
                    }
                    inv
                }
                None => f.find_inverse(bound).ok_or(AlgebraError::NoInverse(j + 1))?,
            };
            forward.push(f);
            backward.push(b);
        }
        Ok(SigmaSpec { n, k, forward, backward })
    }

    pub fn from_images(n: usize, images: Vec<Vec<Word>>) -> Result<Self, AlgebraError> {
        let k = images.len();
        Self::new(n, images, vec![None; k], DEFAULT_INVERSE_BOUND)
    }

    pub fn forward(&self, j: usize) -> &Automorphism {
        &self.forward[j - 1]
    }

    pub fn backward(&self, j: usize) -> &Automorphism {
        &self.backward[j - 1]
    }

    /// σ_{t_j}^{±1} for a signed vertical letter.
    pub fn letter(&self, a: i8) -> &Automorphism {
        if a > 0 {
            &self.forward[a as usize - 1]
        } else {
            &self.backward[(-a) as usize - 1]
        }
    }

    fn check(&self, t: &Word, w: &Word) -> Result<(), AlgebraError> {
        if t.max_index() > self.k {
            return Err(AlgebraError::IndexOutOfRange { kind: 't', index: t.max_index(), rank: self.k });
        }
        if w.max_index() > self.n {
            return Err(AlgebraError::IndexOutOfRange { kind: 'x', index: w.max_index(), rank: self.n });
        }
        Ok(())
    }

    /// σ_t(w), covariant in `t`.
    pub fn apply_sigma(&self, t: &Word, w: &Word) -> Result<Word, AlgebraError> {
        self.check(t, w)?;
        Ok(self.sigma(t, w))
    }

    pub fn sigma(&self, t: &Word, w: &Word) -> Word {
        let mut out = w.clone();
        for &a in t.letters().iter().rev() {
            out = self.letter(a).apply(&out);
        }
        out
    }

    /// ψ_v(h) = v⁻¹ h v in `G`.
    pub fn psi(&self, v: &Word, h: &Word) -> Word {
        let mut out = h.clone();
        for &a in v.letters() {
            out = self.letter(a).apply(&out);
        }
        out
    }
}

/// An element `h·v` of `G` with `h ∈ F_n`, `v ∈ F_k` both reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub h: Word,
    pub v: Word,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(h: Word, v: Word) -> Self {
        GroupElement { h: h.reduce(), v: v.reduce() }
    }

    pub fn horizontal(h: Word) -> Self {
        GroupElement { h, v: Word::empty() }
    }

    pub fn vertical(v: Word) -> Self {
        GroupElement { h: Word::empty(), v }
    }

    pub fn is_identity(&self) -> bool {
        self.h.is_empty() && self.v.is_empty()
    }

    /// Builds `v·h'` (vertical letters first).
    pub fn from_vh(spec: &SigmaSpec, v: Word, hp: &Word) -> Self {
        let h = spec.psi(&v.inverse(), hp);
        GroupElement { h, v }
    }

    /// Returns `(v, h')` with `self = v·h'`.
    pub fn to_vh(&self, spec: &SigmaSpec) -> (Word, Word) {
        (self.v.clone(), spec.psi(&self.v, &self.h))
    }

    pub fn multiply(&self, other: &GroupElement, spec: &SigmaSpec) -> GroupElement {
        // h1 v1 h2 v2 = h1 ψ_{v1⁻¹}(h2) v1 v2
        let h2 = spec.psi(&self.v.inverse(), &other.h);
        GroupElement { h: self.h.mul(&h2), v: self.v.mul(&other.v) }
    }

    pub fn invert(&self, spec: &SigmaSpec) -> GroupElement {
        // (h v)⁻¹ = ψ_v(h⁻¹) v⁻¹
        GroupElement { h: spec.psi(&self.v, &self.h.inverse()), v: self.v.inverse() }
    }

    pub fn len(&self) -> usize {
        self.h.len() + self.v.len()
    }

    pub fn display(&self) -> String {
        format!("{} | {}", self.h.display(Kind::Horizontal), self.v.display(Kind::Vertical))
    }
}

impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GroupElement", 2)?;
        st.serialize_field("h", &self.h.to_strings(Kind::Horizontal))?;
        st.serialize_field("v", &self.v.to_strings(Kind::Vertical))?;
        st.end()
    }
}

/// Normal form of a mixed sequence of letters.
pub fn normalize(mixed: &[Letter], spec: &SigmaSpec) -> GroupElement {
    // Accumulate in v·h' form: right-multiplying by x appends to h',
    // right-multiplying by t_j^{±} conjugates h'.
    let mut v = Word::empty();
    let mut hp = Word::empty();
    for l in mixed {
        match l.kind {
            Kind::Horizontal => hp.push(l.signed()),
            Kind::Vertical => {
                v.push(l.signed());
                hp = spec.letter(l.signed()).apply(&hp);
            }
        }
    }
    GroupElement::from_vh(spec, v, &hp)
}

/// Parses a whitespace-separated mixed word such as `t1 x3 X1`.
pub fn parse_mixed(s: &str) -> Result<Vec<Letter>, AlgebraError> {
    s.split_whitespace().map(Letter::parse).collect()
}

/// Letters of `g = h·v` as a mixed sequence.
pub fn to_mixed(g: &GroupElement) -> Vec<Letter> {
    let mut out: Vec<Letter> = g
        .h
        .letters()
        .iter()
        .map(|&a| Letter { kind: Kind::Horizontal, base: a.unsigned_abs(), inverse: a < 0 })
        .collect();
    out.extend(
        g.v.letters().iter().map(|&a| Letter { kind: Kind::Vertical, base: a.unsigned_abs(), inverse: a < 0 }),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> SigmaSpec {
        let x = |s: &str| Word::parse(Kind::Horizontal, s).unwrap();
        SigmaSpec::from_images(
            3,
            vec![vec![x("x1"), x("x2"), x("x3 x1")], vec![x("x1"), x("x2"), x("x3 x2")]],
        )
        .unwrap()
    }

    #[test]
    fn inverse_found_triangularly() {
        let s = fp();
        assert_eq!(s.backward(1).images[2], Word::parse(Kind::Horizontal, "x3 X1").unwrap());
    }

    #[test]
    fn search_inverse_on_non_triangular_map() {
        // x1 -> x1 x2, x2 -> x1 x2 x2 is not triangular in either letter.
        let a = Automorphism { images: vec![Word::new(vec![1, 2]), Word::new(vec![1, 2, 2])] };
        assert!(a.triangular_inverse().is_none());
        let inv = a.find_inverse(32).unwrap();
        assert!(a.verify_inverse(&inv));
    }

    #[test]
    fn shortlex_order() {
        assert!(Word::new(vec![2]) < Word::new(vec![1, 1]));
        assert!(Word::new(vec![1]) < Word::new(vec![-1]));
    }
}

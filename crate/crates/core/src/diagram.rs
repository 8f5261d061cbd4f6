//! The central data model: long clasp diagrams.
//!
//! A diagram is a set of `n` chords on a line. Chord endpoints are always the
//! integers `1..=2n` (skeleton points without a chord foot are not
//! represented), each chord carries a sign and a height, and heights are a
//! permutation of `1..=n` with larger height meaning the chord passes over.
//! Chords are stored sorted by left endpoint; the chord at sorted position
//! `i` (0-based here, 1-based in all text formats) is "chord i".

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Chord {
    pub left: usize,
    pub right: usize,
    /// Rank in 1..=n; larger passes over.
    pub height: usize,
    /// +1 or -1.
    pub sign: i8,
    /// Marked chords are interpreted only by the finite-type layer; everywhere
    /// else they behave like ordinary chords (serialization excepted).
    pub special: bool,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ClaspDiagram {
    chords: Vec<Chord>,
}

impl ClaspDiagram {
    pub fn empty() -> Self {
        ClaspDiagram { chords: Vec::new() }
    }

    /// Sorts by left endpoint and validates every structural invariant.
    pub fn new(mut chords: Vec<Chord>) -> Result<Self> {
        chords.sort_by_key(|c| c.left);
        let n = chords.len();
        let mut seen_endpoints = vec![false; 2 * n + 1];
        let mut seen_heights = vec![false; n + 1];
        for c in &chords {
            if c.left >= c.right {
                return Err(Error::Domain(format!(
                    "chord endpoints must satisfy left < right, got {}-{}",
                    c.left, c.right
                )));
            }
            if c.sign != 1 && c.sign != -1 {
                return Err(Error::Domain(format!(
                    "chord sign must be +/-1, got {}",
                    c.sign
                )));
            }
            for &e in &[c.left, c.right] {
                if e < 1 || e > 2 * n {
                    return Err(Error::Domain(format!(
                        "endpoint {e} outside 1..={} for {n} chords",
                        2 * n
                    )));
                }
                if seen_endpoints[e] {
                    return Err(Error::Domain(format!("endpoint {e} repeated")));
                }
                seen_endpoints[e] = true;
            }
            if c.height < 1 || c.height > n {
                return Err(Error::Domain(format!(
                    "height {} outside 1..={n}",
                    c.height
                )));
            }
            if seen_heights[c.height] {
                return Err(Error::Domain(format!("height {} repeated", c.height)));
            }
            seen_heights[c.height] = true;
        }
        Ok(ClaspDiagram { chords })
    }

    pub fn n(&self) -> usize {
        self.chords.len()
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    pub fn has_special(&self) -> bool {
        self.chords.iter().any(|c| c.special)
    }

    /// Chord (0-based) whose height is `h`.
    pub fn chord_at_height(&self, h: usize) -> Option<usize> {
        self.chords.iter().position(|c| c.height == h)
    }

    pub fn serialize(&self) -> String {
        if self.chords.is_empty() {
            return "empty".to_string();
        }
        self.chords
            .iter()
            .map(|c| {
                format!(
                    "{}-{}:{}:{}{}",
                    c.left,
                    c.right,
                    c.height,
                    if c.sign > 0 { "+" } else { "-" },
                    if c.special { "*" } else { "" }
                )
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Stable identity string; equal diagrams have equal keys.
    pub fn canonical_key(&self) -> String {
        self.serialize()
    }

    /// True iff the endpoints of chords `i` and `j` (0-based) interleave.
    pub fn linked(&self, i: usize, j: usize) -> Result<bool> {
        let n = self.n();
        if i >= n || j >= n || i == j {
            return Err(Error::Index(format!(
                "chord pair ({i},{j}) invalid for {n} chords"
            )));
        }
        let a = &self.chords[i];
        let b = &self.chords[j];
        Ok((a.left < b.left && b.left < a.right && a.right < b.right)
            || (b.left < a.left && a.left < b.right && b.right < a.right))
    }

    /// The matrix L: for a linked pair with chord `i` passing over chord `j`,
    /// the single nonzero entry is `l[i][j] = +1` if `i < j` and `-1` if
    /// `i > j` (indices in left-endpoint order).
    pub fn linking_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        let mut l = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                if self.linked(i, j).unwrap() {
                    let over = if self.chords[i].height > self.chords[j].height {
                        i
                    } else {
                        j
                    };
                    let under = i + j - over;
                    l[over][under] = if over < under { 1 } else { -1 };
                }
            }
        }
        l
    }

    /// The diagonal sign matrix E.
    pub fn sign_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        let mut e = vec![vec![0i64; n]; n];
        for (i, c) in self.chords.iter().enumerate() {
            e[i][i] = c.sign as i64;
        }
        e
    }

    /// Reverse all heights and negate all signs; encodes the mirror knot.
    pub fn mirror(&self) -> Self {
        let n = self.n();
        ClaspDiagram {
            chords: self
                .chords
                .iter()
                .map(|c| Chord {
                    height: n + 1 - c.height,
                    sign: -c.sign,
                    ..*c
                })
                .collect(),
        }
    }

    /// True iff heights strictly decrease in left-endpoint order, i.e. chord
    /// `i` (0-based) has height `n - i`.
    pub fn is_descending(&self) -> bool {
        let n = self.n();
        self.chords
            .iter()
            .enumerate()
            .all(|(i, c)| c.height == n - i)
    }

    /// The subdiagram on the chords listed in `s` (0-based indices):
    /// endpoints recompressed to `1..=2|s|`, heights reranked preserving
    /// relative order, signs and marks kept.
    pub fn induced_subdiagram(&self, s: &[usize]) -> Result<ClaspDiagram> {
        let n = self.n();
        let mut idx: Vec<usize> = s.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() != s.len() {
            return Err(Error::Index("duplicate chord index in subset".into()));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
            return Err(Error::Index(format!(
                "chord index {bad} out of range for {n} chords"
            )));
        }
        let mut endpoints: Vec<usize> = Vec::with_capacity(2 * idx.len());
        let mut heights: Vec<usize> = Vec::with_capacity(idx.len());
        for &i in &idx {
            endpoints.push(self.chords[i].left);
            endpoints.push(self.chords[i].right);
            heights.push(self.chords[i].height);
        }
        endpoints.sort_unstable();
        heights.sort_unstable();
        let rank_e = |v: usize| endpoints.binary_search(&v).unwrap() + 1;
        let rank_h = |v: usize| heights.binary_search(&v).unwrap() + 1;
        let chords = idx
            .iter()
            .map(|&i| {
                let c = &self.chords[i];
                Chord {
                    left: rank_e(c.left),
                    right: rank_e(c.right),
                    height: rank_h(c.height),
                    sign: c.sign,
                    special: c.special,
                }
            })
            .collect();
        // Ordering by left endpoint is preserved by compression, and the
        // invariants hold by construction.
        Ok(ClaspDiagram { chords })
    }

    /// Rebuild a valid diagram from chords whose endpoints and heights are
    /// merely ordered, not canonical: endpoints are compressed to `1..=2n` and
    /// heights reranked. Used by move application and braid conversion.
    pub fn from_raw(chords: Vec<(i64, i64, i64, i8, bool)>) -> Result<ClaspDiagram> {
        let mut endpoints: Vec<i64> = Vec::with_capacity(2 * chords.len());
        let mut heights: Vec<i64> = Vec::with_capacity(chords.len());
        for &(l, r, h, _, _) in &chords {
            endpoints.push(l);
            endpoints.push(r);
            heights.push(h);
        }
        endpoints.sort_unstable();
        heights.sort_unstable();
        if endpoints.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("raw endpoints collide".into()));
        }
        if heights.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("raw heights collide".into()));
        }
        let canon = chords
            .into_iter()
            .map(|(l, r, h, sign, special)| Chord {
                left: endpoints.binary_search(&l).unwrap() + 1,
                right: endpoints.binary_search(&r).unwrap() + 1,
                height: heights.binary_search(&h).unwrap() + 1,
                sign,
                special,
            })
            .collect();
        ClaspDiagram::new(canon)
    }
}

/// Parse the pinned diagram grammar: `empty`, or whitespace-separated tokens
/// `L-R:H:S` with `S` one of `+`, `-`, `+*`, `-*`.
pub fn parse_diagram(text: &str) -> Result<ClaspDiagram> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(Error::Parse(
            "empty input; write `empty` for the empty diagram".into(),
        ));
    }
    if tokens[0] == "empty" {
        if tokens.len() > 1 {
            return Err(Error::Parse("`empty` must stand alone".into()));
        }
        return Ok(ClaspDiagram::empty());
    }
    let mut chords = Vec::with_capacity(tokens.len());
    for tok in tokens {
        chords.push(parse_chord_token(tok)?);
    }
    ClaspDiagram::new(chords)
}

fn parse_chord_token(tok: &str) -> Result<Chord> {
    let bad = || Error::Parse(format!("bad chord token `{tok}` (expected L-R:H:S)"));
    let (ends, rest) = tok.split_once(':').ok_or_else(bad)?;
    let (h_str, sign_str) = rest.split_once(':').ok_or_else(bad)?;
    let (l_str, r_str) = ends.split_once('-').ok_or_else(bad)?;
    let left: usize = l_str.parse().map_err(|_| bad())?;
    let right: usize = r_str.parse().map_err(|_| bad())?;
    let height: usize = h_str.parse().map_err(|_| bad())?;
    let (sign, special) = match sign_str {
        "+" => (1, false),
        "-" => (-1, false),
        "+*" => (1, true),
        "-*" => (-1, true),
        _ => return Err(bad()),
    };
    Ok(Chord {
        left,
        right,
        height,
        sign,
        special,
    })
}

pub const DEFAULT_ENUM_CAP: usize = 6;

/// All distinct long diagrams with exactly `k` chords, in a pinned
/// deterministic order: perfect matchings of `2k` points (lexicographic by
/// pairing from the smallest free point), then height permutations
/// (lexicographic), then sign patterns (binary counting, bit `i` set meaning
/// chord `i` negative). Count is `(2k-1)!! * k! * 2^k`.
pub fn enumerate_diagrams(k: usize) -> Result<Vec<ClaspDiagram>> {
    enumerate_diagrams_capped(k, DEFAULT_ENUM_CAP)
}

pub fn enumerate_diagrams_capped(k: usize, cap: usize) -> Result<Vec<ClaspDiagram>> {
    if k > cap {
        return Err(Error::Resource(format!(
            "enumeration of {k}-chord diagrams exceeds the cap of {cap}"
        )));
    }
    let mut matchings = Vec::new();
    let mut current = Vec::new();
    let mut free: Vec<usize> = (1..=2 * k).collect();
    collect_matchings(&mut free, &mut current, &mut matchings);
    let mut result = Vec::new();
    let mut heights: Vec<usize> = (1..=k).collect();
    for matching in &matchings {
        loop {
            for mask in 0..(1u64 << k) {
                let chords: Vec<Chord> = matching
                    .iter()
                    .enumerate()
                    .map(|(i, &(l, r))| Chord {
                        left: l,
                        right: r,
                        height: heights[i],
                        sign: if mask >> i & 1 == 0 { 1 } else { -1 },
                        special: false,
                    })
                    .collect();
                result.push(ClaspDiagram { chords });
            }
            if !next_permutation(&mut heights) {
                break;
            }
        }
        // reset for the next matching
        for (i, h) in heights.iter_mut().enumerate() {
            *h = i + 1;
        }
    }
    Ok(result)
}

/// Matchings are built by always pairing the smallest free point, so each
/// matching is produced once and the list is ordered.
fn collect_matchings(
    free: &mut Vec<usize>,
    current: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if free.is_empty() {
        out.push(current.clone());
        return;
    }
    let first = free[0];
    for idx in 1..free.len() {
        let partner = free[idx];
        let mut rest: Vec<usize> = free[1..].to_vec();
        rest.remove(idx - 1);
        current.push((first, partner));
        collect_matchings(&mut rest, current, out);
        current.pop();
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Seeded random diagram with exactly `k` ordinary chords: uniform matching,
/// uniform height permutation, uniform signs.
pub fn random_diagram<R: Rng>(rng: &mut R, k: usize) -> ClaspDiagram {
    let mut free: Vec<usize> = (1..=2 * k).collect();
    let mut pairs = Vec::with_capacity(k);
    while !free.is_empty() {
        let first = free.remove(0);
        let idx = rng.gen_range(0..free.len());
        let partner = free.remove(idx);
        pairs.push((first, partner));
    }
    let mut heights: Vec<usize> = (1..=k).collect();
    heights.shuffle(rng);
    let chords: Vec<Chord> = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (l, r))| Chord {
            left: l,
            right: r,
            height: heights[i],
            sign: if rng.gen_bool(0.5) { 1 } else { -1 },
            special: false,
        })
        .collect();
    ClaspDiagram::new(chords).expect("randomly generated diagram is valid")
}

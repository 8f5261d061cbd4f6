//! The local moves on clasp diagrams: height swap (A), cyclic height shift
//! (B), isolated-chord birth/death (C1), cancelling-pair birth/death (C2), and
//! a data-driven four-chord rewrite (C4). Every application returns the
//! rewritten diagram together with the exact inverse instance, so move paths
//! can be replayed and reversed mechanically.

use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alexander::alexander;
use crate::diagram::{random_diagram, ClaspDiagram};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MoveKind {
    A,
    B,
    C1Delete,
    C1Insert,
    C2Delete,
    C2Insert,
    C4Forward,
    C4Backward,
}

pub const ALL_KINDS: [MoveKind; 8] = [
    MoveKind::A,
    MoveKind::B,
    MoveKind::C1Delete,
    MoveKind::C1Insert,
    MoveKind::C2Delete,
    MoveKind::C2Insert,
    MoveKind::C4Forward,
    MoveKind::C4Backward,
];

/// A concrete move on a concrete diagram. Chord indices are 0-based
/// (left-endpoint order); the `Display` form uses 1-based numbers to match
/// the diagram text format.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MoveInstance {
    /// Swap the (non-linked) chords at heights `k` and `k+1`.
    A { k: usize },
    /// Cyclic shift of all heights; `direction` is +1 or -1.
    B { direction: i8 },
    /// Delete the isolated chord at this index.
    C1Delete { chord: usize },
    /// Insert an isolated chord after `gap` existing endpoints, at height
    /// slot `height`, with the given sign.
    C1Insert { gap: usize, height: usize, sign: i8 },
    /// Delete the nested-adjacent cancelling pair whose outer chord is at
    /// this index.
    C2Delete { outer: usize },
    /// Insert a cancelling pair: outer feet after gaps `gap_a`/`gap_b`, pair
    /// occupying height slots `height`/`height+1`.
    C2Insert {
        gap_a: usize,
        gap_b: usize,
        height: usize,
        outer_sign: i8,
        outer_higher: bool,
    },
    /// Rewrite the four chords (sorted indices) matching the loaded rule.
    C4 { chords: [usize; 4], backward: bool },
}

impl MoveInstance {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveInstance::A { .. } => MoveKind::A,
            MoveInstance::B { .. } => MoveKind::B,
            MoveInstance::C1Delete { .. } => MoveKind::C1Delete,
            MoveInstance::C1Insert { .. } => MoveKind::C1Insert,
            MoveInstance::C2Delete { .. } => MoveKind::C2Delete,
            MoveInstance::C2Insert { .. } => MoveKind::C2Insert,
            MoveInstance::C4 {
                backward: false, ..
            } => MoveKind::C4Forward,
            MoveInstance::C4 { backward: true, .. } => MoveKind::C4Backward,
        }
    }
}

impl fmt::Display for MoveInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveInstance::A { k } => write!(f, "A k={k}"),
            MoveInstance::B { direction } => {
                write!(f, "B {}", if *direction > 0 { "+1" } else { "-1" })
            }
            MoveInstance::C1Delete { chord } => write!(f, "C1-delete chord={}", chord + 1),
            MoveInstance::C1Insert { gap, height, sign } => write!(
                f,
                "C1-insert gap={gap} height={height} sign={}",
                if *sign > 0 { "+" } else { "-" }
            ),
            MoveInstance::C2Delete { outer } => write!(f, "C2-delete outer={}", outer + 1),
            MoveInstance::C2Insert {
                gap_a,
                gap_b,
                height,
                outer_sign,
                outer_higher,
            } => write!(
                f,
                "C2-insert gaps={gap_a},{gap_b} height={height} outer={}{}",
                if *outer_sign > 0 { "+" } else { "-" },
                if *outer_higher {
                    " outer-over"
                } else {
                    " outer-under"
                }
            ),
            MoveInstance::C4 { chords, backward } => write!(
                f,
                "C4-{} chords={},{},{},{}",
                if *backward { "backward" } else { "forward" },
                chords[0] + 1,
                chords[1] + 1,
                chords[2] + 1,
                chords[3] + 1
            ),
        }
    }
}

/// Apply one move. Returns the rewritten diagram and the instance that undoes
/// it. The output is revalidated through the diagram constructor.
pub fn apply_move(
    d: &ClaspDiagram,
    inst: &MoveInstance,
    rule: Option<&C4Rule>,
) -> Result<(ClaspDiagram, MoveInstance)> {
    match inst {
        MoveInstance::A { k } => apply_a(d, *k),
        MoveInstance::B { direction } => apply_b(d, *direction),
        MoveInstance::C1Delete { chord } => apply_c1_delete(d, *chord),
        MoveInstance::C1Insert { gap, height, sign } => apply_c1_insert(d, *gap, *height, *sign),
        MoveInstance::C2Delete { outer } => apply_c2_delete(d, *outer),
        MoveInstance::C2Insert {
            gap_a,
            gap_b,
            height,
            outer_sign,
            outer_higher,
        } => apply_c2_insert(d, *gap_a, *gap_b, *height, *outer_sign, *outer_higher),
        MoveInstance::C4 { chords, backward } => {
            let rule = rule.ok_or_else(|| Error::Config("no C4 rule loaded".into()))?;
            apply_c4(d, rule, *chords, *backward)
        }
    }
}

pub fn apply_a(d: &ClaspDiagram, k: usize) -> Result<(ClaspDiagram, MoveInstance)> {
    let n = d.n();
    if k < 1 || k + 1 > n {
        return Err(Error::Domain(format!(
            "height rank {k} out of range for an A move on {n} chords"
        )));
    }
    let i = d.chord_at_height(k).unwrap();
    let j = d.chord_at_height(k + 1).unwrap();
    if d.linked(i, j)? {
        return Err(Error::Domain(format!(
            "chords at heights {k} and {} are linked",
            k + 1
        )));
    }
    let mut chords = d.chords().to_vec();
    chords[i].height = k + 1;
    chords[j].height = k;
    Ok((ClaspDiagram::new(chords)?, MoveInstance::A { k }))
}

pub fn apply_b(d: &ClaspDiagram, direction: i8) -> Result<(ClaspDiagram, MoveInstance)> {
    let n = d.n();
    if n == 0 {
        return Err(Error::Domain("B move needs at least one chord".into()));
    }
    if direction != 1 && direction != -1 {
        return Err(Error::Domain(format!(
            "B direction must be +/-1, got {direction}"
        )));
    }
    let chords = d
        .chords()
        .iter()
        .map(|c| {
            let h = if direction == 1 {
                c.height % n + 1
            } else {
                (c.height + n - 2) % n + 1
            };
            crate::diagram::Chord { height: h, ..*c }
        })
        .collect();
    Ok((
        ClaspDiagram::new(chords)?,
        MoveInstance::B {
            direction: -direction,
        },
    ))
}

pub fn apply_c1_delete(d: &ClaspDiagram, chord: usize) -> Result<(ClaspDiagram, MoveInstance)> {
    let n = d.n();
    if chord >= n {
        return Err(Error::Index(format!(
            "chord {chord} out of range for {n} chords"
        )));
    }
    let c = d.chords()[chord];
    if c.right != c.left + 1 {
        return Err(Error::Domain(format!(
            "chord {}-{} is not isolated (an endpoint of another chord lies between its feet)",
            c.left, c.right
        )));
    }
    let raw: Vec<(i64, i64, i64, i8, bool)> = d
        .chords()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != chord)
        .map(|(_, x)| {
            (
                x.left as i64,
                x.right as i64,
                x.height as i64,
                x.sign,
                x.special,
            )
        })
        .collect();
    Ok((
        ClaspDiagram::from_raw(raw)?,
        MoveInstance::C1Insert {
            gap: c.left - 1,
            height: c.height,
            sign: c.sign,
        },
    ))
}

pub fn apply_c1_insert(
    d: &ClaspDiagram,
    gap: usize,
    height: usize,
    sign: i8,
) -> Result<(ClaspDiagram, MoveInstance)> {
    let n = d.n();
    if gap > 2 * n {
        return Err(Error::Domain(format!(
            "insertion gap {gap} out of range 0..={}",
            2 * n
        )));
    }
    if height < 1 || height > n + 1 {
        return Err(Error::Domain(format!(
            "insertion height {height} out of range 1..={}",
            n + 1
        )));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Domain("insertion sign must be +/-1".into()));
    }
    let mut chords: Vec<crate::diagram::Chord> = d
        .chords()
        .iter()
        .map(|c| crate::diagram::Chord {
            left: c.left + if c.left > gap { 2 } else { 0 },
            right: c.right + if c.right > gap { 2 } else { 0 },
            height: c.height + if c.height >= height { 1 } else { 0 },
            ..*c
        })
        .collect();
    chords.push(crate::diagram::Chord {
        left: gap + 1,
        right: gap + 2,
        height,
        sign,
        special: false,
    });
    let out = ClaspDiagram::new(chords)?;
    let idx = out
        .chords()
        .iter()
        .position(|c| c.left == gap + 1)
        .expect("inserted chord present");
    Ok((out, MoveInstance::C1Delete { chord: idx }))
}

pub fn apply_c2_delete(d: &ClaspDiagram, outer: usize) -> Result<(ClaspDiagram, MoveInstance)> {
    let n = d.n();
    if outer >= n {
        return Err(Error::Index(format!(
            "chord {outer} out of range for {n} chords"
        )));
    }
    let o = d.chords()[outer];
    let inner_idx = d
        .chords()
        .iter()
        .position(|c| c.left == o.left + 1)
        .ok_or_else(|| {
            Error::Domain(format!(
                "no chord starts immediately after {} to pair with",
                o.left
            ))
        })?;
    let i = d.chords()[inner_idx];
    if i.right != o.right - 1 {
        return Err(Error::Domain(format!(
            "chords {}-{} and {}-{} are not nested-adjacent",
            o.left, o.right, i.left, i.right
        )));
    }
    if o.height.abs_diff(i.height) != 1 {
        return Err(Error::Domain(format!(
            "pair heights {} and {} are not consecutive",
            o.height, i.height
        )));
    }
    if o.sign == i.sign {
        return Err(Error::Domain("pair signs are equal, not opposite".into()));
    }
    let raw: Vec<(i64, i64, i64, i8, bool)> = d
        .chords()
        .iter()
        .enumerate()
        .filter(|(idx, _)| *idx != outer && *idx != inner_idx)
        .map(|(_, x)| {
            (
                x.left as i64,
                x.right as i64,
                x.height as i64,
                x.sign,
                x.special,
            )
        })
        .collect();
    Ok((
        ClaspDiagram::from_raw(raw)?,
        MoveInstance::C2Insert {
            gap_a: o.left - 1,
            gap_b: o.right - 4,
            height: o.height.min(i.height),
            outer_sign: o.sign,
            outer_higher: o.height > i.height,
        },
    ))
}

pub fn apply_c2_insert(
    d: &ClaspDiagram,
    gap_a: usize,
    gap_b: usize,
    height: usize,
    outer_sign: i8,
    outer_higher: bool,
) -> Result<(ClaspDiagram, MoveInstance)> {
    let n = d.n();
    if gap_a > gap_b || gap_b > 2 * n {
        return Err(Error::Domain(format!(
            "insertion gaps ({gap_a},{gap_b}) must satisfy gap_a <= gap_b <= {}",
            2 * n
        )));
    }
    if height < 1 || height > n + 1 {
        return Err(Error::Domain(format!(
            "insertion height {height} out of range 1..={}",
            n + 1
        )));
    }
    if outer_sign != 1 && outer_sign != -1 {
        return Err(Error::Domain("insertion sign must be +/-1".into()));
    }
    let mut chords: Vec<crate::diagram::Chord> = d
        .chords()
        .iter()
        .map(|c| {
            let shift = |p: usize| {
                if p > gap_b {
                    p + 4
                } else if p > gap_a {
                    p + 2
                } else {
                    p
                }
            };
            crate::diagram::Chord {
                left: shift(c.left),
                right: shift(c.right),
                height: c.height + if c.height >= height { 2 } else { 0 },
                ..*c
            }
        })
        .collect();
    let (outer_h, inner_h) = if outer_higher {
        (height + 1, height)
    } else {
        (height, height + 1)
    };
    chords.push(crate::diagram::Chord {
        left: gap_a + 1,
        right: gap_b + 4,
        height: outer_h,
        sign: outer_sign,
        special: false,
    });
    chords.push(crate::diagram::Chord {
        left: gap_a + 2,
        right: gap_b + 3,
        height: inner_h,
        sign: -outer_sign,
        special: false,
    });
    let out = ClaspDiagram::new(chords)?;
    let idx = out
        .chords()
        .iter()
        .position(|c| c.left == gap_a + 1)
        .expect("inserted outer chord present");
    Ok((out, MoveInstance::C2Delete { outer: idx }))
}

pub fn apply_c4(
    d: &ClaspDiagram,
    rule: &C4Rule,
    chords: [usize; 4],
    backward: bool,
) -> Result<(ClaspDiagram, MoveInstance)> {
    let n = d.n();
    let mut idx = chords;
    idx.sort_unstable();
    if idx.windows(2).any(|w| w[0] == w[1]) || idx[3] >= n {
        return Err(Error::Index(format!(
            "C4 needs four distinct chord indices below {n}"
        )));
    }
    let (from, to) = if backward {
        (&rule.rhs, &rule.lhs)
    } else {
        (&rule.lhs, &rule.rhs)
    };
    let mut heights: Vec<usize> = idx.iter().map(|&i| d.chords()[i].height).collect();
    heights.sort_unstable();
    let h0 = heights[0];
    if heights != vec![h0, h0 + 1, h0 + 2, h0 + 3] {
        return Err(Error::Domain(
            "the four chords' heights are not a consecutive block".into(),
        ));
    }
    if &d.induced_subdiagram(&idx)? != from {
        return Err(Error::Domain(
            "the four chords do not match the rule pattern".into(),
        ));
    }
    let mut positions: Vec<usize> = idx
        .iter()
        .flat_map(|&i| [d.chords()[i].left, d.chords()[i].right])
        .collect();
    positions.sort_unstable();
    let mut new_chords: Vec<crate::diagram::Chord> = d
        .chords()
        .iter()
        .enumerate()
        .filter(|(i, _)| !idx.contains(i))
        .map(|(_, c)| *c)
        .collect();
    for p in to.chords() {
        new_chords.push(crate::diagram::Chord {
            left: positions[p.left - 1],
            right: positions[p.right - 1],
            height: h0 + p.height - 1,
            sign: p.sign,
            special: false,
        });
    }
    let out = ClaspDiagram::new(new_chords)?;
    let mut new_idx: Vec<usize> = to
        .chords()
        .iter()
        .map(|p| {
            out.chords()
                .iter()
                .position(|c| c.left == positions[p.left - 1])
                .expect("rewritten chord present")
        })
        .collect();
    new_idx.sort_unstable();
    Ok((
        out,
        MoveInstance::C4 {
            chords: [new_idx[0], new_idx[1], new_idx[2], new_idx[3]],
            backward: !backward,
        },
    ))
}

/// Exhaustively list the legal instances of the requested kinds. Insertion
/// kinds are enumerated only while the result stays within `max_chords`.
/// The order is pinned (kinds in `ALL_KINDS` order, parameters ascending), so
/// search and tests are deterministic.
pub fn applicable_moves(
    d: &ClaspDiagram,
    kinds: &[MoveKind],
    max_chords: usize,
    rule: Option<&C4Rule>,
) -> Vec<MoveInstance> {
    let n = d.n();
    let mut out = Vec::new();
    for kind in ALL_KINDS {
        if !kinds.contains(&kind) {
            continue;
        }
        match kind {
            MoveKind::A => {
                for k in 1..n {
                    let i = d.chord_at_height(k).unwrap();
                    let j = d.chord_at_height(k + 1).unwrap();
                    if !d.linked(i, j).unwrap() {
                        out.push(MoveInstance::A { k });
                    }
                }
            }
            MoveKind::B => {
                if n >= 1 {
                    out.push(MoveInstance::B { direction: 1 });
                    out.push(MoveInstance::B { direction: -1 });
                }
            }
            MoveKind::C1Delete => {
                for (i, c) in d.chords().iter().enumerate() {
                    if c.right == c.left + 1 {
                        out.push(MoveInstance::C1Delete { chord: i });
                    }
                }
            }
            MoveKind::C1Insert => {
                if n + 1 <= max_chords {
                    for gap in 0..=2 * n {
                        for height in 1..=n + 1 {
                            for sign in [1i8, -1] {
                                out.push(MoveInstance::C1Insert { gap, height, sign });
                            }
                        }
                    }
                }
            }
            MoveKind::C2Delete => {
                for outer in 0..n {
                    if apply_c2_delete(d, outer).is_ok() {
                        out.push(MoveInstance::C2Delete { outer });
                    }
                }
            }
            MoveKind::C2Insert => {
                if n + 2 <= max_chords {
                    for gap_a in 0..=2 * n {
                        for gap_b in gap_a..=2 * n {
                            for height in 1..=n + 1 {
                                for outer_sign in [1i8, -1] {
                                    for outer_higher in [true, false] {
                                        out.push(MoveInstance::C2Insert {
                                            gap_a,
                                            gap_b,
                                            height,
                                            outer_sign,
                                            outer_higher,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
            MoveKind::C4Forward | MoveKind::C4Backward => {
                let rule = match rule {
                    Some(r) => r,
                    None => continue,
                };
                let backward = kind == MoveKind::C4Backward;
                if n < 4 {
                    continue;
                }
                for combo in four_subsets(n) {
                    if apply_c4(d, rule, combo, backward).is_ok() {
                        out.push(MoveInstance::C4 {
                            chords: combo,
                            backward,
                        });
                    }
                }
            }
        }
    }
    out
}

fn four_subsets(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for e in c + 1..n {
                    out.push([a, b, c, e]);
                }
            }
        }
    }
    out
}

/// A four-chord rewrite rule: any four chords whose induced subdiagram equals
/// `lhs` and whose heights form a consecutive block may be replaced, on the
/// same eight skeleton positions and the same height block, by `rhs`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct C4Rule {
    pub lhs: ClaspDiagram,
    pub rhs: ClaspDiagram,
}

/// Rule file grammar: comment lines start with `#`; the rule is given by the
/// two lines `lhs: <diagram>` and `rhs: <diagram>`, each with exactly four
/// ordinary chords.
pub fn parse_c4_rules(text: &str) -> Result<C4Rule> {
    let mut lhs = None;
    let mut rhs = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("lhs:") {
            if lhs.is_some() {
                return Err(Error::Config("duplicate lhs line in rule file".into()));
            }
            lhs = Some(parse_rule_side(rest)?);
        } else if let Some(rest) = line.strip_prefix("rhs:") {
            if rhs.is_some() {
                return Err(Error::Config("duplicate rhs line in rule file".into()));
            }
            rhs = Some(parse_rule_side(rest)?);
        } else {
            return Err(Error::Config(format!(
                "unrecognized rule file line: {line}"
            )));
        }
    }
    let lhs = lhs.ok_or_else(|| Error::Config("rule file has no lhs line".into()))?;
    let rhs = rhs.ok_or_else(|| Error::Config("rule file has no rhs line".into()))?;
    if lhs == rhs {
        return Err(Error::Config("rule is trivial: lhs equals rhs".into()));
    }
    Ok(C4Rule { lhs, rhs })
}

fn parse_rule_side(text: &str) -> Result<ClaspDiagram> {
    let d = crate::diagram::parse_diagram(text.trim())
        .map_err(|e| Error::Config(format!("bad rule diagram: {e}")))?;
    if d.n() != 4 {
        return Err(Error::Config(format!(
            "rule side must have exactly 4 chords, got {}",
            d.n()
        )));
    }
    if d.has_special() {
        return Err(Error::Config("rule chords must be ordinary".into()));
    }
    Ok(d)
}

pub fn load_c4_rules(path: &Path) -> Result<C4Rule> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read rule file {}: {e}", path.display())))?;
    parse_c4_rules(&text)
}

/// Validation harness for a C4 rule: embeds both sides into `trials` random
/// contexts (random surrounding chords, arbitrary foot interleaving, random
/// height-block placement) and checks that (a) `apply_c4` sends the lhs
/// instance to the rhs instance, (b) forward-then-backward is the identity,
/// (c) the normalized Alexander polynomial agrees, and (d) any extra caller
/// check (e.g. order-2/3 finite-type invariants) agrees.
pub fn validate_c4_rule(
    rule: &C4Rule,
    seed: u64,
    trials: usize,
    extra_check: Option<&dyn Fn(&ClaspDiagram, &ClaspDiagram) -> Result<()>>,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let m = rng.gen_range(0..=3usize);
        let ctx = random_diagram(&mut rng, m);
        let (d_lhs, idx) = embed_pattern(&ctx, &rule.lhs, &mut rng)?;
        // Same embedding, other side: rebuild with identical foot positions
        // and height block.
        let (d_rhs, _) = {
            let mut positions: Vec<usize> = idx
                .iter()
                .flat_map(|&i| [d_lhs.chords()[i].left, d_lhs.chords()[i].right])
                .collect();
            positions.sort_unstable();
            let mut hs: Vec<usize> = idx.iter().map(|&i| d_lhs.chords()[i].height).collect();
            hs.sort_unstable();
            let h0 = hs[0];
            let mut chords: Vec<crate::diagram::Chord> = d_lhs
                .chords()
                .iter()
                .enumerate()
                .filter(|(i, _)| !idx.contains(i))
                .map(|(_, c)| *c)
                .collect();
            for p in rule.rhs.chords() {
                chords.push(crate::diagram::Chord {
                    left: positions[p.left - 1],
                    right: positions[p.right - 1],
                    height: h0 + p.height - 1,
                    sign: p.sign,
                    special: false,
                });
            }
            (ClaspDiagram::new(chords)?, ())
        };
        let (applied, inverse) = apply_c4(&d_lhs, rule, idx, false)?;
        if applied != d_rhs {
            return Err(Error::OracleMismatch(format!(
                "trial {trial}: apply_c4 produced {} instead of {}",
                applied.serialize(),
                d_rhs.serialize()
            )));
        }
        let (undone, _) = apply_move(&applied, &inverse, Some(rule))?;
        if undone != d_lhs {
            return Err(Error::OracleMismatch(format!(
                "trial {trial}: forward then backward is not the identity"
            )));
        }
        let a = alexander(&d_lhs)?;
        let b = alexander(&d_rhs)?;
        if a != b {
            return Err(Error::OracleMismatch(format!(
                "trial {trial}: Alexander differs: {} on {} vs {} on {}",
                a,
                d_lhs.serialize(),
                b,
                d_rhs.serialize()
            )));
        }
        if let Some(check) = extra_check {
            check(&d_lhs, &d_rhs).map_err(|e| {
                Error::OracleMismatch(format!(
                    "trial {trial}: extra invariant check failed on {} vs {}: {e}",
                    d_lhs.serialize(),
                    d_rhs.serialize()
                ))
            })?;
        }
    }
    Ok(())
}

/// Embed a 4-chord pattern into a context diagram: feet interleaved at random
/// positions, heights as a consecutive block at a random level. Returns the
/// merged diagram and the (sorted) indices of the pattern chords in it.
pub fn embed_pattern<R: Rng>(
    ctx: &ClaspDiagram,
    pattern: &ClaspDiagram,
    rng: &mut R,
) -> Result<(ClaspDiagram, [usize; 4])> {
    let m = ctx.n();
    let total = 2 * m + 8;
    // choose which of the merged positions carry the pattern's feet
    let mut slots: Vec<usize> = (1..=total).collect();
    let mut pattern_slots = Vec::with_capacity(8);
    for _ in 0..8 {
        let i = rng.gen_range(0..slots.len());
        pattern_slots.push(slots.remove(i));
    }
    pattern_slots.sort_unstable();
    let h0 = rng.gen_range(1..=m + 1);
    embed_pattern_at(ctx, pattern, &pattern_slots, h0)
}

/// Deterministic embedding core: the pattern's eight feet go to the given
/// merged positions (sorted, out of 1..=2*ctx.n()+8), its heights to the
/// consecutive block starting at `h0`; context chords fill the rest in order.
pub fn embed_pattern_at(
    ctx: &ClaspDiagram,
    pattern: &ClaspDiagram,
    pattern_slots: &[usize],
    h0: usize,
) -> Result<(ClaspDiagram, [usize; 4])> {
    let m = ctx.n();
    let total = 2 * m + 8;
    if pattern_slots.len() != 8
        || pattern_slots.windows(2).any(|w| w[0] >= w[1])
        || pattern_slots.iter().any(|&s| s < 1 || s > total)
        || h0 < 1
        || h0 > m + 1
    {
        return Err(Error::Domain(
            "embedding slots must be 8 sorted distinct positions and the height block in range"
                .into(),
        ));
    }
    let ctx_slots: Vec<usize> = (1..=total)
        .filter(|p| !pattern_slots.contains(p))
        .collect();
    let mut chords: Vec<crate::diagram::Chord> = Vec::with_capacity(m + 4);
    for c in ctx.chords() {
        chords.push(crate::diagram::Chord {
            left: ctx_slots[c.left - 1],
            right: ctx_slots[c.right - 1],
            height: c.height + if c.height >= h0 { 4 } else { 0 },
            ..*c
        });
    }
    for p in pattern.chords() {
        chords.push(crate::diagram::Chord {
            left: pattern_slots[p.left - 1],
            right: pattern_slots[p.right - 1],
            height: h0 + p.height - 1,
            sign: p.sign,
            special: false,
        });
    }
    let merged = ClaspDiagram::new(chords)?;
    let mut idx: Vec<usize> = pattern
        .chords()
        .iter()
        .map(|p| {
            merged
                .chords()
                .iter()
                .position(|c| c.left == pattern_slots[p.left - 1])
                .expect("embedded chord present")
        })
        .collect();
    idx.sort_unstable();
    Ok((merged, [idx[0], idx[1], idx[2], idx[3]]))
}

//! The Alexander/Conway polynomial of a clasp diagram, computed exactly from
//! the chord data, plus the block Seifert matrix that provides an independent
//! cross-check of the same value.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::diagram::ClaspDiagram;
use crate::error::{Error, Result};
use crate::laurent::{det, LaurentMatrix, LaurentPoly};

/// The matrix S_D: rows/columns indexed by chords. Diagonal `-e_ii`; for each
/// linked pair with chord `i` passing over chord `j`: if `i < j` then
/// `s_ij = t - 1`, `s_ji = t^-1 - 1`; if `i > j` then `s_ij = 1 - t`,
/// `s_ji = 1 - t^-1`. All other entries zero.
pub fn s_matrix(d: &ClaspDiagram) -> LaurentMatrix {
    let n = d.n();
    let t_minus_1 = LaurentPoly::term(1, 1).add(&LaurentPoly::constant(-1));
    let tinv_minus_1 = LaurentPoly::term(1, -1).add(&LaurentPoly::constant(-1));
    let mut m = vec![vec![LaurentPoly::zero(); n]; n];
    for (i, c) in d.chords().iter().enumerate() {
        m[i][i] = LaurentPoly::constant(-(c.sign as i64));
    }
    for p in 0..n {
        for q in p + 1..n {
            if d.linked(p, q).unwrap() {
                let over = if d.chords()[p].height > d.chords()[q].height {
                    p
                } else {
                    q
                };
                let under = p + q - over;
                if over < under {
                    m[over][under] = t_minus_1.clone();
                    m[under][over] = tinv_minus_1.clone();
                } else {
                    m[over][under] = t_minus_1.neg();
                    m[under][over] = tinv_minus_1.neg();
                }
            }
        }
    }
    m
}

/// `det S_D`, the Alexander polynomial up to a unit.
pub fn alexander_raw(d: &ClaspDiagram) -> LaurentPoly {
    det(&s_matrix(d))
}

/// The canonical representative: symmetric under `t <-> t^-1` and equal to
/// `+1` at `t = 1`. Every `alexander_raw` output is a unit multiple of such a
/// polynomial.
pub fn normalize_alexander(p: &LaurentPoly) -> Result<LaurentPoly> {
    if p.is_zero() {
        return Err(Error::Domain("cannot normalize the zero polynomial".into()));
    }
    let lo = p.min_exp().unwrap();
    let hi = p.max_exp().unwrap();
    if (lo + hi) % 2 != 0 {
        return Err(Error::Domain(
            "polynomial has no symmetric unit multiple (odd exponent span)".into(),
        ));
    }
    let centered = p.shift(-(lo + hi) / 2);
    if !centered.is_symmetric() {
        return Err(Error::Domain(
            "polynomial is not symmetric after centering".into(),
        ));
    }
    let at_one = centered.eval_at_unit(1);
    if at_one == BigInt::from(1) {
        Ok(centered)
    } else if at_one == BigInt::from(-1) {
        Ok(centered.neg())
    } else {
        Err(Error::Domain(format!(
            "value at t=1 is {at_one}, not a unit"
        )))
    }
}

/// Normalized Alexander polynomial of a diagram.
pub fn alexander(d: &ClaspDiagram) -> Result<LaurentPoly> {
    normalize_alexander(&alexander_raw(d))
}

/// The 2n x 2n integer block matrix `V = [[L, 0], [I, -E]]`.
pub fn seifert_matrix(d: &ClaspDiagram) -> Vec<Vec<i64>> {
    let n = d.n();
    let l = d.linking_matrix();
    let mut v = vec![vec![0i64; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            v[i][j] = l[i][j];
        }
        v[n + i][i] = 1;
        v[n + i][n + i] = -(d.chords()[i].sign as i64);
    }
    v
}

/// Independent route to the same polynomial: `det(u V - u^-1 V^T)` computed in
/// an auxiliary variable `u` with `t = u^2` (all exponents of the determinant
/// are even, so the substitution is exact). The result must agree with
/// `alexander_raw` up to a unit; disagreement is reported, never ignored.
pub fn alexander_via_seifert(d: &ClaspDiagram) -> Result<LaurentPoly> {
    let v = seifert_matrix(d);
    let dim = v.len();
    let mut m = vec![vec![LaurentPoly::zero(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            m[i][j] = LaurentPoly::term(v[i][j], 1).add(&LaurentPoly::term(-v[j][i], -1));
        }
    }
    let in_u = det(&m);
    let in_t = in_u.halve_exponents().ok_or_else(|| {
        Error::OracleMismatch("Seifert determinant has odd exponents in u".into())
    })?;
    let direct = alexander_raw(d);
    let a = normalize_alexander(&in_t)?;
    let b = normalize_alexander(&direct)?;
    if a != b {
        return Err(Error::OracleMismatch(format!(
            "Seifert route gives {a}, chord-matrix route gives {b} on {}",
            d.serialize()
        )));
    }
    Ok(in_t)
}

/// Polynomial in `z` with even powers only, keyed by `m` for the `z^{2m}`
/// coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConwayPoly {
    coeffs: BTreeMap<u32, BigInt>,
}

impl ConwayPoly {
    pub fn coeff(&self, m: u32) -> BigInt {
        self.coeffs.get(&m).cloned().unwrap_or_else(BigInt::zero)
    }

    /// The `z^2` coefficient (an order-2 finite-type invariant).
    pub fn z2_coefficient(&self) -> BigInt {
        self.coeff(1)
    }

    /// Term list as (z-exponent, coefficient), ascending.
    pub fn pairs(&self) -> Vec<(u32, BigInt)> {
        self.coeffs
            .iter()
            .map(|(m, c)| (2 * m, c.clone()))
            .collect()
    }
}

impl fmt::Display for ConwayPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.coeffs {
            if c.is_negative() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            let mag = c.abs();
            if *m == 0 {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*z^{}", 2 * m)?;
            }
            first = false;
        }
        Ok(())
    }
}

/// The Conway form: the unique polynomial in `z^2` that reproduces the
/// normalized Alexander polynomial under `z^2 = t - 2 + t^-1`. Constant term
/// is always 1.
pub fn conway(d: &ClaspDiagram) -> Result<ConwayPoly> {
    let delta = alexander(d)?;
    conway_from_normalized(&delta)
}

pub fn conway_from_normalized(delta: &LaurentPoly) -> Result<ConwayPoly> {
    let y = LaurentPoly::from_pairs(vec![
        (-1, BigInt::from(1)),
        (0, BigInt::from(-2)),
        (1, BigInt::from(1)),
    ]);
    let mut rest = delta.clone();
    let mut coeffs = BTreeMap::new();
    // Peel from the top: the t^m coefficient of the remainder is the y^m
    // coefficient, because y^m = t^m + lower-order symmetric terms.
    loop {
        let hi = match rest.max_exp() {
            None => break,
            Some(h) => h,
        };
        if hi < 0 {
            return Err(Error::Domain(
                "expansion in t - 2 + t^-1 leaves a remainder".into(),
            ));
        }
        if hi == 0 {
            coeffs.insert(0, rest.coeff(0));
            break;
        }
        let c = rest.coeff(hi);
        let mut y_pow = LaurentPoly::one();
        for _ in 0..hi {
            y_pow = y_pow.mul(&y);
        }
        rest = rest.sub(&y_pow.mul_term(&c, 0));
        coeffs.insert(hi as u32, c);
    }
    coeffs.retain(|_, c| !c.is_zero());
    let result = ConwayPoly { coeffs };
    if result.coeff(0) != BigInt::from(1) {
        return Err(Error::Domain(format!(
            "Conway constant term is {}, expected 1",
            result.coeff(0)
        )));
    }
    Ok(result)
}

/// `|Delta(-1)|`.
pub fn knot_determinant(d: &ClaspDiagram) -> Result<BigInt> {
    Ok(alexander(d)?.eval_at_unit(-1).abs())
}

/// The chord count: the canonical Seifert surface of the diagram has this
/// genus, so it bounds the genus of the knot.
pub fn seifert_genus_bound(d: &ClaspDiagram) -> usize {
    d.n()
}

//! Computational group theory for the subgroups `G(p,q)` of SO(3)
//! generated by rotations by `2π/p` about the x-axis and `2π/q` about the
//! y-axis: presentations, normal forms, element orders, order spectra and
//! the order-spectrum obstruction to conjugacy/c-equivalence.

pub mod cube;
pub mod matrix;
mod rewrite;

use cube::{Coset, CubeGroup, CubeLetter};
use num_integer::Integer;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GpqError {
    #[error("both rotation orders must be at least 3, got ({0}, {1})")]
    UnsupportedOrders(u64, u64),
    #[error("cannot parse word `{0}`: {1}")]
    BadWord(String, String),
}

/// Generator names of a two-generator presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Gen {
    /// x-axis rotation (`a` in the CLI syntax)
    A,
    /// y-axis rotation (`b`)
    B,
}

impl Gen {
    pub fn other(self) -> Gen {
        match self {
            Gen::A => Gen::B,
            Gen::B => Gen::A,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Syllable {
    pub gen: Gen,
    pub exp: i64,
}

/// A word in the generators; syllables need not be normalized.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct GWord(pub Vec<Syllable>);

impl GWord {
    pub fn identity() -> Self {
        GWord(Vec::new())
    }

    pub fn syllable(gen: Gen, exp: i64) -> Self {
        GWord(vec![Syllable { gen, exp }])
    }

    pub fn push(&mut self, gen: Gen, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.gen == gen {
                last.exp += exp;
                if last.exp == 0 {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push(Syllable { gen, exp });
    }

    pub fn extend(&mut self, other: &GWord) {
        for s in &other.0 {
            self.push(s.gen, s.exp);
        }
    }

    pub fn inverse(&self) -> GWord {
        let mut out = GWord::identity();
        for s in self.0.iter().rev() {
            out.push(s.gen, -s.exp);
        }
        out
    }

    pub fn concat(mut self, other: &GWord) -> GWord {
        self.extend(other);
        self
    }

    pub fn repeated(&self, n: u64) -> GWord {
        let mut out = GWord::identity();
        for _ in 0..n {
            out.extend(self);
        }
        out
    }

    /// Parse the CLI syntax: whitespace-separated syllables `a`, `b^-3`, ….
    pub fn parse(text: &str) -> Result<GWord, GpqError> {
        let mut out = GWord::identity();
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "e" {
            return Ok(out);
        }
        for token in trimmed.split_whitespace() {
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => {
                    let exp: i64 = e.parse().map_err(|_| {
                        GpqError::BadWord(text.into(), format!("bad exponent `{e}`"))
                    })?;
                    (n, exp)
                }
                None => (token, 1),
            };
            let gen = match name {
                "a" | "A" | "α" => Gen::A,
                "b" | "B" | "β" => Gen::B,
                other => {
                    return Err(GpqError::BadWord(
                        text.into(),
                        format!("unknown generator `{other}`"),
                    ))
                }
            };
            out.push(gen, exp);
        }
        Ok(out)
    }
}

impl fmt::Display for GWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let mut first = true;
        for s in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = match s.gen {
                Gen::A => "a",
                Gen::B => "b",
            };
            if s.exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{}", s.exp)?;
            }
        }
        Ok(())
    }
}

/// The structural case a presentation falls into after normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PresentationCase {
    /// both orders odd: free product of cyclic groups
    FreeProduct,
    /// p even, q odd: one half-turn relator
    HalfTurn,
    /// p even, q twice an odd number: two half-turn relators
    TwoHalfTurns,
    /// both orders divisible by 4: presented as `G(m, 4)` with the cube
    /// relators
    CubeCornered,
}

/// Normalized presentation for `G(p,q)`.
#[derive(Clone, Debug, Serialize)]
pub struct Presentation {
    pub p_input: u64,
    pub q_input: u64,
    /// generator orders after normalization; `alpha_order` is `m` and
    /// `beta_order` is 4 in the cube-cornered case
    pub alpha_order: u64,
    pub beta_order: u64,
    pub swapped: bool,
    pub case: PresentationCase,
    pub relators: Vec<GWord>,
    /// when the input was reduced to `G(m,4)`, the images of the original
    /// generators as words over the normalized ones
    pub embedding: Option<(GWord, GWord)>,
}

impl Presentation {
    pub fn relator_strings(&self) -> Vec<String> {
        self.relators.iter().map(|r| r.to_string()).collect()
    }

    /// Map a word over the input generators (`a ↦ R_x^{2π/p_input}`,
    /// `b ↦ R_y^{2π/q_input}`) to a word over the normalized generators.
    pub fn map_input_word(&self, w: &GWord) -> GWord {
        let mut out = GWord::identity();
        for s in &w.0 {
            let gen = if self.swapped { s.gen.other() } else { s.gen };
            match &self.embedding {
                None => out.push(gen, s.exp),
                Some((alpha_img, beta_img)) => {
                    let img = match gen {
                        Gen::A => alpha_img,
                        Gen::B => beta_img,
                    };
                    let block = if s.exp >= 0 {
                        img.repeated(s.exp as u64)
                    } else {
                        img.inverse().repeated((-s.exp) as u64)
                    };
                    out.extend(&block);
                }
            }
        }
        out
    }
}

/// Element order: finite with the exact value, or provably infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrderResult {
    Finite(u64),
    Infinite,
}

impl fmt::Display for OrderResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderResult::Finite(n) => write!(f, "{n}"),
            OrderResult::Infinite => write!(f, "infinite"),
        }
    }
}

fn relator(parts: &[(Gen, i64)], times: u64) -> GWord {
    let mut base = GWord::identity();
    for (g, e) in parts {
        base.push(*g, *e);
    }
    base.repeated(times)
}

/// Build the normalized presentation for `G(p, q)`.
pub fn presentation(p: u64, q: u64) -> Result<Presentation, GpqError> {
    if p < 3 || q < 3 {
        return Err(GpqError::UnsupportedOrders(p, q));
    }
    if p.is_multiple_of(4) && q.is_multiple_of(4) {
        let m = p.lcm(&q);
        let relators = vec![
            relator(&[(Gen::A, m as i64)], 1),
            relator(&[(Gen::B, 4)], 1),
            relator(&[(Gen::A, (m / 2) as i64), (Gen::B, 1)], 2),
            relator(&[(Gen::A, 1), (Gen::B, 2)], 2),
            relator(&[(Gen::A, (m / 4) as i64), (Gen::B, 1)], 3),
        ];
        // original generators inside G(m,4): the x-rotation is a power of
        // the new x-rotation; the y-rotation is an x-power conjugated onto
        // the y axis by the cube element U S U⁻¹ (a z quarter-turn)
        let embedding = if p == m && q == 4 {
            None
        } else {
            let q4 = (m / 4) as i64;
            let alpha_img = GWord::syllable(Gen::A, (m / p) as i64);
            let mut beta_img = GWord::identity();
            beta_img.push(Gen::A, q4);
            beta_img.push(Gen::B, 1);
            beta_img.push(Gen::A, (m / q) as i64);
            beta_img.push(Gen::B, -1);
            beta_img.push(Gen::A, -q4);
            Some((alpha_img, beta_img))
        };
        return Ok(Presentation {
            p_input: p,
            q_input: q,
            alpha_order: m,
            beta_order: 4,
            swapped: false,
            case: PresentationCase::CubeCornered,
            relators,
            embedding,
        });
    }

    // arrange (p', q') with p' even where possible and q' odd or ≡ 2 mod 4
    let both_odd = p % 2 == 1 && q % 2 == 1;
    let already_arranged = p.is_multiple_of(2) && (q % 2 == 1 || q % 4 == 2);
    let (pp, qq, swapped) = if both_odd || already_arranged {
        (p, q, false)
    } else {
        (q, p, true)
    };

    let (case, relators) = if pp % 2 == 1 {
        (
            PresentationCase::FreeProduct,
            vec![
                relator(&[(Gen::A, pp as i64)], 1),
                relator(&[(Gen::B, qq as i64)], 1),
            ],
        )
    } else if qq % 2 == 1 {
        (
            PresentationCase::HalfTurn,
            vec![
                relator(&[(Gen::A, pp as i64)], 1),
                relator(&[(Gen::B, qq as i64)], 1),
                relator(&[(Gen::A, (pp / 2) as i64), (Gen::B, 1)], 2),
            ],
        )
    } else {
        debug_assert_eq!(qq % 4, 2);
        (
            PresentationCase::TwoHalfTurns,
            vec![
                relator(&[(Gen::A, pp as i64)], 1),
                relator(&[(Gen::B, qq as i64)], 1),
                relator(&[(Gen::A, (pp / 2) as i64), (Gen::B, 1)], 2),
                relator(&[(Gen::A, 1), (Gen::B, (qq / 2) as i64)], 2),
            ],
        )
    };
    Ok(Presentation {
        p_input: p,
        q_input: q,
        alpha_order: pp,
        beta_order: qq,
        swapped,
        case,
        relators,
        embedding: None,
    })
}

/// Deterministic normal form of a word over the presentation's normalized
/// generators. Idempotent; used for canonical display and equality
/// screening. Words over the original input generators go through
/// [`Presentation::map_input_word`] first.
pub fn normal_form(w: &GWord, pres: &Presentation) -> GWord {
    match pres.case {
        PresentationCase::CubeCornered => {
            rewrite::case_e_normal_form(w, pres.alpha_order as i64)
        }
        _ => rewrite::abc_normal_form(w, pres.alpha_order as i64, pres.beta_order as i64),
    }
}

/// Exact order of the element represented by a word over the
/// presentation's normalized generators.
pub fn order(w: &GWord, pres: &Presentation) -> OrderResult {
    match pres.case {
        PresentationCase::CubeCornered => rewrite::case_e_order(w, pres.alpha_order as i64),
        _ => rewrite::abc_order(w, pres.alpha_order as i64, pres.beta_order as i64),
    }
}

/// Order of a word given over the original input generators of `G(p,q)`.
pub fn order_from_input(w: &GWord, pres: &Presentation) -> OrderResult {
    order(&pres.map_input_word(w), pres)
}

/// Normal form of a word given over the original input generators.
pub fn normal_form_from_input(w: &GWord, pres: &Presentation) -> GWord {
    normal_form(&pres.map_input_word(w), pres)
}

fn divisors(n: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut k = 1;
    while k * k <= n {
        if n.is_multiple_of(k) {
            out.insert(k);
            out.insert(n / k);
        }
        k += 1;
    }
    out
}

/// The set of orders of finite-order elements of `G(p,q)`.
pub fn order_spectrum(p: u64, q: u64) -> Result<BTreeSet<u64>, GpqError> {
    if p < 3 || q < 3 {
        return Err(GpqError::UnsupportedOrders(p, q));
    }
    let mut out;
    if p.is_multiple_of(4) && q.is_multiple_of(4) {
        out = divisors(p.lcm(&q));
        out.insert(3);
    } else {
        out = divisors(p);
        out.extend(divisors(q));
    }
    Ok(out)
}

/// A word over the normalized generators realizing each spectrum value.
pub fn spectrum_witness(p: u64, q: u64, n: u64) -> Result<Option<GWord>, GpqError> {
    let pres = presentation(p, q)?;
    let (ap, bq) = (pres.alpha_order, pres.beta_order);
    if n == 0 {
        return Ok(None);
    }
    if ap % n == 0 {
        return Ok(Some(GWord::syllable(Gen::A, (ap / n) as i64)));
    }
    if bq % n == 0 {
        return Ok(Some(GWord::syllable(Gen::B, (bq / n) as i64)));
    }
    if pres.case == PresentationCase::CubeCornered && n == 3 {
        // a corner rotation of the cube: β·α^{m/4}
        let mut w = GWord::identity();
        w.push(Gen::B, 1);
        w.push(Gen::A, (ap / 4) as i64);
        return Ok(Some(w));
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct Obstruction {
    pub left: (u64, u64),
    pub right: (u64, u64),
    pub left_spectrum: BTreeSet<u64>,
    pub right_spectrum: BTreeSet<u64>,
    /// smallest order realized on the left but not the right
    pub left_only_min: Option<u64>,
    /// smallest order realized on the right but not the left
    pub right_only_min: Option<u64>,
}

impl Obstruction {
    /// The smallest order lying in exactly one spectrum, if any.
    pub fn witness(&self) -> Option<u64> {
        match (self.left_only_min, self.right_only_min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        }
    }
}

/// Compare order spectra. A witness order proves the two groups are not
/// conjugate (indeed not c-equivalent); no witness proves nothing.
pub fn c_equivalence_obstruction(
    left: (u64, u64),
    right: (u64, u64),
) -> Result<Obstruction, GpqError> {
    let ls = order_spectrum(left.0, left.1)?;
    let rs = order_spectrum(right.0, right.1)?;
    let left_only_min = ls.difference(&rs).next().copied();
    let right_only_min = rs.difference(&ls).next().copied();
    Ok(Obstruction {
        left,
        right,
        left_spectrum: ls,
        right_spectrum: rs,
        left_only_min,
        right_only_min,
    })
}

/// Evaluate a word over the original generators as a floating 3×3 matrix
/// (`a ↦ R_x^{2π/p}`, `b ↦ R_y^{2π/q}`). A cross-check oracle only.
pub fn to_matrix(w: &GWord, p: u64, q: u64) -> matrix::Mat3f {
    matrix::eval_word(w, p, q)
}

/// A canonical member of the 24-element cube group `G(4,4)`: shortest
/// word over `U = R_x^{2π/4}` (spelled `a`) and `S = R_y^{2π/4}` (spelled
/// `b`), together with its coset tag in `H1 ∪ H1·S ∪ H1·S·U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G44Element {
    pub word: GWord,
    pub coset: Coset,
    pub order: u8,
}

fn eval_cube(w: &GWord) -> u8 {
    let cube = CubeGroup::get();
    let mut e = cube.id;
    for s in &w.0 {
        let g = match s.gen {
            Gen::A => cube.u_power(s.exp),
            Gen::B => cube.s_power(s.exp),
        };
        e = cube.times(e, g);
    }
    e
}

/// Canonicalize a word in the cube-group generators.
pub fn g44_element(w: &GWord) -> G44Element {
    let cube = CubeGroup::get();
    let e = eval_cube(w);
    G44Element {
        word: cube_word_to_gword(&cube.words[e as usize], 4),
        coset: cube.coset[e as usize],
        order: cube.order[e as usize],
    }
}

/// Which coset of `H1` in the cube group a word in `S = R_y^{2π/4}`,
/// `U = R_x^{2π/4}` lands in. The word uses `b` for `S` and `a` for `U`.
pub fn g44_coset(w: &GWord) -> Coset {
    let cube = CubeGroup::get();
    cube.coset[eval_cube(w) as usize]
}

/// Render a cube element's canonical word over the `G(m,4)` generators
/// (`U = a^{m/4}`, `S = b`).
pub(crate) fn cube_word_to_gword(letters: &[CubeLetter], m: i64) -> GWord {
    let mut out = GWord::identity();
    for l in letters {
        match l {
            CubeLetter::S => out.push(Gen::B, 1),
            CubeLetter::U => out.push(Gen::A, m / 4),
        }
    }
    out
}

//! Relative tile orientations and the group they generate.
//!
//! For a patch and a tile type, the relative orientations are the exact
//! rotations carrying the anchor tile onto the other tiles of the same
//! type. Chirality is part of the type, so the sets contain rotations
//! only. The group descriptor classifies each rotation as a rational or
//! irrational turn and, when possible, decomposes everything over the
//! basis {quarter turn, ρ = rot(3/5, 4/5)} via 5-adic descent, reducing
//! group comparison to comparing subgroups of Z₄ × Z.

use crate::geom::{classify_angle, AngleClass, Rotation2};
use crate::scalar::QScalar;
use crate::tiling::{Patch, SubstitutionSystem, TilingError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OrientError {
    #[error("patch contains no tile of type {0}")]
    NoSuchType(usize),
    #[error("anchor index {0} is not a type-{1} tile")]
    BadAnchor(usize, usize),
    #[error(transparent)]
    Tiling(#[from] TilingError),
}

/// Why a rotation failed to decompose over the basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DecomposeFailure {
    /// entries contain a nonzero √D part
    NotRational,
    /// a denominator has a prime factor other than 5
    DenominatorNotPowerOfFive,
    /// neither ρ nor ρ⁻¹ reduces the 5-adic height
    HeightNotReducible,
    /// integer entries that are not one of the four quarter turns
    NotAQuarterTurn,
}

impl fmt::Display for DecomposeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecomposeFailure::NotRational => write!(f, "entries are not rational"),
            DecomposeFailure::DenominatorNotPowerOfFive => {
                write!(f, "denominator is not a power of 5")
            }
            DecomposeFailure::HeightNotReducible => {
                write!(f, "5-adic height cannot be reduced by ρ±1")
            }
            DecomposeFailure::NotAQuarterTurn => write!(f, "residue is not a quarter turn"),
        }
    }
}

/// The basis rotation ρ = rot(3/5, 4/5), i.e. twice arctan(1/2).
pub fn basis_rho(d: u32) -> Rotation2 {
    Rotation2::new(QScalar::from_ratio(3, 5, d), QScalar::from_ratio(4, 5, d))
        .expect("ρ is a unit rotation")
}

fn five_adic_height(r: &Rotation2) -> Result<u32, DecomposeFailure> {
    if !r.cos().is_rational() || !r.sin().is_rational() {
        return Err(DecomposeFailure::NotRational);
    }
    let mut h = 0u32;
    for part in [r.cos().rational_part(), r.sin().rational_part()] {
        let mut den = part.denom().abs();
        let five = BigInt::from(5);
        let mut k = 0u32;
        while (&den % &five).is_zero() {
            den /= &five;
            k += 1;
        }
        if !den.is_one() {
            return Err(DecomposeFailure::DenominatorNotPowerOfFive);
        }
        h = h.max(k);
    }
    Ok(h)
}

/// Write `r = (quarter turn)^k ∘ ρ^m` exactly, by repeatedly multiplying
/// with ρ±1 to strictly reduce the 5-adic denominator height and matching
/// the rational residue against the four quarter turns.
pub fn decompose_in_basis(r: &Rotation2) -> Result<(u8, i64), DecomposeFailure> {
    let d = r.cos().field_d();
    let rho = basis_rho(d);
    let rho_inv = rho.inverse();
    let mut cur = r.clone();
    let mut h = five_adic_height(&cur)?;
    let mut m: i64 = 0;
    while h > 0 {
        let up = cur.compose(&rho_inv);
        if let Ok(hu) = five_adic_height(&up) {
            if hu < h {
                cur = up;
                h = hu;
                m += 1;
                continue;
            }
        }
        let down = cur.compose(&rho);
        if let Ok(hd) = five_adic_height(&down) {
            if hd < h {
                cur = down;
                h = hd;
                m -= 1;
                continue;
            }
        }
        return Err(DecomposeFailure::HeightNotReducible);
    }
    let c = cur.cos().rational_part().to_i64();
    let s = cur.sin().rational_part().to_i64();
    let k = match (c, s) {
        (Some(1), Some(0)) => 0,
        (Some(0), Some(1)) => 1,
        (Some(-1), Some(0)) => 2,
        (Some(0), Some(-1)) => 3,
        _ => return Err(DecomposeFailure::NotAQuarterTurn),
    };
    Ok((k, m))
}

/// Recompose `(quarter turn)^k ∘ ρ^m`.
pub fn recompose(k: u8, m: i64, d: u32) -> Rotation2 {
    Rotation2::quarter_turn(d)
        .pow(i64::from(k))
        .compose(&basis_rho(d).pow(m))
}

/// Canonical form of a subgroup of Z₄ × Z (quarter-turn component, ρ
/// component): generated by `(shift, step)` together with `(torsion, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lattice {
    /// positive generator of the projection to the ρ coordinate; 0 when
    /// the subgroup is purely torsion
    pub step: i64,
    /// generator of the intersection with the torsion factor: 1, 2 or 4
    /// (4 meaning the trivial subgroup of Z₄)
    pub torsion: i64,
    /// quarter-turn shift attached to `step`, reduced mod `torsion`
    pub shift: i64,
}

impl Lattice {
    pub fn from_coords(coords: &[(u8, i64)]) -> Lattice {
        let step = coords.iter().fold(0i64, |g, (_, m)| g.gcd(m));
        if step == 0 {
            let torsion = coords
                .iter()
                .fold(4i64, |g, (k, _)| g.gcd(&i64::from(*k)));
            return Lattice {
                step: 0,
                torsion,
                shift: 0,
            };
        }
        // fold the generators into a single (shift, step) pair by the
        // extended gcd, then collect the leftover torsion
        let mut acc: Option<(i64, i64)> = None;
        for (k, m) in coords {
            let (k, m) = (i64::from(*k), *m);
            acc = Some(match acc {
                None => (k, m),
                Some((k0, m0)) => {
                    let e = m0.extended_gcd(&m);
                    ((e.x * k0 + e.y * k).rem_euclid(4), e.gcd)
                }
            });
        }
        let (kappa, d) = acc.expect("nonempty generators");
        debug_assert_eq!(d.abs(), step);
        let mut torsion = 4i64;
        for (k, m) in coords {
            let t = m / step;
            let resid = (i64::from(*k) - t * kappa).rem_euclid(4);
            torsion = torsion.gcd(&resid);
        }
        if torsion == 0 {
            torsion = 4;
        }
        Lattice {
            step,
            torsion,
            shift: kappa.rem_euclid(torsion),
        }
    }

    pub fn contains(&self, k: u8, m: i64) -> bool {
        if self.step == 0 {
            return m == 0 && i64::from(k).rem_euclid(4) % self.torsion == 0;
        }
        if m % self.step != 0 {
            return false;
        }
        let t = m / self.step;
        (i64::from(k) - t * self.shift).rem_euclid(4) % self.torsion == 0
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        // other's generators: (shift, step) and (torsion, 0)
        let gen_ok = if other.step == 0 {
            true
        } else {
            self.contains(other.shift.rem_euclid(4) as u8, other.step)
        };
        gen_ok && self.contains(other.torsion.rem_euclid(4) as u8, 0)
    }

    pub fn is_full(&self) -> bool {
        self.step == 1 && self.torsion == 1
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.step == 0 {
            write!(f, "⟨i^{}⟩", self.torsion)
        } else {
            write!(f, "⟨i^{}·ρ^{}, i^{}⟩", self.shift, self.step, self.torsion)
        }
    }
}

/// The exact set of relative orientations of type-`proto` tiles with
/// respect to an anchor tile of the same type.
#[derive(Clone, Debug)]
pub struct OrientationSet {
    pub proto: usize,
    pub anchor: usize,
    pub rotations: Vec<Rotation2>,
}

impl OrientationSet {
    pub fn contains_identity(&self) -> bool {
        self.rotations.iter().any(|r| r.is_identity())
    }
}

/// Relative orientations `R_t ∘ R_anchor⁻¹` over all type-`proto` tiles
/// of the patch. The anchor defaults to the first type-`proto` tile in
/// canonical order.
pub fn relative_orientations(
    patch: &Patch,
    proto: usize,
    anchor: Option<usize>,
) -> Result<OrientationSet, OrientError> {
    let member_ids: Vec<usize> = patch
        .tiles
        .iter()
        .enumerate()
        .filter(|(_, t)| t.proto == proto)
        .map(|(i, _)| i)
        .collect();
    if member_ids.is_empty() {
        return Err(OrientError::NoSuchType(proto));
    }
    let anchor = anchor.unwrap_or(member_ids[0]);
    if patch.tiles.get(anchor).map(|t| t.proto) != Some(proto) {
        return Err(OrientError::BadAnchor(anchor, proto));
    }
    let base_inv = patch.tiles[anchor].pose.rot.inverse();
    let mut rotations: Vec<Rotation2> = member_ids
        .iter()
        .map(|&i| patch.tiles[i].pose.rot.compose(&base_inv))
        .collect();
    rotations.sort();
    rotations.dedup();
    Ok(OrientationSet {
        proto,
        anchor,
        rotations,
    })
}

/// All pairwise relative orientations between type-`proto` tiles (anchor
/// independent; this is what the generated group sees).
pub fn pairwise_orientations(patch: &Patch, proto: usize) -> Result<Vec<Rotation2>, OrientError> {
    let mut rots: Vec<Rotation2> = patch
        .tiles
        .iter()
        .filter(|t| t.proto == proto)
        .map(|t| t.pose.rot.clone())
        .collect();
    if rots.is_empty() {
        return Err(OrientError::NoSuchType(proto));
    }
    rots.sort();
    rots.dedup();
    let mut out = Vec::with_capacity(rots.len() * rots.len());
    for a in &rots {
        let inv = a.inverse();
        for b in &rots {
            out.push(b.compose(&inv));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DescribedRotation {
    pub cos: String,
    pub sin: String,
    pub angle_class: String,
    pub coords: Option<(u8, i64)>,
}

/// Descriptor of the group generated by a finite set of exact rotations.
#[derive(Clone, Debug, Serialize)]
pub struct GroupDescriptor {
    /// lcm of the denominators of the rational turns in the set
    pub torsion_order: u64,
    /// the irrational-turn members, as displayed strings
    pub free_generators: Vec<String>,
    /// basis decomposition over {quarter turn, ρ}, when every member has one
    pub lattice: Option<Lattice>,
    pub elements: Vec<DescribedRotation>,
    /// members that failed to decompose, with the reason
    pub undecomposed: Vec<(String, String)>,
}

pub fn group_descriptor(rotations: &[Rotation2]) -> GroupDescriptor {
    let mut rots = rotations.to_vec();
    rots.sort();
    rots.dedup();
    let mut torsion: u64 = 1;
    let mut free = Vec::new();
    let mut coords = Vec::new();
    let mut elements = Vec::new();
    let mut undecomposed = Vec::new();
    for r in &rots {
        let class = classify_angle(r);
        match class {
            AngleClass::RationalTurn(_, den) => torsion = torsion.lcm(&den),
            AngleClass::IrrationalTurn => free.push(r.to_string()),
        }
        let decomposed = decompose_in_basis(r);
        match &decomposed {
            Ok(km) => coords.push(*km),
            Err(why) => undecomposed.push((r.to_string(), why.to_string())),
        }
        elements.push(DescribedRotation {
            cos: r.cos().to_string(),
            sin: r.sin().to_string(),
            angle_class: match class {
                AngleClass::RationalTurn(n, d) => format!("rational turn {n}/{d}"),
                AngleClass::IrrationalTurn => "irrational turn".into(),
            },
            coords: decomposed.ok(),
        });
    }
    let lattice = if undecomposed.is_empty() && !coords.is_empty() {
        Some(Lattice::from_coords(&coords))
    } else {
        None
    };
    GroupDescriptor {
        torsion_order: torsion,
        free_generators: free,
        lattice,
        elements,
        undecomposed,
    }
}

/// Result of checking that type-`j` relative orientations at one level
/// reappear between type-`k` tiles one substitution later.
#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub base: usize,
    pub j: usize,
    pub k: usize,
    pub level: u32,
    pub checked: usize,
    pub holds: bool,
    /// missing rotations with an offending tile pair (indices at level n)
    pub violations: Vec<(String, usize, usize)>,
}

/// Patch-level core: every relative orientation between type-`j` tiles of
/// `at_n` must reappear between type-`k` tiles of `at_next`.
pub fn orientation_inclusion(
    at_n: &Patch,
    at_next: &Patch,
    j: usize,
    k: usize,
) -> Result<InclusionReport, OrientError> {
    let small = pairwise_orientations(at_n, j)?;
    let big = pairwise_orientations(at_next, k)?;
    let mut violations = Vec::new();
    for r in &small {
        if !big.contains(r) {
            // recover an offending pair of type-j tiles realizing r
            let mut pair = (usize::MAX, usize::MAX);
            'outer: for (ti, t) in at_n.tiles.iter().enumerate() {
                if t.proto != j {
                    continue;
                }
                for (ui, u) in at_n.tiles.iter().enumerate() {
                    if u.proto != j {
                        continue;
                    }
                    if t.pose.rot.compose(&u.pose.rot.inverse()) == *r {
                        pair = (ti, ui);
                        break 'outer;
                    }
                }
            }
            violations.push((r.to_string(), pair.0, pair.1));
        }
    }
    Ok(InclusionReport {
        base: usize::MAX,
        j,
        k,
        level: at_n.level_hint.unwrap_or(0),
        checked: small.len(),
        holds: violations.is_empty(),
        violations,
    })
}

/// Verify at finite level that every relative orientation between type-`j`
/// tiles of `φⁿ(base)` is a relative orientation between type-`k` tiles of
/// `φⁿ⁺¹(base)`. For a single well-formed system this is forced by the
/// parallel-children mechanism (child rotations cancel in relative
/// orientations), so this doubles as an end-to-end integrity check of the
/// generation pipeline; [`orientation_inclusion`] on patches from
/// different sources is the discriminating form.
pub fn inclusion_check(
    sys: &SubstitutionSystem,
    base: usize,
    j: usize,
    k: usize,
    level: u32,
    cap: u64,
) -> Result<InclusionReport, OrientError> {
    let at_n = sys.supertile(base, level, cap)?;
    let at_next = sys.substitute(&at_n)?;
    let mut report = orientation_inclusion(&at_n, &at_next, j, k)?;
    report.base = base;
    report.level = level;
    Ok(report)
}

/// Side-by-side comparison of the orientation invariants computed for two
/// substitution systems, including the exact relation between their
/// characteristic irrational generators.
#[derive(Clone, Debug, Serialize)]
pub struct SystemComparison {
    pub left_label: String,
    pub right_label: String,
    pub level: u32,
    pub left: GroupDescriptor,
    pub right: GroupDescriptor,
    /// computed verdict: identical / left ⊂ right / right ⊂ left /
    /// distinct / undecided
    pub verdict: String,
    /// the doubled atomic child rotations of each system, when they exist
    pub left_generator: Option<String>,
    pub right_generator: Option<String>,
    /// exact composition of those two generators, classified
    pub generator_relation: Option<String>,
    /// set when the computed verdict contradicts the published claim that
    /// the two invariants are distinct
    pub discrepancy_with_published_distinctness: bool,
    pub notes: Vec<String>,
}

/// The smallest-angle irrational child rotation of the rule, squared: for
/// mirror-pair substitutions this doubles the atomic angle and lands on
/// the group generator usually quoted for the system.
pub fn doubled_atomic_generator(sys: &SubstitutionSystem) -> Option<Rotation2> {
    let mut best: Option<Rotation2> = None;
    for rule in &sys.children {
        for child in rule {
            let r = &child.pose.rot;
            if classify_angle(r) != AngleClass::IrrationalTurn {
                continue;
            }
            // prefer the rotation closest to the identity with positive sine
            let candidate = if r.sin().is_positive() {
                r.clone()
            } else {
                r.inverse()
            };
            let better = match &best {
                None => true,
                Some(b) => candidate.cos() > b.cos(),
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    best.map(|r| r.compose(&r))
}

fn descriptor_for(sys: &SubstitutionSystem, level: u32, cap: u64) -> Result<GroupDescriptor, OrientError> {
    let st = sys.supertile(0, level, cap)?;
    let rots = pairwise_orientations(&st, 0)?;
    Ok(group_descriptor(&rots))
}

/// Compare the level-`level` orientation invariants of two systems.
/// The verdict is computed from the exact lattices; nothing about the
/// outcome is assumed.
pub fn compare_systems(
    left_sys: &SubstitutionSystem,
    right_sys: &SubstitutionSystem,
    left_label: &str,
    right_label: &str,
    level: u32,
    cap: u64,
) -> Result<SystemComparison, OrientError> {
    let left = descriptor_for(left_sys, level, cap)?;
    let right = descriptor_for(right_sys, level, cap)?;
    let verdict = match (&left.lattice, &right.lattice) {
        (Some(a), Some(b)) => {
            if a == b {
                "identical subgroups of SO(2)".to_string()
            } else if b.contains_lattice(a) {
                "left group is a proper subgroup of the right".to_string()
            } else if a.contains_lattice(b) {
                "right group is a proper subgroup of the left".to_string()
            } else {
                "distinct subgroups (neither contains the other)".to_string()
            }
        }
        _ => "undecided: not every rotation decomposes over a common basis".to_string(),
    };

    let lg = doubled_atomic_generator(left_sys);
    let rg = doubled_atomic_generator(right_sys);
    let mut generator_relation = None;
    let mut notes = Vec::new();
    let mut discrepancy = false;
    if let (Some(gl), Some(gr)) = (&lg, &rg) {
        // compose in the left system's field (entries are rational for the
        // bundled rules, so the field transfer is exact)
        if gl.cos().is_rational()
            && gl.sin().is_rational()
            && gr.cos().is_rational()
            && gr.sin().is_rational()
        {
            let d = gl.cos().field_d();
            let to_field = |r: &Rotation2| {
                Rotation2::new(
                    QScalar::new(r.cos().rational_part().clone(), num_rational::BigRational::from_integer(0.into()), d),
                    QScalar::new(r.sin().rational_part().clone(), num_rational::BigRational::from_integer(0.into()), d),
                )
                .expect("unit rotation transfers between fields")
            };
            let a = to_field(gl);
            let b = to_field(gr);
            let comp = a.compose(&b);
            let classified = match classify_angle(&comp) {
                AngleClass::RationalTurn(n, den) => format!("a rational turn {n}/{den}"),
                AngleClass::IrrationalTurn => "an irrational turn".to_string(),
            };
            generator_relation = Some(format!("{} ∘ {} = {} ({})", a, b, comp, classified));
            if verdict.starts_with("identical") {
                discrepancy = true;
                notes.push(format!(
                    "The invariants of these two systems are cited in the literature as \
                     the groups generated by a quarter turn together with {} and with {} \
                     respectively, and claimed to be distinct. The exact computation above \
                     finds the two groups {}; in particular {}. This tension is reported, \
                     not resolved.",
                    describe_double_arctan(gl),
                    describe_double_arctan(gr),
                    verdict,
                    generator_relation.as_deref().unwrap_or("")
                ));
            }
        }
    }
    notes.push(format!(
        "Descriptors computed from the level-{level} supertile; finite-level sets only \
         grow with the level, so containment verdicts are lower bounds on the limit groups."
    ));
    Ok(SystemComparison {
        left_label: left_label.to_string(),
        right_label: right_label.to_string(),
        level,
        left,
        right,
        verdict,
        left_generator: lg.map(|r| r.to_string()),
        right_generator: rg.map(|r| r.to_string()),
        generator_relation,
        discrepancy_with_published_distinctness: discrepancy,
        notes,
    })
}

/// Label a doubled atomic rotation as `2·arctan(t)` with the exact
/// tangent of the half angle recovered from the rule.
fn describe_double_arctan(doubled: &Rotation2) -> String {
    // half-angle tangent: t = sin / (1 + cos), exact
    let one = QScalar::one(doubled.cos().field_d());
    match doubled.sin().checked_div(&(one + doubled.cos().clone())) {
        Ok(t) => format!("2·arctan({t})"),
        Err(_) => format!("{doubled}"),
    }
}

impl fmt::Display for SystemComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "orientation invariant comparison: {} vs {} (level {})",
            self.left_label, self.right_label, self.level
        )?;
        for (label, d) in [(&self.left_label, &self.left), (&self.right_label, &self.right)] {
            write!(f, "  {label}: torsion order {}", d.torsion_order)?;
            match &d.lattice {
                Some(l) => writeln!(f, ", basis lattice {l}")?,
                None => writeln!(f, ", {} rotations undecomposed", d.undecomposed.len())?,
            }
        }
        writeln!(f, "  verdict: {}", self.verdict)?;
        if let Some(rel) = &self.generator_relation {
            writeln!(f, "  generator relation: {rel}")?;
        }
        if self.discrepancy_with_published_distinctness {
            writeln!(f, "  DISCREPANCY: computed comparison contradicts the published distinctness claim")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

//! Exact planar geometry over Q(sqrt(D)): points, rotations, isometries,
//! similarities, polygon predicates and congruence testing.

use crate::scalar::{QScalar, ScalarError};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("not a unit rotation: c²+s² = {0}")]
    NotUnit(String),
    #[error("degenerate polygon (zero area)")]
    DegeneratePolygon,
    #[error("scale factor must be positive")]
    NonPositiveScale,
}

/// Exact point in the plane.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: QScalar,
    pub y: QScalar,
}

impl Point2 {
    pub fn new(x: QScalar, y: QScalar) -> Self {
        Point2 { x, y }
    }

    pub fn origin(d: u32) -> Self {
        Point2::new(QScalar::zero(d), QScalar::zero(d))
    }

    pub fn add(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, k: &QScalar) -> Point2 {
        Point2::new(&self.x * k, &self.y * k)
    }

    /// Squared Euclidean length, exact.
    pub fn norm2(&self) -> QScalar {
        &self.x * &self.x + &self.y * &self.y
    }

    pub fn dot(&self, o: &Point2) -> QScalar {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point2) -> QScalar {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.x.to_f64(), self.y.to_f64()]
    }
}

impl fmt::Debug for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Exact planar rotation stored as the unit pair (cos, sin).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rotation2 {
    c: QScalar,
    s: QScalar,
}

impl Rotation2 {
    pub fn new(c: QScalar, s: QScalar) -> Result<Self, GeomError> {
        let n = &c * &c + &s * &s;
        if !n.is_one() {
            return Err(GeomError::NotUnit(n.to_string()));
        }
        Ok(Rotation2 { c, s })
    }

    pub fn identity(d: u32) -> Self {
        Rotation2 {
            c: QScalar::one(d),
            s: QScalar::zero(d),
        }
    }

    pub fn quarter_turn(d: u32) -> Self {
        Rotation2 {
            c: QScalar::zero(d),
            s: QScalar::one(d),
        }
    }

    pub fn half_turn(d: u32) -> Self {
        Rotation2 {
            c: QScalar::from_int(-1, d),
            s: QScalar::zero(d),
        }
    }

    pub fn cos(&self) -> &QScalar {
        &self.c
    }

    pub fn sin(&self) -> &QScalar {
        &self.s
    }

    pub fn is_identity(&self) -> bool {
        self.c.is_one() && self.s.is_zero()
    }

    pub fn compose(&self, o: &Rotation2) -> Rotation2 {
        Rotation2 {
            c: &self.c * &o.c - &self.s * &o.s,
            s: &self.c * &o.s + &self.s * &o.c,
        }
    }

    pub fn inverse(&self) -> Rotation2 {
        Rotation2 {
            c: self.c.clone(),
            s: -self.s.clone(),
        }
    }

    pub fn apply(&self, p: &Point2) -> Point2 {
        Point2::new(&self.c * &p.x - &self.s * &p.y, &self.s * &p.x + &self.c * &p.y)
    }

    pub fn pow(&self, n: i64) -> Rotation2 {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Rotation2::identity(self.c.field_d());
        for _ in 0..n.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }

    pub fn angle_f64(&self) -> f64 {
        self.s.to_f64().atan2(self.c.to_f64())
    }
}

impl fmt::Debug for Rotation2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rot({}, {})", self.c, self.s)
    }
}

impl fmt::Display for Rotation2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rot({}, {})", self.c, self.s)
    }
}

/// Direct or indirect planar isometry `v ↦ F^refl · R · v + t`,
/// where `F = diag(1, -1)` is applied after the rotation when `reflect`
/// is set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Isometry2 {
    pub rot: Rotation2,
    pub reflect: bool,
    pub trans: Point2,
}

impl Isometry2 {
    pub fn identity(d: u32) -> Self {
        Isometry2 {
            rot: Rotation2::identity(d),
            reflect: false,
            trans: Point2::origin(d),
        }
    }

    pub fn rotation(rot: Rotation2, d: u32) -> Self {
        Isometry2 {
            rot,
            reflect: false,
            trans: Point2::origin(d),
        }
    }

    pub fn translation(trans: Point2) -> Self {
        let d = trans.x.field_d();
        Isometry2 {
            rot: Rotation2::identity(d),
            reflect: false,
            trans,
        }
    }

    pub fn apply(&self, p: &Point2) -> Point2 {
        let q = self.rot.apply(p);
        let q = if self.reflect {
            Point2::new(q.x, -q.y)
        } else {
            q
        };
        q.add(&self.trans)
    }

    /// `(self ∘ other)(v) = self(other(v))`.
    pub fn compose(&self, other: &Isometry2) -> Isometry2 {
        // matrix part: F^a R1 · F^b R2 = F^(a xor b) · (R1^(±1) R2)
        let rot = if other.reflect {
            // R1 must be conjugated through the reflection on the right factor
            self.rot.inverse().compose(&other.rot)
        } else {
            self.rot.compose(&other.rot)
        };
        Isometry2 {
            rot,
            reflect: self.reflect != other.reflect,
            trans: self.apply(&other.trans),
        }
    }

    pub fn inverse(&self) -> Isometry2 {
        // v = F^a R u + t  =>  u = R⁻¹ F^a (v - t)
        let d = self.trans.x.field_d();
        if self.reflect {
            // inverse matrix of F·R is R⁻¹·F = F·R (an involution times …):
            // (F R)⁻¹ = R⁻¹ F; as F^1·R' with R' = F R⁻¹ F = R
            let m = Isometry2 {
                rot: self.rot.clone(),
                reflect: true,
                trans: Point2::origin(d),
            };
            let t = m.apply(&self.trans);
            Isometry2 {
                rot: m.rot,
                reflect: true,
                trans: Point2::new(-t.x, -t.y),
            }
        } else {
            let rinv = self.rot.inverse();
            let t = rinv.apply(&self.trans);
            Isometry2 {
                rot: rinv,
                reflect: false,
                trans: Point2::new(-t.x, -t.y),
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.reflect && self.rot.is_identity() && self.trans.x.is_zero() && self.trans.y.is_zero()
    }
}

/// Orientation-preserving similarity: isometry followed by a positive scaling.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Similarity2 {
    pub iso: Isometry2,
    pub scale: QScalar,
}

impl Similarity2 {
    pub fn new(iso: Isometry2, scale: QScalar) -> Result<Self, GeomError> {
        if !scale.is_positive() {
            return Err(GeomError::NonPositiveScale);
        }
        Ok(Similarity2 { iso, scale })
    }

    /// Pure stretch about the origin.
    pub fn stretch(scale: QScalar) -> Result<Self, GeomError> {
        let d = scale.field_d();
        Similarity2::new(Isometry2::identity(d), scale)
    }

    /// `v ↦ iso(scale · v)`.
    pub fn apply(&self, p: &Point2) -> Point2 {
        self.iso.apply(&p.scale(&self.scale))
    }

    pub fn compose(&self, other: &Similarity2) -> Similarity2 {
        let mut iso = self.iso.compose(&other.iso);
        iso.trans = self.iso.apply(&other.iso.trans.scale(&self.scale));
        Similarity2 {
            iso,
            scale: &self.scale * &other.scale,
        }
    }

    pub fn inverse(&self) -> Similarity2 {
        // (g ∘ s)⁻¹ = s⁻¹ ∘ g⁻¹; fold the 1/scale into the translation
        let inv = self.iso.inverse();
        let k = QScalar::one(self.scale.field_d())
            .checked_div(&self.scale)
            .expect("scale is positive");
        Similarity2 {
            iso: Isometry2 {
                rot: inv.rot.clone(),
                reflect: inv.reflect,
                trans: inv.trans.scale(&k),
            },
            scale: k,
        }
    }
}

/// Conjugate an isometry by the stretch `v ↦ factor·v` about the origin:
/// `(R, t) ↦ (R, factor·t)`. This is how a substitution acts on poses.
pub fn expand_about_origin(g: &Isometry2, factor: &QScalar) -> Isometry2 {
    Isometry2 {
        rot: g.rot.clone(),
        reflect: g.reflect,
        trans: g.trans.scale(factor),
    }
}

/// Twice the signed area of a polygon (positive for counterclockwise).
pub fn polygon_area2(verts: &[Point2]) -> QScalar {
    let d = verts[0].x.field_d();
    let mut acc = QScalar::zero(d);
    for i in 0..verts.len() {
        let p = &verts[i];
        let q = &verts[(i + 1) % verts.len()];
        acc = acc + p.cross(q);
    }
    acc
}

/// True if the closed polygon is simple (no self-intersections, no repeated
/// vertices). Collinear consecutive vertices are allowed.
pub fn polygon_is_simple(verts: &[Point2]) -> bool {
    let n = verts.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a0, a1) = (&verts[i], &verts[(i + 1) % n]);
            let (b0, b1) = (&verts[j], &verts[(j + 1) % n]);
            if a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1 {
                // adjacent edges: only the shared endpoint may coincide
                continue;
            }
            if segments_intersect(a0, a1, b0, b1) {
                return false;
            }
        }
        // repeated vertices
        for j in i + 1..n {
            if verts[i] == verts[j] {
                return false;
            }
        }
    }
    true
}

fn orient(a: &Point2, b: &Point2, c: &Point2) -> Ordering {
    b.sub(a).cross(&c.sub(a)).sign()
}

fn on_segment(a: &Point2, b: &Point2, p: &Point2) -> bool {
    orient(a, b, p) == Ordering::Equal
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

/// Exact closed-segment intersection predicate.
pub fn segments_intersect(a0: &Point2, a1: &Point2, b0: &Point2, b1: &Point2) -> bool {
    let o1 = orient(a0, a1, b0);
    let o2 = orient(a0, a1, b1);
    let o3 = orient(b0, b1, a0);
    let o4 = orient(b0, b1, a1);
    if o1 != o2 && o3 != o4 && o1 != Ordering::Equal && o2 != Ordering::Equal {
        return true;
    }
    if o1 == Ordering::Equal && on_segment(a0, a1, b0) {
        return true;
    }
    if o2 == Ordering::Equal && on_segment(a0, a1, b1) {
        return true;
    }
    if o3 == Ordering::Equal && on_segment(b0, b1, a0) {
        return true;
    }
    if o4 == Ordering::Equal && on_segment(b0, b1, a1) {
        return true;
    }
    false
}

/// Do the interiors of two convex polygons overlap? Exact separating-axis
/// test; touching along edges or vertices does not count as overlap.
pub fn convex_interiors_overlap(p: &[Point2], q: &[Point2]) -> bool {
    !has_separating_axis(p, q) && !has_separating_axis(q, p)
}

fn has_separating_axis(p: &[Point2], q: &[Point2]) -> bool {
    let n = p.len();
    for i in 0..n {
        let a = &p[i];
        let b = &p[(i + 1) % n];
        let edge = b.sub(a);
        if edge.x.is_zero() && edge.y.is_zero() {
            continue;
        }
        // outward normal for a CCW polygon: (edge.y, -edge.x)
        let normal = Point2::new(edge.y.clone(), -edge.x.clone());
        // q lies entirely in the closed half-plane normal·(v-a) >= 0?
        let mut all_outside = true;
        for v in q {
            if normal.dot(&v.sub(a)).sign() == Ordering::Less {
                all_outside = false;
                break;
            }
        }
        if all_outside {
            return true;
        }
    }
    false
}

/// Search for an isometry carrying polygon `p` onto polygon `q`, matching
/// vertex adjacency up to cyclic shift and (when allowed) reversal.
pub fn polygon_congruence(
    p: &[Point2],
    q: &[Point2],
    allow_reflection: bool,
) -> Result<Option<Isometry2>, GeomError> {
    if p.len() < 3 || q.len() < 3 {
        return Err(GeomError::DegeneratePolygon);
    }
    if polygon_area2(p).is_zero() || polygon_area2(q).is_zero() {
        return Err(GeomError::DegeneratePolygon);
    }
    if p.len() != q.len() {
        return Ok(None);
    }
    let d = p[0].x.field_d();
    let n = p.len();
    let reflections: &[bool] = if allow_reflection {
        &[false, true]
    } else {
        &[false]
    };
    // adjacency is respected up to cyclic shift and reversal, and an
    // indirect isometry reverses the traversal, so try both directions
    let q_reversed: Vec<Point2> = q.iter().rev().cloned().collect();
    for qq in [q, q_reversed.as_slice()] {
        for &reflect in reflections {
            // mirroring p reverses its traversal; re-reverse to keep a
            // direct matching problem
            let pp: Vec<Point2> = if reflect {
                p.iter().rev().map(|v| Point2::new(v.x.clone(), -v.y.clone())).collect()
            } else {
                p.to_vec()
            };
            for shift in 0..n {
                if let Some(iso) = direct_match(&pp, qq, shift, d) {
                    if reflect {
                        // iso maps mirror(p) onto q; the full map is iso ∘ mirror
                        let mirror = Isometry2 {
                            rot: Rotation2::identity(d),
                            reflect: true,
                            trans: Point2::origin(d),
                        };
                        return Ok(Some(iso.compose(&mirror)));
                    }
                    return Ok(Some(iso));
                }
            }
        }
    }
    Ok(None)
}

fn direct_match(p: &[Point2], q: &[Point2], shift: usize, _d: u32) -> Option<Isometry2> {
    let n = p.len();
    // pick two distinct anchor vertices of p
    let a0 = &p[0];
    let mut k = 1;
    while k < n && p[k] == *a0 {
        k += 1;
    }
    if k == n {
        return None;
    }
    let a1 = &p[k];
    let b0 = &q[shift % n];
    let b1 = &q[(shift + k) % n];
    let dp = a1.sub(a0);
    let dq = b1.sub(b0);
    if dp.norm2() != dq.norm2() {
        return None;
    }
    // rotation as complex quotient dq/dp
    let n2 = dp.norm2();
    let conj_num = Point2::new(
        dq.dot(&dp),
        dp.cross(&dq),
    );
    let c = conj_num.x.checked_div(&n2).ok()?;
    let s = conj_num.y.checked_div(&n2).ok()?;
    let rot = Rotation2::new(c, s).ok()?;
    let trans = b0.sub(&rot.apply(a0));
    let iso = Isometry2 {
        rot,
        reflect: false,
        trans,
    };
    for i in 0..n {
        if iso.apply(&p[i]) != q[(shift + i) % n] {
            return None;
        }
    }
    Some(iso)
}

/// How a rotation sits relative to full turns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AngleClass {
    /// `numerator/denominator` of a full turn, reduced, `0 <= num < den`.
    RationalTurn(u64, u64),
    /// Not a rational multiple of a full turn (decided over the
    /// degree-≤2 cosine list).
    IrrationalTurn,
}

/// Classify an exact rotation as a rational or irrational fraction of a
/// full turn. A rotation whose cosine is algebraic of degree ≤ 2 is a
/// rational turn exactly when (cos, sin) is one of the 16 unit pairs with
/// entries in {0, ±1/2, ±1, ±√2/2, ±√3/2}; everything else with such
/// coordinates is an irrational turn. The √2 / √3 rows only exist when
/// the ambient field provides them.
pub fn classify_angle(r: &Rotation2) -> AngleClass {
    let d = r.cos().field_d();
    let half = QScalar::from_ratio(1, 2, d);
    let one = QScalar::one(d);
    let zero = QScalar::zero(d);
    let mut table: Vec<(QScalar, QScalar, u64, u64)> = vec![
        (one.clone(), zero.clone(), 0, 1),
        (-one.clone(), zero.clone(), 1, 2),
        (zero.clone(), one.clone(), 1, 4),
        (zero.clone(), -one, 3, 4),
    ];
    if d == 3 {
        let w = QScalar::surd_ratio(1, 2, d); // √3/2
        table.extend([
            (-half.clone(), w.clone(), 1, 3),
            (-half.clone(), -w.clone(), 2, 3),
            (half.clone(), w.clone(), 1, 6),
            (half.clone(), -w.clone(), 5, 6),
            (w.clone(), half.clone(), 1, 12),
            (w.clone(), -half.clone(), 11, 12),
            (-w.clone(), half.clone(), 5, 12),
            (-w, -half.clone(), 7, 12),
        ]);
    }
    if d == 2 {
        let w = QScalar::surd_ratio(1, 2, d); // √2/2
        table.extend([
            (w.clone(), w.clone(), 1, 8),
            (-w.clone(), w.clone(), 3, 8),
            (-w.clone(), -w.clone(), 5, 8),
            (w.clone(), -w, 7, 8),
        ]);
    }
    // ±1/2 cosine with rational sine never closes the unit circle, so the
    // hexagonal rows are unreachable outside Q(√3); no further cases.
    for (c, s, num, den) in table {
        if *r.cos() == c && *r.sin() == s {
            return AngleClass::RationalTurn(num, den);
        }
    }
    AngleClass::IrrationalTurn
}

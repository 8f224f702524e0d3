//! Exact validation of substitution rules: the expansion bound, the
//! partition / face-to-face condition, type coverage, and parallel
//! recurrence. All geometric decisions are made in exact arithmetic.

use crate::geom::{polygon_area2, Point2, Rotation2};
use crate::scalar::QScalar;
use crate::tiling::{Patch, SubstitutionSystem};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConditionId {
    /// expansion factor exceeds 1
    I,
    /// children exactly partition the scaled parent, meeting full face to
    /// full face
    II,
    /// every substitution contains at least one tile of each type
    III,
    /// some power of the substitution reproduces a parallel tile of the
    /// same type
    V,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionId::I => write!(f, "condition i (expansion > 1)"),
            ConditionId::II => write!(f, "condition ii (exact partition, face-to-face)"),
            ConditionId::III => write!(f, "condition iii (all tile types in every substitution)"),
            ConditionId::V => write!(f, "condition v (parallel same-type recurrence)"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub id: ConditionId,
    pub passed: bool,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub conditions: Vec<ConditionReport>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<String> {
        self.conditions.iter().find(|c| !c.passed).map(|c| {
            format!(
                "{} failed: {}",
                c.id,
                c.details.first().cloned().unwrap_or_default()
            )
        })
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.conditions {
            writeln!(f, "[{}] {}", if c.passed { "pass" } else { "FAIL" }, c.id)?;
            for d in &c.details {
                writeln!(f, "    {d}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ValidateOptions {
    /// highest substitution power searched for condition v
    pub parallel_cap: u32,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { parallel_cap: 8 }
    }
}

pub fn validate_rule(sys: &SubstitutionSystem, opts: &ValidateOptions) -> ValidationReport {
    let mut conditions = Vec::new();

    // condition i
    {
        let one = QScalar::one(sys.field_d);
        let passed = sys.expansion > one;
        let mut details = vec![format!("expansion |φ| = {}", sys.expansion)];
        if !passed {
            details.push("expansion must be strictly greater than 1".into());
        } else {
            details.push("pose conjugation is exact by construction".into());
        }
        conditions.push(ConditionReport {
            id: ConditionId::I,
            passed,
            details,
        });
    }

    // condition ii, per prototile
    {
        let mut passed = true;
        let mut details = Vec::new();
        for p in &sys.alphabet {
            match check_partition(sys, p.id) {
                Ok(()) => details.push(format!(
                    "prototile {} ({}): children partition the scaled parent, face-to-face",
                    p.id, p.label
                )),
                Err(errs) => {
                    passed = false;
                    for e in errs {
                        details.push(format!("prototile {} ({}): {}", p.id, p.label, e));
                    }
                }
            }
        }
        conditions.push(ConditionReport {
            id: ConditionId::II,
            passed,
            details,
        });
    }

    // condition iii
    {
        let mut passed = true;
        let mut details = Vec::new();
        for p in &sys.alphabet {
            let mut present: Vec<bool> = vec![false; sys.alphabet.len()];
            for child in &sys.children[p.id] {
                present[child.child] = true;
            }
            let missing: Vec<usize> = (0..sys.alphabet.len()).filter(|i| !present[*i]).collect();
            if missing.is_empty() {
                details.push(format!(
                    "prototile {}: children cover all {} types",
                    p.id,
                    sys.alphabet.len()
                ));
            } else {
                passed = false;
                details.push(format!(
                    "prototile {}: children miss type(s) {:?}",
                    p.id, missing
                ));
            }
        }
        conditions.push(ConditionReport {
            id: ConditionId::III,
            passed,
            details,
        });
    }

    // condition v
    {
        let mut passed = true;
        let mut details = Vec::new();
        for p in &sys.alphabet {
            match parallel_recurrence_level(sys, p.id, opts.parallel_cap) {
                Some(n) => details.push(format!("prototile {}: parallel copy at power n = {}", p.id, n)),
                None => {
                    passed = false;
                    details.push(format!(
                        "prototile {}: no parallel same-type copy found within cap {}",
                        p.id, opts.parallel_cap
                    ));
                }
            }
        }
        conditions.push(ConditionReport {
            id: ConditionId::V,
            passed,
            details,
        });
    }

    ValidationReport { conditions }
}

/// Smallest `n ≤ cap` such that the n-th substitution of `proto` contains a
/// same-type child with identity rotation.
pub fn parallel_recurrence_level(sys: &SubstitutionSystem, proto: usize, cap: u32) -> Option<u32> {
    let id = Rotation2::identity(sys.field_d);
    let mut cur: Vec<(usize, Rotation2)> = vec![(proto, id.clone())];
    for n in 1..=cap {
        let mut next: Vec<(usize, Rotation2)> = Vec::new();
        for (p, r) in &cur {
            for child in &sys.children[*p] {
                next.push((child.child, r.compose(&child.pose.rot)));
            }
        }
        next.sort();
        next.dedup();
        if next.iter().any(|(p, r)| *p == proto && *r == id) {
            return Some(n);
        }
        cur = next;
    }
    None
}

/// Condition ii for one prototile: exact partition of the |φ|-scaled parent.
pub fn check_partition(sys: &SubstitutionSystem, pid: usize) -> Result<(), Vec<String>> {
    let mut errs = Vec::new();
    let parent: Vec<Point2> = sys.alphabet[pid]
        .vertices
        .iter()
        .map(|v| v.scale(&sys.expansion))
        .collect();
    let placed: Vec<Vec<Point2>> = sys.children[pid]
        .iter()
        .map(|c| {
            sys.alphabet[c.child]
                .vertices
                .iter()
                .map(|v| c.pose.apply(v))
                .collect()
        })
        .collect();

    // area sum
    let d = sys.field_d;
    let mut total = QScalar::zero(d);
    for poly in &placed {
        total = total + polygon_area2(poly).abs();
    }
    let parent_area = polygon_area2(&parent).abs();
    if total != parent_area {
        errs.push(format!(
            "child areas sum to {} but the scaled parent has area {} (×2)",
            total, parent_area
        ));
    }

    // pairwise interiors disjoint
    for i in 0..placed.len() {
        for j in i + 1..placed.len() {
            if interiors_overlap(&placed[i], &placed[j]) {
                errs.push(format!("children {} and {} overlap", i, j));
            }
        }
    }

    // face-to-face pairing + boundary tiling
    if let Err(mut e) = edges_partition_outline(&placed, &parent) {
        errs.append(&mut e);
    }

    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

/// Directed-edge matching: every edge of every polygon either cancels
/// exactly against a reversed copy (interior, full face to full face) or the
/// leftovers exactly tile the outline.
pub fn edges_partition_outline(
    polys: &[Vec<Point2>],
    outline: &[Point2],
) -> Result<(), Vec<String>> {
    let mut errs = Vec::new();
    let mut map: HashMap<(Point2, Point2), i64> = HashMap::new();
    for poly in polys {
        for i in 0..poly.len() {
            let a = poly[i].clone();
            let b = poly[(i + 1) % poly.len()].clone();
            if a == b {
                continue;
            }
            *map.entry((a, b)).or_insert(0) += 1;
        }
    }
    let mut leftover: Vec<(Point2, Point2)> = Vec::new();
    let mut keys: Vec<(Point2, Point2)> = map.keys().cloned().collect();
    keys.sort();
    for key in keys {
        let n = map[&key];
        if n == 0 {
            continue;
        }
        if n > 1 {
            errs.push(format!(
                "edge {:?}→{:?} traversed {} times in the same direction",
                key.0, key.1, n
            ));
            continue;
        }
        let rev = (key.1.clone(), key.0.clone());
        if let Some(m) = map.get(&rev) {
            if *m >= 1 {
                // interior edge, exactly shared
                map.insert(key, 0);
                map.insert(rev, 0);
                continue;
            }
        }
        leftover.push(key);
    }
    if let Err(mut e) = edges_tile_outline(&leftover, outline) {
        errs.append(&mut e);
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

/// Check that the given directed edges exactly tile the counterclockwise
/// outline (edges may subdivide outline sides; collinear consecutive sides
/// are merged into runs first).
pub fn edges_tile_outline(edges: &[(Point2, Point2)], outline: &[Point2]) -> Result<(), Vec<String>> {
    let runs = collinear_runs(outline);
    let mut errs = Vec::new();
    // assign each edge to a run
    let mut per_run: Vec<Vec<(QScalar, QScalar)>> = vec![Vec::new(); runs.len()];
    'edges: for (a, b) in edges {
        for (ri, (p, q)) in runs.iter().enumerate() {
            let dir = q.sub(p);
            let n2 = dir.norm2();
            let ca = dir.cross(&a.sub(p));
            let cb = dir.cross(&b.sub(p));
            if !ca.is_zero() || !cb.is_zero() {
                continue;
            }
            let ta = dir.dot(&a.sub(p)).checked_div(&n2).expect("run has length");
            let tb = dir.dot(&b.sub(p)).checked_div(&n2).expect("run has length");
            let zero = QScalar::zero(n2.field_d());
            let one = QScalar::one(n2.field_d());
            if ta < zero || ta > one || tb < zero || tb > one {
                continue;
            }
            if tb <= ta {
                errs.push(format!(
                    "boundary edge {:?}→{:?} runs against the outline orientation",
                    a, b
                ));
                continue 'edges;
            }
            per_run[ri].push((ta, tb));
            continue 'edges;
        }
        errs.push(format!("edge {:?}→{:?} lies on no outline side", a, b));
    }
    // each run must be exactly covered
    for (ri, intervals) in per_run.iter_mut().enumerate() {
        intervals.sort_by(|x, y| x.0.cmp(&y.0));
        let zero = QScalar::zero(runs[ri].0.x.field_d());
        let one = QScalar::one(zero.field_d());
        let mut cursor = zero;
        let mut ok = true;
        for (ta, tb) in intervals.iter() {
            if *ta != cursor {
                ok = false;
                break;
            }
            cursor = tb.clone();
        }
        if !(ok && cursor == one) {
            errs.push(format!(
                "outline side {:?}→{:?} is not exactly tiled (gap or overlap)",
                runs[ri].0, runs[ri].1
            ));
        }
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

/// Maximal collinear, same-direction chains of the outline's sides.
fn collinear_runs(outline: &[Point2]) -> Vec<(Point2, Point2)> {
    let n = outline.len();
    // find a corner to start from (a vertex where direction turns)
    let mut start = 0;
    for i in 0..n {
        let prev = outline[(i + n - 1) % n].clone();
        let here = outline[i].clone();
        let next = outline[(i + 1) % n].clone();
        let d1 = here.sub(&prev);
        let d2 = next.sub(&here);
        if !d1.cross(&d2).is_zero() {
            start = i;
            break;
        }
    }
    let mut runs = Vec::new();
    let mut run_start = outline[start].clone();
    for k in 1..=n {
        let here = outline[(start + k) % n].clone();
        let next = outline[(start + k + 1) % n].clone();
        // the chord stands in for the incoming direction: everything since
        // run_start is collinear by construction
        let chord = here.sub(&run_start);
        let outgoing = next.sub(&here);
        if k == n || !chord.cross(&outgoing).is_zero() {
            runs.push((run_start.clone(), here.clone()));
            run_start = here;
        }
        if k == n {
            break;
        }
    }
    runs
}

/// Is `p` strictly inside the simple polygon (boundary excluded)? Exact.
pub fn point_strictly_inside(poly: &[Point2], p: &Point2) -> bool {
    if point_on_boundary(poly, p) {
        return false;
    }
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        let a_above = a.y > p.y;
        let b_above = b.y > p.y;
        if a_above == b_above {
            continue;
        }
        // crossing of the +x ray: sign of (a-p)×(b-p) against edge direction
        let num = a.sub(p).cross(&b.sub(p));
        let crossing_right = if b.y > a.y {
            num.sign() == Ordering::Greater
        } else {
            num.sign() == Ordering::Less
        };
        if crossing_right {
            inside = !inside;
        }
    }
    inside
}

pub fn point_on_boundary(poly: &[Point2], p: &Point2) -> bool {
    let n = poly.len();
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        if a.sub(p).cross(&b.sub(p)).is_zero() {
            // collinear: within the bounding range?
            let lo_x = a.x.clone().min(b.x.clone());
            let hi_x = a.x.clone().max(b.x.clone());
            let lo_y = a.y.clone().min(b.y.clone());
            let hi_y = a.y.clone().max(b.y.clone());
            if p.x >= lo_x && p.x <= hi_x && p.y >= lo_y && p.y <= hi_y {
                return true;
            }
        }
    }
    false
}

/// Complete exact interior-overlap test for simple polygons.
pub fn interiors_overlap(p: &[Point2], q: &[Point2]) -> bool {
    for v in p {
        if point_strictly_inside(q, v) {
            return true;
        }
    }
    for v in q {
        if point_strictly_inside(p, v) {
            return true;
        }
    }
    if edge_passes_inside(p, q) || edge_passes_inside(q, p) {
        return true;
    }
    // remaining possibility: identical regions with coincident boundaries
    boundary_subset(p, q) && boundary_subset(q, p)
}

/// Does some subsegment of an edge of `p` run strictly inside `q`?
fn edge_passes_inside(p: &[Point2], q: &[Point2]) -> bool {
    let np = p.len();
    let nq = q.len();
    let d = p[0].x.field_d();
    let zero = QScalar::zero(d);
    let one = QScalar::one(d);
    let two = QScalar::from_int(2, d);
    for i in 0..np {
        let a = &p[i];
        let b = &p[(i + 1) % np];
        let ab = b.sub(a);
        if ab.x.is_zero() && ab.y.is_zero() {
            continue;
        }
        let mut params: Vec<QScalar> = vec![zero.clone(), one.clone()];
        for j in 0..nq {
            let c = &q[j];
            let e = &q[(j + 1) % nq];
            let ce = e.sub(c);
            let denom = ab.cross(&ce);
            if denom.is_zero() {
                // parallel; collinear overlap contributes the projections
                if ab.cross(&c.sub(a)).is_zero() {
                    let n2 = ab.norm2();
                    for x in [c, e] {
                        let t = ab.dot(&x.sub(a)).checked_div(&n2).expect("nonzero edge");
                        if t > zero && t < one {
                            params.push(t);
                        }
                    }
                }
                continue;
            }
            // intersection parameter of line a+t·ab with segment c..e
            let t = c.sub(a).cross(&ce).checked_div(&denom).expect("denom nonzero");
            let u = c.sub(a).cross(&ab).checked_div(&denom).expect("denom nonzero");
            if t > zero && t < one && u >= zero && u <= one {
                params.push(t);
            }
        }
        params.sort();
        params.dedup();
        for w in params.windows(2) {
            let mid = (&w[0] + &w[1]).checked_div(&two).expect("two nonzero");
            let point = Point2::new(&a.x + &(&ab.x * &mid), &a.y + &(&ab.y * &mid));
            if point_strictly_inside(q, &point) {
                return true;
            }
        }
    }
    false
}

/// Every edge of `p` lies on the boundary of `q`.
fn boundary_subset(p: &[Point2], q: &[Point2]) -> bool {
    let np = p.len();
    let d = p[0].x.field_d();
    let zero = QScalar::zero(d);
    let one = QScalar::one(d);
    let two = QScalar::from_int(2, d);
    for i in 0..np {
        let a = &p[i];
        let b = &p[(i + 1) % np];
        let ab = b.sub(a);
        if ab.x.is_zero() && ab.y.is_zero() {
            continue;
        }
        // split at q's vertices that sit on the open edge
        let mut params = vec![zero.clone(), one.clone()];
        let n2 = ab.norm2();
        for v in q {
            if ab.cross(&v.sub(a)).is_zero() {
                let t = ab.dot(&v.sub(a)).checked_div(&n2).expect("nonzero edge");
                if t > zero && t < one {
                    params.push(t);
                }
            }
        }
        params.sort();
        params.dedup();
        for w in params.windows(2) {
            let mid = (&w[0] + &w[1]).checked_div(&two).expect("two nonzero");
            let point = Point2::new(&a.x + &(&ab.x * &mid), &a.y + &(&ab.y * &mid));
            if !point_on_boundary(q, &point) {
                return false;
            }
        }
    }
    true
}

/// Face-to-face check over a whole generated patch: every interior edge is
/// shared, exactly and fully, by precisely two tiles; the leftovers must
/// tile the given outline (pass the scaled prototile outline for a
/// supertile).
pub fn patch_face_to_face(
    sys: &SubstitutionSystem,
    patch: &Patch,
    outline: &[Point2],
) -> Result<(), Vec<String>> {
    let polys: Vec<Vec<Point2>> = patch.tiles.iter().map(|t| t.polygon(sys)).collect();
    edges_partition_outline(&polys, outline)
}

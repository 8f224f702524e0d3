//! Substitution tiling systems: prototile alphabets, placed tiles, patches
//! and the substitution/supertile generators.

use crate::geom::{expand_about_origin, polygon_area2, GeomError, Isometry2, Point2, Rotation2};
use crate::scalar::QScalar;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TilingError {
    #[error("prototile id {0} is not in the alphabet")]
    UnknownPrototile(usize),
    #[error("supertile level {level} needs {needed} tiles, above the cap of {cap}")]
    ResourceCap { level: u32, needed: u64, cap: u64 },
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    Base,
    Reflected,
}

/// A polygon shape of the alphabet. Vertices are exact, counterclockwise,
/// and include any extra edge-subdivision vertices the substitution needs
/// for face-to-face matching.
#[derive(Clone, Debug)]
pub struct Prototile {
    pub id: usize,
    pub label: String,
    pub chirality: Chirality,
    pub vertices: Vec<Point2>,
}

impl Prototile {
    pub fn area2(&self) -> QScalar {
        polygon_area2(&self.vertices)
    }
}

/// A congruent copy of a prototile: the placed polygon is `pose` applied to
/// the prototile's vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlacedTile {
    pub proto: usize,
    pub pose: Isometry2,
}

impl PlacedTile {
    pub fn polygon(&self, sys: &SubstitutionSystem) -> Vec<Point2> {
        sys.alphabet[self.proto]
            .vertices
            .iter()
            .map(|v| self.pose.apply(v))
            .collect()
    }
}

/// A finite set of placed tiles, kept in a canonical sorted order so that
/// generation is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch {
    pub tiles: Vec<PlacedTile>,
    pub level_hint: Option<u32>,
}

impl Patch {
    pub fn new(mut tiles: Vec<PlacedTile>, level_hint: Option<u32>) -> Self {
        tiles.sort();
        Patch { tiles, level_hint }
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn transform(&self, g: &Isometry2) -> Patch {
        Patch::new(
            self.tiles
                .iter()
                .map(|t| PlacedTile {
                    proto: t.proto,
                    pose: g.compose(&t.pose),
                })
                .collect(),
            self.level_hint,
        )
    }

    pub fn type_counts(&self, sys: &SubstitutionSystem) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for t in &self.tiles {
            *m.entry(sys.alphabet[t.proto].label.clone()).or_insert(0) += 1;
        }
        m
    }

    pub fn distinct_orientations(&self) -> usize {
        let mut rots: Vec<&Rotation2> = self.tiles.iter().map(|t| &t.pose.rot).collect();
        rots.sort();
        rots.dedup();
        rots.len()
    }

    /// Exact pairwise interior-disjointness check (quadratic; patches from
    /// the generator satisfy it by construction, so this is on-demand).
    pub fn check_interiors_disjoint(&self, sys: &SubstitutionSystem) -> Result<(), (usize, usize)> {
        let polys: Vec<Vec<Point2>> = self.tiles.iter().map(|t| t.polygon(sys)).collect();
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                if crate::validate::interiors_overlap(&polys[i], &polys[j]) {
                    return Err((i, j));
                }
            }
        }
        Ok(())
    }
}

/// One child placement of a substitution rule: the pose positions the child
/// prototile inside the `|φ|`-scaled parent.
#[derive(Clone, Debug)]
pub struct ChildPlacement {
    pub child: usize,
    pub pose: Isometry2,
}

/// Alphabet plus substitution rule `φ` with expansion `|φ| > 1`.
#[derive(Clone, Debug)]
pub struct SubstitutionSystem {
    pub field_d: u32,
    pub expansion: QScalar,
    pub alphabet: Vec<Prototile>,
    /// `children[p]` are the replacements of prototile `p`.
    pub children: Vec<Vec<ChildPlacement>>,
}

impl SubstitutionSystem {
    pub fn prototile(&self, id: usize) -> Result<&Prototile, TilingError> {
        self.alphabet.get(id).ok_or(TilingError::UnknownPrototile(id))
    }

    /// Squared expansion factor (rational for the bundled systems).
    pub fn expansion_sq(&self) -> QScalar {
        &self.expansion * &self.expansion
    }

    /// Replace every tile by its children under the conjugated pose.
    pub fn substitute(&self, patch: &Patch) -> Result<Patch, TilingError> {
        let mut out = Vec::with_capacity(patch.tiles.len() * 4);
        for tile in &patch.tiles {
            let rule = self
                .children
                .get(tile.proto)
                .ok_or(TilingError::UnknownPrototile(tile.proto))?;
            let expanded = expand_about_origin(&tile.pose, &self.expansion);
            for child in rule {
                out.push(PlacedTile {
                    proto: child.child,
                    pose: expanded.compose(&child.pose),
                });
            }
        }
        Ok(Patch::new(out, patch.level_hint.map(|n| n + 1)))
    }

    /// The level-`n` supertile `φⁿa`, anchored with the prototile's first
    /// vertex at the origin at every level.
    pub fn supertile(&self, proto: usize, n: u32, cap: u64) -> Result<Patch, TilingError> {
        self.prototile(proto)?;
        let branching = self.children.iter().map(|c| c.len() as u64).max().unwrap_or(1);
        let mut needed: u64 = 1;
        for _ in 0..n {
            needed = needed.saturating_mul(branching);
        }
        if needed > cap {
            return Err(TilingError::ResourceCap { level: n, needed, cap });
        }
        let mut patch = Patch::new(
            vec![PlacedTile {
                proto,
                pose: Isometry2::identity(self.field_d),
            }],
            Some(0),
        );
        for _ in 0..n {
            patch = self.substitute(&patch)?;
        }
        Ok(patch)
    }

    /// Orientation automaton: the set of (prototile, rotation) pairs reachable
    /// from `(proto, identity)` in exactly `n` substitution steps. Translations
    /// are dropped, which is enough for parallelism questions.
    pub fn orientation_set(&self, proto: usize, n: u32) -> Result<Vec<(usize, Rotation2)>, TilingError> {
        self.prototile(proto)?;
        let mut cur: Vec<(usize, Rotation2)> = vec![(proto, Rotation2::identity(self.field_d))];
        for _ in 0..n {
            let mut next: Vec<(usize, Rotation2)> = Vec::new();
            for (p, r) in &cur {
                for child in &self.children[*p] {
                    next.push((child.child, r.compose(&child.pose.rot)));
                }
            }
            next.sort();
            next.dedup();
            cur = next;
        }
        Ok(cur)
    }
}

pub const DEFAULT_TILE_CAP: u64 = 2_000_000;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::builtin_system;

    #[test]
    fn supertile_counts_grow_by_child_count() {
        let sys = builtin_system("pinwheel").unwrap();
        for n in 0..=4u32 {
            let st = sys.supertile(0, n, DEFAULT_TILE_CAP).unwrap();
            assert_eq!(st.len(), 5usize.pow(n));
        }
        let var = builtin_system("pinwheel_variant").unwrap();
        for n in 0..=2u32 {
            assert_eq!(var.supertile(0, n, DEFAULT_TILE_CAP).unwrap().len(), 10usize.pow(n));
        }
    }

    #[test]
    fn level_zero_is_the_prototile() {
        let sys = builtin_system("pinwheel").unwrap();
        let st = sys.supertile(1, 0, DEFAULT_TILE_CAP).unwrap();
        assert_eq!(st.len(), 1);
        assert_eq!(st.tiles[0].proto, 1);
        assert!(st.tiles[0].pose.is_identity());
    }

    #[test]
    fn resource_cap_guards_generation() {
        let sys = builtin_system("pinwheel").unwrap();
        let err = sys.supertile(0, 10, 1000).unwrap_err();
        assert!(matches!(err, TilingError::ResourceCap { .. }));
    }

    #[test]
    fn substitution_is_deterministic_and_equivariant() {
        let sys = builtin_system("pinwheel").unwrap();
        let st = sys.supertile(0, 3, DEFAULT_TILE_CAP).unwrap();
        let again = sys.supertile(0, 3, DEFAULT_TILE_CAP).unwrap();
        assert_eq!(st, again);

        // substitute(T^g x) = T^{φ(g)} substitute(x), exactly
        let g = Isometry2 {
            rot: Rotation2::new(
                QScalar::from_ratio(3, 5, 5),
                QScalar::from_ratio(-4, 5, 5),
            )
            .unwrap(),
            reflect: false,
            trans: Point2::new(QScalar::from_ratio(7, 3, 5), QScalar::sqrt_d(5)),
        };
        let lhs = sys.substitute(&st.transform(&g)).unwrap();
        let phi_g = expand_about_origin(&g, &sys.expansion);
        let rhs = sys.substitute(&st).unwrap().transform(&phi_g);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn generated_patches_have_disjoint_interiors() {
        let sys = builtin_system("pinwheel").unwrap();
        let st = sys.supertile(0, 2, DEFAULT_TILE_CAP).unwrap();
        st.check_interiors_disjoint(&sys).unwrap();
        // duplicating a tile makes the check fail
        let mut tiles = st.tiles.clone();
        tiles.push(tiles[0].clone());
        let bad = Patch::new(tiles, None);
        assert!(bad.check_interiors_disjoint(&sys).is_err());
    }

    #[test]
    fn unknown_prototile_is_reported() {
        let sys = builtin_system("pinwheel").unwrap();
        let bogus = Patch::new(
            vec![PlacedTile {
                proto: 7,
                pose: Isometry2::identity(5),
            }],
            None,
        );
        assert!(matches!(
            sys.substitute(&bogus),
            Err(TilingError::UnknownPrototile(7))
        ));
    }
}

//! The finite-horizon tiling metric and the contraction of disagreements
//! under substitution.
//!
//!     cargo run --example tiling_metric

use subtile::geom::{Isometry2, Point2, Rotation2};
use subtile::metric::{centered_supertile, contraction_check, tiling_distance};
use subtile::rules::builtin_system;
use subtile::scalar::QScalar;
use subtile::tiling::Patch;

fn main() {
    let sys = builtin_system("pinwheel").unwrap();
    let x = centered_supertile(&sys, 0, 3).unwrap();

    // identical patches
    let report = tiling_distance(&sys, &x, &x, 2, 1e-9).unwrap();
    println!("d(x, x):\n{report}\n");

    // a small exact translation
    let shift = Isometry2 {
        rot: Rotation2::identity(5),
        reflect: false,
        trans: Point2::new(QScalar::from_ratio(1, 20, 5), QScalar::zero(5)),
    };
    let y = x.transform(&shift);
    let report = tiling_distance(&sys, &x, &y, 2, 1e-6).unwrap();
    println!("d(x, x shifted by 1/20):\n{report}\n");

    // disagreement far from the origin contracts outward by |φ| per step:
    // spin the farthest tile about its own anchor vertex
    let mut tiles = x.tiles.clone();
    let far = tiles
        .iter()
        .enumerate()
        .max_by(|(_, s), (_, t)| s.pose.trans.norm2().cmp(&t.pose.trans.norm2()))
        .map(|(i, _)| i)
        .unwrap();
    let pivot = tiles[far].pose.trans.clone();
    let half = Rotation2::half_turn(5);
    let spin = Isometry2 {
        rot: half.clone(),
        reflect: false,
        trans: Point2::new(&pivot.x - &half.apply(&pivot).x, &pivot.y - &half.apply(&pivot).y),
    };
    tiles[far].pose = spin.compose(&tiles[far].pose);
    let z = Patch::new(tiles, None);
    let report = contraction_check(&sys, &x, &z, 3, 1, 1e-6).unwrap();
    print!("{report}");
}

//! Watch the group of relative orientations grow with the supertile level
//! and decompose over the basis {quarter turn, ρ = rot(3/5, 4/5)}.
//!
//!     cargo run --example orientation_group

use subtile::orient::{group_descriptor, pairwise_orientations, relative_orientations};
use subtile::rules::builtin_system;
use subtile::tiling::DEFAULT_TILE_CAP;

fn main() {
    let sys = builtin_system("pinwheel").unwrap();
    for level in 0..=6u32 {
        let st = sys.supertile(0, level, DEFAULT_TILE_CAP).unwrap();
        let anchored = relative_orientations(&st, 0, None).unwrap();
        let pairwise = pairwise_orientations(&st, 0).unwrap();
        let descriptor = group_descriptor(&pairwise);
        print!(
            "level {level}: {:5} tiles, {:2} anchored orientations, {:2} pairwise",
            st.len(),
            anchored.rotations.len(),
            pairwise.len()
        );
        match &descriptor.lattice {
            Some(l) => println!(", lattice {l}"),
            None => println!(", {} rotations undecomposed", descriptor.undecomposed.len()),
        }
    }

    // every pairwise orientation at level 4, with its exact coordinates
    let st = sys.supertile(0, 4, DEFAULT_TILE_CAP).unwrap();
    let descriptor = group_descriptor(&pairwise_orientations(&st, 0).unwrap());
    println!("\nlevel-4 elements as (quarter-turn exponent, ρ exponent):");
    for e in &descriptor.elements {
        let (k, m) = e.coords.expect("pinwheel rotations all decompose");
        println!("  rot({}, {}) = i^{k} ρ^{m}  [{}]", e.cos, e.sin, e.angle_class);
    }
}

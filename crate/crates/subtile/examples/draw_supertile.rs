//! Generate supertiles and write SVG figures.
//!
//!     cargo run --example draw_supertile
//!
//! Writes `pinwheel_level4.svg` and `variant_level2.svg` into the current
//! directory.

use subtile::rules::builtin_system;
use subtile::svg::{render_svg, RenderSpec};
use subtile::tiling::DEFAULT_TILE_CAP;

fn main() {
    let jobs = [("pinwheel", 4u32, "pinwheel_level4.svg"), ("pinwheel_variant", 2, "variant_level2.svg")];
    for (name, level, path) in jobs {
        let sys = builtin_system(name).unwrap();
        let st = sys.supertile(0, level, DEFAULT_TILE_CAP).unwrap();
        let svg = render_svg(&sys, &st, &RenderSpec::default());
        std::fs::write(path, svg).unwrap();
        println!(
            "{name} level {level}: {} tiles, {} distinct orientations -> {path}",
            st.len(),
            st.distinct_orientations()
        );
    }
}

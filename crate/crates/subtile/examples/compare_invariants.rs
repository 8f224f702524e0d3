//! Compare the orientation invariants of the pinwheel and its 1-3-√10
//! variant, including the exact relation between the generators usually
//! quoted for the two systems.
//!
//!     cargo run --example compare_invariants

use subtile::orient::compare_systems;
use subtile::rules::builtin_system;
use subtile::tiling::DEFAULT_TILE_CAP;

fn main() {
    let pin = builtin_system("pinwheel").unwrap();
    let var = builtin_system("pinwheel_variant").unwrap();
    let cmp = compare_systems(&pin, &var, "pinwheel", "variant", 5, DEFAULT_TILE_CAP).unwrap();
    print!("{cmp}");
    println!();
    println!("machine-readable block:");
    println!("{}", serde_json::to_string_pretty(&cmp).unwrap());
}

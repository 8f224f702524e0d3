//! Validate the bundled substitution rules and show how a broken rule is
//! reported.
//!
//!     cargo run --example validate_rules

use subtile::rules::{builtin_system, BUILTIN_PINWHEEL};
use subtile::scalar::QScalar;
use subtile::validate::{validate_rule, ValidateOptions};

fn main() {
    for name in ["pinwheel", "pinwheel_variant"] {
        let sys = builtin_system(name).unwrap();
        let report = validate_rule(&sys, &ValidateOptions::default());
        println!("=== {name} ===");
        print!("{report}");
        println!();
    }

    // corrupt a child placement and watch the partition condition fail
    let mut broken = subtile::rules::load_system_unvalidated(BUILTIN_PINWHEEL).unwrap();
    let shift = QScalar::from_ratio(1, 7, 5);
    broken.children[0][2].pose.trans.x = &broken.children[0][2].pose.trans.x + &shift;
    let report = validate_rule(&broken, &ValidateOptions::default());
    println!("=== pinwheel with one child shifted by 1/7 ===");
    print!("{report}");
    assert!(!report.passed());
}

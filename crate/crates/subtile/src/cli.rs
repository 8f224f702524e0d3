//! Command-line front end. Every command prints a human-readable report
//! followed by a machine-readable JSON block, and is deterministic for
//! identical invocations.
//!
//! Exit codes: 0 success, 1 validation/verdict failure, 2 usage error,
//! 3 resource cap exceeded.

use crate::geom::{Isometry2, Point2, Rotation2};
use crate::gpq;
use crate::metric;
use crate::orient;
use crate::rules;
use crate::scalar::QScalar;
use crate::svg::{render_svg, RenderSpec};
use crate::tiling::{Patch, SubstitutionSystem, TilingError, DEFAULT_TILE_CAP};
use crate::validate::{validate_rule, ValidateOptions};
use clap::{Parser, Subcommand};
use serde_json::json;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "subtile",
    version,
    about = "Exact substitution-tiling engine: rule validation, supertile rendering, orientation groups, G(p,q) calculus, tiling metric"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a substitution rule file against the defining conditions
    Validate {
        /// rule file path, or a bundled rule name (pinwheel, pinwheel_variant)
        rule: String,
        /// highest substitution power searched for the parallel-recurrence
        /// condition
        #[arg(long, default_value_t = 8)]
        recurrence_cap: u32,
    },
    /// Generate a supertile and write an SVG figure plus a stats block
    Gen {
        rule: String,
        #[arg(long)]
        proto: usize,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TILE_CAP)]
        cap: u64,
        #[arg(long, default_value_t = 0.04)]
        stroke_width: f64,
    },
    /// Compute relative orientations and the group descriptor
    Orient {
        rule: String,
        #[arg(long)]
        proto: usize,
        #[arg(long)]
        level: u32,
        /// second rule file: also compare the two systems' invariants
        #[arg(long)]
        compare: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TILE_CAP)]
        cap: u64,
    },
    /// Rotation-group computations for G(p,q)
    Gpq {
        #[command(subcommand)]
        command: GpqCommand,
    },
    /// Finite-horizon tiling distance between two patches
    Distance {
        rule: String,
        /// patch spec: `supertile:<proto>:<level>[:transform=rot(ca/cb,sa/sb),t=(x,y)]`
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        nmax: u32,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum GpqCommand {
    /// Exact order of a word (syntax: `a^3 b^-1 a`; generators act as
    /// rotations by 2π/p about x and 2π/q about y)
    Order { word: String, p: u64, q: u64 },
    /// The set of orders of finite-order elements
    Spectrum { p: u64, q: u64 },
    /// Order-spectrum obstruction to conjugacy/c-equivalence
    Obstruction { p: u64, q: u64, p2: u64, q2: u64 },
    /// Evaluate the presentation's relators in the matrix representation
    #[command(name = "check-relations")]
    CheckRelations { p: u64, q: u64 },
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Validate {
            rule,
            recurrence_cap,
        } => cmd_validate(&rule, recurrence_cap),
        Command::Gen {
            rule,
            proto,
            level,
            out,
            cap,
            stroke_width,
        } => cmd_gen(&rule, proto, level, &out, cap, stroke_width),
        Command::Orient {
            rule,
            proto,
            level,
            compare,
            cap,
        } => cmd_orient(&rule, proto, level, compare.as_deref(), cap),
        Command::Gpq { command } => cmd_gpq(command),
        Command::Distance {
            rule,
            left,
            right,
            nmax,
            tol,
        } => cmd_distance(&rule, &left, &right, nmax, tol),
    }
}

fn load(rule: &str) -> Result<SubstitutionSystem, i32> {
    let text = rules::resolve_rule_text(rule).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })?;
    rules::load_system_unvalidated(&text).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })
}

fn cmd_validate(rule: &str, recurrence_cap: u32) -> i32 {
    let sys = match load(rule) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let report = validate_rule(
        &sys,
        &ValidateOptions {
            parallel_cap: recurrence_cap,
        },
    );
    print!("{report}");
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERDICT
    }
}

fn resource_code(err: &TilingError) -> i32 {
    match err {
        TilingError::ResourceCap { .. } => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

fn cmd_gen(rule: &str, proto: usize, level: u32, out: &PathBuf, cap: u64, stroke_width: f64) -> i32 {
    let sys = match load(rule) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let st = match sys.supertile(proto, level, cap) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return resource_code(&e);
        }
    };
    let spec = RenderSpec {
        stroke_width,
        ..RenderSpec::default()
    };
    let svg = render_svg(&sys, &st, &spec);
    if let Err(e) = std::fs::write(out, svg) {
        eprintln!("error: cannot write {}: {e}", out.display());
        return EXIT_USAGE;
    }
    let stats = json!({
        "rule": rule,
        "proto": proto,
        "level": level,
        "tiles": st.len(),
        "per_type": st.type_counts(&sys),
        "distinct_orientations": st.distinct_orientations(),
        "svg": out.display().to_string(),
    });
    println!("{}", serde_json::to_string_pretty(&stats).unwrap());
    EXIT_OK
}

fn cmd_orient(rule: &str, proto: usize, level: u32, compare: Option<&str>, cap: u64) -> i32 {
    let sys = match load(rule) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let st = match sys.supertile(proto, level, cap) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return resource_code(&e);
        }
    };
    let set = match orient::relative_orientations(&st, proto, None) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let pairwise = orient::pairwise_orientations(&st, proto).expect("type exists");
    let descriptor = orient::group_descriptor(&pairwise);
    println!(
        "type {proto} at level {level}: {} tiles, {} distinct relative orientations (anchored), {} pairwise",
        st.len(),
        set.rotations.len(),
        pairwise.len()
    );
    println!("torsion order: {}", descriptor.torsion_order);
    match &descriptor.lattice {
        Some(l) => println!("basis decomposition over {{quarter turn, ρ = rot(3/5, 4/5)}}: lattice {l}"),
        None => println!(
            "{} rotations do not decompose over the basis",
            descriptor.undecomposed.len()
        ),
    }
    let mut payload = json!({
        "rule": rule,
        "proto": proto,
        "level": level,
        "anchored_set_size": set.rotations.len(),
        "descriptor": descriptor,
    });
    let mut exit = EXIT_OK;
    if let Some(other) = compare {
        let sys2 = match load(other) {
            Ok(s) => s,
            Err(code) => return code,
        };
        match orient::compare_systems(&sys, &sys2, rule, other, level, cap) {
            Ok(cmp) => {
                print!("{cmp}");
                payload["comparison"] = serde_json::to_value(&cmp).unwrap();
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit = EXIT_USAGE;
            }
        }
    }
    println!("{}", serde_json::to_string_pretty(&payload).unwrap());
    exit
}

fn cmd_gpq(cmd: GpqCommand) -> i32 {
    match cmd {
        GpqCommand::Order { word, p, q } => {
            let w = match gpq::GWord::parse(&word) {
                Ok(w) => w,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let pres = match gpq::presentation(p, q) {
                Ok(pr) => pr,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let mapped = pres.map_input_word(&w);
            let result = gpq::order(&mapped, &pres);
            let nf = gpq::normal_form(&mapped, &pres);
            println!("order of `{w}` in G({p},{q}): {result}");
            println!("normal form over the normalized generators: {nf}");
            let payload = json!({
                "word": w.to_string(),
                "p": p, "q": q,
                "order": result.to_string(),
                "normal_form": nf.to_string(),
                "normalized_generators": [pres.alpha_order, pres.beta_order],
            });
            println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            EXIT_OK
        }
        GpqCommand::Spectrum { p, q } => match gpq::order_spectrum(p, q) {
            Ok(s) => {
                let list: Vec<u64> = s.into_iter().collect();
                println!(
                    "order spectrum of G({p},{q}): {{{}}}",
                    list.iter()
                        .map(|n| n.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({"p": p, "q": q, "spectrum": list}))
                        .unwrap()
                );
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        GpqCommand::Obstruction { p, q, p2, q2 } => {
            match gpq::c_equivalence_obstruction((p, q), (p2, q2)) {
                Ok(ob) => {
                    match (ob.left_only_min, ob.right_only_min) {
                        (None, None) => println!(
                            "no obstruction found: identical order spectra (this does not prove c-equivalence)"
                        ),
                        _ => {
                            let mut ws = Vec::new();
                            if let Some(a) = ob.left_only_min {
                                ws.push(format!("{a} (realized only in G({p},{q}))"));
                            }
                            if let Some(b) = ob.right_only_min {
                                ws.push(format!("{b} (realized only in G({p2},{q2}))"));
                            }
                            println!("witness orders: {}", ws.join(", "));
                            println!("the two groups are not conjugate, indeed not c-equivalent");
                        }
                    }
                    println!("{}", serde_json::to_string_pretty(&ob).unwrap());
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_USAGE
                }
            }
        }
        GpqCommand::CheckRelations { p, q } => {
            let pres = match gpq::presentation(p, q) {
                Ok(pr) => pr,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let mut worst = 0.0f64;
            let mut rows = Vec::new();
            for r in &pres.relators {
                let m = gpq::to_matrix(r, pres.alpha_order, pres.beta_order);
                let d = gpq::matrix::dist_to_identity(&m);
                worst = worst.max(d);
                println!("relator {r}: matrix distance to identity {d:.3e}");
                rows.push(json!({"relator": r.to_string(), "distance": d}));
            }
            let ok = worst < 1e-9;
            println!(
                "{} (worst {worst:.3e}, tolerance 1e-9)",
                if ok { "all relators hold" } else { "RELATOR FAILURE" }
            );
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "p": p, "q": q,
                    "normalized": [pres.alpha_order, pres.beta_order],
                    "relators": rows,
                    "worst": worst,
                }))
                .unwrap()
            );
            if ok {
                EXIT_OK
            } else {
                EXIT_VERDICT
            }
        }
    }
}

/// Parse `supertile:<proto>:<level>[:transform=rot(ca/cb,sa/sb),t=(x,y)]`.
pub fn parse_patchspec(sys: &SubstitutionSystem, spec: &str) -> Result<Patch, String> {
    let parts: Vec<&str> = spec.splitn(4, ':').collect();
    if parts.len() < 3 || parts[0] != "supertile" {
        return Err(format!("bad patch spec `{spec}`"));
    }
    let proto: usize = parts[1].parse().map_err(|_| format!("bad proto `{}`", parts[1]))?;
    let level: u32 = parts[2].parse().map_err(|_| format!("bad level `{}`", parts[2]))?;
    let patch = sys
        .supertile(proto, level, DEFAULT_TILE_CAP)
        .map_err(|e| e.to_string())?;
    if parts.len() == 3 {
        return Ok(patch);
    }
    let d = sys.field_d;
    let mut rot = Rotation2::identity(d);
    let mut trans = Point2::origin(d);
    for piece in split_transform(parts[3])? {
        if let Some(body) = piece.strip_prefix("transform=rot(").and_then(|s| s.strip_suffix(')')) {
            let (c, s) = body
                .split_once(',')
                .ok_or_else(|| format!("bad rotation `{piece}`"))?;
            let c = QScalar::parse_rational(c.trim(), d).map_err(|e| e.to_string())?;
            let s = QScalar::parse_rational(s.trim(), d).map_err(|e| e.to_string())?;
            rot = Rotation2::new(c, s).map_err(|e| e.to_string())?;
        } else if let Some(body) = piece.strip_prefix("t=(").and_then(|s| s.strip_suffix(')')) {
            let (x, y) = body
                .split_once(',')
                .ok_or_else(|| format!("bad translation `{piece}`"))?;
            trans = Point2::new(
                QScalar::parse_rational(x.trim(), d).map_err(|e| e.to_string())?,
                QScalar::parse_rational(y.trim(), d).map_err(|e| e.to_string())?,
            );
        } else {
            return Err(format!("unrecognized transform component `{piece}`"));
        }
    }
    let g = Isometry2 {
        rot,
        reflect: false,
        trans,
    };
    Ok(patch.transform(&g))
}

/// Split the transform tail at commas that are not inside parentheses.
fn split_transform(tail: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in tail.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.checked_sub(1).ok_or("unbalanced parentheses")?;
                cur.push(ch);
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err("unbalanced parentheses".into());
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

fn cmd_distance(rule: &str, left: &str, right: &str, nmax: u32, tol: f64) -> i32 {
    let sys = match load(rule) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let lp = match parse_patchspec(&sys, left) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let rp = match parse_patchspec(&sys, right) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match metric::tiling_distance(&sys, &lp, &rp, nmax, tol) {
        Ok(report) => {
            println!("{report}");
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_VERDICT
        }
    }
}

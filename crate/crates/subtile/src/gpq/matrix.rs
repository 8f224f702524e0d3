//! Floating-point SO(3) matrices: the falsification oracle for the word
//! engines. Never used as ground truth for equality — only to contradict
//! (or fail to contradict) an exact verdict.

use super::{GWord, Gen, OrderResult};
use std::f64::consts::TAU;

pub type Mat3f = [[f64; 3]; 3];

pub const IDENTITY_F: Mat3f = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

pub fn mul(a: &Mat3f, b: &Mat3f) -> Mat3f {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = 0.0;
            for (k, row) in b.iter().enumerate() {
                acc += a[i][k] * row[j];
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn rot_x(theta: f64) -> Mat3f {
    let (s, c) = theta.sin_cos();
    [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]
}

pub fn rot_y(theta: f64) -> Mat3f {
    let (s, c) = theta.sin_cos();
    [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]
}

/// Max-entry distance to the identity.
pub fn dist_to_identity(m: &Mat3f) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v - target).abs());
        }
    }
    worst
}

pub fn eval_word(w: &GWord, p: u64, q: u64) -> Mat3f {
    let mut out = IDENTITY_F;
    for s in &w.0 {
        let m = match s.gen {
            Gen::A => rot_x(TAU * s.exp as f64 / p as f64),
            Gen::B => rot_y(TAU * s.exp as f64 / q as f64),
        };
        out = mul(&out, &m);
    }
    out
}

/// Outcome of checking an exact order verdict against matrix powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Consistent,
    /// the matrices contradict the verdict outright
    Falsified(String),
    /// the numeric evidence landed between the thresholds; logged, never
    /// silently passed
    Ambiguous(String),
}

pub struct OracleConfig {
    /// powers tried against an `Infinite` verdict
    pub max_power: u64,
    /// a power this close to the identity confirms finiteness
    pub tol_identity: f64,
    /// a power at least this far away is confirmed non-identity
    pub tol_separation: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_power: 1000,
            tol_identity: 1e-6,
            tol_separation: 1e-3,
        }
    }
}

/// Check an exact verdict against the floating representation
/// `a ↦ R_x^{2π/p}`, `b ↦ R_y^{2π/q}`.
pub fn check_order(
    w: &GWord,
    p: u64,
    q: u64,
    claimed: OrderResult,
    cfg: &OracleConfig,
) -> OracleOutcome {
    let m = eval_word(w, p, q);
    match claimed {
        OrderResult::Finite(n) => {
            let mut acc = IDENTITY_F;
            for k in 1..=n {
                acc = mul(&acc, &m);
                let d = dist_to_identity(&acc);
                if k < n {
                    if d < cfg.tol_identity {
                        return OracleOutcome::Falsified(format!(
                            "claimed order {n} but power {k} is within {d:.2e} of the identity"
                        ));
                    }
                    if d < cfg.tol_separation {
                        return OracleOutcome::Ambiguous(format!(
                            "power {k} sits at {d:.2e}, between the thresholds"
                        ));
                    }
                } else {
                    if d < cfg.tol_identity {
                        return OracleOutcome::Consistent;
                    }
                    if d > cfg.tol_separation {
                        return OracleOutcome::Falsified(format!(
                            "claimed order {n} but the n-th power is {d:.2e} from the identity"
                        ));
                    }
                    return OracleOutcome::Ambiguous(format!(
                        "n-th power at {d:.2e}, between the thresholds"
                    ));
                }
            }
            OracleOutcome::Consistent
        }
        OrderResult::Infinite => {
            let mut acc = IDENTITY_F;
            for k in 1..=cfg.max_power {
                acc = mul(&acc, &m);
                let d = dist_to_identity(&acc);
                if d < cfg.tol_identity {
                    return OracleOutcome::Falsified(format!(
                        "claimed infinite order but power {k} is within {d:.2e} of the identity"
                    ));
                }
                if d < cfg.tol_separation {
                    return OracleOutcome::Ambiguous(format!(
                        "power {k} sits at {d:.2e}, between the thresholds"
                    ));
                }
            }
            OracleOutcome::Consistent
        }
    }
}

//! Deterministic SVG rendering of patches. Exactness lives in the engine;
//! figures carry decimal approximations with 12 significant digits and are
//! byte-stable for identical inputs.

use crate::tiling::{Patch, SubstitutionSystem};

#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub stroke_width: f64,
    /// fill colors indexed by prototile id (wrapping)
    pub palette: Vec<String>,
    pub stroke: String,
    pub margin: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            stroke_width: 0.04,
            palette: vec![
                "#4e79a7".into(),
                "#f28e2b".into(),
                "#59a14f".into(),
                "#e15759".into(),
                "#b07aa1".into(),
                "#edc948".into(),
            ],
            stroke: "#1a1a1a".into(),
            margin: 0.5,
        }
    }
}

/// Format with 12 significant digits, trimming trailing zeros.
pub fn fmt_sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (11 - exp).clamp(0, 17) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" {
            "0".to_string()
        } else {
            t.to_string()
        }
    } else {
        s
    }
}

/// Render the patch as a standalone SVG document (y axis flipped so the
/// mathematical orientation reads upright).
pub fn render_svg(sys: &SubstitutionSystem, patch: &Patch, spec: &RenderSpec) -> String {
    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    let polys: Vec<(usize, Vec<[f64; 2]>)> = patch
        .tiles
        .iter()
        .map(|t| {
            let pts: Vec<[f64; 2]> = t
                .polygon(sys)
                .iter()
                .map(|p| {
                    let [x, y] = p.to_f64();
                    [x, -y]
                })
                .collect();
            for p in &pts {
                min_x = min_x.min(p[0]);
                max_x = max_x.max(p[0]);
                min_y = min_y.min(p[1]);
                max_y = max_y.max(p[1]);
            }
            (t.proto, pts)
        })
        .collect();
    if polys.is_empty() {
        min_x = 0.0;
        min_y = 0.0;
        max_x = 1.0;
        max_y = 1.0;
    }
    let m = spec.margin;
    let vb = format!(
        "{} {} {} {}",
        fmt_sig12(min_x - m),
        fmt_sig12(min_y - m),
        fmt_sig12(max_x - min_x + 2.0 * m),
        fmt_sig12(max_y - min_y + 2.0 * m)
    );
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{vb}\">\n"
    ));
    out.push_str(&format!(
        "<g stroke=\"{}\" stroke-width=\"{}\" stroke-linejoin=\"round\">\n",
        spec.stroke,
        fmt_sig12(spec.stroke_width)
    ));
    for (proto, pts) in &polys {
        let fill = &spec.palette[proto % spec.palette.len()];
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            d.push(if i == 0 { 'M' } else { 'L' });
            d.push_str(&fmt_sig12(p[0]));
            d.push(' ');
            d.push_str(&fmt_sig12(p[1]));
        }
        d.push('Z');
        out.push_str(&format!("<path fill=\"{fill}\" d=\"{d}\"/>\n"));
    }
    out.push_str("</g>\n</svg>\n");
    out
}

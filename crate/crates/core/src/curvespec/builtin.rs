use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{parse_curve, CurveModel};
use crate::error::{Error, Result};
use crate::frenet::is_good;

const NAMES: &[&str] = &[
    "unit_circle",
    "ellipse_2_1",
    "helix",
    "twisted_cubic",
    "sphere_curve_r3",
    "sphere_curve_r4",
    "trefoil_like",
    "random_poly_r4(seed)",
    "random_trig_r3(seed)",
];

/// Names accepted by [`builtin`]; seeded families are listed with a `(seed)` suffix.
pub fn builtin_names() -> &'static [&'static str] {
    NAMES
}

/// Probe grid and normalized-Gram margin used to reject seeded random fixtures.
const PROBE_SAMPLES: usize = 400;
const RANDOM_GOODNESS_MARGIN: f64 = 1e-4;
const MAX_DRAWS: usize = 1000;

pub fn builtin(name: &str) -> Result<CurveModel> {
    let name = name.trim();
    let source = match name {
        "unit_circle" => "x = cos(t); y = sin(t); domain [0, 2*pi]; periodic",
        "ellipse_2_1" => "x = 2*cos(t); y = sin(t); domain [0, 2*pi]; periodic",
        "helix" => "x = cos(t); y = sin(t); z = t; domain [0, 2*pi]",
        "twisted_cubic" => "x = t; y = t^2; z = t^3; domain [-1, 1]",
        "sphere_curve_r3" => {
            "x = cos(0.5*sin(2*t))*cos(t); y = cos(0.5*sin(2*t))*sin(t); \
             z = sin(0.5*sin(2*t)); domain [0, 2*pi]; periodic"
        }
        "sphere_curve_r4" => {
            "x = cos(t); y = sin(t); z = cos(2*t); w = sin(2*t); domain [0, 2*pi]; periodic"
        }
        "trefoil_like" => {
            "x = sin(t) + 2*sin(2*t); y = cos(t) - 2*cos(2*t); z = -sin(3*t); \
             domain [0, 2*pi]; periodic"
        }
        _ => {
            return match parse_seeded(name) {
                Some(("random_poly_r4", seed)) => random_poly_r4(seed),
                Some(("random_trig_r3", seed)) => random_trig_r3(seed),
                _ => Err(Error::UnknownBuiltin(name.to_string())),
            }
        }
    };
    Ok(parse_curve(source)?.with_label(name))
}

/// Accepts `family`, `family(42)` and `family:42`.
fn parse_seeded(name: &str) -> Option<(&str, u64)> {
    for family in ["random_poly_r4", "random_trig_r3"] {
        let Some(rest) = name.strip_prefix(family) else {
            continue;
        };
        if rest.is_empty() {
            return Some((family, 0));
        }
        let digits = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| rest.strip_prefix(':'))?;
        return digits.trim().parse().ok().map(|seed| (family, seed));
    }
    None
}

fn random_poly_r4(seed: u64) -> Result<CurveModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_DRAWS {
        let comps: Vec<String> = (0..4)
            .map(|_| {
                let coeffs: Vec<f64> = (0..=6).map(|_| rng.random_range(-1.0..1.0)).collect();
                polynomial_source(&coeffs)
            })
            .collect();
        let source = format!(
            "x = {}; y = {}; z = {}; w = {}; domain [-1, 1]",
            comps[0], comps[1], comps[2], comps[3]
        );
        let model = parse_curve(&source)?.with_label(format!("random_poly_r4({seed})"));
        if probe_good(&model)? {
            return Ok(model);
        }
    }
    Err(Error::NotGoodCurve(0.0))
}

fn random_trig_r3(seed: u64) -> Result<CurveModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_DRAWS {
        let comps: Vec<String> = (0..3)
            .map(|_| {
                let terms: Vec<String> = (1..=3)
                    .map(|k| {
                        let a: f64 = rng.random_range(-1.0..1.0) / k as f64;
                        let b: f64 = rng.random_range(-1.0..1.0) / k as f64;
                        format!("{}*cos({k}*t) + {}*sin({k}*t)", literal(a), literal(b))
                    })
                    .collect();
                terms.join(" + ")
            })
            .collect();
        let source = format!(
            "x = {}; y = {}; z = {}; domain [0, 2*pi]; periodic",
            comps[0], comps[1], comps[2]
        );
        let model = parse_curve(&source)?.with_label(format!("random_trig_r3({seed})"));
        if probe_good(&model)? {
            return Ok(model);
        }
    }
    Err(Error::NotGoodCurve(0.0))
}

fn literal(v: f64) -> String {
    if v < 0.0 {
        format!("(-{:?})", -v)
    } else {
        format!("{v:?}")
    }
}

fn polynomial_source(coeffs: &[f64]) -> String {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| match k {
            0 => literal(c),
            1 => format!("{}*t", literal(c)),
            _ => format!("{}*t^{k}", literal(c)),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn probe_good(model: &CurveModel) -> Result<bool> {
    let (lo, hi) = model.domain();
    let m = model.m();
    for k in 0..PROBE_SAMPLES {
        let theta = lo + (hi - lo) * k as f64 / (PROBE_SAMPLES - 1) as f64;
        let v = model.eval_jet(theta, m + 1)?;
        let report = is_good(&v, m);
        if !report.is_good || report.min_gram_det < RANDOM_GOODNESS_MARGIN {
            return Ok(false);
        }
    }
    Ok(true)
}

//! Browser bindings for the polarquat demo page.
//!
//! Each exported function takes and returns JSON strings. The plain Rust
//! functions behind them are usable (and tested) without a browser.

use polarquat::phase_shifter::{
    full_ramp_phases, ramp_trajectory, residual, solve_angles, target_transform, Branch, BranchPolicy, ShifterProblem,
    Singularity, SINGULAR_TOLERANCE,
};
use polarquat::signal::{classical_from_jones, from_ellipse, from_jones, to_ellipse, to_jones};
use polarquat::{EllipseParams, JonesVector, Quaternion, UnitQuaternion};
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest ramp the page may request.
pub const MAX_SAMPLES: usize = 4096;

fn unit(name: &str, text: &str) -> Result<UnitQuaternion, String> {
    let q: Quaternion = text.parse().map_err(|e| format!("{name}: {e}"))?;
    UnitQuaternion::new(q).map_err(|e| format!("{name}: {e}"))
}

fn to_string(value: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn branch_label(b: Branch, singular: bool) -> &'static str {
    match b {
        _ if singular => "singular",
        Branch::One => "1",
        Branch::Two => "2",
        Branch::FamilyA => "family-a",
        Branch::FamilyB => "family-b",
    }
}

/// Every form of a signal given in `form` ("quat", "jones" or "ellipse").
pub fn signal_forms(form: &str, input: &str) -> Result<String, String> {
    let q = match form {
        "quat" => input.parse::<Quaternion>().map_err(|e| e.to_string())?,
        "jones" => from_jones(&serde_json::from_str::<JonesVector>(input).map_err(|e| e.to_string())?),
        "ellipse" => {
            let e: EllipseParams = serde_json::from_str(input).map_err(|e| e.to_string())?;
            from_ellipse(&e).map_err(|e| e.to_string())?
        }
        other => return Err(format!("unknown form {other:?}")),
    };
    if !q.is_finite() {
        return Err("signal must be finite".into());
    }
    let jones = to_jones(q);
    let ellipse = to_ellipse(q).map_err(|e| e.to_string())?;
    to_string(&json!({
        "quat": q,
        "jones": jones,
        "ellipse": ellipse,
        "stokes": classical_from_jones(&jones),
    }))
}

/// Waveplate angles for one phase, all solutions.
pub fn solve(q: &str, r: &str, phi: f64) -> Result<String, String> {
    if !phi.is_finite() {
        return Err("phi must be finite".into());
    }
    let prob = ShifterProblem {
        q: unit("q", q)?,
        r: unit("r", r)?,
        phi,
    };
    let p = target_transform(&prob);
    let set = solve_angles(&p, SINGULAR_TOLERANCE);
    let solutions: Vec<_> = set
        .representatives()
        .into_iter()
        .map(|(b, a)| json!({ "branch": branch_label(b, false), "angles": a, "residual": residual(&prob, &a) }))
        .collect();
    let classification = match set.singularity() {
        Singularity::RegularCase => "RegularCase",
        Singularity::SingularA => "SingularA",
        Singularity::SingularB => "SingularB",
    };
    to_string(&json!({ "target_p": p.quaternion(), "classification": classification, "solutions": solutions }))
}

/// A full 2π ramp as a JSON array of samples.
pub fn ramp(q: &str, r: &str, samples: usize, policy: &str) -> Result<String, String> {
    let (q, r) = (unit("q", q)?, unit("r", r)?);
    if !(2..=MAX_SAMPLES).contains(&samples) {
        return Err(format!("samples must be between 2 and {MAX_SAMPLES}"));
    }
    let policy = match policy {
        "continuous" => BranchPolicy::Continuous,
        "branch1" => BranchPolicy::Branch1,
        "branch2" => BranchPolicy::Branch2,
        other => return Err(format!("unknown policy {other:?}")),
    };
    let rows = ramp_trajectory(&q, &r, &full_ramp_phases(samples), policy, SINGULAR_TOLERANCE)
        .into_iter()
        .map(|s| {
            let e = to_ellipse(s.output).map_err(|e| e.to_string())?;
            Ok(json!({
                "phi": s.phi,
                "psi": s.angles.to_array(),
                "branch": branch_label(s.branch, s.singular),
                "step": s.step,
                "out_phase": e.phi,
                "out_theta": e.theta,
                "out_epsilon": e.epsilon,
                "residual": s.residual,
            }))
        })
        .collect::<Result<Vec<_>, String>>()?;
    to_string(&rows)
}

#[wasm_bindgen(js_name = signalForms)]
pub fn signal_forms_js(form: &str, input: &str) -> Result<String, JsValue> {
    signal_forms(form, input).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = solve)]
pub fn solve_js(q: &str, r: &str, phi: f64) -> Result<String, JsValue> {
    solve(q, r, phi).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = ramp)]
pub fn ramp_js(q: &str, r: &str, samples: usize, policy: &str) -> Result<String, JsValue> {
    ramp(q, r, samples, policy).map_err(|e| JsValue::from_str(&e))
}

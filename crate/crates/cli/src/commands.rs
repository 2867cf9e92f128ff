use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{anyhow, Context};
use polarquat::components::{compose_devices, propagate, Device};
use polarquat::phase_shifter::{
    full_ramp_phases, ramp_trajectory, residual, solve_angles, target_transform, Branch, BranchPolicy, ShifterProblem,
    Singularity, SolutionSet, WaveplateAngles, FAMILY_SAMPLES,
};
use polarquat::signal::{from_ellipse, from_jones, stokes, to_classical, to_ellipse, to_jones};
use polarquat::{ClassicalStokes, EllipseParams, JonesVector, Quaternion, UnitQuaternion};
use serde::Serialize;
use serde_json::json;

use crate::number::format_g;
use crate::{BranchArg, Failure, Form, PolicyArg};

const CSV_HEADER: [&str; 9] = [
    "phi",
    "psi_a",
    "psi_b",
    "psi_c",
    "branch",
    "out_phase",
    "out_theta",
    "out_epsilon",
    "residual",
];

fn parse_quat(text: &str) -> anyhow::Result<Quaternion> {
    text.parse::<Quaternion>()
        .with_context(|| format!("bad quaternion {text:?}"))
}

fn parse_unit(name: &str, text: &str) -> anyhow::Result<UnitQuaternion> {
    let q = parse_quat(text)?;
    UnitQuaternion::new(q).with_context(|| format!("--{name} must be a unit quaternion"))
}

fn print_json(value: &impl Serialize) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Failure::Io(e.into()))?;
    writeln!(out).map_err(|e| Failure::Io(e.into()))
}

pub fn convert(from: Form, to: Form, input: &str) -> Result<(), Failure> {
    if from == Form::Stokes {
        if to != Form::Stokes {
            return Err(Failure::Unrecoverable(
                "Stokes parameters carry no phase; only stokes -> stokes is possible".into(),
            ));
        }
        let s: ClassicalStokes = serde_json::from_str(input).context("bad Stokes JSON")?;
        if !s.to_array().iter().all(|x| x.is_finite()) {
            return Err(anyhow!("Stokes parameters must be finite").into());
        }
        return print_json(&s);
    }
    let q = match from {
        Form::Quat => parse_quat(input)?,
        Form::Jones => {
            let v: JonesVector = serde_json::from_str(input).context("bad Jones JSON")?;
            let q = from_jones(&v);
            if !q.is_finite() {
                return Err(anyhow!("Jones components must be finite").into());
            }
            q
        }
        Form::Ellipse => {
            let e: EllipseParams = serde_json::from_str(input).context("bad ellipse JSON")?;
            from_ellipse(&e)?
        }
        Form::Stokes => unreachable!(),
    };
    match to {
        Form::Quat => print_json(&q),
        Form::Jones => print_json(&to_jones(q)),
        Form::Ellipse => print_json(&to_ellipse(q)?),
        Form::Stokes => print_json(&to_classical(&stokes(q))),
    }
}

pub fn compose(devices: &str, input: Option<&str>) -> Result<(), Failure> {
    let devices: Vec<Device> = serde_json::from_str(devices).context("bad device JSON")?;
    if devices.is_empty() {
        return Err(anyhow!("device list is empty").into());
    }
    let plate = compose_devices(&devices)?.map(|w| w.quaternion());
    let output = match input {
        Some(text) => Some(propagate(parse_quat(text)?, &devices)?),
        None => None,
    };
    print_json(&json!({ "waveplate": plate, "output": output }))
}

fn branch_label(b: Branch) -> &'static str {
    match b {
        Branch::One => "1",
        Branch::Two => "2",
        Branch::FamilyA => "family-a",
        Branch::FamilyB => "family-b",
    }
}

#[derive(Serialize)]
struct SolutionRecord {
    branch: &'static str,
    psi_a: f64,
    psi_b: f64,
    psi_c: f64,
    residual: f64,
}

pub fn solve(q: &str, r: &str, phi: f64, branch: BranchArg, tol: f64, degrees: bool) -> Result<(), Failure> {
    let prob = ShifterProblem {
        q: parse_unit("q", q)?,
        r: parse_unit("r", r)?,
        phi,
    };
    if !phi.is_finite() || tol.is_nan() || tol < 0.0 {
        return Err(anyhow!("phi and tol must be finite, tol non-negative").into());
    }
    let p = target_transform(&prob);
    let set = solve_angles(&p, tol);
    let unit = |x: f64| if degrees { x.to_degrees() } else { x };
    let keep = |b: Branch| {
        !matches!(
            (branch, b),
            (BranchArg::One, Branch::Two) | (BranchArg::Two, Branch::One)
        )
    };
    let solutions: Vec<SolutionRecord> = set
        .representatives()
        .into_iter()
        .filter(|(b, _)| keep(*b))
        .map(|(b, a): (Branch, WaveplateAngles)| SolutionRecord {
            branch: branch_label(b),
            psi_a: unit(a.psi_a),
            psi_b: unit(a.psi_b),
            psi_c: unit(a.psi_c),
            residual: residual(&prob, &a),
        })
        .collect();
    let classification = match set.singularity() {
        Singularity::RegularCase => "RegularCase",
        Singularity::SingularA => "SingularA",
        Singularity::SingularB => "SingularB",
    };
    let mut report = json!({
        "target_p": p.quaternion(),
        "classification": classification,
        "angle_unit": if degrees { "deg" } else { "rad" },
        "solutions": solutions,
    });
    match set {
        SolutionSet::Regular { near_singular, .. } => report["near_singular"] = json!(near_singular),
        _ => report["family_samples"] = json!(FAMILY_SAMPLES),
    }
    print_json(&report)
}

pub fn ramp(
    q: &str,
    r: &str,
    samples: usize,
    out: &Path,
    policy: PolicyArg,
    tol: f64,
    degrees: bool,
) -> Result<(), Failure> {
    let (q, r) = (parse_unit("q", q)?, parse_unit("r", r)?);
    if samples < 2 {
        return Err(anyhow!("--samples must be at least 2").into());
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(anyhow!("--tol must be non-negative").into());
    }
    let policy = match policy {
        PolicyArg::Continuous => BranchPolicy::Continuous,
        PolicyArg::Branch1 => BranchPolicy::Branch1,
        PolicyArg::Branch2 => BranchPolicy::Branch2,
    };
    let trajectory = ramp_trajectory(&q, &r, &full_ramp_phases(samples), policy, tol);
    let angle = |x: f64| format_g(if degrees { x.to_degrees() } else { x }, 12);

    let mut rows = Vec::with_capacity(trajectory.len());
    for s in &trajectory {
        let e = to_ellipse(s.output)?;
        let branch = match s.branch {
            _ if s.singular => "singular",
            b => branch_label(b),
        };
        rows.push([
            angle(s.phi),
            angle(s.angles.psi_a),
            angle(s.angles.psi_b),
            angle(s.angles.psi_c),
            branch.to_string(),
            angle(e.phi),
            angle(e.theta),
            angle(e.epsilon),
            format_g(s.residual, 12),
        ]);
    }

    let file = File::create(out)
        .with_context(|| format!("cannot create {}", out.display()))
        .map_err(Failure::Io)?;
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    let io_err = |e: csv::Error| Failure::Io(anyhow::Error::new(e).context(format!("writing {}", out.display())));
    writer.write_record(CSV_HEADER).map_err(io_err)?;
    for row in &rows {
        writer.write_record(row).map_err(io_err)?;
    }
    writer.flush().map_err(|e| Failure::Io(e.into()))
}

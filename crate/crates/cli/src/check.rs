//! Self-check groups run by `polarquat check`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use polarquat::components::{apply, compose, hwp, polarizer_apply, qwp, waveplate_from_axis, PartialPolarizer};
use polarquat::phase_shifter::{
    full_ramp_phases, ramp_trajectory, singular_crossings, BranchPolicy, SINGULAR_TOLERANCE,
};
use polarquat::signal::{from_ellipse, from_jones, stokes, to_classical, to_ellipse, to_jones};
use polarquat::{Quaternion, UnitQuaternion};
use polarquat_oracle::{
    classical_stokes, jones_column, jones_max_abs_diff, matrix_to_quat, oracle_apply, oracle_polarizer, quat_to_matrix,
    Matrix2x2, SYMMETRY_TOLERANCE,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::Failure;

type GroupResult = Result<String, String>;
type Group = (&'static str, fn() -> GroupResult);

const TRIALS: usize = 1000;

fn fail_unless(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_quat(rng: &mut StdRng) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

fn random_unit(rng: &mut StdRng) -> UnitQuaternion {
    loop {
        if let Ok(u) = random_quat(rng).normalize() {
            if u.norm() > 0.0 {
                return u;
            }
        }
    }
}

fn unit(q: Quaternion) -> UnitQuaternion {
    UnitQuaternion::new(q).expect("unit literal")
}

fn product_table() -> GroupResult {
    let (o, i, j, k) = (Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K);
    let basis = [o, i, j, k];
    let table = [[o, i, j, k], [i, -o, k, -j], [j, -k, -o, i], [k, j, -i, -o]];
    for (a, row) in basis.iter().zip(table) {
        for (b, want) in basis.iter().zip(row) {
            fail_unless(*a * *b == want, || format!("{a} * {b} != {want}"))?;
        }
    }
    Ok("16 base products".into())
}

fn waveplate_values() -> GroupResult {
    let quarter = Quaternion::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0);
    let cases = [
        (
            waveplate_from_axis(&UnitQuaternion::ONE, FRAC_PI_4).quaternion(),
            quarter,
        ),
        (
            waveplate_from_axis(&UnitQuaternion::ONE, -FRAC_PI_4).quaternion(),
            quarter.conj(),
        ),
        (
            waveplate_from_axis(&UnitQuaternion::ONE, FRAC_PI_2).quaternion(),
            Quaternion::I,
        ),
        (
            compose(&[qwp(0.0), qwp(0.0)]).map_err(|e| e.to_string())?.quaternion(),
            Quaternion::I,
        ),
    ];
    for (got, want) in cases {
        fail_unless(got.max_abs_diff(want) <= 1e-15, || format!("{got} != {want}"))?;
    }
    Ok("waveplate quaternions".into())
}

fn signal_values() -> GroupResult {
    let signals = [
        Quaternion::ONE,
        Quaternion::I,
        Quaternion::J,
        Quaternion::K,
        Quaternion::new(1.0, 0.0, 1.0, 0.0),
        Quaternion::new(1.0, 0.0, 0.0, 1.0),
        Quaternion::new(1.0, 0.0, 0.0, -1.0),
    ];
    for q in signals {
        fail_unless(from_jones(&to_jones(q)) == q, || format!("{q}: Jones round trip"))?;
        let e = to_ellipse(q).map_err(|e| e.to_string())?;
        let back = from_ellipse(&e).map_err(|e| e.to_string())?;
        fail_unless(back.max_abs_diff(q) <= 1e-12, || {
            format!("{q}: ellipse round trip gave {back}")
        })?;
    }
    Ok("7 signals round-trip".into())
}

fn waveplate_class() -> GroupResult {
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..TRIALS {
        let w = compose(&[qwp(rng.gen_range(-PI..PI)), hwp(rng.gen_range(-PI..PI))]).map_err(|e| e.to_string())?;
        let m = quat_to_matrix(w.quaternion());
        fail_unless(m.is_waveplate_matrix(SYMMETRY_TOLERANCE), || {
            format!("{} breaks symmetry", w.quaternion())
        })?;
        fail_unless((m.det() - 1.0).norm() <= 1e-12, || format!("det {}", m.det()))?;
    }
    let projector = Matrix2x2::new(Complex64::new(1.0, 0.0), 0.0.into(), 0.0.into(), 0.0.into());
    fail_unless(matrix_to_quat(&projector).is_err(), || {
        "projector accepted as a waveplate".into()
    })?;
    Ok(format!("{TRIALS} composed plates, projector rejected"))
}

fn oracle_differential() -> GroupResult {
    let mut rng = StdRng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..TRIALS {
        let (p, q) = (random_quat(&mut rng), random_quat(&mut rng));
        worst = worst.max(quat_to_matrix(p * q).max_abs_diff(&(quat_to_matrix(q) * quat_to_matrix(p))));
        fail_unless(jones_column(q) == to_jones(q), || format!("jones column of {q}"))?;

        let w = waveplate_from_axis(&random_unit(&mut rng), rng.gen_range(-PI..PI));
        let v = to_jones(q);
        worst = worst.max(jones_max_abs_diff(&oracle_apply(&v, &w), &to_jones(apply(q, &w))));

        let pol = PartialPolarizer::new(random_unit(&mut rng), rng.gen_range(0.0..=1.0)).map_err(|e| e.to_string())?;
        let quat_path = polarizer_apply(q, &pol).map_err(|e| e.to_string())?;
        worst = worst.max(jones_max_abs_diff(&oracle_polarizer(&v, &pol), &to_jones(quat_path)));

        let s = to_classical(&stokes(q)).to_array();
        let c = classical_stokes(&v);
        worst = (0..3).fold(worst, |acc, n| acc.max((s[n] - c[n]).abs()));
    }
    fail_unless(worst <= 1e-12, || format!("worst disagreement {worst:e}"))?;
    Ok(format!("{TRIALS} trials, worst disagreement {worst:.1e}"))
}

fn wrap(x: f64) -> f64 {
    (x + PI).rem_euclid(TAU) - PI
}

fn steady_ramp() -> GroupResult {
    let q = unit(Quaternion::new(-8. / 9., 2. / 9., 1. / 3., 2. / 9.));
    let r = unit(Quaternion::new(2. / 7., -3. / 7., 0., -6. / 7.));
    let ramp = ramp_trajectory(
        &q,
        &r,
        &full_ramp_phases(256),
        BranchPolicy::Continuous,
        SINGULAR_TOLERANCE,
    );
    let first = to_ellipse(ramp[0].output).map_err(|e| e.to_string())?;
    let mut drift = 0.0f64;
    for s in &ramp {
        fail_unless(s.residual <= 1e-9, || {
            format!("residual {:e} at phi={}", s.residual, s.phi)
        })?;
        let e = to_ellipse(s.output).map_err(|e| e.to_string())?;
        drift = drift.max((e.epsilon - first.epsilon).abs());
        drift = drift.max(wrap(e.phi - first.phi - s.phi).abs());
    }
    fail_unless(drift <= 1e-8, || format!("SOP or phase drift {drift:e}"))?;
    Ok(format!("256 samples, drift {drift:.1e}"))
}

fn crossing_ramp() -> GroupResult {
    let q = unit(Quaternion::new(-5. / 6., 1. / 6., 0.5, 1. / 6.));
    let r = unit(Quaternion::new(1. / 3., -2. / 3., 0., -2. / 3.));
    let ramp = ramp_trajectory(
        &q,
        &r,
        &full_ramp_phases(256),
        BranchPolicy::Branch1,
        SINGULAR_TOLERANCE,
    );
    let crossings = singular_crossings(&ramp);
    fail_unless(crossings.len() == 2, || {
        format!("{} singular crossings", crossings.len())
    })?;
    for &k in &crossings {
        fail_unless((ramp[k].step - FRAC_PI_2).abs() <= 0.1, || {
            format!("step {}", ramp[k].step)
        })?;
    }
    fail_unless(ramp.iter().all(|s| s.residual <= 1e-9), || "residual above 1e-9".into())?;
    Ok("2 singular crossings with quarter-turn steps".into())
}

pub fn run() -> Result<(), Failure> {
    let groups: [Group; 7] = [
        ("product-table", product_table),
        ("waveplate-values", waveplate_values),
        ("signal-values", signal_values),
        ("eq4-symmetry", waveplate_class),
        ("oracle-differential", oracle_differential),
        ("fig5-ramp", steady_ramp),
        ("fig7-ramp", crossing_ramp),
    ];
    let mut failed = 0;
    for (name, group) in groups {
        match group() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed == 0 {
        println!("all {} groups passed", groups.len());
        Ok(())
    } else {
        println!("{failed} of {} groups failed", groups.len());
        Err(Failure::Check)
    }
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

// `ensure!(x <= tol)` must also fail when x is NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use num_complex::Complex64;
use polarquat::components::{
    apply, compose, hwp, polarizer_apply, polarizer_apply_conjugate_form, qwp, waveplate_from_axis, PartialPolarizer,
    Waveplate,
};
use polarquat::phase_shifter::{
    forward_transform, full_ramp_phases, ramp_trajectory, singular_crossings, solve_angles, BranchPolicy, Singularity,
    SolutionSet, TargetTransform, FAMILY_SAMPLES, SINGULAR_TOLERANCE,
};
use polarquat::quat::exp_axis;
use polarquat::signal::{
    apply_phase, classify_orthogonality, from_ellipse, from_jones, orthogonal_sop, stokes, to_classical, to_ellipse,
    to_jones, OrthogonalityClass, ORTHOGONALITY_TOLERANCE,
};
use polarquat::{Axis, JonesVector, Quaternion, UnitQuaternion};
use polarquat_oracle::{
    classical_stokes, jones_column, jones_max_abs_diff, oracle_apply, oracle_polarizer, quat_to_matrix,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, TAU};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn random_quat(rng: &mut StdRng) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
    )
}

fn random_unit(rng: &mut StdRng) -> UnitQuaternion {
    loop {
        let q = random_quat(rng);
        if q.norm() > 1e-2 {
            return q.normalize().unwrap();
        }
    }
}

fn unit(q: Quaternion) -> UnitQuaternion {
    UnitQuaternion::new(q).unwrap()
}

fn regular_pair() -> (UnitQuaternion, UnitQuaternion) {
    (
        unit(Quaternion::new(-8. / 9., 2. / 9., 1. / 3., 2. / 9.)),
        unit(Quaternion::new(2. / 7., -3. / 7., 0., -6. / 7.)),
    )
}

fn crossing_pair() -> (UnitQuaternion, UnitQuaternion) {
    (
        unit(Quaternion::new(-5. / 6., 1. / 6., 0.5, 1. / 6.)),
        unit(Quaternion::new(1. / 3., -2. / 3., 0., -2. / 3.)),
    )
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

fn rodrigues(axis: [f64; 3], angle: f64, v: [f64; 3]) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    let kxv = [
        axis[1] * v[2] - axis[2] * v[1],
        axis[2] * v[0] - axis[0] * v[2],
        axis[0] * v[1] - axis[1] * v[0],
    ];
    let kdv = axis[0] * v[0] + axis[1] * v[1] + axis[2] * v[2];
    [0, 1, 2].map(|n| v[n] * c + kxv[n] * s + axis[n] * kdv * (1.0 - c))
}

fn base_algebra() -> Outcome {
    let (o, i, j, k) = (Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K);
    let basis = [o, i, j, k];
    let table = [[o, i, j, k], [i, -o, k, -j], [j, -k, -o, i], [k, j, -i, -o]];
    for (a, row) in basis.iter().zip(table) {
        for (b, want) in basis.iter().zip(row) {
            ensure!(*a * *b == want, "{a} * {b} = {}, want {want}", *a * *b);
        }
    }
    let mut rng = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let (p, q, r) = (random_quat(&mut rng), random_quat(&mut rng), random_quat(&mut rng));
        let scale = p.norm() * q.norm() * r.norm();
        worst = worst.max((p * q * r).max_abs_diff(p * (q * r)) / scale);
        worst = worst.max(((p * q).norm() - p.norm() * q.norm()).abs() / (p.norm() * q.norm()));
    }
    ensure!(worst <= 1e-12, "worst relative error {worst:e}");
    Ok(format!("16 products exact, worst relative error {worst:.1e}"))
}

fn anti_homomorphism() -> Outcome {
    let mut rng = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let (p, q) = (random_quat(&mut rng), random_quat(&mut rng));
        let lhs = quat_to_matrix(p * q);
        let rhs = quat_to_matrix(q) * quat_to_matrix(p);
        worst = worst.max(lhs.max_abs_diff(&rhs) / (p.norm() * q.norm()));
        ensure!(jones_column(q) == to_jones(q), "jones column differs for {q}");
    }
    ensure!(worst <= 1e-12, "worst relative error {worst:e}");
    Ok(format!("worst relative error {worst:.1e}"))
}

fn table_one() -> Outcome {
    let qw = Quaternion::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0);
    let cases = [
        (
            "slow horizontal, eta=pi/4",
            waveplate_from_axis(&UnitQuaternion::ONE, FRAC_PI_4).quaternion(),
            qw,
        ),
        (
            "slow horizontal, eta=pi/2",
            waveplate_from_axis(&UnitQuaternion::ONE, FRAC_PI_2).quaternion(),
            Quaternion::I,
        ),
        (
            "fast horizontal quarter wave",
            waveplate_from_axis(&UnitQuaternion::ONE, -FRAC_PI_4).quaternion(),
            qw.conj(),
        ),
        (
            "two horizontal QWPs",
            compose(&[qwp(0.0), qwp(0.0)]).unwrap().quaternion(),
            Quaternion::I,
        ),
        ("hwp(0)", hwp(0.0).quaternion(), Quaternion::I),
    ];
    for (name, got, want) in cases {
        let err = got.max_abs_diff(want);
        ensure!(err <= 1e-15, "{name}: {got} vs {want} ({err:e})");
    }
    // j: physical rotation through π/2 takes horizontal to vertical
    ensure!(
        apply(Quaternion::ONE, &Waveplate::new(Quaternion::J).unwrap()) == Quaternion::J,
        "j rotation"
    );
    Ok("waveplate quaternions exact".into())
}

fn table_two() -> Outcome {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let cases = [
        (Quaternion::ONE, (c(1., 0.), c(0., 0.))),
        (Quaternion::I, (c(0., 1.), c(0., 0.))),
        (Quaternion::J, (c(0., 0.), c(1., 0.))),
        (Quaternion::K, (c(0., 0.), c(0., 1.))),
        (Quaternion::new(1., 0., 1., 0.), (c(1., 0.), c(1., 0.))),
        (Quaternion::new(1., 0., 0., 1.), (c(1., 0.), c(0., 1.))),
        (Quaternion::new(1., 0., 0., -1.), (c(1., 0.), c(0., -1.))),
    ];
    for (q, (ex, ey)) in cases {
        let v = JonesVector::new(ex, ey);
        ensure!(to_jones(q) == v && from_jones(&v) == q, "{q}: Jones mapping");
        let e = to_ellipse(q).map_err(|e| e.to_string())?;
        let back = from_ellipse(&e).map_err(|e| e.to_string())?;
        ensure!(back.max_abs_diff(q) <= 1e-12, "{q}: ellipse round trip gave {back}");
    }
    let e = to_ellipse(Quaternion::new(1., 0., 1., 0.)).unwrap();
    ensure!(
        (e.theta - FRAC_PI_4).abs() <= 1e-12 && e.epsilon.abs() <= 1e-12,
        "1+j orientation"
    );
    let left = to_ellipse(Quaternion::new(1., 0., 0., 1.)).unwrap();
    let right = to_ellipse(Quaternion::new(1., 0., 0., -1.)).unwrap();
    ensure!(
        (left.epsilon - FRAC_PI_4).abs() <= 1e-12,
        "1+k ellipticity {}",
        left.epsilon
    );
    ensure!(
        (right.epsilon + FRAC_PI_4).abs() <= 1e-12,
        "1-k ellipticity {}",
        right.epsilon
    );
    Ok("seven signals round-trip".into())
}

fn stokes_equivalence() -> Outcome {
    let mut rng = rng(5);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let q = random_quat(&mut rng);
        let quat_path = to_classical(&stokes(q)).to_array();
        let jones_path = classical_stokes(&jones_column(q));
        let phi = rng.gen_range(-PI..PI);
        let shifted = to_classical(&stokes(apply_phase(q, phi))).to_array();
        let scale = q.norm_sqr();
        for n in 0..3 {
            worst = worst.max((quat_path[n] - jones_path[n]).abs() / scale);
            worst = worst.max((shifted[n] - quat_path[n]).abs() / scale);
        }
    }
    ensure!(worst <= 1e-12, "worst relative error {worst:e}");
    Ok(format!("worst relative error {worst:.1e}"))
}

fn precession() -> Outcome {
    let mut rng = rng(6);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let q = random_quat(&mut rng);
        let slow = random_unit(&mut rng);
        let eta = rng.gen_range(-PI..PI);
        let w = waveplate_from_axis(&slow, eta);
        let v = jones_column(q);
        let a = classical_stokes(&jones_column(*slow));
        let want = rodrigues(a, 2.0 * eta, classical_stokes(&v));
        let got = to_classical(&stokes(apply(q, &w))).to_array();
        let oracle = classical_stokes(&oracle_apply(&v, &w));
        for n in 0..3 {
            worst = worst.max((got[n] - want[n]).abs() / q.norm_sqr());
            worst = worst.max((oracle[n] - want[n]).abs() / q.norm_sqr());
        }
    }
    ensure!(worst <= 1e-10, "worst relative error {worst:e}");
    Ok(format!("worst relative error {worst:.1e}"))
}

fn polarizer() -> Outcome {
    let mut rng = rng(7);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = random_unit(&mut rng);
        let mu = rng.gen_range(0.0..=1.0);
        let phi = rng.gen_range(-PI..PI);
        let pol = PartialPolarizer::new(p, mu).unwrap();
        let run = |q: Quaternion| polarizer_apply(q, &pol).map_err(|e| e.to_string());
        let pass = apply_phase(*p, phi);
        let block = orthogonal_sop(*p, phi);
        worst = worst.max(run(pass)?.max_abs_diff(pass));
        worst = worst.max(run(block)?.max_abs_diff(block.scale(mu)));
        let q = random_quat(&mut rng);
        let first = run(q)?;
        let second = polarizer_apply_conjugate_form(q, &pol).map_err(|e| e.to_string())?;
        let oracle = oracle_polarizer(&to_jones(q), &pol);
        let scale = q.norm().max(1.0);
        worst = worst.max(first.max_abs_diff(second) / scale);
        worst = worst.max(jones_max_abs_diff(&to_jones(first), &oracle) / scale);
    }
    ensure!(worst <= 1e-12, "worst error {worst:e}");
    Ok(format!(
        "eigen-behaviour, both forms and oracle agree, worst {worst:.1e}"
    ))
}

fn conjugation_identities() -> Outcome {
    let mut rng = rng(8);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let q = random_quat(&mut rng);
        for v in Axis::ALL {
            let u = v.unit();
            worst = worst.max(q.partial_conj(v).max_abs_diff(-(u * q.conj() * u)));
            let mut want = q.to_array().map(|x| -x);
            want[0] = q.q0;
            want[v.index()] = q.component(v);
            worst = worst.max(q.double_conj(v).max_abs_diff(Quaternion::from_array(want)));
        }
        let phi = rng.gen_range(-PI..PI);
        let s = stokes(q).as_quaternion();
        worst = worst.max((stokes(orthogonal_sop(q, phi)).as_quaternion() + s).max_abs_diff(Quaternion::ZERO));

        let r = rng.gen_range(0.1..3.0);
        let families = [
            (orthogonal_sop(q, phi).scale(r), OrthogonalityClass::OrthogonalSOP),
            (apply_phase(q, phi).scale(r), OrthogonalityClass::SameSOP),
            ((Quaternion::I * q).scale(r), OrthogonalityClass::SameSOPOrthogonalPhase),
            (
                (Quaternion::I * q).scale(-r),
                OrthogonalityClass::SameSOPOrthogonalPhase,
            ),
        ];
        for (n, (p, want)) in families.into_iter().enumerate() {
            let got = classify_orthogonality(p, q, ORTHOGONALITY_TOLERANCE).map_err(|e| e.to_string())?;
            // a π/2 phase makes R e^{iφ} q the more specific class
            let phase_quarter = (wrap(phi).abs() - FRAC_PI_2).abs() < 1e-6;
            let ok = got == want || (n == 1 && phase_quarter && got == OrthogonalityClass::SameSOPOrthogonalPhase);
            ensure!(ok, "family {n}: got {got:?}, want {want:?}");
        }
    }
    let tol = 1e-12 * 16.0;
    ensure!(worst <= tol, "worst error {worst:e}");
    Ok(format!(
        "identities hold, orthogonality families classified, worst {worst:.1e}"
    ))
}

fn inversion() -> Outcome {
    let mut rng = rng(9);
    let mut worst = 0.0f64;
    let mut regular = 0;
    while regular < 10_000 {
        let p = TargetTransform {
            p: random_unit(&mut rng),
        };
        let SolutionSet::Regular { branch1, branch2, .. } = solve_angles(&p, SINGULAR_TOLERANCE) else {
            continue;
        };
        regular += 1;
        for b in [branch1, branch2] {
            worst = worst.max((forward_transform(&b).quaternion() - p.quaternion()).norm());
        }
    }
    let mut family_worst = 0.0f64;
    for _ in 0..50 {
        let beta = rng.gen_range(-PI..PI);
        for (p, kind) in [
            (Quaternion::I * exp_axis(Axis::J, beta), Singularity::SingularA),
            (exp_axis(Axis::J, beta), Singularity::SingularB),
        ] {
            let set = solve_angles(&TargetTransform::new(p).unwrap(), SINGULAR_TOLERANCE);
            ensure!(set.singularity() == kind, "{p} classified {:?}", set.singularity());
            let members = set.representatives();
            ensure!(members.len() == FAMILY_SAMPLES, "{} family samples", members.len());
            for (_, a) in members {
                family_worst = family_worst.max((forward_transform(&a).quaternion() - p).norm());
            }
        }
    }
    ensure!(worst <= 1e-9, "regular worst {worst:e}");
    ensure!(family_worst <= 1e-9, "family worst {family_worst:e}");
    Ok(format!("regular worst {worst:.1e}, family worst {family_worst:.1e}"))
}

fn steady_ramp() -> Outcome {
    let (q, r) = regular_pair();
    let phases = full_ramp_phases(256);
    let ramp = ramp_trajectory(&q, &r, &phases, BranchPolicy::Continuous, SINGULAR_TOLERANCE);
    let first = to_ellipse(ramp[0].output).map_err(|e| e.to_string())?;
    let mut sop_err = 0.0f64;
    let mut phase_err = 0.0f64;
    let mut unwrapped = first.phi;
    let mut prev = first.phi;
    for s in &ramp {
        ensure!(s.residual <= 1e-9, "residual {:e} at phi={}", s.residual, s.phi);
        // independent check of the output field through the matrix path
        let stack = compose(&[qwp(s.angles.psi_a), hwp(s.angles.psi_b), qwp(s.angles.psi_c)]).unwrap();
        let oracle = oracle_apply(&to_jones(*q), &stack);
        ensure!(
            jones_max_abs_diff(&oracle, &to_jones(s.output)) <= 1e-12,
            "oracle disagrees at phi={}",
            s.phi
        );
        let e = to_ellipse(s.output).map_err(|e| e.to_string())?;
        sop_err = sop_err.max((e.epsilon - first.epsilon).abs());
        sop_err = sop_err.max(wrap(2.0 * (e.theta - first.theta)).abs() / 2.0);
        unwrapped += wrap(e.phi - prev);
        prev = e.phi;
        phase_err = phase_err.max((unwrapped - first.phi - s.phi).abs());
    }
    // closing the loop back to the first sample completes the 2π span
    let span = unwrapped + wrap(first.phi - prev) - first.phi;
    ensure!(sop_err <= 1e-8, "SOP drift {sop_err:e}");
    ensure!(phase_err <= 1e-8, "phase deviates from slope 1 by {phase_err:e}");
    ensure!((span - TAU).abs() <= 1e-8, "span {span}");
    Ok(format!(
        "SOP drift {sop_err:.1e}, phase linearity {phase_err:.1e}, span {span:.12}"
    ))
}

fn crossing_ramp() -> Outcome {
    let (q, r) = crossing_pair();
    let (eq, er) = (to_ellipse(*q).unwrap().epsilon, to_ellipse(*r).unwrap().epsilon);
    ensure!(
        (eq + 0.23).abs() <= 0.01 && (er + 0.23).abs() <= 0.01,
        "ellipticities {eq}, {er}"
    );
    let phases = full_ramp_phases(256);
    let ramp = ramp_trajectory(&q, &r, &phases, BranchPolicy::Branch1, SINGULAR_TOLERANCE);
    let crossings = singular_crossings(&ramp);
    ensure!(crossings.len() == 2, "{} crossings", crossings.len());
    for &k in &crossings {
        ensure!(
            (ramp[k].step - FRAC_PI_2).abs() <= 0.1,
            "step {} at phi={}",
            ramp[k].step,
            ramp[k].phi
        );
    }
    let worst = ramp.iter().map(|s| s.residual).fold(0.0, f64::max);
    ensure!(worst <= 1e-9, "residual {worst:e}");
    let smooth = ramp_trajectory(&q, &r, &phases, BranchPolicy::Continuous, SINGULAR_TOLERANCE);
    ensure!(
        singular_crossings(&smooth) == crossings,
        "continuous policy sees different crossings"
    );
    ensure!(smooth.iter().all(|s| s.residual <= 1e-9), "continuous residual");
    let steps: Vec<String> = crossings.iter().map(|&k| format!("{:.3}", ramp[k].step)).collect();
    let largest = smooth.iter().map(|s| s.step).fold(0.0, f64::max);
    Ok(format!(
        "eps {eq:.3}/{er:.3}, crossings at phi={:.3},{:.3}, steps {}; branch-switching ramp max step {largest:.3}",
        ramp[crossings[0]].phi,
        ramp[crossings[1]].phi,
        steps.join(",")
    ))
}

/// Two quarter-wave plates taking unit signal `q` to a circular state of the
/// requested handedness (`+1` left, `-1` right).
fn to_circular(q: Quaternion, hand: f64) -> Result<(Waveplate, Waveplate), String> {
    let e = to_ellipse(q).map_err(|e| e.to_string())?;
    let first = qwp(e.theta);
    let linear = to_ellipse(apply(q, &first)).map_err(|e| e.to_string())?;
    if linear.epsilon.abs() > 1e-9 {
        return Err(format!("not linear after first plate: eps {}", linear.epsilon));
    }
    for sign in [1.0, -1.0] {
        let second = qwp(linear.theta + sign * FRAC_PI_4);
        let c = to_ellipse(apply(apply(q, &first), &second)).map_err(|e| e.to_string())?;
        if (c.epsilon - hand * FRAC_PI_4).abs() <= 1e-9 {
            return Ok((first, second));
        }
    }
    Err("no circular state reached".into())
}

fn five_plate_phases(q: Quaternion, r: Quaternion, hand: f64, alphas: &[f64]) -> Result<Vec<f64>, String> {
    let (a1, a2) = to_circular(q, hand)?;
    // the half-wave plate flips handedness, so the output side starts from the opposite one
    let (b1, b2) = to_circular(r, -hand)?;
    let mut out = Vec::new();
    for &alpha in alphas {
        let stack = compose(&[a1, a2, hwp(alpha), b2.inverse(), b1.inverse()]).map_err(|e| e.to_string())?;
        let m = apply(q, &stack) * r.conj();
        if m.q2.abs().max(m.q3.abs()) > 1e-9 {
            return Err(format!("output SOP wrong at alpha={alpha}"));
        }
        out.push(m.q1.atan2(m.q0));
    }
    Ok(out)
}

fn five_plate() -> Outcome {
    let (q, r) = regular_pair();
    let alphas: Vec<f64> = (0..=30).map(|n| n as f64 * 0.1).collect();
    let mut report = Vec::new();
    for hand in [1.0, -1.0] {
        let phases = five_plate_phases(*q, *r, hand, &alphas)?;
        let sign = (wrap(phases[1] - phases[0]) / 0.2).round();
        let worst = alphas
            .iter()
            .zip(&phases)
            .skip(1)
            .map(|(a, ph)| wrap(ph - phases[0] - sign * 2.0 * a).abs())
            .fold(0.0, f64::max);
        ensure!(sign.abs() == 1.0, "phase slope {sign}");
        // with left-circular light at the half-wave plate the phase follows +2α
        ensure!(hand < 0.0 || sign == 1.0, "left-circular arrangement gives -2a");
        ensure!(worst <= 1e-9, "worst phase error {worst:e}");
        let label = if hand > 0.0 { "left" } else { "right" };
        report.push(format!(
            "{label}-circular middle: {}2a, worst {worst:.1e}",
            if sign > 0.0 { "+" } else { "-" }
        ));
    }
    Ok(report.join("; "))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("base algebra", base_algebra),
        ("matrix anti-homomorphism", anti_homomorphism),
        ("waveplate golden values", table_one),
        ("signal golden values", table_two),
        ("Stokes equivalence", stokes_equivalence),
        ("waveplate precession", precession),
        ("partial polarizer", polarizer),
        ("conjugation and orthogonality identities", conjugation_identities),
        ("phase-shifter inversion", inversion),
        ("constant-SOP phase ramp", steady_ramp),
        ("ramp through singular states", crossing_ramp),
        ("five-plate half-wave rotation", five_plate),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

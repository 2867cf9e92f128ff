//! Three-waveplate (QWP-HWP-QWP) endless phase shifter.
//!
//! The plates are rotated to angles `ψa, ψb, ψc`; together they form
//!
//! ```text
//! p = qwp(ψa) · hwp(ψb) · qwp(ψc)
//! ```
//!
//! To take unit input `q` to unit output `r` with extra phase `φ` the stack
//! must equal `p = q† e^{iφ} r = e^{sφ} q† r`, with `s` the Stokes direction
//! of `q`. Writing `p0 + p2 j` and `p1 + p3 j` as complex numbers in `j`
//! separates the product into two equations which invert in closed form.
//! There are two solution branches in general, and a one-parameter family
//! whenever `p0 = p2 = 0` ([`Singularity::SingularA`]) or `p1 = p3 = 0`
//! ([`Singularity::SingularB`]).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::components::{compose, hwp, qwp};
use crate::error::Result;
use crate::quat::{exp_axis, Axis, Quaternion, UnitQuaternion};
use crate::signal::{stokes, to_ellipse};

/// Default threshold on `|p0 + p2 j|` and `|p1 + p3 j|` for a singular target.
pub const SINGULAR_TOLERANCE: f64 = 1e-7;

/// Regular solutions closer than this to a singularity are flagged.
pub const NEAR_SINGULAR_THRESHOLD: f64 = 1e-4;

/// Number of pre-sampled members reported for a singular family.
pub const FAMILY_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShifterProblem {
    pub q: UnitQuaternion,
    pub r: UnitQuaternion,
    pub phi: f64,
}

/// The transform the plate stack has to realize.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TargetTransform {
    pub p: UnitQuaternion,
}

impl TargetTransform {
    pub fn new(p: Quaternion) -> Result<Self> {
        Ok(TargetTransform {
            p: UnitQuaternion::new(p)?,
        })
    }

    pub fn quaternion(&self) -> Quaternion {
        *self.p
    }

    /// `|p0 + p2 j|`
    pub fn scalar_j_magnitude(&self) -> f64 {
        self.p.q0.hypot(self.p.q2)
    }

    /// `|p1 + p3 j|`
    pub fn i_k_magnitude(&self) -> f64 {
        self.p.q1.hypot(self.p.q3)
    }

    /// `arg(p0 + p2 j)`
    fn arg_scalar_j(&self) -> f64 {
        self.p.q2.atan2(self.p.q0)
    }

    /// `arg(p1 + p3 j)`
    fn arg_i_k(&self) -> f64 {
        self.p.q3.atan2(self.p.q1)
    }
}

/// Plate orientations, each reduced modulo π into `(-π/2, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveplateAngles {
    pub psi_a: f64,
    pub psi_b: f64,
    pub psi_c: f64,
}

impl WaveplateAngles {
    pub fn new(psi_a: f64, psi_b: f64, psi_c: f64) -> Self {
        WaveplateAngles {
            psi_a: reduce_angle(psi_a),
            psi_b: reduce_angle(psi_b),
            psi_c: reduce_angle(psi_c),
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.psi_a, self.psi_b, self.psi_c]
    }

    /// Largest per-plate change under the π-periodic metric.
    pub fn max_step(&self, other: &WaveplateAngles) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(&a, b)| angle_distance(a, b))
            .fold(0.0, f64::max)
    }
}

/// Reduces an orientation modulo π into `(-π/2, π/2]`.
pub fn reduce_angle(x: f64) -> f64 {
    let y = x.rem_euclid(PI);
    if y > FRAC_PI_2 {
        y - PI
    } else {
        y
    }
}

/// Distance between two plate orientations; plates are π-periodic.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Singularity {
    RegularCase,
    /// `p0 = p2 = 0`
    SingularA,
    /// `p1 = p3 = 0`
    SingularB,
}

/// Which formula produced a set of angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    One,
    Two,
    FamilyA,
    FamilyB,
}

/// One-parameter solution family at a singular target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingularFamily {
    /// `ψa = ½arg(p1+p3j) + π/4 + α`, `ψb = ½arg(p1+p3j)`,
    /// `ψc = ½arg(p1+p3j) + π/4 - α` for any `α`.
    A { half_arg: f64 },
    /// `ψa = ψb - ½arg(p0+p2j) + π/2`, `ψc = ψb + ½arg(p0+p2j) + π/2` for any `ψb`.
    B { half_arg: f64 },
}

impl SingularFamily {
    /// Member at free parameter `t` (`α` for A, `ψb` for B).
    pub fn at(&self, t: f64) -> WaveplateAngles {
        match *self {
            SingularFamily::A { half_arg } => {
                WaveplateAngles::new(half_arg + FRAC_PI_4 + t, half_arg, half_arg + FRAC_PI_4 - t)
            }
            SingularFamily::B { half_arg } => {
                WaveplateAngles::new(t - half_arg + FRAC_PI_2, t, t + half_arg + FRAC_PI_2)
            }
        }
    }

    /// `n` members spread evenly over one period of the free parameter.
    pub fn samples(&self, n: usize) -> Vec<WaveplateAngles> {
        (0..n).map(|k| self.at(PI * k as f64 / n as f64)).collect()
    }

    /// Member minimizing the largest per-plate step from `prev`.
    pub fn closest_to(&self, prev: &WaveplateAngles) -> WaveplateAngles {
        let t = match *self {
            SingularFamily::A { half_arg } => {
                let a0 = half_arg + FRAC_PI_4;
                circular_center(&[prev.psi_a - a0, a0 - prev.psi_c])
            }
            SingularFamily::B { half_arg } => circular_center(&[
                prev.psi_b,
                prev.psi_a + half_arg - FRAC_PI_2,
                prev.psi_c - half_arg - FRAC_PI_2,
            ]),
        };
        self.at(t)
    }

    pub fn branch(&self) -> Branch {
        match self {
            SingularFamily::A { .. } => Branch::FamilyA,
            SingularFamily::B { .. } => Branch::FamilyB,
        }
    }
}

/// Center of the shortest arc covering `points` on a circle of period π,
/// i.e. the point minimizing the largest [`angle_distance`] to them.
fn circular_center(points: &[f64]) -> f64 {
    let mut p: Vec<f64> = points.iter().map(|x| x.rem_euclid(PI)).collect();
    p.sort_by(f64::total_cmp);
    let n = p.len();
    // gap after point i (the last one wraps to the first)
    let (mut best, mut best_gap) = (n - 1, p[0] + PI - p[n - 1]);
    for i in 0..n - 1 {
        let gap = p[i + 1] - p[i];
        if gap > best_gap {
            best = i;
            best_gap = gap;
        }
    }
    let start = p[(best + 1) % n];
    start + (PI - best_gap) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolutionSet {
    Regular {
        branch1: WaveplateAngles,
        branch2: WaveplateAngles,
        /// `min(|p0+p2j|, |p1+p3j|)` is below [`NEAR_SINGULAR_THRESHOLD`];
        /// the angles are correct but very sensitive to `p`.
        near_singular: bool,
    },
    SingularA(SingularFamily),
    SingularB(SingularFamily),
}

impl SolutionSet {
    pub fn singularity(&self) -> Singularity {
        match self {
            SolutionSet::Regular { .. } => Singularity::RegularCase,
            SolutionSet::SingularA(_) => Singularity::SingularA,
            SolutionSet::SingularB(_) => Singularity::SingularB,
        }
    }

    /// Concrete angle triples: both branches, or [`FAMILY_SAMPLES`] family members.
    pub fn representatives(&self) -> Vec<(Branch, WaveplateAngles)> {
        match self {
            SolutionSet::Regular { branch1, branch2, .. } => {
                vec![(Branch::One, *branch1), (Branch::Two, *branch2)]
            }
            SolutionSet::SingularA(f) | SolutionSet::SingularB(f) => {
                f.samples(FAMILY_SAMPLES).into_iter().map(|a| (f.branch(), a)).collect()
            }
        }
    }
}

/// `p = e^{sφ} q† r`, which satisfies `q p = e^{iφ} r`.
pub fn target_transform(prob: &ShifterProblem) -> TargetTransform {
    let s = stokes(*prob.q).as_quaternion();
    let s = s.scale(1.0 / s.norm());
    let p = s.scale(prob.phi).exp() * prob.q.conj() * *prob.r;
    TargetTransform {
        p: UnitQuaternion::new_unchecked(p),
    }
}

/// The stack `qwp(ψa) · hwp(ψb) · qwp(ψc)`.
pub fn forward_transform(angles: &WaveplateAngles) -> TargetTransform {
    let stack = compose(&[qwp(angles.psi_a), hwp(angles.psi_b), qwp(angles.psi_c)]).expect("three plates");
    TargetTransform { p: stack.transform }
}

/// The stack evaluated through its separated complex form
/// `p0 + p2 j = -e^{j(ψc-ψa)} cos(-ψa+2ψb-ψc)`,
/// `p1 + p3 j = j e^{j(ψa+ψc)} sin(-ψa+2ψb-ψc)`.
pub fn forward_transform_split(angles: &WaveplateAngles) -> Quaternion {
    let WaveplateAngles { psi_a, psi_b, psi_c } = *angles;
    let mix = -psi_a + 2.0 * psi_b - psi_c;
    let (sd, cd) = (psi_c - psi_a).sin_cos();
    let (ss, cs) = (psi_a + psi_c).sin_cos();
    let (sm, cm) = mix.sin_cos();
    Quaternion::new(-cd * cm, -ss * sm, -sd * cm, cs * sm)
}

pub fn is_singular(p: &TargetTransform, tol: f64) -> Singularity {
    if p.scalar_j_magnitude() <= tol {
        Singularity::SingularA
    } else if p.i_k_magnitude() <= tol {
        Singularity::SingularB
    } else {
        Singularity::RegularCase
    }
}

/// Closed-form waveplate angles realizing `p`.
pub fn solve_angles(p: &TargetTransform, tol: f64) -> SolutionSet {
    let half_ik = 0.5 * p.arg_i_k();
    let half_sj = 0.5 * p.arg_scalar_j();
    match is_singular(p, tol) {
        Singularity::SingularA => SolutionSet::SingularA(SingularFamily::A { half_arg: half_ik }),
        Singularity::SingularB => SolutionSet::SingularB(SingularFamily::B { half_arg: half_sj }),
        Singularity::RegularCase => {
            let (rho_sj, rho_ik) = (p.scalar_j_magnitude(), p.i_k_magnitude());
            // arctan √((p0²+p2²)/(p1²+p3²)) in [0, π/2]
            let half_t = 0.5 * rho_sj.atan2(rho_ik);
            let branch1 = WaveplateAngles::new(
                half_ik - half_sj + FRAC_PI_4,
                half_ik - half_t,
                half_ik + half_sj + FRAC_PI_4,
            );
            let branch2 = WaveplateAngles::new(
                half_ik - half_sj - FRAC_PI_4,
                half_ik + half_t,
                half_ik + half_sj - FRAC_PI_4,
            );
            SolutionSet::Regular {
                branch1,
                branch2,
                near_singular: rho_sj.min(rho_ik) < NEAR_SINGULAR_THRESHOLD,
            }
        }
    }
}

/// `|q · stack(angles) - e^{iφ} r|`
pub fn residual(prob: &ShifterProblem, angles: &WaveplateAngles) -> f64 {
    let out = *prob.q * forward_transform(angles).quaternion();
    (out - exp_axis(Axis::I, prob.phi) * *prob.r).norm()
}

/// Predicts [`is_singular`] for the transform taking unit `q` to the phased
/// output `t = e^{iφ} r` from the two ellipses alone.
///
/// `SingularA` needs `ε(t) = -ε(q)` and `φ(t) = φ(q) ± π/2`; `SingularB`
/// needs `ε(t) = ε(q)` and `φ(t) - φ(q) ∈ {0, π}`. Circular states carry no
/// orientation, so for them only the handedness matters.
pub fn singular_signal_conditions(q: &UnitQuaternion, t: &UnitQuaternion, tol: f64) -> Result<Singularity> {
    let eq = to_ellipse(**q)?;
    let et = to_ellipse(**t)?;
    let circular = |e: f64| (e.abs() - FRAC_PI_4).abs() <= tol;
    if circular(eq.epsilon) && circular(et.epsilon) {
        return Ok(if eq.epsilon.signum() == et.epsilon.signum() {
            Singularity::SingularB
        } else {
            Singularity::SingularA
        });
    }
    let dphi = et.phi - eq.phi;
    if (et.epsilon + eq.epsilon).abs() <= tol && angle_distance(dphi, FRAC_PI_2) <= tol {
        Ok(Singularity::SingularA)
    } else if (et.epsilon - eq.epsilon).abs() <= tol && angle_distance(dphi, 0.0) <= tol {
        Ok(Singularity::SingularB)
    } else {
        Ok(Singularity::RegularCase)
    }
}

/// How a ramp picks among the available solutions at each sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BranchPolicy {
    /// The branch (or family member) with the smallest largest-plate step
    /// from the previous sample.
    Continuous,
    /// Always branch one.
    Branch1,
    /// Always branch two.
    Branch2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RampSample {
    pub phi: f64,
    pub angles: WaveplateAngles,
    pub branch: Branch,
    /// A singular state was hit at, or crossed just before, this sample.
    pub singular: bool,
    pub near_singular: bool,
    /// Largest plate step from the previous sample (zero for the first).
    pub step: f64,
    pub residual: f64,
    /// Output signal `q · stack(angles)`.
    pub output: Quaternion,
}

/// Waveplate angles for each phase in `phis`, in order.
///
/// A singular crossing between two samples shows up as `p1 + p3 j` (or
/// `p0 + p2 j`) reversing direction, which is what the `singular` flag
/// records alongside exact family hits.
pub fn ramp_trajectory(
    q: &UnitQuaternion,
    r: &UnitQuaternion,
    phis: &[f64],
    policy: BranchPolicy,
    tol: f64,
) -> Vec<RampSample> {
    let mut out: Vec<RampSample> = Vec::with_capacity(phis.len());
    let mut prev_p: Option<Quaternion> = None;
    for &phi in phis {
        let prob = ShifterProblem { q: *q, r: *r, phi };
        let target = target_transform(&prob);
        let prev = out.last().map(|s| s.angles);
        let (branch, angles, near_singular) = match solve_angles(&target, tol) {
            SolutionSet::Regular {
                branch1,
                branch2,
                near_singular,
            } => {
                let pick_two = match (policy, prev) {
                    (BranchPolicy::Branch1, _) | (BranchPolicy::Continuous, None) => false,
                    (BranchPolicy::Branch2, _) => true,
                    (BranchPolicy::Continuous, Some(prev)) => branch2.max_step(&prev) < branch1.max_step(&prev),
                };
                if pick_two {
                    (Branch::Two, branch2, near_singular)
                } else {
                    (Branch::One, branch1, near_singular)
                }
            }
            SolutionSet::SingularA(f) | SolutionSet::SingularB(f) => {
                let angles = prev.map_or_else(|| f.at(0.0), |prev| f.closest_to(&prev));
                (f.branch(), angles, true)
            }
        };
        let p = target.quaternion();
        let reversed = prev_p.is_some_and(|pp| pp.q1 * p.q1 + pp.q3 * p.q3 < 0.0 || pp.q0 * p.q0 + pp.q2 * p.q2 < 0.0);
        let family = matches!(branch, Branch::FamilyA | Branch::FamilyB);
        out.push(RampSample {
            phi,
            angles,
            branch,
            singular: family || reversed,
            near_singular,
            step: prev.map_or(0.0, |prev| angles.max_step(&prev)),
            residual: residual(&prob, &angles),
            output: **q * forward_transform(&angles).quaternion(),
        });
        prev_p = Some(p);
    }
    out
}

/// `n` phases `2πk/n`, `k = 0..n`.
pub fn full_ramp_phases(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

/// Indices where a run of consecutive `singular` samples begins; each run is
/// one crossing.
pub fn singular_crossings(samples: &[RampSample]) -> Vec<usize> {
    samples
        .iter()
        .enumerate()
        .filter(|(k, s)| s.singular && (*k == 0 || !samples[k - 1].singular))
        .map(|(k, _)| k)
        .collect()
}

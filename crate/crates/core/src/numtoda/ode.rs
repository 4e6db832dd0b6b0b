//! Direct integration of `b_i' = a_i`, `a_i' = −(Cb)_i a_i` with an adaptive Dormand–Prince pair.
//!
//! Each direction stops at its first blow-up; nothing is continued through a pole.

use nalgebra::DVector;
use ode_solvers::dop_shared::{IntegrationError, OutputType};
use ode_solvers::{Dopri5, System};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::{cartan_matrix, LieType};

/// Samples with every `|a_i|, |b_i|` at most this count as "between events" for drift checks;
/// closer to a pole the invariant is a difference of large terms and loses digits in proportion.
pub const DRIFT_BOUND: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeControls {
    pub rtol: f64,
    pub atol: f64,
    /// `|a_i|` above this is a blow-up (`1/δ` with `δ = 1e−8`).
    pub blowup_threshold: f64,
    pub max_steps: u32,
}

impl Default for OdeControls {
    fn default() -> Self {
        OdeControls { rtol: 1e-10, atol: 1e-10, blowup_threshold: 1e8, max_steps: 200_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupEvent {
    /// Node `i` (zero-based) whose `a_i` diverged, i.e. `τ_{i+1}` vanished.
    pub index: usize,
    /// Last two accepted times before stopping.
    pub bracket: (f64, f64),
    /// Pole estimate from the linear decay of `|a_i|^{−1/2}` near a double pole.
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub lie_type: String,
    pub times: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    /// `½ bᵀ(DC)b + Σ κ_i a_i` with `D = diag(κ)` the symmetrizer; for type A this is `tr L²/2`.
    pub invariant: Vec<f64>,
    pub events: Vec<BlowupEvent>,
}

impl Trajectory {
    /// Largest `|H(t) − H(0)|` over samples with every `|a_i|, |b_i| ≤ bound`.
    pub fn invariant_drift(&self, bound: f64) -> f64 {
        let h0 = self.invariant[self.index_of_zero()];
        self.times
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.a[i].iter().chain(&self.b[i]).all(|x| x.abs() <= bound))
            .map(|(i, _)| (self.invariant[i] - h0).abs())
            .fold(0.0, f64::max)
    }

    fn index_of_zero(&self) -> usize {
        self.times.iter().position(|&t| t == 0.0).unwrap_or(0)
    }

    pub fn to_csv(&self) -> String {
        let l = self.a.first().map_or(0, Vec::len);
        let mut out = String::from("t");
        for i in 1..=l {
            out.push_str(&format!(",a{i}"));
        }
        for i in 1..=l {
            out.push_str(&format!(",b{i}"));
        }
        out.push_str(",invariant\n");
        for (k, t) in self.times.iter().enumerate() {
            out.push_str(&format!("{t:e}"));
            for x in self.a[k].iter().chain(&self.b[k]) {
                out.push_str(&format!(",{x:e}"));
            }
            out.push_str(&format!(",{:e}\n", self.invariant[k]));
        }
        out
    }
}

struct Toda {
    c: Vec<Vec<f64>>,
    threshold: f64,
}

impl System<f64, DVector<f64>> for Toda {
    fn system(&self, _t: f64, y: &DVector<f64>, dy: &mut DVector<f64>) {
        let l = self.c.len();
        for i in 0..l {
            let cb: f64 = (0..l).map(|j| self.c[i][j] * y[j]).sum();
            dy[i] = y[l + i];
            dy[l + i] = -cb * y[l + i];
        }
    }

    fn solout(&mut self, _t: f64, y: &DVector<f64>, _dy: &DVector<f64>) -> bool {
        let l = self.c.len();
        y.iter().skip(l).any(|a| !(a.abs() <= self.threshold))
    }
}

fn run(sys: Toda, y0: &DVector<f64>, t_end: f64, controls: &OdeControls) -> Result<(Vec<f64>, Vec<DVector<f64>>, Option<BlowupEvent>)> {
    let l = sys.c.len();
    let threshold = sys.threshold;
    let mut solver = Dopri5::from_param(
        sys,
        0.0,
        t_end,
        t_end.abs() / 100.0,
        y0.clone(),
        controls.rtol,
        controls.atol,
        0.9,
        0.04,
        0.2,
        10.0,
        t_end.abs(),
        0.0,
        controls.max_steps,
        1000,
        OutputType::Sparse,
    );
    let outcome = solver.integrate();
    let (ts, ys) = solver.results().get();
    let (ts, ys) = (ts.clone(), ys.clone());
    let biggest = |y: &DVector<f64>| {
        (0..l).max_by(|&i, &j| y[l + i].abs().total_cmp(&y[l + j].abs())).map(|i| (i, y[l + i].abs())).unwrap()
    };
    let last = ys.last().expect("solver records the initial point");
    let (index, size) = biggest(last);
    let diverged = size > threshold;
    match outcome {
        Ok(_) if !diverged => return Ok((ts, ys, None)),
        Ok(_) => {}
        Err(IntegrationError::StepSizeUnderflow { x }) | Err(IntegrationError::StiffnessDetected { x }) => {
            // A collapse counts as a blow-up only if a is already large.
            if size < threshold.sqrt() {
                return Err(Error::StepCollapse { t: x });
            }
        }
        Err(IntegrationError::MaxNumStepReached { x, .. }) => return Err(Error::StepCollapse { t: x }),
    }
    let n = ts.len();
    let (t1, t2) = (ts[n.saturating_sub(2)], ts[n - 1]);
    let s1 = 1.0 / ys[n.saturating_sub(2)][l + index].abs().sqrt();
    let s2 = 1.0 / ys[n - 1][l + index].abs().sqrt();
    let time = if s1 != s2 { t2 - s2 * (t2 - t1) / (s2 - s1) } else { t2 };
    Ok((ts, ys, Some(BlowupEvent { index, bracket: (t1.min(t2), t1.max(t2)), time })))
}

/// Integrates forward to `t_max` and backward to `t_min` from `(a(0), b(0))`.
pub fn ode_integrate(ty: LieType, a0: &[f64], b0: &[f64], t_min: f64, t_max: f64, controls: &OdeControls) -> Result<Trajectory> {
    let cm = cartan_matrix(ty)?;
    let l = cm.rank();
    if a0.len() != l || b0.len() != l {
        return Err(Error::InvalidArgument(format!("{ty} needs {l} values of a and of b")));
    }
    if !(t_min <= 0.0 && t_max >= 0.0) || a0.iter().chain(b0).any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("need t_min <= 0 <= t_max and finite initial data".into()));
    }
    let c: Vec<Vec<f64>> = cm.entries().iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let kappa: Vec<f64> = cm.symmetrizer().into_iter().map(|k| k as f64).collect();
    let y0 = DVector::from_iterator(2 * l, b0.iter().chain(a0).copied());
    let mut times = Vec::new();
    let mut states: Vec<DVector<f64>> = Vec::new();
    let mut events = Vec::new();
    if t_min < 0.0 {
        let (ts, ys, ev) = run(Toda { c: c.clone(), threshold: controls.blowup_threshold }, &y0, t_min, controls)?;
        times.extend(ts.into_iter().rev());
        states.extend(ys.into_iter().rev());
        events.extend(ev);
        times.pop();
        states.pop();
    }
    if t_max > 0.0 {
        let (ts, ys, ev) = run(Toda { c: c.clone(), threshold: controls.blowup_threshold }, &y0, t_max, controls)?;
        times.extend(ts);
        states.extend(ys);
        events.extend(ev);
    } else {
        times.push(0.0);
        states.push(y0);
    }
    let invariant = states
        .iter()
        .map(|y| {
            let mut h = 0.0;
            for i in 0..l {
                let cb: f64 = (0..l).map(|j| c[i][j] * y[j]).sum();
                h += 0.5 * kappa[i] * y[i] * cb + kappa[i] * y[l + i];
            }
            h
        })
        .collect();
    Ok(Trajectory {
        lie_type: ty.to_string(),
        times,
        a: states.iter().map(|y| (0..l).map(|i| y[l + i]).collect()).collect(),
        b: states.iter().map(|y| (0..l).map(|i| y[i]).collect()).collect(),
        invariant,
        events,
    })
}

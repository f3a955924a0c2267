//! Fixed-step time integration of the complete robot state.

mod log;
mod profile;

pub use log::{Sample, Trajectory, CSV_COLUMNS};
pub use profile::{ActuatorProfile, ScalarProfile, Spline};

use crate::dynamics::{euler_rates_regularized, Evaluation, FrictionMode, Plant};
use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Vector3};
use crate::kinematics::{center_velocity, rolling_rates, AttitudeState, GroundTrack, SlipState};

use std::f64::consts::PI;

/// Complete integrable state. The rate fields of `attitude` and the joint
/// rates in `chain` are derived quantities, refreshed by [`derivative`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimState {
    pub time: f64,
    pub attitude: AttitudeState,
    /// Shell angular velocity, shell frame.
    pub omega: Vector3,
    pub slip: SlipState,
    pub track: GroundTrack,
    pub phi: f64,
    pub psi: f64,
    pub rho: f64,
    pub friction_mode: FrictionMode,
}

impl SimState {
    /// State at `time` with the shell at the given attitude angles and body
    /// rate, the contact point at the origin and the friction mode decided
    /// from the initial torques.
    pub fn new(
        plant: &Plant,
        profile: &ActuatorProfile,
        time: f64,
        attitude: AttitudeState,
        omega: Vector3,
        slip: SlipState,
        rho: f64,
    ) -> Result<Self> {
        let track = GroundTrack::above_contact(&attitude, &plant.shape, 0.0, 0.0);
        let (phi, psi, _) = profile.joints(time, rho);
        let mut s = Self {
            time,
            attitude: AttitudeState {
                alpha_rate: 0.0,
                beta_rate: 0.0,
                gamma_rate: 0.0,
                ..attitude
            },
            omega,
            slip,
            track,
            phi: phi.angle,
            psi: psi.angle,
            rho,
            friction_mode: FrictionMode::Stokes,
        };
        s.canonicalize_angles();
        if plant.friction {
            let e = evaluate(&s, profile, plant, FrictionMode::Stiction)?;
            s.friction_mode = FrictionMode::classify(e.torques.t_f, s.slip.gamma_slip_rate, plant.params.tau_fcrit);
        }
        Ok(s)
    }

    /// Folds `beta_v` into `[0, pi]` (same shell orientation) and wraps the
    /// other two attitude angles to `(-pi, pi]`.
    pub fn canonicalize_angles(&mut self) {
        let a = &mut self.attitude;
        let mut beta = wrap_angle(a.beta_v);
        if beta < 0.0 {
            beta = -beta;
            a.alpha_v += PI;
            a.gamma_v += PI;
        }
        a.beta_v = beta;
        a.alpha_v = wrap_angle(a.alpha_v);
        a.gamma_v = wrap_angle(a.gamma_v);
    }

    const LEN: usize = 13;

    fn to_vec(self) -> [f64; Self::LEN] {
        let a = self.attitude;
        let t = self.track;
        [
            a.alpha_v,
            a.beta_v,
            a.gamma_v,
            self.omega.x,
            self.omega.y,
            self.omega.z,
            self.slip.gamma_slip_rate,
            t.x_p,
            t.y_p,
            t.cx,
            t.cy,
            t.cz,
            self.rho,
        ]
    }

    fn with_vec(mut self, v: &[f64; Self::LEN]) -> Self {
        self.attitude.alpha_v = v[0];
        self.attitude.beta_v = v[1];
        self.attitude.gamma_v = v[2];
        self.omega = Vector3::new(v[3], v[4], v[5]);
        self.slip.gamma_slip_rate = v[6];
        self.track = GroundTrack {
            x_p: v[7],
            y_p: v[8],
            cx: v[9],
            cy: v[10],
            cz: v[11],
        };
        self.rho = v[12];
        self
    }

    fn is_finite(&self) -> bool {
        self.to_vec().iter().all(|v| v.is_finite())
    }
}

/// Time derivative of a [`SimState`] together with the quantities computed
/// on the way.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateRate {
    /// The input state with attitude rates, joint angles and time-dependent
    /// fields refreshed.
    pub state: SimState,
    pub evaluation: Evaluation,
    rates: [f64; SimState::LEN],
}

fn evaluate(state: &SimState, profile: &ActuatorProfile, plant: &Plant, mode: FrictionMode) -> Result<Evaluation> {
    let chain = profile.chain_state(state.time, state.rho, state.omega);
    let applied = profile.applied(state.time);
    plant.evaluate(&state.attitude, &state.slip, &chain, &applied, mode)
}

/// Right-hand side of the equations of motion, with the friction mode
/// stored in `state`.
pub fn derivative(state: &SimState, profile: &ActuatorProfile, plant: &Plant) -> Result<StateRate> {
    let t = state.time;
    let chain = profile.chain_state(t, state.rho, state.omega);
    let e = plant.evaluate(
        &state.attitude,
        &state.slip,
        &chain,
        &profile.applied(t),
        state.friction_mode,
    )?;

    let mut refreshed = *state;
    refreshed.phi = chain.phi.angle;
    refreshed.psi = chain.psi.angle;
    let att = &mut refreshed.attitude;
    // attitude matrix is Rz(gamma) Rx(beta) Rz(alpha)
    let (gamma_rate, beta_rate, alpha_rate) = euler_rates_regularized(&state.omega, att.beta_v, att.alpha_v);
    att.alpha_rate = alpha_rate;
    att.beta_rate = beta_rate;
    att.gamma_rate = gamma_rate;

    let contact = rolling_rates(att, &state.slip, &plant.shape);
    let v = center_velocity(att, &contact, &plant.shape);
    let w = e.omega_dot;
    let rates = [
        alpha_rate,
        beta_rate,
        gamma_rate,
        w.x,
        w.y,
        w.z,
        e.slip_accel,
        contact.x_p_rate,
        contact.y_p_rate,
        v.x,
        v.y,
        v.z,
        chain.rho.rate,
    ];
    Ok(StateRate {
        state: refreshed,
        evaluation: e,
        rates,
    })
}

fn advance(state: &SimState, k: &[f64; SimState::LEN], h: f64) -> SimState {
    let mut v = state.to_vec();
    for (x, d) in v.iter_mut().zip(k) {
        *x += h * d;
    }
    let mut s = state.with_vec(&v);
    s.time = state.time + h;
    s
}

/// One classical Runge-Kutta step with the friction mode held fixed,
/// followed by angle normalisation and the friction-mode update at the new
/// state. Time is set to `time_end` to avoid accumulating rounding.
fn step_to(state: &SimState, profile: &ActuatorProfile, plant: &Plant, dt: f64, time_end: f64) -> Result<SimState> {
    let k1 = derivative(state, profile, plant)?.rates;
    let k2 = derivative(&advance(state, &k1, 0.5 * dt), profile, plant)?.rates;
    let k3 = derivative(&advance(state, &k2, 0.5 * dt), profile, plant)?.rates;
    let k4 = derivative(&advance(state, &k3, dt), profile, plant)?.rates;
    let mut v = state.to_vec();
    for i in 0..SimState::LEN {
        v[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    let mut next = state.with_vec(&v);
    next.time = time_end;
    next.canonicalize_angles();
    if !next.is_finite() {
        return Err(Error::NonFinite {
            time: time_end,
            what: "state after integration step".into(),
        });
    }

    if plant.friction {
        let e = evaluate(&next, profile, plant, next.friction_mode)?;
        let mode = next
            .friction_mode
            .next(e.torques.t_f, next.slip.gamma_slip_rate, plant.params.tau_fcrit);
        if mode == FrictionMode::Stiction {
            next.slip.gamma_slip_rate = 0.0;
        }
        next.friction_mode = mode;
    }
    Ok(next)
}

/// Classical fourth-order Runge-Kutta step of size `dt`.
pub fn step_rk4(state: &SimState, profile: &ActuatorProfile, plant: &Plant, dt: f64) -> Result<SimState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::config("run.dt", format!("must be > 0, got {dt}")));
    }
    step_to(state, profile, plant, dt, state.time + dt)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub t_end: f64,
    pub dt: f64,
    /// Record every n-th step; the final state is always recorded.
    pub sample_every: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            t_end: 1.0,
            dt: 1e-4,
            sample_every: 100,
        }
    }
}

impl RunOptions {
    /// Number of steps: `t_end / dt` rounded to the nearest integer.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::config("run.t_end", format!("must be >= 0, got {}", self.t_end)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config("run.dt", format!("must be > 0, got {}", self.dt)));
        }
        if self.sample_every == 0 {
            return Err(Error::config("run.sample_every", "must be at least 1"));
        }
        Ok(())
    }
}

/// Integrates from `initial` for `opts.steps()` steps of `opts.dt`.
pub fn simulate(initial: &SimState, profile: &ActuatorProfile, plant: &Plant, opts: &RunOptions) -> Result<Trajectory> {
    opts.validate()?;
    let steps = opts.steps();
    let t0 = initial.time;
    let mut samples = Vec::with_capacity(steps / opts.sample_every + 2);
    samples.push(Sample::record(initial, profile, plant)?);
    let mut state = *initial;
    for k in 1..=steps {
        state = step_to(&state, profile, plant, opts.dt, t0 + k as f64 * opts.dt)?;
        if k % opts.sample_every == 0 || k == steps {
            samples.push(Sample::record(&state, profile, plant)?);
        }
    }
    Ok(Trajectory { samples })
}

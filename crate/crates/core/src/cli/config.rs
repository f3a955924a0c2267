//! Scenario files: flat `section.key = value` lines, `#` starts a comment.
//!
//! Angles (initial attitude, rotor angle, servo profiles) are written in
//! degrees; everything else is SI. Actuator channels take a profile
//! expression such as `sinusoid(amplitude = 20, frequency = 0.5)`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::dynamics::{Plant, RobotParams};
use crate::error::{Error, Result};
use crate::geometry::Vector3;
use crate::integrator::{ActuatorProfile, RunOptions, ScalarProfile, SimState};
use crate::kinematics::{AttitudeState, GroundTrack, SlipState};

#[derive(Debug, Clone, PartialEq)]
pub struct InitialConditions {
    pub alpha_v_deg: f64,
    pub beta_v_deg: f64,
    pub gamma_v_deg: f64,
    /// Shell angular velocity, shell frame (rad/s).
    pub omega: Vector3,
    pub slip_rate: f64,
    pub rho_deg: f64,
    pub x_p: f64,
    pub y_p: f64,
}

impl Default for InitialConditions {
    fn default() -> Self {
        Self {
            alpha_v_deg: 0.0,
            beta_v_deg: 0.0,
            gamma_v_deg: 0.0,
            omega: Vector3::zeros(),
            slip_rate: 0.0,
            rho_deg: 0.0,
            x_p: 0.0,
            y_p: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub robot: RobotParams,
    pub initial: InitialConditions,
    /// As written: `mu1` and `mu2` in degrees.
    pub profile: ActuatorProfile,
    pub run: RunOptions,
    pub output: Option<String>,
    pub gravity: bool,
    pub friction: bool,
}

/// Everything needed to start a run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub plant: Plant,
    pub profile: ActuatorProfile,
    pub initial: SimState,
    pub run: RunOptions,
}

const ROBOT_KEYS: [&str; 12] = [
    "robot.theta_xy",
    "robot.theta_z",
    "robot.mass",
    "robot.theta_phi_x",
    "robot.theta_phi_y",
    "robot.theta_phi_z",
    "robot.theta_psi_x",
    "robot.theta_psi_z",
    "robot.theta_g_x",
    "robot.theta_g_z",
    "robot.tau_fcrit",
    "robot.rho_f",
];

const PROFILE_KEYS: [&str; 7] = [
    "profile.mu1",
    "profile.mu2",
    "profile.rho_rate",
    "profile.torque_x",
    "profile.torque_y",
    "profile.torque_z",
    "profile.twist",
];

const OTHER_KEYS: [&str; 18] = [
    "shape.r_long",
    "shape.r_short",
    "initial.alpha_v",
    "initial.beta_v",
    "initial.gamma_v",
    "initial.omega_x",
    "initial.omega_y",
    "initial.omega_z",
    "initial.slip_rate",
    "initial.rho",
    "initial.x_p",
    "initial.y_p",
    "run.t_end",
    "run.dt",
    "run.sample_every",
    "run.output",
    "model.gravity",
    "model.friction",
];

struct Entries {
    pairs: Vec<(String, String)>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}", i + 1), "expected `key = value`"))?;
            let key = k.trim().to_string();
            let known = ROBOT_KEYS.contains(&key.as_str())
                || PROFILE_KEYS.contains(&key.as_str())
                || OTHER_KEYS.contains(&key.as_str());
            if !known {
                return Err(Error::config(key, "unknown key"));
            }
            if !seen.insert(key.clone()) {
                return Err(Error::config(key, "given more than once"));
            }
            pairs.push((key, v.trim().to_string()));
        }
        Ok(Self { pairs })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => match v.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(Some(x)),
                _ => Err(Error::config(key, format!("expected a finite number, got `{v}`"))),
            },
        }
    }

    fn required(&self, key: &str) -> Result<f64> {
        self.number(key)?
            .ok_or_else(|| Error::config(key, "missing required field"))
    }

    fn or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.number(key)?.unwrap_or(default))
    }

    fn flag(&self, key: &str, default: bool) -> Result<bool> {
        match self.raw(key) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(v) => Err(Error::config(key, format!("expected true or false, got `{v}`"))),
        }
    }

    fn profile(&self, key: &str) -> Result<ScalarProfile> {
        match self.raw(key) {
            None => Ok(ScalarProfile::default()),
            Some(v) => v.parse().map_err(|e| match e {
                Error::Profile { message, .. } => Error::config(key, message),
                other => Error::config(key, other.to_string()),
            }),
        }
    }
}

fn param_field(field: &str) -> String {
    match field {
        "r_long" | "r_short" => format!("shape.{field}"),
        f => format!("robot.{f}"),
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let e = Entries::parse(text)?;
        let theta_phi_x = e.required("robot.theta_phi_x")?;
        let robot = RobotParams {
            theta_xy: e.required("robot.theta_xy")?,
            theta_z: e.required("robot.theta_z")?,
            mass: e.required("robot.mass")?,
            r_long: e.required("shape.r_long")?,
            r_short: e.required("shape.r_short")?,
            theta_phi_x,
            theta_phi_y: e.required("robot.theta_phi_y")?,
            theta_phi_z: e.or("robot.theta_phi_z", theta_phi_x)?,
            theta_psi_x: e.required("robot.theta_psi_x")?,
            theta_psi_z: e.required("robot.theta_psi_z")?,
            theta_g_x: e.required("robot.theta_g_x")?,
            theta_g_z: e.required("robot.theta_g_z")?,
            tau_fcrit: e.required("robot.tau_fcrit")?,
            rho_f: e.required("robot.rho_f")?,
        };
        robot.validate().map_err(|err| match err {
            Error::InvalidParam { field, reason } => Error::config(param_field(field), reason),
            other => other,
        })?;

        let initial = InitialConditions {
            alpha_v_deg: e.or("initial.alpha_v", 0.0)?,
            beta_v_deg: e.or("initial.beta_v", 0.0)?,
            gamma_v_deg: e.or("initial.gamma_v", 0.0)?,
            omega: Vector3::new(
                e.or("initial.omega_x", 0.0)?,
                e.or("initial.omega_y", 0.0)?,
                e.or("initial.omega_z", 0.0)?,
            ),
            slip_rate: e.or("initial.slip_rate", 0.0)?,
            rho_deg: e.or("initial.rho", 0.0)?,
            x_p: e.or("initial.x_p", 0.0)?,
            y_p: e.or("initial.y_p", 0.0)?,
        };
        if !(0.0..=180.0).contains(&initial.beta_v_deg) {
            return Err(Error::config("initial.beta_v", "must lie in [0, 180] degrees"));
        }

        let profile = ActuatorProfile {
            mu1: e.profile("profile.mu1")?,
            mu2: e.profile("profile.mu2")?,
            rho_rate: e.profile("profile.rho_rate")?,
            torque_x: e.profile("profile.torque_x")?,
            torque_y: e.profile("profile.torque_y")?,
            torque_z: e.profile("profile.torque_z")?,
            twist: e.profile("profile.twist")?,
        };

        let sample_every = match e.raw("run.sample_every") {
            None => 100,
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| Error::config("run.sample_every", format!("expected a positive integer, got `{v}`")))?,
        };
        let run = RunOptions {
            t_end: e.or("run.t_end", 1.0)?,
            dt: e.or("run.dt", 1e-4)?,
            sample_every,
        };
        run.validate()?;
        profile.validate(0.0, run.t_end).map_err(|err| match err {
            Error::Profile { name, message } => Error::config(format!("profile.{name}"), message),
            other => other,
        })?;

        Ok(Self {
            robot,
            initial,
            profile,
            run,
            output: e.raw("run.output").map(str::to_string),
            gravity: e.flag("model.gravity", true)?,
            friction: e.flag("model.friction", true)?,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Text form accepted by [`parse`](Self::parse); every field is written.
    pub fn serialize(&self) -> String {
        let r = &self.robot;
        let i = &self.initial;
        let p = &self.profile;
        let mut out = String::new();
        let mut num = |key: &str, v: f64| {
            let _ = writeln!(out, "{key} = {v:?}");
        };
        for (k, v) in ROBOT_KEYS.iter().zip([
            r.theta_xy,
            r.theta_z,
            r.mass,
            r.theta_phi_x,
            r.theta_phi_y,
            r.theta_phi_z,
            r.theta_psi_x,
            r.theta_psi_z,
            r.theta_g_x,
            r.theta_g_z,
            r.tau_fcrit,
            r.rho_f,
        ]) {
            num(k, v);
        }
        num("shape.r_long", r.r_long);
        num("shape.r_short", r.r_short);
        num("initial.alpha_v", i.alpha_v_deg);
        num("initial.beta_v", i.beta_v_deg);
        num("initial.gamma_v", i.gamma_v_deg);
        num("initial.omega_x", i.omega.x);
        num("initial.omega_y", i.omega.y);
        num("initial.omega_z", i.omega.z);
        num("initial.slip_rate", i.slip_rate);
        num("initial.rho", i.rho_deg);
        num("initial.x_p", i.x_p);
        num("initial.y_p", i.y_p);
        for (k, (_, prof)) in PROFILE_KEYS.iter().zip(p.channels()) {
            let _ = writeln!(out, "{k} = {prof}");
        }
        let _ = writeln!(out, "run.t_end = {:?}", self.run.t_end);
        let _ = writeln!(out, "run.dt = {:?}", self.run.dt);
        let _ = writeln!(out, "run.sample_every = {}", self.run.sample_every);
        if let Some(o) = &self.output {
            let _ = writeln!(out, "run.output = {o}");
        }
        let _ = writeln!(out, "model.gravity = {}", self.gravity);
        let _ = writeln!(out, "model.friction = {}", self.friction);
        out
    }

    /// Actuator profile in radians.
    pub fn actuator_profile(&self) -> ActuatorProfile {
        let deg = 1f64.to_radians();
        ActuatorProfile {
            mu1: self.profile.mu1.scaled(deg),
            mu2: self.profile.mu2.scaled(deg),
            ..self.profile.clone()
        }
    }

    pub fn build(&self) -> Result<Scenario> {
        let plant = Plant::new(self.robot)?
            .with_gravity(self.gravity)
            .with_friction(self.friction);
        let profile = self.actuator_profile();
        let i = &self.initial;
        let attitude = AttitudeState::at_rest(
            i.alpha_v_deg.to_radians(),
            i.beta_v_deg.to_radians(),
            i.gamma_v_deg.to_radians(),
        );
        let mut initial = SimState::new(
            &plant,
            &profile,
            0.0,
            attitude,
            i.omega,
            SlipState {
                gamma_slip_rate: i.slip_rate,
            },
            i.rho_deg.to_radians(),
        )?;
        initial.track = GroundTrack::above_contact(&initial.attitude, &plant.shape, i.x_p, i.y_p);
        Ok(Scenario {
            plant,
            profile,
            initial,
            run: self.run,
        })
    }
}

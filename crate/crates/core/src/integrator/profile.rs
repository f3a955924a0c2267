//! Time functions driving the actuator, each with analytic first and second
//! derivatives.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::dynamics::{ChainState, ExternalTorque, JointState};
use crate::error::{Error, Result};
use crate::geometry::Vector3;
use crate::kinematics::gimbal_angles;

/// Scalar function of time.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarProfile {
    Constant {
        value: f64,
    },
    /// `start + rate * t`.
    Ramp {
        start: f64,
        rate: f64,
    },
    /// `offset + amplitude * sin(2 pi frequency t + phase)`; `phase_deg` in
    /// degrees, `frequency` in Hz.
    Sinusoid {
        amplitude: f64,
        frequency: f64,
        phase_deg: f64,
        offset: f64,
    },
    /// Monotone cubic Hermite interpolation through `(t, y)`, continued
    /// linearly with the end slopes.
    Spline(Spline),
}

impl Default for ScalarProfile {
    fn default() -> Self {
        ScalarProfile::Constant { value: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spline {
    t: Vec<f64>,
    y: Vec<f64>,
    slopes: Vec<f64>,
}

impl Spline {
    pub fn new(t: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let err = |m: &str| Error::Profile {
            name: "spline".into(),
            message: m.into(),
        };
        if t.len() != y.len() {
            return Err(err("t and y must have the same length"));
        }
        if t.len() < 2 {
            return Err(err("needs at least two knots"));
        }
        if t.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(err("knots must be finite"));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(err("t must be strictly increasing"));
        }
        let slopes = pchip_slopes(&t, &y);
        Ok(Self { t, y, slopes })
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.t, &self.y)
    }

    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let n = self.t.len();
        if x <= self.t[0] {
            let m = self.slopes[0];
            return (self.y[0] + m * (x - self.t[0]), m, 0.0);
        }
        if x >= self.t[n - 1] {
            let m = self.slopes[n - 1];
            return (self.y[n - 1] + m * (x - self.t[n - 1]), m, 0.0);
        }
        let k = self.t.partition_point(|&tk| tk <= x) - 1;
        let h = self.t[k + 1] - self.t[k];
        let s = (x - self.t[k]) / h;
        let (y0, y1) = (self.y[k], self.y[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let (s2, s3) = (s * s, s * s * s);
        let value =
            (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1;
        let d1 = ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * m1)
            / h;
        let d2 =
            ((12.0 * s - 6.0) * y0 + (6.0 * s - 4.0) * m0 + (-12.0 * s + 6.0) * y1 + (6.0 * s - 2.0) * m1) / (h * h);
        (value, d1, d2)
    }
}

// Fritsch-Carlson slopes with the weighted harmonic mean and
// shape-preserving three-point end conditions.
fn pchip_slopes(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![d[0], d[0]];
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s.signum() != d0.signum() || d0 == 0.0 {
            0.0
        } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    m[0] = end(h[0], h[1], d[0], d[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

impl ScalarProfile {
    pub fn constant(value: f64) -> Self {
        ScalarProfile::Constant { value }
    }

    pub fn spline(t: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        Ok(ScalarProfile::Spline(Spline::new(t, y)?))
    }

    /// Value and first two time derivatives.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        match self {
            ScalarProfile::Constant { value } => (*value, 0.0, 0.0),
            ScalarProfile::Ramp { start, rate } => (start + rate * t, *rate, 0.0),
            ScalarProfile::Sinusoid {
                amplitude,
                frequency,
                phase_deg,
                offset,
            } => {
                let w = TAU * frequency;
                let (s, c) = (w * t + phase_deg.to_radians()).sin_cos();
                (offset + amplitude * s, amplitude * w * c, -amplitude * w * w * s)
            }
            ScalarProfile::Spline(sp) => sp.eval(t),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    pub fn d1(&self, t: f64) -> f64 {
        self.eval(t).1
    }

    pub fn d2(&self, t: f64) -> f64 {
        self.eval(t).2
    }

    /// The same function multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        match self {
            ScalarProfile::Constant { value } => ScalarProfile::Constant { value: value * k },
            ScalarProfile::Ramp { start, rate } => ScalarProfile::Ramp {
                start: start * k,
                rate: rate * k,
            },
            ScalarProfile::Sinusoid {
                amplitude,
                frequency,
                phase_deg,
                offset,
            } => ScalarProfile::Sinusoid {
                amplitude: amplitude * k,
                frequency: *frequency,
                phase_deg: *phase_deg,
                offset: offset * k,
            },
            ScalarProfile::Spline(sp) => ScalarProfile::Spline(Spline {
                t: sp.t.clone(),
                y: sp.y.iter().map(|v| v * k).collect(),
                slopes: sp.slopes.iter().map(|v| v * k).collect(),
            }),
        }
    }

    fn knot_times(&self) -> &[f64] {
        match self {
            ScalarProfile::Spline(sp) => &sp.t,
            _ => &[],
        }
    }

    /// Compares the analytic derivatives with central differences on
    /// `[t0, t1]`, away from spline knots where the second derivative jumps.
    pub fn check_derivatives(&self, name: &str, t0: f64, t1: f64) -> Result<()> {
        const H: f64 = 1e-5;
        let samples = 97;
        let span = (t1 - t0).max(1e-3);
        for k in 0..samples {
            let t = t0 + span * (k as f64 + 0.5) / samples as f64;
            if self.knot_times().iter().any(|&kt| (kt - t).abs() < 4.0 * H) {
                continue;
            }
            let (v, d1, d2) = self.eval(t);
            let (vp, d1p, _) = self.eval(t + H);
            let (vm, d1m, _) = self.eval(t - H);
            let fd1 = (vp - vm) / (2.0 * H);
            let fd2 = (d1p - d1m) / (2.0 * H);
            let scale1 = 1.0 + v.abs() + d1.abs();
            let scale2 = 1.0 + d1.abs() + d2.abs();
            if !(v.is_finite() && d1.is_finite() && d2.is_finite()) {
                return Err(Error::Profile {
                    name: name.into(),
                    message: format!("non-finite value at t = {t}"),
                });
            }
            if (fd1 - d1).abs() > 1e-5 * scale1 || (fd2 - d2).abs() > 1e-4 * scale2 {
                return Err(Error::Profile {
                    name: name.into(),
                    message: format!("derivatives inconsistent with values at t = {t}"),
                });
            }
        }
        Ok(())
    }
}

fn fmt_num(v: f64) -> String {
    // shortest representation that parses back to the same f64
    format!("{v:?}")
}

impl fmt::Display for ScalarProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarProfile::Constant { value } => write!(f, "constant(value = {})", fmt_num(*value)),
            ScalarProfile::Ramp { start, rate } => {
                write!(f, "ramp(start = {}, rate = {})", fmt_num(*start), fmt_num(*rate))
            }
            ScalarProfile::Sinusoid {
                amplitude,
                frequency,
                phase_deg,
                offset,
            } => write!(
                f,
                "sinusoid(amplitude = {}, frequency = {}, phase_deg = {}, offset = {})",
                fmt_num(*amplitude),
                fmt_num(*frequency),
                fmt_num(*phase_deg),
                fmt_num(*offset)
            ),
            ScalarProfile::Spline(sp) => {
                let list = |v: &[f64]| v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(", ");
                write!(f, "spline(t = [{}], y = [{}])", list(&sp.t), list(&sp.y))
            }
        }
    }
}

enum ArgValue {
    Number(f64),
    List(Vec<f64>),
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl FromStr for ScalarProfile {
    type Err = Error;

    /// Parses `name(key = value, ...)`, where a value is a number or a
    /// bracketed comma-separated list.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = |m: String| Error::Profile {
            name: s.to_string(),
            message: m,
        };
        let open = s.find('(').ok_or_else(|| err("expected `name(...)`".into()))?;
        if !s.ends_with(')') {
            return Err(err("missing closing parenthesis".into()));
        }
        let name = s[..open].trim();
        let body = &s[open + 1..s.len() - 1];

        let mut args: Vec<(String, ArgValue)> = Vec::new();
        if !body.trim().is_empty() {
            for part in split_top_level(body) {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| err(format!("argument `{}` is not `key = value`", part.trim())))?;
                let key = k.trim().to_string();
                let v = v.trim();
                let value = if let Some(inner) = v.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                    let items = inner
                        .split(',')
                        .filter(|x| !x.trim().is_empty())
                        .map(|x| x.trim().parse::<f64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| err(format!("bad number list for `{key}`")))?;
                    ArgValue::List(items)
                } else {
                    ArgValue::Number(v.parse().map_err(|_| err(format!("bad number `{v}` for `{key}`")))?)
                };
                if args.iter().any(|(k, _)| *k == key) {
                    return Err(err(format!("duplicate argument `{key}`")));
                }
                args.push((key, value));
            }
        }

        let mut take_num = |key: &str, default: Option<f64>| -> Result<f64> {
            match args.iter().position(|(k, _)| k == key) {
                Some(i) => match args.remove(i).1 {
                    ArgValue::Number(v) if v.is_finite() => Ok(v),
                    ArgValue::Number(_) => Err(err(format!("`{key}` must be finite"))),
                    ArgValue::List(_) => Err(err(format!("`{key}` must be a number"))),
                },
                None => default.ok_or_else(|| err(format!("missing argument `{key}`"))),
            }
        };

        let profile = match name {
            "constant" => ScalarProfile::Constant {
                value: take_num("value", None)?,
            },
            "ramp" => ScalarProfile::Ramp {
                start: take_num("start", Some(0.0))?,
                rate: take_num("rate", None)?,
            },
            "sinusoid" => ScalarProfile::Sinusoid {
                amplitude: take_num("amplitude", None)?,
                frequency: take_num("frequency", None)?,
                phase_deg: take_num("phase_deg", Some(0.0))?,
                offset: take_num("offset", Some(0.0))?,
            },
            "spline" => {
                let mut take_list = |key: &str| -> Result<Vec<f64>> {
                    match args.iter().position(|(k, _)| k == key) {
                        Some(i) => match args.remove(i).1 {
                            ArgValue::List(v) => Ok(v),
                            ArgValue::Number(_) => Err(err(format!("`{key}` must be a list"))),
                        },
                        None => Err(err(format!("missing argument `{key}`"))),
                    }
                };
                let t = take_list("t")?;
                let y = take_list("y")?;
                ScalarProfile::Spline(Spline::new(t, y).map_err(|e| match e {
                    Error::Profile { message, .. } => err(message),
                    other => other,
                })?)
            }
            other => return Err(err(format!("unknown profile `{other}`"))),
        };
        if let Some((k, _)) = args.first() {
            return Err(err(format!("unexpected argument `{k}`")));
        }
        Ok(profile)
    }
}

/// Everything prescribed as a function of time: servo angles (radians),
/// rotor speed and externally applied torques.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ActuatorProfile {
    pub mu1: ScalarProfile,
    pub mu2: ScalarProfile,
    pub rho_rate: ScalarProfile,
    pub torque_x: ScalarProfile,
    pub torque_y: ScalarProfile,
    pub torque_z: ScalarProfile,
    /// Torque about the world vertical.
    pub twist: ScalarProfile,
}

impl ActuatorProfile {
    pub fn channels(&self) -> [(&'static str, &ScalarProfile); 7] {
        [
            ("mu1", &self.mu1),
            ("mu2", &self.mu2),
            ("rho_rate", &self.rho_rate),
            ("torque_x", &self.torque_x),
            ("torque_y", &self.torque_y),
            ("torque_z", &self.torque_z),
            ("twist", &self.twist),
        ]
    }

    pub fn validate(&self, t0: f64, t1: f64) -> Result<()> {
        for (name, p) in self.channels() {
            p.check_derivatives(name, t0, t1)?;
        }
        Ok(())
    }

    /// Joint motion at time `t`. The rotor angle is integrated by the caller
    /// and passed in.
    pub fn joints(&self, t: f64, rho: f64) -> (JointState, JointState, JointState) {
        let (m1, m1d, m1dd) = self.mu1.eval(t);
        let (m2, m2d, m2dd) = self.mu2.eval(t);
        let (phi, psi) = gimbal_angles(m1, m2);
        let (phi_d, psi_d) = gimbal_angles(m1d, m2d);
        let (phi_dd, psi_dd) = gimbal_angles(m1dd, m2dd);
        let (rate, accel, _) = self.rho_rate.eval(t);
        (
            JointState::new(phi, phi_d, phi_dd),
            JointState::new(psi, psi_d, psi_dd),
            JointState::new(rho, rate, accel),
        )
    }

    pub fn chain_state(&self, t: f64, rho: f64, omega: Vector3) -> ChainState {
        let (phi, psi, rho) = self.joints(t, rho);
        ChainState {
            phi,
            psi,
            rho,
            omega,
            omega_dot: Vector3::zeros(),
        }
    }

    pub fn applied(&self, t: f64) -> ExternalTorque {
        ExternalTorque {
            shell: Vector3::new(self.torque_x.value(t), self.torque_y.value(t), self.torque_z.value(t)),
            world_twist: self.twist.value(t),
        }
    }
}

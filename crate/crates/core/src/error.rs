use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("axial coordinate {z} outside the shell (|z| must not exceed {r_long})")]
    OutsideShell { z: f64, r_long: f64 },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid robot parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    #[error("combined inertia tensor is singular (det = {det:e})")]
    DegenerateInertia { det: f64 },

    #[error("gimbal lock: |sin(beta)| = {sin_beta:e} below 1e-6")]
    GimbalLock { sin_beta: f64 },

    #[error("no binding for atom `{0}`")]
    MissingBinding(String),

    #[error("binding for atom `{atom}` has the wrong kind (expected {expected})")]
    BindingKind { atom: String, expected: &'static str },

    #[error("malformed term `{0}`")]
    MalformedTerm(String),

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("actuator profile `{name}`: {message}")]
    Profile { name: String, message: String },

    #[error("non-finite state at t = {time}: {what}")]
    NonFinite { time: f64, what: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

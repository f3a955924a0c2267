use std::collections::HashMap;

use super::{Atom, SymbolicSum};
use crate::dynamics::{ChainState, FrameChain};
use crate::error::{Error, Result};
use crate::geometry::{Matrix3, Vector3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Binding {
    Matrix(Matrix3),
    Vector(Vector3),
}

/// Numeric values for atoms.
#[derive(Debug, Clone, Default)]
pub struct Bindings {
    values: HashMap<Atom, Binding>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_matrix(&mut self, atom: Atom, m: Matrix3) -> &mut Self {
        self.values.insert(atom, Binding::Matrix(m));
        self
    }

    pub fn set_vector(&mut self, atom: Atom, v: Vector3) -> &mut Self {
        self.values.insert(atom, Binding::Vector(v));
        self
    }

    pub fn remove(&mut self, atom: Atom) -> Option<Binding> {
        self.values.remove(&atom)
    }

    /// Every atom bound to the corresponding quantity of `chain` in `state`.
    pub fn from_chain(chain: &FrameChain, state: &ChainState) -> Self {
        let mut b = Self::new();
        b.set_vector(Atom::OmegaBody, state.omega);
        b.set_vector(Atom::OmegaBodyDot, state.omega_dot);
        for (i, frame) in chain.frames().iter().enumerate() {
            let n = i as u8 + 1;
            b.set_matrix(Atom::Inertia(n), frame.inertia_tensor());
            if let Some(m) = frame.relative_motion(state) {
                b.set_matrix(Atom::RelRot(n), m.rot)
                    .set_matrix(Atom::RelRotInv(n), m.rot_inv)
                    .set_matrix(Atom::RelRotDot(n), m.rot_dot)
                    .set_matrix(Atom::RelRotInvDot(n), m.rot_inv_dot)
                    .set_vector(Atom::RelRate(n), m.rate)
                    .set_vector(Atom::RelRateDot(n), m.rate_dot);
            }
        }
        b
    }

    fn matrix(&self, atom: Atom) -> Result<&Matrix3> {
        match self.values.get(&atom) {
            Some(Binding::Matrix(m)) => Ok(m),
            Some(Binding::Vector(_)) => Err(Error::BindingKind {
                atom: atom.to_string(),
                expected: "matrix",
            }),
            None => Err(Error::MissingBinding(atom.to_string())),
        }
    }

    fn vector(&self, atom: Atom) -> Result<&Vector3> {
        match self.values.get(&atom) {
            Some(Binding::Vector(v)) => Ok(v),
            Some(Binding::Matrix(_)) => Err(Error::BindingKind {
                atom: atom.to_string(),
                expected: "vector",
            }),
            None => Err(Error::MissingBinding(atom.to_string())),
        }
    }
}

/// Numeric value of a sum: every term's matrices applied right to left to
/// its vector, summed.
pub fn evaluate(sum: &SymbolicSum, bindings: &Bindings) -> Result<Vector3> {
    let mut total = Vector3::zeros();
    for term in sum.terms() {
        let (last, matrices) = term.factors().split_last().expect("validated non-empty");
        let mut v = *bindings.vector(*last)?;
        for atom in matrices.iter().rev() {
            v = bindings.matrix(*atom)? * v;
        }
        total += v;
    }
    Ok(total)
}

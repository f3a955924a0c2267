//! Noncommutative term algebra for the angular-momentum chain.
//!
//! A term is an ordered product of opaque matrix atoms closed by one vector
//! atom, e.g. `R2- R3- Th3 w3r`. Sums are multisets of terms compared in
//! canonical (sorted) order. Atoms never commute and are never simplified;
//! the only rewriting is distribution and the product rule.

mod eval;
mod expand;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use eval::{evaluate, Binding, Bindings};
pub use expand::{expand_b, expand_l, expand_tmec, mass_matrix_terms, recursive_tmec};

/// Reference listing of the expanded angular momentum, canonical order.
pub const GOLDEN_L: &str = include_str!("../../golden/appendix_a.txt");
/// Reference listing of the rate-dependent torque part, canonical order.
pub const GOLDEN_B: &str = include_str!("../../golden/appendix_b.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `Rn`: rotation from frame n-1 into frame n coordinates.
    RelRot(u8),
    /// `Rn-`: its inverse.
    RelRotInv(u8),
    RelRotDot(u8),
    RelRotInvDot(u8),
    /// `Thn`: principal inertia tensor of frame n.
    Inertia(u8),
    OmegaBody,
    OmegaBodyDot,
    /// `wnr`: joint rate vector of frame n.
    RelRate(u8),
    RelRateDot(u8),
}

impl Atom {
    pub fn is_vector(self) -> bool {
        matches!(
            self,
            Atom::OmegaBody | Atom::OmegaBodyDot | Atom::RelRate(_) | Atom::RelRateDot(_)
        )
    }

    pub fn is_dotted(self) -> bool {
        matches!(
            self,
            Atom::RelRotDot(_) | Atom::RelRotInvDot(_) | Atom::OmegaBodyDot | Atom::RelRateDot(_)
        )
    }

    /// Time derivative: `Ok(None)` for constant atoms, an error for atoms
    /// that are already derivatives.
    pub fn derivative(self) -> Result<Option<Atom>> {
        Ok(match self {
            Atom::RelRot(n) => Some(Atom::RelRotDot(n)),
            Atom::RelRotInv(n) => Some(Atom::RelRotInvDot(n)),
            Atom::Inertia(_) => None,
            Atom::OmegaBody => Some(Atom::OmegaBodyDot),
            Atom::RelRate(n) => Some(Atom::RelRateDot(n)),
            dotted => {
                return Err(Error::MalformedTerm(format!(
                    "second derivative of `{dotted}` is not representable"
                )))
            }
        })
    }

    fn index_ok(self) -> bool {
        match self {
            Atom::Inertia(n) => (1..=4).contains(&n),
            Atom::RelRot(n) | Atom::RelRotInv(n) | Atom::RelRotDot(n) | Atom::RelRotInvDot(n) => (2..=4).contains(&n),
            Atom::RelRate(n) | Atom::RelRateDot(n) => (2..=4).contains(&n),
            Atom::OmegaBody | Atom::OmegaBodyDot => true,
        }
    }

    /// Every atom that can occur in the chain expansions.
    pub fn all() -> Vec<Atom> {
        let mut out = vec![Atom::OmegaBody, Atom::OmegaBodyDot];
        out.extend((1..=4).map(Atom::Inertia));
        for n in 2..=4 {
            out.extend([
                Atom::RelRot(n),
                Atom::RelRotInv(n),
                Atom::RelRotDot(n),
                Atom::RelRotInvDot(n),
                Atom::RelRate(n),
                Atom::RelRateDot(n),
            ]);
        }
        out
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::RelRot(n) => write!(f, "R{n}"),
            Atom::RelRotInv(n) => write!(f, "R{n}-"),
            Atom::RelRotDot(n) => write!(f, "dR{n}"),
            Atom::RelRotInvDot(n) => write!(f, "dR{n}-"),
            Atom::Inertia(n) => write!(f, "Th{n}"),
            Atom::OmegaBody => f.write_str("w"),
            Atom::OmegaBodyDot => f.write_str("dw"),
            Atom::RelRate(n) => write!(f, "w{n}r"),
            Atom::RelRateDot(n) => write!(f, "dw{n}r"),
        }
    }
}

impl FromStr for Atom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedTerm(format!("unknown atom `{s}`"));
        let digit = |t: &str| -> Result<u8> {
            match t.as_bytes() {
                [d @ b'0'..=b'9'] => Ok(d - b'0'),
                _ => Err(bad()),
            }
        };
        let atom = match s {
            "w" => Atom::OmegaBody,
            "dw" => Atom::OmegaBodyDot,
            _ => {
                if let Some(rest) = s.strip_prefix("Th") {
                    Atom::Inertia(digit(rest)?)
                } else if let Some(rest) = s.strip_prefix("dR") {
                    match rest.strip_suffix('-') {
                        Some(n) => Atom::RelRotInvDot(digit(n)?),
                        None => Atom::RelRotDot(digit(rest)?),
                    }
                } else if let Some(rest) = s.strip_prefix('R') {
                    match rest.strip_suffix('-') {
                        Some(n) => Atom::RelRotInv(digit(n)?),
                        None => Atom::RelRot(digit(rest)?),
                    }
                } else if let Some(rest) = s.strip_prefix("dw").and_then(|r| r.strip_suffix('r')) {
                    Atom::RelRateDot(digit(rest)?)
                } else if let Some(rest) = s.strip_prefix('w').and_then(|r| r.strip_suffix('r')) {
                    Atom::RelRate(digit(rest)?)
                } else {
                    return Err(bad());
                }
            }
        };
        if !atom.index_ok() {
            return Err(Error::MalformedTerm(format!("atom `{s}` has no frame with that index")));
        }
        Ok(atom)
    }
}

/// Ordered product of matrix atoms applied to one trailing vector atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicTerm {
    factors: Vec<Atom>,
}

impl SymbolicTerm {
    pub fn new(factors: Vec<Atom>) -> Result<Self> {
        let term = Self { factors };
        match term.factors.split_last() {
            Some((last, matrices)) if last.is_vector() && !matrices.iter().any(|a| a.is_vector()) => Ok(term),
            _ => Err(Error::MalformedTerm(term.render())),
        }
    }

    pub fn factors(&self) -> &[Atom] {
        &self.factors
    }

    pub fn vector(&self) -> Atom {
        *self.factors.last().expect("validated non-empty")
    }

    pub fn contains(&self, atom: Atom) -> bool {
        self.factors.contains(&atom)
    }

    /// `atom * self`.
    pub fn premultiply(&self, atom: Atom) -> Self {
        debug_assert!(!atom.is_vector());
        let mut factors = Vec::with_capacity(self.factors.len() + 1);
        factors.push(atom);
        factors.extend_from_slice(&self.factors);
        Self { factors }
    }

    /// Product rule: one term per non-constant factor.
    pub fn derivative(&self) -> Result<Vec<SymbolicTerm>> {
        let mut out = Vec::new();
        for (i, atom) in self.factors.iter().enumerate() {
            if let Some(d) = atom.derivative()? {
                let mut factors = self.factors.clone();
                factors[i] = d;
                out.push(Self { factors });
            }
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        self.factors.iter().map(Atom::to_string).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for SymbolicTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for SymbolicTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let factors = s.split_whitespace().map(str::parse).collect::<Result<Vec<Atom>>>()?;
        SymbolicTerm::new(factors).map_err(|_| Error::MalformedTerm(s.trim().to_string()))
    }
}

/// Multiset of terms.
#[derive(Debug, Clone, Default)]
pub struct SymbolicSum {
    terms: Vec<SymbolicTerm>,
}

impl SymbolicSum {
    pub fn new(terms: Vec<SymbolicTerm>) -> Self {
        Self { terms }
    }

    pub fn single(term: SymbolicTerm) -> Self {
        Self { terms: vec![term] }
    }

    pub fn terms(&self) -> &[SymbolicTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, term: &SymbolicTerm) -> bool {
        self.terms.contains(term)
    }

    /// Sorted by rendered text (byte order); duplicates are kept.
    pub fn canonicalize(&self) -> Self {
        let mut terms = self.terms.clone();
        terms.sort_by_cached_key(SymbolicTerm::render);
        Self { terms }
    }

    pub fn premultiply(&self, atom: Atom) -> Self {
        Self {
            terms: self.terms.iter().map(|t| t.premultiply(atom)).collect(),
        }
    }

    pub fn extend(&mut self, other: SymbolicSum) {
        self.terms.extend(other.terms);
    }

    pub fn derivative(&self) -> Result<Self> {
        let mut terms = Vec::new();
        for t in &self.terms {
            terms.extend(t.derivative()?);
        }
        Ok(Self { terms })
    }

    pub fn filter(&self, keep: impl Fn(&SymbolicTerm) -> bool) -> Self {
        Self {
            terms: self.terms.iter().filter(|t| keep(t)).cloned().collect(),
        }
    }

    /// One term per line, canonical order, trailing newline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for t in self.canonicalize().terms {
            out.push_str(&t.render());
            out.push('\n');
        }
        out
    }

    /// Parses the [`render`](Self::render) format; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let terms = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { terms })
    }

    /// Terms present in exactly one of the two sums, by multiplicity, as
    /// `(only_in_self, only_in_other)`.
    pub fn difference(&self, other: &SymbolicSum) -> (Vec<SymbolicTerm>, Vec<SymbolicTerm>) {
        let mut rest: Vec<SymbolicTerm> = other.terms.clone();
        let mut only_self = Vec::new();
        for t in &self.terms {
            match rest.iter().position(|r| r == t) {
                Some(i) => {
                    rest.swap_remove(i);
                }
                None => only_self.push(t.clone()),
            }
        }
        (only_self, rest)
    }
}

impl PartialEq for SymbolicSum {
    fn eq(&self, other: &Self) -> bool {
        self.canonicalize().terms == other.canonicalize().terms
    }
}

impl Eq for SymbolicSum {}

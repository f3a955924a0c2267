use super::{Atom, SymbolicSum, SymbolicTerm};
use crate::error::Result;

fn leaf(atom: Atom) -> SymbolicSum {
    SymbolicSum::single(SymbolicTerm::new(vec![atom]).expect("vector atom"))
}

/// Absolute angular velocities `w1..w4` (index 0..3), each in its own frame:
/// `w_n = w_n^r + R_n w_{n-1}`.
fn chain_rates() -> [SymbolicSum; 4] {
    let mut out: [SymbolicSum; 4] = Default::default();
    out[0] = leaf(Atom::OmegaBody);
    for n in 2..=4u8 {
        let i = n as usize - 1;
        let mut w = leaf(Atom::RelRate(n));
        w.extend(out[i - 1].premultiply(Atom::RelRot(n)));
        out[i] = w;
    }
    out
}

/// Total angular momentum of the chain, fully distributed:
/// `L_4 = Th4 w4`, `L_{n-1} = R_n^- L_n + Th_{n-1} w_{n-1}`.
pub fn expand_l() -> SymbolicSum {
    let w = chain_rates();
    let mut l = w[3].premultiply(Atom::Inertia(4));
    for n in (2..=4u8).rev() {
        let mut next = l.premultiply(Atom::RelRotInv(n));
        next.extend(w[n as usize - 2].premultiply(Atom::Inertia(n - 1)));
        l = next;
    }
    l.canonicalize()
}

/// Time derivative of [`expand_l`] by the product rule.
pub fn expand_tmec() -> Result<SymbolicSum> {
    Ok(expand_l().derivative()?.canonicalize())
}

/// The part of the mechanical torque that does not contain the shell's
/// angular acceleration.
pub fn expand_b() -> Result<SymbolicSum> {
    Ok(expand_tmec()?.filter(|t| !t.contains(Atom::OmegaBodyDot)))
}

/// Differentiates the recursions themselves instead of the expanded sum:
/// `w'_n = w'^r_n + R'_n w_{n-1} + R_n w'_{n-1}` and
/// `L'_{n-1} = R'^-_n L_n + R^-_n L'_n + Th_{n-1} w'_{n-1}`.
pub fn recursive_tmec() -> SymbolicSum {
    let w = chain_rates();
    let mut wd: [SymbolicSum; 4] = Default::default();
    wd[0] = leaf(Atom::OmegaBodyDot);
    for n in 2..=4u8 {
        let i = n as usize - 1;
        let mut s = leaf(Atom::RelRateDot(n));
        s.extend(w[i - 1].premultiply(Atom::RelRotDot(n)));
        s.extend(wd[i - 1].premultiply(Atom::RelRot(n)));
        wd[i] = s;
    }

    let mut l = w[3].premultiply(Atom::Inertia(4));
    let mut ld = wd[3].premultiply(Atom::Inertia(4));
    for n in (2..=4u8).rev() {
        let prev = n as usize - 2;
        let mut next_ld = l.premultiply(Atom::RelRotInvDot(n));
        next_ld.extend(ld.premultiply(Atom::RelRotInv(n)));
        next_ld.extend(wd[prev].premultiply(Atom::Inertia(n - 1)));
        let mut next_l = l.premultiply(Atom::RelRotInv(n));
        next_l.extend(w[prev].premultiply(Atom::Inertia(n - 1)));
        l = next_l;
        ld = next_ld;
    }
    ld.canonicalize()
}

/// Combined inertia `R2^-(R3^-(R4^- Th4 R4 + Th3) R3 + Th2) R2 + Th1`
/// distributed into matrix products and applied to `vector`.
pub fn mass_matrix_terms(vector: Atom) -> SymbolicSum {
    // sandwich each nested level: M <- R^- M R + Th
    let mut products: Vec<Vec<Atom>> = vec![vec![Atom::Inertia(4)]];
    for n in (2..=4u8).rev() {
        products = products
            .into_iter()
            .map(|p| {
                let mut q = Vec::with_capacity(p.len() + 2);
                q.push(Atom::RelRotInv(n));
                q.extend(p);
                q.push(Atom::RelRot(n));
                q
            })
            .collect();
        products.push(vec![Atom::Inertia(n - 1)]);
    }
    let terms = products
        .into_iter()
        .map(|mut p| {
            p.push(vector);
            SymbolicTerm::new(p).expect("matrices then vector")
        })
        .collect();
    SymbolicSum::new(terms).canonicalize()
}

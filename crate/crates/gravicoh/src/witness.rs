//! Quantumness witnesses: two basis-dependent coherence measures and an
//! entanglement quantifier for pure bipartite states.

use crate::qmat::Ket;
use crate::qstate::{Basis, DensityOperator};
use crate::{Error, Result};

/// Below this, a coherence value counts as zero ("incoherent"); matches the
/// state validation tolerance.
pub const INCOHERENCE_TOL: f64 = 1e-10;

/// Relative entropy of coherence in bits: the entropy gained by removing all
/// off-diagonal elements in the given basis, `S(ρ_diag) - S(ρ)`.
pub fn c_rel_ent(rho: &DensityOperator, basis: &Basis) -> Result<f64> {
    let dephased = rho.dephase(basis)?;
    let value = dephased.entropy()? - rho.entropy()?;
    // mathematically nonnegative; clamp eigensolver noise
    Ok(value.max(0.0))
}

/// l1-norm coherence: the sum of the moduli of all off-diagonal elements in
/// the given basis.
pub fn c_l1(rho: &DensityOperator, basis: &Basis) -> Result<f64> {
    let m = rho.in_basis(basis)?;
    let n = m.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += m.get(i, j).norm();
            }
        }
    }
    Ok(sum)
}

/// Entropy of entanglement of a pure bipartite ket, in ebits: the von
/// Neumann entropy of the reduced state of the first subsystem.
pub fn entanglement_entropy(psi: &Ket, dims: &[usize]) -> Result<f64> {
    if dims.len() != 2 {
        return Err(Error::InvalidState {
            detail: format!("entanglement entropy needs a bipartite split, got {dims:?}"),
        });
    }
    let rho = DensityOperator::from_ket(psi, dims.to_vec())?;
    rho.partial_trace(&[0])?.entropy()
}

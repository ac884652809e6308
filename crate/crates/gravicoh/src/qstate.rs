//! Validated quantum states and bases: density operators with subsystem
//! metadata, explicit orthonormal bases, dephasing, and the depolarizing
//! channel.
//!
//! Kets are always stored in the computational (left/right product) frame;
//! coherence is basis-dependent, so bases are explicit objects rather than
//! implicit conventions.

use num_complex::Complex;

use crate::qmat::{self, ComplexMatrix, Ket};
use crate::{Error, Result};

/// Shared validation tolerance for states: trace and Hermiticity deviations
/// up to this size are repaired on construction, larger ones are rejected.
/// The noisy pipelines and the grid module all construct states through it.
pub const STATE_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive matrix with subsystem-dimension metadata.
///
/// Construction validates all three properties against a tolerance
/// ([`STATE_TOL`] by default), then symmetrizes and renormalizes the trace so
/// the stored matrix satisfies the invariants to machine precision.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::with_tolerance(matrix, dims, STATE_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, dims: Vec<usize>, tol: f64) -> Result<Self> {
        let product: usize = dims.iter().product();
        if dims.is_empty() || product != matrix.dim() {
            return Err(Error::SubsystemMismatch {
                product,
                dim: matrix.dim(),
            });
        }

        let herm_dev = matrix.hermiticity_deviation();
        if herm_dev > tol {
            return Err(Error::InvalidState {
                detail: format!("Hermiticity deviation {herm_dev:.3e} exceeds {tol:.0e}"),
            });
        }
        let trace = matrix.trace();
        if (trace - Complex::new(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidState {
                detail: format!("trace {trace} differs from 1 beyond {tol:.0e}"),
            });
        }

        // repair sub-tolerance deviations so invariants hold tightly
        let sym = matrix
            .add(&matrix.adjoint())?
            .scale(Complex::new(0.5, 0.0));
        let matrix = sym.scale(Complex::new(1.0 / sym.trace().re, 0.0));

        let eig = qmat::hermitian_eigensystem(&matrix)?;
        let min_eig = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min_eig < -1e-10 {
            return Err(Error::InvalidState {
                detail: format!("minimum eigenvalue {min_eig:.3e} below -1e-10"),
            });
        }

        Ok(Self { matrix, dims })
    }

    /// Rank-one projector from a ket; the ket must be normalized within
    /// [`STATE_TOL`] (it is renormalized inside that tolerance).
    pub fn from_ket(psi: &Ket, dims: Vec<usize>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState {
                detail: "cannot build a state from the zero vector".into(),
            });
        }
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState {
                detail: format!("ket norm {norm} differs from 1 beyond {STATE_TOL:.0e}"),
            });
        }
        let psi = psi.normalized()?;
        Self::new(psi.outer(&psi)?, dims)
    }

    /// `I / dim` over the given subsystems.
    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let dim: usize = dims.iter().product();
        if dim == 0 || dim > qmat::MAX_DIM {
            return Err(Error::InvalidDimension { dim });
        }
        let m = ComplexMatrix::identity(dim).scale(Complex::new(1.0 / dim as f64, 0.0));
        Self::new(m, dims)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Tensor product of two states, concatenating subsystem lists.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::new(self.matrix.kron(&other.matrix)?, dims)
    }

    /// Trace out every subsystem not in `keep` (strictly increasing indices).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let reduced = qmat::partial_trace(&self.matrix, &self.dims, keep)?;
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        Self::new(reduced, dims)
    }

    /// Conjugate by a unitary: `U ρ U†`. The caller is responsible for `U`
    /// actually being unitary; validation on reconstruction will catch
    /// anything that breaks the state.
    pub fn apply_unitary(&self, u: &ComplexMatrix) -> Result<Self> {
        let m = u.matmul(&self.matrix)?.matmul(&u.adjoint())?;
        Self::new(m, self.dims.clone())
    }

    /// Evolve under a Hamiltonian for time `t`.
    pub fn evolve(&self, h: &ComplexMatrix, t: f64, hbar: f64) -> Result<Self> {
        let m = qmat::evolve_density(h, t, hbar, &self.matrix)?;
        Self::new(m, self.dims.clone())
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        qmat::von_neumann_entropy(&self.matrix)
    }

    /// Matrix elements `<b_i| ρ |b_j>` in the given basis.
    pub fn in_basis(&self, basis: &Basis) -> Result<ComplexMatrix> {
        if basis.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: basis.dim(),
            });
        }
        let b = basis.as_matrix();
        b.adjoint().matmul(&self.matrix)?.matmul(&b)
    }

    /// Remove all off-diagonal elements in the given basis:
    /// `ρ -> Σ_i |b_i><b_i| ρ |b_i><b_i|`.
    pub fn dephase(&self, basis: &Basis) -> Result<Self> {
        let in_b = self.in_basis(basis)?;
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            let ket = basis.ket(i);
            let proj = ket.outer(ket)?;
            m = m.add(&proj.scale(in_b.get(i, i)))?;
        }
        Self::new(m, self.dims.clone())
    }

    /// Depolarizing channel: `p ρ + (1 - p) I / dim`.
    pub fn depolarize(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter { name: "p", value: p });
        }
        let n = self.dim();
        let mixed = ComplexMatrix::identity(n).scale(Complex::new((1.0 - p) / n as f64, 0.0));
        let m = self.matrix.scale(Complex::new(p, 0.0)).add(&mixed)?;
        Self::new(m, self.dims.clone())
    }
}

/// Ordered orthonormal set of kets; the reference frame for coherence.
#[derive(Debug, Clone)]
pub struct Basis {
    dim: usize,
    kets: Vec<Ket>,
    name: String,
}

impl Basis {
    /// Validates the Gram matrix against the identity within 1e-12.
    pub fn new(name: impl Into<String>, kets: Vec<Ket>) -> Result<Self> {
        let name = name.into();
        let dim = kets.len();
        if dim == 0 || kets.iter().any(|k| k.dim() != dim) {
            return Err(Error::InvalidState {
                detail: format!("basis `{name}` needs dim kets of matching dimension"),
            });
        }
        for (i, a) in kets.iter().enumerate() {
            for (j, b) in kets.iter().enumerate() {
                let g = a.inner(b)?;
                let target = if i == j { 1.0 } else { 0.0 };
                if (g - Complex::new(target, 0.0)).norm() > 1e-12 {
                    return Err(Error::InvalidState {
                        detail: format!(
                            "basis `{name}` is not orthonormal: <b{i}|b{j}> = {g}"
                        ),
                    });
                }
            }
        }
        Ok(Self { dim, kets, name })
    }

    /// The computational frame for a qubit: `{|L>, |R>}`.
    pub fn lr() -> Self {
        Self::new("lr", vec![Ket::basis_state(2, 0), Ket::basis_state(2, 1)])
            .expect("built-in basis is orthonormal")
    }

    /// The balanced frame `{(|L> + |R>)/√2, (|L> - |R>)/√2}` in which the
    /// interferometer outputs are compared.
    pub fn pm() -> Self {
        let s = Complex::new(1.0 / 2.0_f64.sqrt(), 0.0);
        let plus = Ket::new(vec![s, s]).unwrap();
        let minus = Ket::new(vec![s, -s]).unwrap();
        Self::new("pm", vec![plus, minus]).expect("built-in basis is orthonormal")
    }

    /// Standard basis of the given dimension.
    pub fn computational(dim: usize) -> Self {
        let kets = (0..dim).map(|i| Ket::basis_state(dim, i)).collect();
        Self::new(format!("computational{dim}"), kets).expect("standard basis is orthonormal")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ket(&self, i: usize) -> &Ket {
        &self.kets[i]
    }

    pub fn kets(&self) -> &[Ket] {
        &self.kets
    }

    /// Matrix whose columns are the basis kets.
    pub fn as_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, |i, j| self.kets[j].get(i))
            .expect("basis kets are finite")
    }
}

/// `(|L> + |R>)/√2` as a ket; the standard input arm state.
pub fn balanced_ket() -> Ket {
    let s = Complex::new(1.0 / 2.0_f64.sqrt(), 0.0);
    Ket::new(vec![s, s]).unwrap()
}

/// Rank-one density operator from a single-subsystem ket.
pub fn density_from_ket(psi: &Ket) -> Result<DensityOperator> {
    DensityOperator::from_ket(psi, vec![psi.dim()])
}

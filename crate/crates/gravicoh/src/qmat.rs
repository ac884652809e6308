//! Dense complex linear algebra for small Hilbert spaces (dimension 2–16):
//! products, adjoints, Kronecker products, partial traces, Hermitian
//! eigensystems, von Neumann entropy and unitary time evolution.
//!
//! Everything is stored densely in row-major order and every value is
//! immutable after construction. At these dimensions exactness and
//! simplicity matter more than speed, so the eigensolver is a cyclic Jacobi
//! iteration (closed form for dimension 2) rather than anything clever.

use num_complex::Complex;

use crate::{Error, Result};

pub type Complex64 = Complex<f64>;

/// Hard cap on matrix dimension. Three qubits (dimension 8) is the largest
/// system any pipeline here builds; 16 leaves headroom.
pub const MAX_DIM: usize = 16;

/// Maximum tolerated `max |H - H†|` before an operation that requires a
/// Hermitian input refuses to run.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Jacobi sweep target: off-diagonal Frobenius norm relative to the
/// Frobenius norm of the input.
const JACOBI_REL_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

const ZERO: Complex64 = Complex::new(0.0, 0.0);
const ONE: Complex64 = Complex::new(1.0, 0.0);

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidDimension { dim });
    }
    Ok(())
}

/// Dense square matrix of complex amplitudes, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from row-major entries; requires `entries.len() == dim * dim`
    /// and every entry finite.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: entries.len(),
            });
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self::new(dim, entries)
    }

    /// All-zero matrix. Panics on an out-of-range dimension; use [`Self::new`]
    /// when the dimension is not a compile-time constant.
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        m
    }

    pub fn diagonal(diag: &[Complex64]) -> Result<Self> {
        let dim = diag.len();
        check_dim(dim)?;
        let mut m = Self::zeros(dim);
        for (i, &z) in diag.iter().enumerate() {
            m.entries[i * dim + i] = z;
        }
        if m.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(m)
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn real_diagonal(diag: &[f64]) -> Result<Self> {
        let entries: Vec<Complex64> = diag.iter().map(|&x| Complex::new(x, 0.0)).collect();
        Self::diagonal(&entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        assert!(row < self.dim && col < self.dim, "index out of bounds");
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut entries = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self.entries[i * n + k];
                if aik == ZERO {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += aik * other.entries[k * n + j];
                }
            }
        }
        Ok(Self { dim: n, entries })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        Self { dim: n, entries }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `max |A[i][j] - conj(A[j][i])|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..=i {
                let d = (self.entries[i * n + j] - self.entries[j * n + i].conj()).norm();
                dev = dev.max(d);
            }
        }
        dev
    }

    /// Kronecker product; entry `[(i*dB + k), (j*dB + l)] = A[i,j] * B[k,l]`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let da = self.dim;
        let db = other.dim;
        let n = da * db;
        check_dim(n)?;
        let mut entries = vec![ZERO; n * n];
        for i in 0..da {
            for j in 0..da {
                let aij = self.entries[i * da + j];
                for k in 0..db {
                    for l in 0..db {
                        entries[(i * db + k) * n + (j * db + l)] = aij * other.entries[k * db + l];
                    }
                }
            }
        }
        Ok(Self { dim: n, entries })
    }
}

/// Trace out every subsystem not listed in `keep`. `dims` are the subsystem
/// dimensions of `rho` in tensor order; their product must equal `rho.dim()`.
/// `keep` holds strictly increasing subsystem indices and must be nonempty.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let product: usize = dims.iter().product();
    if dims.is_empty() || product != rho.dim() {
        return Err(Error::SubsystemMismatch {
            product,
            dim: rho.dim(),
        });
    }
    if keep.is_empty()
        || keep.iter().any(|&k| k >= dims.len())
        || keep.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::InvalidState {
            detail: format!("invalid subsystem selection {keep:?} for {} subsystems", dims.len()),
        });
    }

    let traced: Vec<usize> = (0..dims.len()).filter(|s| !keep.contains(s)).collect();
    let kept_dim: usize = keep.iter().map(|&s| dims[s]).product();
    let traced_dim: usize = traced.iter().map(|&s| dims[s]).product();

    // strides of each subsystem index in the flat row index
    let mut strides = vec![1usize; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }

    // flat offset contributed by a mixed-radix index over the given subsystems
    let offset = |subsystems: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for &s in subsystems.iter().rev() {
            off += (idx % dims[s]) * strides[s];
            idx /= dims[s];
        }
        off
    };

    let n = rho.dim();
    let mut out = ComplexMatrix::zeros(kept_dim);
    for i in 0..kept_dim {
        let row_kept = offset(keep, i);
        for j in 0..kept_dim {
            let col_kept = offset(keep, j);
            let mut sum = ZERO;
            for t in 0..traced_dim {
                let off_t = offset(&traced, t);
                sum += rho.entries[(row_kept + off_t) * n + (col_kept + off_t)];
            }
            out.entries[i * kept_dim + j] = sum;
        }
    }
    Ok(out)
}

/// Column vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    data: Vec<Complex64>,
}

impl Ket {
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        check_dim(data.len())?;
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { data })
    }

    /// Computational basis state `|index>`.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        assert!(index < dim, "basis index out of range");
        let mut data = vec![ZERO; dim];
        data[index] = ONE;
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.data[i]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::InvalidState {
                detail: "cannot normalize the zero vector".into(),
            });
        }
        Ok(Self {
            data: self.data.iter().map(|z| z / n).collect(),
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|self><other|`; both kets must share a dimension.
    pub fn outer(&self, other: &Self) -> Result<ComplexMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let n = self.dim();
        ComplexMatrix::from_fn(n, |i, j| self.data[i] * other.data[j].conj())
    }

    /// `|self> ⊗ |other>`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.dim() * other.dim();
        check_dim(n)?;
        let mut data = Vec::with_capacity(n);
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Ok(Self { data })
    }

    pub fn apply(&self, m: &ComplexMatrix) -> Result<Self> {
        if self.dim() != m.dim() {
            return Err(Error::DimensionMismatch {
                left: m.dim(),
                right: self.dim(),
            });
        }
        let n = self.dim();
        let mut data = vec![ZERO; n];
        for (i, out) in data.iter_mut().enumerate() {
            for j in 0..n {
                *out += m.entries[i * n + j] * self.data[j];
            }
        }
        Ok(Self { data })
    }
}

/// Eigenvalues (real, sorted descending) and matching orthonormal
/// eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigensystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Ket>,
}

impl HermitianEigensystem {
    /// `Σ_i λ_i |v_i><v_i|`; handy for reconstruction checks.
    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        let dim = self.eigenvectors[0].dim();
        let mut m = ComplexMatrix::zeros(dim);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let proj = v.outer(v)?;
            m = m.add(&proj.scale(Complex::new(*lambda, 0.0)))?;
        }
        Ok(m)
    }

    /// `max |<v_i|v_j> - δ_ij|`.
    pub fn gram_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for (i, vi) in self.eigenvectors.iter().enumerate() {
            for (j, vj) in self.eigenvectors.iter().enumerate() {
                let g = vi.inner(vj).expect("eigenvectors share a dimension");
                let target = if i == j { ONE } else { ZERO };
                dev = dev.max((g - target).norm());
            }
        }
        dev
    }
}

fn require_hermitian(h: &ComplexMatrix) -> Result<()> {
    let deviation = h.hermiticity_deviation();
    if deviation >= HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix: closed form for dimensions 1–2,
/// cyclic complex Jacobi rotations above that.
pub fn hermitian_eigensystem(h: &ComplexMatrix) -> Result<HermitianEigensystem> {
    require_hermitian(h)?;
    let n = h.dim();

    // symmetrize away sub-tolerance asymmetry so rotations see exact input
    let sym = h.add(&h.adjoint())?.scale(Complex::new(0.5, 0.0));

    let (mut eigenvalues, mut eigenvectors) = match n {
        1 => (vec![sym.get(0, 0).re], vec![Ket::basis_state(1, 0)]),
        2 => eigensystem_dim2(&sym),
        _ => jacobi_eigensystem(&sym)?,
    };

    // sort descending, canonical phase: largest component real positive
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eigenvalues[b].partial_cmp(&eigenvalues[a]).unwrap());
    eigenvalues = order.iter().map(|&i| eigenvalues[i]).collect();
    eigenvectors = order
        .iter()
        .map(|&i| canonical_phase(&eigenvectors[i]))
        .collect();

    Ok(HermitianEigensystem {
        eigenvalues,
        eigenvectors,
    })
}

fn canonical_phase(v: &Ket) -> Ket {
    let (mut best, mut best_mag) = (0usize, 0.0f64);
    for (i, z) in v.amplitudes().iter().enumerate() {
        if z.norm() > best_mag {
            best_mag = z.norm();
            best = i;
        }
    }
    if best_mag == 0.0 {
        return v.clone();
    }
    let phase = v.get(best).conj() / best_mag;
    v.scale(phase)
}

fn eigensystem_dim2(h: &ComplexMatrix) -> (Vec<f64>, Vec<Ket>) {
    let a = h.get(0, 0).re;
    let d = h.get(1, 1).re;
    let b = h.get(0, 1);
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    let (hi, lo) = (mean + half_gap, mean - half_gap);

    if b.norm() == 0.0 {
        let (v_hi, v_lo) = if a >= d {
            (Ket::basis_state(2, 0), Ket::basis_state(2, 1))
        } else {
            (Ket::basis_state(2, 1), Ket::basis_state(2, 0))
        };
        return (vec![hi, lo], vec![v_hi, v_lo]);
    }

    // null vector of (H - hi I); pick the better-conditioned of two forms
    let cand1 = Ket::new(vec![b, Complex::new(hi - a, 0.0)]).unwrap();
    let cand2 = Ket::new(vec![Complex::new(hi - d, 0.0), b.conj()]).unwrap();
    let v_hi = if cand1.norm() >= cand2.norm() {
        cand1
    } else {
        cand2
    }
    .normalized()
    .unwrap();
    // orthogonal complement of (x, y) is (-conj(y), conj(x))
    let v_lo = Ket::new(vec![-v_hi.get(1).conj(), v_hi.get(0).conj()]).unwrap();
    (vec![hi, lo], vec![v_hi, v_lo])
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut sum = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                sum += a[p * n + q].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Cyclic Jacobi for a Hermitian matrix: each rotation annihilates one
/// off-diagonal pair with a complex plane rotation.
fn jacobi_eigensystem(h: &ComplexMatrix) -> Result<(Vec<f64>, Vec<Ket>)> {
    let n = h.dim();
    let mut a = h.entries().to_vec();
    let mut v = ComplexMatrix::identity(n).entries().to_vec();

    let scale = h.frobenius_norm();
    if scale == 0.0 {
        let vectors = (0..n).map(|i| Ket::basis_state(n, i)).collect();
        return Ok((vec![0.0; n], vectors));
    }
    let tol = JACOBI_REL_TOL * scale;

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a, n) <= tol {
            let eigenvalues: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
            let eigenvectors: Vec<Ket> = (0..n)
                .map(|k| {
                    Ket::new((0..n).map(|i| v[i * n + k]).collect())
                        .expect("rotation output is finite")
                })
                .collect();
            return Ok((eigenvalues, eigenvectors));
        }

        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag <= tol / (n * n) as f64 {
                    continue;
                }
                // rotation angle from tan(2θ) = 2|a_pq| / (a_pp - a_qq)
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (app - aqq) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phase = apq / mag; // e^{i arg(a_pq)}
                let s_fwd = phase * s; // R[p][q] = -s_fwd, conj appears at R[q][p]
                let s_bwd = phase.conj() * s;

                // A <- A R (columns p, q)
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c + akq * s_bwd;
                    a[k * n + q] = akq * c - akp * s_fwd;
                }
                // A <- R† A (rows p, q)
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c + aqk * s_fwd;
                    a[q * n + k] = aqk * c - apk * s_bwd;
                }
                // V <- V R
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c + vkq * s_bwd;
                    v[k * n + q] = vkq * c - vkp * s_fwd;
                }
                // the rotation zeroes this pair by construction
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = Complex::new(a[p * n + p].re, 0.0);
                a[q * n + q] = Complex::new(a[q * n + q].re, 0.0);
            }
        }
    }

    Err(Error::EigenConvergence {
        off_norm: off_diagonal_norm(&a, n),
    })
}

/// Von Neumann entropy in bits, `S = -Σ λ_i log2 λ_i` with `0·log 0 = 0`.
/// Eigenvalues in `[-1e-10, 0)` are clipped to zero; anything lower is
/// rejected as not a state.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eigensystem(rho)?;
    let mut s = 0.0;
    for &lambda in &eig.eigenvalues {
        if lambda < -1e-10 {
            return Err(Error::InvalidState {
                detail: format!("eigenvalue {lambda:.3e} below -1e-10"),
            });
        }
        if lambda > 0.0 {
            s -= lambda * lambda.log2();
        }
    }
    Ok(s.max(0.0))
}

/// `U = exp(-i H t / ħ)` through the eigendecomposition of `H`.
pub fn evolution_operator(h: &ComplexMatrix, t: f64, hbar: f64) -> Result<ComplexMatrix> {
    if !hbar.is_finite() || hbar <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "hbar",
            value: hbar,
        });
    }
    let eig = hermitian_eigensystem(h)?;
    let n = h.dim();
    let mut u = ComplexMatrix::zeros(n);
    for (lambda, v) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        let phase = Complex::from_polar(1.0, -lambda * t / hbar);
        u = u.add(&v.outer(v)?.scale(phase))?;
    }
    Ok(u)
}

/// Evolve a ket under `H` for time `t`.
pub fn evolve_ket(h: &ComplexMatrix, t: f64, hbar: f64, psi: &Ket) -> Result<Ket> {
    psi.apply(&evolution_operator(h, t, hbar)?)
}

/// Evolve a density matrix under `H` for time `t`: `U ρ U†`.
pub fn evolve_density(h: &ComplexMatrix, t: f64, hbar: f64, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let u = evolution_operator(h, t, hbar)?;
    u.matmul(rho)?.matmul(&u.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .unwrap()
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
        let m = random_matrix(rng, dim);
        m.add(&m.adjoint()).unwrap().scale(c(0.5, 0.0))
    }

    fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
        let g = random_hermitian(rng, dim);
        evolution_operator(&g, 1.0, 1.0).unwrap()
    }

    #[test]
    fn adjoint_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(&mut rng, 4);
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn trace_of_identity() {
        assert_eq!(ComplexMatrix::identity(4).trace(), c(4.0, 0.0));
    }

    #[test]
    fn inverse_via_eigensystem_roundtrip() {
        // constructive oracle: A = V diag(λ) V† with known λ > 0, so the
        // eigensystem-based inverse must multiply back to the identity
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let v = random_unitary(&mut rng, 4);
        let lambdas = [1.7, 0.9, 0.5, 2.3];
        let d = ComplexMatrix::real_diagonal(&lambdas).unwrap();
        let d_inv =
            ComplexMatrix::real_diagonal(&lambdas.map(|x| 1.0 / x)).unwrap();
        let a = v.matmul(&d).unwrap().matmul(&v.adjoint()).unwrap();

        let eig = hermitian_eigensystem(&a).unwrap();
        let mut inv = ComplexMatrix::zeros(4);
        for (lambda, vec) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
            inv = inv
                .add(&vec.outer(vec).unwrap().scale(c(1.0 / lambda, 0.0)))
                .unwrap();
        }
        let product = a.matmul(&inv).unwrap();
        assert!(product.max_abs_diff(&ComplexMatrix::identity(4)).unwrap() < 1e-10);

        // and the true inverse built from the construction agrees too
        let inv_direct = v.matmul(&d_inv).unwrap().matmul(&v.adjoint()).unwrap();
        assert!(inv.max_abs_diff(&inv_direct).unwrap() < 1e-10);
    }

    #[test]
    fn dimension_mismatch_reports_both_dims() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        match a.matmul(&b) {
            Err(Error::DimensionMismatch { left: 2, right: 3 }) => {}
            other => panic!("expected dimension mismatch, got {other:?}"),
        }
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2).unwrap(), ComplexMatrix::identity(4));

        // |0><0| ⊗ ρ puts ρ in the upper-left block and zero elsewhere
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_hermitian(&mut rng, 2);
        let p0 = Ket::basis_state(2, 0);
        let proj = p0.outer(&p0).unwrap();
        let block = proj.kron(&rho).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i < 2 && j < 2 { rho.get(i, j) } else { ZERO };
                assert_eq!(block.get(i, j), expected);
            }
        }
    }

    #[test]
    fn kron_matches_four_index_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (da, db) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let a = random_matrix(&mut rng, da);
            let b = random_matrix(&mut rng, db);
            let k = a.kron(&b).unwrap();
            let n = da * db;
            // brute-force four-index oracle
            for i in 0..da {
                for j in 0..da {
                    for p in 0..db {
                        for q in 0..db {
                            let expected = a.get(i, j) * b.get(p, q);
                            assert_eq!(k.get(i * db + p, j * db + q), expected);
                        }
                    }
                }
            }
            assert_eq!(k.dim(), n);
        }
    }

    #[test]
    fn kron_associativity_exact_on_dyadic_entries() {
        // entries from small integers make IEEE products exact, so the
        // grouping genuinely cannot matter
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut dyadic = |dim: usize| {
            ComplexMatrix::from_fn(dim, |_, _| {
                c(rng.gen_range(-2..3) as f64, rng.gen_range(-2..3) as f64)
            })
            .unwrap()
        };
        let a = dyadic(2);
        let b = dyadic(2);
        let cm = dyadic(2);
        let left = a.kron(&b).unwrap().kron(&cm).unwrap();
        let right = a.kron(&b.kron(&cm).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn partial_trace_of_product_state_factorizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        // random pure density factors
        let make_rho = |rng: &mut ChaCha8Rng| {
            let v = Ket::new(vec![
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ])
            .unwrap()
            .normalized()
            .unwrap();
            v.outer(&v).unwrap()
        };
        let rho_a = make_rho(&mut rng);
        let rho_b = make_rho(&mut rng);
        let joint = rho_a.kron(&rho_b).unwrap();
        let reduced = partial_trace(&joint, &[2, 2], &[0]).unwrap();
        assert!(reduced.max_abs_diff(&rho_a).unwrap() < 1e-14);
        let reduced_b = partial_trace(&joint, &[2, 2], &[1]).unwrap();
        assert!(reduced_b.max_abs_diff(&rho_b).unwrap() < 1e-14);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let bell = Ket::new(vec![c(1.0, 0.0), ZERO, ZERO, c(1.0, 0.0)])
            .unwrap()
            .normalized()
            .unwrap();
        let rho = bell.outer(&bell).unwrap();
        let reduced = partial_trace(&rho, &[2, 2], &[0]).unwrap();
        let expected = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(reduced.max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn partial_trace_matches_index_sum_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = random_hermitian(&mut rng, 6);
        // explicit double-index-sum oracle on a 2⊗3 split, keeping the first
        let (da, db) = (2usize, 3usize);
        let mut oracle = ComplexMatrix::zeros(da);
        let mut entries = vec![ZERO; da * da];
        for i in 0..da {
            for j in 0..da {
                let mut sum = ZERO;
                for k in 0..db {
                    sum += m.get(i * db + k, j * db + k);
                }
                entries[i * da + j] = sum;
            }
        }
        oracle = ComplexMatrix::new(da, entries).unwrap();
        let reduced = partial_trace(&m, &[da, db], &[0]).unwrap();
        assert!(reduced.max_abs_diff(&oracle).unwrap() < 1e-13);

        // keeping the second subsystem, oracle transposed accordingly
        let mut entries_b = vec![ZERO; db * db];
        for i in 0..db {
            for j in 0..db {
                let mut sum = ZERO;
                for k in 0..da {
                    sum += m.get(k * db + i, k * db + j);
                }
                entries_b[i * db + j] = sum;
            }
        }
        let oracle_b = ComplexMatrix::new(db, entries_b).unwrap();
        let reduced_b = partial_trace(&m, &[da, db], &[1]).unwrap();
        assert!(reduced_b.max_abs_diff(&oracle_b).unwrap() < 1e-13);
        let _ = oracle;
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(
            partial_trace(&m, &[2, 3], &[0]),
            Err(Error::SubsystemMismatch { product: 6, dim: 4 })
        ));
        assert!(partial_trace(&m, &[2, 2], &[]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[2]).is_err());
    }

    #[test]
    fn eigensystem_of_diagonal_matrix() {
        let m = ComplexMatrix::real_diagonal(&[3.0, 1.0, 2.0]).unwrap();
        let eig = hermitian_eigensystem(&m).unwrap();
        assert_eq!(eig.eigenvalues, vec![3.0, 2.0, 1.0]);
        // eigenvectors are standard basis states, in eigenvalue order
        let expected = [0usize, 2, 1];
        for (v, &idx) in eig.eigenvectors.iter().zip(&expected) {
            assert!((v.get(idx) - ONE).norm() < 1e-14);
        }
    }

    #[test]
    fn eigensystem_of_bit_flip() {
        let m = ComplexMatrix::new(2, vec![ZERO, ONE, ONE, ZERO]).unwrap();
        let eig = hermitian_eigensystem(&m).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-14);
        let s = 1.0 / 2.0_f64.sqrt();
        // up to a phase: |<v|(|0>±|1>)/√2| = 1
        let plus = Ket::new(vec![c(s, 0.0), c(s, 0.0)]).unwrap();
        let minus = Ket::new(vec![c(s, 0.0), c(-s, 0.0)]).unwrap();
        assert!((eig.eigenvectors[0].inner(&plus).unwrap().norm() - 1.0).abs() < 1e-12);
        assert!((eig.eigenvectors[1].inner(&minus).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigensystem_recovers_constructed_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for dim in [3usize, 4, 5, 8] {
            let v = random_unitary(&mut rng, dim);
            let mut lambdas: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let d = ComplexMatrix::real_diagonal(&lambdas).unwrap();
            let h = v.matmul(&d).unwrap().matmul(&v.adjoint()).unwrap();
            let eig = hermitian_eigensystem(&h).unwrap();
            lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (got, want) in eig.eigenvalues.iter().zip(&lambdas) {
                assert!(
                    (got - want).abs() < 1e-11,
                    "dim {dim}: eigenvalue {got} vs {want}"
                );
            }
            assert!(eig.gram_deviation() < 1e-12);
            assert!(eig.reconstruct().unwrap().max_abs_diff(&h).unwrap() < 1e-12);
        }
    }

    #[test]
    fn eigensystem_rejects_non_hermitian() {
        let m = ComplexMatrix::new(2, vec![ZERO, ONE, ZERO, ZERO]).unwrap();
        match hermitian_eigensystem(&m) {
            Err(Error::NotHermitian { deviation }) => assert!(deviation > 0.5),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn entropy_of_reference_states() {
        let mixed = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let psi = Ket::new(vec![
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        ])
        .unwrap()
        .normalized()
        .unwrap();
        let pure = psi.outer(&psi).unwrap();
        assert!(von_neumann_entropy(&pure).unwrap() < 1e-12);

        // frozen from a 50-digit scalar evaluation of -Σ λ log2 λ
        let rho = ComplexMatrix::real_diagonal(&[0.75, 0.25]).unwrap();
        assert!((von_neumann_entropy(&rho).unwrap() - 0.811_278_124_459_132_9).abs() < 1e-9);
    }

    #[test]
    fn entropy_rejects_negative_spectrum() {
        let m = ComplexMatrix::real_diagonal(&[1.1, -0.1]).unwrap();
        assert!(matches!(
            von_neumann_entropy(&m),
            Err(Error::InvalidState { .. })
        ));
    }

    #[test]
    fn evolution_at_zero_time_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let h = random_hermitian(&mut rng, 4);
        let u = evolution_operator(&h, 0.0, 1.0).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(4)).unwrap() < 1e-12);
    }

    #[test]
    fn scalar_hamiltonian_gives_global_phase_only() {
        let e = 0.83;
        let t = 2.4;
        let h = ComplexMatrix::identity(3).scale(c(e, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let psi = Ket::new(vec![
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        ])
        .unwrap()
        .normalized()
        .unwrap();

        let out = evolve_ket(&h, t, 1.0, &psi).unwrap();
        let expected = psi.scale(Complex::from_polar(1.0, -e * t));
        for i in 0..3 {
            assert!((out.get(i) - expected.get(i)).norm() < 1e-12);
        }

        let rho = psi.outer(&psi).unwrap();
        let rho_out = evolve_density(&h, t, 1.0, &rho).unwrap();
        assert!(rho_out.max_abs_diff(&rho).unwrap() < 1e-14);
    }

    #[test]
    fn diagonal_evolution_matches_scalar_arithmetic() {
        // (|0> + |1>)/√2 under diag(E_L, E_R) acquires the relative phase
        // e^{-i (E_L - E_R) t / ħ} on the first component
        let (e_left, e_right, t, hbar) = (1.3, 0.4, 0.7, 2.0);
        let h = ComplexMatrix::real_diagonal(&[e_left, e_right]).unwrap();
        let s = 1.0 / 2.0_f64.sqrt();
        let psi = Ket::new(vec![c(s, 0.0), c(s, 0.0)]).unwrap();
        let out = evolve_ket(&h, t, hbar, &psi).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-12);
        let ratio = out.get(0) / out.get(1);
        let expected = Complex::from_polar(1.0, -(e_left - e_right) * t / hbar);
        assert!((ratio - expected).norm() < 1e-12);
    }

    #[test]
    fn evolution_preserves_density_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let h = random_hermitian(&mut rng, 4);
        // mixed state with known spectrum
        let v = random_unitary(&mut rng, 4);
        let spectrum = [0.4, 0.3, 0.2, 0.1];
        let rho = v
            .matmul(&ComplexMatrix::real_diagonal(&spectrum).unwrap())
            .unwrap()
            .matmul(&v.adjoint())
            .unwrap();
        let rho_t = evolve_density(&h, 1.3, 1.0, &rho).unwrap();

        assert!((rho_t.trace() - c(1.0, 0.0)).norm() < 1e-12);
        assert!(rho_t.hermiticity_deviation() < 1e-12);
        let eig = hermitian_eigensystem(&rho_t).unwrap();
        for (got, want) in eig.eigenvalues.iter().zip(&spectrum) {
            assert!((got - want).abs() < 1e-12);
        }
        // entropy invariance under unitary conjugation
        let s0 = von_neumann_entropy(&rho).unwrap();
        let s1 = von_neumann_entropy(&rho_t).unwrap();
        assert!((s0 - s1).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonfinite_entries() {
        assert!(matches!(
            ComplexMatrix::new(2, vec![ZERO, ONE, ONE, c(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        ));
        assert!(matches!(
            Ket::new(vec![c(f64::INFINITY, 0.0)]),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn rejects_oversized_dimensions() {
        assert!(matches!(
            ComplexMatrix::new(17, vec![ZERO; 17 * 17]),
            Err(Error::InvalidDimension { dim: 17 })
        ));
        let m8 = ComplexMatrix::identity(8);
        let m4 = ComplexMatrix::identity(4);
        assert!(m8.kron(&m4).is_err());
    }
}

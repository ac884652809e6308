//! Position-grid model of a classical stochastic force channel: two-branch
//! Gaussian wavefunctions acquiring multiplicative phases from accumulated
//! impulse records, reduced to an effective qubit and averaged over
//! realizations.
//!
//! A single realization multiplies the wavefunction by `e^{-i K x / ħ}`,
//! which shifts the relative phase between the branches by `K·Δx̄/ħ`; only
//! the ensemble average over a zero-mean record destroys (and never creates)
//! off-diagonal magnitude. The module reports both views.

use std::sync::Arc;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::qmat::{Complex64, ComplexMatrix, Ket};
use crate::qstate::DensityOperator;
use crate::{Error, Result};

/// Minimum number of grid points for a resolved wavefunction.
pub const MIN_POINTS: usize = 256;

/// Largest branch-mode overlap for which the two-branch qubit description
/// is accepted.
pub const QUBIT_OVERLAP_TOL: f64 = 1e-6;

/// Uniform position grid over `[x_min, x_max]`, inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    x_min: f64,
    dx: f64,
    len: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, len: usize) -> Result<Self> {
        if len < MIN_POINTS {
            return Err(Error::InvalidGrid {
                detail: format!("{len} points is below the minimum of {MIN_POINTS}"),
            });
        }
        if !x_min.is_finite() || !x_max.is_finite() || x_max <= x_min {
            return Err(Error::InvalidGrid {
                detail: format!("invalid window [{x_min}, {x_max}]"),
            });
        }
        Ok(Self {
            x_min,
            dx: (x_max - x_min) / (len - 1) as f64,
            len,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_min + (self.len - 1) as f64 * self.dx
    }
}

/// Normalized single-Gaussian branch modes, shared between the realizations
/// of an ensemble (they depend only on the branch geometry, not the phases).
#[derive(Debug, PartialEq)]
struct BranchModes {
    left: Vec<Complex64>,
    right: Vec<Complex64>,
    overlap: f64,
}

fn gaussian_mode(grid: &Grid, center: f64, sigma: f64) -> Vec<Complex64> {
    let mut mode: Vec<f64> = (0..grid.len())
        .map(|i| {
            let u = (grid.x(i) - center) / sigma;
            (-0.5 * u * u).exp()
        })
        .collect();
    let norm = (mode.iter().map(|a| a * a).sum::<f64>() * grid.dx()).sqrt();
    for a in &mut mode {
        *a /= norm;
    }
    mode.into_iter().map(|a| Complex::new(a, 0.0)).collect()
}

/// Two-branch wavefunction on a grid, normalized as `Σ |ψ|² Δx = 1`, with
/// the branch geometry kept alongside so the state can be projected back to
/// an effective qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    grid: Grid,
    amplitudes: Vec<Complex64>,
    left_center: f64,
    right_center: f64,
    sigma: f64,
    modes: Arc<BranchModes>,
}

impl GridWavefunction {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn norm(&self) -> f64 {
        (self
            .amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            * self.grid.dx)
            .sqrt()
    }

    /// `|<mode_L | mode_R>|` on this grid.
    pub fn branch_overlap(&self) -> f64 {
        self.modes.overlap
    }

    /// `(<mode_L|ψ>, <mode_R|ψ>)`.
    pub fn branch_amplitudes(&self) -> (Complex64, Complex64) {
        (
            inner(&self.modes.left, &self.amplitudes, self.grid.dx),
            inner(&self.modes.right, &self.amplitudes, self.grid.dx),
        )
    }
}

fn inner(a: &[Complex64], b: &[Complex64], dx: f64) -> Complex64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        * dx
}

/// Superposition of two Gaussian branches with the given complex weights,
/// normalized on the grid. Branch centres must sit at least 5σ inside the
/// window; a branch-mode overlap above 1e-3 is rejected as "too close".
pub fn make_branch_superposition(
    left_center: f64,
    right_center: f64,
    sigma: f64,
    grid: &Grid,
    left_weight: Complex64,
    right_weight: Complex64,
) -> Result<GridWavefunction> {
    if !sigma.is_finite() || sigma <= 0.0 || sigma < 4.0 * grid.dx() {
        return Err(Error::InvalidGrid {
            detail: format!(
                "sigma {sigma:.3e} m under-resolves the grid spacing {:.3e} m (need sigma >= 4 dx)",
                grid.dx()
            ),
        });
    }
    for center in [left_center, right_center] {
        if center - 5.0 * sigma < grid.x_min() || center + 5.0 * sigma > grid.x_max() {
            return Err(Error::InvalidGrid {
                detail: format!(
                    "branch centre {center:.3e} m is within 5 sigma of the window edge"
                ),
            });
        }
    }
    if left_weight.norm() == 0.0 && right_weight.norm() == 0.0 {
        return Err(Error::InvalidGrid {
            detail: "both branch weights vanish".into(),
        });
    }

    let mut amplitudes: Vec<Complex64> = (0..grid.len())
        .map(|i| {
            let x = grid.x(i);
            let ul = (x - left_center) / sigma;
            let ur = (x - right_center) / sigma;
            left_weight * (-0.5 * ul * ul).exp() + right_weight * (-0.5 * ur * ur).exp()
        })
        .collect();
    let norm = (amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.dx()).sqrt();
    for a in &mut amplitudes {
        *a /= norm;
    }

    let left = gaussian_mode(grid, left_center, sigma);
    let right = gaussian_mode(grid, right_center, sigma);
    let overlap = inner(&left, &right, grid.dx()).norm();
    if overlap > 1e-3 {
        return Err(Error::InvalidGrid {
            detail: format!(
                "branches at {left_center:.3e} and {right_center:.3e} overlap too much \
                 (|<L|R>| = {overlap:.3e})"
            ),
        });
    }
    Ok(GridWavefunction {
        grid: grid.clone(),
        amplitudes,
        left_center,
        right_center,
        sigma,
        modes: Arc::new(BranchModes {
            left,
            right,
            overlap,
        }),
    })
}

/// Equal-weight two-branch superposition — the balanced split state.
pub fn make_two_branch_state(
    left_center: f64,
    right_center: f64,
    sigma: f64,
    grid: &Grid,
) -> Result<GridWavefunction> {
    make_branch_superposition(
        left_center,
        right_center,
        sigma,
        grid,
        Complex::new(1.0, 0.0),
        Complex::new(1.0, 0.0),
    )
}

/// Multiply pointwise by `e^{-i K x / ħ}`. Pure phase: the pointwise
/// probability density and the norm are untouched.
pub fn apply_classical_phase(psi: &GridWavefunction, impulse: f64, hbar: f64) -> GridWavefunction {
    let amplitudes = psi
        .amplitudes
        .iter()
        .enumerate()
        .map(|(i, a)| a * Complex::from_polar(1.0, -impulse * psi.grid.x(i) / hbar))
        .collect();
    GridWavefunction {
        grid: psi.grid.clone(),
        amplitudes,
        left_center: psi.left_center,
        right_center: psi.right_center,
        sigma: psi.sigma,
        modes: Arc::clone(&psi.modes),
    }
}

/// Project the two-branch wavefunction onto its effective qubit
/// `(|L>, |R>)`; requires the branch modes to be orthogonal within
/// [`QUBIT_OVERLAP_TOL`].
pub fn reduced_qubit(psi: &GridWavefunction) -> Result<DensityOperator> {
    let overlap = psi.branch_overlap();
    if overlap >= QUBIT_OVERLAP_TOL {
        return Err(Error::InvalidGrid {
            detail: format!(
                "branch overlap {overlap:.3e} invalidates the qubit description \
                 (limit {QUBIT_OVERLAP_TOL:.0e})"
            ),
        });
    }
    let (q_left, q_right) = psi.branch_amplitudes();
    let total = q_left.norm_sqr() + q_right.norm_sqr();
    if total == 0.0 {
        return Err(Error::InvalidGrid {
            detail: "wavefunction has no weight on either branch mode".into(),
        });
    }
    let ket = Ket::new(vec![q_left / total.sqrt(), q_right / total.sqrt()])?;
    DensityOperator::from_ket(&ket.normalized()?, vec![2])
}

/// Relative phase between the branch amplitudes, `arg(<L|ψ> conj(<R|ψ>))`.
pub fn branch_relative_phase(psi: &GridWavefunction) -> f64 {
    let (q_left, q_right) = psi.branch_amplitudes();
    (q_left * q_right.conj()).arg()
}

/// Mean of [`reduced_qubit`] over realizations on identical grids.
pub fn ensemble_average(runs: &[GridWavefunction]) -> Result<DensityOperator> {
    if runs.is_empty() {
        return Err(Error::InvalidGrid {
            detail: "ensemble average needs at least one realization".into(),
        });
    }
    let grid = runs[0].grid.clone();
    let mut sum = ComplexMatrix::zeros(2);
    for run in runs {
        if run.grid != grid {
            return Err(Error::InvalidGrid {
                detail: "realizations live on different grids".into(),
            });
        }
        sum = sum.add(reduced_qubit(run)?.matrix())?;
    }
    let mean = sum.scale(Complex::new(1.0 / runs.len() as f64, 0.0));
    DensityOperator::new(mean, vec![2])
}

/// Accumulated impulses of one realization, one per coupled coordinate,
/// drawn from `Normal(0, std²)` with a per-run stream seeded from the root
/// seed plus the run index.
#[derive(Debug, Clone, Copy)]
pub struct StochasticRecord {
    /// Impulse on the probe coordinate, kg m/s.
    pub probe_impulse: f64,
    /// Impulse on the split-mass coordinate, kg m/s.
    pub mass_impulse: f64,
    /// The stream seed this record was drawn from.
    pub seed: u64,
}

impl StochasticRecord {
    pub fn sample(root_seed: u64, run_index: u64, std: f64) -> Result<Self> {
        if !std.is_finite() || std < 0.0 {
            return Err(Error::InvalidParameter {
                name: "record_std",
                value: std,
            });
        }
        let seed = root_seed.wrapping_add(run_index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, std).map_err(|_| Error::InvalidParameter {
            name: "record_std",
            value: std,
        })?;
        Ok(Self {
            probe_impulse: normal.sample(&mut rng),
            mass_impulse: normal.sample(&mut rng),
            seed,
        })
    }
}

/// Which coordinates the classical record couples to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    Both,
    /// Only the probe coordinate; the split-mass factor is untouched.
    ProbeOnly,
    /// Only the split-mass coordinate.
    SplitMassOnly,
}

/// Configuration of a classical-channel ensemble run.
#[derive(Debug, Clone)]
pub struct ChannelConfig {
    /// Standard deviation of each accumulated impulse, kg m/s.
    pub record_std: f64,
    pub runs: usize,
    pub seed: u64,
    pub coupling: Coupling,
    /// Gaussian width, m.
    pub sigma: f64,
    /// Branch-centre separation, m.
    pub separation: f64,
    /// Grid points across the window.
    pub points: usize,
    pub hbar: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        let sigma = 1e-6;
        Self {
            record_std: 0.0,
            runs: 1,
            seed: 7,
            coupling: Coupling::Both,
            sigma,
            separation: 20.0 * sigma,
            points: 4096,
            hbar: crate::physics::PhysicalConstants::codata().hbar,
        }
    }
}

/// Outcome of a classical-channel ensemble.
#[derive(Debug, Clone)]
pub struct ChannelOutcome {
    /// Qubit of the split mass before any record is applied.
    pub initial: DensityOperator,
    /// Ensemble-averaged qubit of the split mass.
    pub averaged: DensityOperator,
    /// `|<L|ρ|R>|` of the initial qubit.
    pub offdiag_initial: f64,
    /// `|<L|ρ̄|R>|` of the averaged qubit.
    pub offdiag_mean: f64,
    /// Standard error of the averaged off-diagonal (from per-run scatter).
    pub offdiag_std_err: f64,
    /// Relative branch phase introduced by the first realization alone.
    pub single_run_phase_delta: f64,
    /// Ensemble-average prediction `0.5 e^{-(std·sep/ħ)²/2}` from the
    /// Gaussian characteristic function.
    pub predicted_offdiag: f64,
    pub runs: usize,
    pub seed: u64,
}

/// Run the classical-record channel: a probe Gaussian and a split two-branch
/// Gaussian each pick up `e^{-i K x / ħ}` with independent records per
/// realization, the split mass is reduced to a qubit, and the qubits are
/// averaged. Realizations stream in parallel; nothing but their 2x2
/// reductions is kept.
pub fn classical_channel_ensemble(config: &ChannelConfig) -> Result<ChannelOutcome> {
    if config.runs == 0 {
        return Err(Error::InvalidParameter {
            name: "runs",
            value: 0.0,
        });
    }
    let window = 60.0 * config.sigma;
    let mid = 0.0;
    let grid = Grid::new(mid - window, mid + window, config.points)?;
    let left = mid - 0.5 * config.separation;
    let right = mid + 0.5 * config.separation;

    let mass0 = make_two_branch_state(left, right, config.sigma, &grid)?;
    // probe factor: a single Gaussian parked at the window centre
    let probe0 = make_branch_superposition(
        left,
        right,
        config.sigma,
        &grid,
        Complex::new(1.0, 0.0),
        Complex::new(0.0, 0.0),
    )?;
    let initial = reduced_qubit(&mass0)?;
    let offdiag_initial = initial.matrix().get(0, 1).norm();

    let (couple_probe, couple_mass) = match config.coupling {
        Coupling::Both => (true, true),
        Coupling::ProbeOnly => (true, false),
        Coupling::SplitMassOnly => (false, true),
    };

    let reductions: Vec<(ComplexMatrix, Option<f64>)> = (0..config.runs as u64)
        .into_par_iter()
        .map(|run| -> Result<(ComplexMatrix, Option<f64>)> {
            let record = StochasticRecord::sample(config.seed, run, config.record_std)?;
            let probe_impulse = if couple_probe { record.probe_impulse } else { 0.0 };
            let mass_impulse = if couple_mass { record.mass_impulse } else { 0.0 };
            // the probe factor only ever contributes a global phase to the
            // product state; apply it anyway to keep the channel honest
            let _probe = apply_classical_phase(&probe0, probe_impulse, config.hbar);
            let mass = apply_classical_phase(&mass0, mass_impulse, config.hbar);
            let qubit = reduced_qubit(&mass)?;
            // the single-realization relative phase is reported for run 0
            let phase = (run == 0).then(|| branch_relative_phase(&mass));
            Ok((qubit.matrix().clone(), phase))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sum = ComplexMatrix::zeros(2);
    let mut offdiags = Vec::with_capacity(reductions.len());
    for (m, _) in &reductions {
        sum = sum.add(m)?;
        offdiags.push(m.get(0, 1));
    }
    let n = reductions.len() as f64;
    let mean_matrix = sum.scale(Complex::new(1.0 / n, 0.0));
    let averaged = DensityOperator::new(mean_matrix, vec![2])?;
    let mean_offdiag: Complex64 = offdiags.iter().sum::<Complex64>() / n;

    // scatter of the complex off-diagonal around its mean
    let var = offdiags
        .iter()
        .map(|z| (z - mean_offdiag).norm_sqr())
        .sum::<f64>()
        / (n - 1.0).max(1.0);
    let offdiag_std_err = (var / n).sqrt();

    let theta = config.separation / config.hbar;
    let damping = if couple_mass {
        (-0.5 * (config.record_std * theta).powi(2)).exp()
    } else {
        1.0
    };

    let initial_phase = branch_relative_phase(&mass0);
    let first_run_phase = reductions[0].1.expect("run 0 records its phase");
    let single_run_phase_delta = wrap_angle(first_run_phase - initial_phase);

    Ok(ChannelOutcome {
        offdiag_mean: averaged.matrix().get(0, 1).norm(),
        offdiag_initial,
        predicted_offdiag: offdiag_initial * damping,
        initial,
        averaged,
        offdiag_std_err,
        single_run_phase_delta,
        runs: config.runs,
        seed: config.seed,
    })
}

fn wrap_angle(a: f64) -> f64 {
    let mut x = a % (2.0 * std::f64::consts::PI);
    if x > std::f64::consts::PI {
        x -= 2.0 * std::f64::consts::PI;
    } else if x < -std::f64::consts::PI {
        x += 2.0 * std::f64::consts::PI;
    }
    x
}

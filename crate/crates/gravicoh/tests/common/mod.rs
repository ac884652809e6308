//! Shared helpers for the integration suites: seeded random matrices,
//! unitaries and states.

#![allow(dead_code)]

use gravicoh::qmat::{evolution_operator, Complex64, ComplexMatrix, Ket};
use gravicoh::qstate::DensityOperator;
use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex::new(re, im)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .unwrap()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let m = random_matrix(rng, dim);
    m.add(&m.adjoint()).unwrap().scale(c(0.5, 0.0))
}

pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    evolution_operator(&random_hermitian(rng, dim), 1.0, 1.0).unwrap()
}

pub fn random_ket(rng: &mut ChaCha8Rng, dim: usize) -> Ket {
    Ket::new(
        (0..dim)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
    .normalized()
    .unwrap()
}

/// Random mixed state with a random spectrum, `V diag(λ) V†`.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityOperator {
    let (matrix, _) = random_density_with_spectrum(rng, dim);
    DensityOperator::new(matrix, vec![dim]).unwrap()
}

/// Random mixed state along with the spectrum it was built from.
pub fn random_density_with_spectrum(
    rng: &mut ChaCha8Rng,
    dim: usize,
) -> (ComplexMatrix, Vec<f64>) {
    let raw: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let spectrum: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let v = random_unitary(rng, dim);
    let d = ComplexMatrix::real_diagonal(&spectrum).unwrap();
    let matrix = v.matmul(&d).unwrap().matmul(&v.adjoint()).unwrap();
    (matrix, spectrum)
}

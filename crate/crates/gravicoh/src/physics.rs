//! Dimensional formulas: gravitational interaction energies, the arm phase
//! difference and its dimensionless Planck-mass form, transit-time solving,
//! and the oscillator coupling constant.
//!
//! Phases for macroscopic inputs can reach 1e23 radians, where a plain f64
//! reduction modulo 2π is meaningless. All phases are therefore evaluated in
//! compensated double-double arithmetic (~31 significant digits) and reduced
//! against a two-term representation of 2π, and every [`PhaseShift`] carries
//! an estimate of the residual reduction error.

use crate::{Error, Result};

/// Fundamental constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Newtonian gravitational constant, m³ kg⁻¹ s⁻².
    pub g: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Speed of light, m s⁻¹.
    pub c: f64,
}

impl PhysicalConstants {
    /// CODATA values.
    pub const fn codata() -> Self {
        Self {
            g: 6.674_30e-11,
            hbar: 1.054_571_817e-34,
            c: 2.997_924_58e8,
        }
    }

    pub fn new(g: f64, hbar: f64, c: f64) -> Result<Self> {
        for (name, value) in [("G", g), ("hbar", hbar), ("c", c)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(Self { g, hbar, c })
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata()
    }
}

/// Geometry, masses and noise of the probe-mass interferometer.
///
/// `d` small compared to `D` is the sketchbook regime but is not enforced —
/// the formulas hold for any positive geometry. [`Self::geometry_warning`]
/// flags `d >= D/10`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerParams {
    split_mass: f64,
    probe_mass: f64,
    arm_separation: f64,
    probe_distance: f64,
    transit_time: f64,
    noise: f64,
    /// Length of the nonparallel section of the splitter arms. Recorded for
    /// bookkeeping only; it never enters a formula.
    pub bend_length: Option<f64>,
}

impl InterferometerParams {
    pub fn new(
        split_mass: f64,
        probe_mass: f64,
        arm_separation: f64,
        probe_distance: f64,
        transit_time: f64,
        noise: f64,
    ) -> Result<Self> {
        for (name, value) in [
            ("M", split_mass),
            ("m", probe_mass),
            ("D", arm_separation),
            ("d", probe_distance),
            ("tau", transit_time),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        if !(0.0..=1.0).contains(&noise) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: noise,
            });
        }
        Ok(Self {
            split_mass,
            probe_mass,
            arm_separation,
            probe_distance,
            transit_time,
            noise,
            bend_length: None,
        })
    }

    pub fn split_mass(&self) -> f64 {
        self.split_mass
    }
    pub fn probe_mass(&self) -> f64 {
        self.probe_mass
    }
    pub fn arm_separation(&self) -> f64 {
        self.arm_separation
    }
    pub fn probe_distance(&self) -> f64 {
        self.probe_distance
    }
    pub fn transit_time(&self) -> f64 {
        self.transit_time
    }
    pub fn noise(&self) -> f64 {
        self.noise
    }

    pub fn with_transit_time(mut self, tau: f64) -> Result<Self> {
        if !tau.is_finite() || tau <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "tau",
                value: tau,
            });
        }
        self.transit_time = tau;
        Ok(self)
    }

    /// Warns when the probe sits too close to the far arm for the usual
    /// near-field picture; the formulas themselves stay exact.
    pub fn geometry_warning(&self) -> Option<String> {
        if self.probe_distance >= self.arm_separation / 10.0 {
            Some(format!(
                "probe distance d = {:.3e} m is not small compared to arm separation D = {:.3e} m; \
                 phase formulas remain exact but the near-field geometry picture does not apply",
                self.probe_distance, self.arm_separation
            ))
        } else {
            None
        }
    }
}

/// A phase in radians: the raw accumulated value, its reduction to
/// `[0, 2π)`, and an estimate of the error committed by the reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShift {
    /// Full accumulated phase.
    pub raw: f64,
    /// `raw` modulo 2π, evaluated in double-double arithmetic. Lies in
    /// `[0, 2π)` up to f64 resolution of the upper endpoint.
    pub reduced: f64,
    /// Estimated absolute error of `reduced`, dominated by the finite
    /// precision of the accumulated value.
    pub reduction_error: f64,
}

impl PhaseShift {
    pub const ZERO: Self = Self {
        raw: 0.0,
        reduced: 0.0,
        reduction_error: 0.0,
    };

    fn from_dd(value: dd::Dd) -> Self {
        Self {
            raw: value.to_f64(),
            reduced: dd::reduce_two_pi(value),
            reduction_error: reduction_error_estimate(value.to_f64()),
        }
    }

    /// Wrap a phase that is already available as an f64.
    pub fn from_radians(value: f64) -> Self {
        Self::from_dd(dd::Dd::from(value))
    }
}

fn reduction_error_estimate(raw: f64) -> f64 {
    // double-double carries ~2^-104 relative error per operation; a handful
    // of operations feed each phase, so 2^-100 is a comfortable bound
    raw.abs() * 7.9e-31
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::InvalidParameter { name, value });
    }
    Ok(())
}

/// Gravitational self-energy of the two split components: `G M² / D`.
pub fn self_energy(mass: f64, separation: f64, constants: &PhysicalConstants) -> Result<f64> {
    require_positive("M", mass)?;
    require_positive("D", separation)?;
    Ok(constants.g * mass * mass / separation)
}

/// Gravitational energies of the near and far arms due to the probe mass:
/// `(G M m / d, G M m / (d + D))`. The near arm is always the larger.
pub fn probe_energies(
    params: &InterferometerParams,
    constants: &PhysicalConstants,
) -> Result<(f64, f64)> {
    let gmm = constants.g * params.split_mass() * params.probe_mass();
    let e_left = gmm / params.probe_distance();
    let e_right = gmm / (params.probe_distance() + params.arm_separation());
    Ok((e_left, e_right))
}

/// Accumulated phase `E τ / ħ` of a single arm, reduced in double-double.
pub fn phase_from_energy(energy: f64, tau: f64, hbar: f64) -> PhaseShift {
    let value = dd::Dd::from(energy)
        .mul(dd::Dd::from(tau))
        .div(dd::Dd::from(hbar));
    PhaseShift::from_dd(value)
}

/// Phase difference between the arms, `G M m τ D / (ħ d (d + D))`.
pub fn delta_phi(
    params: &InterferometerParams,
    constants: &PhysicalConstants,
) -> Result<PhaseShift> {
    let numerator = dd::Dd::from(constants.g)
        .mul(dd::Dd::from(params.split_mass()))
        .mul(dd::Dd::from(params.probe_mass()))
        .mul(dd::Dd::from(params.transit_time()))
        .mul(dd::Dd::from(params.arm_separation()));
    let dd_sum = dd::Dd::from(params.probe_distance()).add(dd::Dd::from(params.arm_separation()));
    let denominator = dd::Dd::from(constants.hbar)
        .mul(dd::Dd::from(params.probe_distance()))
        .mul(dd_sum);
    Ok(PhaseShift::from_dd(numerator.div(denominator)))
}

/// Planck mass `sqrt(ħ c / G)`.
pub fn planck_mass(constants: &PhysicalConstants) -> f64 {
    (constants.hbar * constants.c / constants.g).sqrt()
}

/// Dimensionless geometry factor `α = τ D c / (d (d + D))`.
pub fn alpha(params: &InterferometerParams, constants: &PhysicalConstants) -> f64 {
    params.transit_time() * params.arm_separation() * constants.c
        / (params.probe_distance() * (params.probe_distance() + params.arm_separation()))
}

/// The same phase difference through the Planck-mass route,
/// `Δφ = α M m / m_P²` with `m_P² = ħ c / G`.
pub fn delta_phi_dimensionless(
    params: &InterferometerParams,
    constants: &PhysicalConstants,
) -> Result<PhaseShift> {
    let alpha_dd = dd::Dd::from(params.transit_time())
        .mul(dd::Dd::from(params.arm_separation()))
        .mul(dd::Dd::from(constants.c))
        .div(
            dd::Dd::from(params.probe_distance()).mul(
                dd::Dd::from(params.probe_distance()).add(dd::Dd::from(params.arm_separation())),
            ),
        );
    let planck_sq = dd::Dd::from(constants.hbar)
        .mul(dd::Dd::from(constants.c))
        .div(dd::Dd::from(constants.g));
    let value = alpha_dd
        .mul(dd::Dd::from(params.split_mass()))
        .mul(dd::Dd::from(params.probe_mass()))
        .div(planck_sq);
    Ok(PhaseShift::from_dd(value))
}

/// Transit time that produces a target phase difference:
/// `τ = target ħ d (d + D) / (G M m D)`.
pub fn tau_for_target_phase(
    target: f64,
    split_mass: f64,
    probe_mass: f64,
    arm_separation: f64,
    probe_distance: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_positive("target", target)?;
    require_positive("M", split_mass)?;
    require_positive("m", probe_mass)?;
    require_positive("D", arm_separation)?;
    require_positive("d", probe_distance)?;
    Ok(
        target * constants.hbar * probe_distance * (probe_distance + arm_separation)
            / (constants.g * split_mass * probe_mass * arm_separation),
    )
}

/// Spring constant of the linearized two-mass interaction: `2 G m₁ m₂ / d³`.
pub fn coupling_constant(
    m1: f64,
    m2: f64,
    distance: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_positive("m1", m1)?;
    require_positive("m2", m2)?;
    require_positive("d", distance)?;
    Ok(2.0 * constants.g * m1 * m2 / (distance * distance * distance))
}

/// Double-double (two-f64) arithmetic: unevaluated hi + lo sums giving about
/// 31 significant decimal digits. Only the handful of operations the phase
/// pipeline needs.
pub(crate) mod dd {
    /// Two-term floating sum, |lo| <= ulp(hi)/2.
    #[derive(Debug, Clone, Copy)]
    pub struct Dd {
        pub hi: f64,
        pub lo: f64,
    }

    /// 2π to double-double precision.
    pub const TWO_PI: Dd = Dd {
        hi: std::f64::consts::TAU,
        lo: 2.449_293_598_294_706_4e-16,
    };

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        (s, err)
    }

    fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let err = b - (s - a);
        (s, err)
    }

    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        let err = a.mul_add(b, -p);
        (p, err)
    }

    impl Dd {
        pub fn from(x: f64) -> Self {
            Self { hi: x, lo: 0.0 }
        }

        pub fn to_f64(self) -> f64 {
            self.hi + self.lo
        }

        pub fn add(self, other: Self) -> Self {
            let (s, e) = two_sum(self.hi, other.hi);
            let e = e + self.lo + other.lo;
            let (hi, lo) = quick_two_sum(s, e);
            Self { hi, lo }
        }

        pub fn sub(self, other: Self) -> Self {
            self.add(Self {
                hi: -other.hi,
                lo: -other.lo,
            })
        }

        pub fn mul(self, other: Self) -> Self {
            let (p, e) = two_prod(self.hi, other.hi);
            let e = e + self.hi * other.lo + self.lo * other.hi;
            let (hi, lo) = quick_two_sum(p, e);
            Self { hi, lo }
        }

        pub fn mul_f64(self, x: f64) -> Self {
            let (p, e) = two_prod(self.hi, x);
            let e = e + self.lo * x;
            let (hi, lo) = quick_two_sum(p, e);
            Self { hi, lo }
        }

        pub fn div(self, other: Self) -> Self {
            let q1 = self.hi / other.hi;
            let r = self.sub(other.mul_f64(q1));
            let q2 = r.hi / other.hi;
            let r = r.sub(other.mul_f64(q2));
            let q3 = r.hi / other.hi;
            let (hi, lo) = quick_two_sum(q1, q2);
            Self { hi, lo }.add(Self::from(q3))
        }

        fn floor(self) -> Self {
            let fhi = self.hi.floor();
            if fhi == self.hi {
                let flo = self.lo.floor();
                let (hi, lo) = quick_two_sum(fhi, flo);
                Self { hi, lo }
            } else {
                Self { hi: fhi, lo: 0.0 }
            }
        }
    }

    fn ge(a: Dd, b: Dd) -> bool {
        a.hi > b.hi || (a.hi == b.hi && a.lo >= b.lo)
    }

    /// Reduce to `[0, 2π)` using the two-term 2π. The result is exact to
    /// double-double resolution; an input indistinguishable from a multiple
    /// of 2π at f64 precision may therefore round to the f64 value of 2π
    /// itself (which still represents a real below the true 2π).
    pub fn reduce_two_pi(x: Dd) -> f64 {
        let quotient = x.div(TWO_PI).floor();
        let mut r = x.sub(TWO_PI.mul(quotient));
        // floor in double-double can land one period off at the boundary
        while r.to_f64() < 0.0 {
            r = r.add(TWO_PI);
        }
        while ge(r, TWO_PI) {
            r = r.sub(TWO_PI);
        }
        r.to_f64().max(0.0)
    }
}

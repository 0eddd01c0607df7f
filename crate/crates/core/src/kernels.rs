//! Reproducing kernels of the Paley-Wiener spaces on the Siegel domain.
//!
//! The kernel is a one-dimensional frequency integral of the exponential of
//! the sesquiholomorphic pairing `Q(omega, zeta)`; point evaluation of any
//! synthesized function is the inner product against the kernel profile.

use crate::fock;
use crate::geometry::{psi, HeisenbergPoint, SiegelPoint};
use crate::pw::{self, RankOneOperator, SpectralProfile};
use crate::quad::GaussLegendre;
use crate::{Complex64, Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, Copy)]
pub struct KernelSpec {
    pub a: f64,
    pub s: f64,
    pub n: usize,
}

impl KernelSpec {
    pub fn new(a: f64, s: f64, n: usize) -> Result<Self> {
        if a <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "type must be positive, got {a}"
            )));
        }
        if s < 0.0 || s >= n as f64 + 1.0 {
            return Err(Error::InvalidParameter(format!(
                "smoothness {s} outside [0, {})",
                n + 1
            )));
        }
        Ok(KernelSpec { a, s, n })
    }
}

/// `Q(omega, zeta) = (1/2i)(omega_{n+1} - conj(zeta_{n+1}))
///  - (1/4) omega' . conj(zeta')`.
///
/// Holomorphic in `omega`, antiholomorphic in `zeta`; on the diagonal it
/// equals the height, so `Q = 0` on the boundary diagonal.
pub fn q_form(omega: &SiegelPoint, zeta: &SiegelPoint) -> Complex64 {
    let dot: Complex64 = omega
        .zprime
        .iter()
        .zip(&zeta.zprime)
        .map(|(w, z)| w * z.conj())
        .sum();
    (omega.zlast - zeta.zlast.conj()) * Complex64::new(0.0, -0.5) - dot * 0.25
}

/// Kernel by frequency quadrature:
/// `(2pi)^{-(n+1)} int_{-a}^0 e^{2 lambda Q} |lambda|^{n-s} dlambda`
/// on `q` Gauss-Legendre nodes.  Real-exponent convention: the integrand
/// decays in the height of either argument, matching the damping `e^{lambda h}`
/// of lifted profiles.
pub fn kernel_eval(
    spec: &KernelSpec,
    omega: &SiegelPoint,
    zeta: &SiegelPoint,
    q: usize,
) -> Complex64 {
    let qf = q_form(omega, zeta);
    let rule = GaussLegendre::new(q, -spec.a, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (&l, &w) in rule.nodes.iter().zip(&rule.weights) {
        acc += (qf * 2.0 * l).exp() * (-l).powf(spec.n as f64 - spec.s) * w;
    }
    acc / TWO_PI.powi(spec.n as i32 + 1)
}

fn sinhc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        Complex64::new(1.0, 0.0) + z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sinh() / z
    }
}

/// Closed form at `s = n`, where the frequency weight is 1:
/// `(2pi)^{-(n+1)} a e^{-a Q} sinh(a Q) / (a Q)`.
pub fn kernel_eval_closed(
    spec: &KernelSpec,
    omega: &SiegelPoint,
    zeta: &SiegelPoint,
) -> Result<Complex64> {
    if (spec.s - spec.n as f64).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "closed form requires s = n, got s = {}",
            spec.s
        )));
    }
    let aq = q_form(omega, zeta) * spec.a;
    Ok((-aq).exp() * sinhc(aq) * spec.a / TWO_PI.powi(spec.n as i32 + 1))
}

/// The spectral profile of the kernel section `K_zeta`: at each node,
/// `e^{lambda h} |lambda|^{-s}` times the coherent state of the boundary
/// projection of `zeta`.  Synthesizing this profile at `omega` reproduces
/// [`kernel_eval`] node for node.
pub fn kernel_profile(
    spec: &KernelSpec,
    zeta: &SiegelPoint,
    maxdeg: usize,
    q: usize,
) -> Result<SpectralProfile> {
    if zeta.dim() != spec.n {
        return Err(Error::DimensionMismatch(zeta.dim(), spec.n));
    }
    let coords = psi(zeta);
    let bp = HeisenbergPoint::new(coords.z.clone(), coords.t);
    let rule = GaussLegendre::new(q, -spec.a, 0.0);
    let mut taus = Vec::with_capacity(q);
    for (&l, &w) in rule.nodes.iter().zip(&rule.weights) {
        let mu = -l;
        let scalar = (l * coords.h).exp() * mu.powf(-spec.s);
        let g = fock::coherent_state(l, &bp, maxdeg)?.scale(Complex64::new(scalar, 0.0));
        taus.push(RankOneOperator {
            lambda: l,
            weight: w,
            g,
        });
    }
    pw::profile_from_tau(&taus, spec.a, spec.s)
}

/// Squared norm of `K_zeta` from the one-dimensional closed-form integral
/// `(2pi)^{-(n+1)} int_{-a}^0 e^{2 h lambda} |lambda|^{n-s} dlambda`,
/// evaluated on a fine reference rule.
pub fn kernel_norm_reference(spec: &KernelSpec, zeta: &SiegelPoint, q: usize) -> f64 {
    let h = zeta.rho();
    let rule = GaussLegendre::new(q, -spec.a, 0.0);
    let v = rule.integrate(|l| (2.0 * h * l).exp() * (-l).powf(spec.n as f64 - spec.s));
    v / TWO_PI.powi(spec.n as i32 + 1)
}

/// Largest and smallest eigenvalue of a Hermitian matrix, by power iteration
/// on the matrix and its spectral reflection.  Adequate for the small Gram
/// matrices checked here.
pub fn hermitian_eigen_extremes(g: &[Vec<Complex64>]) -> (f64, f64) {
    let n = g.len();
    let radius: f64 = g
        .iter()
        .map(|row| row.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let apply = |m: &[Vec<Complex64>], x: &[Complex64]| -> Vec<Complex64> {
        m.iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    };
    let rayleigh = |m: &[Vec<Complex64>], x: &[Complex64]| -> f64 {
        let mx = apply(m, x);
        let num: Complex64 = x.iter().zip(&mx).map(|(a, b)| a.conj() * b).sum();
        let den: f64 = x.iter().map(|a| a.norm_sqr()).sum();
        num.re / den
    };
    let iterate = |m: &[Vec<Complex64>]| -> f64 {
        let mut x: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(1.0 + (i as f64) * 0.37, 0.11 * (i as f64) - 0.5))
            .collect();
        for _ in 0..600 {
            let y = apply(m, &x);
            let norm: f64 = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            x = y.iter().map(|v| v / norm).collect();
        }
        rayleigh(m, &x)
    };
    // shift so the dominant eigenvalue of the shifted matrix maps back to
    // the extreme ones of g
    let shifted: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = if i == j {
                        Complex64::new(2.0 * radius, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    d - g[i][j]
                })
                .collect()
        })
        .collect();
    let spectral_max = {
        let raised: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = if i == j {
                            Complex64::new(2.0 * radius, 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        d + g[i][j]
                    })
                    .collect()
            })
            .collect();
        iterate(&raised) - 2.0 * radius
    };
    let spectral_min = 2.0 * radius - iterate(&shifted);
    (spectral_max, spectral_min)
}

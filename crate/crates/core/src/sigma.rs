//! Square lattices in C and the Weierstrass sigma function.
//!
//! The lattice with density parameter `b > 0` has spacing `sqrt(2 pi / b)`.
//! Its sigma function vanishes exactly on the lattice, `|sigma(z)| e^{-(b/4)|z|^2}`
//! is doubly periodic, and entire functions of sufficiently small Fock growth
//! are recovered from their lattice samples by the Lagrange-type series
//! `f(z) = sum_gamma f(gamma) / sigma'(gamma) * sigma(z) / (z - gamma)`.

use crate::{Complex64, Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct SquareLattice {
    pub b: f64,
}

impl SquareLattice {
    pub fn new(b: f64) -> Result<Self> {
        if b <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lattice density must be positive, got {b}"
            )));
        }
        Ok(SquareLattice { b })
    }

    pub fn spacing(&self) -> f64 {
        (2.0 * std::f64::consts::PI / self.b).sqrt()
    }

    pub fn point(&self, l: i64, m: i64) -> Complex64 {
        let s = self.spacing();
        Complex64::new(s * l as f64, s * m as f64)
    }
}

/// All lattice points with `|gamma| <= radius`, enumerated by increasing
/// `|l| + |m|` and lexicographically in `(l, m)` within each shell.
pub fn lattice_points(lattice: &SquareLattice, radius: f64) -> Vec<Complex64> {
    let s = lattice.spacing();
    let kmax = (std::f64::consts::SQRT_2 * radius / s).floor() as i64 + 1;
    let mut out = Vec::new();
    for k in 0..=kmax {
        let mut shell: Vec<(i64, i64)> = Vec::new();
        for l in -k..=k {
            let r = k - l.abs();
            if r == 0 {
                shell.push((l, 0));
            } else {
                shell.push((l, -r));
                shell.push((l, r));
            }
        }
        shell.sort();
        for (l, m) in shell {
            let g = lattice.point(l, m);
            if g.norm() <= radius {
                out.push(g);
            }
        }
    }
    out
}

/// One representative per pair `{gamma, -gamma}` of nonzero lattice points
/// with `|gamma| <= radius`.
fn half_lattice(lattice: &SquareLattice, radius: f64) -> Vec<Complex64> {
    let s = lattice.spacing();
    let kmax = (radius / s).floor() as i64 + 1;
    let mut out = Vec::new();
    for l in -kmax..=kmax {
        for m in -kmax..=kmax {
            if l > 0 || (l == 0 && m > 0) {
                let g = lattice.point(l, m);
                if g.norm() <= radius && g.norm() > 0.0 {
                    out.push(g);
                }
            }
        }
    }
    out
}

/// Log of the paired product `prod (1 - z^2/gamma^2) exp(z^2/gamma^2)` over
/// pair representatives within `r_trunc`, skipping the pair of `skip` if
/// given.  Returns `None` when a factor vanishes exactly.
fn paired_log_sum(
    lattice: &SquareLattice,
    z: Complex64,
    r_trunc: f64,
    skip: Option<Complex64>,
) -> Option<Complex64> {
    let z2 = z * z;
    let mut acc = Complex64::new(0.0, 0.0);
    for g in half_lattice(lattice, r_trunc) {
        if let Some(s) = skip {
            if (g - s).norm() == 0.0 || (g + s).norm() == 0.0 {
                continue;
            }
        }
        let ratio = z2 / (g * g);
        let factor = Complex64::new(1.0, 0.0) - ratio;
        if factor.norm() == 0.0 {
            return None;
        }
        acc += factor.ln() + ratio;
    }
    Some(acc)
}

fn is_lattice_point(lattice: &SquareLattice, z: Complex64) -> bool {
    let s = lattice.spacing();
    let l = (z.re / s).round() as i64;
    let m = (z.im / s).round() as i64;
    let g = lattice.point(l, m);
    z.re == g.re && z.im == g.im
}

/// The Weierstrass sigma function, truncated to pairs within `r_trunc`.
///
/// Pairing `gamma` with `-gamma` cancels the first-order convergence factors,
/// so the paired product converges fast enough for a truncation radius of a
/// few tens of spacings.  The product is accumulated in the log domain.
pub fn sigma_eval(lattice: &SquareLattice, z: Complex64, r_trunc: f64) -> Complex64 {
    if is_lattice_point(lattice, z) {
        return Complex64::new(0.0, 0.0);
    }
    match paired_log_sum(lattice, z, r_trunc, None) {
        Some(s) => z * s.exp(),
        None => Complex64::new(0.0, 0.0),
    }
}

/// `|sigma(z)| exp(-(b/4) |z|^2)`, computed in the log domain so large `|z|`
/// does not overflow.  Doubly periodic up to truncation error.
pub fn modulated_modulus(lattice: &SquareLattice, z: Complex64, r_trunc: f64) -> f64 {
    if is_lattice_point(lattice, z) || z.norm() == 0.0 {
        return 0.0;
    }
    match paired_log_sum(lattice, z, r_trunc, None) {
        Some(s) => (z.norm().ln() + s.re - lattice.b / 4.0 * z.norm_sqr()).exp(),
        None => 0.0,
    }
}

/// `sigma'(gamma)` at a lattice point, from the truncated product with the
/// vanishing pair differentiated analytically:
/// `sigma'(0) = 1` and `sigma'(gamma) = -2 e * prod_{other pairs} (...)`.
pub fn sigma_prime(lattice: &SquareLattice, gamma: Complex64, r_trunc: f64) -> Result<Complex64> {
    let (lnmag, phase) = sigma_prime_ln(lattice, gamma, r_trunc)?;
    Ok(phase * lnmag.exp())
}

/// `sigma'(gamma)` split as `(ln |sigma'|, unit phase)` to stay finite at
/// large `|gamma|`.
fn sigma_prime_ln(
    lattice: &SquareLattice,
    gamma: Complex64,
    r_trunc: f64,
) -> Result<(f64, Complex64)> {
    if !is_lattice_point(lattice, gamma) {
        return Err(Error::InvalidParameter(format!(
            "sigma_prime expects a lattice point, got {gamma}"
        )));
    }
    if gamma.norm() == 0.0 {
        return Ok((0.0, Complex64::new(1.0, 0.0)));
    }
    let rest = paired_log_sum(lattice, gamma, r_trunc, Some(gamma)).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "coincident lattice points near {gamma}; r_trunc too small?"
        ))
    })?;
    // sigma'(gamma) = -2 e * exp(rest)
    let total = rest + Complex64::new(1.0, 0.0);
    let phase = -Complex64::new(0.0, total.im).exp();
    Ok((total.re + std::f64::consts::LN_2, phase))
}

/// Minimum of `|sigma'(gamma)| exp(-(b/4)|gamma|^2)` over lattice points with
/// `|gamma| <= r_trunc / 2`.  Bounded away from zero uniformly in the radius.
pub fn sigma_derivative_lower_bound_check(lattice: &SquareLattice, r_trunc: f64) -> f64 {
    let mut min = f64::INFINITY;
    for g in lattice_points(lattice, r_trunc / 2.0) {
        let (lnmag, _) = sigma_prime_ln(lattice, g, r_trunc).unwrap();
        let v = (lnmag - lattice.b / 4.0 * g.norm_sqr()).exp();
        if v < min {
            min = v;
        }
    }
    min
}

/// Evaluate the interpolation series
/// `sum_gamma f(gamma) / sigma'(gamma) * sigma(z) / (z - gamma)`
/// from the samples `(gamma, f(gamma))`.
///
/// Terms are added in order of increasing `|z - gamma|` with compensated
/// summation, so the result is deterministic under permutation of the input.
pub fn interpolate_from_lattice(
    lattice: &SquareLattice,
    samples: &[(Complex64, Complex64)],
    z: Complex64,
    r_trunc: f64,
) -> Result<Complex64> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    for (g, v) in samples {
        if (z - g).norm() == 0.0 {
            return Ok(*v);
        }
    }
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&i, &j| {
        let di = (z - samples[i].0).norm();
        let dj = (z - samples[j].0).norm();
        di.partial_cmp(&dj)
            .unwrap()
            .then_with(|| {
                samples[i]
                    .0
                    .re
                    .partial_cmp(&samples[j].0.re)
                    .unwrap()
                    .then(samples[i].0.im.partial_cmp(&samples[j].0.im).unwrap())
            })
    });
    let sigma_z = sigma_eval(lattice, z, r_trunc);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for i in order {
        let (g, v) = samples[i];
        let sp = sigma_prime(lattice, g, r_trunc)?;
        let term = v / sp * sigma_z / (z - g);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}

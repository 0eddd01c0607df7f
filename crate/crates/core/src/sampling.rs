//! Lattice sampling sums and frame-ratio experiments.
//!
//! The sampling set on the boundary is a product: a square lattice (or a
//! product of square lattices) in the `z'` directions crossed with the
//! arithmetic progression `pi k / a` in `t`.  The module measures empirical
//! frame ratios for Fock spaces and for synthesized Paley-Wiener functions,
//! checks the Schur and mean-value bounds behind the positive sampling
//! theorem, and runs the density-failure experiment for `b <= a`.

use crate::fock::{self, FockElement};
use crate::geometry::{psi_inverse, HeisenbergCoords, SiegelPoint};
use crate::pw::{self, SpectralProfile};
use crate::sigma::{lattice_points, SquareLattice};
use crate::{Complex64, Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// The truncated boundary sampling set `(gamma', pi k / a + (i/4)|gamma'|^2)`.
#[derive(Debug, Clone)]
pub struct SamplingLattice {
    pub a: f64,
    pub b: Vec<f64>,
    pub r_z: f64,
    pub k_t: i64,
}

impl SamplingLattice {
    pub fn new(a: f64, b: Vec<f64>, r_z: f64, k_t: i64) -> Result<Self> {
        if a <= 0.0 || b.is_empty() || b.iter().any(|&x| x <= 0.0) {
            return Err(Error::InvalidParameter(
                "sampling lattice needs a > 0 and positive densities".into(),
            ));
        }
        if r_z < 0.0 || k_t < 0 {
            return Err(Error::InvalidParameter("negative truncation".into()));
        }
        Ok(SamplingLattice { a, b, r_z, k_t })
    }

    /// Truncation with `r_z` eight Fock spacings at the largest frequency and
    /// `k_t` time steps; `k_t` is capped by what the caller's frequency
    /// quadrature can resolve, so it is a parameter here.
    pub fn with_default_radius(a: f64, b: Vec<f64>, k_t: i64) -> Result<Self> {
        let r_z = 8.0 * (TWO_PI / a).sqrt();
        Self::new(a, b, r_z, k_t)
    }

    pub fn t_spacing(&self) -> f64 {
        std::f64::consts::PI / self.a
    }

    /// Points of the product lattice in the `z'` directions with Euclidean
    /// norm at most `r_z`, in deterministic nested order.
    pub fn z_points(&self) -> Vec<Vec<Complex64>> {
        let per_axis: Vec<Vec<Complex64>> = self
            .b
            .iter()
            .map(|&bj| lattice_points(&SquareLattice::new(bj).unwrap(), self.r_z))
            .collect();
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(self.b.len());
        cartesian(&per_axis, self.r_z, &mut current, &mut out);
        out
    }
}

fn cartesian(
    per_axis: &[Vec<Complex64>],
    r: f64,
    current: &mut Vec<Complex64>,
    out: &mut Vec<Vec<Complex64>>,
) {
    if current.len() == per_axis.len() {
        let norm_sq: f64 = current.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq.sqrt() <= r {
            out.push(current.clone());
        }
        return;
    }
    for z in &per_axis[current.len()] {
        current.push(*z);
        cartesian(per_axis, r, current, out);
        current.pop();
    }
}

/// The full truncated sampling set as boundary Siegel points.
pub fn gamma_points(lat: &SamplingLattice) -> Vec<SiegelPoint> {
    let zs = lat.z_points();
    let mut out = Vec::with_capacity(zs.len() * (2 * lat.k_t as usize + 1));
    for z in &zs {
        for k in -lat.k_t..=lat.k_t {
            out.push(psi_inverse(&HeisenbergCoords {
                z: z.clone(),
                t: lat.t_spacing() * k as f64,
                h: 0.0,
            }));
        }
    }
    out
}

/// Result of a truncated Fock lattice sum.
#[derive(Debug, Clone, Copy)]
pub struct FockSamplingSum {
    pub sum: f64,
    pub tail_bound: f64,
    /// False when `lambda > a`, outside the regime of the frame statement;
    /// the sum is still computed.
    pub in_regime: bool,
}

/// `lambda^n sum_gamma |f(gamma)|^2 e^{-(lambda/2)|gamma|^2}` over the
/// product of `lat` with itself in each coordinate, truncated at `|gamma| <= r`.
///
/// The tail bound majorizes `|f|` by the absolute-coefficient envelope
/// `M(r) = sum |m_alpha| r^{|alpha|}` and sums Gaussian ring estimates past
/// the truncation radius.
pub fn fock_sampling_sum(
    f: &FockElement,
    lat: &SquareLattice,
    lambda: f64,
    a: f64,
    r: f64,
) -> Result<FockSamplingSum> {
    if lambda <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "frequency must be positive, got {lambda}"
        )));
    }
    // the lattice sum uses the Fock space at parameter lambda
    if (f.lam - lambda).abs() > 1e-12 * lambda {
        return Err(Error::ParameterMismatch(format!(
            "element lives at {} but the sum is at {lambda}",
            f.lam
        )));
    }
    let n = f.n;
    let per_axis = lattice_points(lat, r);
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    cartesian(&vec![per_axis; n], r, &mut current, &mut out);
    let mut sum = 0.0;
    for gamma in &out {
        let norm_sq: f64 = gamma.iter().map(|z| z.norm_sqr()).sum();
        sum += f.eval(gamma).norm_sqr() * (-lambda / 2.0 * norm_sq).exp();
    }
    sum *= lambda.powi(n as i32);

    // envelope tail over square rings in index space
    let mono = f.to_monomial_coeffs();
    let table = f.table();
    let envelope = |rad: f64| -> f64 {
        table
            .indices
            .iter()
            .zip(&mono)
            .map(|(alpha, m)| {
                let deg: usize = alpha.iter().sum();
                m.norm() * rad.powi(deg as i32)
            })
            .sum()
    };
    let s = lat.spacing();
    let m_start = (r / s).floor() as i64 + 1;
    let mut tail = 0.0;
    let mut m = m_start;
    loop {
        let count = (2 * m + 1).pow(2 * n as u32) - (2 * m - 1).pow(2 * n as u32);
        let r_min = m as f64 * s;
        let r_max = (2.0 * n as f64).sqrt() * (m as f64 + 1.0) * s;
        let term = lambda.powi(n as i32)
            * count as f64
            * envelope(r_max).powi(2)
            * (-lambda / 2.0 * r_min * r_min).exp();
        tail += term;
        m += 1;
        if (term <= 1e-18 * (sum + tail) && m > m_start + 4) || m > m_start + 100_000 {
            break;
        }
    }
    Ok(FockSamplingSum {
        sum,
        tail_bound: tail,
        in_regime: lambda <= a,
    })
}

/// One measured row of a frame experiment.
#[derive(Debug, Clone)]
pub struct FrameRow {
    pub family: String,
    pub param: String,
    pub id: String,
    pub sample_sum: f64,
    pub norm: f64,
    pub ratio: f64,
    pub tail_bound: f64,
}

/// Ratios collected over a sweep, with the observed envelope.
#[derive(Debug, Clone)]
pub struct FrameReport {
    pub rows: Vec<FrameRow>,
    pub lower: f64,
    pub upper: f64,
}

impl FrameReport {
    fn from_rows(rows: Vec<FrameRow>) -> Self {
        let lower = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
        let upper = rows.iter().map(|r| r.ratio).fold(0.0f64, f64::max);
        FrameReport { rows, lower, upper }
    }

    pub fn envelope(&self) -> f64 {
        self.upper / self.lower
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,param,id,sample_sum,norm,ratio,tail_bound\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                r.family, r.param, r.id, r.sample_sum, r.norm, r.ratio, r.tail_bound
            ));
        }
        out
    }
}

/// Frame ratios `||f||^2 / (lattice sum)` for Fock spaces over a frequency
/// grid; the assertion behind the sweep is that the envelope stays bounded
/// uniformly down to small frequencies.
///
/// Test family: the basis monomials up to degree `maxdeg` and three seeded
/// random elements.  The truncation radius grows like `1/sqrt(lambda)` so the
/// Gaussian-weighted mass of every test function is covered at each node.
pub fn fock_frame_sweep(
    a: f64,
    b: f64,
    lambda_grid: &[f64],
    maxdeg: usize,
    seed: u64,
) -> Result<FrameReport> {
    use rand::Rng;
    use rand::SeedableRng;
    let lat = SquareLattice::new(b)?;
    let mut rows = Vec::new();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let random_coeffs: Vec<Vec<Complex64>> = (0..3)
        .map(|_| {
            (0..=maxdeg)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    for &lambda in lambda_grid {
        let r = (8.0 * lat.spacing()).max(((4 * maxdeg + 40) as f64 / lambda).sqrt());
        let mut family = Vec::new();
        for d in 0..=maxdeg {
            let f = FockElement::basis_vector(lambda, 1, maxdeg, &[d])?;
            family.push((format!("monomial"), format!("deg={d}"), f));
        }
        for (i, coeffs) in random_coeffs.iter().enumerate() {
            let mut f = FockElement::zero(lambda, 1, maxdeg);
            for (c, v) in f.coeffs.iter_mut().zip(coeffs) {
                *c = *v;
            }
            let norm = fock::fock_norm(&f);
            family.push((format!("random"), format!("id={i}"), f.scale(Complex64::new(1.0 / norm, 0.0))));
        }
        for (fam, id, f) in family {
            let s = fock_sampling_sum(&f, &lat, lambda, a, r)?;
            let norm = fock::fock_norm(&f).powi(2);
            rows.push(FrameRow {
                family: fam,
                param: format!("lambda={lambda:.6e}"),
                id,
                sample_sum: s.sum,
                norm,
                ratio: norm / s.sum,
                tail_bound: s.tail_bound,
            });
        }
    }
    Ok(FrameReport::from_rows(rows))
}

/// Maximum Schur row sum of the off-diagonal kernel behind the upper frame
/// bound, with the standard Gaussian test weight.  The exponents combine to
/// `e^{-((t - lambda)/4)|gamma + eta|^2}`, so the bound is finite exactly
/// when `t > lambda`.
pub fn schur_bound_check(
    lambda: f64,
    a: f64,
    t: f64,
    lat: &SquareLattice,
    r: f64,
) -> Result<f64> {
    if !(0.0 < lambda && lambda <= a && a < t && t < lat.b) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < lambda <= a < t < b, got lambda={lambda}, a={a}, t={t}, b={}",
            lat.b
        )));
    }
    let etas = lattice_points(lat, r);
    let mut worst = 0.0f64;
    for gamma in lattice_points(lat, r / 2.0) {
        let mut row = 0.0;
        for eta in &etas {
            let exponent = lambda / 4.0 * (gamma.norm_sqr() + eta.norm_sqr())
                - (t - lambda) / 4.0 * (gamma + eta).norm_sqr()
                + lambda / 4.0 * eta.norm_sqr()
                - lambda / 2.0 * eta.norm_sqr()
                - lambda / 4.0 * gamma.norm_sqr();
            row += exponent.exp();
        }
        worst = worst.max(row);
    }
    Ok(worst)
}

/// Pointwise mean-value bound for entire functions against the Gaussian
/// weight: `|f(gamma)|^2 e^{-d |gamma|^2} <= d / (pi (1 - e^{-d r^2}))
/// * int_{D(gamma, r)} |f|^2 e^{-d|w|^2}`.  Returns `(lhs, rhs, pass)`.
pub fn mean_value_bound_check(
    f: &FockElement,
    gamma: Complex64,
    r: f64,
    d: f64,
) -> Result<(f64, f64, bool)> {
    if r <= 0.0 || d <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need r > 0 and d > 0, got r={r}, d={d}"
        )));
    }
    if f.n != 1 {
        return Err(Error::DimensionMismatch(f.n, 1));
    }
    let lhs = f.eval(&[gamma]).norm_sqr() * (-d * gamma.norm_sqr()).exp();
    let radial = crate::quad::GaussLegendre::new(32, 0.0, r);
    let angular = 64usize;
    let mut integral = 0.0;
    for (&rho, &w) in radial.nodes.iter().zip(&radial.weights) {
        for j in 0..angular {
            let theta = TWO_PI * j as f64 / angular as f64;
            let w_pt = gamma + Complex64::from_polar(rho, theta);
            integral += w * (TWO_PI / angular as f64)
                * rho
                * f.eval(&[w_pt]).norm_sqr()
                * (-d * w_pt.norm_sqr()).exp();
        }
    }
    let rhs = d / (std::f64::consts::PI * (1.0 - (-d * r * r).exp())) * integral;
    Ok((lhs, rhs, lhs <= rhs * (1.0 + 1e-9)))
}

/// Truncated sample sum `sum_{gamma in Gamma} |F(gamma)|^2` of the
/// synthesized function, exploiting the product structure of the lattice:
/// the per-node spatial factors are computed once per `z'` point and reused
/// across the time progression.  Returns `(sum, tail_estimate)` where the
/// tail estimate is the contribution of the outer 10% of both truncations.
pub fn lattice_sample_sum(p: &SpectralProfile, lat: &SamplingLattice) -> (f64, f64) {
    let zs = lat.z_points();
    let mut sum = 0.0;
    let mut outer = 0.0;
    for z in &zs {
        let norm_sq: f64 = z.iter().map(|v| v.norm_sqr()).sum();
        let fac: Vec<Complex64> = p
            .lambdas
            .iter()
            .zip(&p.weights)
            .zip(&p.values)
            .map(|((l, w), v)| v.eval(z) * *w * (l * norm_sq / 4.0).exp())
            .collect();
        let z_outer = norm_sq.sqrt() > 0.9 * lat.r_z;
        // phase recurrence over the time progression, one multiply per node
        let dt = lat.t_spacing();
        let step: Vec<Complex64> = p
            .lambdas
            .iter()
            .map(|l| Complex64::new(0.0, -l * dt).exp())
            .collect();
        let mut phase: Vec<Complex64> = p
            .lambdas
            .iter()
            .map(|l| Complex64::new(0.0, l * dt * lat.k_t as f64).exp())
            .collect();
        for k in -lat.k_t..=lat.k_t {
            let mut f = Complex64::new(0.0, 0.0);
            for (ph, fa) in phase.iter().zip(&fac) {
                f += fa * ph;
            }
            let v = f.norm_sqr() / (TWO_PI * TWO_PI);
            sum += v;
            if z_outer || 10 * k.abs() > 9 * lat.k_t {
                outer += v;
            }
            for (ph, st) in phase.iter_mut().zip(&step) {
                *ph *= st;
            }
        }
    }
    (sum, outer)
}

/// Frame report for the derivative sampling of profiles with the `s = n`
/// norm: ratios `(sample sum of the order-n/2 time derivative) / pw_norm`.
pub fn pw_frame_report(
    lat: &SamplingLattice,
    profiles: &[(String, SpectralProfile)],
) -> Result<FrameReport> {
    let mut rows = Vec::new();
    for (name, p) in profiles {
        let n = p.dim() as f64;
        let pn = p.with_smoothness(n)?;
        let norm = pw::pw_norm(&pn);
        if norm == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "zero profile {name} has no frame ratio"
            )));
        }
        let d = pw::fractional_t_derivative(&pn, n / 2.0)?;
        let (sum, tail) = lattice_sample_sum(&d, lat);
        rows.push(FrameRow {
            family: "pw-derivative".into(),
            param: format!("a={},b={:?}", lat.a, lat.b),
            id: name.clone(),
            sample_sum: sum,
            norm,
            ratio: sum / norm,
            tail_bound: tail,
        });
    }
    Ok(FrameReport::from_rows(rows))
}

/// Frame report for plain sampling of profiles with the `s = 0` norm.
/// Algebraically this is [`pw_frame_report`] after the `|lambda|^{-n/2}`
/// lift of each profile, and the two code paths agree node for node.
pub fn pw0_frame_report(
    lat: &SamplingLattice,
    profiles: &[(String, SpectralProfile)],
) -> Result<FrameReport> {
    let mut rows = Vec::new();
    for (name, p) in profiles {
        let p0 = p.with_smoothness(0.0)?;
        let norm = pw::pw_norm(&p0);
        if norm == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "zero profile {name} has no frame ratio"
            )));
        }
        let (sum, tail) = lattice_sample_sum(&p0, lat);
        rows.push(FrameRow {
            family: "pw-plain".into(),
            param: format!("a={},b={:?}", lat.a, lat.b),
            id: name.clone(),
            sample_sum: sum,
            norm,
            ratio: sum / norm,
            tail_bound: tail,
        });
    }
    Ok(FrameReport::from_rows(rows))
}

/// Lift a `s = 0` profile to the derivative-sampled picture: multiply the
/// node values by `|lambda|^{-n/2}`.  Sampling the order-n/2 derivative of
/// the lift reproduces plain sampling of the original exactly.
pub fn lift_profile(p: &SpectralProfile) -> Result<SpectralProfile> {
    let n = p.dim() as f64;
    let taus = pw::tau_from_profile(p)?;
    let lifted: Vec<pw::RankOneOperator> = taus
        .into_iter()
        .map(|mut t| {
            let factor = (-t.lambda).powf(-n / 2.0);
            t.g = t.g.scale(Complex64::new(factor, 0.0));
            t
        })
        .collect();
    pw::profile_from_tau(&lifted, p.a, n)
}

/// One arm of the density-failure experiment.
#[derive(Debug, Clone)]
pub struct NecessaryConditionReport {
    /// `(epsilon, lower-frame ratio)` for the shrinking spectral window.
    pub rows: Vec<(f64, f64)>,
    /// True when some density is at or below the type, the regime where the
    /// lattice fails to sample and the ratios must collapse.
    pub subcritical: bool,
    pub family: String,
}

impl NecessaryConditionReport {
    pub fn decay_factor(&self) -> f64 {
        self.rows.first().unwrap().1 / self.rows.last().unwrap().1
    }
}

/// Build the concentrated test family `F_eps = f(zeta') g_eps(zeta_{n+1})`
/// with `ghat_eps = eps^{-1/2} chi_{[-a, -a+eps]}` and measure the lower
/// frame ratio (sample sum over norm, `s = 0`) as `eps` shrinks.
///
/// With `near_kernel` set, `f` is the monic polynomial vanishing on the
/// chunk `|gamma| <= 3 spacings` of the sampling lattice, normalized in the
/// Fock space at frequency `a`; its samples survive only past the chunk,
/// where the Gaussian weight at frequencies near `-a` suppresses them when
/// the lattice is too sparse.  Without it, `f = e_0` serves as the negative
/// control.  At `b = 0.9 a` the near-kernel ratios collapse by more than an
/// order of magnitude across `eps in {1/4, ..., 1/32}`; at `b = 1.5 a` they
/// stay within the positive theorem's envelope.
pub fn necessary_condition_experiment(
    a: f64,
    b: f64,
    near_kernel: bool,
) -> Result<NecessaryConditionReport> {
    let lat_b = SquareLattice::new(b)?;
    let chunk = lattice_points(&lat_b, 3.0 * lat_b.spacing());
    // monic polynomial with the chunk as zero set, in monomial coefficients
    let maxdeg = if near_kernel { chunk.len() + 4 } else { 8 };
    let mut poly = vec![Complex64::new(0.0, 0.0); maxdeg + 1];
    poly[0] = Complex64::new(1.0, 0.0);
    let mut deg = 0usize;
    if near_kernel {
        for g in &chunk {
            for i in (0..=deg).rev() {
                let carry = poly[i];
                poly[i + 1] += carry;
                poly[i] = -g * carry;
            }
            deg += 1;
        }
    }

    let r_z = 3.0 * lat_b.spacing() + 5.0 * lat_b.spacing();
    let lat = SamplingLattice::new(a, vec![b], r_z, 128)?;
    // enough nodes on the narrow window to resolve the full time progression
    let q_sub = 40;
    let mut rows = Vec::new();
    for k in 2..=5u32 {
        let eps = 0.5f64.powi(k as i32);
        let mut p =
            SpectralProfile::zero_on_interval(a, 0.0, 1, maxdeg, q_sub, -a, -a + eps)?;
        for v in &mut p.values {
            let mono: Vec<Complex64> = v
                .table()
                .indices
                .iter()
                .map(|alpha| {
                    if alpha[0] <= deg {
                        poly[alpha[0]]
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            *v = FockElement::from_monomial_coeffs(v.lam, 1, maxdeg, &mono)?;
        }
        // normalize f in the Fock space at frequency a, then apply ghat_eps
        let f_at_a = FockElement::from_monomial_coeffs(
            a,
            1,
            maxdeg,
            &p.values[0].to_monomial_coeffs(),
        )?;
        let scale = 1.0 / fock::fock_norm(&f_at_a) / eps.sqrt();
        for v in &mut p.values {
            *v = v.scale(Complex64::new(scale, 0.0));
        }
        let norm = pw::pw_norm(&p);
        let (sum, _) = lattice_sample_sum(&p, &lat);
        rows.push((eps, sum / norm));
    }
    Ok(NecessaryConditionReport {
        rows,
        subcritical: b <= a,
        family: if near_kernel { "near-kernel".into() } else { "e0".into() },
    })
}

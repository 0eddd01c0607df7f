//! Spectral profiles and the Paley-Wiener engine.
//!
//! A function of exponential type `a` whose boundary restriction is square
//! integrable is encoded by a spectral profile: a family of Fock elements
//! indexed by frequencies `lambda` in `(-a, 0)`, discretized here at
//! Gauss-Legendre nodes.  Synthesis is a one-dimensional inverse Fourier
//! transform in the last Siegel coordinate,
//! `F(zeta) = (1/2pi) int phi(zeta', lambda) e^{-i lambda zeta_{n+1}} dlambda`,
//! and the profile carries the norm, the height propagation and the
//! fractional derivative structure of the space.

use crate::fock::{self, FockElement};
use crate::geometry::{psi, HeisenbergPoint, SiegelPoint};
use crate::quad::{sinc, GaussLegendre};
use crate::{Complex64, Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// A discretized spectral profile of type `a` and smoothness `s`.
///
/// Node frequencies `lambdas` lie in `(-a, 0)`; `values[q]` is the Fock
/// element at `lambdas[q]`, living in the space with parameter
/// `|lambdas[q]|`.  The default constructor covers the full band, so the
/// weights sum to `a`; band-limited sub-interval profiles relax that.
#[derive(Debug, Clone)]
pub struct SpectralProfile {
    pub a: f64,
    pub s: f64,
    pub lambdas: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<FockElement>,
}

/// The rank-one field `tau(lambda) = |e_0><g(lambda)|` at one node.
#[derive(Debug, Clone)]
pub struct RankOneOperator {
    pub lambda: f64,
    pub weight: f64,
    pub g: FockElement,
}

impl SpectralProfile {
    /// Zero profile with the default Gauss-Legendre nodes on `[-a, 0]`.
    pub fn zero(a: f64, s: f64, n: usize, maxdeg: usize, q: usize) -> Result<Self> {
        Self::zero_on_interval(a, s, n, maxdeg, q, -a, 0.0)
    }

    /// Zero profile with nodes on a sub-interval `[lo, hi]` of `[-a, 0]`.
    pub fn zero_on_interval(
        a: f64,
        s: f64,
        n: usize,
        maxdeg: usize,
        q: usize,
        lo: f64,
        hi: f64,
    ) -> Result<Self> {
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
        if lo < -a || hi > 0.0 || lo >= hi {
            return Err(Error::SupportViolation(format!("[{lo}, {hi}]")));
        }
        let rule = GaussLegendre::new(q, lo, hi);
        let values = rule
            .nodes
            .iter()
            .map(|&l| FockElement::zero(-l, n, maxdeg))
            .collect();
        Ok(SpectralProfile {
            a,
            s,
            lambdas: rule.nodes,
            weights: rule.weights,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.values[0].n
    }

    pub fn maxdeg(&self) -> usize {
        self.values[0].maxdeg
    }

    pub fn node_count(&self) -> usize {
        self.lambdas.len()
    }

    pub fn with_smoothness(&self, s: f64) -> Result<Self> {
        if s < 0.0 || s >= self.dim() as f64 + 1.0 {
            return Err(Error::InvalidParameter(format!(
                "smoothness {s} outside [0, {})",
                self.dim() + 1
            )));
        }
        let mut out = self.clone();
        out.s = s;
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v = v.scale(c);
        }
        out
    }

    pub fn add(&self, other: &SpectralProfile) -> Result<Self> {
        self.check_nodes(other)?;
        let mut out = self.clone();
        for (v, w) in out.values.iter_mut().zip(&other.values) {
            *v = v.add(w)?;
        }
        Ok(out)
    }

    fn check_nodes(&self, other: &SpectralProfile) -> Result<()> {
        if self.node_count() != other.node_count() {
            return Err(Error::DimensionMismatch(
                self.node_count(),
                other.node_count(),
            ));
        }
        for (a, b) in self.lambdas.iter().zip(&other.lambdas) {
            if (a - b).abs() > 1e-14 {
                return Err(Error::ParameterMismatch(format!("nodes {a} vs {b}")));
            }
        }
        Ok(())
    }

    /// Node-wise multiplication of the values by `|lambda|^r`; `r` may be
    /// negative (nodes are strictly away from 0).
    fn lambda_power(&self, r: f64) -> Self {
        let mut out = self.clone();
        for (l, v) in out.lambdas.iter().zip(&mut out.values) {
            let factor = (-l).powf(r);
            *v = v.scale(Complex64::new(factor, 0.0));
        }
        out
    }

    /// Damp the profile by `e^{lambda h}`, which moves the boundary
    /// restriction to height `h`.
    pub fn at_height(&self, h: f64) -> Self {
        let mut out = self.clone();
        for (l, v) in out.lambdas.iter().zip(&mut out.values) {
            *v = v.scale(Complex64::new((l * h).exp(), 0.0));
        }
        out
    }

    /// CSV dump: rows `lambda, weight, alpha_1..alpha_n, re, im` in node
    /// order, graded lexicographic within a node.
    pub fn to_csv(&self) -> String {
        let table = self.values[0].table();
        let mut out = String::from("lambda,weight");
        for j in 0..self.dim() {
            out.push_str(&format!(",alpha{}", j + 1));
        }
        out.push_str(",re,im\n");
        for ((l, w), v) in self.lambdas.iter().zip(&self.weights).zip(&self.values) {
            for (alpha, c) in table.indices.iter().zip(&v.coeffs) {
                out.push_str(&format!("{l:.17e},{w:.17e}"));
                for a in alpha {
                    out.push_str(&format!(",{a}"));
                }
                out.push_str(&format!(",{:.17e},{:.17e}\n", c.re, c.im));
            }
        }
        out
    }
}

/// Evaluate the synthesized entire function at a Siegel point:
/// `(1/2pi) sum_q w_q phi_q(zeta') e^{-i lambda_q zeta_{n+1}}`.
pub fn synthesize_eval(p: &SpectralProfile, zeta: &SiegelPoint) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for ((l, w), v) in p.lambdas.iter().zip(&p.weights).zip(&p.values) {
        let phase = (Complex64::new(0.0, -l) * zeta.zlast).exp();
        acc += v.eval(&zeta.zprime) * phase * *w;
    }
    acc / TWO_PI
}

/// The same synthesis through the operator field: `F(zeta) =
/// (2pi)^{-(n+1)} sum_q w_q e^{lambda h} tr(tau(lambda) beta_lambda[z,t]^*)
/// |lambda|^n` with the trace written as a coherent-state inner product.
/// Agrees with [`synthesize_eval`] node by node.
pub fn synthesize_eval_trace(p: &SpectralProfile, zeta: &SiegelPoint) -> Result<Complex64> {
    let coords = psi(zeta);
    let bp = HeisenbergPoint::new(coords.z.clone(), coords.t);
    let n = p.dim();
    let taus = tau_from_profile(p)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for tau in &taus {
        let mu = -tau.lambda;
        let coh = fock::coherent_state(tau.lambda, &bp, p.maxdeg())?;
        let trace = fock::fock_inner(&coh, &tau.g)?;
        acc += trace * tau.weight * (tau.lambda * coords.h).exp() * mu.powi(n as i32);
    }
    Ok(acc / TWO_PI.powi(n as i32 + 1))
}

/// Squared Paley-Wiener norm:
/// `(2pi)^{n-1} sum_q w_q ||phi_q||^2 |lambda_q|^{s-n}`.
pub fn pw_norm(p: &SpectralProfile) -> f64 {
    let n = p.dim() as i32;
    let mut acc = 0.0;
    for ((l, w), v) in p.lambdas.iter().zip(&p.weights).zip(&p.values) {
        acc += w * fock::fock_norm(v).powi(2) * (-l).powf(p.s - n as f64);
    }
    acc * TWO_PI.powi(n - 1)
}

/// Hermitian inner product inducing [`pw_norm`]; linear in the first slot.
pub fn pw_inner(p: &SpectralProfile, q: &SpectralProfile) -> Result<Complex64> {
    p.check_nodes(q)?;
    if (p.s - q.s).abs() > 1e-14 {
        return Err(Error::ParameterMismatch(format!("s = {} vs {}", p.s, q.s)));
    }
    let n = p.dim() as i32;
    let mut acc = Complex64::new(0.0, 0.0);
    for (((l, w), a), b) in p
        .lambdas
        .iter()
        .zip(&p.weights)
        .zip(&p.values)
        .zip(&q.values)
    {
        acc += fock::fock_inner(a, b)? * *w * (-l).powf(p.s - n as f64);
    }
    Ok(acc * TWO_PI.powi(n - 1))
}

/// Squared `L^2` norm of the restriction to height `h`:
/// `(2pi)^{n-1} sum_q w_q e^{2 lambda_q h} ||phi_q||^2 |lambda_q|^{-n}`.
pub fn restriction_norm_at_height(p: &SpectralProfile, h: f64) -> f64 {
    let n = p.dim() as i32;
    let mut acc = 0.0;
    for ((l, w), v) in p.lambdas.iter().zip(&p.weights).zip(&p.values) {
        acc += w * (2.0 * l * h).exp() * fock::fock_norm(v).powi(2) * (-l).powf(-n as f64);
    }
    acc * TWO_PI.powi(n - 1)
}

/// The `p = 2` Plancherel-Polya inequality
/// `||F_h||^2 <= e^{2 a h_-} ||F_0||^2` with `h_- = max(0, -h)`.
/// Returns `(lhs, rhs, pass)`.
pub fn plancherel_polya_check(p: &SpectralProfile, h: f64) -> (f64, f64, bool) {
    let lhs = restriction_norm_at_height(p, h);
    let hminus = (-h).max(0.0);
    let rhs = (2.0 * p.a * hminus).exp() * restriction_norm_at_height(p, 0.0);
    (lhs, rhs, lhs <= rhs * (1.0 + 1e-10))
}

/// Fractional derivative in the `t` direction of order `r >= 0`:
/// node-wise multiplication by `|lambda_q|^r`.  Composes additively in `r`.
pub fn fractional_t_derivative(p: &SpectralProfile, r: f64) -> Result<SpectralProfile> {
    if r < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "derivative order must be nonnegative, got {r}"
        )));
    }
    Ok(p.lambda_power(r))
}

/// The rank-one operator field of the profile.  Inverse of
/// [`profile_from_tau`] up to the shared truncation.
pub fn tau_from_profile(p: &SpectralProfile) -> Result<Vec<RankOneOperator>> {
    let n = p.dim() as i32;
    let mut out = Vec::with_capacity(p.node_count());
    for ((l, w), v) in p.lambdas.iter().zip(&p.weights).zip(&p.values) {
        let factor = (TWO_PI / -l).powi(n);
        let g = FockElement {
            lam: -l,
            n: v.n,
            maxdeg: v.maxdeg,
            coeffs: v.coeffs.iter().map(|c| c.conj() * factor).collect(),
        };
        out.push(RankOneOperator {
            lambda: *l,
            weight: *w,
            g,
        });
    }
    Ok(out)
}

/// Rebuild the profile from a rank-one operator field.
pub fn profile_from_tau(taus: &[RankOneOperator], a: f64, s: f64) -> Result<SpectralProfile> {
    if taus.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let n = taus[0].g.n as i32;
    let mut lambdas = Vec::new();
    let mut weights = Vec::new();
    let mut values = Vec::new();
    for tau in taus {
        if tau.lambda <= -a || tau.lambda >= 0.0 {
            return Err(Error::SupportViolation(format!("lambda = {}", tau.lambda)));
        }
        let factor = (-tau.lambda / TWO_PI).powi(n);
        values.push(FockElement {
            lam: -tau.lambda,
            n: tau.g.n,
            maxdeg: tau.g.maxdeg,
            coeffs: tau.g.coeffs.iter().map(|c| c.conj() * factor).collect(),
        });
        lambdas.push(tau.lambda);
        weights.push(tau.weight);
    }
    Ok(SpectralProfile {
        a,
        s,
        lambdas,
        weights,
        values,
    })
}

/// Squared Hilbert-Schmidt norm of the operator field with the `s`-weight:
/// `(2pi)^{-(n+1)} sum_q w_q ||g_q||^2 |lambda_q|^{n+s}`.
pub fn tau_norm(taus: &[RankOneOperator], s: f64) -> f64 {
    if taus.is_empty() {
        return 0.0;
    }
    let n = taus[0].g.n as i32;
    let mut acc = 0.0;
    for tau in taus {
        acc += tau.weight * fock::fock_norm(&tau.g).powi(2) * (-tau.lambda).powf(n as f64 + s);
    }
    acc / TWO_PI.powi(n + 1)
}

/// The orthonormal basis element `G_{alpha, ell}` as a profile with `s = n`:
/// `phi(z, lambda) = (2^{|alpha|} alpha!)^{-1/2} z^alpha |lambda|^{|alpha|/2}
///  sqrt(2pi) ghat_ell(lambda)` with `ghat_ell(lambda) = a^{-1/2}
/// e^{-2pi i ell lambda / a}`.  Normalized so the Gram matrix is
/// `(2pi)^n` times the identity.
pub fn basis_element(
    alpha: &[usize],
    ell: i64,
    a: f64,
    maxdeg: usize,
    q: usize,
) -> Result<SpectralProfile> {
    let n = alpha.len();
    let mut p = SpectralProfile::zero(a, n as f64, n, maxdeg, q)?;
    let table = p.values[0].table();
    let pos = table
        .position(alpha)
        .ok_or_else(|| Error::InvalidParameter(format!("multi-index {alpha:?} out of range")))?;
    // the orthonormal-basis coefficient collapses to sqrt(2pi) ghat_ell(lambda)
    for (l, v) in p.lambdas.iter().zip(&mut p.values) {
        let ghat = Complex64::new(0.0, -TWO_PI * ell as f64 * l / a).exp() / a.sqrt();
        v.coeffs[pos] = ghat * TWO_PI.sqrt();
    }
    Ok(p)
}

/// Report of the classical sampling identity for band-limited `g`.
#[derive(Debug, Clone)]
pub struct WksReport {
    pub sample_sum: f64,
    pub expected: f64,
    pub tail_bound: f64,
    pub pass: bool,
}

/// Time-domain evaluation of `g(x) = (1/2pi) int ghat(lambda) e^{-i lambda x}
/// dlambda` for `ghat = sum c_ell ghat_ell` in the Fourier basis of
/// `L^2(-a, 0)`, by the closed form of each term.
pub fn bandlimited_eval(coeffs: &[(i64, Complex64)], a: f64, x: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(ell, c) in coeffs {
        let y = x + TWO_PI * ell as f64 / a;
        // int_{-a}^0 e^{-i lambda y} dlambda = a e^{i a y / 2} sinc(a y / 2)
        let term = Complex64::new(0.0, a * y / 2.0).exp() * sinc(a * y / 2.0) * a;
        acc += c * term;
    }
    acc * a.sqrt().recip() / TWO_PI
}

/// Check `sum_k |g(pi k / a)|^2 = (a/pi) ||ghat||^2 / (2pi)` on the sample
/// grid of spacing `pi/a`, truncated at `|k| <= k_max`.
///
/// The grid of spacing `pi/a` oversamples a band of width `a` by a factor
/// `a/pi` relative to the Nyquist grid, hence the `a/pi` on the right-hand
/// side; at `a = pi` this is the classical equality of norms.
pub fn wks_check(coeffs: &[(i64, Complex64)], a: f64, k_max: i64) -> WksReport {
    let mut sum = 0.0;
    for k in -k_max..=k_max {
        sum += bandlimited_eval(coeffs, a, std::f64::consts::PI * k as f64 / a).norm_sqr();
    }
    let ghat_sq: f64 = coeffs.iter().map(|(_, c)| c.norm_sqr()).sum();
    let expected = a / std::f64::consts::PI * ghat_sq / TWO_PI;
    // |g(x)| <= C / |x| with C = sum |c_ell| sqrt(a) / pi once past the
    // shifted sinc main lobes; sum the 1/k^2 tail
    let cbound: f64 = coeffs.iter().map(|(_, c)| c.norm()).sum::<f64>() * a.sqrt()
        / std::f64::consts::PI;
    let tail_bound = 2.0 * cbound * cbound * (a / std::f64::consts::PI).powi(2)
        / (k_max.max(1) as f64);
    let pass = (sum - expected).abs() <= 1e-4 * expected.max(1e-300) + tail_bound;
    WksReport {
        sample_sum: sum,
        expected,
        tail_bound,
        pass,
    }
}

/// Seeded smooth random profile used by the regression experiments.
///
/// Coefficients are `c_alpha(lambda) = g_alpha mu^3 (a - mu)^2` with `mu =
/// |lambda|` and fixed random `g_alpha` over degrees `<= deg_cap`; the
/// envelope vanishes to high order at both band edges, which makes the
/// synthesized function decay fast enough for spatial quadrature oracles.
pub fn random_profile(
    a: f64,
    s: f64,
    n: usize,
    maxdeg: usize,
    q: usize,
    deg_cap: usize,
    seed: u64,
) -> Result<SpectralProfile> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut p = SpectralProfile::zero(a, s, n, maxdeg, q)?;
    let table = p.values[0].table();
    let base: Vec<Complex64> = table
        .indices
        .iter()
        .map(|alpha| {
            let deg: usize = alpha.iter().sum();
            if deg <= deg_cap {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    for (l, v) in p.lambdas.iter().zip(&mut p.values) {
        let mu = -l;
        let env = mu.powi(3) * (a - mu).powi(2);
        for (c, b) in v.coeffs.iter_mut().zip(&base) {
            *c = b * env;
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{psi_inverse, HeisenbergCoords};
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn point(z: Complex64, t: f64, h: f64) -> SiegelPoint {
        psi_inverse(&HeisenbergCoords { z: vec![z], t, h })
    }

    #[test]
    fn zero_profile_synthesizes_to_zero() {
        let p = SpectralProfile::zero(1.0, 1.0, 1, 4, 16).unwrap();
        let v = synthesize_eval(&p, &point(c(0.3, 0.2), 0.5, 0.1));
        assert_eq!(v, c(0.0, 0.0));
        assert_eq!(pw_norm(&p), 0.0);
    }

    #[test]
    fn default_weights_cover_the_band() {
        let p = SpectralProfile::zero(1.7, 0.5, 1, 3, 32).unwrap();
        let total: f64 = p.weights.iter().sum();
        assert_abs_diff_eq!(total, 1.7, epsilon = 1e-12);
        assert!(p.lambdas.iter().all(|&l| l > -1.7 && l < 0.0));
    }

    #[test]
    fn constant_profile_is_independent_of_zprime() {
        let mut p = SpectralProfile::zero(1.0, 1.0, 1, 4, 32).unwrap();
        for v in &mut p.values {
            v.coeffs[0] = c(1.0, 0.0);
        }
        // compare at equal last coordinate, different z'
        let zlast = c(0.4, 0.9);
        let za = SiegelPoint::new(vec![c(0.0, 0.0)], zlast);
        let zb = SiegelPoint::new(vec![c(1.2, -0.7)], zlast);
        let fa = synthesize_eval(&p, &za);
        let fb = synthesize_eval(&p, &zb);
        assert!((fa - fb).norm() < 1e-14 * fa.norm());
    }

    #[test]
    fn trace_synthesis_agrees_with_direct_synthesis() {
        let p = random_profile(1.0, 1.0, 1, 8, 24, 3, 17).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for i in 0..10 {
            let h = if i % 2 == 0 { 0.0 } else { rng.gen_range(0.0..1.0) };
            let zeta = point(
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                rng.gen_range(-1.0..1.0),
                h,
            );
            let direct = synthesize_eval(&p, &zeta);
            let trace = synthesize_eval_trace(&p, &zeta).unwrap();
            assert!(
                (direct - trace).norm() <= 1e-8 * direct.norm().max(1e-12),
                "direct {direct} vs trace {trace}"
            );
        }
    }

    #[test]
    fn norm_of_normalized_constant_profile() {
        // s = n, phi = ghat(lambda) e_0 with ||ghat||_{L^2(-a,0)} = 1
        let a = 1.0;
        let mut p = SpectralProfile::zero(a, 1.0, 1, 3, 32).unwrap();
        for v in &mut p.values {
            v.coeffs[0] = c(1.0 / a.sqrt(), 0.0);
        }
        assert_abs_diff_eq!(pw_norm(&p), 1.0, epsilon = 1e-12);
        // (2pi)^{n-1} = 1 at n = 1; scaling is quadratic
        let q = p.scale(c(0.0, 3.0));
        assert_abs_diff_eq!(pw_norm(&q), 9.0, epsilon = 1e-11);
    }

    #[test]
    fn norm_satisfies_the_parallelogram_law() {
        let p = random_profile(1.0, 0.7, 1, 5, 16, 3, 5).unwrap();
        let q = random_profile(1.0, 0.7, 1, 5, 16, 3, 6).unwrap();
        let sum = p.add(&q).unwrap();
        let diff = p.add(&q.scale(c(-1.0, 0.0))).unwrap();
        let lhs = pw_norm(&sum) + pw_norm(&diff);
        let rhs = 2.0 * (pw_norm(&p) + pw_norm(&q));
        assert!((lhs - rhs).abs() <= 1e-10 * rhs);
        // and the inner product reproduces the norm
        let ip = pw_inner(&p, &p).unwrap();
        assert!((ip.re - pw_norm(&p)).abs() <= 1e-12 * ip.re);
        assert!(ip.im.abs() <= 1e-14 * ip.re);
    }

    #[test]
    fn synthesis_is_linear_in_the_profile() {
        let p = random_profile(1.0, 1.0, 1, 5, 16, 3, 8).unwrap();
        let q = random_profile(1.0, 1.0, 1, 5, 16, 3, 9).unwrap();
        let zeta = point(c(0.4, -0.2), 0.3, 0.1);
        let lhs = synthesize_eval(&p.add(&q.scale(c(2.0, -1.0))).unwrap(), &zeta);
        let rhs = synthesize_eval(&p, &zeta) + c(2.0, -1.0) * synthesize_eval(&q, &zeta);
        assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1e-12));
    }

    #[test]
    fn restriction_norm_at_zero_matches_s0_norm() {
        let p = random_profile(1.0, 1.0, 1, 5, 24, 3, 12).unwrap();
        let p0 = p.with_smoothness(0.0).unwrap();
        assert!(
            (restriction_norm_at_height(&p, 0.0) - pw_norm(&p0)).abs()
                <= 1e-12 * pw_norm(&p0)
        );
        // monotone decreasing in h
        let n0 = restriction_norm_at_height(&p, -0.5);
        let n1 = restriction_norm_at_height(&p, 0.0);
        let n2 = restriction_norm_at_height(&p, 0.5);
        assert!(n0 > n1 && n1 > n2);
    }

    /// Brute-force check of the Plancherel identity at n = 1: the spectral
    /// restriction norm against 3-D spatial quadrature of the boundary
    /// restriction.
    #[test]
    fn restriction_norm_matches_spatial_quadrature() {
        let p = random_profile(1.0, 0.0, 1, 3, 64, 3, 21).unwrap();
        let spectral = restriction_norm_at_height(&p, 0.0);
        let spatial = crate::experiments::spatial_restriction_norm(&p);
        assert!(
            (spectral - spatial).abs() <= 1e-2 * spectral,
            "spectral {spectral} vs spatial {spatial}"
        );
    }

    #[test]
    fn plancherel_polya_inequality_holds() {
        let p = random_profile(1.0, 0.0, 1, 4, 32, 3, 33).unwrap();
        for h in [-2.0, -1.0, 0.0, 0.5, 2.0] {
            let (lhs, rhs, pass) = plancherel_polya_check(&p, h);
            assert!(pass, "h = {h}: lhs {lhs} rhs {rhs}");
            if h > 0.0 {
                assert!(lhs < rhs);
            }
            if h == 0.0 {
                assert!((lhs - rhs).abs() <= 1e-14 * rhs);
            }
        }
        // mass concentrated at lambda = -a makes the h < 0 bound sharp
        let mut q = SpectralProfile::zero_on_interval(1.0, 0.0, 1, 2, 8, -1.0, -0.999).unwrap();
        for v in &mut q.values {
            v.coeffs[0] = c(1.0, 0.0);
        }
        let (lhs, rhs, _) = plancherel_polya_check(&q, -1.0);
        assert!(lhs / rhs > 0.99 && lhs / rhs < 1.0);
    }

    #[test]
    fn fractional_derivative_algebra() {
        let p = random_profile(1.0, 1.0, 1, 4, 16, 3, 41).unwrap();
        let same = fractional_t_derivative(&p, 0.0).unwrap();
        for (a, b) in same.values.iter().zip(&p.values) {
            for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
                assert_eq!(x, y);
            }
        }
        assert!(fractional_t_derivative(&p, -0.5).is_err());

        // single node at lambda = -1/2, order 1 halves the values
        let mut single = SpectralProfile {
            a: 1.0,
            s: 0.0,
            lambdas: vec![-0.5],
            weights: vec![1.0],
            values: vec![FockElement::zero(0.5, 1, 2)],
        };
        single.values[0].coeffs[1] = c(2.0, -4.0);
        let d = fractional_t_derivative(&single, 1.0).unwrap();
        assert_eq!(d.values[0].coeffs[1], c(1.0, -2.0));

        // additive composition
        let d1 = fractional_t_derivative(&fractional_t_derivative(&p, 0.3).unwrap(), 0.9).unwrap();
        let d2 = fractional_t_derivative(&p, 1.2).unwrap();
        for (a, b) in d1.values.iter().zip(&d2.values) {
            for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
                assert!((x - y).norm() <= 1e-13 * y.norm().max(1e-300));
            }
        }

        // Parseval consistency between s = 0 of the n/2 derivative and s = n
        let half = fractional_t_derivative(&p.with_smoothness(0.0).unwrap(), 0.5).unwrap();
        let lhs = pw_norm(&half);
        let rhs = pw_norm(&p.with_smoothness(1.0).unwrap());
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn tau_round_trip_and_norm_match() {
        let p = random_profile(1.0, 0.8, 1, 6, 24, 4, 55).unwrap();
        let taus = tau_from_profile(&p).unwrap();
        let back = profile_from_tau(&taus, p.a, p.s).unwrap();
        for (a, b) in back.values.iter().zip(&p.values) {
            for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
                assert!((x - y).norm() < 1e-10);
            }
        }
        let hs = tau_norm(&taus, p.s);
        let pw = pw_norm(&p);
        assert!((hs - pw).abs() <= 1e-8 * pw, "HS {hs} vs PW {pw}");
    }

    #[test]
    fn tau_support_is_validated() {
        let p = random_profile(1.0, 0.5, 1, 3, 8, 2, 3).unwrap();
        let taus = tau_from_profile(&p).unwrap();
        assert!(profile_from_tau(&taus, 0.5, 0.5).is_err());
        assert!(profile_from_tau(&[], 1.0, 0.5).is_err());
    }

    #[test]
    fn height_propagation_is_an_identity_between_code_paths() {
        let p = random_profile(1.0, 1.0, 1, 5, 16, 3, 61).unwrap();
        let h = 0.8;
        let boundary = point(c(0.5, -0.3), 0.2, 0.0);
        let lifted = point(c(0.5, -0.3), 0.2, h);
        let via_profile = synthesize_eval(&p.at_height(h), &boundary);
        let via_point = synthesize_eval(&p, &lifted);
        assert!((via_profile - via_point).norm() <= 1e-13 * via_point.norm());
    }

    #[test]
    fn basis_gram_matrix_is_scaled_identity() {
        let a = 1.0;
        let q = 64;
        let mut elements = Vec::new();
        for alpha in 0..=2usize {
            for ell in -2i64..=2 {
                elements.push(basis_element(&[alpha], ell, a, 6, q).unwrap());
            }
        }
        let scale = TWO_PI; // (2pi)^n at n = 1
        for (i, gi) in elements.iter().enumerate() {
            for (j, gj) in elements.iter().enumerate() {
                let ip = pw_inner(gi, gj).unwrap();
                let want = if i == j { scale } else { 0.0 };
                assert!(
                    (ip - c(want, 0.0)).norm() <= 1e-8 * scale,
                    "Gram({i},{j}) = {ip}"
                );
            }
        }
    }

    #[test]
    fn wks_identity_for_sinc_and_mixtures() {
        let a = 1.0;
        // ghat = chi_{[-a,0)} / sqrt(a) is the ell = 0 basis vector
        let r = wks_check(&[(0, c(1.0, 0.0))], a, 10_000);
        assert!(r.pass, "sum {} vs expected {}", r.sample_sum, r.expected);
        let r0 = wks_check(&[(0, c(0.0, 0.0))], a, 10);
        assert_eq!(r0.sample_sum, 0.0);
        assert_eq!(r0.expected, 0.0);
        let mix = wks_check(&[(0, c(0.6, 0.2)), (1, c(-0.3, 0.5))], a, 10_000);
        assert!(mix.pass, "sum {} vs expected {}", mix.sample_sum, mix.expected);
    }

    #[test]
    fn synthesized_function_has_exponential_type() {
        let p = random_profile(1.0, 1.0, 1, 6, 24, 3, 71).unwrap();
        let eps = 0.1;
        let mut boundary_sup: f64 = 0.0;
        let mut interior_sup: f64 = 0.0;
        let mut certificate: f64 = 0.0;
        for i in -3..=3 {
            for j in -3..=3 {
                for k in -3..=3 {
                    for h in [0.0, 0.7, 2.0] {
                        let z = c(i as f64, j as f64);
                        let t = 1.3 * k as f64;
                        let zeta = point(z, t, h);
                        let unorm = crate::geometry::u_adapted_norm(&zeta);
                        if unorm > 10.0 {
                            continue;
                        }
                        let v = synthesize_eval(&p, &zeta).norm();
                        certificate = certificate.max(v * (-(p.a + eps) * unorm).exp());
                        if h == 0.0 {
                            boundary_sup = boundary_sup.max(v);
                        } else {
                            interior_sup = interior_sup.max(v);
                        }
                    }
                }
            }
        }
        assert!(certificate.is_finite() && certificate > 0.0);
        assert!(boundary_sup >= interior_sup);
    }

    #[test]
    fn csv_dump_has_documented_shape() {
        let p = SpectralProfile::zero(1.0, 0.0, 1, 1, 2).unwrap();
        let csv = p.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "lambda,weight,alpha1,re,im");
        // 2 nodes x 2 coefficients
        assert_eq!(lines.count(), 4);
    }
}

//! Reproducible experiment driver shared by the CLI and the acceptance
//! suite.  Every experiment is a pure function of its configuration and
//! seed, returns its data as CSV text plus a pass/fail verdict against a
//! pinned tolerance, and is byte-stable across runs.

use std::collections::BTreeMap;

use crate::geometry::{boundary_point, psi_inverse, HeisenbergCoords, HeisenbergPoint, SiegelPoint};
use crate::kernels::{self, KernelSpec};
use crate::pw::{self, SpectralProfile};
use crate::quad::GaussLegendre;
use crate::sampling::{self, SamplingLattice};
use crate::sigma::{self, SquareLattice};
use crate::{Complex64, Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

pub const EXPERIMENTS: &[&str] = &[
    "plancherel",
    "kernel-repro",
    "sinc-closed-form",
    "fock-sweep",
    "schur",
    "sigma-interp",
    "sigma-periodicity",
    "pw-frame",
    "pw0-frame",
    "necessary-condition",
    "basis-gram",
    "plancherel-polya",
];

/// Flat key/value configuration with a mandatory seed.
#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    pub params: BTreeMap<String, String>,
}

impl Config {
    pub fn new(seed: u64) -> Self {
        Config {
            seed,
            params: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.params.insert(key.to_string(), value.to_string());
    }

    pub fn get_f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("{key} = {v} is not a number"))),
        }
    }

    pub fn get_usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("{key} = {v} is not an integer"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub name: String,
    pub csv: String,
    pub pass: bool,
    pub tolerance: f64,
    /// One-line human summary, e.g. `plancherel: PASS (tol 1e-2, worst 3.1e-3)`.
    pub summary: String,
}

impl ExperimentResult {
    fn finish(name: &str, csv: String, pass: bool, tolerance: f64, detail: String) -> Self {
        let verdict = if pass { "PASS" } else { "FAIL" };
        ExperimentResult {
            name: name.to_string(),
            csv,
            pass,
            tolerance,
            summary: format!("{name}: {verdict} (tol {tolerance:.1e}, {detail})"),
        }
    }
}

/// CSV column documentation per experiment.
pub fn schema(name: &str) -> Option<&'static str> {
    Some(match name {
        "plancherel" => "profile,spectral,spatial,rel_err",
        "kernel-repro" => "pair,inner_re,inner_im,value_re,value_im,abs_err,scale",
        "sinc-closed-form" => "pair,quad_re,quad_im,closed_re,closed_im,rel_err",
        "fock-sweep" => "family,param,id,sample_sum,norm,ratio,tail_bound",
        "schur" => "lambda,row_sum,row_sum_double_radius,rel_change",
        "sigma-interp" => "function,z_re,z_im,value_re,value_im,expected_re,expected_im,abs_err",
        "sigma-periodicity" => "z_re,z_im,shift,base,shifted,rel_err",
        "pw-frame" => "family,param,id,sample_sum,norm,ratio,tail_bound",
        "pw0-frame" => "family,param,id,sample_sum,norm,ratio,tail_bound",
        "necessary-condition" => "family,b,eps,ratio",
        "basis-gram" => "i,j,re,im",
        "plancherel-polya" => "profile,h,lhs,rhs,ratio",
        _ => return None,
    })
}

/// Dispatch by experiment name.
pub fn run(name: &str, cfg: &Config) -> Result<ExperimentResult> {
    match name {
        "plancherel" => plancherel(cfg),
        "kernel-repro" => kernel_repro(cfg),
        "sinc-closed-form" => sinc_closed_form(cfg),
        "fock-sweep" => fock_sweep(cfg),
        "schur" => schur(cfg),
        "sigma-interp" => sigma_interp(cfg),
        "sigma-periodicity" => sigma_periodicity(cfg),
        "pw-frame" => pw_frame(cfg),
        "pw0-frame" => pw0_frame(cfg),
        "necessary-condition" => necessary_condition(cfg),
        "basis-gram" => basis_gram(cfg),
        "plancherel-polya" => plancherel_polya(cfg),
        _ => Err(Error::InvalidParameter(format!(
            "unknown experiment `{name}`; known: {}",
            EXPERIMENTS.join(", ")
        ))),
    }
}

/// Brute-force squared `L^2` norm of the boundary restriction at `n = 1`,
/// by tensor quadrature over `z in [-10, 10]^2` and a composite rule in `t`
/// over `[-40, 40]`.  Oracle for the spectral restriction norm.
pub fn spatial_restriction_norm(p: &SpectralProfile) -> f64 {
    assert_eq!(p.dim(), 1, "spatial oracle is implemented at n = 1");
    let zrule = GaussLegendre::new(64, -10.0, 10.0);
    let mut tnodes = Vec::new();
    for panel in 0..8 {
        let lo = -40.0 + 10.0 * panel as f64;
        let rule = GaussLegendre::new(24, lo, lo + 10.0);
        tnodes.extend(rule.nodes.iter().copied().zip(rule.weights.iter().copied()));
    }
    let mut total = 0.0;
    for (&x, &wx) in zrule.nodes.iter().zip(&zrule.weights) {
        for (&y, &wy) in zrule.nodes.iter().zip(&zrule.weights) {
            let z = Complex64::new(x, y);
            let fac: Vec<Complex64> = p
                .lambdas
                .iter()
                .zip(&p.weights)
                .zip(&p.values)
                .map(|((l, w), v)| v.eval(&[z]) * *w * (l * z.norm_sqr() / 4.0).exp())
                .collect();
            let mut tint = 0.0;
            for &(t, wt) in &tnodes {
                let mut f = Complex64::new(0.0, 0.0);
                for (l, fa) in p.lambdas.iter().zip(&fac) {
                    f += fa * Complex64::new(0.0, -l * t).exp();
                }
                tint += wt * f.norm_sqr();
            }
            total += wx * wy * tint;
        }
    }
    total / (TWO_PI * TWO_PI)
}

fn plancherel(cfg: &Config) -> Result<ExperimentResult> {
    let a = cfg.get_f64("a", 1.0)?;
    let count = cfg.get_usize("profiles", 5)?;
    let tol = 1e-2;
    let mut csv = String::from("profile,spectral,spatial,rel_err\n");
    let mut worst = 0.0f64;
    for i in 0..count {
        let p = pw::random_profile(a, 0.0, 1, 3, 64, 3, cfg.seed.wrapping_add(i as u64))?;
        let spectral = pw::restriction_norm_at_height(&p, 0.0);
        let spatial = spatial_restriction_norm(&p);
        let rel = (spectral - spatial).abs() / spectral;
        worst = worst.max(rel);
        csv.push_str(&format!("{i},{spectral:.17e},{spatial:.17e},{rel:.3e}\n"));
    }
    Ok(ExperimentResult::finish(
        "plancherel",
        csv,
        worst <= tol,
        tol,
        format!("worst rel err {worst:.2e}"),
    ))
}

fn random_boundary(rng: &mut rand_chacha::ChaCha8Rng) -> SiegelPoint {
    use rand::Rng;
    boundary_point(&HeisenbergPoint::new(
        vec![Complex64::new(
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
        )],
        rng.gen_range(-1.5..1.5),
    ))
}

fn kernel_repro(cfg: &Config) -> Result<ExperimentResult> {
    use rand::SeedableRng;
    let a = cfg.get_f64("a", 1.0)?;
    let q = cfg.get_usize("q", 64)?;
    let maxdeg = cfg.get_usize("maxdeg", 20)?;
    let tol = 1e-6;
    let spec = KernelSpec::new(a, 1.0, 1)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut csv = String::from("pair,inner_re,inner_im,value_re,value_im,abs_err,scale\n");
    let mut pass = true;
    let mut worst = 0.0f64;
    for i in 0..50u64 {
        let p = pw::random_profile(a, 1.0, 1, maxdeg, q, 4, cfg.seed.wrapping_add(1000 + i))?;
        let zeta = random_boundary(&mut rng);
        let kp = kernels::kernel_profile(&spec, &zeta, maxdeg, q)?;
        let inner = pw::pw_inner(&p, &kp)?;
        let value = pw::synthesize_eval(&p, &zeta);
        let scale = pw::pw_norm(&p).sqrt() * pw::pw_norm(&kp).sqrt();
        let err = (inner - value).norm();
        worst = worst.max(err / scale);
        pass &= err <= tol * scale;
        csv.push_str(&format!(
            "{i},{:.17e},{:.17e},{:.17e},{:.17e},{err:.3e},{scale:.6e}\n",
            inner.re, inner.im, value.re, value.im
        ));
    }
    Ok(ExperimentResult::finish(
        "kernel-repro",
        csv,
        pass,
        tol,
        format!("worst scaled err {worst:.2e}"),
    ))
}

fn sinc_closed_form(cfg: &Config) -> Result<ExperimentResult> {
    use rand::Rng;
    use rand::SeedableRng;
    let a = cfg.get_f64("a", 1.0)?;
    let tol = 1e-10;
    let spec = KernelSpec::new(a, 1.0, 1)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut csv = String::from("pair,quad_re,quad_im,closed_re,closed_im,rel_err\n");
    let mut worst = 0.0f64;
    for i in 0..100 {
        let mut pt = || {
            psi_inverse(&HeisenbergCoords {
                z: vec![Complex64::new(
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                )],
                t: rng.gen_range(-1.5..1.5),
                h: rng.gen_range(0.0..1.0),
            })
        };
        let omega = pt();
        let zeta = pt();
        let quad = kernels::kernel_eval(&spec, &omega, &zeta, 64);
        let closed = kernels::kernel_eval_closed(&spec, &omega, &zeta)?;
        let rel = (quad - closed).norm() / closed.norm();
        worst = worst.max(rel);
        csv.push_str(&format!(
            "{i},{:.17e},{:.17e},{:.17e},{:.17e},{rel:.3e}\n",
            quad.re, quad.im, closed.re, closed.im
        ));
    }
    Ok(ExperimentResult::finish(
        "sinc-closed-form",
        csv,
        worst <= tol,
        tol,
        format!("max rel err {worst:.2e}"),
    ))
}

fn fock_sweep(cfg: &Config) -> Result<ExperimentResult> {
    let a = cfg.get_f64("a", 1.0)?;
    let b = cfg.get_f64("b", 1.5)?;
    let octaves = cfg.get_usize("octaves", 10)?;
    // frozen regression envelope for a = 1, b = 1.5
    let envelope_bound = 50.0;
    let grid: Vec<f64> = (0..=octaves).map(|k| a * 0.5f64.powi(k as i32)).collect();
    let report = sampling::fock_frame_sweep(a, b, &grid, 6, cfg.seed)?;
    let mut extended = grid.clone();
    extended.push(a * 0.5f64.powi(octaves as i32 + 1));
    let wider = sampling::fock_frame_sweep(a, b, &extended, 6, cfg.seed)?;
    let drift = wider.envelope() / report.envelope();
    let pass = report.envelope() <= envelope_bound && drift <= 1.05;
    Ok(ExperimentResult::finish(
        "fock-sweep",
        report.to_csv(),
        pass,
        envelope_bound,
        format!(
            "envelope {:.3}, extension drift {:.4}",
            report.envelope(),
            drift
        ),
    ))
}

fn schur(cfg: &Config) -> Result<ExperimentResult> {
    let a = cfg.get_f64("a", 1.0)?;
    let b = cfg.get_f64("b", 2.0)?;
    let t = cfg.get_f64("t", 1.5)?;
    let lat = SquareLattice::new(b)?;
    let r = 12.0 * lat.spacing();
    // frozen regression bound for a=1, b=2, t=1.5
    let bound = 15.0;
    let mut csv = String::from("lambda,row_sum,row_sum_double_radius,rel_change\n");
    let mut worst_sum = 0.0f64;
    let mut worst_change = 0.0f64;
    for k in 0..=4 {
        let lambda = a * 0.5f64.powi(k);
        let v = sampling::schur_bound_check(lambda, a, t, &lat, r)?;
        let v2 = sampling::schur_bound_check(lambda, a, t, &lat, 2.0 * r)?;
        let change = (v - v2).abs() / v2;
        worst_sum = worst_sum.max(v2);
        worst_change = worst_change.max(change);
        csv.push_str(&format!("{lambda:.6e},{v:.17e},{v2:.17e},{change:.3e}\n"));
    }
    let pass = worst_sum <= bound && worst_change <= 0.01;
    Ok(ExperimentResult::finish(
        "schur",
        csv,
        pass,
        bound,
        format!("max row sum {worst_sum:.3}, truncation change {worst_change:.2e}"),
    ))
}

fn sigma_interp(cfg: &Config) -> Result<ExperimentResult> {
    use rand::Rng;
    use rand::SeedableRng;
    let tol = 1e-4;
    let lat = SquareLattice::new(TWO_PI)?;
    let r_trunc = 30.0 * lat.spacing();
    let nodes = sigma::lattice_points(&lat, 8.0);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut csv =
        String::from("function,z_re,z_im,value_re,value_im,expected_re,expected_im,abs_err\n");
    let mut worst = 0.0f64;
    for fi in 0..5 {
        // random polynomial of degree at most 4
        let coeffs: Vec<Complex64> = (0..=4)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let f = |z: Complex64| -> Complex64 {
            coeffs
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
        };
        let samples: Vec<(Complex64, Complex64)> = nodes.iter().map(|&g| (g, f(g))).collect();
        for i in 0..8 {
            for j in 0..8 {
                let z = Complex64::new(-0.7 + 0.2 * i as f64, -0.7 + 0.2 * j as f64);
                if z.norm() > 1.0 {
                    continue;
                }
                let v = sigma::interpolate_from_lattice(&lat, &samples, z, r_trunc)?;
                let err = (v - f(z)).norm();
                worst = worst.max(err);
                csv.push_str(&format!(
                    "{fi},{:.4},{:.4},{:.17e},{:.17e},{:.17e},{:.17e},{err:.3e}\n",
                    z.re,
                    z.im,
                    v.re,
                    v.im,
                    f(z).re,
                    f(z).im
                ));
            }
        }
    }
    Ok(ExperimentResult::finish(
        "sigma-interp",
        csv,
        worst <= tol,
        tol,
        format!("sup error {worst:.2e}"),
    ))
}

fn sigma_periodicity(cfg: &Config) -> Result<ExperimentResult> {
    use rand::Rng;
    use rand::SeedableRng;
    let tol = 1e-6;
    let lat = SquareLattice::new(TWO_PI)?;
    // product truncation error decays cubically in the cutoff radius
    let r_trunc = 90.0 * lat.spacing();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut csv = String::from("z_re,z_im,shift,base,shifted,rel_err\n");
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let z = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let base = sigma::modulated_modulus(&lat, z, r_trunc);
        for (label, shift) in [("1", Complex64::new(1.0, 0.0)), ("i", Complex64::new(0.0, 1.0))]
        {
            let shifted = sigma::modulated_modulus(&lat, z + shift * lat.spacing(), r_trunc);
            let rel = (base - shifted).abs() / base.max(1e-12);
            worst = worst.max(rel);
            csv.push_str(&format!(
                "{:.6},{:.6},{label},{base:.17e},{shifted:.17e},{rel:.3e}\n",
                z.re, z.im
            ));
        }
    }
    let prime0 = sigma::sigma_prime(&lat, Complex64::new(0.0, 0.0), r_trunc)?;
    let prime_err = (prime0 - Complex64::new(1.0, 0.0)).norm();
    let pass = worst <= tol && prime_err <= 1e-8;
    Ok(ExperimentResult::finish(
        "sigma-periodicity",
        csv,
        pass,
        tol,
        format!("worst periodicity err {worst:.2e}, sigma'(0) err {prime_err:.2e}"),
    ))
}

fn basis_profiles(a: f64, maxdeg: usize, q: usize) -> Result<Vec<(String, SpectralProfile)>> {
    let mut out = Vec::new();
    for alpha in 0..=2usize {
        for ell in -2i64..=2 {
            out.push((
                format!("G[{alpha};{ell}]"),
                pw::basis_element(&[alpha], ell, a, maxdeg, q)?,
            ));
        }
    }
    Ok(out)
}

fn pw_frame(cfg: &Config) -> Result<ExperimentResult> {
    let a = cfg.get_f64("a", 1.0)?;
    let b = cfg.get_f64("b", 1.5)?;
    let q = cfg.get_usize("q", 256)?;
    let k_t = cfg.get_usize("kt", 128)? as i64;
    let maxdeg = cfg.get_usize("maxdeg", 6)?;
    // frozen regression envelope for the basis family at a=1, b=1.5
    let envelope_bound = 100.0;
    let r_z = 8.0 * (TWO_PI / a).sqrt();
    let lat = SamplingLattice::new(a, vec![b], r_z, k_t)?;
    let report = sampling::pw_frame_report(&lat, &basis_profiles(a, maxdeg, q)?)?;

    // simultaneous refinement of truncation degree, quadrature, and both
    // lattice truncations must leave the envelope in place
    let fine_lat = SamplingLattice::new(a, vec![b], 1.25 * r_z, k_t * 3 / 2)?;
    let fine = sampling::pw_frame_report(
        &fine_lat,
        &basis_profiles(a, maxdeg + 4, q * 3 / 2)?,
    )?;
    let drift = (fine.envelope() / report.envelope() - 1.0).abs();
    let pass = report.envelope() <= envelope_bound && drift <= 0.05;
    Ok(ExperimentResult::finish(
        "pw-frame",
        report.to_csv(),
        pass,
        envelope_bound,
        format!(
            "envelope {:.3}, refinement drift {:.4}",
            report.envelope(),
            drift
        ),
    ))
}

fn pw0_frame(cfg: &Config) -> Result<ExperimentResult> {
    let a = cfg.get_f64("a", 1.0)?;
    let b = cfg.get_f64("b", 1.5)?;
    let q = cfg.get_usize("q", 128)?;
    let k_t = cfg.get_usize("kt", 64)? as i64;
    let tol = 1e-12;
    let lat = SamplingLattice::with_default_radius(a, vec![b], k_t)?;
    let mut profiles = Vec::new();
    for i in 0..5u64 {
        profiles.push((
            format!("rand{i}"),
            pw::random_profile(a, 0.0, 1, 5, q, 3, cfg.seed.wrapping_add(i))?,
        ));
    }
    let direct = sampling::pw0_frame_report(&lat, &profiles)?;
    let lifted: Vec<(String, SpectralProfile)> = profiles
        .iter()
        .map(|(n, p)| Ok((n.clone(), sampling::lift_profile(p)?)))
        .collect::<Result<_>>()?;
    let via_lift = sampling::pw_frame_report(&lat, &lifted)?;
    let mut worst = 0.0f64;
    for (x, y) in direct.rows.iter().zip(&via_lift.rows) {
        worst = worst.max((x.ratio - y.ratio).abs() / y.ratio);
    }
    Ok(ExperimentResult::finish(
        "pw0-frame",
        direct.to_csv(),
        worst <= tol,
        tol,
        format!("max lift disagreement {worst:.2e}"),
    ))
}

fn necessary_condition(cfg: &Config) -> Result<ExperimentResult> {
    let a = cfg.get_f64("a", 1.0)?;
    let decay_required = 10.0;
    let mut csv = String::from("family,b,eps,ratio\n");
    let sub = sampling::necessary_condition_experiment(a, 0.9 * a, true)?;
    let control = sampling::necessary_condition_experiment(a, 1.5 * a, true)?;
    let negative = sampling::necessary_condition_experiment(a, 0.9 * a, false)?;
    for (report, b) in [(&sub, 0.9 * a), (&control, 1.5 * a), (&negative, 0.9 * a)] {
        for &(eps, ratio) in &report.rows {
            csv.push_str(&format!("{},{b:.6},{eps:.6},{ratio:.17e}\n", report.family));
        }
    }
    let spread = |r: &sampling::NecessaryConditionReport| {
        let max = r.rows.iter().map(|x| x.1).fold(0.0f64, f64::max);
        let min = r.rows.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
        max / min
    };
    // frozen stability envelopes for the two control arms
    let pass = sub.decay_factor() >= decay_required
        && spread(&control) <= 5.0
        && spread(&negative) <= 5.0;
    Ok(ExperimentResult::finish(
        "necessary-condition",
        csv,
        pass,
        decay_required,
        format!(
            "decay {:.1}x, control spread {:.2}, e0 spread {:.2}",
            sub.decay_factor(),
            spread(&control),
            spread(&negative)
        ),
    ))
}

fn basis_gram(cfg: &Config) -> Result<ExperimentResult> {
    let a = cfg.get_f64("a", 1.0)?;
    let q = cfg.get_usize("q", 64)?;
    let tol = 1e-8;
    let elements = basis_profiles(a, 6, q)?;
    let scale = TWO_PI; // (2pi)^n at n = 1
    let mut csv = String::from("i,j,re,im\n");
    let mut worst = 0.0f64;
    for (i, (_, gi)) in elements.iter().enumerate() {
        for (j, (_, gj)) in elements.iter().enumerate() {
            let ip = pw::pw_inner(gi, gj)?;
            let want = if i == j { scale } else { 0.0 };
            worst = worst.max((ip - Complex64::new(want, 0.0)).norm() / scale);
            csv.push_str(&format!("{i},{j},{:.17e},{:.17e}\n", ip.re, ip.im));
        }
    }
    Ok(ExperimentResult::finish(
        "basis-gram",
        csv,
        worst <= tol,
        tol,
        format!("worst deviation {worst:.2e} of (2pi)^n"),
    ))
}

fn plancherel_polya(cfg: &Config) -> Result<ExperimentResult> {
    let a = cfg.get_f64("a", 1.0)?;
    let tol = 1e-10;
    let mut csv = String::from("profile,h,lhs,rhs,ratio\n");
    let mut pass = true;
    for i in 0..10u64 {
        let p = pw::random_profile(a, 0.0, 1, 4, 32, 3, cfg.seed.wrapping_add(i))?;
        for h in [-2.0, -1.0, 0.0, 0.5, 2.0] {
            let (lhs, rhs, ok) = pw::plancherel_polya_check(&p, h);
            pass &= ok;
            csv.push_str(&format!("{i},{h},{lhs:.17e},{rhs:.17e},{:.6}\n", lhs / rhs));
        }
    }
    Ok(ExperimentResult::finish(
        "plancherel-polya",
        csv,
        pass,
        tol,
        "spectral-side inequality".to_string(),
    ))
}

/// Maximum relative disagreement between the direct synthesis and the
/// operator-trace synthesis over ten random interior and boundary points.
pub fn synthesis_equivalence(seed: u64) -> Result<f64> {
    use rand::Rng;
    use rand::SeedableRng;
    let p = pw::random_profile(1.0, 1.0, 1, 8, 24, 3, seed)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for i in 0..10 {
        let h = if i % 2 == 0 { 0.0 } else { rng.gen_range(0.0..1.0) };
        let zeta = psi_inverse(&HeisenbergCoords {
            z: vec![Complex64::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )],
            t: rng.gen_range(-1.0..1.0),
            h,
        });
        let direct = pw::synthesize_eval(&p, &zeta);
        let trace = pw::synthesize_eval_trace(&p, &zeta)?;
        worst = worst.max((direct - trace).norm() / direct.norm().max(1e-12));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_experiment_is_rejected() {
        let cfg = Config::new(7);
        assert!(run("no-such-thing", &cfg).is_err());
        assert!(schema("no-such-thing").is_none());
    }

    #[test]
    fn every_experiment_has_a_schema() {
        for name in EXPERIMENTS {
            assert!(schema(name).is_some(), "{name}");
        }
    }

    #[test]
    fn output_is_deterministic_per_seed() {
        let cfg = Config::new(7);
        let a = run("sinc-closed-form", &cfg).unwrap();
        let b = run("sinc-closed-form", &cfg).unwrap();
        assert_eq!(a.csv, b.csv);
        assert_eq!(a.summary, b.summary);
        let mut other = Config::new(8);
        other.set("a", "1.0");
        let c = run("sinc-closed-form", &other).unwrap();
        assert_ne!(a.csv, c.csv);
    }

    #[test]
    fn config_parsing_and_errors() {
        let mut cfg = Config::new(1);
        cfg.set("a", "2.5");
        assert_eq!(cfg.get_f64("a", 1.0).unwrap(), 2.5);
        assert_eq!(cfg.get_f64("missing", 1.0).unwrap(), 1.0);
        cfg.set("bad", "xyz");
        assert!(cfg.get_f64("bad", 1.0).is_err());
        assert!(cfg.get_usize("bad", 1).is_err());
    }

    #[test]
    fn csv_headers_match_schemas() {
        let cfg = Config::new(7);
        for name in ["plancherel-polya", "sigma-periodicity", "basis-gram"] {
            let r = run(name, &cfg).unwrap();
            let header = r.csv.lines().next().unwrap();
            assert_eq!(header, schema(name).unwrap(), "{name}");
        }
    }

    #[test]
    fn synthesis_equivalence_is_tight() {
        let worst = synthesis_equivalence(3).unwrap();
        assert!(worst <= 1e-8, "disagreement {worst}");
    }
}

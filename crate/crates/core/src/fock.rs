//! Truncated Fock spaces, the Bargmann representation and coherent traces.
//!
//! The Fock space for a frequency `lambda != 0` is the space of entire
//! functions on C^n that are square integrable against the probability
//! measure `(|lambda| / 2 pi)^n exp(-|lambda| |z|^2 / 2) dz`; it depends on
//! `lambda` only through `|lambda|`.  Elements are stored as coefficient
//! vectors over the orthonormal basis `e_alpha = z^alpha / ||z^alpha||`,
//! truncated at a total degree `maxdeg`.
//!
//! Multi-indices are enumerated in graded lexicographic order: ascending
//! total degree, and within a degree ascending lexicographic order of the
//! tuple `(alpha_1, ..., alpha_n)`.  This ordering is part of the stable
//! coefficient-dump format.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::geometry::HeisenbergPoint;
use crate::{Complex64, Error, Result};

/// Shared enumeration of the multi-indices `|alpha| <= maxdeg` in n variables.
#[derive(Debug)]
pub struct IndexTable {
    pub n: usize,
    pub maxdeg: usize,
    pub indices: Vec<Vec<usize>>,
    position: HashMap<Vec<usize>, usize>,
}

impl IndexTable {
    fn build(n: usize, maxdeg: usize) -> Self {
        let mut indices = Vec::new();
        for deg in 0..=maxdeg {
            push_degree(n, deg, &mut Vec::new(), &mut indices);
        }
        let position = indices
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        IndexTable {
            n,
            maxdeg,
            indices,
            position,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn position(&self, alpha: &[usize]) -> Option<usize> {
        self.position.get(alpha).copied()
    }
}

fn push_degree(n: usize, remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() + 1 == n {
        let mut alpha = prefix.clone();
        alpha.push(remaining);
        out.push(alpha);
        return;
    }
    for k in 0..=remaining {
        prefix.push(k);
        push_degree(n, remaining - k, prefix, out);
        prefix.pop();
    }
}

/// Cached lookup of the multi-index table for `(n, maxdeg)`.
pub fn index_table(n: usize, maxdeg: usize) -> Arc<IndexTable> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<IndexTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry((n, maxdeg))
        .or_insert_with(|| Arc::new(IndexTable::build(n, maxdeg)))
        .clone()
}

/// `||z^alpha||` in the Fock space with parameter `lam > 0`:
/// `sqrt(alpha! (2 / lam)^{|alpha|})`, from the Gaussian moment integral.
pub fn monomial_norm(alpha: &[usize], lam: f64) -> Result<f64> {
    if lam <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Fock parameter must be positive, got {lam}"
        )));
    }
    let mut v = 1.0f64;
    for &a in alpha {
        for k in 1..=a {
            v *= k as f64 * 2.0 / lam;
        }
    }
    Ok(v.sqrt())
}

/// A truncated element of the Fock space with parameter `lam = |lambda|`.
#[derive(Debug, Clone)]
pub struct FockElement {
    pub lam: f64,
    pub n: usize,
    pub maxdeg: usize,
    /// Coefficients over the orthonormal basis, graded lexicographic order.
    pub coeffs: Vec<Complex64>,
}

impl FockElement {
    pub fn zero(lam: f64, n: usize, maxdeg: usize) -> Self {
        let table = index_table(n, maxdeg);
        FockElement {
            lam,
            n,
            maxdeg,
            coeffs: vec![Complex64::new(0.0, 0.0); table.len()],
        }
    }

    /// The basis vector `e_alpha`.
    pub fn basis_vector(lam: f64, n: usize, maxdeg: usize, alpha: &[usize]) -> Result<Self> {
        let table = index_table(n, maxdeg);
        let pos = table.position(alpha).ok_or_else(|| {
            Error::InvalidParameter(format!("multi-index {alpha:?} out of range"))
        })?;
        let mut f = FockElement::zero(lam, n, maxdeg);
        f.coeffs[pos] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    /// Build from monomial coefficients: `f(z) = sum m_alpha z^alpha`.
    pub fn from_monomial_coeffs(
        lam: f64,
        n: usize,
        maxdeg: usize,
        monomial: &[Complex64],
    ) -> Result<Self> {
        let table = index_table(n, maxdeg);
        if monomial.len() != table.len() {
            return Err(Error::DimensionMismatch(monomial.len(), table.len()));
        }
        let mut coeffs = Vec::with_capacity(table.len());
        for (alpha, m) in table.indices.iter().zip(monomial) {
            coeffs.push(m * monomial_norm(alpha, lam)?);
        }
        Ok(FockElement {
            lam,
            n,
            maxdeg,
            coeffs,
        })
    }

    /// Coefficients over the plain monomials `z^alpha`.
    pub fn to_monomial_coeffs(&self) -> Vec<Complex64> {
        let table = index_table(self.n, self.maxdeg);
        table
            .indices
            .iter()
            .zip(&self.coeffs)
            .map(|(alpha, c)| c / monomial_norm(alpha, self.lam).unwrap())
            .collect()
    }

    pub fn table(&self) -> Arc<IndexTable> {
        index_table(self.n, self.maxdeg)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.coeffs {
            *v *= c;
        }
        out
    }

    pub fn add(&self, other: &FockElement) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (v, w) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *v += w;
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &FockElement) -> Result<()> {
        if self.n != other.n || self.maxdeg != other.maxdeg {
            return Err(Error::ParameterMismatch(format!(
                "(n, maxdeg) = ({}, {}) vs ({}, {})",
                self.n, self.maxdeg, other.n, other.maxdeg
            )));
        }
        if (self.lam - other.lam).abs() > 1e-12 * self.lam.abs().max(other.lam.abs()) {
            return Err(Error::ParameterMismatch(format!(
                "lam = {} vs {}",
                self.lam, other.lam
            )));
        }
        Ok(())
    }

    /// Evaluate the entire extension at `z`.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n);
        let table = self.table();
        // powers of each coordinate up to maxdeg
        let mut powers = vec![Complex64::new(1.0, 0.0); self.n * (self.maxdeg + 1)];
        for j in 0..self.n {
            for d in 1..=self.maxdeg {
                powers[j * (self.maxdeg + 1) + d] = powers[j * (self.maxdeg + 1) + d - 1] * z[j];
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (alpha, c) in table.indices.iter().zip(&self.coeffs) {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let mut mono = Complex64::new(1.0, 0.0);
            for (j, &a) in alpha.iter().enumerate() {
                mono *= powers[j * (self.maxdeg + 1) + a];
            }
            acc += c / monomial_norm(alpha, self.lam).unwrap() * mono;
        }
        acc
    }
}

/// Hermitian inner product, linear in the first argument.
pub fn fock_inner(f: &FockElement, g: &FockElement) -> Result<Complex64> {
    f.check_compatible(g)?;
    Ok(f.coeffs
        .iter()
        .zip(&g.coeffs)
        .map(|(a, b)| a * b.conj())
        .sum())
}

pub fn fock_norm(f: &FockElement) -> f64 {
    f.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// The reproducing kernel `K(z, w) = exp(|lam| z . conj(w) / 2)`.
pub fn fock_kernel(lam: f64, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    if lam <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Fock parameter must be positive, got {lam}"
        )));
    }
    let dot: Complex64 = z.iter().zip(w).map(|(a, b)| a * b.conj()).sum();
    Ok((dot * (lam / 2.0)).exp())
}

/// Apply the Bargmann representation `beta_lambda[z, t]` to `f` and truncate
/// back to degree `maxdeg`.
///
/// For `lambda > 0` this is multiplication by
/// `exp(i lambda t - (lambda/2) w . conj(z) - (lambda/4) |z|^2)` composed with
/// the argument shift `w -> w + z`; the negative branch is routed through
/// `beta_lambda[z, t] = beta_{-lambda}[conj(z), -t]`.  The shift is exact on
/// polynomials; the only truncation error comes from the exponential series,
/// with tail bound `C (|lambda| |z|^2 / 2)^{maxdeg + 1} / (maxdeg + 1)!`.
pub fn bargmann_apply(p: &HeisenbergPoint, lambda: f64, f: &FockElement) -> Result<FockElement> {
    if lambda == 0.0 {
        return Err(Error::InvalidParameter("lambda must be nonzero".into()));
    }
    if p.dim() != f.n {
        return Err(Error::DimensionMismatch(p.dim(), f.n));
    }
    if lambda < 0.0 {
        let flipped = HeisenbergPoint::new(p.z.iter().map(|w| w.conj()).collect(), -p.t);
        return bargmann_apply(&flipped, -lambda, f);
    }
    let table = f.table();
    let mono = f.to_monomial_coeffs();

    // shift m(w) -> m(w + z), exact on polynomials
    let mut shifted = vec![Complex64::new(0.0, 0.0); table.len()];
    let binom = binomial_table(f.maxdeg);
    for (i, alpha) in table.indices.iter().enumerate() {
        if mono[i].norm_sqr() == 0.0 {
            continue;
        }
        // expand prod_j (w_j + z_j)^{alpha_j}
        let mut beta = vec![0usize; f.n];
        loop {
            let mut coef = mono[i];
            for j in 0..f.n {
                coef *= binom[alpha[j]][beta[j]] * p.z[j].powu((alpha[j] - beta[j]) as u32);
            }
            let pos = table.position(&beta).unwrap();
            shifted[pos] += coef;
            // next beta <= alpha (odometer)
            let mut j = 0;
            loop {
                if j == f.n {
                    break;
                }
                if beta[j] < alpha[j] {
                    beta[j] += 1;
                    break;
                }
                beta[j] = 0;
                j += 1;
            }
            if j == f.n {
                break;
            }
        }
    }

    // truncated series of exp(l(w)), l(w) = -(lambda/2) sum conj(z_j) w_j
    let lin: Vec<Complex64> = p.z.iter().map(|zj| zj.conj() * (-lambda / 2.0)).collect();
    let mut expo = vec![Complex64::new(0.0, 0.0); table.len()];
    for (i, alpha) in table.indices.iter().enumerate() {
        let mut v = Complex64::new(1.0, 0.0);
        for (j, &a) in alpha.iter().enumerate() {
            for k in 1..=a {
                v *= lin[j] / k as f64;
            }
        }
        expo[i] = v;
    }

    // truncated polynomial product
    let mut product = vec![Complex64::new(0.0, 0.0); table.len()];
    for (i, alpha) in table.indices.iter().enumerate() {
        if shifted[i].norm_sqr() == 0.0 {
            continue;
        }
        let da: usize = alpha.iter().sum();
        for (k, beta) in table.indices.iter().enumerate() {
            let db: usize = beta.iter().sum();
            if da + db > f.maxdeg {
                continue;
            }
            if expo[k].norm_sqr() == 0.0 {
                continue;
            }
            let gamma: Vec<usize> = alpha.iter().zip(beta).map(|(a, b)| a + b).collect();
            let pos = table.position(&gamma).unwrap();
            product[pos] += shifted[i] * expo[k];
        }
    }

    let z2 = p.norm_sq_z();
    let scalar = (Complex64::new(0.0, lambda * p.t) + Complex64::new(-lambda * z2 / 4.0, 0.0)).exp();
    for v in &mut product {
        *v *= scalar;
    }
    FockElement::from_monomial_coeffs(f.lam, f.n, f.maxdeg, &product)
}

fn binomial_table(maxdeg: usize) -> Vec<Vec<f64>> {
    let mut t = vec![vec![0.0; maxdeg + 1]; maxdeg + 1];
    for i in 0..=maxdeg {
        t[i][0] = 1.0;
        for j in 1..=i {
            t[i][j] = t[i - 1][j - 1] + if j <= i - 1 { t[i - 1][j] } else { 0.0 };
        }
    }
    t
}

/// The coefficient vector of `beta_lambda[z, t]^* e_0` for `lambda < 0`, in
/// the Fock space with parameter `|lambda|`.
///
/// In closed form the coefficients are
/// `exp(i |lambda| t - (|lambda|/4) |z|^2) (|lambda|/2)^{|alpha|/2} z^alpha / sqrt(alpha!)`,
/// so the full (untruncated) vector has unit norm.
pub fn coherent_state(lambda: f64, p: &HeisenbergPoint, maxdeg: usize) -> Result<FockElement> {
    if lambda >= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "coherent_state expects lambda < 0, got {lambda}"
        )));
    }
    let mu = -lambda;
    let n = p.dim();
    let table = index_table(n, maxdeg);
    let z2 = p.norm_sq_z();
    let scalar = Complex64::new(-mu * z2 / 4.0, mu * p.t).exp();
    let mut coeffs = Vec::with_capacity(table.len());
    for alpha in &table.indices {
        let mut v = Complex64::new(1.0, 0.0);
        for (j, &a) in alpha.iter().enumerate() {
            for k in 1..=a {
                v *= p.z[j] * (mu / 2.0).sqrt() / (k as f64).sqrt();
            }
        }
        coeffs.push(scalar * v);
    }
    Ok(FockElement {
        lam: mu,
        n,
        maxdeg,
        coeffs,
    })
}

/// Closed-form trace `tr(P_0 beta_lambda(p) beta_lambda(q)^*)` for
/// `lambda < 0`, with `p = [z, t]`, `q = [w, s]`:
/// `exp(lambda (|w - z|^2 / 4 + i (t - s - Im(w . conj(z)) / 2)))`.
pub fn coherent_trace(lambda: f64, p: &HeisenbergPoint, q: &HeisenbergPoint) -> Result<Complex64> {
    if lambda >= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "coherent_trace expects lambda < 0, got {lambda}"
        )));
    }
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    let diff_sq: f64 = p
        .z
        .iter()
        .zip(&q.z)
        .map(|(z, w)| (w - z).norm_sqr())
        .sum();
    let cross: Complex64 = q.z.iter().zip(&p.z).map(|(w, z)| w * z.conj()).sum();
    let exponent = Complex64::new(diff_sq / 4.0, p.t - q.t - 0.5 * cross.im) * lambda;
    Ok(exponent.exp())
}

/// Diagonal action of the fractional sub-Laplacian on Fock coefficients:
/// `c_alpha -> [|lambda| (1 + |alpha| / n)]^{s/2} c_alpha`.
pub fn sobolev_multiplier(s: f64, f: &FockElement) -> Result<FockElement> {
    if s < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Sobolev order must be nonnegative, got {s}"
        )));
    }
    let table = f.table();
    let mut out = f.clone();
    for (alpha, c) in table.indices.iter().zip(&mut out.coeffs) {
        let deg: usize = alpha.iter().sum();
        let factor = (f.lam * (1.0 + deg as f64 / f.n as f64)).powf(s / 2.0);
        *c *= factor;
    }
    Ok(out)
}

/// CSV dump of the coefficients: rows `alpha_1, ..., alpha_n, re, im` in
/// graded lexicographic order.
pub fn coefficients_csv(f: &FockElement) -> String {
    let table = f.table();
    let mut out = String::new();
    for j in 0..f.n {
        out.push_str(&format!("alpha{},", j + 1));
    }
    out.push_str("re,im\n");
    for (alpha, c) in table.indices.iter().zip(&f.coeffs) {
        for a in alpha {
            out.push_str(&format!("{a},"));
        }
        out.push_str(&format!("{:.17e},{:.17e}\n", c.re, c.im));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::GaussLegendre;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn index_order_is_graded_lex() {
        let table = index_table(2, 2);
        let expect: Vec<Vec<usize>> = vec![
            vec![0, 0],
            vec![0, 1],
            vec![1, 0],
            vec![0, 2],
            vec![1, 1],
            vec![2, 0],
        ];
        assert_eq!(table.indices, expect);
    }

    /// Brute-force Gaussian integral oracle for the Fock norm at n = 1:
    /// `(lam / 2 pi) * iint |f(x + i y)|^2 exp(-lam (x^2 + y^2) / 2) dx dy`.
    fn fock_norm_sq_quadrature(f: &FockElement) -> f64 {
        let ext = 12.0 / f.lam.sqrt() + 4.0;
        let rule = GaussLegendre::new(120, -ext, ext);
        let mut total = 0.0;
        for (&x, &wx) in rule.nodes.iter().zip(&rule.weights) {
            for (&y, &wy) in rule.nodes.iter().zip(&rule.weights) {
                let z = [c(x, y)];
                let v = f.eval(&z).norm_sqr();
                total += wx * wy * v * (-f.lam * (x * x + y * y) / 2.0).exp();
            }
        }
        total * f.lam / (2.0 * std::f64::consts::PI)
    }

    #[test]
    fn monomial_norm_examples() {
        assert_abs_diff_eq!(monomial_norm(&[0], 3.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(monomial_norm(&[1], 2.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            monomial_norm(&[2], 1.0).unwrap(),
            8.0f64.sqrt(),
            epsilon = 1e-14
        );
        assert!(monomial_norm(&[1], 0.0).is_err());
    }

    #[test]
    fn monomial_norm_matches_gaussian_integral() {
        for (alpha, lam) in [(1usize, 2.0), (2, 1.0), (3, 1.5)] {
            let f = FockElement::basis_vector(lam, 1, 6, &[alpha]).unwrap();
            let quad = fock_norm_sq_quadrature(&f);
            assert_abs_diff_eq!(quad, 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn inner_product_is_orthonormal_and_matches_integral() {
        let e1 = FockElement::basis_vector(1.3, 1, 5, &[1]).unwrap();
        let e2 = FockElement::basis_vector(1.3, 1, 5, &[2]).unwrap();
        assert_abs_diff_eq!(fock_inner(&e1, &e1).unwrap().re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fock_inner(&e1, &e2).unwrap().norm(), 0.0, epsilon = 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut f = FockElement::zero(1.7, 1, 4);
        for v in &mut f.coeffs {
            *v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let parseval = fock_norm(&f).powi(2);
        let quad = fock_norm_sq_quadrature(&f);
        assert!((parseval - quad).abs() <= 1e-6 * parseval);
    }

    #[test]
    fn norm_is_homogeneous() {
        let f = FockElement::basis_vector(1.0, 1, 4, &[2]).unwrap();
        let g = f.scale(c(-3.0, 4.0));
        assert_abs_diff_eq!(fock_norm(&g), 5.0, epsilon = 1e-14);
    }

    #[test]
    fn eval_examples() {
        let e0 = FockElement::basis_vector(2.0, 1, 4, &[0]).unwrap();
        assert_abs_diff_eq!(e0.eval(&[c(1.3, -0.4)]).re, 1.0, epsilon = 1e-15);
        let mut f = FockElement::zero(2.0, 1, 4);
        f.coeffs[0] = c(0.7, -0.2);
        f.coeffs[2] = c(1.0, 1.0);
        let at0 = f.eval(&[c(0.0, 0.0)]);
        assert_abs_diff_eq!((at0 - c(0.7, -0.2)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn pointwise_bound_from_reproducing_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let lam = 1.4;
        let mut f = FockElement::zero(lam, 1, 6);
        for v in &mut f.coeffs {
            *v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        for _ in 0..20 {
            let z = [c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))];
            let bound = fock_norm(&f) * (lam * z[0].norm_sqr() / 4.0).exp();
            assert!(f.eval(&z).norm() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn kernel_examples() {
        let z = [c(0.4, 1.1)];
        let w = [c(-0.3, 0.2)];
        assert_abs_diff_eq!(
            (fock_kernel(2.0, &z, &[c(0.0, 0.0)]).unwrap() - c(1.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
        let k1 = fock_kernel(2.0, &z, &w).unwrap();
        let k2 = fock_kernel(2.0, &w, &z).unwrap();
        assert_abs_diff_eq!((k1 - k2.conj()).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn kernel_reproduces_truncated_elements() {
        let lam = 1.0;
        let maxdeg = 18;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut f = FockElement::zero(lam, 1, maxdeg);
        for v in f.coeffs.iter_mut().take(5) {
            *v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        for _ in 0..10 {
            let w = [c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))];
            // K_w expanded over the truncated basis
            let mut kw = FockElement::zero(lam, 1, maxdeg);
            for (i, alpha) in kw.table().indices.clone().iter().enumerate() {
                let a = alpha[0];
                let mut v = Complex64::new(1.0, 0.0);
                for k in 1..=a {
                    v *= w[0] * (lam / 2.0) / k as f64;
                }
                kw.coeffs[i] = v.conj() * monomial_norm(alpha, lam).unwrap();
            }
            let lhs = fock_inner(&f, &kw).unwrap();
            let rhs = f.eval(&w);
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn bargmann_center_acts_by_phase() {
        let f = FockElement::basis_vector(1.5, 1, 8, &[3]).unwrap();
        let p = HeisenbergPoint::new(vec![c(0.0, 0.0)], 0.7);
        let g = bargmann_apply(&p, 1.5, &f).unwrap();
        let phase = c(0.0, 1.5 * 0.7).exp();
        for (a, b) in g.coeffs.iter().zip(&f.coeffs) {
            assert!((a - phase * b).norm() < 1e-14);
        }
        // identity at the group identity
        let e = HeisenbergPoint::identity(1);
        let h = bargmann_apply(&e, 1.5, &f).unwrap();
        for (a, b) in h.coeffs.iter().zip(&f.coeffs) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn bargmann_is_near_unitary_and_stable_in_maxdeg() {
        let p = HeisenbergPoint::new(vec![c(0.4, -0.3)], 0.2);
        let mut prev_defect = f64::INFINITY;
        for maxdeg in [10usize, 14, 18] {
            let f = FockElement::basis_vector(1.0, 1, maxdeg, &[2]).unwrap();
            let g = bargmann_apply(&p, 1.0, &f).unwrap();
            let defect = (fock_norm(&g) - 1.0).abs();
            assert!(defect < prev_defect + 1e-15);
            prev_defect = defect;
        }
        assert!(prev_defect < 1e-9);
    }

    #[test]
    fn bargmann_respects_group_law_in_the_limit() {
        let p = HeisenbergPoint::new(vec![c(0.3, 0.1)], 0.4);
        let q = HeisenbergPoint::new(vec![c(-0.2, 0.25)], -0.1);
        let pq = crate::geometry::group_product(&p, &q).unwrap();
        let mut prev = f64::INFINITY;
        for maxdeg in [10usize, 14, 18] {
            let f = FockElement::basis_vector(1.0, 1, maxdeg, &[1]).unwrap();
            let lhs = bargmann_apply(&p, 1.0, &bargmann_apply(&q, 1.0, &f).unwrap()).unwrap();
            let rhs = bargmann_apply(&pq, 1.0, &f).unwrap();
            let diff: f64 = lhs
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff < prev + 1e-15);
            prev = diff;
        }
        assert!(prev < 1e-8);
    }

    #[test]
    fn coherent_trace_examples() {
        let e = HeisenbergPoint::identity(1);
        let v = coherent_trace(-1.0, &e, &e).unwrap();
        assert_abs_diff_eq!((v - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        let p = HeisenbergPoint::new(vec![c(0.8, -0.6)], 1.3);
        let w = coherent_trace(-2.0, &p, &p).unwrap();
        assert_abs_diff_eq!((w - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn coherent_trace_matches_truncated_matrix_trace() {
        let lambda = -1.0;
        let maxdeg = 20;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..4 {
            let p = HeisenbergPoint::new(
                vec![c(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8))],
                rng.gen_range(-1.0..1.0),
            );
            let q = HeisenbergPoint::new(
                vec![c(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8))],
                rng.gen_range(-1.0..1.0),
            );
            // tr(P_0 M) = <M e_0, e_0> with M = beta(p) beta(q)^* = beta(p) beta(q^{-1})
            let e0 = FockElement::basis_vector(-lambda, 1, maxdeg, &[0]).unwrap();
            let step = bargmann_apply(&q.inverse(), lambda, &e0).unwrap();
            let out = bargmann_apply(&p, lambda, &step).unwrap();
            let oracle = out.coeffs[0];
            let closed = coherent_trace(lambda, &p, &q).unwrap();
            assert!(
                (oracle - closed).norm() <= 1e-8 * closed.norm().max(1.0),
                "oracle {oracle} vs closed {closed}"
            );
        }
    }

    #[test]
    fn coherent_trace_is_hermitian() {
        let p = HeisenbergPoint::new(vec![c(0.3, 0.4)], 0.5);
        let q = HeisenbergPoint::new(vec![c(-0.1, 0.9)], -0.2);
        let a = coherent_trace(-1.3, &p, &q).unwrap();
        let b = coherent_trace(-1.3, &q, &p).unwrap();
        assert!((a - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn coherent_state_matches_bargmann_adjoint() {
        let lambda = -1.2;
        let p = HeisenbergPoint::new(vec![c(0.5, -0.2)], 0.7);
        let closed = coherent_state(lambda, &p, 16).unwrap();
        let e0 = FockElement::basis_vector(-lambda, 1, 16, &[0]).unwrap();
        let applied = bargmann_apply(&p.inverse(), lambda, &e0).unwrap();
        for (a, b) in closed.coeffs.iter().zip(&applied.coeffs) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn sobolev_multiplier_examples() {
        let f = FockElement::basis_vector(2.0, 1, 4, &[3]).unwrap();
        let id = sobolev_multiplier(0.0, &f).unwrap();
        assert!((id.coeffs[3] - f.coeffs[3]).norm() < 1e-15);
        let e0 = FockElement::basis_vector(2.0, 1, 4, &[0]).unwrap();
        let g = sobolev_multiplier(1.0, &e0).unwrap();
        assert_abs_diff_eq!(g.coeffs[0].re, 2.0f64.sqrt(), epsilon = 1e-14);
        let h = sobolev_multiplier(2.0, &f).unwrap();
        // [|lam|(1 + |alpha|/n)] e_alpha with |alpha| = 3, n = 1
        assert_abs_diff_eq!(h.coeffs[3].re, 2.0 * 4.0, epsilon = 1e-13);
    }

    #[test]
    fn sobolev_multiplier_composes_additively() {
        let mut f = FockElement::zero(1.5, 2, 3);
        for (i, v) in f.coeffs.iter_mut().enumerate() {
            *v = c(1.0 + i as f64, -0.5 * i as f64);
        }
        let a = sobolev_multiplier(0.7, &sobolev_multiplier(1.1, &f).unwrap()).unwrap();
        let b = sobolev_multiplier(1.8, &f).unwrap();
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            assert!((x - y).norm() <= 1e-12 * y.norm().max(1.0));
        }
    }
}

//! Bound-state eigenfunctions and exact inner products.
//!
//! A state `(l, two_n, e1, e2)` factorizes as `Psi = R(r) Phi(phi)`. Both
//! factors are built here as elements of the canonical term class:
//!
//! * the angular harmonic `h = x1^e1 x2^e2 r^{2k} P_k^{(mu1-1/2+e1,
//!   mu2-1/2+e2)}(t)` with `t = (x2^2 - x1^2)/r^2`, a Dunkl-harmonic
//!   polynomial of homogeneous degree `2n` equal to `r^{2n} Phi(phi)`;
//! * the radial factor `R = e^{-beta r/2} (beta r)^{2n}
//!   L_l^{(4n + 2mu1 + 2mu2)}(beta r)`.
//!
//! Inner products use the weight `|x1|^{2mu1} |x2|^{2mu2}`, under which the
//! product of two class members integrates term by term: the angular moment
//! of `cos^A phi sin^eps phi` reduces through `t = -cos 2phi` to a
//! Gauss-Jacobi sum, and the radial moment of `r^P e^{-S r}` through
//! `u = S r` to a Gauss-Laguerre sum. Rule orders are chosen from the exact
//! polynomial degrees involved, so the only error is f64 rounding.
//!
//! Normalization constants `eta` (angular) and `xi` (radial) are evaluated
//! in log space from gamma functions; `2n = 0` uses the rearrangement
//! `eta^2 = Gamma(mu1 + mu2 + 1) / (2 Gamma(mu1 + 1/2) Gamma(mu2 + 1/2))`,
//! which stays finite when `mu1 + mu2 = 0`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exec;
use crate::operator::ModelParams;
use crate::orthopoly::{gauss_jacobi, gauss_laguerre, jacobi_coeffs, laguerre_coeffs, log_gamma, QuadRule};
use crate::rational::Rational;
use crate::spectra::{self, QuantumNumbers};
use crate::term::{FunctionExpr, RawTerm};

/// Unnormalized angular harmonic of the state: a homogeneous polynomial of
/// degree `two_n`, Dunkl-harmonic and an eigenfunction of `Jcal^2`.
pub fn angular_harmonic(params: &ModelParams, qn: &QuantumNumbers) -> Result<FunctionExpr> {
    let k = qn.jacobi_index() as usize;
    let half = Rational::new(1, 2);
    let ja = &(params.mu1() - &half) + &Rational::from_int(i64::from(qn.e1()));
    let jb = &(params.mu2() - &half) + &Rational::from_int(i64::from(qn.e2()));
    let poly = jacobi_coeffs(k, &ja, &jb);
    let mut raw = Vec::new();
    for (j, pj) in poly.iter().enumerate() {
        // t^j r^{2k} = (x2^2 - x1^2)^j r^{2(k-j)}
        for i in 0..=j {
            let bin = num_integer::binomial(BigInt::from(j), BigInt::from(i));
            let mut coeff = pj * &Rational::from_big(BigRational::from_integer(bin));
            if (j - i) % 2 == 1 {
                coeff = -coeff;
            }
            raw.push(RawTerm {
                coeff,
                a: 2 * (j - i) as u32 + u32::from(qn.e1()),
                b: 2 * i as u32 + u32::from(qn.e2()),
                c: 2 * (k - j) as i32,
                s: Rational::zero(),
            });
        }
    }
    FunctionExpr::from_raw_terms(raw)
}

/// Unnormalized radial factor as a function of `r` (terms with `a = eps =
/// 0`): `e^{-beta r/2} (beta r)^{2n} L_l^{(4n + 2 mu1 + 2 mu2)}(beta r)`.
pub fn radial_factor(params: &ModelParams, qn: &QuantumNumbers) -> Result<FunctionExpr> {
    let beta = spectra::beta(params, qn)?;
    let half_beta = &beta * &Rational::new(1, 2);
    let lag_a = &Rational::from_int(2 * i64::from(qn.two_n())) + &(&params.mu_sum() * &Rational::from_int(2));
    let poly = laguerre_coeffs(qn.l() as usize, &lag_a);
    let raw = poly.into_iter().enumerate().map(|(m, cm)| {
        let power = qn.two_n() as i32 + m as i32;
        RawTerm {
            coeff: &cm * &beta.pow(power),
            a: 0,
            b: 0,
            c: power,
            s: half_beta.clone(),
        }
    });
    FunctionExpr::from_raw_terms(raw)
}

/// Unnormalized full eigenfunction `R(r) Phi(phi)` as a two-dimensional
/// class member; all radial exponents come out nonnegative.
pub fn full_wavefunction(params: &ModelParams, qn: &QuantumNumbers) -> Result<FunctionExpr> {
    let h = angular_harmonic(params, qn)?;
    let beta = spectra::beta(params, qn)?;
    let half_beta = &beta * &Rational::new(1, 2);
    let lag_a = &Rational::from_int(2 * i64::from(qn.two_n())) + &(&params.mu_sum() * &Rational::from_int(2));
    let poly = laguerre_coeffs(qn.l() as usize, &lag_a);
    // R / r^{2n} = beta^{2n} e^{-beta r/2} sum_m c_m beta^m r^m, the factor
    // multiplying the harmonic once its homogeneity supplies r^{2n}.
    let radial_part = FunctionExpr::from_raw_terms(poly.into_iter().enumerate().map(|(m, cm)| {
        RawTerm {
            coeff: &cm * &beta.pow(qn.two_n() as i32 + m as i32),
            a: 0,
            b: 0,
            c: m as i32,
            s: half_beta.clone(),
        }
    }))?;
    let psi = h.mul(&radial_part);
    assert!(
        psi.iter().all(|(k, _)| k.c >= 0),
        "full wavefunction must stay polynomial in r"
    );
    Ok(psi)
}

/// Angular normalization `eta > 0`: `eta * h / r^{2n}` has unit angular
/// norm.
pub fn angular_norm_constant(params: &ModelParams, qn: &QuantumNumbers) -> f64 {
    let mu1 = params.mu1().to_f64();
    let mu2 = params.mu2().to_f64();
    let gamma = mu1 + mu2;
    let log_eta_sq = if qn.two_n() == 0 {
        log_gamma(gamma + 1.0) - (2.0f64).ln() - log_gamma(mu1 + 0.5) - log_gamma(mu2 + 0.5)
    } else {
        let n = f64::from(qn.two_n()) / 2.0;
        let e1 = f64::from(qn.e1());
        let e2 = f64::from(qn.e2());
        let k = f64::from(qn.jacobi_index());
        ((2.0 * n + gamma) / 2.0).ln() + log_gamma(k + 1.0) + log_gamma(n + gamma + (e1 + e2) / 2.0)
            - log_gamma(n + mu1 + (1.0 + e1 - e2) / 2.0)
            - log_gamma(n + mu2 + (1.0 + e2 - e1) / 2.0)
    };
    (0.5 * log_eta_sq).exp()
}

/// Radial normalization `xi > 0`: `xi R(r)` has unit norm under
/// `r^{2 mu1 + 2 mu2 + 1} dr`.
pub fn radial_norm_constant(params: &ModelParams, qn: &QuantumNumbers) -> Result<f64> {
    let beta = spectra::beta(params, qn)?.to_f64();
    let gamma = params.mu_sum().to_f64();
    let l = f64::from(qn.l());
    let big = l + 2.0 * f64::from(qn.two_n()) + 2.0 * gamma;
    let log_xi_sq = log_gamma(l + 1.0) + (2.0 * gamma + 2.0) * beta.ln()
        - log_gamma(big + 1.0)
        - (l + big + 1.0).ln();
    Ok((0.5 * log_xi_sq).exp())
}

/// Combined constant `eta * xi` making the full wavefunction unit-norm.
pub fn norm_constant(params: &ModelParams, qn: &QuantumNumbers) -> Result<f64> {
    Ok(angular_norm_constant(params, qn) * radial_norm_constant(params, qn)?)
}

/// Everything needed to evaluate and check one bound state.
#[derive(Debug, Clone)]
pub struct WavefunctionBundle {
    pub qn: QuantumNumbers,
    /// Exact unnormalized eigenfunction.
    pub exact: FunctionExpr,
    /// Float prefactor `eta * xi` giving unit norm.
    pub norm_constant: f64,
    pub energy: Rational,
    pub beta: Rational,
}

impl WavefunctionBundle {
    pub fn build(params: &ModelParams, qn: &QuantumNumbers) -> Result<Self> {
        Ok(WavefunctionBundle {
            qn: *qn,
            exact: full_wavefunction(params, qn)?,
            norm_constant: norm_constant(params, qn)?,
            energy: spectra::energy(params, qn)?,
            beta: spectra::beta(params, qn)?,
        })
    }

    pub fn evaluate_normalized(&self, x1: f64, x2: f64) -> Result<f64> {
        Ok(self.norm_constant * self.exact.evaluate(x1, x2)?)
    }
}

struct MomentEngine {
    mu1: f64,
    mu2: f64,
    jacobi: QuadRule,
    laguerre: QuadRule,
    order: usize,
}

impl MomentEngine {
    fn new(params: &ModelParams, order: usize) -> Result<Self> {
        let mu1 = params.mu1().to_f64();
        let mu2 = params.mu2().to_f64();
        let gamma = mu1 + mu2;
        Ok(MomentEngine {
            mu1,
            mu2,
            jacobi: gauss_jacobi(order, mu1 - 0.5, mu2 - 0.5)?,
            laguerre: gauss_laguerre(order, 2.0 * gamma + 1.0)?,
            order,
        })
    }

    fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > 2 * self.order - 1 {
            return Err(Error::QuadratureExactness {
                order: self.order,
                degree,
            });
        }
        Ok(())
    }

    /// `integral cos^A sin^eps |cos|^{2mu1} |sin|^{2mu2} dphi` over the full
    /// circle; vanishes by parity unless `eps = 0` and `A` is even.
    fn angular_moment(&self, a_pow: u32, eps: u8) -> Result<f64> {
        if eps == 1 || a_pow % 2 == 1 {
            return Ok(0.0);
        }
        let half_a = (a_pow / 2) as usize;
        self.check_degree(half_a)?;
        let sum = self.jacobi.integrate(|t| (1.0 - t).powi(half_a as i32));
        let scale = 2.0f64.powf(1.0 - half_a as f64 - self.mu1 - self.mu2);
        Ok(scale * sum)
    }

    /// `integral_0^inf r^P e^{-S r} r^{2 mu1 + 2 mu2 + 1} dr` with `P >= 0`,
    /// `S > 0`.
    fn radial_moment(&self, p_pow: i32, total_decay: f64) -> Result<f64> {
        if p_pow < 0 {
            return Err(Error::NonPolynomialIntegrand(format!(
                "radial power r^{p_pow} in an inner product"
            )));
        }
        if total_decay <= 0.0 {
            return Err(Error::NonPositiveDecay("0/1".to_string()));
        }
        self.check_degree(p_pow as usize)?;
        let sum = self.laguerre.integrate(|u| u.powi(p_pow));
        let gamma = self.mu1 + self.mu2;
        Ok(sum * total_decay.powf(-(f64::from(p_pow) + 2.0 * gamma + 2.0)))
    }
}

fn required_order_full(product: &FunctionExpr) -> usize {
    let mut deg = 0usize;
    for (k, _) in product.iter() {
        let p = k.a as i32 + i32::from(k.eps) + k.c;
        if p > 0 {
            deg = deg.max(p as usize);
        }
        deg = deg.max((k.a / 2) as usize);
    }
    deg / 2 + 4
}

fn resolve_order(product: &FunctionExpr, requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| required_order_full(product))
}

/// Full two-dimensional inner product `<f, g>` under `|x1|^{2mu1}
/// |x2|^{2mu2} dx1 dx2`, exact up to f64 rounding. `order` overrides the
/// automatically chosen quadrature order.
pub fn inner_product(
    params: &ModelParams,
    f: &FunctionExpr,
    g: &FunctionExpr,
    order: Option<usize>,
) -> Result<f64> {
    let product = f.mul(g);
    let engine = MomentEngine::new(params, resolve_order(&product, order))?;
    let mut acc = 0.0;
    for (k, v) in product.iter() {
        let ang = engine.angular_moment(k.a, k.eps)?;
        if ang == 0.0 {
            continue;
        }
        let p = k.a as i32 + i32::from(k.eps) + k.c;
        let rad = engine.radial_moment(p, k.s.to_f64())?;
        acc += v.to_f64() * ang * rad;
    }
    Ok(acc)
}

/// Angular inner product of two homogeneous polynomials evaluated on the
/// unit circle: `<h1/r^{d1}, h2/r^{d2}>` under `|cos|^{2mu1} |sin|^{2mu2}
/// dphi`.
pub fn angular_inner_product(
    params: &ModelParams,
    f: &FunctionExpr,
    g: &FunctionExpr,
    order: Option<usize>,
) -> Result<f64> {
    let product = f.mul(g);
    let ord = order.unwrap_or_else(|| {
        let max_a = product.iter().map(|(k, _)| k.a / 2).max().unwrap_or(0);
        max_a as usize / 2 + 4
    });
    let engine = MomentEngine::new(params, ord)?;
    let mut acc = 0.0;
    for (k, v) in product.iter() {
        if !k.s.is_zero() {
            return Err(Error::NonPolynomialIntegrand(
                "angular factor with exponential decay".to_string(),
            ));
        }
        acc += v.to_f64() * engine.angular_moment(k.a, k.eps)?;
    }
    Ok(acc)
}

/// Radial inner product of two functions of `r` alone under
/// `r^{2 mu1 + 2 mu2 + 1} dr`.
pub fn radial_inner_product(
    params: &ModelParams,
    f: &FunctionExpr,
    g: &FunctionExpr,
    order: Option<usize>,
) -> Result<f64> {
    let product = f.mul(g);
    let ord = order.unwrap_or_else(|| {
        let max_c = product.iter().map(|(k, _)| k.c.max(0)).max().unwrap_or(0);
        max_c as usize / 2 + 4
    });
    let engine = MomentEngine::new(params, ord)?;
    let mut acc = 0.0;
    for (k, v) in product.iter() {
        if k.a != 0 || k.eps != 0 {
            return Err(Error::NonPolynomialIntegrand(
                "radial factor depending on the angle".to_string(),
            ));
        }
        acc += v.to_f64() * engine.radial_moment(k.c, k.s.to_f64())?;
    }
    Ok(acc)
}

fn gram_matrix<F>(items: &[FunctionExpr], pairwise: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&FunctionExpr, &FunctionExpr) -> Result<f64> + Sync + Send,
{
    let n = items.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .collect();
    let entries = exec::map_ref(&pairs, |&(i, j)| {
        pairwise(&items[i], &items[j]).map(|v| (i, j, v))
    });
    let mut out = vec![vec![0.0; n]; n];
    for entry in entries {
        let (i, j, v) = entry?;
        out[i][j] = v;
        out[j][i] = v;
    }
    Ok(out)
}

/// Symmetric Gram matrix of angular inner products.
pub fn gram_angular(
    params: &ModelParams,
    items: &[FunctionExpr],
    order: Option<usize>,
) -> Result<Vec<Vec<f64>>> {
    gram_matrix(items, |f, g| angular_inner_product(params, f, g, order))
}

/// Symmetric Gram matrix of radial inner products.
pub fn gram_radial(
    params: &ModelParams,
    items: &[FunctionExpr],
    order: Option<usize>,
) -> Result<Vec<Vec<f64>>> {
    gram_matrix(items, |f, g| radial_inner_product(params, f, g, order))
}

/// Symmetric Gram matrix of full two-dimensional inner products.
pub fn gram_full(
    params: &ModelParams,
    items: &[FunctionExpr],
    order: Option<usize>,
) -> Result<Vec<Vec<f64>>> {
    gram_matrix(items, |f, g| inner_product(params, f, g, order))
}

/// Norm of the normalized state as computed by quadrature; equals 1 up to
/// rounding, uniformly in the quantum numbers.
pub fn forced_norm_ratio(
    params: &ModelParams,
    qn: &QuantumNumbers,
    order: Option<usize>,
) -> Result<f64> {
    let bundle = WavefunctionBundle::build(params, qn)?;
    let raw = inner_product(params, &bundle.exact, &bundle.exact, order)?;
    Ok(raw * bundle.norm_constant * bundle.norm_constant)
}

//! Runnable verification suite for the model's algebraic structure.
//!
//! Each check applies residual operators to a family of class functions (or
//! to exact eigenfunctions) and reports the outcome as a [`CheckReport`].
//! Exact checks demand an identically zero residual expression; the single
//! float check (the radial ODE, probed by finite differences) carries an
//! explicit tolerance. Reports are deterministic for a fixed seed apart
//! from the `elapsed_ms` timing field.
//!
//! Every check has a named [`Mutation`] that injects one specific defect
//! into the quantity it verifies. Running the suite with a mutation must
//! flip the corresponding check to fail; this guards the suite itself
//! against vacuous passes.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::operator::{anticommutator, commutator, ModelParams, OperatorExpr, Primitive};
use crate::rational::Rational;
use crate::spectra::{self, QuantumNumbers};
use crate::term::FunctionExpr;
use crate::wavefunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exactness {
    Exact,
    Float,
}

/// Residual size: the largest absolute coefficient for exact checks, the
/// worst scaled deviation for float checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResidualValue {
    Exact(Rational),
    Float(f64),
}

/// Population of test inputs: the full canonical grid plus seeded random
/// terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub canonical: usize,
    pub random: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub params: ModelParams,
    pub status: CheckStatus,
    pub exactness: Exactness,
    pub residual: ResidualValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyDescriptor>,
    pub elapsed_ms: u64,
}

impl CheckReport {
    pub fn is_pass(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Term family the operator-identity checks run over.
#[derive(Debug, Clone)]
pub struct TestFamily {
    pub functions: Vec<FunctionExpr>,
    pub descriptor: FamilyDescriptor,
}

impl TestFamily {
    /// Full canonical grid (`a <= 6`, `eps in {0,1}`, `-4 <= c <= 4`,
    /// `s in {0, 1/2, 1}`) plus 50 seeded random terms with `a <= 10`,
    /// `|c| <= 6`.
    pub fn default_family(seed: u64) -> Self {
        let decays = [Rational::zero(), Rational::new(1, 2), Rational::one()];
        let mut functions = Vec::new();
        for a in 0..=6u32 {
            for eps in 0..=1u8 {
                for c in -4..=4i32 {
                    for s in &decays {
                        functions.push(FunctionExpr::term(Rational::one(), a, eps, c, s.clone()));
                    }
                }
            }
        }
        let canonical = functions.len();
        let random_decays = [
            Rational::zero(),
            Rational::new(1, 2),
            Rational::one(),
            Rational::new(3, 2),
            Rational::from_int(2),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..50 {
            let a = rng.gen_range(0..=10u32);
            let eps = rng.gen_range(0..=1u8);
            let c = rng.gen_range(-6..=6i32);
            let s = random_decays[rng.gen_range(0..random_decays.len())].clone();
            let p = loop {
                let p = rng.gen_range(-99..=99i64);
                if p != 0 {
                    break p;
                }
            };
            let q = rng.gen_range(1..=9i64);
            functions.push(FunctionExpr::term(Rational::new(p, q), a, eps, c, s));
        }
        let descriptor = FamilyDescriptor {
            canonical,
            random: functions.len() - canonical,
            seed,
        };
        TestFamily {
            functions,
            descriptor,
        }
    }
}

/// One deliberate defect per check, used to demonstrate that each check has
/// the power to fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Replaces `L0` by `2 L0` in the so(2,1) bracket relations.
    So21ScaleL0,
    /// Flips the `-1/4` constant in the so(2,1) Casimir reference value.
    CasimirConstFlip,
    /// Shifts the `mu1/alpha` prefactor of `A1` to `(mu1 + 1)/alpha`.
    RungeLenzMuShift,
    /// Replaces `2/alpha^2` by `3/alpha^2` in the `[A1, A2]` reference.
    InvarianceScaleShift,
    /// Replaces `kappa` by `kappa + 1` in the per-level su(2) scaling.
    Su2KappaShift,
    /// Shifts every reference energy by `+1`.
    EigenEnergyShift,
    /// Shifts the separation constant `m^2` by `+1`.
    SeparationShift,
}

pub const MUTATION_NAMES: [&str; 7] = [
    "so21_scale_l0",
    "casimir_const_flip",
    "runge_lenz_mu_shift",
    "invariance_scale_shift",
    "su2_kappa_shift",
    "eigen_energy_shift",
    "separation_shift",
];

impl Mutation {
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "so21_scale_l0" => Mutation::So21ScaleL0,
            "casimir_const_flip" => Mutation::CasimirConstFlip,
            "runge_lenz_mu_shift" => Mutation::RungeLenzMuShift,
            "invariance_scale_shift" => Mutation::InvarianceScaleShift,
            "su2_kappa_shift" => Mutation::Su2KappaShift,
            "eigen_energy_shift" => Mutation::EigenEnergyShift,
            "separation_shift" => Mutation::SeparationShift,
            other => return Err(Error::UnknownMutation(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mutation::So21ScaleL0 => "so21_scale_l0",
            Mutation::CasimirConstFlip => "casimir_const_flip",
            Mutation::RungeLenzMuShift => "runge_lenz_mu_shift",
            Mutation::InvarianceScaleShift => "invariance_scale_shift",
            Mutation::Su2KappaShift => "su2_kappa_shift",
            Mutation::EigenEnergyShift => "eigen_energy_shift",
            Mutation::SeparationShift => "separation_shift",
        }
    }

    /// Check whose failure the mutation must provoke.
    pub fn target_check(&self) -> &'static str {
        match self {
            Mutation::So21ScaleL0 => "so21_brackets",
            Mutation::CasimirConstFlip => "casimir_so21_value",
            Mutation::RungeLenzMuShift => "constants_of_motion",
            Mutation::InvarianceScaleShift => "invariance_algebra",
            Mutation::Su2KappaShift => "su2_deformation",
            Mutation::EigenEnergyShift => "hamiltonian_eigenfunctions",
            Mutation::SeparationShift => "separation_angular",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Mutation::So21ScaleL0 => "L0 doubled inside the so(2,1) brackets",
            Mutation::CasimirConstFlip => "so(2,1) Casimir constant -1/4 flipped to +1/4",
            Mutation::RungeLenzMuShift => "A1 reflection prefactor mu1 shifted by +1",
            Mutation::InvarianceScaleShift => "[A1,A2] reference scale 2/alpha^2 set to 3/alpha^2",
            Mutation::Su2KappaShift => "per-level scaling kappa shifted by +1",
            Mutation::EigenEnergyShift => "reference eigenvalue E shifted by +1",
            Mutation::SeparationShift => "separation constant m^2 shifted by +1",
        }
    }
}

fn residual_magnitude(expr: &FunctionExpr) -> Rational {
    expr.iter()
        .map(|(_, v)| v.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

fn clip(text: String) -> String {
    const MAX: usize = 160;
    if text.len() <= MAX {
        text
    } else {
        let mut cut = MAX;
        while !text.is_char_boundary(cut) {
            cut -= 1;
        }
        format!("{}...", &text[..cut])
    }
}

struct ExactFailure {
    relation: String,
    input: String,
    magnitude: Rational,
}

fn exact_report(
    name: &str,
    params: &ModelParams,
    failures: Vec<ExactFailure>,
    family: Option<FamilyDescriptor>,
    start: Instant,
) -> CheckReport {
    let residual = failures
        .iter()
        .map(|f| f.magnitude.clone())
        .max()
        .unwrap_or_else(Rational::zero);
    let witness = failures.first().map(|f| {
        clip(format!(
            "relation `{}` violated on input {}",
            f.relation, f.input
        ))
    });
    CheckReport {
        name: name.to_string(),
        params: params.clone(),
        status: if failures.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        exactness: Exactness::Exact,
        residual: ResidualValue::Exact(residual),
        tolerance: None,
        witness,
        family,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// Apply a list of named residual operators to every family member; any
/// nonzero output is a failure.
fn family_relation_check(
    name: &str,
    params: &ModelParams,
    relations: &[(String, OperatorExpr)],
    family: &TestFamily,
) -> CheckReport {
    let start = Instant::now();
    let outcomes = exec::map_ref(&family.functions, |f| {
        for (relation, op) in relations {
            let res = op.apply(f);
            if !res.is_zero() {
                return Some(ExactFailure {
                    relation: relation.clone(),
                    input: f.to_string(),
                    magnitude: residual_magnitude(&res),
                });
            }
        }
        None
    });
    let failures = outcomes.into_iter().flatten().collect();
    exact_report(name, params, failures, Some(family.descriptor), start)
}

/// so(2,1) brackets `[L0, L+-] = +-L+-` and `[L+, L-] = -2 L0`.
pub fn check_so21(
    params: &ModelParams,
    family: &TestFamily,
    mutation: Option<Mutation>,
) -> CheckReport {
    let mut l0 = params.l0();
    if mutation == Some(Mutation::So21ScaleL0) {
        l0 = l0.scale(Rational::from_int(2));
    }
    let lp = params.lplus();
    let lm = params.lminus();
    let relations = vec![
        (
            "[L0, L+] - L+".to_string(),
            commutator(&l0, &lp) - lp.clone(),
        ),
        (
            "[L0, L-] + L-".to_string(),
            commutator(&l0, &lm) + lm.clone(),
        ),
        (
            "[L+, L-] + 2 L0".to_string(),
            commutator(&lp, &lm) + l0.clone().scale(Rational::from_int(2)),
        ),
    ];
    family_relation_check("so21_brackets", params, &relations, family)
}

/// so(2,1) Casimir `L0^2 - (L+L- + L-L+)/2 = -Jcal^2 + (mu1 R1 + mu2 R2)^2
/// - 1/4`.
pub fn check_casimir(
    params: &ModelParams,
    family: &TestFamily,
    mutation: Option<Mutation>,
) -> CheckReport {
    let casimir = params.casimir_so21();
    let jcal = params.jcal();
    let refl_sum = OperatorExpr::from(Primitive::Refl1).scale(params.mu1().clone())
        + OperatorExpr::from(Primitive::Refl2).scale(params.mu2().clone());
    let constant = if mutation == Some(Mutation::CasimirConstFlip) {
        Rational::new(1, 4)
    } else {
        Rational::new(-1, 4)
    };
    let reference = -(jcal.clone() * jcal)
        + refl_sum.clone() * refl_sum
        + OperatorExpr::identity().scale(constant);
    let relations = vec![(
        "C - (-Jcal^2 + (mu1 R1 + mu2 R2)^2 - 1/4)".to_string(),
        casimir - reference,
    )];
    family_relation_check("casimir_so21_value", params, &relations, family)
}

fn mutated_a1(params: &ModelParams) -> OperatorExpr {
    let x1_over_r =
        OperatorExpr::from(Primitive::MulX1) * OperatorExpr::from(Primitive::MulRPow(-1));
    let shifted_mu = params.mu1() + &Rational::one();
    let refl_part = params.dunkl1() * OperatorExpr::from(Primitive::Refl1);
    let mixed = anticommutator(&params.jcal(), &params.dunkl2());
    x1_over_r
        + refl_part.scale(-(&shifted_mu / params.alpha()))
        + mixed.scale(-(Rational::one() / (params.alpha() + params.alpha())))
}

/// Conserved quantities: `A1`, `A2`, `Jcal`, `R1`, `R2` all commute with
/// the Hamiltonian.
pub fn check_constants_of_motion(
    params: &ModelParams,
    family: &TestFamily,
    mutation: Option<Mutation>,
) -> CheckReport {
    let h = params.hamiltonian();
    let a1 = if mutation == Some(Mutation::RungeLenzMuShift) {
        mutated_a1(params)
    } else {
        params.a1()
    };
    let relations = vec![
        ("[H, A1]".to_string(), commutator(&h, &a1)),
        ("[H, A2]".to_string(), commutator(&h, &params.a2())),
        ("[H, Jcal]".to_string(), commutator(&h, &params.jcal())),
        (
            "[H, R1]".to_string(),
            commutator(&h, &Primitive::Refl1.into()),
        ),
        (
            "[H, R2]".to_string(),
            commutator(&h, &Primitive::Refl2.into()),
        ),
    ];
    family_relation_check("constants_of_motion", params, &relations, family)
}

/// Structure relations of the invariance algebra generated by `A1`, `A2`,
/// `Jcal`, and the reflections, including the Casimir value
/// `Q = (2 mu1^2 + 2 mu2^2 + 1/2) H / alpha^2 + 1`.
pub fn check_invariance_algebra(
    params: &ModelParams,
    family: &TestFamily,
    mutation: Option<Mutation>,
) -> CheckReport {
    let h = params.hamiltonian();
    let a1 = params.a1();
    let a2 = params.a2();
    let jcal = params.jcal();
    let r1: OperatorExpr = Primitive::Refl1.into();
    let r2: OperatorExpr = Primitive::Refl2.into();
    let two = Rational::from_int(2);
    let bracket_scale = if mutation == Some(Mutation::InvarianceScaleShift) {
        Rational::from_int(3)
    } else {
        two.clone()
    } / params.alpha().pow(2);
    let one_plus = |mu: &Rational, r: &OperatorExpr| {
        OperatorExpr::identity() + r.clone().scale(&two * mu)
    };
    let relations = vec![
        (
            "[A1, A2] + (2/alpha^2) H Jcal".to_string(),
            commutator(&a1, &a2) + (h.clone() * jcal.clone()).scale(bracket_scale),
        ),
        (
            "[A1, Jcal] - A2 (1 + 2 mu1 R1)".to_string(),
            commutator(&a1, &jcal) - a2.clone() * one_plus(params.mu1(), &r1),
        ),
        (
            "[Jcal, A2] - A1 (1 + 2 mu2 R2)".to_string(),
            commutator(&jcal, &a2) - a1.clone() * one_plus(params.mu2(), &r2),
        ),
        ("{Jcal, R1}".to_string(), anticommutator(&jcal, &r1)),
        ("{Jcal, R2}".to_string(), anticommutator(&jcal, &r2)),
        ("{A1, R1}".to_string(), anticommutator(&a1, &r1)),
        ("[A1, R2]".to_string(), commutator(&a1, &r2)),
        ("{A2, R2}".to_string(), anticommutator(&a2, &r2)),
        ("[A2, R1]".to_string(), commutator(&a2, &r1)),
        ("[R1, R2]".to_string(), commutator(&r1, &r2)),
        (
            "Q - (2 mu1^2 + 2 mu2^2 + 1/2) H / alpha^2 - 1".to_string(),
            params.q_casimir()
                - h.clone().scale(
                    &(&(params.mu1().pow(2) + params.mu2().pow(2)) * &two
                        + Rational::new(1, 2))
                        / &params.alpha().pow(2),
                )
                - OperatorExpr::identity(),
        ),
    ];
    family_relation_check("invariance_algebra", params, &relations, family)
}

/// Per-level su(2) structure of the rescaled constants `kappa A1,
/// kappa A2, Jcal` on the level's exact eigenfunctions.
pub fn check_su2_deformation(
    params: &ModelParams,
    n_level: u32,
    mutation: Option<Mutation>,
) -> Result<CheckReport> {
    let start = Instant::now();
    let states = spectra::enumerate_level(n_level);
    let mut kappa = spectra::kappa(params, &states[0])?;
    if mutation == Some(Mutation::Su2KappaShift) {
        kappa = &kappa + &Rational::one();
    }
    let energy = spectra::energy(params, &states[0])?;
    let h = params.hamiltonian();
    let jcal = params.jcal();
    let j1 = params.a1().scale(kappa.clone());
    let j2 = params.a2().scale(kappa.clone());
    let two = Rational::from_int(2);
    let one_plus = |mu: &Rational, p: Primitive| {
        OperatorExpr::identity() + OperatorExpr::from(p).scale(&two * mu)
    };
    let relations = vec![
        (
            "H - E on the level".to_string(),
            h - OperatorExpr::identity().scale(energy),
        ),
        (
            "[kappa A1, kappa A2] - Jcal".to_string(),
            commutator(&j1, &j2) - jcal.clone(),
        ),
        (
            "[kappa A2, Jcal] + kappa A1 (1 + 2 mu2 R2)".to_string(),
            commutator(&j2, &jcal) + j1.clone() * one_plus(params.mu2(), Primitive::Refl2),
        ),
        (
            "[Jcal, kappa A1] + kappa A2 (1 + 2 mu1 R1)".to_string(),
            commutator(&jcal, &j1) + j2.clone() * one_plus(params.mu1(), Primitive::Refl1),
        ),
    ];
    let functions = states
        .iter()
        .map(|qn| wavefunction::full_wavefunction(params, qn))
        .collect::<Result<Vec<_>>>()?;
    let labeled: Vec<(QuantumNumbers, FunctionExpr)> =
        states.into_iter().zip(functions).collect();
    let outcomes = exec::map_ref(&labeled, |(qn, psi)| {
        for (relation, op) in &relations {
            let res = op.apply(psi);
            if !res.is_zero() {
                return Some(ExactFailure {
                    relation: relation.clone(),
                    input: format!("level-{n_level} state {qn:?}"),
                    magnitude: residual_magnitude(&res),
                });
            }
        }
        None
    });
    let failures = outcomes.into_iter().flatten().collect();
    Ok(exact_report(
        "su2_deformation",
        params,
        failures,
        None,
        start,
    ))
}

fn states_up_to(l_max: u32, two_n_max: u32) -> Vec<QuantumNumbers> {
    let mut out = Vec::new();
    for two_n in 0..=two_n_max {
        for n_level in two_n..=two_n + l_max {
            for qn in spectra::enumerate_level(n_level) {
                if qn.two_n() == two_n && qn.l() <= l_max {
                    out.push(qn);
                }
            }
        }
    }
    out.sort_by_key(|q| (q.l(), q.two_n(), q.e1(), q.e2()));
    out.dedup();
    out
}

/// Exact eigenvalue equation `H psi = E psi` for every state in the block
/// `l <= l_max`, `two_n <= two_n_max`.
pub fn check_eigenfunctions(
    params: &ModelParams,
    l_max: u32,
    two_n_max: u32,
    mutation: Option<Mutation>,
) -> Result<CheckReport> {
    let start = Instant::now();
    let h = params.hamiltonian();
    let states = states_up_to(l_max, two_n_max);
    let prepared = states
        .iter()
        .map(|qn| {
            let psi = wavefunction::full_wavefunction(params, qn)?;
            let mut e = spectra::energy(params, qn)?;
            if mutation == Some(Mutation::EigenEnergyShift) {
                e = &e + &Rational::one();
            }
            Ok((*qn, psi, e))
        })
        .collect::<Result<Vec<_>>>()?;
    let outcomes = exec::map_ref(&prepared, |(qn, psi, e)| {
        let res = &h.apply(psi) - &psi.scale(e);
        if res.is_zero() {
            None
        } else {
            Some(ExactFailure {
                relation: "H psi - E psi".to_string(),
                input: format!("{qn:?}"),
                magnitude: residual_magnitude(&res),
            })
        }
    });
    let failures = outcomes.into_iter().flatten().collect();
    Ok(exact_report(
        "hamiltonian_eigenfunctions",
        params,
        failures,
        None,
        start,
    ))
}

/// Exact angular separation: each harmonic is a `Jcal^2` eigenfunction with
/// the sector eigenvalue.
pub fn check_separation_angular(
    params: &ModelParams,
    two_n_max: u32,
    mutation: Option<Mutation>,
) -> Result<CheckReport> {
    let start = Instant::now();
    let jcal = params.jcal();
    let mut items = Vec::new();
    for two_n in 0..=two_n_max {
        for qn in spectra::enumerate_level(two_n) {
            if qn.l() != 0 {
                continue;
            }
            let h = wavefunction::angular_harmonic(params, &qn)?;
            let mut j3_sq = spectra::j3_eigenvalue_squared(params, &qn);
            if mutation == Some(Mutation::SeparationShift) {
                j3_sq = &j3_sq + &Rational::one();
            }
            items.push((qn, h, j3_sq));
        }
    }
    let outcomes = exec::map_ref(&items, |(qn, h, j3_sq)| {
        let res = &jcal.apply(&jcal.apply(h)) + &h.scale(j3_sq);
        if res.is_zero() {
            None
        } else {
            Some(ExactFailure {
                relation: "Jcal^2 h + J3^2 h".to_string(),
                input: format!("{qn:?}"),
                magnitude: residual_magnitude(&res),
            })
        }
    });
    let failures = outcomes.into_iter().flatten().collect();
    Ok(exact_report(
        "separation_angular",
        params,
        failures,
        None,
        start,
    ))
}

const RADIAL_GRID_POINTS: usize = 64;
const RADIAL_GRID_LO: f64 = 0.1;
const RADIAL_GRID_HI: f64 = 20.0;
const RADIAL_FD_STEP: f64 = 1e-3;
/// Residual bound for the finite-difference probe of the radial equation;
/// generous against the `O(h^4)` differencing error, far below any genuine
/// term defect.
pub const RADIAL_ODE_TOLERANCE: f64 = 1e-5;

/// Float check of the radial equation
/// `-R''/2 - (1 + 2 mu1 + 2 mu2) R' / (2r) + m^2 R / (2 r^2) + alpha R / r
/// = E R` by central differences on a log grid.
pub fn check_separation_radial(
    params: &ModelParams,
    l_max: u32,
    two_n_max: u32,
    mutation: Option<Mutation>,
) -> Result<CheckReport> {
    let start = Instant::now();
    let gamma = params.mu_sum().to_f64();
    let alpha = params.alpha().to_f64();
    let mut states = states_up_to(l_max, two_n_max);
    states.dedup_by_key(|q| (q.l(), q.two_n()));
    let mut prepared = Vec::new();
    for qn in states {
        let radial = wavefunction::radial_factor(params, &qn)?;
        let e = spectra::energy(params, &qn)?.to_f64();
        let mut m_sq = spectra::separation_constant(params, &qn);
        if mutation == Some(Mutation::SeparationShift) {
            m_sq = &m_sq + &Rational::one();
        }
        prepared.push((qn, radial, e, m_sq.to_f64()));
    }
    let ratios = exec::map_ref(&prepared, |(qn, radial, e, m_sq)| {
        let eval = |r: f64| radial.evaluate(r, 0.0).expect("positive radius");
        let mut worst: (f64, f64) = (0.0, RADIAL_GRID_LO);
        for i in 0..RADIAL_GRID_POINTS {
            let frac = i as f64 / (RADIAL_GRID_POINTS - 1) as f64;
            let r = RADIAL_GRID_LO * (RADIAL_GRID_HI / RADIAL_GRID_LO).powf(frac);
            let h = RADIAL_FD_STEP;
            let f0 = eval(r);
            let fp = eval(r + h);
            let fm = eval(r - h);
            let fp2 = eval(r + 2.0 * h);
            let fm2 = eval(r - 2.0 * h);
            let d1 = (fm2 - 8.0 * fm + 8.0 * fp - fp2) / (12.0 * h);
            let d2 = (-fm2 + 16.0 * fm - 30.0 * f0 + 16.0 * fp - fp2) / (12.0 * h * h);
            let terms = [
                -0.5 * d2,
                -(1.0 + 2.0 * gamma) / (2.0 * r) * d1,
                m_sq / (2.0 * r * r) * f0,
                alpha / r * f0,
                -e * f0,
            ];
            let residual: f64 = terms.iter().sum();
            let scale = terms.iter().fold(0.0f64, |acc, t| acc.max(t.abs()));
            let ratio = residual.abs() / scale.max(f64::MIN_POSITIVE);
            if ratio > worst.0 {
                worst = (ratio, r);
            }
        }
        (*qn, worst)
    });
    let mut max_ratio = 0.0f64;
    let mut witness = None;
    for (qn, (ratio, r)) in &ratios {
        if *ratio > max_ratio {
            max_ratio = *ratio;
            if *ratio > RADIAL_ODE_TOLERANCE {
                witness = Some(format!(
                    "radial equation residual {ratio:.3e} at r = {r:.4} for {qn:?}"
                ));
            }
        }
    }
    Ok(CheckReport {
        name: "separation_radial".to_string(),
        params: params.clone(),
        status: if max_ratio <= RADIAL_ODE_TOLERANCE {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        exactness: Exactness::Float,
        residual: ResidualValue::Float(max_ratio),
        tolerance: Some(RADIAL_ODE_TOLERANCE),
        witness,
        family: None,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Tolerance for the quadrature-based orthonormality check.
pub const ORTHONORMALITY_TOLERANCE: f64 = 1e-8;

/// Float check: the normalized bound states of all levels up to
/// `max_level` form an orthonormal set under the weighted inner product.
pub fn check_orthonormality(
    params: &ModelParams,
    max_level: u32,
    quad_order: Option<usize>,
) -> Result<CheckReport> {
    let start = Instant::now();
    let mut states = Vec::new();
    for n_level in 0..=max_level {
        states.extend(spectra::enumerate_level(n_level));
    }
    let functions = states
        .iter()
        .map(|qn| wavefunction::full_wavefunction(params, qn))
        .collect::<Result<Vec<_>>>()?;
    let norms = states
        .iter()
        .map(|qn| wavefunction::norm_constant(params, qn))
        .collect::<Result<Vec<f64>>>()?;
    let gram = wavefunction::gram_full(params, &functions, quad_order)?;
    let mut max_dev = 0.0f64;
    let mut witness = None;
    for i in 0..states.len() {
        for j in 0..states.len() {
            let val = gram[i][j] * norms[i] * norms[j];
            let expect = if i == j { 1.0 } else { 0.0 };
            let dev = (val - expect).abs();
            if dev > max_dev {
                max_dev = dev;
                if dev > ORTHONORMALITY_TOLERANCE {
                    witness = Some(format!(
                        "<{:?}, {:?}> = {val}, expected {expect}",
                        states[i], states[j]
                    ));
                }
            }
        }
    }
    Ok(CheckReport {
        name: "orthonormality".to_string(),
        params: params.clone(),
        status: if max_dev <= ORTHONORMALITY_TOLERANCE {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        exactness: Exactness::Float,
        residual: ResidualValue::Float(max_dev),
        tolerance: Some(ORTHONORMALITY_TOLERANCE),
        witness,
        family: None,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Suite configuration; the defaults match the CLI's.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Substring filter on check names.
    pub filter: Option<String>,
    pub mutation: Option<Mutation>,
    pub l_max: u32,
    pub two_n_max: u32,
    pub su2_level: u32,
    pub gram_level: u32,
    pub quad_order: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            filter: None,
            mutation: None,
            l_max: 3,
            two_n_max: 4,
            su2_level: 2,
            gram_level: 2,
            quad_order: None,
        }
    }
}

/// Run every check for every parameter set; reports arrive in a fixed
/// order and, apart from timings, are deterministic for a given seed.
pub fn run_suite(params_list: &[ModelParams], config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let family = TestFamily::default_family(config.seed);
    let selected =
        |name: &str| config.filter.as_deref().is_none_or(|f| name.contains(f));
    let mut reports = Vec::new();
    for params in params_list {
        let m = config.mutation;
        if selected("so21_brackets") {
            reports.push(check_so21(params, &family, m));
        }
        if selected("casimir_so21_value") {
            reports.push(check_casimir(params, &family, m));
        }
        if selected("constants_of_motion") {
            reports.push(check_constants_of_motion(params, &family, m));
        }
        if selected("invariance_algebra") {
            reports.push(check_invariance_algebra(params, &family, m));
        }
        if selected("su2_deformation") {
            reports.push(check_su2_deformation(params, config.su2_level, m)?);
        }
        if selected("hamiltonian_eigenfunctions") {
            reports.push(check_eigenfunctions(params, config.l_max, config.two_n_max, m)?);
        }
        if selected("separation_angular") {
            reports.push(check_separation_angular(params, config.two_n_max, m)?);
        }
        if selected("separation_radial") {
            reports.push(check_separation_radial(params, config.l_max, config.two_n_max, m)?);
        }
        if selected("orthonormality") {
            reports.push(check_orthonormality(params, config.gram_level, config.quad_order)?);
        }
    }
    Ok(reports)
}

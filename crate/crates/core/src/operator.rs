//! Dunkl operators and the model's symmetry-operator catalogue.
//!
//! Operators are expression trees over nine primitives, each of which maps
//! the canonical function class into itself exactly. The Dunkl derivative
//! along axis `i` is
//!
//! ```text
//!     D_i = d/dx_i + mu_i * (1 - R_i) / x_i
//! ```
//!
//! where `R_i` reflects coordinate `i`. The difference part `(1 - R_i)/x_i`
//! is a single fused primitive: `1 - R_i` kills the even part of a term, and
//! what survives is odd in `x_i`, so the division is exact.
//!
//! The catalogue covers the Hamiltonian `H = -1/2 (D1^2 + D2^2) + alpha/r`,
//! the so(2,1) generators built from the Euler operator and `r`, the angular
//! operator `Jcal = x1 D2 - x2 D1`, and the two Runge-Lenz-type constants of
//! motion `A1`, `A2` with their Casimir `Q`.
//!
//! The usual angular momentum is `J3 = -i Jcal`; since the class has no
//! complex scalars, every statement about `J3^2` is phrased here through
//! `J3^2 = -Jcal^2`, which needs no imaginary unit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::term::{Axis, FunctionExpr, RawTerm, TermKey};

/// Atomic operators on the canonical class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primitive {
    PartialX1,
    PartialX2,
    /// `f -> (f - R1 f) / x1`
    ReflDiff1,
    /// `f -> (f - R2 f) / x2`
    ReflDiff2,
    Refl1,
    Refl2,
    MulX1,
    MulX2,
    MulRPow(i32),
}

/// Operator expression tree. An empty [`OperatorExpr::Compose`] is the
/// identity, an empty [`OperatorExpr::Sum`] is the zero operator, and
/// composition applies right to left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorExpr {
    Primitive(Primitive),
    Scale(Rational, Box<OperatorExpr>),
    Sum(Vec<OperatorExpr>),
    Compose(Vec<OperatorExpr>),
}

impl From<Primitive> for OperatorExpr {
    fn from(p: Primitive) -> Self {
        OperatorExpr::Primitive(p)
    }
}

impl OperatorExpr {
    pub fn identity() -> Self {
        OperatorExpr::Compose(Vec::new())
    }

    pub fn zero() -> Self {
        OperatorExpr::Sum(Vec::new())
    }

    pub fn scale(self, factor: Rational) -> Self {
        OperatorExpr::Scale(factor, Box::new(self))
    }

    pub fn apply(&self, f: &FunctionExpr) -> FunctionExpr {
        match self {
            OperatorExpr::Primitive(p) => apply_primitive(*p, f),
            OperatorExpr::Scale(c, inner) => inner.apply(f).scale(c),
            OperatorExpr::Sum(parts) => parts
                .iter()
                .fold(FunctionExpr::zero(), |acc, op| &acc + &op.apply(f)),
            OperatorExpr::Compose(parts) => parts
                .iter()
                .rev()
                .fold(f.clone(), |g, op| op.apply(&g)),
        }
    }
}

impl std::ops::Add for OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: OperatorExpr) -> OperatorExpr {
        OperatorExpr::Sum(vec![self, rhs])
    }
}

impl std::ops::Sub for OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: OperatorExpr) -> OperatorExpr {
        OperatorExpr::Sum(vec![self, -rhs])
    }
}

impl std::ops::Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.scale(Rational::from_int(-1))
    }
}

impl std::ops::Mul for OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: OperatorExpr) -> OperatorExpr {
        OperatorExpr::Compose(vec![self, rhs])
    }
}

pub fn commutator(a: &OperatorExpr, b: &OperatorExpr) -> OperatorExpr {
    a.clone() * b.clone() - b.clone() * a.clone()
}

pub fn anticommutator(a: &OperatorExpr, b: &OperatorExpr) -> OperatorExpr {
    a.clone() * b.clone() + b.clone() * a.clone()
}

fn apply_primitive(p: Primitive, f: &FunctionExpr) -> FunctionExpr {
    let mut raw = Vec::with_capacity(3 * f.len());
    for (k, v) in f.iter() {
        emit_primitive(p, k, v, &mut raw);
    }
    FunctionExpr::from_raw_terms_unchecked(raw)
}

fn emit_primitive(p: Primitive, k: &TermKey, v: &Rational, out: &mut Vec<RawTerm>) {
    let term = |coeff: Rational, a: u32, b: u32, c: i32| RawTerm {
        coeff,
        a,
        b,
        c,
        s: k.s.clone(),
    };
    let b0 = k.eps as u32;
    match p {
        Primitive::PartialX1 => {
            if k.a > 0 {
                out.push(term(v * &Rational::from_int(k.a as i64), k.a - 1, b0, k.c));
            }
            if k.c != 0 {
                out.push(term(v * &Rational::from_int(k.c as i64), k.a + 1, b0, k.c - 2));
            }
            if !k.s.is_zero() {
                out.push(term(-(v * &k.s), k.a + 1, b0, k.c - 1));
            }
        }
        Primitive::PartialX2 => {
            if k.eps == 1 {
                out.push(term(v.clone(), k.a, 0, k.c));
            }
            if k.c != 0 {
                out.push(term(v * &Rational::from_int(k.c as i64), k.a, b0 + 1, k.c - 2));
            }
            if !k.s.is_zero() {
                out.push(term(-(v * &k.s), k.a, b0 + 1, k.c - 1));
            }
        }
        Primitive::ReflDiff1 => {
            if k.a % 2 == 1 {
                out.push(term(v * &Rational::from_int(2), k.a - 1, b0, k.c));
            }
        }
        Primitive::ReflDiff2 => {
            if k.eps == 1 {
                out.push(term(v * &Rational::from_int(2), k.a, 0, k.c));
            }
        }
        Primitive::Refl1 | Primitive::Refl2 => {
            let axis = if p == Primitive::Refl1 { Axis::X1 } else { Axis::X2 };
            let flip = match axis {
                Axis::X1 => k.a % 2 == 1,
                Axis::X2 => k.eps == 1,
            };
            out.push(term(if flip { -v } else { v.clone() }, k.a, b0, k.c));
        }
        Primitive::MulX1 => out.push(term(v.clone(), k.a + 1, b0, k.c)),
        Primitive::MulX2 => out.push(term(v.clone(), k.a, b0 + 1, k.c)),
        Primitive::MulRPow(j) => out.push(term(v.clone(), k.a, b0, k.c + j)),
    }
}

/// Model parameters: reflection couplings `mu1, mu2 > -1/2` and a nonzero
/// Coulomb coupling `alpha` (bound states additionally need `alpha < 0`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelParams {
    mu1: Rational,
    mu2: Rational,
    alpha: Rational,
}

impl ModelParams {
    pub fn new(mu1: Rational, mu2: Rational, alpha: Rational) -> Result<Self> {
        let half = Rational::new(1, 2);
        for (name, mu) in [("mu1", &mu1), ("mu2", &mu2)] {
            let shifted = mu + &half;
            if shifted.is_zero() || shifted.is_negative() {
                return Err(Error::ParamOutOfRange {
                    name,
                    value: mu.to_string(),
                    reason: "must exceed -1/2",
                });
            }
        }
        if alpha.is_zero() {
            return Err(Error::ParamOutOfRange {
                name: "alpha",
                value: alpha.to_string(),
                reason: "must be nonzero",
            });
        }
        Ok(ModelParams { mu1, mu2, alpha })
    }

    pub fn mu1(&self) -> &Rational {
        &self.mu1
    }

    pub fn mu2(&self) -> &Rational {
        &self.mu2
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn mu_sum(&self) -> Rational {
        &self.mu1 + &self.mu2
    }

    pub fn require_bound(&self) -> Result<()> {
        if self.alpha.is_negative() {
            Ok(())
        } else {
            Err(Error::NotBoundState {
                alpha: self.alpha.to_string(),
            })
        }
    }

    pub fn dunkl1(&self) -> OperatorExpr {
        OperatorExpr::from(Primitive::PartialX1)
            + OperatorExpr::from(Primitive::ReflDiff1).scale(self.mu1.clone())
    }

    pub fn dunkl2(&self) -> OperatorExpr {
        OperatorExpr::from(Primitive::PartialX2)
            + OperatorExpr::from(Primitive::ReflDiff2).scale(self.mu2.clone())
    }

    /// Dunkl Laplacian `D1^2 + D2^2`.
    pub fn laplacian(&self) -> OperatorExpr {
        let d1 = self.dunkl1();
        let d2 = self.dunkl2();
        d1.clone() * d1 + d2.clone() * d2
    }

    /// `H = -1/2 (D1^2 + D2^2) + alpha / r`.
    pub fn hamiltonian(&self) -> OperatorExpr {
        self.laplacian().scale(Rational::new(-1, 2))
            + OperatorExpr::from(Primitive::MulRPow(-1)).scale(self.alpha.clone())
    }

    /// Euler (dilation) operator `x1 d1 + x2 d2 + mu1 + mu2 + 1/2`.
    pub fn dilation(&self) -> OperatorExpr {
        let shift = &self.mu_sum() + &Rational::new(1, 2);
        OperatorExpr::from(Primitive::MulX1) * OperatorExpr::from(Primitive::PartialX1)
            + OperatorExpr::from(Primitive::MulX2) * OperatorExpr::from(Primitive::PartialX2)
            + OperatorExpr::identity().scale(shift)
    }

    fn r_times_laplacian(&self) -> OperatorExpr {
        OperatorExpr::from(Primitive::MulRPow(1)) * self.laplacian()
    }

    pub fn l0(&self) -> OperatorExpr {
        -self.r_times_laplacian()
            + OperatorExpr::from(Primitive::MulRPow(1)).scale(Rational::new(1, 4))
    }

    pub fn lplus(&self) -> OperatorExpr {
        -self.r_times_laplacian()
            - OperatorExpr::from(Primitive::MulRPow(1)).scale(Rational::new(1, 4))
            + self.dilation()
    }

    pub fn lminus(&self) -> OperatorExpr {
        -self.r_times_laplacian()
            - OperatorExpr::from(Primitive::MulRPow(1)).scale(Rational::new(1, 4))
            - self.dilation()
    }

    /// so(2,1) Casimir `L0^2 - (L+ L- + L- L+) / 2`.
    pub fn casimir_so21(&self) -> OperatorExpr {
        let l0 = self.l0();
        l0.clone() * l0
            + anticommutator(&self.lplus(), &self.lminus()).scale(Rational::new(-1, 2))
    }

    /// Angular operator `Jcal = x1 D2 - x2 D1`; the hermitian angular
    /// momentum is `J3 = -i Jcal`.
    pub fn jcal(&self) -> OperatorExpr {
        OperatorExpr::from(Primitive::MulX1) * self.dunkl2()
            - OperatorExpr::from(Primitive::MulX2) * self.dunkl1()
    }

    /// First Runge-Lenz component
    /// `A1 = x1/r - (mu1/alpha) D1 R1 - {Jcal, D2} / (2 alpha)`.
    pub fn a1(&self) -> OperatorExpr {
        let x1_over_r =
            OperatorExpr::from(Primitive::MulX1) * OperatorExpr::from(Primitive::MulRPow(-1));
        let refl_part = self.dunkl1() * OperatorExpr::from(Primitive::Refl1);
        let mixed = anticommutator(&self.jcal(), &self.dunkl2());
        x1_over_r
            + refl_part.scale(-(&self.mu1 / &self.alpha))
            + mixed.scale(-(Rational::one() / (&self.alpha + &self.alpha)))
    }

    /// Second Runge-Lenz component
    /// `A2 = x2/r - (mu2/alpha) D2 R2 + {Jcal, D1} / (2 alpha)`.
    pub fn a2(&self) -> OperatorExpr {
        let x2_over_r =
            OperatorExpr::from(Primitive::MulX2) * OperatorExpr::from(Primitive::MulRPow(-1));
        let refl_part = self.dunkl2() * OperatorExpr::from(Primitive::Refl2);
        let mixed = anticommutator(&self.jcal(), &self.dunkl1());
        x2_over_r
            + refl_part.scale(-(&self.mu2 / &self.alpha))
            + mixed.scale(Rational::one() / (&self.alpha + &self.alpha))
    }

    /// Runge-Lenz Casimir
    /// `Q = A1^2 + A2^2 + (2H/alpha^2) Jcal^2
    ///      - (2H/alpha^2)(mu1 R1 + mu2 R2 + 2 mu1 mu2 R1 R2)`.
    pub fn q_casimir(&self) -> OperatorExpr {
        let a1 = self.a1();
        let a2 = self.a2();
        let jcal = self.jcal();
        let two_over_alpha_sq = Rational::from_int(2) / self.alpha.pow(2);
        let refl_comb = OperatorExpr::from(Primitive::Refl1).scale(self.mu1.clone())
            + OperatorExpr::from(Primitive::Refl2).scale(self.mu2.clone())
            + (OperatorExpr::from(Primitive::Refl1) * OperatorExpr::from(Primitive::Refl2))
                .scale(&(&self.mu1 * &self.mu2) * &Rational::from_int(2));
        a1.clone() * a1
            + a2.clone() * a2
            + (self.hamiltonian() * (jcal.clone() * jcal)).scale(two_over_alpha_sq.clone())
            + (self.hamiltonian() * refl_comb).scale(-two_over_alpha_sq)
    }
}

/// Look up a catalogue operator by name.
pub fn named_operator(name: &str, params: &ModelParams) -> Result<OperatorExpr> {
    Ok(match name {
        "laplacian" => params.laplacian(),
        "hamiltonian" => params.hamiltonian(),
        "dilation" => params.dilation(),
        "L0" => params.l0(),
        "Lplus" => params.lplus(),
        "Lminus" => params.lminus(),
        "casimir_so21" => params.casimir_so21(),
        "Jcal" => params.jcal(),
        "A1" => params.a1(),
        "A2" => params.a2(),
        "Q" => params.q_casimir(),
        "Refl1" => Primitive::Refl1.into(),
        "Refl2" => Primitive::Refl2.into(),
        _ => return Err(Error::UnknownOperator(name.to_string())),
    })
}

/// Names accepted by [`named_operator`].
pub const OPERATOR_NAMES: [&str; 13] = [
    "laplacian",
    "hamiltonian",
    "dilation",
    "L0",
    "Lplus",
    "Lminus",
    "casimir_so21",
    "Jcal",
    "A1",
    "A2",
    "Q",
    "Refl1",
    "Refl2",
];

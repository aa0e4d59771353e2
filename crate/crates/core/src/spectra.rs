//! Quantum numbers, exact bound-state energies, and level enumeration.
//!
//! A bound state is labeled by `(l, two_n, e1, e2)`: radial excitation `l`,
//! doubled angular index `two_n = 2n` (so half-integer `n` stays integral),
//! and parity labels `e1, e2` picking the reflection sector. Valid labels
//! satisfy `e_i in {0, 1}`, `two_n >= e1 + e2`, and `two_n = e1 + e2
//! (mod 2)`: integer `n` lives in the even sector `R1 R2 = +1` with
//! `(e1, e2) = (0,0)` or `(1,1)`, half-integer `n` in the odd sector with
//! `(1,0)` or `(0,1)`.
//!
//! The principal quantity is
//!
//! ```text
//!     kappa = l + 2n + mu1 + mu2 + 1/2,
//! ```
//!
//! giving `E = -alpha^2 / (2 kappa^2)` and decay rate `beta = 2|alpha| /
//! kappa`. All of these are exact rationals for rational parameters. Energy
//! depends on the label only through `N = l + 2n`, so level `N` is
//! `(2N + 1)`-fold degenerate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::ModelParams;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    l: u32,
    two_n: u32,
    e1: u8,
    e2: u8,
}

impl QuantumNumbers {
    pub fn new(l: u32, two_n: u32, e1: u8, e2: u8) -> Result<Self> {
        let invalid = |reason| Error::InvalidQuantumNumbers {
            l,
            two_n,
            e1,
            e2,
            reason,
        };
        if e1 > 1 || e2 > 1 {
            return Err(invalid("parity labels must be 0 or 1"));
        }
        if two_n % 2 != u32::from(e1 + e2) % 2 {
            return Err(invalid("two_n and e1 + e2 must have equal parity"));
        }
        if two_n < u32::from(e1 + e2) {
            return Err(invalid("two_n must be at least e1 + e2"));
        }
        Ok(QuantumNumbers { l, two_n, e1, e2 })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn two_n(&self) -> u32 {
        self.two_n
    }

    pub fn e1(&self) -> u8 {
        self.e1
    }

    pub fn e2(&self) -> u8 {
        self.e2
    }

    /// Level `N = l + 2n`; the energy depends only on this.
    pub fn level(&self) -> u32 {
        self.l + self.two_n
    }

    /// Jacobi index `k = n - (e1 + e2)/2`, always a nonnegative integer.
    pub fn jacobi_index(&self) -> u32 {
        (self.two_n - u32::from(self.e1 + self.e2)) / 2
    }

    /// True in the even reflection sector `R1 R2 = +1`.
    pub fn even_sector(&self) -> bool {
        self.two_n.is_multiple_of(2)
    }
}

/// `kappa = l + 2n + mu1 + mu2 + 1/2`, also the `L0` eigenvalue of the
/// state. Errors when the parameters push it to zero or below.
pub fn kappa(params: &ModelParams, qn: &QuantumNumbers) -> Result<Rational> {
    let k = &(&Rational::from_int(i64::from(qn.level())) + &params.mu_sum())
        + &Rational::new(1, 2);
    if k.is_zero() || k.is_negative() {
        return Err(Error::ParamOutOfRange {
            name: "kappa",
            value: k.to_string(),
            reason: "l + 2n + mu1 + mu2 + 1/2 must be positive",
        });
    }
    Ok(k)
}

pub fn l0_eigenvalue(params: &ModelParams, qn: &QuantumNumbers) -> Result<Rational> {
    kappa(params, qn)
}

/// Exact bound-state energy `E = -alpha^2 / (2 kappa^2)`.
pub fn energy(params: &ModelParams, qn: &QuantumNumbers) -> Result<Rational> {
    params.require_bound()?;
    let k = kappa(params, qn)?;
    Ok(-(params.alpha().pow(2) / (&k.pow(2) * &Rational::from_int(2))))
}

/// Exponential decay rate `beta = 2 |alpha| / kappa = sqrt(-8E)`.
pub fn beta(params: &ModelParams, qn: &QuantumNumbers) -> Result<Rational> {
    params.require_bound()?;
    let k = kappa(params, qn)?;
    Ok(&(params.alpha().abs()) * &Rational::from_int(2) / k)
}

/// Separation constant `m^2 = 4n(n + mu1 + mu2)` splitting the angular and
/// radial equations; identical in both reflection sectors.
pub fn separation_constant(params: &ModelParams, qn: &QuantumNumbers) -> Rational {
    let t = Rational::from_int(i64::from(qn.two_n()));
    let gamma2 = &params.mu_sum() * &Rational::from_int(2);
    &t * &(&t + &gamma2)
}

/// Eigenvalue of `J3^2 = -Jcal^2` on the state's angular factor:
/// `4n(n + mu1 + mu2)` in the even sector, `4(n + mu1)(n + mu2)` in the odd
/// sector (the separation constant shifted by `4 mu1 mu2`).
pub fn j3_eigenvalue_squared(params: &ModelParams, qn: &QuantumNumbers) -> Rational {
    let m_sq = separation_constant(params, qn);
    if qn.even_sector() {
        m_sq
    } else {
        let shift = &(params.mu1() * params.mu2()) * &Rational::from_int(4);
        &m_sq + &shift
    }
}

/// All labels of level `N`, ordered by ascending `two_n`, even sector
/// `(0,0)` before `(1,1)`, odd sector `(1,0)` before `(0,1)`.
pub fn enumerate_level(n_level: u32) -> Vec<QuantumNumbers> {
    let mut out = Vec::with_capacity(2 * n_level as usize + 1);
    for two_n in 0..=n_level {
        let l = n_level - two_n;
        let sectors: &[(u8, u8)] = if two_n % 2 == 0 {
            if two_n >= 2 {
                &[(0, 0), (1, 1)]
            } else {
                &[(0, 0)]
            }
        } else {
            &[(1, 0), (0, 1)]
        };
        for &(e1, e2) in sectors {
            out.push(QuantumNumbers::new(l, two_n, e1, e2).expect("sector table is valid"));
        }
    }
    out
}

/// One row of the spectrum table, ready for serialization; exact values are
/// rendered as `p/q` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub l: u32,
    pub two_n: u32,
    pub e1: u8,
    pub e2: u8,
    pub kappa: Rational,
    pub energy: Rational,
    pub beta: Rational,
    pub j3_sq: Rational,
}

/// Spectrum rows for all levels `N <= max_level`, level by level.
pub fn spectrum_records(params: &ModelParams, max_level: u32) -> Result<Vec<SpectrumRecord>> {
    params.require_bound()?;
    let mut rows = Vec::new();
    for n_level in 0..=max_level {
        for qn in enumerate_level(n_level) {
            rows.push(SpectrumRecord {
                l: qn.l(),
                two_n: qn.two_n(),
                e1: qn.e1(),
                e2: qn.e2(),
                kappa: kappa(params, &qn)?,
                energy: energy(params, &qn)?,
                beta: beta(params, &qn)?,
                j3_sq: j3_eigenvalue_squared(params, &qn),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn params(mu1: (i64, i64), mu2: (i64, i64), alpha: i64) -> ModelParams {
        ModelParams::new(rat(mu1.0, mu1.1), rat(mu2.0, mu2.1), Rational::from_int(alpha)).unwrap()
    }

    #[test]
    fn label_validation() {
        assert!(QuantumNumbers::new(0, 0, 0, 0).is_ok());
        assert!(QuantumNumbers::new(3, 1, 1, 0).is_ok());
        assert!(QuantumNumbers::new(0, 2, 1, 1).is_ok());
        assert!(QuantumNumbers::new(0, 0, 2, 0).is_err());
        assert!(QuantumNumbers::new(0, 1, 0, 0).is_err());
        assert!(QuantumNumbers::new(0, 2, 1, 0).is_err());
        assert!(QuantumNumbers::new(0, 0, 1, 1).is_err());
    }

    #[test]
    fn kappa_and_energy_values() {
        let p = params((1, 4), (3, 4), -1);
        let qn = QuantumNumbers::new(2, 2, 0, 0).unwrap();
        assert_eq!(kappa(&p, &qn).unwrap(), rat(11, 2));
        assert_eq!(energy(&p, &qn).unwrap(), rat(-2, 121));

        let heavy = params((1, 1), (2, 1), -1);
        let qn = QuantumNumbers::new(1, 1, 1, 0).unwrap();
        assert_eq!(kappa(&heavy, &qn).unwrap(), rat(11, 2));
        assert_eq!(energy(&heavy, &qn).unwrap(), rat(-2, 121));
        assert_eq!(beta(&heavy, &qn).unwrap(), rat(4, 11));
    }

    #[test]
    fn free_case_energies() {
        let p = params((0, 1), (0, 1), -1);
        for n_level in 0..6u32 {
            for qn in enumerate_level(n_level) {
                let k = rat(2 * i64::from(n_level) + 1, 2);
                assert_eq!(kappa(&p, &qn).unwrap(), k);
                assert_eq!(
                    energy(&p, &qn).unwrap(),
                    -(Rational::one() / (&k.pow(2) * &rat(2, 1)))
                );
            }
        }
    }

    #[test]
    fn repulsive_coupling_has_no_bound_states() {
        let p = params((0, 1), (0, 1), 1);
        let qn = QuantumNumbers::new(0, 0, 0, 0).unwrap();
        assert!(matches!(energy(&p, &qn), Err(Error::NotBoundState { .. })));
    }

    #[test]
    fn nonpositive_kappa_rejected() {
        let p = params((-1, 4), (-1, 4), -1);
        let qn = QuantumNumbers::new(0, 0, 0, 0).unwrap();
        assert!(kappa(&p, &qn).is_err());
        let qn = QuantumNumbers::new(1, 0, 0, 0).unwrap();
        assert_eq!(kappa(&p, &qn).unwrap(), Rational::one());
    }

    #[test]
    fn level_degeneracy_is_2n_plus_1() {
        for n_level in 0..8u32 {
            let states = enumerate_level(n_level);
            assert_eq!(states.len(), 2 * n_level as usize + 1);
            assert!(states.iter().all(|qn| qn.level() == n_level));
        }
        let level2 = enumerate_level(2);
        let labels: Vec<_> = level2
            .iter()
            .map(|q| (q.l(), q.two_n(), q.e1(), q.e2()))
            .collect();
        assert_eq!(
            labels,
            vec![(2, 0, 0, 0), (1, 1, 1, 0), (1, 1, 0, 1), (0, 2, 0, 0), (0, 2, 1, 1)]
        );
    }

    #[test]
    fn j3_eigenvalues_by_sector() {
        let p = params((1, 4), (3, 4), -1);
        let even = QuantumNumbers::new(0, 2, 0, 0).unwrap();
        assert_eq!(j3_eigenvalue_squared(&p, &even), rat(8, 1));
        let odd = QuantumNumbers::new(0, 1, 1, 0).unwrap();
        assert_eq!(j3_eigenvalue_squared(&p, &odd), rat(15, 4));

        let free = params((0, 1), (0, 1), -1);
        for qn in enumerate_level(4) {
            let t = i64::from(qn.two_n());
            assert_eq!(j3_eigenvalue_squared(&free, &qn), Rational::from_int(t * t));
        }
    }

    #[test]
    fn spectrum_rows_round_trip() {
        let p = params((1, 4), (3, 4), -1);
        let rows = spectrum_records(&p, 2).unwrap();
        assert_eq!(rows.len(), 1 + 3 + 5);
        let text = serde_json::to_string(&rows).unwrap();
        let back: Vec<SpectrumRecord> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rows);
    }
}

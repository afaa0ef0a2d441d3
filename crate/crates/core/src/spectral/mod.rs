//! Closed-form spectral functions M(z) = Σ m_ν z^ν and their asymptotics.

mod series;

use std::f64::consts::PI;
use std::fmt;

pub use series::{counting_function, expand_series, join_series, weyl_counting, SpectralSeries, Term};

use crate::domain::{BoundaryCondition, DomainExpr, NamedDomain};
use crate::error::{Error, Result};

/// Factors with exponents this close (relatively) are merged.
const FACTOR_MERGE_TOL: f64 = 1e-12;

/// One factor (1 − z^b)^c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factor {
    pub b: f64,
    pub c: i32,
}

/// z^a · Π (1 − z^{b_i})^{c_i}, kept sorted by b with distinct b and c ≠ 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormM {
    pub a: f64,
    pub factors: Vec<Factor>,
}

impl ClosedFormM {
    pub fn new(a: f64, factors: impl IntoIterator<Item = Factor>) -> Self {
        let mut m = Self {
            a,
            factors: factors.into_iter().collect(),
        };
        m.normalize();
        m
    }

    fn normalize(&mut self) {
        self.factors.sort_by(|x, y| x.b.total_cmp(&y.b));
        let mut merged: Vec<Factor> = Vec::with_capacity(self.factors.len());
        for f in self.factors.drain(..) {
            match merged.last_mut() {
                Some(last) if (f.b - last.b).abs() <= FACTOR_MERGE_TOL * last.b => last.c += f.c,
                _ => merged.push(f),
            }
        }
        merged.retain(|f| f.c != 0);
        self.factors = merged;
    }

    /// Net pole order at z = 1, −Σ c_i.
    pub fn pole_order(&self) -> i32 {
        -self.factors.iter().map(|f| f.c).sum::<i32>()
    }

    /// M(z) for real z > 0, z ≠ 1. For z > 1 the factors are negative and
    /// the integer powers carry the sign.
    pub fn evaluate(&self, z: f64) -> f64 {
        self.factors
            .iter()
            .fold(z.powf(self.a), |acc, f| acc * (1.0 - z.powf(f.b)).powi(f.c))
    }

    /// M(e^{−s}), accurate for small s.
    pub fn evaluate_at_s(&self, s: f64) -> f64 {
        self.factors.iter().fold((-self.a * s).exp(), |acc, f| {
            acc * (-(-f.b * s).exp_m1()).powi(f.c)
        })
    }

    /// ln(s^P · M(e^{−s})), accurate as s → 0.
    fn log_scaled_at_s(&self, s: f64) -> f64 {
        let p = self.pole_order() as f64;
        p * s.ln() - self.a * s
            + self
                .factors
                .iter()
                .map(|f| f.c as f64 * (-(-f.b * s).exp_m1()).ln())
                .sum::<f64>()
    }

    /// Smallest exponent with nonzero coefficient (ν₁).
    pub fn first_exponent(&self) -> f64 {
        self.a
    }
}

impl fmt::Display for ClosedFormM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if self.a != 0.0 {
            write!(f, "z^{}", self.a)?;
            wrote = true;
        }
        for factor in &self.factors {
            if wrote {
                f.write_str(" ")?;
            }
            write!(f, "(1-z^{})^{}", factor.b, factor.c)?;
            wrote = true;
        }
        if !wrote {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// M(z) of an atom: S0, T0 or Arc(φ).
pub fn atomic_m(atom: &DomainExpr, bc: BoundaryCondition) -> Result<ClosedFormM> {
    use BoundaryCondition::*;
    Ok(match (atom, bc) {
        (DomainExpr::S0, _) => ClosedFormM::new(0.0, [Factor { b: 2.0, c: 1 }, Factor { b: 1.0, c: -1 }]),
        (DomainExpr::T0, Dirichlet) => ClosedFormM::new(1.0, []),
        (DomainExpr::T0, Neumann) => ClosedFormM::new(0.0, []),
        (DomainExpr::Named(NamedDomain::Arc { angle }), _) => {
            let k = PI / angle;
            let a = if bc == Dirichlet { k } else { 0.0 };
            ClosedFormM::new(a, [Factor { b: k, c: -1 }])
        }
        (other, _) => return Err(Error::UnsupportedAtom(other.to_string())),
    })
}

/// Product rule for the join: M₁·M₂·(1 − z²)^{−1}.
pub fn join_m(m1: &ClosedFormM, m2: &ClosedFormM) -> ClosedFormM {
    let factors = m1
        .factors
        .iter()
        .chain(&m2.factors)
        .copied()
        .chain([Factor { b: 2.0, c: -1 }]);
    ClosedFormM::new(m1.a + m2.a, factors)
}

/// Closed-form M(z) of a spectrum-exact domain.
pub fn domain_m(d: &DomainExpr, bc: BoundaryCondition) -> Result<ClosedFormM> {
    if !d.capabilities().spectrum_exact {
        return Err(Error::UnsupportedDomain {
            domain: d.to_string(),
            operation: "closed-form spectral function",
        });
    }
    let leaves = d.leaves();
    let mut acc = atomic_m(&leaves[0], bc)?;
    for leaf in &leaves[1..] {
        acc = join_m(&acc, &atomic_m(leaf, bc)?);
    }
    Ok(acc)
}

/// Coefficients of M near z = 1:
/// M(z) = c0 (1−z)^{−P} + c1 (1−z)^{1−P} + …,
/// M(e^{−s}) = b0 s^{−P} + b1 s^{1−P} + b2 s^{2−P} + …,
/// with P the pole order (n − 1 on S^{n−1}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCoeffs {
    pub pole_order: i32,
    pub c0: f64,
    pub c1: f64,
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub gamma: f64,
}

/// Analytic expansion of the factor form. Uses
/// ln((1 − e^{−x})/x) = −x/2 + x²/24 + O(x⁴).
pub fn asymptotics_from_form(m: &ClosedFormM) -> AsymptoticCoeffs {
    let b0: f64 = m.factors.iter().map(|f| f.b.powi(f.c)).product();
    let sum = |g: &dyn Fn(&Factor) -> f64| m.factors.iter().map(g).sum::<f64>();
    let a1 = -(m.a + sum(&|f| f.c as f64 * f.b / 2.0));
    let a2 = sum(&|f| f.c as f64 * f.b * f.b / 24.0);
    let c0 = b0;
    // z-side: 1 − z^b = b t (1 − (b−1)t/2 + …) with t = 1 − z
    let c1 = b0 * (-m.a - sum(&|f| f.c as f64 * (f.b - 1.0) / 2.0));
    AsymptoticCoeffs {
        pole_order: m.pole_order(),
        c0,
        c1,
        b0,
        b1: b0 * a1,
        b2: b0 * (a1 * a1 / 2.0 + a2),
        gamma: -2.0 * c1 / c0 - 1.0,
    }
}

/// Numeric b2 by Richardson extrapolation at s = 1e-2 and 5e-3, given the
/// analytic b0 and b1. Works on ln(s^P M(e^{−s})), whose expansion after the
/// linear term is even in s.
pub fn b2_richardson(m: &ClosedFormM) -> f64 {
    let c = asymptotics_from_form(m);
    let ratio = c.b1 / c.b0;
    let h = |s: f64| (m.log_scaled_at_s(s) - c.b0.ln() - ratio * s) / (s * s);
    let (s1, s2) = (1e-2, 5e-3);
    let a2 = (4.0 * h(s2) - h(s1)) / 3.0;
    c.b0 * (ratio * ratio / 2.0 + a2)
}

/// |M(1/z) − (−1)^{n−1} z^{n−2−γ} M(z)|.
pub fn functional_equation_check(m: &ClosedFormM, n: u32, gamma: f64, z: f64) -> f64 {
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let lhs = m.evaluate(1.0 / z);
    let rhs = sign * z.powf(n as f64 - 2.0 - gamma) * m.evaluate(z);
    (lhs - rhs).abs()
}

/// |M_D(1/z) − (−1)^{n−1} z^{n−2} M_N(z)| for the Dirichlet/Neumann pair.
pub fn pairing_check(dirichlet: &ClosedFormM, neumann: &ClosedFormM, n: u32, z: f64) -> f64 {
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    (dirichlet.evaluate(1.0 / z) - sign * z.powf(n as f64 - 2.0) * neumann.evaluate(z)).abs()
}

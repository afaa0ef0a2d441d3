use super::{AsymptoticCoeffs, ClosedFormM};
use crate::error::{Error, Result};

/// Exponents closer than this are the same degree.
pub const EXPONENT_MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub nu: f64,
    pub multiplicity: u64,
}

/// Degrees ν with multiplicities, strictly increasing in ν, for ν ≤ cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSeries {
    pub terms: Vec<Term>,
    pub cutoff: f64,
}

impl SpectralSeries {
    /// Degrees repeated by multiplicity, one entry per mode.
    pub fn flatten(&self) -> Vec<f64> {
        self.terms
            .iter()
            .flat_map(|t| std::iter::repeat_n(t.nu, t.multiplicity as usize))
            .collect()
    }

    pub fn mode_count(&self) -> u64 {
        self.terms.iter().map(|t| t.multiplicity).sum()
    }

    pub fn first(&self) -> Option<Term> {
        self.terms.first().copied()
    }
}

/// Sparse power series with exact integer coefficients.
type Sparse = Vec<(f64, i128)>;

fn binomial(n: u64, k: u64) -> Option<i128> {
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r.checked_mul((n - i) as i128)? / (i + 1) as i128;
    }
    Some(r)
}

fn overflow(nu: f64) -> Error {
    Error::Overflow {
        function: "expand_series",
        x: nu,
    }
}

/// Sorts by exponent and merges runs within the tolerance; zero
/// coefficients are dropped.
fn merge(mut terms: Sparse) -> Sparse {
    terms.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Sparse = Vec::with_capacity(terms.len());
    for (nu, c) in terms {
        match out.last_mut() {
            Some(last) if nu - last.0 <= EXPONENT_MERGE_TOL => last.1 += c,
            _ => out.push((nu, c)),
        }
    }
    out.retain(|t| t.1 != 0);
    out
}

fn convolve(x: &Sparse, y: &Sparse, nu_max: f64) -> Result<Sparse> {
    let mut out = Vec::with_capacity(x.len() * y.len().min(64));
    for &(nx, cx) in x {
        for &(ny, cy) in y {
            let nu = nx + ny;
            if nu > nu_max + EXPONENT_MERGE_TOL {
                break;
            }
            out.push((nu, cx.checked_mul(cy).ok_or_else(|| overflow(nu))?));
        }
    }
    Ok(merge(out))
}

/// (1 − z^b)^c truncated at nu_max.
fn factor_series(b: f64, c: i32, nu_max: f64) -> Result<Sparse> {
    let mut out = Vec::new();
    if c > 0 {
        for j in 0..=c as u64 {
            let nu = b * j as f64;
            if nu > nu_max + EXPONENT_MERGE_TOL {
                break;
            }
            let sign = if j % 2 == 0 { 1 } else { -1 };
            out.push((nu, sign * binomial(c as u64, j).ok_or_else(|| overflow(nu))?));
        }
    } else {
        let k = (-c) as u64;
        for j in 0.. {
            let nu = b * j as f64;
            if nu > nu_max + EXPONENT_MERGE_TOL {
                break;
            }
            out.push((nu, binomial(j + k - 1, j).ok_or_else(|| overflow(nu))?));
        }
    }
    Ok(out)
}

fn into_series(terms: Sparse, nu_max: f64) -> Result<SpectralSeries> {
    let terms = terms
        .into_iter()
        .filter(|t| t.0 <= nu_max + EXPONENT_MERGE_TOL)
        .map(|(nu, c)| {
            u64::try_from(c)
                .map(|multiplicity| Term { nu, multiplicity })
                .map_err(|_| Error::NegativeMultiplicity { nu, value: c })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralSeries {
        terms,
        cutoff: nu_max,
    })
}

/// Exact expansion of M(z) up to ν_max by binomial convolution.
pub fn expand_series(m: &ClosedFormM, nu_max: f64) -> Result<SpectralSeries> {
    if !(nu_max > 0.0) {
        return Err(Error::InvalidParameter {
            name: "nu_max",
            value: nu_max,
            reason: "must be positive",
        });
    }
    let mut acc: Sparse = vec![(m.a, 1)];
    // the z^a shift is already applied, so each factor only needs the
    // remaining budget
    let budget = nu_max - m.a;
    if budget < -EXPONENT_MERGE_TOL {
        return into_series(Vec::new(), nu_max);
    }
    for f in &m.factors {
        let series = factor_series(f.b, f.c, budget)?;
        acc = convolve(&acc, &series, nu_max)?;
    }
    into_series(acc, nu_max)
}

/// Series of a join built from the two factor series and the
/// (1 − z²)^{−1} ladder, independently of the closed form.
pub fn join_series(s1: &SpectralSeries, s2: &SpectralSeries, nu_max: f64) -> Result<SpectralSeries> {
    let as_sparse = |s: &SpectralSeries| -> Sparse {
        s.terms.iter().map(|t| (t.nu, t.multiplicity as i128)).collect()
    };
    let ladder: Sparse = (0..)
        .map(|j| (2.0 * j as f64, 1))
        .take_while(|t| t.0 <= nu_max + EXPONENT_MERGE_TOL)
        .collect();
    let product = convolve(&as_sparse(s1), &as_sparse(s2), nu_max)?;
    into_series(convolve(&product, &ladder, nu_max)?, nu_max)
}

/// W(ν): number of modes with degree ≤ ν.
pub fn counting_function(s: &SpectralSeries, nu: f64) -> Result<u64> {
    if nu > s.cutoff {
        return Err(Error::CutoffExceeded {
            nu,
            cutoff: s.cutoff,
        });
    }
    Ok(s.terms
        .iter()
        .take_while(|t| t.nu <= nu + EXPONENT_MERGE_TOL)
        .map(|t| t.multiplicity)
        .sum())
}

/// Weyl-type asymptotic count
/// b0 ν^{n−1}/(n−1)! + b1 ν^{n−2}/(n−2)! + b2 ν^{n−3}/(n−3)!,
/// terms with a negative factorial argument dropped.
pub fn weyl_counting(c: &AsymptoticCoeffs, nu: f64) -> f64 {
    let p = c.pole_order;
    let term = |coef: f64, k: i32| {
        if k < 0 {
            0.0
        } else {
            let fact: f64 = (1..=k).map(f64::from).product();
            coef * nu.powi(k) / fact
        }
    };
    term(c.b0, p) + term(c.b1, p - 1) + term(c.b2, p - 2)
}

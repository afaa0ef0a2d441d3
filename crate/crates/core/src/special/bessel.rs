use std::f64::consts::PI;

use super::gamma::ln_gamma;
use crate::error::{Error, Result};

/// Arguments up to this use the power series; beyond it, continued fractions.
const SERIES_MAX_X: f64 = 30.0;
/// e^700 is close to the largest finite f64.
const OVERFLOW_X: f64 = 700.0;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-150;
const MAX_ITER: usize = 200_000;

/// Modified Bessel function of the first kind, I_ν(x), for ν >= 0, 0 <= x <= 700.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    if x > OVERFLOW_X {
        return Err(Error::Overflow {
            function: "bessel_i",
            x,
        });
    }
    Ok(bessel_i_scaled(nu, x)? * x.exp())
}

/// Exponentially scaled e^{-x} I_ν(x); finite for every x >= 0.
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64> {
    if nu.is_nan() || nu < 0.0 {
        return Err(Error::Domain {
            function: "bessel_i",
            x: nu,
        });
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain {
            function: "bessel_i",
            x,
        });
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= SERIES_MAX_X {
        series_scaled(nu, x)
    } else {
        steed_scaled(nu, x)
    }
}

/// e^{-x} Σ_k (x/2)^{ν+2k} / (k! Γ(ν+k+1)).
pub(crate) fn series_scaled(nu: f64, x: f64) -> Result<f64> {
    let half = 0.5 * x;
    let quarter_sq = half * half;
    let mut term = (nu * half.ln() - ln_gamma(nu + 1.0)? - x).exp();
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= quarter_sq / (k * (k + nu));
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    Ok(sum)
}

/// Continued-fraction evaluation (CF1 for I'_ν/I_ν, Steed's CF2 for K_μ, then
/// the Wronskian), returning e^{-x} I_ν(x). Valid for x >= 2.
fn steed_scaled(nu: f64, x: f64) -> Result<f64> {
    let nl = (nu + 0.5).floor() as usize;
    let mu = nu - nl as f64;
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;

    // CF1: I'_ν / I_ν by modified Lentz
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ToleranceNotMet {
            what: "bessel_i continued fraction",
            achieved: f64::NAN,
            requested: EPS,
        });
    }

    // downward recurrence to order μ; only the ratio I_μ/I_ν is kept
    let mut ril = FPMIN;
    let mut ripl = h * ril;
    let mut ril_start = ril;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
        if ril.abs() > 1e150 {
            ril *= 1e-150;
            ripl *= 1e-150;
            ril_start *= 1e-150;
        }
    }
    let f = ripl / ril;

    // CF2 for e^x K_μ and e^x K_{μ+1}
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 2..MAX_ITER {
        a -= 2.0 * (i - 1) as f64;
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ToleranceNotMet {
            what: "bessel_k continued fraction",
            achieved: f64::NAN,
            requested: EPS,
        });
    }
    h *= a1;
    let kmu = (PI / (2.0 * x)).sqrt() / s;
    let k1 = kmu * (mu + x + 0.5 - h) * xi;
    let kmu_prime = mu * xi * kmu - k1;
    let imu = xi / (f * kmu - kmu_prime);
    Ok(imu * ril_start / ril)
}

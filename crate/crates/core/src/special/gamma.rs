use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Largest argument for which Γ(x) is finite in f64.
const GAMMA_MAX_ARG: f64 = 171.6;

fn lanczos_sum(z: f64) -> f64 {
    LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, c)| acc + c / (z + (i + 1) as f64))
}

/// ln Γ(x) for x >= 0.5.
fn ln_gamma_lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain { function: "gamma", x });
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow { function: "gamma", x });
    }
    if x < 0.5 {
        // reflection keeps the Lanczos sum in its accurate range
        return Ok(PI / ((PI * x).sin() * ln_gamma_lanczos(1.0 - x).exp()));
    }
    Ok(ln_gamma_lanczos(x).exp())
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain {
            function: "ln_gamma",
            x,
        });
    }
    if x < 0.5 {
        return Ok((PI / (PI * x).sin()).ln() - ln_gamma_lanczos(1.0 - x));
    }
    Ok(ln_gamma_lanczos(x))
}

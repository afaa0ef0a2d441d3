//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on failure.

use std::f64::consts::PI;
use std::process::ExitCode;

use conespec::geometry::{
    catalog_geometry, regular_t_recursion_residual, regular_t_size, small_rho_residual, sphere_size,
};
use conespec::heat_kernel::{
    arc_trace_identity_residual, mhk_identity_residual, mzf_numeric_residual, poisson_normalization, MzfDomain,
    TruncationControl,
};
use conespec::scaling::{
    estimate, flat_linear, flat_quadratic, reference_series, FlatDomain, Method, ScalingDomain,
};
use conespec::spectral::{
    asymptotics_from_form, counting_function, domain_m, expand_series, functional_equation_check, join_series,
    pairing_check, weyl_counting, SpectralSeries,
};
use conespec::{parse_domain, BoundaryCondition, DomainExpr, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use BoundaryCondition::{Dirichlet, Neumann};

type Outcome = std::result::Result<String, String>;

fn d(text: &str) -> DomainExpr {
    parse_domain(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn within(what: &str, got: f64, want: f64, tol: f64) -> Outcome {
    let msg = format!("{what} = {got:.6} (target {want} ± {tol})");
    if (got - want).abs() <= tol {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn below(what: &str, got: f64, tol: f64) -> Outcome {
    let msg = format!("{what} = {got:.3e} (< {tol:e})");
    if got < tol {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let failed: Vec<String> = parts.iter().filter_map(|p| p.as_ref().err().cloned()).collect();
    if failed.is_empty() {
        Ok(parts.into_iter().map(|p| p.unwrap()).collect::<Vec<_>>().join("; "))
    } else {
        Err(failed.join("; "))
    }
}

fn lift(r: Result<Outcome>) -> Outcome {
    r.unwrap_or_else(|e| Err(format!("error: {e}")))
}

fn first(target: &str, reference: &str, method: Method) -> Result<(f64, f64)> {
    let r = estimate(&d(target), &d(reference), Dirichlet, method, 1)?;
    Ok((r.rows[0].nu, r.rows[0].lambda))
}

fn criterion_1() -> Outcome {
    lift((|| {
        let (nu, lambda) = first("RegularT(3, rho=0.5)", "T(3)", Method::Linear)?;
        Ok(all(vec![within("nu_1", nu, 1.826, 0.001), within("lambda_1", lambda, 5.162, 0.002)]))
    })())
}

fn criterion_2() -> Outcome {
    lift(first("RegularT(3, rho=0.5)", "T(3)", Method::Quadratic).map(|(_, l)| within("lambda_1", l, 5.1606, 0.0005)))
}

fn criterion_3() -> Outcome {
    lift((|| {
        let cap = format!("Cap(theta={})", PI / 3.0);
        let (_, lin) = first(&cap, "HalfSphere(3)", Method::Linear)?;
        let (_, quad) = first(&cap, "HalfSphere(3)", Method::Quadratic)?;
        Ok(all(vec![
            within("linear lambda_1", lin, 4.949, 0.001),
            below("|quadratic - linear|", (quad - lin).abs(), 1e-12),
        ]))
    })())
}

fn criterion_4() -> Outcome {
    lift((|| {
        let phi = 2.0 * PI / 3.0;
        let theta = (-1.0 / 3f64.sqrt()).acos();
        let target = format!("Sector(theta={theta}, phi={phi})");
        let reference = format!("Arc(angle={phi}) * T0");
        let (_, lin) = first(&target, &reference, Method::Linear)?;
        let (_, quad) = first(&target, &reference, Method::Quadratic)?;
        Ok(all(vec![
            within("linear lambda_1", lin, 5.1046, 0.001),
            within("quadratic lambda_1", quad, 5.0187, 0.001),
        ]))
    })())
}

fn criterion_5() -> Outcome {
    lift((|| {
        let half = ScalingDomain::from_expr(&d("HalfSphere(3)"), Dirichlet)?;
        let octant = ScalingDomain::from_expr(&d("T(3)"), Dirichlet)?;
        let disk = flat_linear(&FlatDomain::unit_disk(), &half, &[1.0, 2.0, 3.0])?;
        let tri = FlatDomain::equilateral_triangle();
        let lin = flat_linear(&tri, &octant, &[3.0, 5.0])?;
        let quad = flat_quadratic(&tri, &octant, &[3.0])?;
        Ok(all(vec![
            within("disk nu_1 delta", disk[0], 2.4142, 0.0005),
            within("disk nu_2 delta", disk[1], 3.8284, 0.0005),
            within("disk nu_3 delta", disk[2], 5.2426, 0.0005),
            within("triangle sqrt(lambda_1) delta", lin[0], 7.273, 0.001),
            within("triangle sqrt(lambda_2) delta", lin[1], 11.083, 0.001),
            within("triangle quadratic sqrt(lambda_1) delta", quad[0], 7.2613, 0.0005),
        ]))
    })())
}

fn criterion_6() -> Outcome {
    lift((|| {
        let mut parts = Vec::new();
        for n in 2..=6 {
            let exact = sphere_size(n) / (n as f64 + 1.0);
            let rel = ((regular_t_size(n, 0.5)? - exact) / exact).abs();
            parts.push(below(&format!("half-correlation size n={n} rel"), rel, 1e-8));
        }
        let mut worst = 0.0f64;
        for i in 1..=9 {
            let rho = 0.1 * i as f64;
            worst = worst.max((regular_t_size(3, rho)? - (3.0 * (-rho).acos() - PI)).abs());
        }
        parts.push(below("triangle closed form", worst, 1e-9));
        for n in 3..=5 {
            for rho in [0.2, 0.4] {
                parts.push(below(
                    &format!("recursion n={n} rho={rho}"),
                    regular_t_recursion_residual(n, rho)?,
                    1e-5,
                ));
            }
        }
        for n in 2..=5 {
            let ratio = small_rho_residual(n, 1e-2)? / small_rho_residual(n, 1e-3)?;
            let msg = format!("small-rho ratio n={n} = {ratio:.1}");
            parts.push(if (800.0..=1250.0).contains(&ratio) { Ok(msg) } else { Err(msg) });
        }
        Ok(all(parts))
    })())
}

/// Random spectrum-exact catalog domain.
fn random_domain(rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(1..=3u32);
    match rng.random_range(0..7) {
        0 => "S0".to_string(),
        1 => "T0".to_string(),
        2 => format!("Arc(angle={})", rng.random_range(0.4..6.0)),
        3 => format!("Sphere({n})"),
        4 => format!("T({n})"),
        5 => format!("HalfSphere({n})"),
        _ => format!("RegularT(2, rho={})", rng.random_range(0.0..0.95)),
    }
}

fn same_series(a: &SpectralSeries, b: &SpectralSeries) -> bool {
    a.terms.len() == b.terms.len()
        && a.terms
            .iter()
            .zip(&b.terms)
            .all(|(x, y)| (x.nu - y.nu).abs() < 1e-9 && x.multiplicity == y.multiplicity)
}

fn criterion_7() -> Outcome {
    lift((|| {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let nu_max = 25.0;
        for _ in 0..20 {
            let (a, b) = (random_domain(&mut rng), random_domain(&mut rng));
            let bc = if rng.random_bool(0.5) { Dirichlet } else { Neumann };
            let (ma, mb) = (domain_m(&d(&a), bc)?, domain_m(&d(&b), bc)?);
            let joined = domain_m(&d(&format!("{a} * {b}")), bc)?;
            let direct = expand_series(&joined, nu_max)?;
            let conv = join_series(&expand_series(&ma, nu_max)?, &expand_series(&mb, nu_max)?, nu_max)?;
            if !same_series(&direct, &conv) {
                return Ok(Err(format!("series differ for {a} * {b} ({bc})")));
            }
            let sum = ma.first_exponent() + mb.first_exponent();
            if (joined.first_exponent() - sum).abs() > 1e-12 {
                return Ok(Err(format!("nu_1 not additive for {a} * {b} ({bc})")));
            }
        }
        Ok(Ok("20 random pairs: series and nu_1 agree".to_string()))
    })())
}

fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

fn criterion_8() -> Outcome {
    lift((|| {
        for n in 2..=8i64 {
            let t = expand_series(&domain_m(&d(&format!("T({n})")), Dirichlet)?, 30.0)?;
            let expect: Vec<(f64, u128)> = (1..)
                .map(|k| ((n + 2 * k - 2) as f64, binomial(n + k - 3, k - 1)))
                .take_while(|p| p.0 <= 30.0)
                .collect();
            let got: Vec<(f64, u128)> = t.terms.iter().map(|x| (x.nu, x.multiplicity as u128)).collect();
            if got != expect {
                return Ok(Err(format!("T({n}) multiplicities differ")));
            }
            let s = expand_series(&domain_m(&d(&format!("Sphere({n})")), Dirichlet)?, 30.0)?;
            let expect: Vec<(f64, u128)> = (0..=30i64)
                .map(|k| (k as f64, binomial(n + k - 1, k) - binomial(n + k - 3, k - 2)))
                .collect();
            let got: Vec<(f64, u128)> = s.terms.iter().map(|x| (x.nu, x.multiplicity as u128)).collect();
            if got != expect {
                return Ok(Err(format!("Sphere({n}) multiplicities differ")));
            }
        }
        Ok(Ok("T(n) and Sphere(n), n = 2..8, nu <= 30 exact".to_string()))
    })())
}

fn criterion_9() -> Outcome {
    lift((|| {
        let mut domains: Vec<String> = Vec::new();
        for n in 1..=8 {
            domains.extend([format!("Sphere({n})"), format!("T({n})"), format!("HalfSphere({n})")]);
        }
        domains.extend(
            ["Arc(angle=0.9)", "Arc(angle=2*pi/3)", "Arc(angle=5)", "RegularT(2, rho=0.5)", "Arc(angle=1.3) * T(2) * S0"]
                .map(String::from),
        );
        let close = |a: f64, b: f64, tol: f64| (a - b).abs() <= tol * b.abs().max(1.0);
        let mut worst = 0.0f64;
        for text in &domains {
            for bc in [Dirichlet, Neumann] {
                let expr = d(text);
                let c = asymptotics_from_form(&domain_m(&expr, bc)?);
                let g = catalog_geometry(&expr, bc)?.b_coefficients();
                for (x, y) in [(g.c0, c.c0), (g.gamma, c.gamma), (g.b0, c.b0), (g.b1, c.b1)] {
                    worst = worst.max((x - y).abs() / y.abs().max(1.0));
                    if !close(x, y, 1e-10) {
                        return Ok(Err(format!("{text} ({bc}): {x} vs {y}")));
                    }
                }
            }
        }
        let mut b2_worst = 0.0f64;
        for n in 3..=6 {
            for bc in [Dirichlet, Neumann] {
                let expr = d(&format!("T({n})"));
                let c = asymptotics_from_form(&domain_m(&expr, bc)?);
                let g = catalog_geometry(&expr, bc)?.b_coefficients();
                let b2 = g.b2.expect("n >= 3");
                b2_worst = b2_worst.max((b2 - c.b2).abs());
                if !close(b2, c.b2, 1e-9) {
                    return Ok(Err(format!("b2 T({n}) ({bc}): {b2} vs {}", c.b2)));
                }
            }
        }
        Ok(Ok(format!(
            "{} domains x 2 bcs, worst rel {worst:.1e}; b2 on T(3..6) worst {b2_worst:.1e}",
            domains.len()
        )))
    })())
}

fn criterion_10() -> Outcome {
    lift((|| {
        let mut worst = 0.0f64;
        for family in ["T", "Sphere", "HalfSphere"] {
            for n in 1..=5u32 {
                let expr = d(&format!("{family}({n})"));
                let m = domain_m(&expr, Dirichlet)?;
                let gamma = catalog_geometry(&expr, Dirichlet)?.scaling_inputs().gamma;
                for z in [0.3, 0.5, 0.7] {
                    worst = worst.max(functional_equation_check(&m, n, gamma, z));
                }
            }
        }
        let mut pair = 0.0f64;
        for n in 1..=5u32 {
            let expr = d(&format!("T({n})"));
            let (md, mn) = (domain_m(&expr, Dirichlet)?, domain_m(&expr, Neumann)?);
            for z in [0.3, 0.5, 0.7] {
                pair = pair.max(pairing_check(&md, &mn, n, z));
            }
        }
        Ok(all(vec![below("M(1/z) residual", worst, 1e-12), below("pairing residual", pair, 1e-12)]))
    })())
}

fn criterion_11() -> Outcome {
    lift((|| {
        let mut parts = Vec::new();
        for r in [0.01, 1.0, 3.0] {
            let tc = TruncationControl { max_terms: 80, target_tol: 1e-10 };
            parts.push(below(&format!("arc trace r={r}"), arc_trace_identity_residual(r, tc)?, 1e-10));
        }
        for z in [0.2, 0.5, 0.8] {
            parts.push(below(
                &format!("orthant(2) spectral integral z={z}"),
                mzf_numeric_residual(MzfDomain::Orthant(2), z)?,
                1e-6,
            ));
        }
        let tc = TruncationControl { max_terms: 50, target_tol: 1e-5 };
        for text in ["T(3)", "Sphere(2)", "HalfSphere(3)"] {
            for s in [0.3, 0.5, 1.0] {
                parts.push(below(
                    &format!("heat trace {text} s={s}"),
                    mhk_identity_residual(&d(text), Dirichlet, s, tc)?,
                    1e-5,
                ));
            }
        }
        parts.push(below("Poisson normalization", (poisson_normalization(3, 0.5)? - 1.0).abs(), 1e-8));
        Ok(all(parts))
    })())
}

fn criterion_12() -> Outcome {
    lift((|| {
        let m = domain_m(&d("T(3)"), Dirichlet)?;
        let c = asymptotics_from_form(&m);
        let s = expand_series(&m, 31.0)?;
        let mut worst = 0.0f64;
        for nu in (12..=30).step_by(2) {
            let w = counting_function(&s, nu as f64)? as f64;
            worst = worst.max((w - weyl_counting(&c, nu as f64)).abs() / w);
        }
        let w12 = counting_function(&s, 12.0)?;
        let a12 = weyl_counting(&c, 12.0);
        let spot = format!("W(12) = {w12} vs {a12:.4}");
        Ok(all(vec![
            below("max relative error at midpoints", worst, 1e-2),
            if w12 == 15 && (a12 - 15.04).abs() < 0.005 { Ok(spot) } else { Err(spot) },
        ]))
    })())
}

fn criterion_13() -> Outcome {
    lift((|| {
        let mut parts = Vec::new();
        let mut worst = 0.0f64;
        for text in ["T(3)", "HalfSphere(4)", "Arc(angle=1.1) * T0", "Sphere(3)"] {
            for bc in [Dirichlet, Neumann] {
                for method in [Method::Linear, Method::Quadratic] {
                    let r = estimate(&d(text), &d(text), bc, method, 10)?;
                    for row in &r.rows {
                        worst = worst.max((row.nu - row.nu_ref).abs());
                    }
                }
            }
        }
        parts.push(below("self-scaling deviation", worst, 1e-12));
        let mut exact = 0.0f64;
        for n in 3..=5 {
            let half = format!("HalfSphere({n})");
            let r = estimate(&d(&half), &d(&format!("T({n})")), Dirichlet, Method::Linear, 10)?;
            let want = reference_series(&d(&half), Dirichlet, 10)?.flatten();
            for (row, w) in r.rows.iter().zip(want) {
                exact = exact.max((row.nu - w).abs());
            }
        }
        parts.push(below("T(n) -> HalfSphere(n) deviation, 10 modes", exact, 1e-12));
        let mut zero = 0.0f64;
        for method in [Method::Linear, Method::Quadratic] {
            let r = estimate(&d("RegularT(3, rho=0.5)"), &d("T(3)"), Neumann, method, 3)?;
            zero = zero.max(r.rows[0].nu.abs());
        }
        parts.push(below("Neumann nu_1", zero, 1e-15));
        let lambdas = [0.0, 0.25, 0.5]
            .iter()
            .map(|rho| first(&format!("RegularT(3, rho={rho})"), "T(3)", Method::Linear).map(|x| x.1))
            .collect::<Result<Vec<f64>>>()?;
        let msg = format!("lambda_1 over rho 0, 0.25, 0.5 = {lambdas:.4?}");
        parts.push(if lambdas.windows(2).all(|w| w[1] < w[0]) { Ok(msg) } else { Err(msg) });
        Ok(all(parts))
    })())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("tetrahedral triangle, linear", criterion_1),
        ("tetrahedral triangle, quadratic", criterion_2),
        ("spherical cap, linear", criterion_3),
        ("sector, linear and quadratic", criterion_4),
        ("flat limits", criterion_5),
        ("domain sizes", criterion_6),
        ("product rule", criterion_7),
        ("multiplicity formulas", criterion_8),
        ("geometry vs closed form", criterion_9),
        ("functional equations", criterion_10),
        ("heat-kernel identities", criterion_11),
        ("Weyl counting", criterion_12),
        ("scaling sanity", criterion_13),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

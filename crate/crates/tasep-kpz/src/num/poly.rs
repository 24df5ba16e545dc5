//! Polynomial root finding by the Aberth-Ehrlich simultaneous iteration with
//! a final Newton polish. Degrees stay small here (the decoupled Bethe
//! polynomials have degree L, at most a few dozen), so robustness and
//! determinism matter more than speed.

use super::C64;

/// Evaluate p(z) and p'(z) for ascending coefficients c[0] + c[1] z + ...
pub fn eval_poly(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

/// All complex roots of the polynomial with ascending coefficients `coeffs`.
/// Leading zeros (vanishing high-order coefficients) are trimmed; exact zero
/// roots from a vanishing constant term are factored out first.
pub fn roots(coeffs: &[C64]) -> Result<Vec<C64>, String> {
    let mut c: Vec<C64> = coeffs.to_vec();
    while let Some(last) = c.last() {
        if last.norm() == 0.0 && c.len() > 1 {
            c.pop();
        } else {
            break;
        }
    }
    if c.len() <= 1 {
        return Err("zero or constant polynomial".to_string());
    }
    let mut zero_roots = Vec::new();
    while c[0].norm() == 0.0 && c.len() > 1 {
        zero_roots.push(C64::new(0.0, 0.0));
        c.remove(0);
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return Ok(zero_roots);
    }
    // Initial guesses: circle of radius set by the coefficient bound,
    // with an irrational angular offset to avoid symmetry traps.
    let lead = c[deg].norm();
    let mut radius: f64 = 0.0;
    for (k, ck) in c.iter().enumerate().take(deg) {
        if ck.norm() > 0.0 {
            radius = radius.max((ck.norm() / lead).powf(1.0 / (deg - k) as f64));
        }
    }
    radius = radius.max(1e-12) * 1.2;
    let mut z: Vec<C64> = (0..deg)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.37) / deg as f64 + 0.5;
            C64::from_polar(radius, th)
        })
        .collect();
    let scale: Vec<C64> = c.iter().map(|ck| ck / c[deg]).collect();
    let mut converged = vec![false; deg];
    for _sweep in 0..400 {
        let mut all_done = true;
        for i in 0..deg {
            if converged[i] {
                continue;
            }
            let (p, dp) = eval_poly(&scale, z[i]);
            if p.norm() == 0.0 {
                converged[i] = true;
                continue;
            }
            let newton = if dp.norm() > 0.0 {
                p / dp
            } else {
                C64::new(1e-8, 1e-8)
            };
            let mut sum = C64::new(0.0, 0.0);
            for j in 0..deg {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm_sqr() > 1e-300 {
                        sum += 1.0 / d;
                    }
                }
            }
            let denom = C64::new(1.0, 0.0) - newton * sum;
            let step = if denom.norm() > 1e-14 {
                newton / denom
            } else {
                newton
            };
            z[i] -= step;
            if step.norm() <= 1e-15 * (1.0 + z[i].norm()) {
                converged[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    // Newton polish to squeeze out the last bits.
    for zi in z.iter_mut() {
        for _ in 0..6 {
            let (p, dp) = eval_poly(&scale, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            *zi -= step;
            if step.norm() <= f64::EPSILON * (1.0 + zi.norm()) {
                break;
            }
        }
    }
    // Validate.
    let bound = 1e-8 * (1.0 + radius.powi(deg as i32));
    for &zi in &z {
        let (p, _) = eval_poly(&scale, zi);
        if !p.norm().is_finite() || p.norm() > bound.max(1e-6) {
            return Err(format!(
                "root iteration failed to converge: residual {} at {}",
                p.norm(),
                zi
            ));
        }
    }
    zero_roots.extend(z);
    Ok(zero_roots)
}

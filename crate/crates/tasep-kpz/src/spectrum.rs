//! Bethe eigenstates at fixed fugacity and spectral reconstruction of
//! generating functions.
//!
//! At fixed g, the eigenstates of the deformed generator M(g) are the points
//! [B, S] of the spectral surface satisfying the self-consistency
//! g = B / prod_{y in S} y, where S is a choice of N of the L roots of the
//! decoupled Bethe polynomial at parameter B. All binomial(L, N) of them are
//! found at once from the fiber polynomial
//!
//!   R(B) = prod_{|J| = N} ( g * prod_{j in J} y_j(B) - B ),
//!
//! a symmetric function of the roots and therefore a single-valued function
//! of B; it is regular at B = 0 and grows like (-B)^binomial(L,N), hence a
//! polynomial whose roots are exactly the fiber of g. The polynomial is
//! recovered from samples on a circle by a discrete Fourier transform, the
//! interpolation error is checked against the vanishing of the coefficients
//! beyond the degree, and every fiber point is polished on the exact
//! self-consistency before use. This global method cannot miss eigenstates
//! or count one twice, unlike path continuation in g whose endpoint depends
//! on the homotopy class of the path.
//!
//! Summing the eigenstate decomposition
//!
//!   <g^{Q_t}> = sum_S e^{t mu_S} (sum_C <C|psi_S>) <psi_S|P0> / <psi_S|psi_S>
//!
//! over the full fiber must rebuild the brute-force generating function; this
//! completeness identity exercises the root solving, the Bethe vectors and
//! the norm formula all at once.
//!
//! For large L the polynomial form of the Bethe equation is useless: on the
//! stationary sheet B is exponentially small in L. The sea of roots is
//! instead computed from the decoupled logarithmic equation
//!
//!   log(1 - y_j) - rho log y_j = c + 2 i pi n_j / L,   c = -(log B)/L,
//!
//! with Fermi-sea phases n_j = j - (N+1)/2 for j = 1..N, seeded by the
//! thermodynamic root curve Y_rho. The fugacity follows from
//! log g = -L c - sum_j log y_j, and a scalar Newton iteration on c matches a
//! requested log g when needed.

use crate::bethe::{
    advance_frame, bethe_poly, bethe_vectors, bulk_curve, sheet_observables, BetheFrame,
};
use crate::num::{binomial, cis, cr, C64};
use crate::oracle::{enumerate_states, initial_vector, InitialCondition};
use rayon::prelude::*;

/// One eigenstate of M(g) at fixed fugacity. The frame stores the solved
/// point with labels re-anchored so that the selected roots are 1..N.
pub struct FixedGState {
    pub frame: BetheFrame,
    pub g: C64,
    pub mu: C64,
}

impl FixedGState {
    /// The label set selecting this eigenstate's roots in its own frame.
    pub fn selection(&self) -> Vec<usize> {
        (1..=self.frame.n).collect()
    }
}

/// All N-subsets of {1..L} in lexicographic order.
pub fn n_subsets(l: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=n).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = n;
        while i > 0 && cur[i - 1] == l - n + i {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        cur[i - 1] += 1;
        for k in i..n {
            cur[k] = cur[k - 1] + 1;
        }
    }
    out
}

/// Roots of the decoupled Bethe polynomial at parameter b, unlabeled.
fn poly_roots(l: usize, n: usize, b: C64) -> Result<Vec<C64>, String> {
    crate::num::poly::roots(&bethe_poly(l, n, b))
}

/// d y / d B at fixed (l, n) from the implicit polynomial equation.
fn dy_db(l: usize, n: usize, b: C64, y: C64) -> C64 {
    let omy = cr(1.0) - y;
    let sn = if n % 2 == 0 { 1.0 } else { -1.0 };
    let dp_dy = -(l as f64) * b * omy.powu((l - 1) as u32) + sn * (n as f64) * y.powu((n - 1) as u32);
    -omy.powu(l as u32) / dp_dy
}

/// Newton-polish one root of the Bethe polynomial from a nearby seed.
fn polish_root(l: usize, n: usize, b: C64, seed: C64) -> C64 {
    let sn = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut y = seed;
    for _ in 0..40 {
        let omy = cr(1.0) - y;
        let p = b * omy.powu(l as u32) + sn * y.powu(n as u32);
        let scale = (b * omy.powu(l as u32)).norm() + y.powu(n as u32).norm();
        if p.norm() < 1e-15 * scale.max(1e-300) {
            break;
        }
        let dp = -(l as f64) * b * omy.powu((l - 1) as u32) + sn * (n as f64) * y.powu((n - 1) as u32);
        y -= p / dp;
    }
    y
}

/// Every eigenstate of M(g) at fixed g, from the fiber polynomial.
pub fn all_states_at_g(l: usize, n: usize, g: C64) -> Result<Vec<FixedGState>, String> {
    if g.norm() == 0.0 {
        return Err("fugacity must be nonzero".into());
    }
    let d = binomial(l as u64, n as u64);
    if d > 3000 {
        return Err(format!("fiber of size {d} exceeds the dense-scale cap"));
    }
    let d = d as usize;
    let subs = n_subsets(l, n);
    let m = (4 * (d + 1)).next_power_of_two();
    // sample the fiber polynomial on the unit circle
    let samples: Vec<C64> = (0..m)
        .into_par_iter()
        .map(|k| {
            let b = cis(2.0 * std::f64::consts::PI * k as f64 / m as f64);
            let ys = poly_roots(l, n, b)?;
            let mut r = cr(1.0);
            for j_set in &subs {
                let pi: C64 = j_set.iter().map(|&j| ys[j - 1]).product();
                r *= g * pi - b;
            }
            Ok(r)
        })
        .collect::<Result<_, String>>()?;
    // Fourier coefficients; the super-degree ones must vanish
    let mut coeffs = vec![cr(0.0); d + 1];
    let mut tail = 0.0f64;
    let mut scale = 0.0f64;
    for j in 0..m {
        let mut acc = cr(0.0);
        for (k, &s) in samples.iter().enumerate() {
            acc += s * cis(-2.0 * std::f64::consts::PI * (j * k % m) as f64 / m as f64);
        }
        acc /= m as f64;
        if j <= d {
            coeffs[j] = acc;
            scale = scale.max(acc.norm());
        } else {
            tail = tail.max(acc.norm());
        }
    }
    if tail > 1e-8 * scale {
        return Err(format!(
            "fiber interpolation tail {tail:e} vs coefficient scale {scale:e}"
        ));
    }
    let lead = if d % 2 == 0 { 1.0 } else { -1.0 };
    if (coeffs[d] - cr(lead)).norm() > 1e-8 {
        return Err(format!("fiber leading coefficient {} instead of {lead}", coeffs[d]));
    }
    let fiber = crate::num::poly::roots(&coeffs)?;
    // classify and polish each fiber point
    let states: Result<Vec<FixedGState>, String> = fiber
        .into_par_iter()
        .map(|b0| {
            let ys = poly_roots(l, n, b0)?;
            let (best, second) = best_selection(&ys, &subs, g, b0);
            let sel = &subs[best.0];
            if second.1 < 10.0 * best.1 + 1e-13 {
                return Err(format!(
                    "ambiguous selection at fiber point B={b0}: residual {:e} vs next {:e}",
                    best.1, second.1
                ));
            }
            // Newton on the exact self-consistency g prod y(B) = B
            let mut b = b0;
            let mut sel_ys: Vec<C64> = sel.iter().map(|&j| ys[j - 1]).collect();
            let mut rest: Vec<C64> = (1..=l)
                .filter(|j| !sel.contains(j))
                .map(|j| ys[j - 1])
                .collect();
            for _ in 0..12 {
                let pi: C64 = sel_ys.iter().product();
                let h = g * pi - b;
                if h.norm() < 1e-14 * (b.norm() + (g * pi).norm()) {
                    break;
                }
                let dpi: C64 = sel_ys.iter().map(|&y| dy_db(l, n, b, y) / y).sum();
                let hp = g * pi * dpi - cr(1.0);
                let db = -h / hp;
                b += db;
                for y in sel_ys.iter_mut() {
                    *y = polish_root(l, n, b, *y);
                }
                for y in rest.iter_mut() {
                    *y = polish_root(l, n, b, *y);
                }
            }
            let mut ys_ordered = sel_ys;
            ys_ordered.extend(rest);
            let frame = BetheFrame {
                l,
                n,
                b,
                ys: ys_ordered,
            };
            if frame.residual() > 1e-11 {
                return Err(format!(
                    "fiber point at B={b} has Bethe residual {:e}",
                    frame.residual()
                ));
            }
            let selection: Vec<usize> = (1..=n).collect();
            let obs = sheet_observables(&frame, &selection);
            if (obs.g - g).norm() > 1e-9 * g.norm() {
                return Err(format!("fiber point self-consistency drifted: g = {}", obs.g));
            }
            Ok(FixedGState {
                frame,
                g: obs.g,
                mu: obs.mu,
            })
        })
        .collect();
    let states = states?;
    // the fiber must consist of pairwise distinct points
    for i in 0..states.len() {
        for j in 0..i {
            let db = (states[i].frame.b - states[j].frame.b).norm();
            let dmu = (states[i].mu - states[j].mu).norm();
            if db < 1e-8 * states[i].frame.b.norm().max(1.0) && dmu < 1e-8 {
                return Err(format!(
                    "degenerate fiber points at B = {} (mu = {})",
                    states[i].frame.b, states[i].mu
                ));
            }
        }
    }
    Ok(states)
}

/// The subset whose product best matches the self-consistency at B, plus the
/// runner-up: (index, |g prod - B|) pairs.
fn best_selection(
    ys: &[C64],
    subs: &[Vec<usize>],
    g: C64,
    b: C64,
) -> ((usize, f64), (usize, f64)) {
    let mut best = (usize::MAX, f64::INFINITY);
    let mut second = (usize::MAX, f64::INFINITY);
    for (idx, j_set) in subs.iter().enumerate() {
        let pi: C64 = j_set.iter().map(|&j| ys[j - 1]).product();
        let r = (g * pi - b).norm();
        if r < best.1 {
            second = best;
            best = (idx, r);
        } else if r < second.1 {
            second = (idx, r);
        }
    }
    (best, second)
}

/// One corrector pass: advance the frame until its branch-tracked log g
/// equals w_target. Returns the new frame and the accumulated log g.
fn lift_to(
    frame: &BetheFrame,
    j_set: &[usize],
    w_cur: C64,
    w_target: C64,
) -> Result<(BetheFrame, C64), String> {
    let mut fr = frame.clone();
    let mut w = w_cur;
    for _ in 0..16 {
        let obs = sheet_observables(&fr, j_set);
        let r = w_target - w;
        if r.norm() < 1e-13 {
            return Ok((fr, w));
        }
        if obs.kappa.norm() < 1e-9 {
            return Err("kappa vanished along the lift".into());
        }
        let dlb = r / obs.kappa;
        if dlb.norm() > 0.7 {
            return Err(format!("log B step {:.3} too large", dlb.norm()));
        }
        let b_new = fr.b * dlb.exp();
        advance_frame(&mut fr, b_new, 0)?;
        let g_new = sheet_observables(&fr, j_set).g;
        // small steps keep the branch of the increment principal
        w += (g_new / obs.g).ln();
    }
    Err("Newton corrector stalled".into())
}

/// Solve the self-consistency g(B, J) = g_target on the sheet J by lifting
/// the straight log-g segment from the reference frame. The returned frame
/// carries the continuation provenance; its observables satisfy
/// g = g_target to 1e-10. The endpoint depends on the homotopy class of the
/// segment; for the full fiber use [`all_states_at_g`] instead.
pub fn solve_sheet_at_g(
    reference: &BetheFrame,
    j_set: &[usize],
    g_target: C64,
) -> Result<BetheFrame, String> {
    if g_target.norm() == 0.0 {
        return Err("fugacity must be nonzero".into());
    }
    let mut frame = reference.clone();
    let obs0 = sheet_observables(&frame, j_set);
    let w0 = obs0.g.ln();
    let w1 = g_target.ln();
    let span = (w1 - w0).norm();
    if span < 1e-14 {
        return Ok(frame);
    }
    let mut w_cur = w0;
    let mut s = 0.0f64;
    let mut ds = (0.25 / span).min(1.0);
    let mut streak = 0usize;
    while s < 1.0 - 1e-12 {
        let ds_eff = ds.min(1.0 - s);
        let w_target = w0 + (w1 - w0) * (s + ds_eff);
        match lift_to(&frame, j_set, w_cur, w_target) {
            Ok((fr, w)) => {
                frame = fr;
                w_cur = w;
                s += ds_eff;
                streak += 1;
                if streak >= 3 {
                    ds = (ds * 1.7).min(0.5);
                    streak = 0;
                }
            }
            Err(e) => {
                ds *= 0.5;
                streak = 0;
                if ds * span < 1e-7 {
                    return Err(format!(
                        "lift stalled on sheet {j_set:?} at progress {s:.3}: {e}"
                    ));
                }
            }
        }
    }
    let g_end = sheet_observables(&frame, j_set).g;
    if (g_end - g_target).norm() > 1e-10 * g_target.norm() {
        return Err(format!(
            "lift ended at g = {g_end}, requested {g_target} on sheet {j_set:?}"
        ));
    }
    Ok(frame)
}

/// <g^{Q_t}> for each requested time, rebuilt from the full Bethe spectrum
/// at fixed g. The counted bond is L, matching the eigenvector convention.
pub fn generating_function_spectral(
    l: usize,
    n: usize,
    init: &InitialCondition,
    g: C64,
    times: &[f64],
) -> Result<Vec<C64>, String> {
    let space = enumerate_states(l, n);
    let p0 = initial_vector(&space, init)?;
    let states = all_states_at_g(l, n, g)?;
    let terms: Vec<(C64, C64)> = states
        .par_iter()
        .map(|st| {
            let v = bethe_vectors(&st.frame, &st.selection(), &space);
            let sum_right: C64 = v.right.iter().sum();
            let proj: C64 = v.left.iter().zip(p0.iter()).map(|(a, &p)| a * p).sum();
            (st.mu, sum_right * proj / v.gaudin_norm)
        })
        .collect();
    Ok(times
        .iter()
        .map(|&t| terms.iter().map(|&(mu, w)| w * (mu * t).exp()).sum())
        .collect())
}

/// The stationary-state Fermi sea at large L: the N selected roots together
/// with the scaled branch parameter c = -(log B)/L and the observables that
/// stay finite in the thermodynamic limit.
pub struct StationarySea {
    pub l: usize,
    pub n: usize,
    pub c: f64,
    pub log_b: f64,
    pub log_g: f64,
    pub mu: C64,
    pub ys: Vec<C64>,
}

fn sea_roots(l: usize, n: usize, c: f64, seed: Option<&[C64]>) -> Result<Vec<C64>, String> {
    let rho = n as f64 / l as f64;
    let mut ys = Vec::with_capacity(n);
    for j in 1..=n {
        let u = (j as f64 - (n as f64 + 1.0) / 2.0) / l as f64;
        let mut y = match seed {
            Some(s) => s[j - 1],
            None => bulk_curve(rho, u)?,
        };
        let target = C64::new(c, 2.0 * std::f64::consts::PI * u);
        let mut ok = false;
        for _ in 0..80 {
            let f = (cr(1.0) - y).ln() - rho * y.ln() - target;
            if f.norm() < 1e-13 {
                ok = true;
                break;
            }
            let fp = -(cr(1.0) - y).inv() - cr(rho) / y;
            let mut dy = -f / fp;
            if dy.norm() > 0.2 {
                dy *= 0.2 / dy.norm();
            }
            y += dy;
        }
        if !ok {
            return Err(format!("sea root {j} of ({l},{n}) did not converge at c={c}"));
        }
        ys.push(y);
    }
    Ok(ys)
}

fn sea_from_roots(l: usize, n: usize, c: f64, ys: Vec<C64>) -> StationarySea {
    let sum_log: C64 = ys.iter().map(|y| y.ln()).sum();
    let log_b = -(l as f64) * c;
    let log_g = log_b - sum_log.re;
    let mu: C64 = ys.iter().map(|&y| y / (cr(1.0) - y)).sum();
    StationarySea {
        l,
        n,
        c,
        log_b,
        log_g,
        mu,
        ys,
    }
}

/// Solve the stationary sea at a prescribed branch parameter c = -(log B)/L.
pub fn stationary_sea_at_c(l: usize, n: usize, c: f64) -> Result<StationarySea, String> {
    let ys = sea_roots(l, n, c, None)?;
    Ok(sea_from_roots(l, n, c, ys))
}

/// Solve the stationary sea at a prescribed real log g by a scalar Newton
/// iteration on the branch parameter c.
pub fn stationary_sea_at_log_g(l: usize, n: usize, log_g: f64) -> Result<StationarySea, String> {
    let rho = n as f64 / l as f64;
    let entropy = -rho * rho.ln() - (1.0 - rho) * (1.0 - rho).ln();
    let mut c = entropy - log_g / l as f64;
    let mut ys = sea_roots(l, n, c, None)?;
    for _ in 0..60 {
        let sea = sea_from_roots(l, n, c, ys.clone());
        let r = sea.log_g - log_g;
        if r.abs() < 1e-12 {
            return Ok(sea);
        }
        // d log g / d c = -L + sum_j (1 - y_j)/(rho + (1 - rho) y_j)
        let dlg_dc: C64 = -cr(l as f64)
            + ys.iter()
                .map(|&y| (cr(1.0) - y) / (cr(rho) + cr(1.0 - rho) * y))
                .sum::<C64>();
        c -= r / dlg_dc.re;
        ys = sea_roots(l, n, c, Some(&ys))?;
    }
    Err(format!("sea fugacity iteration stalled for ({l},{n}) at log g = {log_g}"))
}

/// Distance from a point to the curve Y_rho, refined by golden-section
/// search on the curve parameter around the nearest coarse sample.
pub fn distance_to_bulk_curve(rho: f64, y: C64, coarse: &[(f64, C64)]) -> f64 {
    let (k, _) = coarse
        .iter()
        .enumerate()
        .map(|(k, &(_, p))| (k, (p - y).norm()))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let mut lo = coarse[k.saturating_sub(1)].0;
    let mut hi = coarse[(k + 1).min(coarse.len() - 1)].0;
    let dist = |u: f64| {
        bulk_curve(rho, u)
            .map(|p| (p - y).norm())
            .unwrap_or(f64::INFINITY)
    };
    let phi = 0.5 * (3.0 - 5.0f64.sqrt());
    let mut a = lo + phi * (hi - lo);
    let mut b = hi - phi * (hi - lo);
    let (mut fa, mut fb) = (dist(a), dist(b));
    for _ in 0..60 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = lo + phi * (hi - lo);
            fa = dist(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = hi - phi * (hi - lo);
            fb = dist(b);
        }
    }
    fa.min(fb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bethe::{bstar, reference_roots};
    use crate::num::{c, rel_err};
    use crate::oracle::{dense_spectrum, generating_function_oracle};

    #[test]
    fn subsets_enumeration_counts() {
        assert_eq!(n_subsets(5, 2).len(), 10);
        assert_eq!(n_subsets(7, 3).len(), 35);
        assert_eq!(n_subsets(4, 1), vec![vec![1], vec![2], vec![3], vec![4]]);
    }

    #[test]
    fn two_site_states_at_fixed_g() {
        // (2,1): eigenvalues are -1 +- sqrt(g) exactly.
        let g = c(0.7, 0.4);
        let states = all_states_at_g(2, 1, g).unwrap();
        assert_eq!(states.len(), 2);
        let sq = g.sqrt();
        let mut expect = [cr(-1.0) + sq, cr(-1.0) - sq];
        let mut got: Vec<C64> = states.iter().map(|s| s.mu).collect();
        got.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        expect.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (a, b) in got.iter().zip(expect.iter()) {
            println!("mu {a} vs closed form {b}");
            assert!(rel_err(*a, *b) < 1e-11);
        }
    }

    #[test]
    fn fixed_g_multiset_matches_dense_diagonalization() {
        for (l, n, g) in [
            (4usize, 1usize, c(0.55, -0.8)),
            (5, 2, c(1.4, 0.9)),
            (5, 2, c(0.12, -0.07)),
            (6, 5, c(0.9, 0.5)),
        ] {
            let states = all_states_at_g(l, n, g).unwrap();
            let mut eigs = dense_spectrum(l, n, g).unwrap();
            assert_eq!(states.len(), eigs.len());
            let mut worst = 0.0f64;
            for st in &states {
                let (k, d) = eigs
                    .iter()
                    .enumerate()
                    .map(|(k, e)| (k, (e - st.mu).norm()))
                    .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                    .unwrap();
                worst = worst.max(d);
                eigs.remove(k);
            }
            println!("({l},{n}) g={g}: worst eigenvalue match {worst:e}");
            assert!(worst < 1e-8, "eigenvalue mismatch {worst} at ({l},{n})");
        }
    }

    #[test]
    fn completeness_rebuilds_generating_function() {
        let times = [0.5, 2.0];
        for (l, n, g, init) in [
            (3usize, 1usize, c(0.6, -0.35), InitialCondition::Stationary),
            (5, 2, c(1.3, 0.7), InitialCondition::Stationary),
            (5, 2, c(0.45, 0.2), InitialCondition::DomainWall),
        ] {
            let spectral = generating_function_spectral(l, n, &init, g, &times).unwrap();
            for (k, &t) in times.iter().enumerate() {
                let oracle = generating_function_oracle(l, n, &init, l, g, t).unwrap();
                let err = rel_err(spectral[k], oracle);
                println!(
                    "({l},{n}) g={g} t={t}: spectral {} oracle {} rel {err:e}",
                    spectral[k], oracle
                );
                assert!(err < 1e-9, "completeness failure {err}");
            }
        }
    }

    #[test]
    fn thermodynamic_sea_sits_on_bulk_curve() {
        // Stationary roots at half filling on the KPZ fugacity scale stay
        // within 0.02 of the thermodynamic curve.
        let (l, n) = (240usize, 120usize);
        let rho = 0.5;
        let log_g = 0.5 / (rho * (1.0 - rho) * l as f64).sqrt();
        let sea = stationary_sea_at_log_g(l, n, log_g).unwrap();
        assert!((sea.log_g - log_g).abs() < 1e-12);
        let m = 2000usize;
        let coarse: Vec<(f64, C64)> = (0..=m)
            .map(|k| {
                let u = -rho / 2.0 + rho * k as f64 / m as f64;
                (u, bulk_curve(rho, u).unwrap())
            })
            .collect();
        let dists: Vec<f64> = sea
            .ys
            .iter()
            .map(|y| distance_to_bulk_curve(rho, *y, &coarse))
            .collect();
        let worst = dists.iter().cloned().fold(0.0, f64::max);
        println!("max distance of {n} sea roots to the bulk curve: {worst:.4}");
        // The two extreme Fermi roots per arc end feel the finite-size shift
        // of the branch parameter (of order 1/L) amplified by the vanishing
        // curve derivative near y = -1, hence the looser global bound.
        assert!(worst < 0.03);
        let mut interior: Vec<f64> = dists.clone();
        interior.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(interior[n - 5] < 0.015, "interior roots drifted: {:?}", &interior[n - 5..]);
        // mu is real and close to its leading term rho(1-rho) log g
        assert!(sea.mu.im.abs() < 1e-10, "Im mu = {}", sea.mu.im);
        let lead = rho * (1.0 - rho) * log_g;
        println!("mu = {} vs leading {lead}", sea.mu.re);
        assert!((sea.mu.re - lead).abs() < 1e-2 * lead.abs());
    }

    #[test]
    fn sea_matches_polynomial_roots_at_moderate_size() {
        // At (20, 10) the polynomial solver still works: the sea solved in
        // the decoupled log form must agree root by root.
        let (l, n) = (20usize, 10usize);
        let log_g = 0.3;
        let sea = stationary_sea_at_log_g(l, n, log_g).unwrap();
        let b = sea.log_b.exp();
        let reference = reference_roots(l, n, bstar(l, n).abs() / 8.0).unwrap();
        let j0: Vec<usize> = (1..=n).collect();
        let frame = solve_sheet_at_g(&reference, &j0, cr(log_g.exp())).unwrap();
        println!("sea log B = {}, frame B = {}", sea.log_b, frame.b);
        assert!((frame.b.re.ln() - sea.log_b).abs() < 1e-9);
        assert!((frame.b.im / frame.b.re).abs() < 1e-10);
        let mut worst = 0.0f64;
        for y in &sea.ys {
            let d = frame.ys[..n]
                .iter()
                .map(|p| (p - y).norm())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
        println!("root-by-root sea vs polynomial frame: worst {worst:e}, B = {b:e}");
        assert!(worst < 1e-10);
    }
}

//! The decoupled Bethe equation of the periodic TASEP,
//!
//!     B (1 - y)^L + (-1)^N y^N = 0,
//!
//! its L labeled root functions y_j(B), their analytic continuation along
//! paths in the complex B plane, and the per-sheet observables g, mu, kappa
//! together with Bethe vectors and the Gaudin norm.
//!
//! Labeling convention: at a small positive reference B the roots split into
//! N "small" roots (vanishing with B) and L-N "large" roots (diverging as B
//! goes to 0). Labels 1..N go to the small cluster sorted by increasing
//! principal argument, labels N+1..L to the large cluster sorted by
//! decreasing argument. This choice reproduces the textbook monodromy
//! cycles: a counterclockwise loop around B = 0 permutes the labels as
//! (1 2 .. N)(N+1 .. L), a counterclockwise loop enclosing both finite
//! branch points as the full cycle (1 2 .. L), and a tight loop around the
//! branch point B_* exchanges labels N and L.

use crate::num::linalg::CMat;
use crate::num::{cr, C64};

/// The finite nonzero branch point B_* = -N^N (L-N)^(L-N) / L^L.
pub fn bstar(l: usize, n: usize) -> f64 {
    let (lf, nf) = (l as f64, n as f64);
    -(nf.ln() * nf + (lf - nf).ln() * (lf - nf) - lf.ln() * lf).exp()
}

/// Ascending coefficients of B (1-y)^L + (-1)^N y^N.
pub fn bethe_poly(l: usize, n: usize, b: C64) -> Vec<C64> {
    let mut c = vec![C64::new(0.0, 0.0); l + 1];
    let mut binom = 1.0f64;
    for k in 0..=l {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        c[k] += b * (sign * binom);
        binom = binom * (l - k) as f64 / (k + 1) as f64;
    }
    let sn = if n % 2 == 0 { 1.0 } else { -1.0 };
    c[n] += cr(sn);
    c
}

/// p(y) and p'(y) for the decoupled equation at parameter b.
#[inline]
fn eval_pe(l: usize, n: usize, b: C64, y: C64) -> (C64, C64, f64) {
    let one = cr(1.0);
    let omy = one - y;
    let omy_lm1 = omy.powu((l - 1) as u32);
    let y_nm1 = y.powu((n - 1) as u32);
    let sn = if n % 2 == 0 { 1.0 } else { -1.0 };
    let p = b * omy_lm1 * omy + sn * y_nm1 * y;
    let dp = -(l as f64) * b * omy_lm1 + sn * (n as f64) * y_nm1;
    let scale = (b * omy_lm1 * omy).norm() + (y_nm1 * y).norm();
    (p, dp, scale)
}

/// Labeled Bethe roots at one value of B.
#[derive(Clone, Debug)]
pub struct BetheFrame {
    pub l: usize,
    pub n: usize,
    pub b: C64,
    /// Roots y_1..y_L in label order (index 0 is label 1).
    pub ys: Vec<C64>,
}

impl BetheFrame {
    /// Maximum relative residual of the defining equation over all roots.
    pub fn residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for &y in &self.ys {
            let (p, _, scale) = eval_pe(self.l, self.n, self.b, y);
            worst = worst.max(p.norm() / scale.max(1e-300));
        }
        worst
    }

    /// Minimum pairwise distance between the tracked roots.
    pub fn min_gap(&self) -> f64 {
        let mut md = f64::INFINITY;
        for i in 0..self.ys.len() {
            for j in i + 1..self.ys.len() {
                md = md.min((self.ys[i] - self.ys[j]).norm());
            }
        }
        md
    }

    /// Distance from each root to its nearest other root.
    pub fn isolation(&self) -> Vec<f64> {
        let m = self.ys.len();
        let mut iso = vec![f64::INFINITY; m];
        for i in 0..m {
            for j in i + 1..m {
                let d = (self.ys[i] - self.ys[j]).norm();
                iso[i] = iso[i].min(d);
                iso[j] = iso[j].min(d);
            }
        }
        iso
    }

    /// Roots with labels in `j_set` (1-based labels).
    pub fn select(&self, j_set: &[usize]) -> Vec<C64> {
        j_set.iter().map(|&j| self.ys[j - 1]).collect()
    }
}

/// Newton-polish every entry of `ys` as a root of the equation at parameter
/// b; returns the worst relative residual, or an error on non-convergence.
fn polish_all(l: usize, n: usize, b: C64, ys: &mut [C64]) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for y in ys.iter_mut() {
        let mut cur = *y;
        let mut ok = false;
        for _ in 0..50 {
            let (p, dp, scale) = eval_pe(l, n, b, cur);
            if p.norm() <= 1e-14 * scale.max(1e-300) {
                ok = true;
                break;
            }
            if dp.norm() == 0.0 {
                break;
            }
            cur -= p / dp;
        }
        let (p, _, scale) = eval_pe(l, n, b, cur);
        let rel = p.norm() / scale.max(1e-300);
        if !ok && rel > 1e-11 {
            return Err(format!("Newton failed on a Bethe root at B={b}: residual {rel}"));
        }
        worst = worst.max(rel);
        *y = cur;
    }
    Ok(worst)
}

/// Labeled reference frame at a small positive real B.
pub fn reference_roots(l: usize, n: usize, b_ref: f64) -> Result<BetheFrame, String> {
    if !(b_ref > 0.0 && b_ref < bstar(l, n).abs() / 4.0) {
        return Err(format!(
            "reference B must sit in (0, |B_*|/4) = (0, {}), got {b_ref}",
            bstar(l, n).abs() / 4.0
        ));
    }
    let coeffs = bethe_poly(l, n, cr(b_ref));
    let mut ys = crate::num::poly::roots(&coeffs)?;
    polish_all(l, n, cr(b_ref), &mut ys)?;
    ys.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
    let (small, large) = ys.split_at_mut(n);
    if small.last().unwrap().norm() * 1.000001 >= large.first().unwrap().norm() {
        return Err("small/large root clusters are not separable at this B".into());
    }
    // Small cluster: increasing principal argument. Large: decreasing.
    small.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
    large.sort_by(|a, b| b.arg().partial_cmp(&a.arg()).unwrap());
    let mut out = Vec::with_capacity(l);
    out.extend_from_slice(small);
    out.extend_from_slice(large);
    Ok(BetheFrame {
        l,
        n,
        b: cr(b_ref),
        ys: out,
    })
}

/// dy/d(log B) = y(1-y)/(N + (L-N) y) for the predictor step.
#[inline]
fn dy_dlogb(l: usize, n: usize, y: C64) -> C64 {
    y * (cr(1.0) - y) / (cr(n as f64) + (l - n) as f64 * y)
}

/// Advance the frame from its current B to `b_new`, interpolating linearly
/// in log B (callers choose waypoints so that segments avoid the branch
/// points). The step halves whenever the predicted displacement comes close
/// to the minimum pairwise root distance, so labels cannot swap silently.
pub fn advance_frame(frame: &mut BetheFrame, b_new: C64, depth: usize) -> Result<(), String> {
    if depth > 40 {
        return Err(format!(
            "continuation step collapsed near B = {} (branch point too close)",
            frame.b
        ));
    }
    let dlog = (b_new / frame.b).ln();
    // Each root may move only a small fraction of its own distance to the
    // nearest other root.  Comparing against a per-root isolation distance
    // instead of the global minimum gap matters near B = 0, where the L-N
    // diverging roots take large absolute steps while the N vanishing roots
    // set a tiny global gap; both clusters are safe at O(1) logarithmic
    // steps because displacement and spacing scale together within each.
    let iso = frame.isolation();
    let mut trial = frame.ys.clone();
    let mut halve = false;
    for (i, y) in trial.iter_mut().enumerate() {
        let d = dy_dlogb(frame.l, frame.n, *y) * dlog;
        if d.norm() > iso[i] / 8.0 {
            halve = true;
        }
        *y += d;
    }
    let halve = halve || polish_all(frame.l, frame.n, b_new, &mut trial).is_err();
    if halve {
        let mid = frame.b * (dlog * 0.5).exp();
        advance_frame(frame, mid, depth + 1)?;
        advance_frame(frame, b_new, depth + 1)?;
        return Ok(());
    }
    // Guard against a silent label swap: each corrected root must stay much
    // closer to its predictor than to any other root.
    for (i, y) in trial.iter().enumerate() {
        let own = (y - frame.ys[i]).norm();
        if own > 0.45 * iso[i] {
            let mid = frame.b * (dlog * 0.5).exp();
            advance_frame(frame, mid, depth + 1)?;
            advance_frame(frame, b_new, depth + 1)?;
            return Ok(());
        }
    }
    frame.b = b_new;
    frame.ys = trial;
    Ok(())
}

/// Continue the frame along a list of waypoints in the complex B plane.
pub fn continue_roots(frame: &BetheFrame, path: &[C64]) -> Result<BetheFrame, String> {
    let mut cur = frame.clone();
    let guard = 1e-6 * bstar(frame.l, frame.n).abs();
    for &b in path {
        if b.norm() == 0.0 || (b - cr(bstar(frame.l, frame.n))).norm() < guard {
            return Err("path runs into a branch point".into());
        }
        let dlog = (b / cur.b).ln();
        let steps = (dlog.norm() / 0.12).ceil().max(1.0) as usize;
        for s in 1..=steps {
            let tgt = cur.b * (dlog * (1.0 / steps as f64)).exp();
            advance_frame(&mut cur, tgt, 0)?;
            let _ = s;
        }
    }
    Ok(cur)
}

/// Waypoints of a counterclockwise circle |B| = r starting and ending at
/// angle `phi0`, traversed `turns` times (negative = clockwise).
pub fn circle_path(r: f64, phi0: f64, turns: i32, points_per_turn: usize) -> Vec<C64> {
    let total = points_per_turn * turns.unsigned_abs() as usize;
    let sign = if turns >= 0 { 1.0 } else { -1.0 };
    (1..=total)
        .map(|k| {
            let phi = phi0 + sign * 2.0 * std::f64::consts::PI * k as f64 / points_per_turn as f64;
            C64::from_polar(r, phi)
        })
        .collect()
}

/// The permutation mapping old labels to new labels after continuation
/// along a closed loop: perm[i] = j means the root that carried label i+1
/// now sits where label j+1 started.
pub fn loop_permutation(before: &BetheFrame, after: &BetheFrame) -> Result<Vec<usize>, String> {
    let ln = before.ys.len();
    let mut perm = vec![usize::MAX; ln];
    let mut used = vec![false; ln];
    for i in 0..ln {
        let mut best = f64::INFINITY;
        let mut second = f64::INFINITY;
        let mut arg = usize::MAX;
        for j in 0..ln {
            let d = (after.ys[i] - before.ys[j]).norm();
            if d < best {
                second = best;
                best = d;
                arg = j;
            } else if d < second {
                second = d;
            }
        }
        if best > 0.25 * second {
            return Err(format!(
                "ambiguous root matching after loop (distances {best} vs {second})"
            ));
        }
        if used[arg] {
            return Err("two roots matched the same target after loop".into());
        }
        used[arg] = true;
        perm[i] = arg;
    }
    Ok(perm)
}

/// Observables of the sheet labeled by the N-subset `j_set` (1-based).
#[derive(Clone, Copy, Debug)]
pub struct SheetObs {
    pub g: C64,
    pub mu: C64,
    pub kappa: C64,
}

pub fn sheet_observables(frame: &BetheFrame, j_set: &[usize]) -> SheetObs {
    assert_eq!(j_set.len(), frame.n, "sheet label must pick N roots");
    let ys = frame.select(j_set);
    let prod: C64 = ys.iter().product();
    let g = frame.b / prod;
    let mu: C64 = ys.iter().map(|&y| y / (cr(1.0) - y)).sum();
    let kappa: C64 = ys
        .iter()
        .map(|&y| y / (cr(frame.n as f64) + (frame.l - frame.n) as f64 * y))
        .sum::<C64>()
        * (frame.l as f64 / frame.n as f64);
    SheetObs { g, mu, kappa }
}

/// d kappa / d log B on the sheet: L sum_j y(1-y)/(N+(L-N)y)^3.
pub fn kappa_prime(frame: &BetheFrame, j_set: &[usize]) -> C64 {
    let ys = frame.select(j_set);
    ys.iter()
        .map(|&y| {
            let d = cr(frame.n as f64) + (frame.l - frame.n) as f64 * y;
            y * (cr(1.0) - y) / (d * d * d)
        })
        .sum::<C64>()
        * frame.l as f64
}

/// Bethe vectors of the sheet, indexed by the oracle's state order, plus the
/// Gaudin norm in closed form.
pub struct BetheVectors {
    pub right: Vec<C64>,
    pub left: Vec<C64>,
    pub gaudin_norm: C64,
}

pub fn bethe_vectors(
    frame: &BetheFrame,
    j_set: &[usize],
    space: &crate::oracle::StateSpace,
) -> BetheVectors {
    let n = frame.n;
    let ys = frame.select(j_set);
    let mut right = Vec::with_capacity(space.dim());
    let mut left = Vec::with_capacity(space.dim());
    for st in &space.states {
        let xs = st.positions();
        let mut mr = CMat::zeros(n, n);
        let mut ml = CMat::zeros(n, n);
        for (k, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                let omy = cr(1.0) - y;
                mr[(k, j)] = y.powi(-((k + 1) as i32)) * omy.powi(x as i32);
                ml[(k, j)] = y.powi((k + 1) as i32) * omy.powi(-(x as i32));
            }
        }
        right.push(crate::num::linalg::det(&mr));
        left.push(crate::num::linalg::det(&ml));
    }
    let obs = sheet_observables(frame, j_set);
    let prod: C64 = ys
        .iter()
        .map(|&y| cr((frame.l - n) as f64) + cr(n as f64) / y)
        .product();
    BetheVectors {
        right,
        left,
        gaudin_norm: obs.kappa * prod,
    }
}

/// || M(g) psi - mu psi ||_2 / || psi ||_2 at oracle sizes.
pub fn eigenstate_residual(frame: &BetheFrame, j_set: &[usize]) -> f64 {
    let space = crate::oracle::enumerate_states(frame.l, frame.n);
    let obs = sheet_observables(frame, j_set);
    let vecs = bethe_vectors(frame, j_set, &space);
    let m = crate::oracle::build_generator(&space, frame.l, obs.g);
    let mv = m.matvec(&vecs.right);
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for (a, p) in mv.iter().zip(vecs.right.iter()) {
        num += (a - obs.mu * p).norm_sqr();
        den += p.norm_sqr();
    }
    (num / den.max(1e-300)).sqrt()
}

/// Point on the bulk root curve: solves
/// log(1-y) - rho log y + rho log rho + (1-rho) log(1-rho) = 2 i pi u
/// with principal logarithms, for -rho/2 <= u <= rho/2.
pub fn bulk_curve(rho: f64, u: f64) -> Result<C64, String> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err("density must lie in (0,1)".into());
    }
    if u.abs() > rho / 2.0 + 1e-14 {
        return Err(format!("curve parameter |u| <= rho/2 required, got {u}"));
    }
    let cst = rho * rho.ln() + (1.0 - rho) * (1.0 - rho).ln();
    if (u.abs() - rho / 2.0).abs() < 1e-14 {
        // The two arcs meet on the negative real axis.
        return Ok(cr(-rho / (1.0 - rho)));
    }
    let f = |y: C64| (cr(1.0) - y).ln() - rho * y.ln() + cst;
    let fprime = |y: C64| -(cr(1.0) - y).inv() - cr(rho) / y;
    // Start on the positive real axis at u = 0: f is real and decreasing
    // from +inf (y -> 0) to -inf (y -> 1), so bisection applies.
    let mut lo = 1e-12;
    let mut hi = 1.0 - 1e-12;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(cr(mid)).re > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut y = cr(0.5 * (lo + hi));
    // March in u with Newton correction.
    let steps = (u.abs() / 0.01).ceil().max(1.0) as usize;
    for s in 1..=steps {
        let target = C64::new(0.0, 2.0 * std::f64::consts::PI * u * s as f64 / steps as f64);
        for _ in 0..60 {
            let r = f(y) - target;
            if r.norm() < 1e-13 {
                break;
            }
            y -= r / fprime(y);
        }
        let r = (f(y) - target).norm();
        if r > 1e-10 {
            return Err(format!("curve solve stalled near u step {s}: residual {r}"));
        }
    }
    Ok(y)
}

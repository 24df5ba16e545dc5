//! Adaptive Gauss-Kronrod quadrature for smooth complex-valued integrands on
//! finite intervals, with helpers for rapidly decaying integrands on the line.

use super::C64;

// 15-point Kronrod nodes (absolute values) and weights, with the embedded
// 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> (C64, f64) {
    let hl = 0.5 * (b - a);
    let ctr = 0.5 * (a + b);
    let fc = f(ctr);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let x = XGK[i] * hl;
        let v = f(ctr - x) + f(ctr + x);
        kron += WGK[i] * v;
        if i % 2 == 1 {
            gauss += WG[i / 2] * v;
        }
    }
    let kron = kron * hl;
    let gauss = gauss * hl;
    (kron, (kron - gauss).norm())
}

/// Adaptive integral of a complex-valued function on [a, b].
pub fn integrate<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> C64 {
    fn recurse<F: Fn(f64) -> C64>(
        f: &F,
        a: f64,
        b: f64,
        rel_tol: f64,
        abs_tol: f64,
        depth: usize,
        whole: C64,
        err: f64,
    ) -> C64 {
        if err <= abs_tol || err <= rel_tol * whole.norm() || depth >= 40 {
            return whole;
        }
        let mid = 0.5 * (a + b);
        let (l, le) = gk15(f, a, mid);
        let (r, re) = gk15(f, mid, b);
        let left = recurse(f, a, mid, rel_tol, abs_tol * 0.5, depth + 1, l, le);
        let right = recurse(f, mid, b, rel_tol, abs_tol * 0.5, depth + 1, r, re);
        left + right
    }
    let (whole, err) = gk15(f, a, b);
    recurse(f, a, b, rel_tol, abs_tol, 0, whole, err)
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    integrate(&|x| C64::new(f(x), 0.0), a, b, rel_tol, abs_tol).re
}

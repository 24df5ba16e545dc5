//! Matrix exponentials of general complex matrices.
//!
//! Two independent evaluation routes are provided on purpose: the dense
//! scaling-and-squaring method with a degree-13 Pade approximant, and a
//! scaled truncated-Taylor action on a vector. The exclusion-process tests
//! cross-check one against the other before either is trusted as an oracle.

use super::linalg::{lu_decompose, CMat};
use super::C64;

/// Pade-13 coefficients for exp.
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Threshold below which the degree-13 approximant reaches full accuracy.
const THETA13: f64 = 5.371920351148152;

/// Dense matrix exponential e^A by scaling and squaring with Pade-13.
pub fn expm(a: &CMat) -> CMat {
    assert_eq!(a.n, a.m);
    let n = a.n;
    let norm = a.norm1();
    let s = if norm > THETA13 {
        ((norm / THETA13).log2().ceil() as i32).max(0)
    } else {
        0
    };
    let mut asc = a.clone();
    if s > 0 {
        asc.scale(C64::new(0.5f64.powi(s), 0.0));
    }
    let a2 = asc.matmul(&asc);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);
    let re = |x: f64| C64::new(x, 0.0);

    // U = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let mut w1 = CMat::zeros(n, n);
    w1.axpy(re(B13[13]), &a6);
    w1.axpy(re(B13[11]), &a4);
    w1.axpy(re(B13[9]), &a2);
    let mut w = a6.matmul(&w1);
    w.axpy(re(B13[7]), &a6);
    w.axpy(re(B13[5]), &a4);
    w.axpy(re(B13[3]), &a2);
    let mut ib1 = CMat::eye(n);
    ib1.scale(re(B13[1]));
    w.axpy(re(1.0), &ib1);
    let u = asc.matmul(&w);

    // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let mut z1 = CMat::zeros(n, n);
    z1.axpy(re(B13[12]), &a6);
    z1.axpy(re(B13[10]), &a4);
    z1.axpy(re(B13[8]), &a2);
    let mut v = a6.matmul(&z1);
    v.axpy(re(B13[6]), &a6);
    v.axpy(re(B13[4]), &a4);
    v.axpy(re(B13[2]), &a2);
    let mut ib0 = CMat::eye(n);
    ib0.scale(re(B13[0]));
    v.axpy(re(1.0), &ib0);

    // Solve (V - U) F = (V + U).
    let mut vmu = v.clone();
    vmu.axpy(re(-1.0), &u);
    let mut vpu = v;
    vpu.axpy(re(1.0), &u);
    let lu = lu_decompose(&vmu).expect("Pade denominator is singular");
    let mut f = lu.solve_mat(&vpu);
    for _ in 0..s {
        f = f.matmul(&f);
    }
    f
}

/// e^{tA} v through a scaled truncated Taylor series; independent of [`expm`].
pub fn expm_action(a: &CMat, v: &[C64], t: f64) -> Vec<C64> {
    assert_eq!(a.n, a.m);
    assert_eq!(a.m, v.len());
    let norm = a.norm1() * t.abs();
    let steps = ((norm / 2.0).ceil() as usize).max(1);
    let dt = C64::new(t / steps as f64, 0.0);
    let mut w = v.to_vec();
    for _ in 0..steps {
        let mut term = w.clone();
        let mut acc = w.clone();
        for k in 1..=120 {
            let av = a.matvec(&term);
            let f = dt / (k as f64);
            for (tm, x) in term.iter_mut().zip(av.iter()) {
                *tm = f * x;
            }
            let mut tn = 0.0f64;
            let mut an = 0.0f64;
            for (s, tm) in acc.iter_mut().zip(term.iter()) {
                *s += tm;
                tn += tm.norm_sqr();
                an += s.norm_sqr();
            }
            if tn.sqrt() <= 1e-16 * an.sqrt().max(1e-300) {
                break;
            }
        }
        w = acc;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{c, cr};

    #[test]
    fn expm_matches_action_on_generator() {
        // Deformed hop generator on a ring of 4 sites with one particle.
        let n = 4;
        let g = c(0.8, 0.4);
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cr(-1.0);
            let w = if i == n - 1 { g } else { cr(1.0) };
            m[((i + 1) % n, i)] = w;
        }
        let t = 2.3;
        let mut mt = m.clone();
        mt.scale(cr(t));
        let e = expm(&mt);
        for start in 0..n {
            let mut v = vec![cr(0.0); n];
            v[start] = cr(1.0);
            let w = expm_action(&m, &v, t);
            for i in 0..n {
                let d = (e[(i, start)] - w[i]).norm();
                assert!(d < 1e-12, "entry ({i},{start}) differs by {d}");
            }
        }
    }

    #[test]
    fn expm_of_nilpotent_block() {
        // exp of a 3x3 Jordan block with eigenvalue 0 is the explicit
        // polynomial I + N + N^2/2.
        let mut nmat = CMat::zeros(3, 3);
        nmat[(0, 1)] = cr(1.0);
        nmat[(1, 2)] = cr(1.0);
        let e = expm(&nmat);
        let expect = [
            [1.0, 1.0, 0.5],
            [0.0, 1.0, 1.0],
            [0.0, 0.0, 1.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((e[(i, j)] - cr(expect[i][j])).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn column_sums_preserved_at_g_one() {
        // At g = 1 the generator is a true Markov generator: column sums of
        // e^{tM} are exactly 1 (probability conservation).
        let n = 6;
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cr(-1.0);
            m[((i + 1) % n, i)] = cr(1.0);
        }
        let mut mt = m.clone();
        mt.scale(cr(1.7));
        let e = expm(&mt);
        for j in 0..n {
            let s: C64 = (0..n).map(|i| e[(i, j)]).sum();
            assert!((s - cr(1.0)).norm() < 1e-13, "column {j} sums to {s}");
        }
    }
}

//! Brute-force ground truth for the periodic TASEP: explicit state
//! enumeration, the deformed generator M(g) counting the current across one
//! bond, matrix-exponential evolution of the master equation, and exact
//! finite-time height distributions obtained from the joint law of
//! (configuration, integrated current).
//!
//! Everything here is exact up to matrix-exponential accuracy and serves as
//! the reference that the Bethe-ansatz contour formulas are tested against.

use crate::num::expm::expm;
use crate::num::linalg::{eigenvalues, CMat};
use crate::num::{binomial, cr, C64};
use std::collections::HashMap;

/// Occupation pattern of N particles on L periodic sites. Bit k-1 of `bits`
/// is site k; exactly N bits are set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Configuration {
    pub l: usize,
    pub bits: u32,
}

impl Configuration {
    pub fn from_positions(l: usize, pos: &[usize]) -> Self {
        let mut bits = 0u32;
        for &p in pos {
            assert!((1..=l).contains(&p), "site {p} outside 1..={l}");
            assert!(bits & (1 << (p - 1)) == 0, "duplicate site {p}");
            bits |= 1 << (p - 1);
        }
        Configuration { l, bits }
    }

    #[inline]
    pub fn occupied(&self, site: usize) -> bool {
        debug_assert!((1..=self.l).contains(&site));
        self.bits >> (site - 1) & 1 == 1
    }

    pub fn n(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Particle positions, ascending, 1-based.
    pub fn positions(&self) -> Vec<usize> {
        (1..=self.l).filter(|&s| self.occupied(s)).collect()
    }

    /// L times the reference height H_{i,0} = sum_{k<=i} (N/L - n_k); the
    /// numerator is exact in integers.
    pub fn height0_numer(&self, site: usize) -> i64 {
        let n = self.n() as i64;
        let mut occ = 0i64;
        for k in 1..=site {
            if self.occupied(k) {
                occ += 1;
            }
        }
        n * site as i64 - self.l as i64 * occ
    }
}

/// The full state space of (L, N) with deterministic indexing.
pub struct StateSpace {
    pub l: usize,
    pub n: usize,
    pub states: Vec<Configuration>,
    index: HashMap<u32, usize>,
}

/// All N-particle configurations on L sites, ordered so that the occupation
/// tuple (site 1 first) is lexicographically decreasing: (1,1,0,..) comes
/// first. Equivalently, position sets in ascending colex order of their
/// sorted tuples.
pub fn enumerate_states(l: usize, n: usize) -> StateSpace {
    assert!(n >= 1 && n < l, "need 1 <= N < L, got L={l} N={n}");
    assert!(l <= 20, "state space beyond documented oracle scale (L <= 20)");
    let mut states = Vec::with_capacity(binomial(l as u64, n as u64) as usize);
    let mut pos: Vec<usize> = (1..=n).collect();
    loop {
        states.push(Configuration::from_positions(l, &pos));
        // next combination in lexicographic position order
        let mut i = n;
        while i > 0 {
            if pos[i - 1] < l - (n - i) {
                pos[i - 1] += 1;
                for j in i..n {
                    pos[j] = pos[j - 1] + 1;
                }
                break;
            }
            i -= 1;
        }
        if i == 0 {
            break;
        }
    }
    let index: HashMap<u32, usize> = states
        .iter()
        .enumerate()
        .map(|(k, c)| (c.bits, k))
        .collect();
    StateSpace {
        l,
        n,
        states,
        index,
    }
}

impl StateSpace {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index_of(&self, c: &Configuration) -> usize {
        self.index[&c.bits]
    }

    /// All allowed hops as (from_state, to_state, source_site).
    pub fn hops(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (ci, c) in self.states.iter().enumerate() {
            for s in 1..=self.l {
                let nxt = s % self.l + 1;
                if c.occupied(s) && !c.occupied(nxt) {
                    let moved = Configuration {
                        l: self.l,
                        bits: c.bits & !(1 << (s - 1)) | 1 << (nxt - 1),
                    };
                    out.push((ci, self.index[&moved.bits], s));
                }
            }
        }
        out
    }
}

/// Initial condition selecting the start vector of the master equation and
/// the height-reference bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition {
    /// Uniform over all configurations (the TASEP stationary state).
    Stationary,
    /// Even sites occupied; requires L = 2N.
    Flat,
    /// Sites L-N+1 .. L occupied.
    DomainWall,
    /// Explicit particle positions, strictly increasing.
    Explicit(Vec<usize>),
}

impl InitialCondition {
    pub fn validate(&self, l: usize, n: usize) -> Result<(), String> {
        match self {
            InitialCondition::Stationary | InitialCondition::DomainWall => Ok(()),
            InitialCondition::Flat => {
                if l == 2 * n {
                    Ok(())
                } else {
                    Err(format!("flat initial condition requires L = 2N, got L={l} N={n}"))
                }
            }
            InitialCondition::Explicit(pos) => {
                if pos.len() != n {
                    return Err(format!("explicit positions: expected {n}, got {}", pos.len()));
                }
                for w in pos.windows(2) {
                    if w[1] <= w[0] {
                        return Err("explicit positions must be strictly increasing".into());
                    }
                }
                if pos.iter().any(|&p| p < 1 || p > l) {
                    return Err(format!("explicit position outside 1..={l}"));
                }
                Ok(())
            }
        }
    }

    /// The deterministic configuration for point initial conditions.
    pub fn configuration(&self, l: usize, n: usize) -> Option<Configuration> {
        match self {
            InitialCondition::Stationary => None,
            InitialCondition::Flat => {
                Some(Configuration::from_positions(l, &(1..=n).map(|k| 2 * k).collect::<Vec<_>>()))
            }
            InitialCondition::DomainWall => {
                Some(Configuration::from_positions(l, &(l - n + 1..=l).collect::<Vec<_>>()))
            }
            InitialCondition::Explicit(pos) => Some(Configuration::from_positions(l, pos)),
        }
    }
}

/// Dense deformed generator M(g): off-diagonal entry (C', C) is g when the
/// hop C -> C' crosses `bond` (source site equals bond), 1 for any other
/// allowed hop, and the diagonal is minus the out-degree.
pub fn build_generator(space: &StateSpace, bond: usize, g: C64) -> CMat {
    assert!((1..=space.l).contains(&bond));
    let d = space.dim();
    let mut m = CMat::zeros(d, d);
    for (from, to, src) in space.hops() {
        let w = if src == bond { g } else { cr(1.0) };
        m[(to, from)] += w;
        m[(from, from)] -= cr(1.0);
    }
    m
}

/// Probability vector over the state space for the given initial condition.
pub fn initial_vector(space: &StateSpace, init: &InitialCondition) -> Result<Vec<f64>, String> {
    init.validate(space.l, space.n)?;
    let d = space.dim();
    match init.configuration(space.l, space.n) {
        None => Ok(vec![1.0 / d as f64; d]),
        Some(c) => {
            let mut v = vec![0.0; d];
            v[space.index_of(&c)] = 1.0;
            Ok(v)
        }
    }
}

/// Smallest q with an upper Poisson(mean) tail below eps, plus a safety
/// margin of two.
pub fn poisson_qmax(mean: f64, eps: f64) -> usize {
    let mut p = (-mean).exp();
    let mut tail = 1.0 - p;
    let mut k = 0usize;
    while tail >= eps && k < 200_000 {
        k += 1;
        p *= mean / k as f64;
        tail -= p;
        if tail < 0.0 {
            tail = 0.0;
        }
    }
    k + 2
}

/// <g^{Q_t}> by dense matrix exponential (dimension <= 500) or by
/// truncated-Taylor action of the exponential on the initial vector.
pub fn generating_function_oracle(
    l: usize,
    n: usize,
    init: &InitialCondition,
    bond: usize,
    g: C64,
    t: f64,
) -> Result<C64, String> {
    if t < 0.0 {
        return Err("time must be non-negative".into());
    }
    let space = enumerate_states(l, n);
    let p0 = initial_vector(&space, init)?;
    let m = build_generator(&space, bond, g);
    let d = space.dim();
    let v: Vec<C64> = if d <= 500 {
        let mut mt = m.clone();
        mt.scale(cr(t));
        let e = expm(&mt);
        let p0c: Vec<C64> = p0.iter().map(|&x| cr(x)).collect();
        e.matvec(&p0c)
    } else {
        let p0c: Vec<C64> = p0.iter().map(|&x| cr(x)).collect();
        crate::num::expm::expm_action(&m, &p0c, t)
    };
    Ok(v.iter().sum())
}

/// Same quantity through the alternate exponential scheme, for cross-checks.
pub fn generating_function_oracle_action(
    l: usize,
    n: usize,
    init: &InitialCondition,
    bond: usize,
    g: C64,
    t: f64,
) -> Result<C64, String> {
    let space = enumerate_states(l, n);
    let p0 = initial_vector(&space, init)?;
    let m = build_generator(&space, bond, g);
    let p0c: Vec<C64> = p0.iter().map(|&x| cr(x)).collect();
    let v = crate::num::expm::expm_action(&m, &p0c, t);
    Ok(v.iter().sum())
}

/// Exact finite-time height law at one site: grid of heights (as exact
/// numerators over L) with tail probabilities P(H_{site,t} >= H) and the
/// matching PMF.
pub struct HeightLaw {
    pub l: usize,
    /// Height grid numerators: H = numer / L, ascending.
    pub numer: Vec<i64>,
    /// P(H_{site,t} >= H) on the grid.
    pub cdf_geq: Vec<f64>,
    /// P(H_{site,t} = H) on the grid.
    pub pmf: Vec<f64>,
    /// Truncation level used for the integrated current.
    pub q_max: usize,
}

impl HeightLaw {
    /// P(H >= h) for h on the grid (h = numer/L within 1e-9).
    pub fn prob_geq(&self, h: f64) -> Result<f64, String> {
        let target = h * self.l as f64;
        let numer = target.round() as i64;
        if (target - numer as f64).abs() > 1e-9 {
            return Err(format!("height {h} is not on the lattice grid (multiples of 1/{})", self.l));
        }
        // grid is ascending; everything below the first entry has P = 1
        if self.numer.is_empty() || numer <= self.numer[0] {
            return Ok(1.0);
        }
        match self.numer.binary_search(&numer) {
            Ok(i) => Ok(self.cdf_geq[i]),
            Err(i) => {
                if i >= self.numer.len() {
                    Ok(0.0)
                } else {
                    Ok(self.cdf_geq[i])
                }
            }
        }
    }
}

/// Joint evolution of (configuration, integrated current across the bond
/// feeding `site`) and reduction to the height law at that site. The current
/// truncation follows the Poisson bound with mean N t.
pub fn height_law_oracle(
    l: usize,
    n: usize,
    init: &InitialCondition,
    site: usize,
    t: f64,
) -> Result<HeightLaw, String> {
    if !(1..=l).contains(&site) {
        return Err(format!("site {site} outside 1..={l}"));
    }
    if t < 0.0 {
        return Err("time must be non-negative".into());
    }
    let space = enumerate_states(l, n);
    init.validate(l, n)?;
    let d = space.dim();
    let q_max = poisson_qmax(n as f64 * t, 1e-14);
    let hops = space.hops();
    // Sparse action of the joint generator on vectors indexed c + d*q.
    // A hop across the bond increments q; hops above q_max are dropped
    // (their mass is below the Poisson tail bound).
    let outdeg: Vec<f64> = {
        let mut o = vec![0.0; d];
        for &(from, _, _) in &hops {
            o[from] += 1.0;
        }
        o
    };
    let dim = d * (q_max + 1);
    let matvec = |v: &[f64], out: &mut [f64]| {
        out.iter_mut().for_each(|x| *x = 0.0);
        for q in 0..=q_max {
            let base = d * q;
            for &(from, to, src) in &hops {
                let x = v[base + from];
                if x == 0.0 {
                    continue;
                }
                if src == site {
                    if q < q_max {
                        out[base + d + to] += x;
                    }
                } else {
                    out[base + to] += x;
                }
            }
            for c in 0..d {
                out[base + c] -= outdeg[c] * v[base + c];
            }
        }
    };
    // Start configurations and their weights.
    let starts: Vec<(usize, f64)> = match init.configuration(l, n) {
        Some(c) => vec![(space.index_of(&c), 1.0)],
        None => (0..d).map(|i| (i, 1.0 / d as f64)).collect(),
    };
    // Evolve by scaled truncated Taylor steps (norm of the joint generator
    // is bounded by 2N).
    let steps = ((2.0 * n as f64 * t / 2.0).ceil() as usize).max(1);
    let dt = t / steps as f64;
    // Accumulate P(height numerator = numer) over start configurations.
    let mut law: HashMap<i64, f64> = HashMap::new();
    let mut v = vec![0.0f64; dim];
    let mut term = vec![0.0f64; dim];
    let mut next = vec![0.0f64; dim];
    for &(c0, w0) in &starts {
        v.iter_mut().for_each(|x| *x = 0.0);
        v[c0] = 1.0;
        for _ in 0..steps {
            term.copy_from_slice(&v);
            let mut acc = v.clone();
            for k in 1..=200 {
                matvec(&term, &mut next);
                let f = dt / k as f64;
                let mut tn = 0.0;
                for (tm, x) in term.iter_mut().zip(next.iter()) {
                    *tm = f * x;
                    tn += tm.abs();
                }
                for (s, tm) in acc.iter_mut().zip(term.iter()) {
                    *s += tm;
                }
                if tn <= 1e-17 {
                    break;
                }
            }
            v.copy_from_slice(&acc);
        }
        let h0 = space.states[c0].height0_numer(site);
        for q in 0..=q_max {
            let mass: f64 = v[d * q..d * (q + 1)].iter().sum();
            if mass != 0.0 {
                *law.entry(h0 + (l as i64) * q as i64).or_insert(0.0) += w0 * mass;
            }
        }
    }
    let mut numer: Vec<i64> = law.keys().copied().collect();
    numer.sort_unstable();
    let pmf: Vec<f64> = numer.iter().map(|k| law[k]).collect();
    let mut cdf_geq = vec![0.0; pmf.len()];
    let mut tail = 0.0;
    for i in (0..pmf.len()).rev() {
        tail += pmf[i];
        cdf_geq[i] = tail;
    }
    Ok(HeightLaw {
        l,
        numer,
        cdf_geq,
        pmf,
        q_max,
    })
}

/// P(H_{site,t} >= H) from the truncated joint law.
pub fn height_probability_oracle(
    l: usize,
    n: usize,
    init: &InitialCondition,
    site: usize,
    t: f64,
    h: f64,
) -> Result<f64, String> {
    height_law_oracle(l, n, init, site, t)?.prob_geq(h)
}

/// All eigenvalues of M(g) by dense diagonalization.
pub fn dense_spectrum(l: usize, n: usize, g: C64) -> Result<Vec<C64>, String> {
    let space = enumerate_states(l, n);
    if space.dim() > 4000 {
        return Err(format!("dimension {} exceeds the dense limit 4000", space.dim()));
    }
    let m = build_generator(&space, l, g);
    eigenvalues(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{c, cis, rel_err};

    #[test]
    fn state_enumeration_matches_contract() {
        let s21 = enumerate_states(2, 1);
        assert_eq!(s21.states[0].positions(), vec![1]);
        assert_eq!(s21.states[1].positions(), vec![2]);
        let s42 = enumerate_states(4, 2);
        assert_eq!(s42.dim(), 6);
        let s52 = enumerate_states(5, 2);
        assert_eq!(s52.dim(), 10);
        assert_eq!(s52.states[0].positions(), vec![1, 2]);
        // index <-> configuration are inverse bijections
        for (i, st) in s52.states.iter().enumerate() {
            assert_eq!(s52.index_of(st), i);
        }
    }

    #[test]
    fn generator_of_two_site_chain() {
        let space = enumerate_states(2, 1);
        let g = c(0.3, 0.8);
        let m = build_generator(&space, 2, g);
        assert_eq!(m[(0, 0)], cr(-1.0));
        assert_eq!(m[(0, 1)], g);
        assert_eq!(m[(1, 0)], cr(1.0));
        assert_eq!(m[(1, 1)], cr(-1.0));
    }

    #[test]
    fn column_sums_vanish_at_g_one() {
        for (l, n) in [(4usize, 2usize), (5, 2), (6, 3)] {
            let space = enumerate_states(l, n);
            let m = build_generator(&space, l, cr(1.0));
            for j in 0..space.dim() {
                let s: C64 = (0..space.dim()).map(|i| m[(i, j)]).sum();
                assert!(s.norm() < 1e-14, "column {j} of ({l},{n}) sums to {s}");
            }
        }
    }

    #[test]
    fn gf_oracle_closed_form_two_sites() {
        // Two-state chain: <g^{Q_t}> =
        // e^{-t} [(1+sqrt g)^2 e^{sqrt g t} - (1-sqrt g)^2 e^{-sqrt g t}] / (4 sqrt g)
        let g = c(1.7, 0.6);
        let t = 1.3;
        let got = generating_function_oracle(2, 1, &InitialCondition::Stationary, 2, g, t).unwrap();
        let sg = g.sqrt();
        let expect = (-t as f64).exp()
            * ((cr(1.0) + sg) * (cr(1.0) + sg) * (sg * t).exp()
                - (cr(1.0) - sg) * (cr(1.0) - sg) * (-sg * t).exp())
            / (4.0 * sg);
        println!("gf {got} closed form {expect}");
        assert!(rel_err(got, expect) < 1e-12);
    }

    #[test]
    fn gf_oracle_is_one_at_g_one() {
        for t in [0.1, 0.5, 1.0, 2.0] {
            for (l, n, init) in [
                (5, 2, InitialCondition::Stationary),
                (5, 2, InitialCondition::DomainWall),
                (4, 2, InitialCondition::Flat),
                (6, 3, InitialCondition::Explicit(vec![1, 3, 4])),
            ] {
                let v = generating_function_oracle(l, n, &init, l, cr(1.0), t).unwrap();
                assert!(
                    (v - cr(1.0)).norm() < 1e-12,
                    "({l},{n}) t={t}: {v}"
                );
            }
        }
    }

    #[test]
    fn gf_schemes_cross_check() {
        let g = cr(2.0);
        let a = generating_function_oracle(5, 2, &InitialCondition::DomainWall, 5, g, 1.0).unwrap();
        let b = generating_function_oracle_action(5, 2, &InitialCondition::DomainWall, 5, g, 1.0)
            .unwrap();
        println!("dense {a} action {b}");
        assert!(rel_err(a, b) < 1e-10);
    }

    #[test]
    fn dense_spectrum_contracts() {
        // (2,1): eigenvalues -1 +- sqrt g
        let g = c(0.4, 0.9);
        let mut ev = dense_spectrum(2, 1, g).unwrap();
        ev.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let sg = g.sqrt();
        let mut expect = [cr(-1.0) - sg, cr(-1.0) + sg];
        expect.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (e, x) in ev.iter().zip(expect.iter()) {
            assert!((e - x).norm() < 1e-10);
        }
        // (5,2) at g=1: spectral abscissa 0 with a unique zero mode
        let ev = dense_spectrum(5, 2, cr(1.0)).unwrap();
        let zero_count = ev.iter().filter(|e| e.norm() < 1e-10).count();
        assert_eq!(zero_count, 1);
        assert!(ev.iter().all(|e| e.re <= 1e-10));
    }

    #[test]
    fn height_law_matches_generating_function() {
        // sum_H g^{(H - H_{i,0})} PMF(H) must reproduce <g^{Q_t}> for point
        // initial conditions (internal consistency of the joint evolution).
        let (l, n, t, site) = (5usize, 2usize, 0.9, 5usize);
        let init = InitialCondition::DomainWall;
        let law = height_law_oracle(l, n, &init, site, t).unwrap();
        let h0 = init
            .configuration(l, n)
            .unwrap()
            .height0_numer(site);
        let g = c(0.8, 0.5);
        let mut acc = cr(0.0);
        for (num, p) in law.numer.iter().zip(law.pmf.iter()) {
            let q = (num - h0) / l as i64;
            assert_eq!((num - h0) % l as i64, 0);
            acc += g.powi(q as i32) * *p;
        }
        let gf = generating_function_oracle(l, n, &init, site, g, t).unwrap();
        println!("from height law {acc} direct {gf}");
        assert!(rel_err(acc, gf) < 1e-9);
        // PMF sums to one, tail CDF is monotone, P at the floor is 1.
        let total: f64 = law.pmf.iter().sum();
        assert!((total - 1.0).abs() < 1e-10, "total {total}");
        for w in law.cdf_geq.windows(2) {
            assert!(w[0] >= w[1] - 1e-15);
        }
        assert!((law.prob_geq(h0 as f64 / l as f64).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn height_law_cross_checked_by_fourier_inversion() {
        // Independent scheme: P(Q = q) recovered from <g^{Q_t}> sampled at
        // roots of unity, per starting configuration.
        let (l, n, t, site) = (4usize, 2usize, 1.1, 4usize);
        let space = enumerate_states(l, n);
        let d = space.dim();
        let kk = poisson_qmax(n as f64 * t, 1e-14).next_power_of_two().max(32);
        // e^{tM(g_k)} for all K roots of unity
        let mut props: Vec<CMat> = Vec::with_capacity(kk);
        for k in 0..kk {
            let g = cis(2.0 * std::f64::consts::PI * k as f64 / kk as f64);
            let mut m = build_generator(&space, site, g);
            m.scale(cr(t));
            props.push(expm(&m));
        }
        let init = InitialCondition::Stationary;
        let law = height_law_oracle(l, n, &init, site, t).unwrap();
        let mut fourier: HashMap<i64, f64> = HashMap::new();
        for c0 in 0..d {
            let h0 = space.states[c0].height0_numer(site);
            for q in 0..kk {
                let mut p = cr(0.0);
                for (k, e) in props.iter().enumerate() {
                    let phase = cis(-2.0 * std::f64::consts::PI * (k * q) as f64 / kk as f64);
                    let col: C64 = (0..d).map(|i| e[(i, c0)]).sum();
                    p += phase * col;
                }
                let p = p.re / kk as f64;
                if p.abs() > 1e-13 {
                    *fourier.entry(h0 + (l as i64) * q as i64).or_insert(0.0) += p / d as f64;
                }
            }
        }
        for (num, pmf) in law.numer.iter().zip(law.pmf.iter()) {
            let f = fourier.get(num).copied().unwrap_or(0.0);
            assert!(
                (f - pmf).abs() < 1e-10,
                "numer {num}: joint {pmf} fourier {f}"
            );
        }
    }
}

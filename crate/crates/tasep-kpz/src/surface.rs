//! Sheet combinatorics and topology of the spectral curve.
//!
//! The Bethe roots for N particles on L sites are the L branches of the
//! algebraic curve B(1-y)^L + (-1)^N y^N = 0 over the B sphere.  An eigenstate
//! picks N of the L branches, so the eigenvalue surface is a covering of the
//! B sphere with binomial(L, N) sheets labelled by N-element subsets
//! J of {1, ..., L}.  The covering is ramified over B = 0, B = B_* and
//! B = infinity only.  Analytic continuation of the root labels along loops in
//! the B plane (with the labelling convention of the `bethe` module) induces
//! the permutations
//!
//! * b = (1 2 ... N)(N+1 ... L) for a counterclockwise loop around B = 0
//!   inside the branch circle: the small and large clusters each shift
//!   forward by one;
//! * a = (1 2 ... L) for a counterclockwise loop enclosing both 0 and B_*:
//!   all labels shift forward cyclically;
//! * c = b^{-1} a for a tight counterclockwise loop around B_*, which is the
//!   transposition exchanging labels N and L (one small and one large root
//!   collide at the branch point).
//!
//! Components of the surface are orbits of subsets under the group generated
//! by a and b; the surface is connected exactly when gcd(L, N) = 1.
//! Ramification profiles over the three branch points are the cycle types of
//! the induced subset permutations, and the genus follows from the
//! Riemann-Hurwitz formula.  The tests confirm that numerical continuation of
//! the roots reproduces these permutations.

use crate::num::binomial;

/// Monodromy generator of the covering: `A` is a counterclockwise loop
/// enclosing both branch points 0 and B_*, `B` a counterclockwise loop around
/// 0 only, and `C = B^{-1} A` a tight counterclockwise loop around B_*.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Generator {
    A,
    B,
    C,
}

/// Permutation of root labels (0-based) induced by one monodromy generator.
pub fn label_permutation(gen: Generator, l: usize, n: usize) -> Vec<usize> {
    assert!(n >= 1 && n < l, "need 1 <= N < L");
    match gen {
        Generator::A => (0..l).map(|j| (j + 1) % l).collect(),
        Generator::B => (0..l)
            .map(|j| {
                if j < n {
                    (j + 1) % n
                } else {
                    n + (j - n + 1) % (l - n)
                }
            })
            .collect(),
        Generator::C => {
            let mut p: Vec<usize> = (0..l).collect();
            p.swap(n - 1, l - 1);
            p
        }
    }
}

/// Composition p.q (apply q first, then p).
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&j| p[j]).collect()
}

/// Image of the sheet label J (1-based particle labels, sorted) under a
/// monodromy generator.
pub fn monodromy(gen: Generator, l: usize, n: usize, j_set: &[usize]) -> Vec<usize> {
    assert_eq!(j_set.len(), n, "sheet label must have N elements");
    for w in j_set.windows(2) {
        assert!(w[0] < w[1], "sheet label must be sorted and duplicate-free");
    }
    assert!(
        j_set.iter().all(|&j| j >= 1 && j <= l),
        "labels must lie in 1..=L"
    );
    let perm = label_permutation(gen, l, n);
    let mut image: Vec<usize> = j_set.iter().map(|&j| perm[j - 1] + 1).collect();
    image.sort_unstable();
    image
}

fn binom_usize(n: usize, k: usize) -> usize {
    let v = binomial(n as u64, k as u64);
    assert!(v <= usize::MAX as u128);
    v as usize
}

/// All N-subsets of {0..L-1} as bitmasks, in colexicographic (ascending mask)
/// order.
fn subsets_in_colex_order(l: usize, n: usize) -> Vec<u32> {
    assert!(l <= 31 && n >= 1 && n <= l);
    let d = binom_usize(l, n);
    assert!(d <= 2_000_000, "sheet count exceeds the enumeration cap");
    let mut out = Vec::with_capacity(d);
    let limit: u32 = 1 << l;
    let mut m: u32 = (1 << n) - 1;
    while m < limit {
        out.push(m);
        // Gosper's hack: next mask with the same popcount.
        let c = m & m.wrapping_neg();
        let r = m.wrapping_add(c);
        if r >= limit || r < m {
            break;
        }
        m = (((r ^ m) >> 2) / c) | r;
    }
    assert_eq!(out.len(), d);
    out
}

/// Colexicographic rank of a subset bitmask among all subsets of equal size.
fn colex_rank(mask: u32) -> usize {
    let mut rank = 0usize;
    let mut m = mask;
    let mut i = 0usize;
    while m != 0 {
        let pos = m.trailing_zeros() as usize;
        rank += binom_usize(pos, i + 1);
        i += 1;
        m &= m - 1;
    }
    rank
}

fn apply_perm_to_mask(perm: &[usize], mask: u32) -> u32 {
    let mut out = 0u32;
    let mut m = mask;
    while m != 0 {
        let pos = m.trailing_zeros() as usize;
        out |= 1 << perm[pos];
        m &= m - 1;
    }
    out
}

/// Permutation induced on sheets (indexed by colex rank) by a label
/// permutation.
fn sheet_permutation(perm: &[usize], masks: &[u32]) -> Vec<u32> {
    masks
        .iter()
        .map(|&m| colex_rank(apply_perm_to_mask(perm, m)) as u32)
        .collect()
}

fn mask_to_labels(mask: u32) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

/// Orbits of sheet labels under the monodromy group generated by a and b.
/// Orbits are sorted by decreasing size (ties by their smallest member in
/// colexicographic order) and each orbit lists its sheet labels in
/// colexicographic order.
pub fn components(l: usize, n: usize) -> Vec<Vec<Vec<usize>>> {
    let masks = subsets_in_colex_order(l, n);
    let pa = sheet_permutation(&label_permutation(Generator::A, l, n), &masks);
    let pb = sheet_permutation(&label_permutation(Generator::B, l, n), &masks);
    let d = masks.len();
    let mut seen = vec![false; d];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for seed in 0..d {
        if seen[seed] {
            continue;
        }
        let mut orbit = vec![seed];
        seen[seed] = true;
        let mut head = 0;
        while head < orbit.len() {
            let r = orbit[head];
            head += 1;
            for next in [pa[r] as usize, pb[r] as usize] {
                if !seen[next] {
                    seen[next] = true;
                    orbit.push(next);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits.sort_by(|x, y| y.len().cmp(&x.len()).then(x[0].cmp(&y[0])));
    orbits
        .into_iter()
        .map(|orbit| orbit.into_iter().map(|r| mask_to_labels(masks[r])).collect())
        .collect()
}

fn cycle_profile(perm: &[u32]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut r = start;
        while !seen[r] {
            seen[r] = true;
            len += 1;
            r = perm[r] as usize;
        }
        lengths.push(len);
    }
    lengths.sort_unstable_by(|x, y| y.cmp(x));
    lengths
}

/// Topology of the eigenvalue surface: component count, ramification profiles
/// over the three branch points of B, and the total genus (sum over
/// components) from the Riemann-Hurwitz formula.
#[derive(Clone, Debug)]
pub struct SurfaceTopology {
    pub l: usize,
    pub n: usize,
    /// Number of sheets, binomial(L, N).
    pub sheets: usize,
    /// Number of connected components K; equals 1 iff gcd(L, N) = 1.
    pub component_count: usize,
    /// Orbit sizes, sorted descending.
    pub orbit_sizes: Vec<usize>,
    /// Cycle lengths of the subset permutation induced by b (point B = 0).
    pub profile_zero: Vec<usize>,
    /// Cycle lengths induced by c (point B = B_*): transposition pairs and
    /// fixed sheets only.
    pub profile_branch: Vec<usize>,
    /// Cycle lengths induced by a (point B = infinity).
    pub profile_infinity: Vec<usize>,
    /// Total genus, from 2 - 2g = 2 d - sum over ramification points of
    /// (e - 1) applied per component and summed.
    pub genus: i64,
}

/// Ramification profiles and genus of the covering for given (L, N).
pub fn ramification_and_genus(l: usize, n: usize) -> SurfaceTopology {
    let masks = subsets_in_colex_order(l, n);
    let d = masks.len();
    let pa = sheet_permutation(&label_permutation(Generator::A, l, n), &masks);
    let pb = sheet_permutation(&label_permutation(Generator::B, l, n), &masks);
    let pc = sheet_permutation(&label_permutation(Generator::C, l, n), &masks);

    let orbits = components(l, n);
    let component_count = orbits.len();
    let orbit_sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();

    let profile_infinity = cycle_profile(&pa);
    let profile_zero = cycle_profile(&pb);
    let profile_branch = cycle_profile(&pc);

    // Riemann-Hurwitz: 2K - 2g_total = 2d - sum_p (e_p - 1), with the sum
    // running over all ramification points above {0, B_*, infinity}.
    let excess = |profile: &[usize]| -> usize { d - profile.len() };
    let total_excess = excess(&profile_zero) + excess(&profile_branch) + excess(&profile_infinity);
    assert!(total_excess % 2 == 0, "ramification excess must be even");
    let genus = component_count as i64 - d as i64 + (total_excess / 2) as i64;
    assert!(genus >= 0, "total genus must be non-negative");

    SurfaceTopology {
        l,
        n,
        sheets: d,
        component_count,
        orbit_sizes,
        profile_zero,
        profile_branch,
        profile_infinity,
        genus,
    }
}

/// Number of lattice points strictly inside the convex hull of the given
/// exponent support (the Newton polygon), by Pick's theorem.  A degenerate
/// support (hull of zero area) has no interior points.
pub fn newton_polygon_genus(support: &[(i64, i64)]) -> usize {
    let mut pts: Vec<(i64, i64)> = support.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return 0;
    }
    // Andrew's monotone chain convex hull, strict turns so collinear points
    // are dropped.
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| -> i64 {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    let hull: Vec<(i64, i64)> = lower.into_iter().chain(upper).collect();
    if hull.len() < 3 {
        return 0;
    }
    // Pick's theorem: interior = area - boundary/2 + 1.
    let mut twice_area: i64 = 0;
    let mut boundary: i64 = 0;
    for i in 0..hull.len() {
        let p = hull[i];
        let q = hull[(i + 1) % hull.len()];
        twice_area += p.0 * q.1 - q.0 * p.1;
        boundary += gcd64((q.0 - p.0).abs(), (q.1 - p.1).abs());
    }
    let twice_area = twice_area.abs();
    let interior2 = twice_area - boundary + 2;
    if interior2 <= 0 {
        0
    } else {
        assert!(interior2 % 2 == 0);
        (interior2 / 2) as usize
    }
}

fn gcd64(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bethe;
    use crate::num::C64;

    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    fn lcm(a: usize, b: usize) -> usize {
        a / gcd(a, b) * b
    }

    fn perm_power(p: &[usize], k: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..p.len()).collect();
        for _ in 0..k {
            out = compose(p, &out);
        }
        out
    }

    #[test]
    fn generator_relations_hold() {
        for (l, n) in [(5usize, 2usize), (7, 3), (4, 2), (6, 3), (9, 4), (12, 5)] {
            let a = label_permutation(Generator::A, l, n);
            let b = label_permutation(Generator::B, l, n);
            let c = label_permutation(Generator::C, l, n);
            let id: Vec<usize> = (0..l).collect();
            assert_eq!(perm_power(&a, l), id, "a^L = id fails for ({l},{n})");
            assert_eq!(
                perm_power(&b, lcm(n, l - n)),
                id,
                "b^lcm(N,L-N) = id fails for ({l},{n})"
            );
            // a = b.c with c applied first: the outer loop is the inner loop
            // composed with the tight loop around B_*.
            assert_eq!(compose(&b, &c), a, "a = b c fails for ({l},{n})");
            // c is the transposition exchanging labels N and L.
            let mut t: Vec<usize> = (0..l).collect();
            t.swap(n - 1, l - 1);
            assert_eq!(c, t);
        }
    }

    #[test]
    fn monodromy_contract_examples() {
        assert_eq!(monodromy(Generator::A, 5, 2, &[1, 2]), vec![2, 3]);
        assert_eq!(monodromy(Generator::B, 5, 2, &[1, 3]), vec![2, 4]);
        let mut j = vec![1, 4, 5];
        for _ in 0..7 {
            j = monodromy(Generator::A, 7, 3, &j);
        }
        assert_eq!(j, vec![1, 4, 5], "a applied L times is the identity");
    }

    #[test]
    fn components_match_coprimality_up_to_l_twelve() {
        for l in 2..=12usize {
            for n in 1..l {
                let orbits = components(l, n);
                let total: usize = orbits.iter().map(|o| o.len()).sum();
                assert_eq!(total, binom_usize(l, n));
                let k = orbits.len();
                if gcd(l, n) == 1 {
                    assert_eq!(k, 1, "coprime ({l},{n}) must be connected");
                } else {
                    assert!(k > 1, "non-coprime ({l},{n}) must be disconnected");
                }
            }
        }
    }

    #[test]
    fn four_two_orbits_are_the_known_split() {
        let orbits = components(4, 2);
        let sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
        assert_eq!(sizes, vec![4, 2]);
        // The size-4 orbit is the one reachable from the flat configuration
        // {2, 4}; it consists of the subsets {1,2},{2,3},{3,4},{1,4}... the
        // nearest-neighbour pairs on the ring of four sites (colex order).
        let big: &Vec<Vec<usize>> = &orbits[0];
        let expect = [vec![1, 2], vec![2, 3], vec![1, 4], vec![3, 4]];
        assert_eq!(big.as_slice(), expect.as_slice());
        assert_eq!(orbits[1].as_slice(), [vec![1, 3], vec![2, 4]].as_slice());
    }

    #[test]
    fn genus_golden_values() {
        let t52 = ramification_and_genus(5, 2);
        println!(
            "(5,2): K={} genus={} profiles 0:{:?} *:{:?} inf:{:?}",
            t52.component_count,
            t52.genus,
            t52.profile_zero,
            t52.profile_branch,
            t52.profile_infinity
        );
        assert_eq!(t52.component_count, 1);
        assert_eq!(t52.genus, 0, "(5,2) surface is a sphere");

        let t73 = ramification_and_genus(7, 3);
        println!("(7,3): K={} genus={}", t73.component_count, t73.genus);
        assert_eq!(t73.component_count, 1);
        assert_eq!(t73.genus, 1, "(7,3) surface is a torus");

        let t114 = ramification_and_genus(11, 4);
        println!(
            "(11,4): K={} genus={} sheets={}",
            t114.component_count, t114.genus, t114.sheets
        );
        assert_eq!(t114.component_count, 1);
        // Cross-checked against a Burnside count of the cycle numbers:
        // C_b = 18, C_a = 30, C_c = 330 - binomial(9,3) = 246, so
        // g = 1 - 330 + (990 - 18 - 30 - 246)/2 = 19.
        assert_eq!(t114.genus, 19);
        // The large-L density estimate genus ~ rho(1-rho)/2 * sheets is still
        // far off at this size; report the ratio rather than enforcing it.
        let rho = 4.0 / 11.0;
        let density = t114.genus as f64 / t114.sheets as f64;
        println!(
            "(11,4): genus density {:.4} vs asymptotic rho(1-rho)/2 = {:.4}",
            density,
            rho * (1.0 - rho) / 2.0
        );

        let t42 = ramification_and_genus(4, 2);
        assert_eq!(t42.component_count, 2);
        assert_eq!(t42.genus, 0, "(4,2): two spheres");
    }

    #[test]
    fn ramification_profiles_are_consistent() {
        for (l, n) in [(5usize, 2usize), (6, 2), (6, 3), (7, 3), (8, 3), (9, 4)] {
            let t = ramification_and_genus(l, n);
            let d = t.sheets;
            for profile in [&t.profile_zero, &t.profile_branch, &t.profile_infinity] {
                assert_eq!(profile.iter().sum::<usize>(), d);
            }
            // The branch-point permutation c pairs up sheets containing
            // exactly one of the two colliding labels.
            let pairs = binom_usize(l - 2, n - 1);
            let twos = t.profile_branch.iter().filter(|&&e| e == 2).count();
            let ones = t.profile_branch.iter().filter(|&&e| e == 1).count();
            assert_eq!(twos, pairs);
            assert_eq!(ones + 2 * twos, d);
        }
    }

    #[test]
    fn numerical_monodromy_matches_combinatorial() {
        // Continuation loops around B = 0 and around both branch points must
        // reproduce the combinatorial generators b and a for every system
        // size with at most 126 sheets.
        for l in 2..=9usize {
            for n in 1..l {
                let bs = bethe::bstar(l, n).abs();
                let frame0 = bethe::reference_roots(l, n, 0.1 * bs).expect("reference frame");

                let mut inner = frame0.clone();
                bethe::advance_frame(&mut inner, C64::new(0.5 * bs, 0.0), 0).unwrap();
                let loop_b = bethe::circle_path(0.5 * bs, 0.0, 1, 32);
                let after_b = bethe::continue_roots(&inner, &loop_b).unwrap();
                let perm_b = bethe::loop_permutation(&inner, &after_b).unwrap();
                assert_eq!(
                    perm_b,
                    label_permutation(Generator::B, l, n),
                    "inner loop mismatch at ({l},{n})"
                );

                let mut outer = inner.clone();
                bethe::advance_frame(&mut outer, C64::new(2.0 * bs, 0.0), 0).unwrap();
                let loop_a = bethe::circle_path(2.0 * bs, 0.0, 1, 32);
                let after_a = bethe::continue_roots(&outer, &loop_a).unwrap();
                let perm_a = bethe::loop_permutation(&outer, &after_a).unwrap();
                assert_eq!(
                    perm_a,
                    label_permutation(Generator::A, l, n),
                    "outer loop mismatch at ({l},{n})"
                );
            }
        }
    }

    #[test]
    fn tight_loop_around_branch_point_is_a_small_large_transposition() {
        for (l, n) in [(5usize, 2usize), (7, 3), (4, 2)] {
            let bs = bethe::bstar(l, n).abs();
            let frame0 = bethe::reference_roots(l, n, 0.1 * bs).expect("reference frame");
            // Walk from the reference point to a base point next to B_* on a
            // path through the upper half plane, then circle B_* tightly.
            let r = 0.05 * bs;
            let base = C64::new(-bs + r, 0.0);
            let path = [
                C64::new(0.4 * bs, 0.2 * bs),
                C64::new(0.0, 0.5 * bs),
                C64::new(-0.6 * bs, 0.4 * bs),
                base,
            ];
            let at_base = bethe::continue_roots(&frame0, &path).unwrap();
            let center = C64::new(-bs, 0.0);
            let circle: Vec<C64> = (1..=64)
                .map(|k| {
                    let phi = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
                    center + C64::new(r * phi.cos(), r * phi.sin())
                })
                .collect();
            let after = bethe::continue_roots(&at_base, &circle).unwrap();
            let perm = bethe::loop_permutation(&at_base, &after).unwrap();
            let moved: Vec<usize> = (0..l).filter(|&j| perm[j] != j).collect();
            assert_eq!(
                moved.len(),
                2,
                "loop around B_* must be a transposition, got {perm:?} at ({l},{n})"
            );
            assert_eq!(perm[moved[0]], moved[1]);
            assert_eq!(perm[moved[1]], moved[0]);
            assert!(
                moved[0] < n && moved[1] >= n,
                "transposition must exchange a small and a large label, got {moved:?}"
            );
            println!(
                "({l},{n}): tight loop around B_* exchanges labels {} and {}",
                moved[0] + 1,
                moved[1] + 1
            );
        }
    }

    #[test]
    fn newton_polygon_counts() {
        assert_eq!(newton_polygon_genus(&[(0, 0), (2, 0), (0, 2)]), 0);
        assert_eq!(newton_polygon_genus(&[(0, 0), (3, 0), (0, 3)]), 1);
        assert_eq!(newton_polygon_genus(&[(0, 0), (2, 0), (2, 2), (0, 2)]), 1);
        // Degenerate supports.
        assert_eq!(newton_polygon_genus(&[(0, 0), (1, 1), (2, 2), (3, 3)]), 0);
        assert_eq!(newton_polygon_genus(&[(1, 1)]), 0);
        // Collinear edge points must not disturb the count.
        assert_eq!(
            newton_polygon_genus(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 3), (1, 2), (2, 1)]),
            1
        );
    }

    #[test]
    fn newton_polygon_of_three_state_counting_chain() {
        // Characteristic polynomial of the cyclic three-state generator whose
        // 3 -> 1 transition carries the counting weight g, expanded
        // symbolically in (g, mu).  Entries are polynomials with integer
        // coefficients; exponent pairs (j, k) stand for g^j mu^k.
        use std::collections::HashMap;
        type Poly2 = HashMap<(i64, i64), i64>;
        let poly = |terms: &[((i64, i64), i64)]| -> Poly2 { terms.iter().cloned().collect() };
        let add = |p: &Poly2, q: &Poly2| -> Poly2 {
            let mut out = p.clone();
            for (&e, &c) in q {
                *out.entry(e).or_insert(0) += c;
            }
            out.retain(|_, c| *c != 0);
            out
        };
        let mul = |p: &Poly2, q: &Poly2| -> Poly2 {
            let mut out = Poly2::new();
            for (&(ja, ka), &ca) in p {
                for (&(jb, kb), &cb) in q {
                    *out.entry((ja + jb, ka + kb)).or_insert(0) += ca * cb;
                }
            }
            out.retain(|_, c| *c != 0);
            out
        };
        // M - mu Id for the ring 1 -> 2 -> 3 -> 1 with the last hop counted.
        let diag = poly(&[((0, 0), -1), ((0, 1), -1)]);
        let one = poly(&[((0, 0), 1)]);
        let zero = Poly2::new();
        let gg = poly(&[((1, 0), 1)]);
        let m = [
            [diag.clone(), zero.clone(), gg],
            [one.clone(), diag.clone(), zero.clone()],
            [zero, one, diag],
        ];
        // 3x3 determinant by permutation expansion.
        let perms: [([usize; 3], i64); 6] = [
            ([0, 1, 2], 1),
            ([1, 2, 0], 1),
            ([2, 0, 1], 1),
            ([0, 2, 1], -1),
            ([1, 0, 2], -1),
            ([2, 1, 0], -1),
        ];
        let mut det = Poly2::new();
        for (p, sign) in perms {
            let mut term = poly(&[((0, 0), sign)]);
            for (row, &col) in p.iter().enumerate() {
                term = mul(&term, &m[row][col]);
            }
            det = add(&det, &term);
        }
        let support: Vec<(i64, i64)> = det.keys().cloned().collect();
        // det = -(1 + mu)^3 + g: five monomials, genus-zero polygon.
        assert_eq!(det.get(&(1, 0)), Some(&1));
        assert_eq!(det.get(&(0, 3)), Some(&-1));
        assert_eq!(newton_polygon_genus(&support), 0);
    }
}

//! Universal KPZ fixed-point scaling functions in finite volume.
//!
//! Everything in this module lives at the level of the rescaled height
//! h(x,t) on the unit circle, after the lattice gas has been blown up to
//! the KPZ scale: positions are measured in units of the system size L,
//! times in units of L^(3/2), and heights in units of sqrt(L). The whole
//! spectrum of relaxation modes survives this limit, and every spectral
//! quantity becomes an explicit function built from half-integer
//! polylogarithms Li_{5/2}, Li_{3/2}, Li_{1/2} evaluated at -e^v.
//!
//! Submodules:
//!
//! * [`polylog`]: the function chi(v) = -Li_{5/2}(-e^v)/sqrt(2 pi) and its
//!   v-derivatives, continued to complex v with the rotated branch cuts
//!   i(-inf,-pi] and i[pi,+inf) via a Hurwitz zeta representation.
//! * [`excitation`]: particle-hole excitations of the Fermi sea, encoded by
//!   two finite sets P, H of half-integers, together with the deformed
//!   function chi_PH carrying one extra branch term per excited momentum.
//! * [`dfactor`]: the regularized exponential prefactor D_PH built from the
//!   divergent integral of chi_PH''(u)^2, with the cutoff dependence
//!   removed in closed form.
//! * [`scaling`]: eigenvalues e_n(s), prefactors theta_n(s), the height
//!   generating function, cumulants, probability densities, two-time
//!   stationary covariances and spectral gaps.
//! * [`stationary`]: stationary large deviations of the height for periodic
//!   and open geometries (chi_sigma family), their cumulants, and the
//!   Edwards-Wilkinson large deviation function.
//! * [`bridges`]: Monte Carlo evaluation of the theta prefactors from
//!   extreme values of non-intersecting Brownian bridges.

pub mod polylog;
pub mod excitation;
pub mod dfactor;
pub mod scaling;
pub mod stationary;
pub mod bridges;

#pragma once

#include "ec/types.hpp"

namespace ec {

// eta1, eta2 = tau*eta1 - 2 pi i, and the invariants g2, g3 at one tau.
struct QuasiPeriods {
    cplx eta1;
    cplx eta2;
    cplx g2;
    cplx g3;
    cplx d12;  // eta1^2 - g2/12, summed as -32 pi^4 sum n sigma1(n) q^n
};

struct Invariants {
    cplx g2;
    cplx g3;
};

struct Weierstrass {
    cplx wp;
    cplx wp_prime;
    cplx zeta;
};

struct QuasiDerivatives {
    cplx eta1_p;
    cplx g2_p;
    cplx g3_p;
};

// Smallest N >= 1 with sum_{k>N} k^3 |q|^k < eps / (320 pi^4), |q| = exp(-2 pi im_tau).
int choose_truncation(double im_tau, double eps, int max_terms = 256);

// Tail sum_{k>n} k^p rho^k of the geometric majorant.
double majorant_tail(double rho, int power, int n);

QuasiPeriods eval_basics(const TauPoint& tau, const PrecisionPolicy& pp = {});

cplx eval_eta1(const TauPoint& tau, const PrecisionPolicy& pp = {});
cplx eval_eta2(const TauPoint& tau, const PrecisionPolicy& pp = {});
cplx eval_E2(const TauPoint& tau, const PrecisionPolicy& pp = {});
cplx eval_E4(const TauPoint& tau, const PrecisionPolicy& pp = {});
Invariants eval_invariants(const TauPoint& tau, const PrecisionPolicy& pp = {});

Weierstrass eval_weierstrass(const LatticeCoord& z, const TauPoint& tau, const PrecisionPolicy& pp = {});

// e_k = wp(omega_k / 2), omega_1 = 1, omega_2 = tau, omega_3 = 1 + tau.
cplx eval_ek(int k, const TauPoint& tau, const PrecisionPolicy& pp = {});

QuasiDerivatives eval_derivatives(const TauPoint& tau, const PrecisionPolicy& pp = {});
QuasiDerivatives derivatives_from(const QuasiPeriods& qp);

// Ramanujan: E2' = (pi i / 6)(E2^2 - E4).
cplx eval_E2_prime(const TauPoint& tau, const PrecisionPolicy& pp = {});

// Majorant of the truncation error for a weight-k quantity at tau.
double error_bound(const TauPoint& tau, int weight, const PrecisionPolicy& pp = {});

namespace detail {

// Values at a lattice point, split into the principal part at z = 0 and a
// regular remainder:  zeta = 1/z + zeta_reg,  wp = 1/z^2 + wp_reg,
// wp' = -2/z^3 + wpp_reg.  hecke_reg is Z_{r,s} - 1/z.
struct PointBundle {
    cplx z;          // reduced z1 = r1 + s1 tau1
    cplx lambda;     // automorphy factor to the caller's tau
    cplx hecke_reg;
    cplx zeta_reg;
    cplx wp_reg;
    cplx wpp_reg;
    cplx zeta_shift; // m eta1 + n eta2 from the lattice reduction
    QuasiPeriods qp; // at the reduced tau
    // Split used away from z = 0: pi cot(pi z) = K0 + kappa with K0 = -+ pi i,
    // and the q-dependent parts of Z, wp, wp'.
    double s_red = 0.0;
    bool small_z = false;
    cplx K0, kappa;
    cplx d_zeta, d_wp, d_wpp;
};

// Evaluates at (r, s | tau), reducing tau to F when Im tau is low and then
// z into the fundamental parallelogram. Throws PoleAtLattice on lattice points.
PointBundle point_bundle(double r, double s, const TauPoint& tau, const PrecisionPolicy& pp);

}  // namespace detail

}  // namespace ec

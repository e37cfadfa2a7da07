#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ec/modular_action.hpp"
#include "ec/parallel.hpp"
#include "ec/types.hpp"
#include "ec/zero_locator.hpp"

namespace ec {

enum class Branch { minus, zero, plus };
const char* branch_name(Branch b);
Branch parse_branch(const std::string& s);
// Branch of the parameter C; throws std::domain_error for C in {0, 1}.
Branch branch_of(double C);

struct CurveSample {
    double C = 0.0;
    TauPoint tau{0.0, 1.0};
    Branch branch = Branch::zero;
    double residual = 0.0;  // |f_C(tau)| / fC_scale(C)
    cplx root = 0.0;        // sqrt(g2/12) at tau, followed along the curve
};

struct TraceResult {
    std::vector<CurveSample> samples;
    Sign phi_sign = Sign::minus;  // locked at the first sample, sqrt(g2/12) followed continuously
};

struct TraceOptions {
    bool verify_count = true;
    ContourParams contour;
    Exec exec = Exec::parallel;
};

// Output grid: uniform in C on the zero branch, uniform in arctan C on the others.
std::vector<double> trace_grid(Branch b, double C_lo, double C_hi, int steps);

TraceResult trace_curve(Branch b, double C_lo, double C_hi, int steps, const PrecisionPolicy& pp = {},
                        const TraceOptions& opts = {});

// theta(b) = b eta1 / 2 pi and theta1(b) = eta1^2 / (eta1^2 - g2/12) at 1/2 + ib.
std::pair<double, double> theta_pair(double b, const PrecisionPolicy& pp = {});

struct SpecialMinus {
    TauPoint tau{0.5, 0.7};
    double C_minus = 0.0;  // the C < 0 with tau(C) = tau
    double C_plus = 0.0;   // the C > 1 with tau(C) = tau
    double residual = 0.0; // max f_C residual of the two
};
SpecialMinus special_tau_minus_full(const PrecisionPolicy& pp = {});
TauPoint special_tau_minus(const PrecisionPolicy& pp = {});

TauPoint special_tau_half(const PrecisionPolicy& pp = {});

// d/db eta1(1/2 + ib), equal to -(eta1^2 - g2/12) / 2 pi.
double deta1_db(double b, const PrecisionPolicy& pp = {});
double special_b0(const PrecisionPolicy& pp = {});

// det D^2 G2 at the nontrivial critical pair for the given sign; sqrt(g2/12)
// is taken nearest to branch.anchor, which is updated.
double hessian_detG2(Sign sign, const TauPoint& tau, BranchState& branch, const PrecisionPolicy& pp = {});
// Magnitude used to judge a determinant as zero.
double hessian_scale(Sign sign, const TauPoint& tau, BranchState& branch, const PrecisionPolicy& pp = {});

struct CriticalPoint {
    MoebiusMap gamma;
    TauPoint tau_star{0.0, 1.0};
    double residual = 0.0;  // |E2'(tau_star)|
    int count = -1;         // contour count of f_{-d/c} over F0
};

std::vector<CriticalPoint> critical_points_E2(int max_c, const PrecisionPolicy& pp = {},
                                              Exec exec = Exec::parallel);

// Zero of Z^{(2)}_{(2-s)/2, s} in F0, asserted to lie on Re = 1/2.
TauPoint appendix_tau_s(double s, const PrecisionPolicy& pp = {});

struct BStar {
    double value = 0.0;
    double order = 0.0;        // estimated convergence order in s
    double b[3] = {0, 0, 0};   // b_s at s = 4e-3, 2e-3, 1e-3
};
BStar appendix_b_star(const PrecisionPolicy& pp = {});

struct SymmetryReport {
    int pairs_reflect = 0;     // tau(1-C) = 1 - conj tau(C)
    double max_reflect = 0.0;
    int pairs_moebius = 0;     // tau(1/(1-C)) = 1/(1-tau(C))
    double max_moebius = 0.0;
};

SymmetryReport verify_symmetries(const std::vector<CurveSample>& samples, const PrecisionPolicy& pp = {},
                                 Exec exec = Exec::parallel);

// Values of f on an nx by ny grid over [x0,x1] x [y0,y1], row-major in y.
std::vector<cplx> grid_eval(const std::function<cplx(const TauPoint&)>& f, double x0, double x1, int nx, double y0,
                            double y1, int ny, Exec exec = Exec::parallel);

}  // namespace ec

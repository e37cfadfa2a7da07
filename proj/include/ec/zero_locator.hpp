#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ec/parallel.hpp"
#include "ec/types.hpp"

namespace ec {

using HoloFn = std::function<cplx(cplx)>;

// Closed, positively oriented boundary made of parametrized pieces
// t in [0,1]; the end of each piece is the start of the next.
struct Contour {
    struct Piece {
        std::function<cplx(double)> path;
        int base_samples = 16;
    };
    std::vector<Piece> pieces;
    double max_phase_step = pi / 2;
    std::size_t max_points = std::size_t(1) << 18;

    static Contour polygon(const std::vector<cplx>& vertices, int samples_per_edge = 16);
    static Contour rectangle(double x0, double x1, double y0, double y1, int samples_per_edge = 16);
};

struct ContourParams {
    double t_top = 6.0;
    double cusp_delta = 0.08;
    double zero_threshold = 1e-9;
    Exec exec = Exec::parallel;
};

// Lower boundary height of the truncated F0 at abscissa x in [0,1].
double truncated_F0_floor(double x, double cusp_delta);

// Boundary of {0 <= Re <= 1, Im <= t_top, |tau - 1/2| >= 1/2} minus the two
// horodisks of diameter cusp_delta tangent at 0 and 1.
Contour truncated_F0(double t_top, double cusp_delta);

// Boundary of the part of the truncated F0 inside [x0,x1] x [y0,y1].
Contour F0_cell(double x0, double x1, double y0, double y1, double cusp_delta);

struct CountResult {
    int count = 0;
    std::size_t points_used = 0;
};

CountResult count_zeros(const HoloFn& f, const Contour& contour, double zero_threshold = 1e-9,
                        Exec exec = Exec::parallel);

// Newton iteration; a central finite difference replaces an empty fprime.
TauPoint newton_refine(const HoloFn& f, const HoloFn& fprime, const TauPoint& tau0, double tol,
                       int max_iter = 50, double fd_step = 1e-7);

// f_C = 12 (C eta1 - eta2)^2 - g2 (C - tau)^2 and its tau-derivative.
cplx eval_fC(double C, const TauPoint& tau, const PrecisionPolicy& pp = {});
cplx eval_fC_prime(double C, const TauPoint& tau, const PrecisionPolicy& pp = {});

// Zero count of f_C / fC_scale(C) over the truncated F0. For C = 0 (C = 1) the
// function decays like e^{-2 pi i / tau} at the cusp 0 (1), so it is counted
// after multiplying by the zero-free factor e^{2 pi i / tau} (e^{2 pi i / (tau - 1)}).
CountResult count_zeros_fC(double C, const PrecisionPolicy& pp = {}, const ContourParams& cp = {});

// Residuals of f_C are reported relative to this scale.
inline double fC_scale(double C) { return (1.0 + std::abs(C)) * (1.0 + std::abs(C)); }

enum class Sign { plus, minus };

inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }
inline const char* sign_name(Sign s) { return s == Sign::plus ? "plus" : "minus"; }

// Branch of sqrt(g2/12) followed by continuity from `anchor`.
struct BranchState {
    Sign sign = Sign::minus;
    cplx anchor = pi * pi / 3.0;
};

// (pi^2/3) sqrt(E4) with the principal root: equals pi^2/3 at i*infinity,
// cut where E4 is real and negative.
cplx sqrt_g2_12(const TauPoint& tau, const PrecisionPolicy& pp = {});

// Root of g2/12 closest to the anchor. Updates the anchor.
cplx continue_sqrt_g2_12(BranchState& branch, cplx g2);

// phi(tau) = tau - 2 pi i / (eta1 +- sqrt(g2/12)), branch tracked via the anchor.
cplx eval_phi(BranchState& branch, const TauPoint& tau, const PrecisionPolicy& pp = {});

struct SolveOptions {
    bool verify_count = true;
    ContourParams contour;
};

struct TauCSolution {
    double C = 0.0;
    TauPoint tau{0.0, 1.0};
    double residual = 0.0;  // |f_C(tau)| / fC_scale(C)
    Sign phi_sign = Sign::minus;
    int count = -1;          // contour count, -1 when not verified
};

// The unique zero tau(C) of f_C in the interior of F0, C real and not 0 or 1.
TauCSolution solve_tauC(double C, const PrecisionPolicy& pp = {}, std::optional<TauPoint> hint = {},
                        const SolveOptions& opts = {});

// Follows the root from (C_from, tau_from) to C_to with arctan-uniform steps.
TauPoint continue_tauC(double C_from, const TauPoint& tau_from, double C_to, const PrecisionPolicy& pp = {});

// Residual, domain and contour checks for a candidate root.
TauCSolution certify_tauC(double C, const TauPoint& tau, const PrecisionPolicy& pp = {},
                          const SolveOptions& opts = {});

// Seed on Re tau = 1/2 for C = 1/2 from a scan of the real function f_{1/2}(1/2 + ib).
TauPoint seed_tau_half(const PrecisionPolicy& pp = {});

// Seed for |C| >= 10 from tau + (i/24 pi) q^{-1} + 7i/(4 pi) = C.
TauPoint asymptotic_seed(double C);

}  // namespace ec

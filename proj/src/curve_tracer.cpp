#include "ec/curve_tracer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "ec/elliptic_qseries.hpp"
#include "ec/errors.hpp"
#include "ec/premodular.hpp"

namespace ec {

namespace {

const cplx kRho(0.5, std::sqrt(3.0) / 2.0);

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

// Bisection of a real function with a sign change on [a, b].
template <class F>
double bisect(F f, double a, double b, double tol, const char* what) {
    double fa = f(a), fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb) || (fa < 0) == (fb < 0))
        throw RootBracketFailure(std::string(what) + ": no sign change on [" + num(a) + ", " + num(b) + "]");
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Moves the sqrt(g2/12) anchor from `from` to `to` along the segment, in steps
// short compared with the distance to rho, the only zero of g2 in F0.
void track_sqrt(BranchState& st, cplx from, cplx to, const PrecisionPolicy& pp) {
    const double len = std::abs(to - from);
    const double d = std::max(1e-6, std::min(std::abs(from - kRho), std::abs(to - kRho)));
    const int n = std::clamp(int(std::ceil(len / (0.1 * d))), 1, 4000);
    for (int k = 1; k <= n; ++k) {
        const cplx z = from + (to - from) * (double(k) / n);
        continue_sqrt_g2_12(st, eval_basics(TauPoint(z), pp).g2);
    }
}

bool segments_cross(cplx a, cplx b, cplx c, cplx d) {
    auto cross = [](cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
    const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

void check_simple(const std::vector<CurveSample>& s) {
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(s[i].tau.z() - s[j].tau.z()) < 1e-6)
                throw ConsistencyFailure("trace: samples at C = " + num(s[i].C) + " and C = " + num(s[j].C) +
                                         " coincide");
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 2; j + 1 < n; ++j)
            if (segments_cross(s[i].tau.z(), s[i + 1].tau.z(), s[j].tau.z(), s[j + 1].tau.z()))
                throw ConsistencyFailure("trace: polyline crosses itself near C = " + num(s[i].C));
}

void check_interval(Branch b, double lo, double hi) {
    if (!(lo < hi)) throw UsageError("trace: empty interval [" + num(lo) + ", " + num(hi) + "]");
    const double gap = 1e-4, cap = 1e4;
    bool ok = false;
    switch (b) {
        case Branch::minus: ok = lo >= -cap && hi <= -gap; break;
        case Branch::zero: ok = lo >= gap && hi <= 1.0 - gap; break;
        case Branch::plus: ok = lo >= 1.0 + gap && hi <= cap; break;
    }
    if (!ok)
        throw UsageError("trace: [" + num(lo) + ", " + num(hi) + "] is not inside the " + branch_name(b) +
                         " parameter range");
}

}  // namespace

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::minus: return "minus";
        case Branch::zero: return "zero";
        case Branch::plus: return "plus";
    }
    return "?";
}

Branch parse_branch(const std::string& s) {
    if (s == "minus") return Branch::minus;
    if (s == "zero") return Branch::zero;
    if (s == "plus") return Branch::plus;
    throw UsageError("unknown branch '" + s + "' (minus, zero, plus)");
}

Branch branch_of(double C) {
    if (C == 0.0 || C == 1.0 || !std::isfinite(C)) throw std::domain_error("C in {0, 1} has no curve point");
    if (C < 0.0) return Branch::minus;
    return C < 1.0 ? Branch::zero : Branch::plus;
}

std::vector<double> trace_grid(Branch b, double lo, double hi, int steps) {
    check_interval(b, lo, hi);
    if (steps < 2) throw UsageError("trace: steps must be at least 2");
    std::vector<double> g(steps);
    if (b == Branch::zero) {
        for (int k = 0; k < steps; ++k) g[k] = lo + (hi - lo) * k / (steps - 1);
    } else {
        const double a0 = std::atan(lo), a1 = std::atan(hi);
        for (int k = 0; k < steps; ++k) g[k] = std::tan(a0 + (a1 - a0) * k / (steps - 1));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

TraceResult trace_curve(Branch b, double lo, double hi, int steps, const PrecisionPolicy& pp,
                        const TraceOptions& opts) {
    const std::vector<double> grid = trace_grid(b, lo, hi, steps);
    const std::size_t n = grid.size();
    SolveOptions so;
    so.verify_count = false;
    so.contour = opts.contour;

    // The chain is sequential: each sample seeds the next.
    std::vector<TauPoint> taus;
    taus.reserve(n);
    taus.push_back(solve_tauC(grid[0], pp, {}, so).tau);
    for (std::size_t i = 1; i < n; ++i) taus.push_back(continue_tauC(grid[i - 1], taus.back(), grid[i], pp));

    TraceResult out;
    out.samples.resize(n);
    so.verify_count = opts.verify_count;
    for_each_index(n, opts.exec, [&](std::size_t i) {
        const TauCSolution sol = certify_tauC(grid[i], taus[i], pp, so);
        out.samples[i] = {grid[i], sol.tau, b, sol.residual};
    });

    // Lock the phi branch at the first sample and follow sqrt(g2/12) along the polyline.
    BranchState st;
    st.anchor = sqrt_g2_12(taus[0], pp);
    {
        const QuasiPeriods q0 = eval_basics(taus[0], pp);
        const cplx pp_ = taus[0].z() - 2.0 * pi * I / (q0.eta1 + st.anchor);
        const cplx pm = taus[0].z() - 2.0 * pi * I / (q0.eta1 - st.anchor);
        st.sign = std::abs(pp_ - grid[0]) <= std::abs(pm - grid[0]) ? Sign::plus : Sign::minus;
    }
    out.phi_sign = st.sign;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) track_sqrt(st, taus[i - 1].z(), taus[i].z(), pp);
        const cplx phi = eval_phi(st, taus[i], pp);
        out.samples[i].root = st.anchor;
        if (std::abs(phi - grid[i]) > 1e-8 * (1.0 + std::abs(grid[i])))
            throw BranchJump("trace: locked phi branch does not reproduce C = " + num(grid[i]) + " (got " +
                             num(phi.real()) + (phi.imag() < 0 ? "" : "+") + num(phi.imag()) + "i)");
    }
    check_simple(out.samples);
    return out;
}

std::pair<double, double> theta_pair(double b, const PrecisionPolicy& pp) {
    const QuasiPeriods q = eval_basics(TauPoint(0.5, b), pp);
    const cplx e2 = q.eta1 * q.eta1;
    const cplx th = b * q.eta1 / (2.0 * pi);
    const cplx th1 = e2 / (e2 - q.g2 / 12.0);
    return {th.real(), th1.real()};
}

SpecialMinus special_tau_minus_full(const PrecisionPolicy& pp) {
    const double b1 = bisect([&](double b) {
        const auto [t, t1] = theta_pair(b, pp);
        return t - t1;
    }, 0.5 + 1e-9, std::sqrt(3.0) / 2.0 - 1e-9, 1e-13, "tau_minus");
    SpecialMinus sm;
    sm.tau = TauPoint(0.5, b1);
    // On this segment g2 < 0, so both roots of g2/12 are imaginary; each gives one C.
    const QuasiPeriods q = eval_basics(sm.tau, pp);
    const cplx w = std::sqrt(q.g2 / 12.0);
    const cplx c1 = sm.tau.z() - 2.0 * pi * I / (q.eta1 + w);
    const cplx c2 = sm.tau.z() - 2.0 * pi * I / (q.eta1 - w);
    const cplx cm = c1.real() < c2.real() ? c1 : c2;
    const cplx cp = c1.real() < c2.real() ? c2 : c1;
    if (std::abs(cm.imag()) > 1e-8 * (1 + std::abs(cm)) || std::abs(cp.imag()) > 1e-8 * (1 + std::abs(cp)) ||
        !(cm.real() < 0.0) || !(cp.real() > 1.0))
        throw ConsistencyFailure("tau_minus: phi values are not a C < 0, C > 1 pair");
    sm.C_minus = cm.real();
    sm.C_plus = cp.real();
    sm.residual = std::max(std::abs(eval_fC(sm.C_minus, sm.tau, pp)) / fC_scale(sm.C_minus),
                           std::abs(eval_fC(sm.C_plus, sm.tau, pp)) / fC_scale(sm.C_plus));
    if (!(sm.residual < 1e-8)) throw ConsistencyFailure("tau_minus: f_C residual " + num(sm.residual));
    return sm;
}

TauPoint special_tau_minus(const PrecisionPolicy& pp) { return special_tau_minus_full(pp).tau; }

TauPoint special_tau_half(const PrecisionPolicy& pp) {
    const double bh = bisect([&](double b) {
        const TauPoint t(0.5, b);
        const QuasiPeriods q = eval_basics(t, pp);
        return (q.eta1 + sqrt_g2_12(t, pp)).real() - 2.0 * pi / b;
    }, std::sqrt(3.0) / 2.0 + 1e-9, 1.2, 1e-13, "tau(1/2)");
    return TauPoint(0.5, bh);
}

double deta1_db(double b, const PrecisionPolicy& pp) {
    const QuasiPeriods q = eval_basics(TauPoint(0.5, b), pp);
    return (-(q.eta1 * q.eta1 - q.g2 / 12.0) / (2.0 * pi)).real();
}

double special_b0(const PrecisionPolicy& pp) {
    const double via_half = 1.0 / (4.0 * special_tau_half(pp).im());
    const double direct = bisect([&](double b) { return deta1_db(b, pp); }, 5.0 / 24.0, 1.0 / (2.0 * std::sqrt(3.0)),
                                 1e-14, "b0");
    if (std::abs(via_half - direct) > 1e-10)
        throw ConsistencyFailure("b0: routes disagree, " + num(via_half) + " vs " + num(direct));
    return via_half;
}

namespace {

struct HessParts {
    double pref;  // 3|g2| / (4 pi^4 Im tau) * |eta1 +- sqrt(g2/12)|^2
    cplx phi;
};

HessParts hess_parts(Sign sign, const TauPoint& tau, BranchState& branch, const PrecisionPolicy& pp) {
    if (std::abs(tau.z() - kRho) < 1e-9)
        throw ExcludedPoint("G2 Hessian: the trivial critical points degenerate at e^{pi i/3}");
    const QuasiPeriods q = eval_basics(tau, pp);
    const cplx w = continue_sqrt_g2_12(branch, q.g2);
    const cplx den = q.eta1 + sign_value(sign) * w;
    if (std::abs(den) == 0.0) throw DivideByZero("G2 Hessian: eta1 +- sqrt(g2/12) vanishes");
    HessParts h;
    h.pref = 3.0 * std::abs(q.g2) / (4.0 * std::pow(pi, 4) * tau.im()) * std::norm(den);
    h.phi = tau.z() - 2.0 * pi * I / den;
    return h;
}

}  // namespace

double hessian_detG2(Sign sign, const TauPoint& tau, BranchState& branch, const PrecisionPolicy& pp) {
    const HessParts h = hess_parts(sign, tau, branch, pp);
    return h.pref * h.phi.imag();
}

double hessian_scale(Sign sign, const TauPoint& tau, BranchState& branch, const PrecisionPolicy& pp) {
    const HessParts h = hess_parts(sign, tau, branch, pp);
    return h.pref * (1.0 + std::abs(h.phi));
}

std::vector<CriticalPoint> critical_points_E2(int max_c, const PrecisionPolicy& pp, Exec exec) {
    if (max_c < 2) throw UsageError("critical: max_c must be at least 2");
    const std::vector<MoebiusMap> gs = enumerate_gamma02(max_c);
    std::vector<CriticalPoint> out(gs.size());
    SolveOptions so;
    so.contour.exec = Exec::serial;
    for_each_index(gs.size(), exec, [&](std::size_t i) {
        const MoebiusMap& g = gs[i];
        const double C = -double(g.d()) / double(g.c());
        if (C == 0.0 || C == 1.0) throw SkippedChar("critical: -d/c in {0, 1}");
        const TauCSolution sol = solve_tauC(C, pp, {}, so);
        CriticalPoint cp;
        cp.gamma = g;
        cp.tau_star = apply(g, sol.tau);
        cp.residual = std::abs(eval_E2_prime(cp.tau_star, pp));
        cp.count = sol.count;
        if (!(cp.residual < 1e-8))
            throw ConsistencyFailure("critical: |E2'| = " + num(cp.residual) + " at the image of tau(" + num(C) +
                                     ")");
        const Reduction red = reduce_to_F0(cp.tau_star);
        if (!(red.gamma == g))
            throw ConsistencyFailure("critical: point does not reduce back into its tile for c = " +
                                     std::to_string(g.c()) + ", d = " + std::to_string(g.d()));
        out[i] = cp;
    });
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            if (std::abs(out[i].tau_star.z() - out[j].tau_star.z()) < 1e-12)
                throw ConsistencyFailure("critical: duplicate point for two different maps");
    return out;
}

TauPoint appendix_tau_s(double s, const PrecisionPolicy& pp) {
    if (!(s > 0.0 && s < 0.5)) throw std::invalid_argument("appendix_tau_s: s must lie in (0, 1/2)");
    const CharPair rs{(2.0 - s) / 2.0, s};
    ContourParams cp;
    cp.exec = Exec::serial;
    const auto z = find_zero_in_F0(rs, pp, cp);
    if (!z) throw CountMismatch("appendix_tau_s: no zero found for s = " + num(s));
    if (std::abs(z->re() - 0.5) > 1e-8)
        throw ConsistencyFailure("appendix_tau_s: zero off the line Re = 1/2 at s = " + num(s));
    return *z;
}

BStar appendix_b_star(const PrecisionPolicy& pp) {
    BStar r;
    const double ss[3] = {4e-3, 2e-3, 1e-3};
    for (int k = 0; k < 3; ++k) r.b[k] = appendix_tau_s(ss[k], pp).im();
    const double d1 = r.b[0] - r.b[1], d2 = r.b[1] - r.b[2];
    if (d2 == 0.0 || d1 / d2 <= 1.0) {
        r.order = 0.0;
        r.value = r.b[2];
        return r;
    }
    r.order = std::log2(d1 / d2);
    r.value = r.b[2] - d2 / (std::pow(2.0, r.order) - 1.0);
    return r;
}

SymmetryReport verify_symmetries(const std::vector<CurveSample>& samples, const PrecisionPolicy& pp, Exec exec) {
    const std::size_t n = samples.size();
    std::vector<double> res_r(n, -1.0), res_m(n, -1.0);
    SolveOptions so;
    so.contour.exec = Exec::serial;
    for_each_index(n, exec, [&](std::size_t i) {
        const double C = samples[i].C;
        const cplx t = samples[i].tau.z();
        const double Cr = 1.0 - C;
        if (Cr != 0.0 && Cr != 1.0) {
            const TauCSolution s = solve_tauC(Cr, pp, {}, so);
            res_r[i] = std::abs(s.tau.z() - (1.0 - std::conj(t)));
        }
        if (C != 1.0) {
            const double Cm = 1.0 / (1.0 - C);
            if (Cm != 0.0 && Cm != 1.0 && std::abs(Cm) <= 1e4) {
                const TauCSolution s = solve_tauC(Cm, pp, {}, so);
                res_m[i] = std::abs(s.tau.z() - 1.0 / (1.0 - t));
            }
        }
    });
    SymmetryReport rep;
    for (std::size_t i = 0; i < n; ++i) {
        if (res_r[i] >= 0) {
            ++rep.pairs_reflect;
            rep.max_reflect = std::max(rep.max_reflect, res_r[i]);
        }
        if (res_m[i] >= 0) {
            ++rep.pairs_moebius;
            rep.max_moebius = std::max(rep.max_moebius, res_m[i]);
        }
    }
    return rep;
}

std::vector<cplx> grid_eval(const std::function<cplx(const TauPoint&)>& f, double x0, double x1, int nx, double y0,
                            double y1, int ny, Exec exec) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("grid_eval: empty grid");
    std::vector<cplx> out(std::size_t(nx) * ny);
    for_each_index(out.size(), exec, [&](std::size_t k) {
        const int ix = int(k % nx), iy = int(k / nx);
        const double x = nx == 1 ? x0 : x0 + (x1 - x0) * ix / (nx - 1);
        const double y = ny == 1 ? y0 : y0 + (y1 - y0) * iy / (ny - 1);
        out[k] = f(TauPoint(x, y));
    });
    return out;
}

}  // namespace ec

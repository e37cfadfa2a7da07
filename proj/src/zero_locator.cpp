#include "ec/zero_locator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ec/elliptic_qseries.hpp"
#include "ec/errors.hpp"
#include "ec/modular_action.hpp"

namespace ec {

namespace {

std::string fmt_c(cplx z) {
    std::ostringstream os;
    os.precision(10);
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

std::function<cplx(double)> segment(cplx a, cplx b) {
    return [a, b](double t) { return a + t * (b - a); };
}

std::function<cplx(double)> arc(cplx center, double radius, double th0, double th1) {
    return [=](double t) { return center + std::polar(radius, th0 + t * (th1 - th0)); };
}

// Abscissa where the horocycle at 0 meets the semicircle |tau - 1/2| = 1/2.
double horo_meet(double delta) { return delta * delta / (1.0 + delta * delta); }

}  // namespace

Contour Contour::polygon(const std::vector<cplx>& v, int samples_per_edge) {
    if (v.size() < 3) throw std::invalid_argument("Contour::polygon: need at least 3 vertices");
    Contour c;
    const std::size_t n = (v.front() == v.back()) ? v.size() - 1 : v.size();
    for (std::size_t i = 0; i < n; ++i) c.pieces.push_back({segment(v[i], v[(i + 1) % n]), samples_per_edge});
    return c;
}

Contour Contour::rectangle(double x0, double x1, double y0, double y1, int samples_per_edge) {
    return polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, samples_per_edge);
}

double truncated_F0_floor(double x, double delta) {
    const double xs = horo_meet(delta);
    const double h = delta / 2.0;
    auto horo = [&](double u) { return h + std::sqrt(std::max(0.0, h * h - u * u)); };
    if (x <= xs) return horo(x);
    if (x >= 1.0 - xs) return horo(1.0 - x);
    return std::sqrt(std::max(0.0, x * (1.0 - x)));
}

Contour truncated_F0(double t_top, double delta) {
    if (!(delta > 0.0 && delta < 0.5) || !(t_top > 1.0))
        throw std::invalid_argument("truncated_F0: need 0 < cusp_delta < 1/2 and t_top > 1");
    const double xs = horo_meet(delta), ys = xs / delta;
    const cplx c0{0.0, delta / 2}, c1{1.0, delta / 2}, p{xs, ys}, q{1.0 - xs, ys};
    Contour c;
    c.pieces.push_back({arc(c0, delta / 2, pi / 2, std::arg(p - c0)), 16});
    c.pieces.push_back({arc(0.5, 0.5, std::arg(p - 0.5), std::arg(q - 0.5)), 96});
    c.pieces.push_back({arc(c1, delta / 2, std::arg(q - c1), pi / 2), 16});
    c.pieces.push_back({segment({1.0, delta}, {1.0, t_top}), 48});
    c.pieces.push_back({segment({1.0, t_top}, {0.0, t_top}), 16});
    c.pieces.push_back({segment({0.0, t_top}, {0.0, delta}), 48});
    return c;
}

Contour F0_cell(double x0, double x1, double y0, double y1, double delta) {
    auto floor_at = [=](double x) { return std::clamp(truncated_F0_floor(x, delta), y0, y1); };
    Contour c;
    c.pieces.push_back({[=](double t) {
                            const double x = x0 + t * (x1 - x0);
                            return cplx{x, floor_at(x)};
                        },
                        24});
    c.pieces.push_back({segment({x1, floor_at(x1)}, {x1, y1}), 12});
    c.pieces.push_back({segment({x1, y1}, {x0, y1}), 12});
    c.pieces.push_back({segment({x0, y1}, {x0, floor_at(x0)}), 12});
    return c;
}

CountResult count_zeros(const HoloFn& f, const Contour& contour, double zero_threshold, Exec exec) {
    struct Sample {
        double t;
        cplx v;
    };
    const std::size_t np = contour.pieces.size();
    std::vector<std::vector<Sample>> samples(np);
    struct Job {
        std::size_t piece;
        double t;
        cplx v;
    };

    auto evaluate = [&](std::vector<Job>& jobs) {
        for_each_index(jobs.size(), exec, [&](std::size_t i) {
            const cplx z = contour.pieces[jobs[i].piece].path(jobs[i].t);
            if (!(z.imag() > 0.0)) throw std::invalid_argument("count_zeros: contour leaves the upper half-plane");
            const cplx v = f(z);
            if (!(std::abs(v) >= zero_threshold))
                throw BoundaryZero("count_zeros: |f| = " + std::to_string(std::abs(v)) + " at " + fmt_c(z));
            jobs[i].v = v;
        });
    };

    std::vector<Job> jobs;
    for (std::size_t p = 0; p < np; ++p) {
        const int n = std::max(2, contour.pieces[p].base_samples);
        for (int j = 0; j <= n; ++j) jobs.push_back({p, double(j) / n, 0.0});
    }
    evaluate(jobs);
    std::size_t total = jobs.size();
    for (const Job& j : jobs) samples[j.piece].push_back({j.t, j.v});

    const double mag_limit = std::log(3.0);
    auto needs_split = [&](const Sample& a, const Sample& b) {
        const cplx r = b.v / a.v;
        return std::abs(std::arg(r)) > contour.max_phase_step || std::abs(std::log(std::abs(r))) > mag_limit;
    };

    for (;;) {
        jobs.clear();
        for (std::size_t p = 0; p < np; ++p) {
            const auto& s = samples[p];
            for (std::size_t k = 0; k + 1 < s.size(); ++k) {
                if (!needs_split(s[k], s[k + 1])) continue;
                if (s[k + 1].t - s[k].t < 1e-13)
                    throw PhaseStepFailure("count_zeros: phase step not resolved at t-spacing 1e-13");
                jobs.push_back({p, 0.5 * (s[k].t + s[k + 1].t), 0.0});
            }
        }
        if (jobs.empty()) break;
        total += jobs.size();
        if (total > contour.max_points)
            throw PhaseStepFailure("count_zeros: adaptive budget of " + std::to_string(contour.max_points) +
                                   " points exhausted");
        evaluate(jobs);
        // jobs are grouped by piece in increasing t; merge them in.
        std::size_t j = 0;
        for (std::size_t p = 0; p < np; ++p) {
            std::vector<Sample> merged;
            merged.reserve(samples[p].size() * 2);
            for (const Sample& s : samples[p]) {
                while (j < jobs.size() && jobs[j].piece == p && jobs[j].t < s.t) {
                    merged.push_back({jobs[j].t, jobs[j].v});
                    ++j;
                }
                merged.push_back(s);
            }
            samples[p].swap(merged);
        }
    }

    double phase = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
        const auto& s = samples[p];
        for (std::size_t k = 0; k + 1 < s.size(); ++k) phase += std::arg(s[k + 1].v / s[k].v);
        const auto& next = samples[(p + 1) % np];
        phase += std::arg(next.front().v / s.back().v);
    }
    const double w = phase / (2.0 * pi);
    const double n = std::round(w);
    if (std::abs(w - n) > 0.05)
        throw PhaseStepFailure("count_zeros: winding " + std::to_string(w) + " is not an integer");
    return {static_cast<int>(n), total};
}

TauPoint newton_refine(const HoloFn& f, const HoloFn& fprime, const TauPoint& tau0, double tol, int max_iter,
                       double fd_step) {
    cplx z = tau0.z();
    cplx fz = f(z);
    for (int it = 0; it < max_iter; ++it) {
        const cplx d = fprime ? fprime(z) : (f(z + fd_step) - f(z - fd_step)) / (2.0 * fd_step);
        if (d == 0.0 || !std::isfinite(std::abs(d))) throw Diverged("newton_refine: zero derivative at " + fmt_c(z));
        const cplx step = fz / d;
        const cplx zn = z - step;
        if (!(zn.imag() > 0.0) || !std::isfinite(std::abs(zn)))
            throw Diverged("newton_refine: iterate left the upper half-plane from " + fmt_c(tau0.z()));
        z = zn;
        fz = f(z);
        if (std::abs(fz) < tol && std::abs(step) <= 1e-12 * (1.0 + std::abs(z))) return TauPoint(z);
    }
    if (std::abs(fz) < tol) return TauPoint(z);
    throw Diverged("newton_refine: no convergence in " + std::to_string(max_iter) + " iterations from " +
                   fmt_c(tau0.z()) + ", |f| = " + std::to_string(std::abs(fz)));
}

cplx eval_fC(double C, const TauPoint& tau, const PrecisionPolicy& pp) {
    // f_C = 12 u^2 D + 48 pi i u eta1 - 48 pi^2 with u = C - tau, D = eta1^2 - g2/12.
    // For tau = gamma tau1 this pulls back to
    //   lambda^2 [12 v^2 D(tau1) + 48 pi i v m eta1(tau1) - 48 pi^2 m^2]
    // with m = a - cC, v = -m tau1 + dC - b, which keeps f_0 and f_1 accurate
    // near the cusps 0 and 1 where they are exponentially small.
    TauPoint t1 = tau;
    MoebiusMap g;
    if (tau.im() < pp.min_im_direct) {
        const Reduction red = reduce_to_F(tau);
        t1 = red.tau;
        g = red.gamma;
    }
    const QuasiPeriods b = eval_basics(t1, pp);
    const cplx lam = automorphy(g, t1.z());
    const double m = double(g.a()) - double(g.c()) * C;
    const cplx v = -m * t1.z() + (double(g.d()) * C - double(g.b()));
    return lam * lam * (12.0 * v * v * b.d12 + 48.0 * pi * I * v * m * b.eta1 - 48.0 * pi * pi * m * m);
}

CountResult count_zeros_fC(double C, const PrecisionPolicy& pp, const ContourParams& cp) {
    const double sc = fC_scale(C);
    HoloFn f;
    if (C == 0.0)
        f = [pp](cplx z) { return eval_fC(0.0, TauPoint(z), pp) * std::exp(2.0 * pi * I / z) / fC_scale(0.0); };
    else if (C == 1.0)
        f = [pp](cplx z) {
            return eval_fC(1.0, TauPoint(z), pp) * std::exp(2.0 * pi * I / (z - 1.0)) / fC_scale(1.0);
        };
    else
        f = [pp, C, sc](cplx z) { return eval_fC(C, TauPoint(z), pp) / sc; };
    return count_zeros(f, truncated_F0(cp.t_top, cp.cusp_delta), cp.zero_threshold, cp.exec);
}

cplx eval_fC_prime(double C, const TauPoint& tau, const PrecisionPolicy& pp) {
    const QuasiPeriods b = eval_basics(tau, pp);
    const QuasiDerivatives d = derivatives_from(b);
    const cplx eta2_p = b.eta1 + tau.z() * d.eta1_p;
    const cplx a = C * b.eta1 - b.eta2;
    const cplx u = C - tau.z();
    return 24.0 * a * (C * d.eta1_p - eta2_p) - d.g2_p * u * u + 2.0 * b.g2 * u;
}

cplx sqrt_g2_12(const TauPoint& tau, const PrecisionPolicy& pp) {
    return pi * pi / 3.0 * std::sqrt(eval_E4(tau, pp));
}

cplx continue_sqrt_g2_12(BranchState& branch, cplx g2) {
    cplx w = std::sqrt(g2 / 12.0);
    const double dm = std::abs(w - branch.anchor), dp = std::abs(w + branch.anchor);
    if (std::abs(dm - dp) <= 1e-12 * (std::abs(w) + std::abs(branch.anchor)))
        throw BranchJump("sqrt(g2/12): both roots equidistant from the anchor");
    if (dm > dp) w = -w;
    branch.anchor = w;
    return w;
}

cplx eval_phi(BranchState& branch, const TauPoint& tau, const PrecisionPolicy& pp) {
    const QuasiPeriods b = eval_basics(tau, pp);
    BranchState next = branch;
    const cplx w = continue_sqrt_g2_12(next, b.g2);
    const cplx den = b.eta1 + sign_value(branch.sign) * w;
    if (std::abs(den) <= 1e-14 * (std::abs(b.eta1) + std::abs(w)))
        throw DivideByZero("phi: eta1 +- sqrt(g2/12) vanishes at " + fmt_c(tau.z()));
    branch = next;
    return tau.z() - 2.0 * pi * I / den;
}

TauPoint seed_tau_half(const PrecisionPolicy& pp) {
    auto h = [&](double b) { return eval_fC(0.5, TauPoint(0.5, b), pp).real(); };
    const int n = 32;
    const double lo = 0.87, hi = 1.2;
    double b0 = lo, h0 = h(lo);
    for (int k = 1; k <= n; ++k) {
        const double b1 = lo + (hi - lo) * k / n;
        const double h1 = h(b1);
        if ((h0 < 0) != (h1 < 0)) {
            double a = b0, c = b1, ha = h0;
            for (int it = 0; it < 200 && c - a > 1e-15; ++it) {
                const double m = 0.5 * (a + c);
                const double hm = h(m);
                if ((hm < 0) == (ha < 0)) {
                    a = m;
                    ha = hm;
                } else {
                    c = m;
                }
            }
            return TauPoint(0.5, 0.5 * (a + c));
        }
        b0 = b1;
        h0 = h1;
    }
    throw RootBracketFailure("seed_tau_half: no sign change of f_1/2 on the half line");
}

TauPoint asymptotic_seed(double C) {
    if (!(std::abs(C) >= 1.0)) throw std::invalid_argument("asymptotic_seed: needs |C| >= 1");
    const bool up = C > 0;
    double a = up ? 0.25 : 0.75, b = 1.0;
    for (int it = 0; it < 20; ++it) {
        b = std::log(24.0 * pi * (C - a) / std::sin(2.0 * pi * a)) / (2.0 * pi);
        const double e = std::min(1.0, 24.0 * pi * (b + 7.0 / (4.0 * pi)) * std::exp(-2.0 * pi * b));
        const double ac = std::acos(-e) / (2.0 * pi);
        a = up ? ac : 1.0 - ac;
    }
    return TauPoint(a, b);
}

namespace {

struct ScaledFC {
    double C;
    PrecisionPolicy pp;
    cplx operator()(cplx z) const { return eval_fC(C, TauPoint(z), pp) / fC_scale(C); }
};

struct ScaledFCPrime {
    double C;
    PrecisionPolicy pp;
    cplx operator()(cplx z) const { return eval_fC_prime(C, TauPoint(z), pp) / fC_scale(C); }
};

TauPoint refine_fC(double C, const TauPoint& start, const PrecisionPolicy& pp, double tol = 1e-10) {
    return newton_refine(ScaledFC{C, pp}, ScaledFCPrime{C, pp}, start, tol);
}

Sign matching_sign(double C, const TauPoint& tau, const PrecisionPolicy& pp) {
    const QuasiPeriods b = eval_basics(tau, pp);
    const cplx w = sqrt_g2_12(tau, pp);
    const cplx pp_ = tau.z() - 2.0 * pi * I / (b.eta1 + w);
    const cplx pm = tau.z() - 2.0 * pi * I / (b.eta1 - w);
    return std::abs(pp_ - C) <= std::abs(pm - C) ? Sign::plus : Sign::minus;
}

}  // namespace

TauPoint continue_tauC(double C_from, const TauPoint& tau_from, double C_to, const PrecisionPolicy& pp) {
    const double th1 = std::atan(C_to);
    double th = std::atan(C_from);
    double C = C_from;
    TauPoint tau = tau_from;
    const double max_step = 0.05;
    double dth = std::min(max_step, std::abs(th1 - th));
    while (C != C_to) {
        const double dir = th1 > th ? 1.0 : -1.0;
        const bool last = std::abs(th1 - th) <= dth;
        const double thn = last ? th1 : th + dir * dth;
        const double Cn = last ? C_to : std::tan(thn);

        // Euler predictor along d tau / dC = -(df/dC) / (df/dtau).
        const QuasiPeriods b = eval_basics(tau, pp);
        const cplx a = C * b.eta1 - b.eta2;
        const cplx u = C - tau.z();
        const cplx dfdC = 24.0 * a * b.eta1 - 2.0 * b.g2 * u;
        const cplx dfdt = eval_fC_prime(C, tau, pp);
        cplx zp = tau.z() - (Cn - C) * dfdC / dfdt;
        if (!(zp.imag() > 0.5 * tau.im()) || !std::isfinite(std::abs(zp))) zp = tau.z();

        bool ok = false;
        TauPoint next = tau;
        try {
            next = refine_fC(Cn, TauPoint(zp), pp);
            const double jump = std::abs(next.z() - tau.z());
            ok = jump <= std::min(0.2, 0.5 * std::max(tau.im(), next.im())) &&
                 classify_F0(next, 1e-9) != DomainTag::outside;
        } catch (const Diverged&) {
            ok = false;
        }
        if (ok) {
            tau = next;
            th = thn;
            C = Cn;
            dth = std::min(max_step, dth * 1.5);
        } else {
            dth *= 0.5;
            if (dth < 1e-12)
                throw Diverged("continue_tauC: step underflow near C = " + std::to_string(C));
        }
    }
    return tau;
}

TauCSolution certify_tauC(double C, const TauPoint& tau, const PrecisionPolicy& pp, const SolveOptions& opts) {
    TauCSolution sol;
    sol.C = C;
    sol.tau = tau;
    sol.residual = std::abs(eval_fC(C, tau, pp)) / fC_scale(C);
    if (!(sol.residual < 1e-9))
        throw Diverged("tau(C): residual " + std::to_string(sol.residual) + " above 1e-9 at C = " + std::to_string(C));
    if (classify_F0(tau, 1e-9) == DomainTag::outside)
        throw DomainEscape("tau(C) = " + fmt_c(tau.z()) + " left F0 for C = " + std::to_string(C));
    sol.phi_sign = matching_sign(C, tau, pp);
    if (opts.verify_count) {
        const double h0 = std::norm(tau.z()) / tau.im(), h1 = std::norm(tau.z() - 1.0) / tau.im();
        const double delta = std::min({opts.contour.cusp_delta, 0.5 * h0, 0.5 * h1});
        const double top = std::max(opts.contour.t_top, tau.im() + 2.0);
        const CountResult cr =
            count_zeros(ScaledFC{C, pp}, truncated_F0(top, delta), opts.contour.zero_threshold, opts.contour.exec);
        sol.count = cr.count;
        if (cr.count != 1)
            throw CountMismatch("f_C zero count over truncated F0 is " + std::to_string(cr.count) +
                                " (expected 1) for C = " + std::to_string(C));
    }
    return sol;
}

TauCSolution solve_tauC(double C, const PrecisionPolicy& pp, std::optional<TauPoint> hint, const SolveOptions& opts) {
    if (!std::isfinite(C) || C == 0.0 || C == 1.0)
        throw std::domain_error("solve_tauC: f_C has no zero in F0 for C in {0, 1}");
    TauPoint tau(0.5, 1.0);
    if (hint) {
        tau = refine_fC(C, *hint, pp);
    } else if (std::abs(C) >= 10.0) {
        tau = refine_fC(C, asymptotic_seed(C), pp);
    } else if (C > 0.0 && C < 1.0) {
        const TauPoint t_half = refine_fC(0.5, seed_tau_half(pp), pp);
        tau = continue_tauC(0.5, t_half, C, pp);
    } else {
        const double c_anchor = C > 1.0 ? 10.0 : -10.0;
        const TauPoint t_anchor = refine_fC(c_anchor, asymptotic_seed(c_anchor), pp);
        tau = continue_tauC(c_anchor, t_anchor, C, pp);
    }
    return certify_tauC(C, tau, pp, opts);
}

}  // namespace ec

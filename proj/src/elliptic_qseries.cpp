#include "ec/elliptic_qseries.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ec/errors.hpp"
#include "ec/modular_action.hpp"

namespace ec {

namespace {

constexpr int kTableSize = 4096;

struct DivisorSums {
    std::vector<double> s1, s3, s5;
    DivisorSums() : s1(kTableSize + 1, 0.0), s3(kTableSize + 1, 0.0), s5(kTableSize + 1, 0.0) {
        for (int d = 1; d <= kTableSize; ++d) {
            const double d2 = double(d) * d;
            for (int n = d; n <= kTableSize; n += d) {
                s1[n] += d;
                s3[n] += d2 * d;
                s5[n] += d2 * d2 * d;
            }
        }
    }
};

const DivisorSums& divisor_sums() {
    static const DivisorSums t;
    return t;
}

// 2 zeta(2k), k = 1..40, for the Laurent series of pi cot(pi z).
const std::array<double, 41>& two_zeta_even() {
    static const std::array<double, 41> t = [] {
        std::array<double, 41> a{};
        for (int k = 1; k <= 40; ++k) a[k] = 2.0 * std::riemann_zeta(2.0 * k);
        return a;
    }();
    return t;
}

// Coefficient that majorizes every series used for eta1, g2, g3:
// (8 pi^6 / 27) * 504 * zeta(5) in front of k^5 |q|^k.
const double kMajorantCoef = 8.0 * std::pow(pi, 6) / 27.0 * 504.0 * 1.0369277551433699;

cplx q_of(double re, double im) {
    const double frac = re - std::floor(re);
    return std::polar(std::exp(-2.0 * pi * im), 2.0 * pi * frac);
}

int smallest_n(double rho, int power, double bound, int max_terms) {
    if (majorant_tail(rho, power, max_terms) >= bound) return -1;
    int lo = 1, hi = max_terms;
    if (majorant_tail(rho, power, lo) < bound) return lo;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (majorant_tail(rho, power, mid) < bound)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

int series_terms(double im, const PrecisionPolicy& pp) {
    const int cap = std::min(pp.max_terms, kTableSize);
    const int n = smallest_n(std::exp(-2.0 * pi * im), 5, pp.eps / kMajorantCoef, cap);
    if (n < 0)
        throw TruncationFailure("q-series: " + std::to_string(cap) + " terms cannot reach eps at Im tau = " +
                                std::to_string(im));
    return n;
}

QuasiPeriods direct_basics(const TauPoint& tau, const PrecisionPolicy& pp) {
    const int n_terms = series_terms(tau.im(), pp);
    const auto& ds = divisor_sums();
    const cplx q = q_of(tau.re(), tau.im());
    cplx qn = 1.0, s1 = 0.0, s3 = 0.0, s5 = 0.0, sn1 = 0.0;
    for (int n = 1; n <= n_terms; ++n) {
        qn *= q;
        s1 += ds.s1[n] * qn;
        sn1 += double(n) * ds.s1[n] * qn;
        s3 += ds.s3[n] * qn;
        s5 += ds.s5[n] * qn;
    }
    const double p2 = pi * pi, p4 = p2 * p2;
    QuasiPeriods out;
    out.eta1 = p2 / 3.0 - 8.0 * p2 * s1;
    out.eta2 = tau.z() * out.eta1 - 2.0 * pi * I;
    out.g2 = 4.0 / 3.0 * p4 + 320.0 * p4 * s3;
    out.g3 = 8.0 * p4 * p2 / 27.0 * (1.0 - 504.0 * s5);
    out.d12 = -32.0 * p4 * sn1;
    return out;
}

}  // namespace

double majorant_tail(double rho, int power, int n) {
    if (!(rho >= 0.0 && rho < 1.0)) return INFINITY;
    if (rho == 0.0) return 0.0;
    const double lr = -std::log(rho);
    const double peak = power / lr;
    double sum = 0.0;
    for (long k = long(n) + 1; k < 50000000L; ++k) {
        const double term = std::exp(power * std::log(double(k)) - k * lr);
        sum += term;
        if (k > peak && term <= 1e-20 * sum) break;
        if (k > peak && sum == 0.0) break;
    }
    return sum;
}

int choose_truncation(double im_tau, double eps, int max_terms) {
    if (!(im_tau > 0.0) || !(eps > 0.0)) throw std::invalid_argument("choose_truncation: need im_tau > 0, eps > 0");
    const double p4 = std::pow(pi, 4);
    const int n = smallest_n(std::exp(-2.0 * pi * im_tau), 3, eps / (320.0 * p4), max_terms);
    if (n < 0)
        throw TruncationFailure("choose_truncation: no N <= " + std::to_string(max_terms) +
                                " reaches eps at Im tau = " + std::to_string(im_tau));
    return n;
}

QuasiPeriods eval_basics(const TauPoint& tau, const PrecisionPolicy& pp) {
    if (tau.im() >= pp.min_im_direct) return direct_basics(tau, pp);
    const Reduction red = reduce_to_F(tau);
    const QuasiPeriods b = direct_basics(red.tau, pp);
    const MoebiusMap& g = red.gamma;
    const cplx j = automorphy(g, red.tau.z());
    const cplx j2 = j * j;
    QuasiPeriods out;
    out.eta1 = j * (double(g.c()) * b.eta2 + double(g.d()) * b.eta1);
    out.eta2 = j * (double(g.a()) * b.eta2 + double(g.b()) * b.eta1);
    out.g2 = j2 * j2 * b.g2;
    out.g3 = j2 * j2 * j2 * b.g3;
    const double c = double(g.c());
    out.d12 = j2 * j2 * b.d12 - 4.0 * pi * I * c * j2 * j * b.eta1 - 4.0 * pi * pi * c * c * j2;
    return out;
}

cplx eval_eta1(const TauPoint& tau, const PrecisionPolicy& pp) { return eval_basics(tau, pp).eta1; }
cplx eval_eta2(const TauPoint& tau, const PrecisionPolicy& pp) { return eval_basics(tau, pp).eta2; }
cplx eval_E2(const TauPoint& tau, const PrecisionPolicy& pp) { return 3.0 / (pi * pi) * eval_eta1(tau, pp); }

cplx eval_E4(const TauPoint& tau, const PrecisionPolicy& pp) {
    return 3.0 * eval_basics(tau, pp).g2 / (4.0 * std::pow(pi, 4));
}

Invariants eval_invariants(const TauPoint& tau, const PrecisionPolicy& pp) {
    const QuasiPeriods b = eval_basics(tau, pp);
    return {b.g2, b.g3};
}

namespace detail {

PointBundle point_bundle(double r, double s, const TauPoint& tau, const PrecisionPolicy& pp) {
    PointBundle pb;
    TauPoint t1 = tau;
    double r1 = r, s1 = s;
    pb.lambda = 1.0;
    if (tau.im() < pp.min_im_direct) {
        const Reduction red = reduce_to_F(tau);
        const MoebiusMap& g = red.gamma;
        t1 = red.tau;
        pb.lambda = automorphy(g, t1.z());
        r1 = double(g.d()) * r + double(g.b()) * s;
        s1 = double(g.c()) * r + double(g.a()) * s;
    }
    const double m = std::floor(r1 + 0.5), n = std::floor(s1 + 0.5);
    const double rr = r1 - m, ss = s1 - n;
    if (rr == 0.0 && ss == 0.0) throw PoleAtLattice("lattice point: (r,s) is integral");

    pb.qp = direct_basics(t1, pp);
    const cplx tau1 = t1.z();
    const cplx z = rr + ss * tau1;
    pb.z = z;
    pb.zeta_shift = m * pb.qp.eta1 + n * pb.qp.eta2;

    const cplx q = q_of(t1.re(), t1.im());
    const cplx x = std::polar(std::exp(-2.0 * pi * ss * t1.im()), 2.0 * pi * (rr + ss * t1.re()));
    const cplx xi = 1.0 / x;
    const double xmax = std::max(std::abs(x), std::abs(xi));

    cplx s_zeta = 0.0, s_wp = 0.0, s_wpp = 0.0;
    cplx qm = 1.0;
    const double stop = 1e-4 * std::min(pp.eps, 1e-14);
    for (int k = 1;; ++k) {
        if (k > pp.max_terms) throw TruncationFailure("Lambert series did not converge within max_terms");
        qm *= q;
        const cplx yp = qm * x, ym = qm * xi;
        const cplx dp = 1.0 - yp, dm = 1.0 - ym, dq = 1.0 - qm;
        s_zeta += yp / dp - ym / dm;
        s_wp += yp / (dp * dp) + ym / (dm * dm) - 2.0 * qm / (dq * dq);
        s_wpp += yp * (1.0 + yp) / (dp * dp * dp) - ym * (1.0 + ym) / (dm * dm * dm);
        if (std::abs(qm) * xmax * 250.0 * (k + 1) < stop) break;
    }

    const cplx tpi = 2.0 * pi * I;
    pb.s_red = ss;
    pb.d_zeta = -tpi * s_zeta;
    pb.d_wp = -4.0 * pi * pi * s_wp;
    pb.d_wpp = tpi * tpi * tpi * s_wpp;

    cplx cot_reg, dcsc2_reg;
    cplx wp_principal;  // wp minus its q-series part, minus 1/z^2
    if (std::abs(z) < 0.3) {
        pb.small_z = true;
        const auto& tz = two_zeta_even();
        const cplx z2 = z * z;
        cplx zp = z;      // z^{2k-1}
        cplx zm2 = 1.0;   // z^{2k-2}
        cplx zm3 = 0.0;   // z^{2k-3}
        cot_reg = 0.0;
        dcsc2_reg = 0.0;
        wp_principal = 0.0;  // pi^2/sin^2 - 1/z^2 - pi^2/3, from k = 2 on
        for (int k = 1; k <= 40; ++k) {
            cot_reg -= tz[k] * zp;
            if (k >= 2) {
                wp_principal += tz[k] * (2.0 * k - 1.0) * zm2;
                dcsc2_reg += tz[k] * (2.0 * k - 1.0) * (2.0 * k - 2.0) * zm3;
            }
            if (std::abs(zp) * 4.0 * k * k < 1e-19) break;
            zm3 = zp;
            zp *= z2;
            zm2 *= z2;
        }
        pb.K0 = 0.0;
        pb.kappa = 1.0 / z + cot_reg;
    } else {
        const bool inv = std::abs(x) > 1.0;
        const cplx w = inv ? xi : x;
        const double sg = inv ? -1.0 : 1.0;
        const cplx om = 1.0 - w;
        // pi cot(pi z) = -+ pi i -+ 2 pi i w / (1 - w)
        pb.K0 = -sg * pi * I;
        pb.kappa = -sg * tpi * w / om;
        const cplx pcot = pb.K0 + pb.kappa;
        const cplx csc2 = -4.0 * pi * pi * w / (om * om);
        const cplx dcsc2 = sg * tpi * tpi * tpi * w * (1.0 + w) / (om * om * om);
        cot_reg = pcot - 1.0 / z;
        wp_principal = -pi * pi / 3.0 + csc2 - 1.0 / (z * z);
        dcsc2_reg = dcsc2 + 2.0 / (z * z * z);
    }

    pb.hecke_reg = cot_reg + pb.d_zeta + tpi * ss;
    pb.zeta_reg = cot_reg + pb.d_zeta + z * pb.qp.eta1;
    pb.wp_reg = wp_principal + pb.d_wp;
    pb.wpp_reg = dcsc2_reg + pb.d_wpp;
    return pb;
}

}  // namespace detail

Weierstrass eval_weierstrass(const LatticeCoord& zc, const TauPoint& tau, const PrecisionPolicy& pp) {
    const detail::PointBundle pb = detail::point_bundle(zc.r, zc.s, tau, pp);
    const cplx z = pb.z, l = pb.lambda;
    const cplx wp1 = 1.0 / (z * z) + pb.wp_reg;
    const cplx wpp1 = -2.0 / (z * z * z) + pb.wpp_reg;
    const cplx zeta1 = 1.0 / z + pb.zeta_reg + pb.zeta_shift;
    return {l * l * wp1, l * l * l * wpp1, l * zeta1};
}

cplx eval_ek(int k, const TauPoint& tau, const PrecisionPolicy& pp) {
    static const LatticeCoord half[3] = {{0.5, 0.0}, {0.0, 0.5}, {0.5, 0.5}};
    if (k < 1 || k > 3) throw std::invalid_argument("eval_ek: k must be 1, 2 or 3");
    return eval_weierstrass(half[k - 1], tau, pp).wp;
}

QuasiDerivatives derivatives_from(const QuasiPeriods& b) {
    QuasiDerivatives d;
    d.eta1_p = I / (2.0 * pi) * (b.eta1 * b.eta1 - b.g2 / 12.0);
    d.g2_p = -I / pi * (3.0 * b.g3 - 2.0 * b.eta1 * b.g2);
    d.g3_p = -I / pi * (-3.0 * b.g3 * b.eta1 + b.g2 * b.g2 / 6.0);
    return d;
}

QuasiDerivatives eval_derivatives(const TauPoint& tau, const PrecisionPolicy& pp) {
    return derivatives_from(eval_basics(tau, pp));
}

cplx eval_E2_prime(const TauPoint& tau, const PrecisionPolicy& pp) {
    const QuasiPeriods b = eval_basics(tau, pp);
    const cplx e2 = 3.0 / (pi * pi) * b.eta1;
    const cplx e4 = 3.0 * b.g2 / (4.0 * std::pow(pi, 4));
    return pi * I / 6.0 * (e2 * e2 - e4);
}

double error_bound(const TauPoint& tau, int weight, const PrecisionPolicy& pp) {
    TauPoint t1 = tau;
    double scale = 1.0;
    if (tau.im() < pp.min_im_direct) {
        const Reduction red = reduce_to_F(tau);
        t1 = red.tau;
        scale = std::pow(std::abs(automorphy(red.gamma, t1.z())), weight);
    }
    const int n = series_terms(t1.im(), pp);
    const double tail = kMajorantCoef * majorant_tail(std::exp(-2.0 * pi * t1.im()), 5, n);
    return std::max(tail, 1e-16) * std::max(1.0, scale);
}

}  // namespace ec

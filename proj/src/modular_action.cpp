#include "ec/modular_action.hpp"

#include <cmath>
#include <numeric>
#include <tuple>
#include <utility>
#include <stdexcept>
#include <string>

#include "ec/elliptic_qseries.hpp"
#include "ec/errors.hpp"

namespace ec {

MoebiusMap::MoebiusMap(Int a, Int b, Int c, Int d) : a_(a), b_(b), c_(c), d_(d) {
    if (a * d - b * c != 1)
        throw std::invalid_argument("MoebiusMap: determinant must be 1");
    if (c_ < 0 || (c_ == 0 && d_ < 0)) {
        a_ = -a_;
        b_ = -b_;
        c_ = -c_;
        d_ = -d_;
    }
}

MoebiusMap MoebiusMap::operator*(const MoebiusMap& o) const {
    return {a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_,
            c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_};
}

cplx automorphy(const MoebiusMap& g, cplx tau) {
    return double(g.c()) * tau + double(g.d());
}

TauPoint apply(const MoebiusMap& g, const TauPoint& tau) {
    const cplx t = tau.z();
    const cplx j = automorphy(g, t);
    const cplx w = (double(g.a()) * t + double(g.b())) / j;
    // Im computed from the exact identity keeps tiny heights positive.
    return TauPoint(w.real(), tau.im() / std::norm(j));
}

bool is_gamma02(const MoebiusMap& g) { return g.c() % 2 == 0; }

DomainTag classify_F0(const TauPoint& tau, double tol) {
    const double x = tau.re();
    const double rad = std::abs(tau.z() - 0.5);
    if (x < -tol || x > 1.0 + tol || rad < 0.5 - tol) return DomainTag::outside;
    if (x <= tol || x >= 1.0 - tol || rad <= 0.5 + tol) return DomainTag::F0_boundary;
    return DomainTag::F0_interior;
}

bool in_F(const TauPoint& tau, double tol) {
    const double x = tau.re();
    return x >= -tol && x <= 1.0 + tol && std::abs(tau.z()) >= 1.0 - tol &&
           std::abs(tau.z() - 1.0) >= 1.0 - tol;
}

Reduction reduce_to_F0(const TauPoint& tau, int max_steps) {
    // Height ascent with T^n and V^{-1}: inside |z - 1/2| < 1/2 the map
    // z -> z/(1 - 2z) strictly increases Im z.
    MoebiusMap g;  // current = g * tau
    cplx z = tau.z();
    const double tol = 1e-12;
    for (int step = 0;; ++step) {
        if (step > max_steps)
            throw ReductionStalled("reduce_to_F0: step cap reached at tau = " +
                                   std::to_string(tau.re()) + "+" + std::to_string(tau.im()) + "i");
        const double n = std::floor(z.real());
        if (n != 0.0) {
            g = MoebiusMap::T(-static_cast<MoebiusMap::Int>(n)) * g;
            z -= n;
        }
        if (std::abs(z - 0.5) < 0.5 - tol) {
            g = MoebiusMap(1, 0, -2, 1) * g;
            z = z / (1.0 - 2.0 * z);
            continue;
        }
        break;
    }
    TauPoint t0 = apply(g, tau);
    return {t0, g.inverse()};
}

Reduction reduce_to_F(const TauPoint& tau, int max_steps) {
    MoebiusMap g;
    cplx z = tau.z();
    for (int step = 0;; ++step) {
        if (step > max_steps)
            throw ReductionStalled("reduce_to_F: step cap reached");
        const double n = std::floor(z.real() + 0.5);
        if (n != 0.0) {
            g = MoebiusMap::T(-static_cast<MoebiusMap::Int>(n)) * g;
            z -= n;
        }
        if (std::norm(z) < 1.0 - 1e-15) {
            g = MoebiusMap::S() * g;
            z = -1.0 / z;
            continue;
        }
        break;
    }
    if (z.real() < 0.0) g = MoebiusMap::T(1) * g;
    TauPoint t1 = apply(g, tau);
    return {t1, g.inverse()};
}

QuasiTransform transform_quasi(const MoebiusMap& g, const TauPoint& tau, const PrecisionPolicy& pp) {
    const QuasiPeriods qp = eval_basics(tau, pp);
    const cplx j = automorphy(g, tau.z());
    const cplx j2 = j * j;
    return {j * (double(g.c()) * qp.eta2 + double(g.d()) * qp.eta1), j2 * j2 * qp.g2};
}

CharPair transform_char(const MoebiusMap& g, const CharPair& rs) {
    // (s', r') = (s, r) * gamma^{-1}
    return {double(g.a()) * rs.r - double(g.b()) * rs.s, double(g.d()) * rs.s - double(g.c()) * rs.r};
}

namespace {

MoebiusMap::Int mod_inverse(MoebiusMap::Int x, MoebiusMap::Int m) {
    MoebiusMap::Int r0 = m, r1 = ((x % m) + m) % m, t0 = 0, t1 = 1;
    while (r1 != 0) {
        const auto q = r0 / r1;
        std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
        std::tie(t0, t1) = std::pair{t1, t0 - q * t1};
    }
    return ((t0 % m) + m) % m;
}

}  // namespace

std::vector<MoebiusMap> enumerate_gamma02(int max_c) {
    if (max_c < 2) throw std::invalid_argument("enumerate_gamma02: max_c must be >= 2");
    std::vector<MoebiusMap> out;
    for (MoebiusMap::Int c = 2; c <= max_c; c += 2) {
        for (MoebiusMap::Int d = -(c - 1); d <= c - 1; ++d) {
            if (std::gcd(c, d) != 1) continue;
            const auto a = mod_inverse(d, c);
            const auto b = (a * d - 1) / c;
            out.emplace_back(a, b, c, d);
        }
    }
    return out;
}

}  // namespace ec

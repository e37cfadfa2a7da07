#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ec/elliptic_qseries.hpp"
#include "ec/errors.hpp"

using namespace ec;

namespace {

const TauPoint rho(0.5, std::sqrt(3.0) / 2);

long long sigma(int k, int n) {
    long long s = 0;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) s += static_cast<long long>(std::pow(d, k));
    return s;
}

// Plain divisor-sum Eisenstein series, no shared code with the library.
cplx eisenstein_direct(int k, const TauPoint& tau, int terms) {
    double c = k == 2 ? -24.0 : k == 4 ? 240.0 : -504.0;
    cplx q = std::exp(2.0 * pi * I * tau.z());
    cplx s = 0, qn = 1;
    for (int n = 1; n <= terms; ++n) {
        qn *= q;
        s += double(sigma(k - 1, n)) * qn;
    }
    return 1.0 + c * s;
}

}  // namespace

TEST_CASE("eta1 special values") {
    CHECK(std::abs(eval_eta1(TauPoint(0, 1)) - pi) < 1e-12);
    CHECK(std::abs(eval_eta1(rho) - 2 * pi / std::sqrt(3.0)) < 1e-12);
    CHECK(std::abs(eval_eta1(TauPoint(0.5, 0.5)) - 2 * pi) < 1e-11);
    cplx e5 = eval_eta1(TauPoint(0, 5));
    // pi^2/3 - eta1(5i) = 8 pi^2 q + O(q^2) with q = e^{-10 pi}, so eta1 lies below pi^2/3
    double lead = 8 * pi * pi * std::exp(-10 * pi);
    CHECK(std::abs((pi * pi / 3 - e5.real()) / lead - 1) < 1e-3);
    CHECK(std::abs(e5.imag()) < 1e-15);
}

TEST_CASE("eta2 is tau eta1 - 2 pi i") {
    TauPoint t(0.2, 1.3);
    CHECK(std::abs(eval_eta2(t) - (t.z() * eval_eta1(t) - 2.0 * pi * I)) < 1e-12);
    CHECK(std::abs(eval_eta2(TauPoint(0, 1)) + pi * I) < 1e-12);
}

TEST_CASE("E2 against direct divisor sums") {
    CHECK(std::abs(eval_E2(TauPoint(0, 1)) - 3 / pi) < 1e-12);
    TauPoint t(0, 2);
    CHECK(std::abs(eval_E2(t) - eisenstein_direct(2, t, 200)) < 1e-13);
    TauPoint u(0.31, 0.9);
    CHECK(std::abs(eval_E2(u) - eisenstein_direct(2, u, 200)) < 1e-11);
    CHECK(std::abs(eval_E4(u) - eisenstein_direct(4, u, 200)) < 1e-9);
    // third q-coefficient of E2 is -24 sigma1(3) = -96
    CHECK(-24 * sigma(1, 3) == -96);
}

TEST_CASE("g2 and g3") {
    CHECK(std::abs(eval_invariants(rho).g2) < 1e-10);
    cplx gi = eval_invariants(TauPoint(0, 1)).g2;
    cplx gh = eval_invariants(TauPoint(0.5, 0.5)).g2;
    CHECK(std::abs(gh + 4.0 * gi) < 1e-8 * std::abs(gi));
    CHECK(gi.real() > 12 * pi * pi);
    CHECK(eval_invariants(TauPoint(0.5, 0.7)).g3.real() > 0);
    CHECK(std::abs(eval_invariants(TauPoint(0, 6)).g2 - 4 * std::pow(pi, 4) / 3) < 1e-10);
    TauPoint u(0.1, 1.1);
    double c = std::pow(pi, 6) * 8.0 / 27.0;
    CHECK(std::abs(eval_invariants(u).g3 - c * eisenstein_direct(6, u, 200)) < 1e-9);
}

TEST_CASE("Weierstrass functions") {
    TauPoint t(0.2, 1.1);
    for (LatticeCoord half : {LatticeCoord{0.5, 0}, LatticeCoord{0, 0.5}, LatticeCoord{0.5, 0.5}})
        CHECK(std::abs(eval_weierstrass(half, t).wp_prime) < 1e-9);
    // e1 + e2 + e3 = 0
    CHECK(std::abs(eval_ek(1, t) + eval_ek(2, t) + eval_ek(3, t)) < 1e-10);
    // differential equation at a generic point
    Weierstrass w = eval_weierstrass({0.23, 0.31}, t);
    Invariants g = eval_invariants(t);
    cplx lhs = w.wp_prime * w.wp_prime, rhs = 4.0 * w.wp * w.wp * w.wp - g.g2 * w.wp - g.g3;
    CHECK(std::abs(lhs - rhs) < 1e-9 * (1 + std::abs(lhs)));
    // wp' by central difference in z = r + s tau along r
    double h = 1e-5;
    cplx fd = (eval_weierstrass({0.23 + h, 0.31}, t).wp - eval_weierstrass({0.23 - h, 0.31}, t).wp) / (2 * h);
    CHECK(std::abs(fd - w.wp_prime) < 1e-5 * std::abs(w.wp_prime));
    CHECK_THROWS_AS(eval_weierstrass({1, -2}, t), PoleAtLattice);
}

TEST_CASE("e1 at 1/2 + bi") {
    CHECK(std::abs(eval_ek(1, TauPoint(0.5, 0.5))) < 1e-10);
    cplx e = eval_ek(1, TauPoint(0.5, 0.8));
    CHECK(e.real() > 0);
    CHECK(std::abs(e.imag()) < 1e-10);
}

TEST_CASE("eta1 derivative against finite difference") {
    TauPoint t(0.3, 1.1);
    QuasiPeriods q = eval_basics(t);
    QuasiDerivatives d = eval_derivatives(t);
    CHECK(std::abs(d.eta1_p - I / (2 * pi) * (q.eta1 * q.eta1 - q.g2 / 12.0)) < 1e-12);
    double h = 1e-5;
    cplx fd = (eval_eta1(TauPoint(0.3 + h, 1.1)) - eval_eta1(TauPoint(0.3 - h, 1.1))) / (2 * h);
    CHECK(std::abs(fd - d.eta1_p) < 1e-6);
    // Ramanujan form of E2'
    cplx e2p = eval_E2_prime(t);
    CHECK(std::abs(e2p - 3.0 / (pi * pi) * d.eta1_p) < 1e-12);
}

TEST_CASE("d12 series equals eta1^2 - g2/12") {
    for (TauPoint t : {TauPoint(0, 1), TauPoint(0.4, 0.9), TauPoint(0.7, 2.0)}) {
        QuasiPeriods q = eval_basics(t);
        CHECK(std::abs(q.d12 - (q.eta1 * q.eta1 - q.g2 / 12.0)) < 1e-10);
    }
}

TEST_CASE("choose_truncation meets the majorant") {
    auto check = [](double im, double eps) {
        int n = choose_truncation(im, eps);
        double rho = std::exp(-2 * pi * im);
        double tail = 0;
        for (int k = n + 1; k < n + 2000; ++k) tail += std::pow(k, 3) * std::pow(rho, k);
        CHECK(tail < eps / (320 * std::pow(pi, 4)));
        if (n > 1) {
            double prev = tail + std::pow(n, 3) * std::pow(rho, n);
            CHECK(prev >= eps / (320 * std::pow(pi, 4)));
        }
        return n;
    };
    CHECK(check(std::sqrt(3.0) / 2, 1e-12) <= 40);
    CHECK(check(6.0, 1e-12) <= 3);
    CHECK(choose_truncation(10.0, 0.5) == 1);
    CHECK_THROWS_AS(choose_truncation(0.01, 1e-12, 64), TruncationFailure);
}

TEST_CASE("low Im goes through the reduction") {
    // Im 0.12 is below the direct threshold; oracle is the divisor sum at 2000 terms
    TauPoint t(0.37, 0.12);
    cplx ref = pi * pi / 3.0 * eisenstein_direct(2, t, 2000);
    CHECK(std::abs(eval_eta1(t) - ref) < 1e-8);
    CHECK(std::abs(eval_E2(t) - eisenstein_direct(2, t, 2000)) < 1e-9);
}

TEST_CASE("error bound is small and decreasing") {
    double a = error_bound(TauPoint(0, 1), 2), b = error_bound(TauPoint(0, 3), 2);
    CHECK(a > 0);
    CHECK(a < 1e-9);
    CHECK(b <= a);
}

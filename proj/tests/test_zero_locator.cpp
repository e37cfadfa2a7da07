#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ec/elliptic_qseries.hpp"
#include "ec/errors.hpp"
#include "ec/modular_action.hpp"
#include "ec/premodular.hpp"
#include "ec/zero_locator.hpp"

using namespace ec;

namespace {

// 12 (C eta1 - eta2)^2 - g2 (C - tau)^2 straight from the basic series.
cplx fC_plain(double C, const TauPoint& t) {
    QuasiPeriods q = eval_basics(t);
    cplx u = C * q.eta1 - q.eta2;
    return 12.0 * u * u - q.g2 * (C - t.z()) * (C - t.z());
}

}  // namespace

TEST_CASE("f_C against the defining formula") {
    for (double C : {-3.0, 0.25, 0.5, 2.0})
        for (TauPoint t : {TauPoint(0.3, 0.9), TauPoint(0.55, 1.4), TauPoint(0.1, 0.4)}) {
            cplx a = eval_fC(C, t), b = fC_plain(C, t);
            CHECK(std::abs(a - b) < 1e-9 * (1 + std::abs(b)));
        }
}

TEST_CASE("f_C identities") {
    // f_{-1}(tau/(1-tau)) = (1-tau)^2 (12 eta1^2 - g2) on |tau - 1/2| = 1/2
    double th = 1.1;
    TauPoint t(0.5 + 0.5 * std::cos(th), 0.5 * std::sin(th));
    TauPoint tp(t.z() / (1.0 - t.z()));
    QuasiPeriods q = eval_basics(t);
    cplx rhs = (1.0 - t.z()) * (1.0 - t.z()) * (12.0 * q.eta1 * q.eta1 - q.g2);
    CHECK(std::abs(eval_fC(-1, tp) - rhs) < 1e-9 * (1 + std::abs(rhs)));

    // f_{C'}(tau') = ((1-tau)^2/(1-C)^2) f_C(tau), tau' = 1/(1-tau), C' = 1/(1-C)
    double C = 0.3;
    TauPoint u(0.4, 0.8);
    TauPoint up(1.0 / (1.0 - u.z()));
    cplx w = (1.0 - u.z()) * (1.0 - u.z()) / ((1 - C) * (1 - C));
    CHECK(std::abs(eval_fC(1 / (1 - C), up) - w * eval_fC(C, u)) < 1e-9 * (1 + std::abs(eval_fC(C, u))));

    // derivative through the same scaling, by the chain rule
    cplx dlhs = eval_fC_prime(1 / (1 - C), up) / ((1.0 - u.z()) * (1.0 - u.z()));
    cplx drhs = (-2.0 * (1.0 - u.z()) * eval_fC(C, u) + (1.0 - u.z()) * (1.0 - u.z()) * eval_fC_prime(C, u)) /
                ((1 - C) * (1 - C));
    CHECK(std::abs(dlhs - drhs) < 1e-8 * (1 + std::abs(drhs)));
}

TEST_CASE("f_C derivative against finite difference") {
    for (TauPoint t : {TauPoint(0.5, 1.0), TauPoint(0.2, 0.7)}) {
        double h = 1e-6;
        cplx fd = (eval_fC(0.5, TauPoint(t.re() + h, t.im())) - eval_fC(0.5, TauPoint(t.re() - h, t.im()))) / (2 * h);
        cplx an = eval_fC_prime(0.5, t);
        CHECK(std::abs(fd - an) < 1e-6 * (1 + std::abs(an)));
    }
}

TEST_CASE("count_zeros") {
    auto lin = [](cplx t) { return t - cplx(0.5, 1.0); };
    CHECK(count_zeros(lin, Contour::rectangle(0, 1, 0.5, 1.5)).count == 1);
    CHECK(count_zeros(lin, Contour::rectangle(0, 1, 1.2, 1.5)).count == 0);
    auto sq = [](cplx t) { return (t - cplx(0.3, 1.0)) * (t - cplx(0.6, 1.1)); };
    CHECK(count_zeros(sq, Contour::rectangle(0, 1, 0.5, 1.5)).count == 2);
    CHECK_THROWS_AS(count_zeros(lin, Contour::rectangle(0.5, 1, 1.0, 1.5)), BoundaryZero);

    CHECK(count_zeros_fC(0.5).count == 1);
    CHECK(count_zeros_fC(0.0).count == 0);
    CHECK(count_zeros_fC(1.0).count == 0);
    CHECK(count_zeros_fC(-2.0).count == 1);

    ContourParams ser, par;
    ser.exec = Exec::serial;
    CountResult a = count_zeros_Zrs2({1.0 / 6, 1.0 / 6}, {}, ser), b = count_zeros_Zrs2({1.0 / 6, 1.0 / 6}, {}, par);
    CHECK(a.count == b.count);
    CHECK(a.points_used == b.points_used);
}

TEST_CASE("newton_refine") {
    auto lin = [](cplx t) { return t - cplx(0, 1); };
    TauPoint r = newton_refine(lin, {}, TauPoint(0.1, 1.2), 1e-14);
    CHECK(std::abs(r.z() - cplx(0, 1)) < 1e-12);

    auto f = [](cplx t) { return eval_fC(0.5, TauPoint(t)); };
    auto fp = [](cplx t) { return eval_fC_prime(0.5, TauPoint(t)); };
    TauPoint h = newton_refine(f, fp, TauPoint(0.5, 1.0), 1e-10);
    CHECK(std::abs(f(h.z())) < 1e-10);
    CHECK(std::abs(fp(h.z())) > 1e-3);

    auto z2 = [](cplx t) { return eval_Zrs2({1.0 / 6, 1.0 / 6}, TauPoint(t)); };
    auto seed = find_zero_in_F0({1.0 / 6, 1.0 / 6});
    REQUIRE(seed.has_value());
    TauPoint z = newton_refine(z2, {}, TauPoint(seed->re() + 0.01, seed->im() + 0.01), 1e-10);
    CHECK(std::abs(z2(z.z())) < 1e-10);
    CHECK(classify_F0(z) == DomainTag::F0_interior);

    // no zero and a flat derivative: must fail, not loop
    auto one = [](cplx) { return cplx(1.0); };
    CHECK_THROWS_AS(newton_refine(one, [](cplx) { return cplx(0.0); }, TauPoint(0.5, 1), 1e-12), Diverged);
}

TEST_CASE("phi and the square root branch") {
    CHECK(std::abs(sqrt_g2_12(TauPoint(0, 6)) - pi * pi / 3) < 1e-12);
    TauPoint far(0, 3);
    BranchState br;
    br.sign = Sign::minus;
    br.anchor = sqrt_g2_12(far);
    cplx ph = eval_phi(br, far);
    CHECK(std::abs(ph.real()) < 1e-9);
    cplx q = std::exp(2.0 * pi * I * far.z());
    cplx approx = far.z() + I / (24 * pi) / q + 7.0 * I / (4 * pi);
    CHECK(std::abs(ph - approx) < 1e-3 * std::abs(approx));
    // root nearest the anchor
    BranchState b2;
    b2.anchor = -1.0;
    cplx r = continue_sqrt_g2_12(b2, cplx(12, 0));
    CHECK(std::abs(r + 1.0) < 1e-15);
}

TEST_CASE("solve_tauC") {
    TauCSolution h = solve_tauC(0.5);
    CHECK(std::abs(h.tau.re() - 0.5) < 1e-10);
    CHECK(h.tau.im() > std::sqrt(3.0) / 2);
    CHECK(h.tau.im() < 1.2);
    CHECK(h.count == 1);
    CHECK(h.residual < 1e-9);
    // on Re = 1/2, f_{1/2} = 0 iff eta1 + sqrt(g2/12) = 2 pi / b
    QuasiPeriods q = eval_basics(h.tau);
    cplx lhs = q.eta1 + std::sqrt(q.g2 / 12.0);
    CHECK(std::abs(lhs - 2 * pi / h.tau.im()) < 1e-9);

    TauCSolution m = solve_tauC(-2);
    TauCSolution p = solve_tauC(1.0 / 3);
    CHECK(std::abs(p.tau.z() - 1.0 / (1.0 - m.tau.z())) < 1e-9);

    TauCSolution a = solve_tauC(0.3), b = solve_tauC(0.7);
    CHECK(std::abs(b.tau.z() - (1.0 - std::conj(a.tau.z()))) < 1e-9);

    TauCSolution big = solve_tauC(1000);
    CHECK(std::abs(big.tau.re() - 0.25) < 0.01);
    CHECK(big.tau.im() > 1.5);

    CHECK_THROWS(solve_tauC(0.0));
    CHECK_THROWS(solve_tauC(1.0));
}

TEST_CASE("simple roots and a zero-free boundary") {
    for (double C : {-5.0, -0.5, 0.25, 0.5, 3.0}) {
        TauCSolution s = solve_tauC(C);
        double g2 = std::abs(eval_invariants(s.tau).g2);
        CHECK(std::abs(eval_fC_prime(C, s.tau)) > 1e-8 * (1 + g2));
    }
    for (double C : {-2.0, -0.5, 0.25, 0.5, 0.75, 2.0, 5.0}) {
        double worst = 1e300;
        for (int k = 0; k <= 200; ++k) {
            double y = 0.15 + (6.0 - 0.15) * k / 200.0;
            worst = std::min(worst, std::abs(eval_fC(C, TauPoint(0, y))));
            worst = std::min(worst, std::abs(eval_fC(C, TauPoint(1, y))));
            double th = std::asin(0.3) + (pi - 2 * std::asin(0.3)) * k / 200.0;
            worst = std::min(worst, std::abs(eval_fC(C, TauPoint(0.5 + 0.5 * std::cos(th), 0.5 * std::sin(th)))));
        }
        CHECK(worst > 1e-7);
    }
}

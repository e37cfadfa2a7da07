#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <tuple>

#include "ec/curve_tracer.hpp"
#include "ec/elliptic_qseries.hpp"
#include "ec/errors.hpp"
#include "ec/modular_action.hpp"

using namespace ec;

namespace {

const double s3h = std::sqrt(3.0) / 2;

}  // namespace

TEST_CASE("trace of the zero branch is symmetric") {
    TraceResult tr = trace_curve(Branch::zero, 0.1, 0.9, 33);
    REQUIRE(tr.samples.size() == 33);
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
        const CurveSample& a = tr.samples[i];
        const CurveSample& b = tr.samples[tr.samples.size() - 1 - i];
        CHECK(std::abs(a.C + b.C - 1) < 1e-12);
        CHECK(std::abs(b.tau.z() - (1.0 - std::conj(a.tau.z()))) < 1e-8);
        CHECK(a.residual < 1e-9);
        CHECK(a.branch == Branch::zero);
    }
    // ascending C
    for (std::size_t i = 1; i < tr.samples.size(); ++i) CHECK(tr.samples[i].C > tr.samples[i - 1].C);
    // the midpoint is tau(1/2) on Re = 1/2
    CHECK(std::abs(tr.samples[16].tau.re() - 0.5) < 1e-10);
}

TEST_CASE("serial and parallel traces agree") {
    TraceOptions ser, par;
    ser.exec = Exec::serial;
    par.exec = Exec::parallel;
    TraceResult a = trace_curve(Branch::plus, 1.2, 30, 12, {}, ser);
    TraceResult b = trace_curve(Branch::plus, 1.2, 30, 12, {}, par);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].tau.z() == b.samples[i].tau.z());
        CHECK(a.samples[i].residual == b.samples[i].residual);
    }
    CHECK(a.phi_sign == b.phi_sign);
}

TEST_CASE("minus and plus branches") {
    TraceResult m = trace_curve(Branch::minus, -50, -0.1, 40);
    // Re tau grows toward 3/4 as C -> -infinity
    for (std::size_t i = 1; i < m.samples.size(); ++i) CHECK(m.samples[i].tau.re() < m.samples[i - 1].tau.re());
    CHECK(m.samples.front().tau.re() > 0.7);
    CHECK(m.samples.front().tau.re() < 0.75);
    TraceResult p = trace_curve(Branch::plus, 1.1, 100, 60);
    CHECK(std::abs(p.samples.back().tau.re() - 0.25) < 0.01);
    CHECK(std::abs(p.samples.back().tau.re() - 0.25) < std::abs(p.samples.front().tau.re() - 0.25));
    // every sample lies on a curve where Im phi vanishes for the locked sign
    for (const CurveSample& s : m.samples) {
        BranchState br{m.phi_sign, s.root};
        CHECK(std::abs(eval_phi(br, s.tau).imag()) < 1e-8 * (1 + std::abs(s.C)));
    }
}

TEST_CASE("endpoint behaviour near C = 0 and C = 1") {
    TraceResult z = trace_curve(Branch::zero, 0.002, 0.03, 8);
    for (std::size_t i = 1; i < z.samples.size(); ++i)
        CHECK(std::abs(z.samples[i].tau.z()) > std::abs(z.samples[i - 1].tau.z()));
    TraceResult w = trace_curve(Branch::zero, 0.97, 0.998, 8);
    for (std::size_t i = 1; i < w.samples.size(); ++i)
        CHECK(std::abs(w.samples[i].tau.z() - 1.0) < std::abs(w.samples[i - 1].tau.z() - 1.0));
}

TEST_CASE("trace argument checks") {
    CHECK_THROWS_AS(trace_curve(Branch::zero, 0.5, 0.5, 5), UsageError);
    CHECK_THROWS_AS(trace_curve(Branch::zero, 0.5, 1.5, 5), UsageError);
    CHECK_THROWS_AS(trace_curve(Branch::minus, -1, -0.5, 1), UsageError);
    CHECK_THROWS_AS(parse_branch("sideways"), UsageError);
    CHECK(branch_of(-1) == Branch::minus);
    CHECK(branch_of(0.4) == Branch::zero);
    CHECK(branch_of(4) == Branch::plus);
}

TEST_CASE("theta pair") {
    auto [t, t1] = theta_pair(0.5);
    CHECK(std::abs(t - 0.5) < 1e-11);
    CHECK(t1 > 0);
    CHECK(t1 < 0.5);
    auto [u, u1] = theta_pair(s3h);
    CHECK(std::abs(u - 0.5) < 1e-11);
    CHECK(std::abs(u1 - 1) < 1e-8);
}

TEST_CASE("special points") {
    SpecialMinus sm = special_tau_minus_full();
    CHECK(std::abs(sm.tau.re() - 0.5) < 1e-15);
    CHECK(sm.tau.im() > 0.5);
    CHECK(sm.tau.im() < s3h);
    auto [t, t1] = theta_pair(sm.tau.im());
    CHECK(std::abs(t - t1) < 1e-11);
    CHECK(sm.C_minus < 0);
    CHECK(sm.C_plus > 1);
    // 1/(1 - tau_-) lies on the zero branch, at C = 1/(1 - C_-)
    TauPoint img(1.0 / (1.0 - sm.tau.z()));
    double C0 = 1.0 / (1.0 - sm.C_minus);
    CHECK(C0 > 0);
    CHECK(C0 < 1);
    CHECK(std::abs(eval_fC(C0, img)) / fC_scale(C0) < 1e-8);
    CHECK(std::abs(solve_tauC(C0).tau.z() - img.z()) < 1e-8);

    TauPoint half = special_tau_half();
    CHECK(half.im() > s3h);
    CHECK(half.im() < 1.2);
    CHECK(std::abs(solve_tauC(0.5).tau.z() - half.z()) < 1e-9);

    double b0 = special_b0();
    CHECK(b0 > 5.0 / 24);
    CHECK(b0 < 1 / (2 * std::sqrt(3.0)));
    CHECK(std::abs(b0 * half.im() - 0.25) < 1e-10);
    CHECK(deta1_db(b0 - 0.01) > 0);
    CHECK(deta1_db(b0 + 0.01) < 0);
}

TEST_CASE("deta1_db matches a finite difference") {
    double b = 0.7, h = 1e-5;
    double fd = (eval_eta1(TauPoint(0.5, b + h)).real() - eval_eta1(TauPoint(0.5, b - h)).real()) / (2 * h);
    CHECK(std::abs(fd - deta1_db(b)) < 1e-6);
}

TEST_CASE("Hessian determinant") {
    BranchState bp{Sign::plus, sqrt_g2_12(TauPoint(0, 2))}, bm{Sign::minus, sqrt_g2_12(TauPoint(0, 2))};
    CHECK(std::abs(hessian_detG2(Sign::plus, TauPoint(0, 2), bp)) > 1e-4);
    CHECK(std::abs(hessian_detG2(Sign::minus, TauPoint(0, 2), bm)) > 1e-4);

    TraceResult tr = trace_curve(Branch::zero, 0.2, 0.8, 7);
    for (const CurveSample& s : tr.samples) {
        BranchState br{tr.phi_sign, s.root};
        double det = hessian_detG2(tr.phi_sign, s.tau, br);
        double sc = hessian_scale(tr.phi_sign, s.tau, br);
        CHECK(std::abs(det) < 1e-8 * sc);
        // straddle: opposite signs just above and below the curve
        BranchState b1{tr.phi_sign, s.root}, b2{tr.phi_sign, s.root};
        double up = hessian_detG2(tr.phi_sign, TauPoint(s.tau.re(), s.tau.im() + 0.01), b1);
        double dn = hessian_detG2(tr.phi_sign, TauPoint(s.tau.re(), s.tau.im() - 0.01), b2);
        CHECK(up * dn < 0);
    }
    BranchState br{Sign::plus, 0.0};
    CHECK_THROWS_AS(hessian_detG2(Sign::plus, TauPoint(0.5, s3h), br), ExcludedPoint);
}

TEST_CASE("critical points of E2") {
    auto pts = critical_points_E2(6);
    CHECK(pts.size() == enumerate_gamma02(6).size());
    double bhat = special_tau_half().im();
    bool seen = false;
    std::set<std::pair<double, double>> where;
    for (const CriticalPoint& p : pts) {
        CHECK(p.residual < 1e-8);
        CHECK(std::abs(eval_E2_prime(p.tau_star)) < 1e-8);
        CHECK(reduce_to_F0(p.tau_star).gamma == p.gamma);
        where.insert({std::round(p.tau_star.re() * 1e9), std::round(p.tau_star.im() * 1e9)});
        if (p.gamma == MoebiusMap(1, -1, 2, -1)) {
            seen = true;
            CHECK(std::abs(p.tau_star.re() - 0.5) < 1e-10);
            CHECK(std::abs(p.tau_star.im() - 0.25 / bhat) < 1e-10);
        }
    }
    CHECK(seen);
    CHECK(where.size() == pts.size());

    auto ser = critical_points_E2(4, {}, Exec::serial), par = critical_points_E2(4, {}, Exec::parallel);
    REQUIRE(ser.size() == par.size());
    for (std::size_t i = 0; i < ser.size(); ++i) CHECK(ser[i].tau_star.z() == par[i].tau_star.z());
}

TEST_CASE("no critical point in the c = 0 tiles") {
    // E2' ~ -48 pi i q high up, so the absolute floor is checked up to Im 1.5
    // and E2'/q above that
    auto fn = [](const TauPoint& t) { return eval_E2_prime(t); };
    auto g = grid_eval(fn, 0.0, 1.0, 41, 0.5, 1.5, 41);
    int checked = 0;
    for (int j = 0; j < 41; ++j)
        for (int i = 0; i < 41; ++i) {
            TauPoint t(i / 40.0, 0.5 + j / 40.0);
            if (classify_F0(t) == DomainTag::outside) continue;
            ++checked;
            CHECK(std::abs(g[j * 41 + i]) > 1e-4);
            // F0 + m: E2' is 1-periodic
            CHECK(std::abs(eval_E2_prime(TauPoint(t.re() + 3, t.im())) - g[j * 41 + i]) < 1e-10);
        }
    CHECK(checked > 1000);
    auto hq = [](const TauPoint& t) { return eval_E2_prime(t) / std::exp(2.0 * pi * I * t.z()); };
    for (cplx v : grid_eval(hq, 0.0, 1.0, 21, 1.5, 6.0, 21)) CHECK(std::abs(v) > 1.0);
    auto s = grid_eval(fn, 0.0, 1.0, 9, 0.5, 3.0, 9, Exec::serial);
    auto p = grid_eval(fn, 0.0, 1.0, 9, 0.5, 3.0, 9, Exec::parallel);
    CHECK(s == p);
}

TEST_CASE("appendix zeros") {
    TauPoint a = appendix_tau_s(0.1);
    CHECK(std::abs(a.re() - 0.5) < 1e-8);
    TauPoint b = appendix_tau_s(0.01);
    CHECK(std::abs(b.im() - special_tau_half().im()) < 0.05);
    TauPoint c = appendix_tau_s(0.45);
    CHECK(c.im() > a.im());
    BStar bs = appendix_b_star();
    CHECK(bs.value > s3h);
    CHECK(bs.value < 1.2);
}

TEST_CASE("symmetries") {
    TraceResult z = trace_curve(Branch::zero, 0.1, 0.9, 9);
    SymmetryReport r = verify_symmetries(z.samples);
    CHECK(r.pairs_reflect == 9);
    CHECK(r.max_reflect < 1e-8);
    CHECK(r.pairs_moebius == 9);
    CHECK(r.max_moebius < 1e-8);
    SymmetryReport s = verify_symmetries(z.samples, {}, Exec::serial);
    CHECK(s.max_reflect == r.max_reflect);
    CHECK(s.max_moebius == r.max_moebius);

    // C = 0.4 on the zero branch pairs with C' = 1/0.6 on the plus branch
    TauCSolution a = solve_tauC(0.4), b = solve_tauC(1 / 0.6);
    CHECK(std::abs(b.tau.z() - 1.0 / (1.0 - a.tau.z())) < 1e-9);
    // fixed point of C -> 1 - C
    CHECK(std::abs(solve_tauC(0.5).tau.re() - 0.5) < 1e-10);
}

TEST_CASE("minus and plus samples avoid the upper ray, no self-intersection") {
    for (auto [b, lo, hi] : {std::tuple{Branch::minus, -200.0, -0.02}, std::tuple{Branch::plus, 1.02, 200.0}}) {
        TraceResult tr = trace_curve(b, lo, hi, 50);
        for (const CurveSample& s : tr.samples)
            CHECK((std::abs(s.tau.re() - 0.5) > 1e-6 || s.tau.im() < s3h));
        for (std::size_t i = 0; i < tr.samples.size(); ++i)
            for (std::size_t j = i + 1; j < tr.samples.size(); ++j)
                CHECK(std::abs(tr.samples[i].tau.z() - tr.samples[j].tau.z()) > 1e-6);
    }
}

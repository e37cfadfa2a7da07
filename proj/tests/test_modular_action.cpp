#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <set>
#include <tuple>

#include "ec/elliptic_qseries.hpp"
#include "ec/modular_action.hpp"
#include "ec/premodular.hpp"

using namespace ec;

namespace {

bool same_point(const TauPoint& a, const TauPoint& b, double tol) { return std::abs(a.z() - b.z()) < tol; }

bool same_up_to_sign(const MoebiusMap& g, const MoebiusMap& h) {
    return g == h || (g.a() == -h.a() && g.b() == -h.b() && g.c() == -h.c() && g.d() == -h.d());
}

// a, b with a d - b c = 1 for coprime (c, d).
MoebiusMap complete(long long c, long long d) {
    long long x0 = 1, x1 = 0, y0 = 0, y1 = 1, r0 = d, r1 = c;
    while (r1 != 0) {
        long long q = r0 / r1;
        std::tie(r0, r1) = std::make_tuple(r1, r0 - q * r1);
        std::tie(x0, x1) = std::make_tuple(x1, x0 - q * x1);
        std::tie(y0, y1) = std::make_tuple(y1, y0 - q * y1);
    }
    // x0 d + y0 c = r0 = +-1
    long long a = x0 * r0, b = -y0 * r0;
    return {a, b, c, d};
}

}  // namespace

TEST_CASE("apply and automorphy") {
    TauPoint t(0.3, 0.9);
    CHECK(same_point(apply(MoebiusMap(), t), t, 1e-15));
    MoebiusMap g(1, -1, 1, 0);
    CHECK(std::abs(apply(g, t).z() - (t.z() - 1.0) / t.z()) < 1e-14);
    CHECK(std::abs(automorphy(g, t.z()) - t.z()) < 1e-15);
    // F0 near 0 goes to F0 near infinity
    TauPoint near0(0.001, 0.05);
    CHECK(classify_F0(near0) != DomainTag::outside);
    TauPoint up = apply(g, near0);
    CHECK(classify_F0(up) != DomainTag::outside);
    CHECK(up.im() > 10);
    // group law
    MoebiusMap h(3, 1, 2, 1);
    CHECK(std::abs(apply(g * h, t).z() - apply(g, apply(h, t)).z()) < 1e-13);
    CHECK_THROWS(MoebiusMap(1, 1, 1, 1));
}

TEST_CASE("Gamma0(2) membership") {
    CHECK(is_gamma02(MoebiusMap(1, 0, 0, 1)));
    CHECK(is_gamma02(MoebiusMap(1, -1, 2, -1)));
    CHECK_FALSE(is_gamma02(MoebiusMap(0, -1, 1, 0)));
}

TEST_CASE("domain classification") {
    CHECK(classify_F0(TauPoint(0.5, 2)) == DomainTag::F0_interior);
    CHECK(classify_F0(TauPoint(0.5, 0.5)) == DomainTag::F0_boundary);
    CHECK(classify_F0(TauPoint(0, 3)) == DomainTag::F0_boundary);
    CHECK(classify_F0(TauPoint(0.5, 0.4)) == DomainTag::outside);
    CHECK(classify_F0(TauPoint(1.2, 3)) == DomainTag::outside);
    CHECK(in_F(TauPoint(0.5, std::sqrt(3.0) / 2)));
    CHECK_FALSE(in_F(TauPoint(0.5, 0.6)));
}

TEST_CASE("reduce_to_F0") {
    Reduction r = reduce_to_F0(TauPoint(0.5, 2));
    CHECK(same_point(r.tau, TauPoint(0.5, 2), 1e-15));
    CHECK(r.gamma == MoebiusMap());

    TauPoint t0(0.3, 0.9);
    MoebiusMap g(1, -1, 2, -1);
    Reduction back = reduce_to_F0(apply(g, t0));
    CHECK(same_point(back.tau, t0, 1e-12));
    CHECK(same_up_to_sign(back.gamma, g));

    // brute force: the Gamma0(2) coset whose preimage of 0.5+0.1i lies in F0
    TauPoint t(0.5, 0.1);
    Reduction red = reduce_to_F0(t);
    CHECK(red.gamma.c() != 0);
    CHECK(is_gamma02(red.gamma));
    CHECK(same_point(apply(red.gamma, red.tau), t, 1e-12));
    int found = 0;
    for (long long c = 2; c <= 64; c += 2)
        for (long long d = -64; d <= 64; ++d) {
            if (std::gcd(c, d) != 1) continue;
            MoebiusMap h = complete(c, d);
            TauPoint pre = apply(h.inverse(), t);
            double shift = std::floor(pre.re());
            TauPoint pre_shift(pre.re() - shift, pre.im());
            if (classify_F0(pre_shift, 1e-9) == DomainTag::F0_interior) {
                ++found;
                CHECK(same_point(pre_shift, red.tau, 1e-9));
            }
        }
    CHECK(found >= 1);
}

TEST_CASE("reduce_to_F") {
    TauPoint rho(0.5, std::sqrt(3.0) / 2);
    Reduction r = reduce_to_F(rho);
    CHECK(same_point(r.tau, rho, 1e-14));
    Reduction s = reduce_to_F(TauPoint(0, 0.1));
    CHECK(s.gamma.c() != 0);
    CHECK(s.tau.im() >= std::sqrt(3.0) / 2 - 1e-12);
    CHECK(in_F(s.tau, 1e-12));
    // oracle: plain S/T reduction into |Re| <= 1/2, |tau| >= 1
    cplx z(0, 0.1);
    for (int i = 0; i < 100; ++i) {
        z -= std::round(z.real());
        if (std::abs(z) < 1) z = -1.0 / z;
        else break;
    }
    CHECK(std::abs(z.imag() - s.tau.im()) < 1e-12);
    CHECK(same_point(apply(s.gamma, s.tau), TauPoint(0, 0.1), 1e-12));
}

TEST_CASE("transform_quasi matches direct evaluation") {
    TauPoint t(0.2, 1.3);
    MoebiusMap g(1, 0, 2, 1);
    QuasiTransform q = transform_quasi(g, t);
    TauPoint gt = apply(g, t);
    PrecisionPolicy direct;
    direct.min_im_direct = 0.3;
    direct.max_terms = 4096;
    CHECK(std::abs(q.eta1 - eval_eta1(gt, direct)) < 1e-9);
    CHECK(std::abs(q.g2 - eval_invariants(gt, direct).g2) < 1e-7);
}

TEST_CASE("transform_char") {
    CharPair rs{0.3, 0.2};
    CharPair id = transform_char(MoebiusMap(), rs);
    CHECK(id.r == doctest::Approx(0.3));
    CHECK(id.s == doctest::Approx(0.2));
    // (r,s) -> (-s, r+s), up to the overall sign fixed by the stored representative
    MoebiusMap m1(0, 1, -1, 1);
    CharPair g1 = transform_char(m1, rs);
    double sg = automorphy(m1, 0.0).real() < 0 ? -1.0 : 1.0;  // d of the representative
    CHECK(g1.r == doctest::Approx(-0.2 * sg));
    CHECK(g1.s == doctest::Approx(0.5 * sg));
    TauPoint u(0.4, 1.2);
    cplx l1 = automorphy(m1, u.z());
    CHECK(std::abs(eval_Zrs2(g1, apply(m1, u)) - l1 * l1 * l1 * eval_Zrs2(rs, u)) < 1e-9);
    CharPair g2 = transform_char(MoebiusMap(1, -1, 1, 0), rs);
    CHECK(g2.r == doctest::Approx(0.5));
    CHECK(g2.s == doctest::Approx(-0.3));
    // Z^{(2)}_{r',s'}(gamma tau) = (c tau + d)^3 Z^{(2)}_{r,s}(tau)
    TauPoint t(0.4, 1.2);
    MoebiusMap g(1, -1, 1, 0);
    cplx lam = automorphy(g, t.z());
    CHECK(std::abs(eval_Zrs2(g2, apply(g, t)) - lam * lam * lam * eval_Zrs2(rs, t)) < 1e-9);
}

TEST_CASE("enumerate_gamma02 against brute force") {
    auto list = enumerate_gamma02(2);
    auto has = [&](MoebiusMap m) {
        for (const auto& g : list)
            if (same_up_to_sign(g, m)) return true;
        return false;
    };
    CHECK(has(MoebiusMap(1, 0, 2, 1)));
    CHECK(has(MoebiusMap(1, -1, 2, -1)));

    auto big = enumerate_gamma02(8);
    std::set<std::pair<long long, long long>> seen, expect;
    for (const auto& g : big) {
        CHECK(is_gamma02(g));
        seen.insert({g.c(), g.d()});
    }
    for (long long c = 2; c <= 8; c += 2)
        for (long long d = -c + 1; d < c; ++d)
            if (std::gcd(c, d) == 1) expect.insert({c, d});
    CHECK(seen == expect);
    CHECK(big.size() == expect.size());
}

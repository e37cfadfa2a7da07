#pragma once

#include <cstdint>
#include <vector>

#include "ec/types.hpp"

namespace ec {

// Integer unimodular matrix, stored modulo +-I with c > 0, or c == 0 and d > 0.
class MoebiusMap {
public:
    using Int = std::int64_t;

    MoebiusMap() = default;
    MoebiusMap(Int a, Int b, Int c, Int d);

    Int a() const { return a_; }
    Int b() const { return b_; }
    Int c() const { return c_; }
    Int d() const { return d_; }

    MoebiusMap operator*(const MoebiusMap& o) const;
    MoebiusMap inverse() const { return {d_, -b_, -c_, a_}; }
    bool operator==(const MoebiusMap& o) const = default;

    static MoebiusMap T(Int n = 1) { return {1, n, 0, 1}; }
    static MoebiusMap S() { return {0, -1, 1, 0}; }
    static MoebiusMap V() { return {1, 0, 2, 1}; }

private:
    Int a_ = 1, b_ = 0, c_ = 0, d_ = 1;
};

// c*tau + d for the stored representative.
cplx automorphy(const MoebiusMap& g, cplx tau);

TauPoint apply(const MoebiusMap& g, const TauPoint& tau);

bool is_gamma02(const MoebiusMap& g);

enum class DomainTag { F0_interior, F0_boundary, outside };

// F0 = {0 <= Re <= 1, |tau - 1/2| >= 1/2}.
DomainTag classify_F0(const TauPoint& tau, double tol = 1e-12);

// F = {0 <= Re <= 1, |tau| >= 1, |tau - 1| >= 1}.
bool in_F(const TauPoint& tau, double tol = 1e-12);

struct Reduction {
    TauPoint tau;        // reduced point
    MoebiusMap gamma;    // input = apply(gamma, tau)
};

Reduction reduce_to_F0(const TauPoint& tau, int max_steps = 200000);
Reduction reduce_to_F(const TauPoint& tau, int max_steps = 200000);

struct QuasiTransform {
    cplx eta1;
    cplx g2;
};

// eta1 and g2 at gamma*tau from their values at tau.
QuasiTransform transform_quasi(const MoebiusMap& g, const TauPoint& tau, const PrecisionPolicy& pp = {});

// (r',s') with Z_{r',s'}(gamma*tau) = (c*tau + d) Z_{r,s}(tau).
CharPair transform_char(const MoebiusMap& g, const CharPair& rs);

// Gamma0(2) maps with even 0 < c <= max_c and |d| < c, gcd(c,d) = 1.
std::vector<MoebiusMap> enumerate_gamma02(int max_c);

}  // namespace ec

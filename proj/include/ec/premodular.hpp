#pragma once

#include <optional>

#include "ec/types.hpp"
#include "ec/zero_locator.hpp"

namespace ec {

enum class TriangleTag { T0, T1, T2, T3, boundary, half_lattice };

const char* triangle_name(TriangleTag t);

// Representative of (r,s) in [0,1) x [0,1/2] under (r,s) -> (r+m, s+n) and
// (r,s) -> (-r,-s).
CharPair normalize_char(const CharPair& rs);

TriangleTag classify(const CharPair& rs, double tol = 1e-12);

// Hecke form Z_{r,s}(tau) = zeta(r + s tau) - (r + s tau) eta1 + 2 pi i s.
cplx eval_Zrs(const CharPair& rs, const TauPoint& tau, const PrecisionPolicy& pp = {});

// Z^{(2)} = Z^3 - 3 wp Z - wp', computed without the z^{-3} cancellation.
cplx eval_Zrs2(const CharPair& rs, const TauPoint& tau, const PrecisionPolicy& pp = {});

enum class Cusp { zero, one, infinity };

struct CuspValue {
    enum class Kind { finite, leading_q, leading_q_half, divergent };
    Kind kind;
    cplx value;  // limit, or the coefficient of q resp. q^{1/2}
};

CuspValue cusp_value(const CharPair& rs, Cusp cusp);

// Unique zero of Z^{(2)}_{r,s} in F0, or nothing when (r,s) lies in T0.
std::optional<TauPoint> find_zero_in_F0(const CharPair& rs, const PrecisionPolicy& pp = {},
                                        const ContourParams& cp = {});

// Zero count of Z^{(2)}_{r,s} over the truncated F0.
CountResult count_zeros_Zrs2(const CharPair& rs, const PrecisionPolicy& pp = {}, const ContourParams& cp = {});

// F_{C,s}(tau) = (4 (tau - C) / s) Z^{(2)}_{-Cs, s}(tau).
cplx blowup_FCs(double C, double s, const TauPoint& tau, const PrecisionPolicy& pp = {});

}  // namespace ec

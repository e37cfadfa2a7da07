#include "ec/premodular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ec/elliptic_qseries.hpp"
#include "ec/errors.hpp"
#include "ec/modular_action.hpp"

namespace ec {

const char* triangle_name(TriangleTag t) {
    switch (t) {
        case TriangleTag::T0: return "T0";
        case TriangleTag::T1: return "T1";
        case TriangleTag::T2: return "T2";
        case TriangleTag::T3: return "T3";
        case TriangleTag::boundary: return "boundary";
        case TriangleTag::half_lattice: return "half_lattice";
    }
    return "?";
}

CharPair normalize_char(const CharPair& rs) {
    double r = rs.r - std::floor(rs.r);
    double s = rs.s - std::floor(rs.s);
    if (s > 0.5) {
        r = 1.0 - r;
        s = 1.0 - s;
        r -= std::floor(r);
    }
    return {r, s};
}

TriangleTag classify(const CharPair& rs, double tol) {
    const CharPair n = normalize_char(rs);
    const double r = n.r, s = n.s;
    auto near = [tol](double x, double v) { return std::abs(x - v) <= tol; };
    auto gt = [tol](double a, double b) { return a > b + tol; };
    if ((near(r, 0) || near(r, 0.5) || near(r, 1)) && (near(s, 0) || near(s, 0.5)))
        return TriangleTag::half_lattice;
    const bool s_in = gt(s, 0) && gt(0.5, s);
    if (s_in && gt(r, 0) && gt(0.5, r) && gt(r + s, 0.5)) return TriangleTag::T0;
    if (s_in && gt(r, 0.5) && gt(1.0, r) && gt(r + s, 1.0)) return TriangleTag::T1;
    if (s_in && gt(r, 0.5) && gt(1.0, r) && gt(1.0, r + s)) return TriangleTag::T2;
    if (gt(r, 0) && gt(s, 0) && gt(0.5, r + s)) return TriangleTag::T3;
    return TriangleTag::boundary;
}

cplx eval_Zrs(const CharPair& rs, const TauPoint& tau, const PrecisionPolicy& pp) {
    const detail::PointBundle pb = detail::point_bundle(rs.r, rs.s, tau, pp);
    return pb.lambda * (1.0 / pb.z + pb.hecke_reg);
}

cplx eval_Zrs2(const CharPair& rs, const TauPoint& tau, const PrecisionPolicy& pp) {
    const detail::PointBundle pb = detail::point_bundle(rs.r, rs.s, tau, pp);
    const cplx l3 = pb.lambda * pb.lambda * pb.lambda;
    if (pb.small_z) {
        // With Z = 1/z + B, wp = 1/z^2 - h1, wp' = -2/z^3 - h2 the poles cancel:
        // Z^3 - 3 wp Z - wp' = 3 (B^2 + h1)/z + B^3 + 3 h1 B + h2.
        const cplx B = pb.hecke_reg, h1 = -pb.wp_reg, h2 = -pb.wpp_reg;
        return l3 * (3.0 * (B * B + h1) / pb.z + B * B * B + 3.0 * h1 * B + h2);
    }
    // Z = c + dZ, wp = P0 + dP, wp' = P0' + dP' with c = pi cot(pi z) + k,
    // k = 2 pi i s. The q-free part c^3 - 3 P0 c - P0' reduces to
    // k (k^2 + 3 k pi cot(pi z) - 2 pi^2), written so that it vanishes
    // exactly where it should.
    const double s = pb.s_red;
    const cplx k = 2.0 * pi * I * s;
    const double p2 = pi * pi;
    const double poly = pb.K0.imag() < 0.0 ? -2.0 * p2 * (2.0 * s - 1.0) * (s - 1.0)
                                           : -2.0 * p2 * (2.0 * s + 1.0) * (s + 1.0);
    const cplx e0 = k * (poly + 3.0 * pb.kappa * k);
    const cplx c = (pb.K0 + k) + pb.kappa;
    const cplx P0 = -p2 / 3.0 + 2.0 * pb.K0 * pb.kappa + pb.kappa * pb.kappa;
    const cplx dZ = pb.d_zeta, dP = pb.d_wp, dPp = pb.d_wpp;
    const cplx v = e0 + 3.0 * c * c * dZ - 3.0 * P0 * dZ - 3.0 * c * dP - dPp + 3.0 * c * dZ * dZ - 3.0 * dP * dZ +
                   dZ * dZ * dZ;
    return l3 * v;
}

CuspValue cusp_value(const CharPair& rs, Cusp cusp) {
    const double tol = 1e-12;
    auto near = [tol](double x, double v) { return std::abs(x - v) <= tol; };
    const double p3 = pi * pi * pi;
    if (cusp == Cusp::infinity) {
        const double r = rs.r - std::floor(rs.r), s = rs.s - std::floor(rs.s);
        const bool r_half = near(r, 0) || near(r, 0.5) || near(r, 1);
        if (near(s, 0) || near(s, 1)) {
            if (r_half) throw Unclassified("cusp infinity: (r,s) on the half-period lattice");
            return {CuspValue::Kind::leading_q, -48.0 * p3 * std::sin(2.0 * pi * r)};
        }
        if (near(s, 0.5)) {
            if (r_half) throw Unclassified("cusp infinity: (r,s) on the half-period lattice");
            return {CuspValue::Kind::leading_q_half, -12.0 * p3 * std::sin(2.0 * pi * r)};
        }
        return {CuspValue::Kind::finite, 4.0 * p3 * I * s * (1.0 - s) * (2.0 * s - 1.0)};
    }
    const CharPair n = normalize_char(rs);
    auto open = [tol](double x, double a, double b) { return x > a + tol && x < b - tol; };
    if (cusp == Cusp::zero) {
        if (open(n.r, 0.0, 0.5) || open(n.r, 0.5, 1.0)) return {CuspValue::Kind::divergent, 0.0};
        throw Unclassified("cusp 0: behaviour not classified for r = " + std::to_string(n.r));
    }
    const double t = n.r + n.s;
    if (open(t, 0.0, 0.5) || open(t, 0.5, 1.0) || open(t, 1.0, 1.5)) return {CuspValue::Kind::divergent, 0.0};
    throw Unclassified("cusp 1: behaviour not classified for r + s = " + std::to_string(t));
}

CountResult count_zeros_Zrs2(const CharPair& rs, const PrecisionPolicy& pp, const ContourParams& cp) {
    auto f = [rs, pp](cplx z) { return eval_Zrs2(rs, TauPoint(z), pp); };
    return count_zeros(f, truncated_F0(cp.t_top, cp.cusp_delta), cp.zero_threshold, cp.exec);
}

namespace {

struct Cell {
    double x0, x1, y0, y1;
};

double floor_min(double x0, double x1, double delta) {
    double m = INFINITY;
    for (int k = 0; k <= 64; ++k) m = std::min(m, truncated_F0_floor(x0 + (x1 - x0) * k / 64.0, delta));
    return m;
}

}  // namespace

std::optional<TauPoint> find_zero_in_F0(const CharPair& rs, const PrecisionPolicy& pp, const ContourParams& cp) {
    const TriangleTag tag = classify(rs);
    if (tag == TriangleTag::boundary || tag == TriangleTag::half_lattice)
        throw std::invalid_argument(std::string("find_zero_in_F0: (r,s) is ") + triangle_name(tag));
    const int expected = tag == TriangleTag::T0 ? 0 : 1;
    const CountResult total = count_zeros_Zrs2(rs, pp, cp);
    if (total.count != expected)
        throw CountMismatch("Z2 zero count over truncated F0 is " + std::to_string(total.count) + ", expected " +
                            std::to_string(expected) + " for " + triangle_name(tag));
    if (expected == 0) return std::nullopt;

    auto f = [rs, pp](cplx z) { return eval_Zrs2(rs, TauPoint(z), pp); };
    const double delta = cp.cusp_delta;
    Cell cell{0.0, 1.0, floor_min(0.0, 1.0, delta), cp.t_top};
    static constexpr std::array<double, 3> ratios{0.5371, 0.4629, 0.5813};
    while (std::max(cell.x1 - cell.x0, cell.y1 - cell.y0) >= 1e-3) {
        bool found = false;
        for (double rho : ratios) {
            const double xm = cell.x0 + rho * (cell.x1 - cell.x0);
            const double ym = cell.y0 + rho * (cell.y1 - cell.y0);
            const std::array<Cell, 4> kids{Cell{cell.x0, xm, cell.y0, ym}, Cell{xm, cell.x1, cell.y0, ym},
                                           Cell{cell.x0, xm, ym, cell.y1}, Cell{xm, cell.x1, ym, cell.y1}};
            try {
                int sum = 0;
                const Cell* hit = nullptr;
                for (const Cell& k : kids) {
                    if (k.y1 <= floor_min(k.x0, k.x1, delta)) continue;
                    const int n = count_zeros(f, F0_cell(k.x0, k.x1, k.y0, k.y1, delta), cp.zero_threshold, cp.exec)
                                      .count;
                    sum += n;
                    if (n == 1) hit = &k;
                }
                if (sum == 1 && hit) {
                    cell = *hit;
                    found = true;
                    break;
                }
            } catch (const BoundaryZero&) {
                // zero on an inner edge; retry with another split ratio
            }
        }
        if (!found) throw CountMismatch("find_zero_in_F0: subdivision lost the zero");
    }
    const cplx c0{0.5 * (cell.x0 + cell.x1), 0.5 * (cell.y0 + cell.y1)};
    const double y_floor = truncated_F0_floor(c0.real(), delta);
    const TauPoint start(c0.real(), std::max(c0.imag(), y_floor + 1e-6));
    const TauPoint root = newton_refine(f, {}, start, 100.0 * pp.eps);
    if (classify_F0(root, 1e-9) == DomainTag::outside)
        throw DomainEscape("find_zero_in_F0: refined zero left F0");
    return root;
}

cplx blowup_FCs(double C, double s, const TauPoint& tau, const PrecisionPolicy& pp) {
    const double smax = 1.0 / (4.0 * (1.0 + std::abs(C)) * (1.0 + std::abs(C)));
    if (!(s > 0.0 && s < smax)) throw std::invalid_argument("blowup_FCs: need 0 < s < 1/(4(1+|C|)^2)");
    return 4.0 * (tau.z() - C) / s * eval_Zrs2({-C * s, s}, tau, pp);
}

}  // namespace ec

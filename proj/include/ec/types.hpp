#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ec {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Point of the upper half-plane.
class TauPoint {
public:
    TauPoint(double re, double im) : re_(re), im_(im) {
        if (!std::isfinite(re) || !std::isfinite(im) || !(im > 0.0))
            throw std::invalid_argument("TauPoint: need finite re and im > 0, got im = " +
                                        std::to_string(im));
    }
    explicit TauPoint(cplx z) : TauPoint(z.real(), z.imag()) {}

    double re() const { return re_; }
    double im() const { return im_; }
    cplx z() const { return {re_, im_}; }

private:
    double re_;
    double im_;
};

struct PrecisionPolicy {
    double eps = 1e-12;
    int max_terms = 256;
    double min_im_direct = 0.35;

    void validate() const {
        if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("PrecisionPolicy: eps must lie in (0,1)");
        if (max_terms < 8) throw std::invalid_argument("PrecisionPolicy: max_terms must be >= 8");
        if (!(min_im_direct >= 0.3)) throw std::invalid_argument("PrecisionPolicy: min_im_direct must be >= 0.3");
    }
};

// z = r + s*tau in lattice coordinates.
struct LatticeCoord {
    double r = 0.0;
    double s = 0.0;
};

// Real characteristic (r,s) of Z_{r,s}.
struct CharPair {
    double r = 0.0;
    double s = 0.0;
};

}  // namespace ec

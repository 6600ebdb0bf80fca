#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rpifs/errors.hpp"
#include "rpifs/projline.hpp"

namespace rpifs {

/// Invertible real 2x2 matrix, row-major.
struct Mat2 {
    double a11 = 1.0, a12 = 0.0;
    double a21 = 0.0, a22 = 1.0;

    static Mat2 identity() { return {}; }

    double det() const { return a11 * a22 - a12 * a21; }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
                a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
    }
};

/// Projective action w_A[x] = [Ax]; on the chart this is the Moebius map
/// x -> (a11 x + a12) / (a21 x + a22). The image of a valid point is valid
/// and may be the point at infinity.
inline ProjPoint apply(const Mat2& a, const ProjPoint& p) {
    return ProjPoint::normalize(a.a11 * p.h0() + a.a12 * p.h1(),
                                a.a21 * p.h0() + a.a22 * p.h1());
}

/// Max-absolute-entry norm.
inline double norm_max(const Mat2& a) {
    return std::max(std::max(std::abs(a.a11), std::abs(a.a12)),
                    std::max(std::abs(a.a21), std::abs(a.a22)));
}

/// Largest eigenvalue magnitude of the 2x2 matrix. A complex pair has
/// common modulus sqrt(det).
inline double spectral_radius(const Mat2& a) {
    const double tr = a.a11 + a.a22;
    const double disc = tr * tr - 4.0 * a.det();
    if (disc >= 0.0) return (std::abs(tr) + std::sqrt(disc)) / 2.0;
    return std::sqrt(a.det());
}

/// A / sqrt(det A): the SL(2,R) representative inducing the same projective
/// map. Defined for det > 0.
inline Mat2 sl2_normalize(const Mat2& a) {
    const double d = a.det();
    if (d <= 0.0) throw DomainError("sl2_normalize: requires det > 0");
    const double s = std::sqrt(d);
    return {a.a11 / s, a.a12 / s, a.a21 / s, a.a22 / s};
}

/// Finite index word over the alphabet {1,...,m}; the empty word addresses
/// the identity / base cone.
using Word = std::vector<int>;

/// A finite set of invertible matrices with an optional probability vector.
struct RPIFSSpec {
    std::vector<Mat2> mats;
    std::optional<std::vector<double>> probs;

    void validate() const;
    int alphabet_size() const { return static_cast<int>(mats.size()); }
};

/// Per-matrix SL2 normalization of the whole system.
RPIFSSpec sl2_normalize(const RPIFSSpec& spec);

/// Segment of RP* between two finite points (the one avoiding infinity),
/// kept with lo.x <= hi.x.
class Cone {
public:
    Cone(const ProjPoint& a, const ProjPoint& b)
        : lo_(require_finite(a, "Cone")), hi_(require_finite(b, "Cone")) {
        if (lo_.x() > hi_.x()) std::swap(lo_, hi_);
    }
    Cone(double lo, double hi) : Cone(ProjPoint(lo), ProjPoint(hi)) {}

    const ProjPoint& lo() const { return lo_; }
    const ProjPoint& hi() const { return hi_; }
    double diameter() const { return hi_.x() - lo_.x(); }
    bool contains(double x) const { return lo_.x() <= x && x <= hi_.x(); }

private:
    ProjPoint lo_, hi_;
};

/// Chart point equidistant from both endpoints.
inline ProjPoint midpoint(const Cone& c) {
    return ProjPoint((c.lo().x() + c.hi().x()) / 2.0);
}

/// Left-to-right matrix product A_{i1} A_{i2} ... A_{in}; empty word gives
/// the identity.
Mat2 compose(const RPIFSSpec& spec, const Word& w);

struct HyperbolicityCertificate {
    double lambda_est = 0.0;
    double c_est = 0.0;
    bool pass = false;
};

/// Numeric uniform-hyperbolicity certificate at desk scale: enumerates all
/// products up to max_depth, estimates the growth rate of the minimal
/// max-entry norm per level. Matrices are SL2-normalized internally
/// (requires positive determinants).
HyperbolicityCertificate hyperbolicity_certificate(const RPIFSSpec& spec, int max_depth);

struct ZetaPartial {
    std::vector<double> level_sums;  // level_sums[n-1] = sum over I^n of rho(A_i)^(-2t)
    double total = 0.0;
};

/// Truncated zeta function over SL2-normalized products; the norm here is
/// the spectral radius.
ZetaPartial zeta_partial(const RPIFSSpec& spec, double t, int depth);

/// Critical exponent estimate by bisection on the level-sum ratio
/// rho(t) = S_depth(t) / S_{depth-1}(t); the bracket is tightened to width
/// <= tol. The dimension estimate is min(1, result).
double critical_exponent(const RPIFSSpec& spec, int depth, double tol);

/// All |I|^depth cylinder cones C_w = w_{A_w}(base) with their words, in
/// lexicographic word order. Rejects any composition whose Moebius pole
/// falls inside the base cone or whose endpoint image leaves RP*.
std::vector<std::pair<Word, Cone>> refine(const RPIFSSpec& spec, const Cone& base, int depth);

/// Finite truncation of the coding map: the prefix is extended to `depth`
/// letters by repeating its last letter, and the composed maps are applied
/// to the seed from the inside out.
ProjPoint coding_map(const RPIFSSpec& spec, const Word& prefix, const ProjPoint& seed, int depth);

/// The paper's two-map projective Cantor system
/// {[[1/3,-2/3],[0,1]], [[1/3,2/3],[0,1]]} with probabilities (1/2, 1/2).
RPIFSSpec cantor_spec();

namespace detail {

// Desk-scale enumeration cap.
inline constexpr double kMaxProducts = 1e7;

inline void check_enumeration(int alphabet, int depth) {
    if (depth > 0 && depth * std::log(static_cast<double>(alphabet)) > std::log(kMaxProducts))
        throw ResourceError("enumeration over I^n exceeds the 1e7 product cap");
}

}  // namespace detail

}  // namespace rpifs

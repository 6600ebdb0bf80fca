#pragma once

#include <cmath>
#include <compare>

#include "rpifs/errors.hpp"

namespace rpifs {

/// A point of the real projective line RP^1 in normalized homogeneous
/// coordinates: finite points are stored as (x, 1), the point at infinity
/// as (1, 0). Immutable after construction.
class ProjPoint {
public:
    // Chart point [x:1].
    explicit ProjPoint(double x) : h0_(x), h1_(1.0) {}

    static ProjPoint infinity() { return ProjPoint(1.0, 0.0, tag{}); }

    /// Canonical representative of [h0:h1]. Scale invariant:
    /// normalize(c*h0, c*h1) == normalize(h0, h1) for every c != 0.
    static ProjPoint normalize(double h0, double h1) {
        if (h0 == 0.0 && h1 == 0.0)
            throw DomainError("normalize: zero homogeneous vector");
        if (h1 != 0.0) return ProjPoint(h0 / h1);
        return infinity();
    }

    double h0() const { return h0_; }
    double h1() const { return h1_; }
    bool is_infinity() const { return h1_ == 0.0; }

    /// Affine-chart coordinate; only defined on RP*.
    double x() const {
        if (is_infinity()) throw DomainError("chart coordinate of [1:0]");
        return h0_;
    }

    friend bool operator==(const ProjPoint& a, const ProjPoint& b) {
        return a.h0_ == b.h0_ && a.h1_ == b.h1_;
    }
    friend bool operator!=(const ProjPoint& a, const ProjPoint& b) { return !(a == b); }

private:
    struct tag {};
    ProjPoint(double h0, double h1, tag) : h0_(h0), h1_(h1) {}
    double h0_;
    double h1_;
};

inline ProjPoint require_finite(const ProjPoint& p, const char* op) {
    if (p.is_infinity())
        throw DomainError(std::string(op) + ": undefined at the point at infinity");
    return p;
}

// Chart algebra on RP*. All operations reject [1:0].

inline ProjPoint oplus(const ProjPoint& p, const ProjPoint& q) {
    return ProjPoint(require_finite(p, "oplus").x() + require_finite(q, "oplus").x());
}

inline ProjPoint star(const ProjPoint& p, const ProjPoint& q) {
    return ProjPoint(require_finite(p, "star").x() * require_finite(q, "star").x());
}

inline ProjPoint scalar(double c, const ProjPoint& p) {
    return ProjPoint(c * require_finite(p, "scalar").x());
}

inline ProjPoint ominus(const ProjPoint& p, const ProjPoint& q) {
    return ProjPoint(require_finite(p, "ominus").x() - require_finite(q, "ominus").x());
}

/// Projective metric d_P on RP*: |x1 - x2| between chart coordinates.
inline double dist(const ProjPoint& p, const ProjPoint& q) {
    return std::abs(require_finite(p, "dist").x() - require_finite(q, "dist").x());
}

/// Tolerance comparison for tests; semantic equality stays exact.
inline bool approx_eq(const ProjPoint& p, const ProjPoint& q, double tol) {
    if (p.is_infinity() || q.is_infinity()) return p == q;
    return std::abs(p.x() - q.x()) <= tol;
}

}  // namespace rpifs

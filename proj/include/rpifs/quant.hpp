#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpifs/measure.hpp"

namespace rpifs {

/// Finite set of distinct chart points, kept sorted by chart coordinate.
class Quantizer {
public:
    explicit Quantizer(std::vector<double> xs);
    explicit Quantizer(const std::vector<ProjPoint>& pts);

    const std::vector<double>& sites() const { return xs_; }
    int size() const { return static_cast<int>(xs_.size()); }

private:
    std::vector<double> xs_;
};

/// Voronoi partition of RP* by sorted sites: boundaries are midpoints of
/// consecutive sites, cells are left-closed chart intervals.
class VoronoiDiagram {
public:
    explicit VoronoiDiagram(Quantizer sites);

    const Quantizer& sites() const { return sites_; }
    const std::vector<double>& boundaries() const { return boundaries_; }

    /// Index of the cell containing x (ties at a boundary go right).
    int cell_index(double x) const;
    double site_of(double x) const { return sites_.sites()[static_cast<size_t>(cell_index(x))]; }

private:
    Quantizer sites_;
    std::vector<double> boundaries_;
};

inline VoronoiDiagram voronoi(Quantizer d) { return VoronoiDiagram(std::move(d)); }

enum class ErrorMethod { exact_r2, monte_carlo, oracle };

std::string to_string(ErrorMethod m);

/// An evaluated quantization error with its guarantee.
struct ErrorReport {
    double value = 0.0;
    ErrorMethod method = ErrorMethod::exact_r2;
    double bound = 0.0;  // absolute error guarantee on `value` (statistical for monte_carlo)
    int n = 0;
    double r = 2.0;
};

struct EquivarianceResult {
    bool holds = false;
    std::optional<ProjPoint> witness;
    int samples_checked = 0;
};

/// Samples chart points and checks that nearest-site assignment commutes
/// with T = [[a11,a12],[v,1]] (after scaling a22 to 1). For v = 0 this must
/// always hold; for v != 0 the absence of a witness after `samples` trials
/// is inconclusive, not a refutation.
EquivarianceResult voronoi_equivariance_check(const Quantizer& d, const Mat2& t, int samples,
                                              uint64_t seed);

/// Sample mean of min-distance^r over chaos-game draws; bound is three
/// standard errors (statistical, not guaranteed).
ErrorReport error_monte_carlo(const SelfSimilarMeasure& m, const Quantizer& d, double r,
                              int samples, uint64_t seed);

/// Exact order-2 error for affine systems: the base cone is split into
/// cylinder cones until each lies inside a single Voronoi cell, where the
/// contribution is p_w * ((b_w + s_w*mean - a)^2 + s_w^2*var) in closed
/// form. bound is 0 when every cylinder resolves at finite depth, and at
/// most tol otherwise.
ErrorReport error_exact_r2(const SelfSimilarMeasure& m, const Quantizer& d, double tol);

/// The midpoint quantizer Delta_n built from the depth-k(n) cylinder cones
/// of a two-map system, splitting the lexicographically first n - 2^k(n)
/// words into their children.
Quantizer delta_n(const SelfSimilarMeasure& m, int n);

/// Delta_n for the bundled projective Cantor system.
Quantizer delta_n(int n);

/// Closed-form error of Delta_n for the Cantor measure:
/// (1/2) 18^-k(n) [2^(k(n)+1) - n + (n - 2^k(n))/9].
double dn_bound(int n);

struct ScalingCheck {
    double lhs = 0.0;      // V estimate for the push-forward measure
    double rhs = 0.0;      // |a11|^r times the V estimate for m
    double rel_err = 0.0;
    bool centers_match = false;  // optimizer for T_A mu equals T_A(optimizer for mu)
};

/// Verifies V_{n,r}(T_A mu) = |a11|^r V_{n,r}(mu) for a translation-and-
/// scale T, using the requested evaluator (r = 2 only).
ScalingCheck scaling_check(const SelfSimilarMeasure& m, const Mat2& t, int n, double r,
                           ErrorMethod method);

/// Lloyd iteration: alternate Voronoi partition and conditional-mean
/// updates; the error sequence is non-increasing. An empty cell re-seeds
/// its site inside the heaviest cell.
std::pair<Quantizer, ErrorReport> lloyd(const SelfSimilarMeasure& m, int n,
                                        const Quantizer& init, int max_iters, double tol);

/// Brute-force reference: discretize the measure as depth-`depth` cylinder
/// midpoints and solve the n-point quantization of the resulting discrete
/// distribution exactly by dynamic programming over sorted atoms. bound is
/// the discretization slack |oracle - V_{n,2}(m)| <= diam^2 (sum p_i|s_i|)^depth.
std::pair<Quantizer, ErrorReport> oracle(const SelfSimilarMeasure& m, int n, int depth);

/// One discrete atom (position, mass) for the oracle's DP.
struct Atom {
    double x = 0.0;
    double mass = 0.0;
};

/// Exact n-cluster quantization of a sorted discrete 1-D distribution
/// (interval dynamic programming with divide-and-conquer optimization).
/// Returns (error, cluster centroids). Exposed for cross-checking against
/// exhaustive search.
std::pair<double, std::vector<double>> discrete_quantize(const std::vector<Atom>& atoms, int n);

}  // namespace rpifs

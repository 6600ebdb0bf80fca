#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rpifs/system.hpp"

namespace rpifs {

/// Product measure on the code space {1,...,m}^N.
struct BernoulliSpec {
    std::vector<double> probs;

    void validate() const;
};

/// mu([i1,...,in]) = product of letter probabilities; empty word -> 1.
double cylinder_mass(const BernoulliSpec& b, const Word& w);

/// Chart form of an affine projective map: x -> s x + b.
struct AffineMap {
    double s = 1.0;
    double b = 0.0;
};

/// The invariant probability measure P = sum_i p_i P o w_{A_i}^{-1} of an
/// RPIFS with probability vector, supported inside a base cone. For affine
/// systems (all a21 = 0) the mean and second moment about the chart origin
/// are solved in closed form from the self-similarity identity.
class SelfSimilarMeasure {
public:
    /// `base` may be omitted for affine systems with contractive chart
    /// maps, in which case the support hull is computed from the maps.
    explicit SelfSimilarMeasure(RPIFSSpec spec, std::optional<Cone> base = std::nullopt);

    const RPIFSSpec& spec() const { return spec_; }
    const std::vector<double>& probs() const { return *spec_.probs; }
    const Cone& base_cone() const { return base_; }
    bool affine() const { return affine_; }
    const std::vector<AffineMap>& chart_maps() const;

    friend std::pair<double, double> solve_moments(const SelfSimilarMeasure& m);

private:
    RPIFSSpec spec_;
    Cone base_;
    bool affine_ = false;
    std::vector<AffineMap> charts_;
    std::optional<std::pair<double, double>> moments_;  // (mean, second moment)
};

/// (mean, second moment about [0:1]) of the invariant measure. Affine
/// systems with sum p_i s_i^2 < 1 only.
std::pair<double, double> solve_moments(const SelfSimilarMeasure& m);

/// Central variance, second_moment - mean^2.
inline double variance(const SelfSimilarMeasure& m) {
    auto [mean, m2] = solve_moments(m);
    return m2 - mean * mean;
}

/// Chaos-game sample of n points. Deterministic for a fixed (seed, n,
/// burn_in): the generator is std::mt19937_64 and map selection uses
/// 53-bit uniforms (gen() >> 11) * 2^-53 against cumulative probabilities.
std::vector<ProjPoint> sample(const SelfSimilarMeasure& m, int n, uint64_t seed, int burn_in);

/// Rigorous bracket for P(c) from the depth-`depth` cylinder cover:
/// lower sums cylinders inside c, upper sums cylinders meeting c.
std::pair<double, double> cone_mass(const SelfSimilarMeasure& m, const Cone& c, int depth);

/// Push-forward under T = [[a11, a12], [0, a22]] (translation-and-scale
/// chart maps); the system is conjugated by T and the moments re-solved.
SelfSimilarMeasure push_forward(const SelfSimilarMeasure& m, const Mat2& t);

/// The invariant measure of the bundled Cantor system on the base cone
/// [-1, 1].
SelfSimilarMeasure cantor_measure();

}  // namespace rpifs

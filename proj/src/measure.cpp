#include "rpifs/measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace rpifs {

SelfSimilarMeasure cantor_measure() {
    return SelfSimilarMeasure(cantor_spec(), Cone(-1.0, 1.0));
}

void BernoulliSpec::validate() const {
    if (probs.empty()) throw DomainError("BernoulliSpec: empty probability vector");
    double sum = 0.0;
    for (double p : probs) {
        if (p <= 0.0) throw DomainError("invalid probability vector");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw DomainError("invalid probability vector");
}

double cylinder_mass(const BernoulliSpec& b, const Word& w) {
    b.validate();
    double mass = 1.0;
    for (int letter : w) {
        if (letter < 1 || letter > static_cast<int>(b.probs.size()))
            throw DomainError("cylinder_mass: letter out of range");
        mass *= b.probs[static_cast<size_t>(letter - 1)];
    }
    return mass;
}

namespace {

std::vector<AffineMap> chart_maps_of(const RPIFSSpec& spec) {
    std::vector<AffineMap> charts;
    charts.reserve(spec.mats.size());
    for (const Mat2& m : spec.mats) charts.push_back({m.a11 / m.a22, m.a12 / m.a22});
    return charts;
}

Cone support_hull(const std::vector<AffineMap>& charts) {
    for (const AffineMap& f : charts)
        if (std::abs(f.s) >= 1.0)
            throw DomainError("base cone required: chart maps are not all contractive");
    // Start from the hull of the fixed points and iterate to the invariant
    // interval of the system.
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const AffineMap& f : charts) {
        const double fp = f.b / (1.0 - f.s);
        lo = first ? fp : std::min(lo, fp);
        hi = first ? fp : std::max(hi, fp);
        first = false;
    }
    for (int it = 0; it < 256; ++it) {
        double nlo = lo, nhi = hi;
        for (const AffineMap& f : charts) {
            for (double e : {f.s * lo + f.b, f.s * hi + f.b}) {
                nlo = std::min(nlo, e);
                nhi = std::max(nhi, e);
            }
        }
        if (nlo == lo && nhi == hi) break;
        lo = nlo;
        hi = nhi;
    }
    if (!(hi > lo)) hi = lo + 1e-12;  // single common fixed point; degenerate support
    return Cone(lo, hi);
}

}  // namespace

SelfSimilarMeasure::SelfSimilarMeasure(RPIFSSpec spec, std::optional<Cone> base)
    : spec_(std::move(spec)), base_(0.0, 1.0) {
    spec_.validate();
    if (!spec_.probs) throw DomainError("SelfSimilarMeasure: probability vector required");
    affine_ = std::all_of(spec_.mats.begin(), spec_.mats.end(),
                          [](const Mat2& m) { return m.a21 == 0.0; });
    if (affine_) charts_ = chart_maps_of(spec_);
    if (base) {
        base_ = *base;
    } else {
        if (!affine_)
            throw DomainError("SelfSimilarMeasure: base cone required for non-affine systems");
        base_ = support_hull(charts_);
    }
    if (affine_) {
        double ps = 0.0, ps2 = 0.0, pb = 0.0;
        for (size_t i = 0; i < charts_.size(); ++i) {
            const double p = (*spec_.probs)[i];
            ps += p * charts_[i].s;
            ps2 += p * charts_[i].s * charts_[i].s;
            pb += p * charts_[i].b;
        }
        if (ps2 < 1.0) {
            const double mean = pb / (1.0 - ps);
            double cross = 0.0;
            for (size_t i = 0; i < charts_.size(); ++i) {
                const double p = (*spec_.probs)[i];
                cross += p * (2.0 * charts_[i].s * charts_[i].b * mean +
                              charts_[i].b * charts_[i].b);
            }
            moments_ = {mean, cross / (1.0 - ps2)};
        }
    }
}

const std::vector<AffineMap>& SelfSimilarMeasure::chart_maps() const {
    if (!affine_) throw UnsupportedError("chart_maps: system is not affine");
    return charts_;
}

std::pair<double, double> solve_moments(const SelfSimilarMeasure& m) {
    if (!m.affine_) throw UnsupportedError("solve_moments: system is not affine");
    if (!m.moments_)
        throw DomainError("solve_moments: sum p_i s_i^2 >= 1 (not mean-square contractive)");
    return *m.moments_;
}

std::vector<ProjPoint> sample(const SelfSimilarMeasure& m, int n, uint64_t seed, int burn_in) {
    if (n < 1) throw DomainError("sample: n >= 1 required");
    if (burn_in < 0) throw DomainError("sample: burn_in >= 0 required");

    std::vector<double> cum;
    cum.reserve(m.probs().size());
    double acc = 0.0;
    for (double p : m.probs()) cum.push_back(acc += p);
    cum.back() = 1.0;

    std::mt19937_64 gen(seed);
    auto uniform = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    auto draw_map = [&] {
        const double u = uniform();
        return std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
    };

    ProjPoint p = midpoint(m.base_cone());
    std::vector<ProjPoint> out;
    out.reserve(static_cast<size_t>(n));
    for (int k = 0; k < burn_in + n; ++k) {
        p = apply(m.spec().mats[static_cast<size_t>(draw_map())], p);
        if (p.is_infinity()) throw GeometryError("sample: iterate escaped to infinity");
        if (k >= burn_in) out.push_back(p);
    }
    return out;
}

namespace {

// Classifies cylinder cones against a query cone, pruning subtrees that
// are entirely inside or entirely outside.
void cone_mass_rec(const SelfSimilarMeasure& m, const Cone& query, int depth_left,
                   const Mat2& prod, double mass, double& lower, double& upper) {
    if (prod.a21 != 0.0) {
        const double pole = -prod.a22 / prod.a21;
        if (m.base_cone().contains(pole))
            throw GeometryError("cone_mass: cylinder cone wraps through infinity");
    }
    const ProjPoint e0 = apply(prod, m.base_cone().lo());
    const ProjPoint e1 = apply(prod, m.base_cone().hi());
    if (e0.is_infinity() || e1.is_infinity())
        throw GeometryError("cone_mass: cylinder endpoint maps to infinity");
    const Cone img(e0, e1);

    if (img.hi().x() < query.lo().x() || img.lo().x() > query.hi().x()) return;
    if (img.lo().x() >= query.lo().x() && img.hi().x() <= query.hi().x()) {
        lower += mass;
        upper += mass;
        return;
    }
    if (depth_left == 0) {
        upper += mass;
        return;
    }
    for (size_t i = 0; i < m.spec().mats.size(); ++i)
        cone_mass_rec(m, query, depth_left - 1, prod * m.spec().mats[i],
                      mass * m.probs()[i], lower, upper);
}

}  // namespace

std::pair<double, double> cone_mass(const SelfSimilarMeasure& m, const Cone& c, int depth) {
    if (depth < 1) throw DomainError("cone_mass: depth >= 1 required");
    detail::check_enumeration(m.spec().alphabet_size(), depth);
    double lower = 0.0, upper = 0.0;
    cone_mass_rec(m, c, depth, Mat2::identity(), 1.0, lower, upper);
    return {lower, upper};
}

SelfSimilarMeasure push_forward(const SelfSimilarMeasure& m, const Mat2& t) {
    if (t.a21 != 0.0)
        throw UnsupportedError("push_forward: only translation-and-scale transforms (v = 0)");
    if (t.a22 == 0.0 || t.a11 == 0.0) throw DomainError("push_forward: singular transform");
    const double a = t.a11 / t.a22;
    const double b = t.a12 / t.a22;
    const Mat2 tn{a, b, 0.0, 1.0};
    const Mat2 tn_inv{1.0 / a, -b / a, 0.0, 1.0};

    RPIFSSpec conj = m.spec();
    for (Mat2& mat : conj.mats) mat = tn * mat * tn_inv;
    const Cone base(apply(tn, m.base_cone().lo()), apply(tn, m.base_cone().hi()));
    return SelfSimilarMeasure(std::move(conj), base);
}

}  // namespace rpifs

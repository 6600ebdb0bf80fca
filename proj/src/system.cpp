#include "rpifs/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rpifs {

RPIFSSpec cantor_spec() {
    RPIFSSpec spec;
    spec.mats = {{1.0 / 3.0, -2.0 / 3.0, 0.0, 1.0}, {1.0 / 3.0, 2.0 / 3.0, 0.0, 1.0}};
    spec.probs = std::vector<double>{0.5, 0.5};
    return spec;
}

void RPIFSSpec::validate() const {
    if (mats.empty()) throw DomainError("RPIFSSpec: empty matrix list");
    for (const Mat2& m : mats)
        if (m.det() == 0.0) throw DomainError("RPIFSSpec: singular matrix");
    if (probs) {
        if (probs->size() != mats.size())
            throw DomainError("RPIFSSpec: probability vector length mismatch");
        double sum = 0.0;
        for (double p : *probs) {
            if (p <= 0.0) throw DomainError("invalid probability vector");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw DomainError("invalid probability vector");
    }
}

RPIFSSpec sl2_normalize(const RPIFSSpec& spec) {
    spec.validate();
    RPIFSSpec out = spec;
    for (Mat2& m : out.mats) m = sl2_normalize(m);
    return out;
}

Mat2 compose(const RPIFSSpec& spec, const Word& w) {
    const int m = spec.alphabet_size();
    Mat2 prod = Mat2::identity();
    for (int letter : w) {
        if (letter < 1 || letter > m) throw DomainError("compose: letter out of range");
        prod = prod * spec.mats[static_cast<size_t>(letter - 1)];
    }
    return prod;
}

namespace {

// Visits every product A_{i1}...A_{in} for n = 1..depth, lexicographically
// within each level. fn(level, product).
template <typename Fn>
void for_each_product(const std::vector<Mat2>& mats, int depth, Fn&& fn) {
    std::vector<Mat2> level = {Mat2::identity()};
    for (int n = 1; n <= depth; ++n) {
        std::vector<Mat2> next;
        next.reserve(level.size() * mats.size());
        for (const Mat2& p : level)
            for (const Mat2& a : mats) {
                next.push_back(p * a);
                fn(n, next.back());
            }
        level = std::move(next);
    }
}

}  // namespace

HyperbolicityCertificate hyperbolicity_certificate(const RPIFSSpec& spec, int max_depth) {
    if (max_depth < 2) throw DomainError("hyperbolicity_certificate: max_depth >= 2 required");
    detail::check_enumeration(spec.alphabet_size(), max_depth);
    const RPIFSSpec sl2 = sl2_normalize(spec);

    std::vector<double> min_norm(static_cast<size_t>(max_depth),
                                 std::numeric_limits<double>::infinity());
    for_each_product(sl2.mats, max_depth, [&](int n, const Mat2& a) {
        min_norm[static_cast<size_t>(n - 1)] =
            std::min(min_norm[static_cast<size_t>(n - 1)], norm_max(a));
    });

    HyperbolicityCertificate cert;
    cert.lambda_est = std::pow(min_norm.back(), 1.0 / max_depth);
    cert.c_est = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= max_depth; ++n)
        cert.c_est = std::min(cert.c_est,
                              min_norm[static_cast<size_t>(n - 1)] / std::pow(cert.lambda_est, n));
    cert.pass = cert.lambda_est > 1.0;
    return cert;
}

ZetaPartial zeta_partial(const RPIFSSpec& spec, double t, int depth) {
    if (t < 0.0) throw DomainError("zeta_partial: t >= 0 required");
    if (depth < 1) throw DomainError("zeta_partial: depth >= 1 required");
    detail::check_enumeration(spec.alphabet_size(), depth);
    const RPIFSSpec sl2 = sl2_normalize(spec);

    ZetaPartial z;
    z.level_sums.assign(static_cast<size_t>(depth), 0.0);
    for_each_product(sl2.mats, depth, [&](int n, const Mat2& a) {
        z.level_sums[static_cast<size_t>(n - 1)] += std::pow(spectral_radius(a), -2.0 * t);
    });
    for (double s : z.level_sums) z.total += s;
    return z;
}

double critical_exponent(const RPIFSSpec& spec, int depth, double tol) {
    if (depth < 3) throw DomainError("critical_exponent: depth >= 3 required");
    if (tol <= 0.0) throw DomainError("critical_exponent: tol > 0 required");
    if (spec.alphabet_size() <= 1)
        throw DomainError("critical_exponent: no bracketing (need at least two maps)");
    detail::check_enumeration(spec.alphabet_size(), depth);
    const RPIFSSpec sl2 = sl2_normalize(spec);

    // Cache log spectral radii of the last two levels; evaluating the ratio
    // rho(t) = S_depth / S_{depth-1} is then a cheap pass per candidate t.
    std::vector<double> log_r_prev, log_r_last;
    for_each_product(sl2.mats, depth, [&](int n, const Mat2& a) {
        if (n == depth - 1) log_r_prev.push_back(std::log(spectral_radius(a)));
        if (n == depth) log_r_last.push_back(std::log(spectral_radius(a)));
    });
    auto rho = [&](double t) {
        double s_prev = 0.0, s_last = 0.0;
        for (double lr : log_r_prev) s_prev += std::exp(-2.0 * t * lr);
        for (double lr : log_r_last) s_last += std::exp(-2.0 * t * lr);
        return s_last / s_prev;
    };

    double lo = 0.0, hi = 1.0;
    while (rho(hi) >= 1.0) {
        hi *= 2.0;
        if (hi > 1e3) throw DomainError("critical_exponent: no bracketing (ratio never < 1)");
    }
    while (hi - lo > tol) {
        const double mid = (lo + hi) / 2.0;
        (rho(mid) >= 1.0 ? lo : hi) = mid;
    }
    return (lo + hi) / 2.0;
}

namespace {

// Image of an interval cone under one Moebius map; the pole must lie
// outside the closed cone so that endpoint mapping is exact.
Cone map_cone(const Mat2& a, const Cone& c) {
    if (a.a21 != 0.0) {
        const double pole = -a.a22 / a.a21;
        if (c.contains(pole))
            throw GeometryError("cone image wraps through the point at infinity");
    }
    const ProjPoint lo = apply(a, c.lo());
    const ProjPoint hi = apply(a, c.hi());
    if (lo.is_infinity() || hi.is_infinity())
        throw GeometryError("cone endpoint maps to the point at infinity");
    return Cone(lo, hi);
}

void refine_rec(const RPIFSSpec& spec, const Cone& base, int depth, Word& word,
                const Mat2& prod, std::vector<std::pair<Word, Cone>>& out) {
    if (static_cast<int>(word.size()) == depth) {
        out.emplace_back(word, map_cone(prod, base));
        return;
    }
    // Every intermediate composition must also keep the base cone in RP*.
    for (int letter = 1; letter <= spec.alphabet_size(); ++letter) {
        const Mat2 next = prod * spec.mats[static_cast<size_t>(letter - 1)];
        map_cone(next, base);
        word.push_back(letter);
        refine_rec(spec, base, depth, word, next, out);
        word.pop_back();
    }
}

}  // namespace

std::vector<std::pair<Word, Cone>> refine(const RPIFSSpec& spec, const Cone& base, int depth) {
    spec.validate();
    if (depth < 0) throw DomainError("refine: depth >= 0 required");
    detail::check_enumeration(spec.alphabet_size(), depth);
    std::vector<std::pair<Word, Cone>> out;
    out.reserve(static_cast<size_t>(std::pow(spec.alphabet_size(), depth)));
    Word word;
    refine_rec(spec, base, depth, word, Mat2::identity(), out);
    return out;
}

ProjPoint coding_map(const RPIFSSpec& spec, const Word& prefix, const ProjPoint& seed,
                     int depth) {
    spec.validate();
    if (prefix.empty()) throw DomainError("coding_map: empty prefix");
    if (depth < static_cast<int>(prefix.size()))
        throw DomainError("coding_map: depth < prefix length");
    const int m = spec.alphabet_size();
    for (int letter : prefix)
        if (letter < 1 || letter > m) throw DomainError("coding_map: letter out of range");

    auto letter_at = [&](int k) {
        return k < static_cast<int>(prefix.size()) ? prefix[static_cast<size_t>(k)]
                                                   : prefix.back();
    };
    ProjPoint p = seed;
    for (int k = depth - 1; k >= 0; --k) {
        p = apply(spec.mats[static_cast<size_t>(letter_at(k) - 1)], p);
        if (p.is_infinity()) throw GeometryError("coding_map: iterate hit the point at infinity");
    }
    return p;
}

}  // namespace rpifs

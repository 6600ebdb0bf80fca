#include "rpifs/quant.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <random>

namespace rpifs {

Quantizer::Quantizer(std::vector<double> xs) : xs_(std::move(xs)) {
    if (xs_.empty()) throw DomainError("Quantizer: empty site set");
    for (double x : xs_)
        if (!std::isfinite(x)) throw DomainError("Quantizer: non-finite site");
    std::sort(xs_.begin(), xs_.end());
    if (std::adjacent_find(xs_.begin(), xs_.end()) != xs_.end())
        throw DomainError("Quantizer: sites must be pairwise distinct");
}

Quantizer::Quantizer(const std::vector<ProjPoint>& pts) : Quantizer([&] {
    std::vector<double> xs;
    xs.reserve(pts.size());
    for (const ProjPoint& p : pts) xs.push_back(require_finite(p, "Quantizer").x());
    return xs;
}()) {}

VoronoiDiagram::VoronoiDiagram(Quantizer sites) : sites_(std::move(sites)) {
    const auto& xs = sites_.sites();
    boundaries_.reserve(xs.size() - 1);
    for (size_t j = 0; j + 1 < xs.size(); ++j)
        boundaries_.push_back((xs[j] + xs[j + 1]) / 2.0);
}

int VoronoiDiagram::cell_index(double x) const {
    // Cells are left-closed: a point exactly on a boundary goes right.
    return static_cast<int>(std::upper_bound(boundaries_.begin(), boundaries_.end(), x) -
                            boundaries_.begin());
}

std::string to_string(ErrorMethod m) {
    switch (m) {
        case ErrorMethod::exact_r2: return "exact_r2";
        case ErrorMethod::monte_carlo: return "monte_carlo";
        case ErrorMethod::oracle: return "oracle";
    }
    return "unknown";
}

namespace {

size_t argmin_dist(const std::vector<double>& sites, double x) {
    size_t best = 0;
    double best_d = std::abs(x - sites[0]);
    for (size_t j = 1; j < sites.size(); ++j) {
        const double d = std::abs(x - sites[j]);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

}  // namespace

EquivarianceResult voronoi_equivariance_check(const Quantizer& d, const Mat2& t, int samples,
                                              uint64_t seed) {
    if (samples < 1) throw DomainError("voronoi_equivariance_check: samples >= 1 required");
    if (t.a22 == 0.0)
        throw DomainError("voronoi_equivariance_check: a22 != 0 required (form [[a11,a12],[v,1]])");
    const Mat2 tn{t.a11 / t.a22, t.a12 / t.a22, t.a21 / t.a22, 1.0};
    if (tn.det() == 0.0) throw DomainError("voronoi_equivariance_check: singular transform");

    const std::vector<double>& sites = d.sites();
    std::vector<double> tsites;
    tsites.reserve(sites.size());
    for (double a : sites) {
        const ProjPoint img = apply(tn, ProjPoint(a));
        if (img.is_infinity())
            throw DomainError("voronoi_equivariance_check: T(Delta) hits the point at infinity");
        tsites.push_back(img.x());
    }

    const double range_lo = sites.front() - 1.0;
    const double range_hi = sites.back() + 1.0;
    std::mt19937_64 gen(seed);
    auto uniform = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };

    EquivarianceResult res;
    for (int k = 0; k < samples; ++k) {
        const double x = range_lo + (range_hi - range_lo) * uniform();
        const ProjPoint y = apply(tn, ProjPoint(x));
        if (y.is_infinity()) continue;
        ++res.samples_checked;
        const size_t l0 = argmin_dist(sites, x);
        const size_t l1 = argmin_dist(tsites, y.x());
        if (l0 == l1) continue;
        // Near-tie rounding must not count as a counterexample: both the
        // original and transformed assignments have to disagree by a
        // definite margin.
        const double margin0 = std::abs(x - sites[l1]) - std::abs(x - sites[l0]);
        const double margin1 = std::abs(y.x() - tsites[l0]) - std::abs(y.x() - tsites[l1]);
        const double scale = 1.0 + std::abs(y.x());
        if (margin0 > 1e-9 && margin1 > 1e-9 * scale) {
            res.holds = false;
            res.witness = ProjPoint(x);
            return res;
        }
    }
    res.holds = true;
    return res;
}

ErrorReport error_monte_carlo(const SelfSimilarMeasure& m, const Quantizer& d, double r,
                              int samples, uint64_t seed) {
    if (r < 1.0) throw DomainError("error_monte_carlo: r >= 1 required");
    if (samples < 1) throw DomainError("error_monte_carlo: samples >= 1 required");
    const std::vector<ProjPoint> draws = sample(m, samples, seed, /*burn_in=*/64);

    double sum = 0.0, sum_sq = 0.0;
    for (const ProjPoint& p : draws) {
        double best = std::numeric_limits<double>::infinity();
        for (double a : d.sites()) best = std::min(best, std::abs(p.x() - a));
        const double v = std::pow(best, r);
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / samples;
    const double var = std::max(0.0, sum_sq / samples - mean * mean);
    ErrorReport rep;
    rep.value = mean;
    rep.method = ErrorMethod::monte_carlo;
    rep.bound = 3.0 * std::sqrt(var / samples);
    rep.n = d.size();
    rep.r = r;
    return rep;
}

namespace {

// One cylinder of an affine system: chart map x -> s x + b, Bernoulli mass.
struct CylNode {
    double s, b, mass;
};

struct CylGeometry {
    double lo, hi, mid;
};

CylGeometry node_cone(const CylNode& n, const Cone& base) {
    const double e0 = n.s * base.lo().x() + n.b;
    const double e1 = n.s * base.hi().x() + n.b;
    return {std::min(e0, e1), std::max(e0, e1), (e0 + e1) / 2.0};
}

bool straddles(const std::vector<double>& boundaries, const CylGeometry& g) {
    auto it = std::upper_bound(boundaries.begin(), boundaries.end(), g.lo);
    return it != boundaries.end() && *it < g.hi;
}

void require_contractive_affine(const SelfSimilarMeasure& m, const char* op) {
    if (!m.affine()) throw UnsupportedError(std::string(op) + ": affine system required");
    for (const AffineMap& f : m.chart_maps())
        if (std::abs(f.s) >= 1.0)
            throw DomainError(std::string(op) + ": chart maps must be contractive");
}

}  // namespace

ErrorReport error_exact_r2(const SelfSimilarMeasure& m, const Quantizer& d, double tol) {
    if (tol <= 0.0) throw DomainError("error_exact_r2: tol > 0 required");
    require_contractive_affine(m, "error_exact_r2");
    const auto [mean, m2] = solve_moments(m);
    const double var = m2 - mean * mean;
    const VoronoiDiagram diagram((Quantizer(d)));
    const std::vector<double>& sites = d.sites();
    const std::vector<AffineMap>& charts = m.chart_maps();
    const std::vector<double>& probs = m.probs();

    auto leaf_value = [&](const CylNode& n, const CylGeometry& g) {
        const double a = sites[static_cast<size_t>(diagram.cell_index(g.mid))];
        const double off = n.b + n.s * mean - a;
        return n.mass * (off * off + n.s * n.s * var);
    };
    auto residual_of = [&](const CylNode& n, const CylGeometry& g) {
        const double a = sites[static_cast<size_t>(diagram.cell_index(g.mid))];
        const double u = std::max(std::abs(g.lo - a), std::abs(g.hi - a));
        return n.mass * u * u;
    };

    struct Open {
        double residual;
        CylNode node;
        bool operator<(const Open& o) const { return residual < o.residual; }
    };
    std::priority_queue<Open> open;
    double value = 0.0;
    double residual_total = 0.0;

    auto push = [&](const CylNode& n) {
        const CylGeometry g = node_cone(n, m.base_cone());
        if (!straddles(diagram.boundaries(), g)) {
            value += leaf_value(n, g);
            return;
        }
        const double res = residual_of(n, g);
        residual_total += res;
        open.push({res, n});
    };

    push({1.0, 0.0, 1.0});
    size_t expansions = 0;
    while (!open.empty() && residual_total >= tol) {
        if (++expansions > static_cast<size_t>(detail::kMaxProducts))
            throw ResourceError("error_exact_r2: refinement exceeded the product cap");
        const Open top = open.top();
        open.pop();
        residual_total -= top.residual;
        for (size_t i = 0; i < charts.size(); ++i)
            push({top.node.s * charts[i].s, top.node.s * charts[i].b + top.node.b,
                  top.node.mass * probs[i]});
    }

    // Unresolved cylinders contribute their midpoint-cell estimate; the
    // remaining residual is the guarantee.
    double bound = 0.0;
    while (!open.empty()) {
        const CylNode& n = open.top().node;
        value += leaf_value(n, node_cone(n, m.base_cone()));
        bound += open.top().residual;
        open.pop();
    }

    ErrorReport rep;
    rep.value = value;
    rep.method = ErrorMethod::exact_r2;
    rep.bound = bound;
    rep.n = d.size();
    rep.r = 2.0;
    return rep;
}

Quantizer delta_n(const SelfSimilarMeasure& m, int n) {
    if (n < 1) throw DomainError("delta_n: n >= 1 required");
    if (m.spec().alphabet_size() != 2)
        throw DomainError("delta_n: two-map systems only");
    int k = 0;
    while ((1 << (k + 1)) <= n) ++k;
    const int card_i = n - (1 << k);

    // Lexicographically first card_i depth-k words are split into their
    // children; the rest keep their own midpoint.
    const auto cones = refine(m.spec(), m.base_cone(), k);
    std::vector<double> sites;
    sites.reserve(static_cast<size_t>(n));
    for (size_t idx = 0; idx < cones.size(); ++idx) {
        if (static_cast<int>(idx) < card_i) {
            Mat2 prod = compose(m.spec(), cones[idx].first);
            for (int letter = 1; letter <= 2; ++letter) {
                const Mat2 child = prod * m.spec().mats[static_cast<size_t>(letter - 1)];
                const Cone cc(apply(child, m.base_cone().lo()), apply(child, m.base_cone().hi()));
                sites.push_back(midpoint(cc).x());
            }
        } else {
            sites.push_back(midpoint(cones[idx].second).x());
        }
    }
    return Quantizer(std::move(sites));
}

Quantizer delta_n(int n) { return delta_n(cantor_measure(), n); }

double dn_bound(int n) {
    if (n < 1) throw DomainError("dn_bound: n >= 1 required");
    int k = 0;
    while ((1 << (k + 1)) <= n) ++k;
    const double pow2k = static_cast<double>(1 << k);
    return 0.5 * std::pow(18.0, -k) * (2.0 * pow2k - n + (n - pow2k) / 9.0);
}

std::pair<double, std::vector<double>> discrete_quantize(const std::vector<Atom>& atoms, int n) {
    const int count = static_cast<int>(atoms.size());
    if (count == 0) throw DomainError("discrete_quantize: no atoms");
    if (n < 1 || n > count) throw DomainError("discrete_quantize: need 1 <= n <= #atoms");
    for (int i = 1; i < count; ++i)
        if (atoms[static_cast<size_t>(i - 1)].x > atoms[static_cast<size_t>(i)].x)
            throw DomainError("discrete_quantize: atoms must be sorted");

    // Prefix sums of mass and first/second moments; the SSE of a contiguous
    // cluster is then O(1).
    std::vector<long double> s0(static_cast<size_t>(count) + 1, 0.0L);
    std::vector<long double> s1 = s0, s2 = s0;
    for (int i = 0; i < count; ++i) {
        const Atom& a = atoms[static_cast<size_t>(i)];
        s0[static_cast<size_t>(i) + 1] = s0[static_cast<size_t>(i)] + a.mass;
        s1[static_cast<size_t>(i) + 1] = s1[static_cast<size_t>(i)] + a.mass * a.x;
        s2[static_cast<size_t>(i) + 1] =
            s2[static_cast<size_t>(i)] + a.mass * static_cast<long double>(a.x) * a.x;
    }
    auto cost = [&](int i, int j) {  // atoms i..j inclusive
        const long double w = s0[static_cast<size_t>(j) + 1] - s0[static_cast<size_t>(i)];
        const long double m1 = s1[static_cast<size_t>(j) + 1] - s1[static_cast<size_t>(i)];
        const long double m2 = s2[static_cast<size_t>(j) + 1] - s2[static_cast<size_t>(i)];
        if (w <= 0.0L) return 0.0L;
        const long double c = m2 - m1 * m1 / w;
        return c > 0.0L ? c : 0.0L;
    };

    const long double inf = std::numeric_limits<long double>::infinity();
    std::vector<long double> dp_prev(static_cast<size_t>(count), inf);
    std::vector<long double> dp_cur(static_cast<size_t>(count), inf);
    std::vector<std::vector<int>> split(static_cast<size_t>(n) + 1,
                                        std::vector<int>(static_cast<size_t>(count), 0));
    for (int j = 0; j < count; ++j) dp_prev[static_cast<size_t>(j)] = cost(0, j);

    // Divide-and-conquer over j exploiting monotonicity of the optimal
    // split position.
    std::function<void(int, int, int, int, int)> solve =
        [&](int k, int jlo, int jhi, int ilo, int ihi) {
            if (jlo > jhi) return;
            const int jmid = (jlo + jhi) / 2;
            long double best = inf;
            int best_i = ilo;
            const int i_from = std::max(ilo, k - 1);
            const int i_to = std::min(ihi, jmid);
            for (int i = i_from; i <= i_to; ++i) {
                const long double v = dp_prev[static_cast<size_t>(i - 1)] + cost(i, jmid);
                if (v < best) {
                    best = v;
                    best_i = i;
                }
            }
            dp_cur[static_cast<size_t>(jmid)] = best;
            split[static_cast<size_t>(k)][static_cast<size_t>(jmid)] = best_i;
            solve(k, jlo, jmid - 1, ilo, best_i);
            solve(k, jmid + 1, jhi, best_i, ihi);
        };

    for (int k = 2; k <= n; ++k) {
        std::fill(dp_cur.begin(), dp_cur.end(), inf);
        solve(k, k - 1, count - 1, 1, count - 1);
        std::swap(dp_prev, dp_cur);
    }

    // Reconstruct cluster boundaries and centroids.
    std::vector<double> centers(static_cast<size_t>(n), 0.0);
    int j = count - 1;
    for (int k = n; k >= 1; --k) {
        const int i = (k == 1) ? 0 : split[static_cast<size_t>(k)][static_cast<size_t>(j)];
        const long double w = s0[static_cast<size_t>(j) + 1] - s0[static_cast<size_t>(i)];
        const long double m1 = s1[static_cast<size_t>(j) + 1] - s1[static_cast<size_t>(i)];
        centers[static_cast<size_t>(k - 1)] = static_cast<double>(w > 0.0L ? m1 / w : atoms[static_cast<size_t>(i)].x);
        j = i - 1;
    }
    return {static_cast<double>(dp_prev[static_cast<size_t>(count - 1)]), centers};
}

std::pair<Quantizer, ErrorReport> oracle(const SelfSimilarMeasure& m, int n, int depth) {
    require_contractive_affine(m, "oracle");
    if (depth < 1) throw DomainError("oracle: depth >= 1 required");
    const double natoms =
        std::pow(static_cast<double>(m.spec().alphabet_size()), static_cast<double>(depth));
    if (natoms > static_cast<double>(1 << 20))
        throw ResourceError("oracle: more than 2^20 atoms requested");
    if (n < 1 || static_cast<double>(n) > natoms)
        throw DomainError("oracle: need 1 <= n <= atom count");

    const std::vector<AffineMap>& charts = m.chart_maps();
    const std::vector<double>& probs = m.probs();
    const double base_mid = midpoint(m.base_cone()).x();

    std::vector<Atom> atoms;
    atoms.reserve(static_cast<size_t>(natoms));
    // Depth-first cylinder enumeration; each atom is the cylinder cone's
    // midpoint with its Bernoulli mass.
    std::function<void(int, double, double, double)> walk = [&](int left, double s, double b,
                                                                double mass) {
        if (left == 0) {
            atoms.push_back({s * base_mid + b, mass});
            return;
        }
        for (size_t i = 0; i < charts.size(); ++i)
            walk(left - 1, s * charts[i].s, s * charts[i].b + b, mass * probs[i]);
    };
    walk(depth, 1.0, 0.0, 1.0);

    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
    std::vector<Atom> merged;
    merged.reserve(atoms.size());
    for (const Atom& a : atoms) {
        if (!merged.empty() && merged.back().x == a.x)
            merged.back().mass += a.mass;
        else
            merged.push_back(a);
    }
    if (n > static_cast<int>(merged.size()))
        throw DomainError("oracle: fewer distinct atoms than requested sites");

    auto [err, centers] = discrete_quantize(merged, n);

    // |oracle - V_{n,2}(m)| <= 2 R max|x - x_w| summed over cylinders,
    // with R <= diam(support) and |x - x_w| <= diam/2 * prod |s_i|.
    double mean_abs_s = 0.0;
    for (size_t i = 0; i < charts.size(); ++i) mean_abs_s += probs[i] * std::abs(charts[i].s);
    const double diam = m.base_cone().diameter();
    const double slack = diam * diam * std::pow(mean_abs_s, depth);

    ErrorReport rep;
    rep.value = err;
    rep.method = ErrorMethod::oracle;
    rep.bound = slack;
    rep.n = n;
    rep.r = 2.0;
    return {Quantizer(std::move(centers)), rep};
}

namespace {

// Per-cell mass and first moment by cylinder decomposition, resolved until
// the straddling remainder is negligible.
struct CellStats {
    std::vector<double> mass;
    std::vector<double> moment;
};

CellStats cell_stats(const SelfSimilarMeasure& m, const VoronoiDiagram& diagram) {
    const auto [mean, m2] = solve_moments(m);
    (void)m2;
    const std::vector<AffineMap>& charts = m.chart_maps();
    const std::vector<double>& probs = m.probs();
    CellStats stats;
    stats.mass.assign(static_cast<size_t>(diagram.sites().size()), 0.0);
    stats.moment.assign(static_cast<size_t>(diagram.sites().size()), 0.0);

    std::function<void(const CylNode&)> walk = [&](const CylNode& n) {
        const CylGeometry g = node_cone(n, m.base_cone());
        if (!straddles(diagram.boundaries(), g) || n.mass * (g.hi - g.lo) < 1e-18) {
            const size_t cell = static_cast<size_t>(diagram.cell_index(g.mid));
            stats.mass[cell] += n.mass;
            stats.moment[cell] += n.mass * (n.s * mean + n.b);
            return;
        }
        for (size_t i = 0; i < charts.size(); ++i)
            walk({n.s * charts[i].s, n.s * charts[i].b + n.b, n.mass * probs[i]});
    };
    walk({1.0, 0.0, 1.0});
    return stats;
}

}  // namespace

std::pair<Quantizer, ErrorReport> lloyd(const SelfSimilarMeasure& m, int n,
                                        const Quantizer& init, int max_iters, double tol) {
    require_contractive_affine(m, "lloyd");
    if (init.size() != n) throw DomainError("lloyd: |init| must equal n");
    if (max_iters < 0) throw DomainError("lloyd: max_iters >= 0 required");
    const double eval_tol = 1e-15;

    Quantizer sites = init;
    ErrorReport err = error_exact_r2(m, sites, eval_tol);
    for (int iter = 0; iter < max_iters; ++iter) {
        const VoronoiDiagram diagram(sites);
        const CellStats stats = cell_stats(m, diagram);

        std::vector<double> next;
        next.reserve(static_cast<size_t>(n));
        std::vector<size_t> empty_cells;
        for (size_t j = 0; j < stats.mass.size(); ++j) {
            if (stats.mass[j] < 1e-12)
                empty_cells.push_back(j);
            else
                next.push_back(stats.moment[j] / stats.mass[j]);
        }
        for (size_t e : empty_cells) {
            (void)e;
            // Re-seed inside the heaviest cell, between its centroid and
            // its upper cell edge.
            const size_t heaviest = static_cast<size_t>(
                std::max_element(stats.mass.begin(), stats.mass.end()) - stats.mass.begin());
            const double centroid = stats.moment[heaviest] / stats.mass[heaviest];
            const double edge = heaviest < diagram.boundaries().size()
                                    ? diagram.boundaries()[heaviest]
                                    : m.base_cone().hi().x();
            next.push_back((centroid + edge) / 2.0);
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        while (static_cast<int>(next.size()) < n)
            next.push_back(next.back() + (m.base_cone().diameter() + 1.0) * 1e-9 *
                                             static_cast<double>(n - next.size()));

        Quantizer candidate(std::move(next));
        ErrorReport cand_err = error_exact_r2(m, candidate, eval_tol);
        const double decrease = err.value - cand_err.value;
        sites = std::move(candidate);
        err = cand_err;
        if (decrease < tol) break;
    }
    return {sites, err};
}

ScalingCheck scaling_check(const SelfSimilarMeasure& m, const Mat2& t, int n, double r,
                           ErrorMethod method) {
    if (t.a21 != 0.0)
        throw UnsupportedError("scaling_check: transform must have a21 = 0");
    if (t.a22 == 0.0 || t.a11 == 0.0) throw DomainError("scaling_check: singular transform");
    if (r != 2.0) throw UnsupportedError("scaling_check: exact evaluation is r = 2 only");
    if (method == ErrorMethod::monte_carlo)
        throw UnsupportedError("scaling_check: method must be exact_r2 or oracle");

    const double a = t.a11 / t.a22;
    const double b = t.a12 / t.a22;
    const SelfSimilarMeasure mt = push_forward(m, t);

    double v_orig = 0.0, v_push = 0.0;
    std::vector<double> centers_orig, centers_push;
    if (method == ErrorMethod::exact_r2) {
        auto [q0, e0] = lloyd(m, n, delta_n(m, n), 200, 1e-15);
        auto [q1, e1] = lloyd(mt, n, delta_n(mt, n), 200, 1e-15);
        v_orig = e0.value;
        v_push = e1.value;
        centers_orig = q0.sites();
        centers_push = q1.sites();
    } else {
        auto [q0, e0] = oracle(m, n, 14);
        auto [q1, e1] = oracle(mt, n, 14);
        v_orig = e0.value;
        v_push = e1.value;
        centers_orig = q0.sites();
        centers_push = q1.sites();
    }

    ScalingCheck chk;
    chk.lhs = v_push;
    chk.rhs = std::pow(std::abs(a), r) * v_orig;
    chk.rel_err = std::abs(chk.lhs - chk.rhs) / std::max(std::abs(chk.rhs), 1e-300);

    std::vector<double> mapped;
    mapped.reserve(centers_orig.size());
    for (double c : centers_orig) mapped.push_back(a * c + b);
    std::sort(mapped.begin(), mapped.end());
    chk.centers_match = mapped.size() == centers_push.size();
    for (size_t j = 0; chk.centers_match && j < mapped.size(); ++j)
        if (std::abs(mapped[j] - centers_push[j]) > 1e-9) chk.centers_match = false;
    return chk;
}

}  // namespace rpifs

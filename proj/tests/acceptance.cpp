// Acceptance harness: one pass/fail line per criterion, exit 0 iff all pass.
// Usage: acceptance <path-to-cli-binary> <path-to-cantor-spec.json>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "rpifs/commands.hpp"
#include "rpifs/measure.hpp"
#include "rpifs/quant.hpp"
#include "rpifs/system.hpp"

using namespace rpifs;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", idx, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++g_failures;
}

double exhaustive_discrete(const std::vector<Atom>& atoms, int n) {
    const int count = static_cast<int>(atoms.size());
    auto sse = [&](int i, int j) {
        double w = 0.0, m1 = 0.0, m2 = 0.0;
        for (int k = i; k <= j; ++k) {
            w += atoms[k].mass;
            m1 += atoms[k].mass * atoms[k].x;
            m2 += atoms[k].mass * atoms[k].x * atoms[k].x;
        }
        return w > 0.0 ? std::max(0.0, m2 - m1 * m1 / w) : 0.0;
    };
    double best = 1e300;
    std::vector<int> splits;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(splits.size()) == n - 1) {
            double total = 0.0;
            int from = 0;
            for (int s : splits) {
                total += sse(from, s - 1);
                from = s;
            }
            total += sse(from, count - 1);
            best = std::min(best, total);
            return;
        }
        for (int s = start; s <= count - (n - 1 - static_cast<int>(splits.size())); ++s) {
            splits.push_back(s);
            rec(s + 1);
            splits.pop_back();
        }
    };
    rec(1);
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <cli-binary> <cantor-spec.json>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const std::string spec_path = argv[2];

    // 1. Hausdorff dimension through the CLI binary, depth 12, under 10 s.
    try {
        const std::string out = "acceptance_dimension.json";
        const std::string cmd = "\"" + cli + "\" dimension --spec \"" + spec_path +
                                "\" --depth 12 --tol 1e-6 --out " + out;
        const auto t0 = std::chrono::steady_clock::now();
        const int rc = std::system(cmd.c_str());
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        nlohmann::json j;
        std::ifstream in(out);
        in >> j;
        const double xi = j.at("xi_estimate").get<double>();
        const double target = std::log(2.0) / std::log(3.0);
        char detail[160];
        std::snprintf(detail, sizeof(detail), "xi=%.10f target=%.10f |err|=%.2e time=%.2fs rc=%d",
                      xi, target, std::abs(xi - target), secs, rc);
        report(1, "dimension estimate", rc == 0 && std::abs(xi - target) < 1e-4 && secs < 10.0,
               detail);
    } catch (const std::exception& e) {
        report(1, "dimension estimate", false, e.what());
    }

    const SelfSimilarMeasure m = cantor_measure();

    // 2. Exact moments (0, 1/2) and Monte Carlo agreement at 10^5 samples.
    try {
        const auto [mean, m2] = solve_moments(m);
        const auto draws = sample(m, 100000, 1, 50);
        double s1 = 0.0, s2 = 0.0;
        for (const ProjPoint& p : draws) {
            s1 += p.x();
            s2 += p.x() * p.x();
        }
        s1 /= static_cast<double>(draws.size());
        s2 /= static_cast<double>(draws.size());
        char detail[160];
        std::snprintf(detail, sizeof(detail), "mean=%.17g M=%.17g mc_mean=%.4f mc_M=%.4f", mean,
                      m2, s1, s2);
        report(2, "second moment",
               mean == 0.0 && m2 == 0.5 && std::abs(s1) < 0.01 && std::abs(s2 - 0.5) < 0.01,
               detail);
    } catch (const std::exception& e) {
        report(2, "second moment", false, e.what());
    }

    // 3. error_exact_r2(Delta_n) equals dn_bound(n) within 1e-12 for n = 1..64.
    try {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        int worst_n = 0;
        for (int n = 1; n <= 64; ++n) {
            const double got = error_exact_r2(m, delta_n(m, n), 1e-15).value;
            const double want = dn_bound(n);
            if (std::abs(got - want) > worst) {
                worst = std::abs(got - want);
                worst_n = n;
            }
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char detail[120];
        std::snprintf(detail, sizeof(detail), "max |err-D_n|=%.2e at n=%d, time=%.2fs", worst,
                      worst_n, secs);
        report(3, "D_n achievement", worst <= 1e-12 && secs < 30.0, detail);
    } catch (const std::exception& e) {
        report(3, "D_n achievement", false, e.what());
    }

    // 4. Oracle (depth 14) never numerically violates V_{n,2} <= D_n.
    try {
        bool ok = true;
        double worst_margin = -1e300;
        for (int n = 1; n <= 32; ++n) {
            const auto [q, rep] = oracle(m, n, 14);
            const double margin = rep.value - rep.bound - dn_bound(n);
            worst_margin = std::max(worst_margin, margin);
            if (margin > 0.0) ok = false;
        }
        char detail[120];
        std::snprintf(detail, sizeof(detail), "max (oracle-bound-D_n)=%.2e", worst_margin);
        report(4, "upper-bound property", ok, detail);
    } catch (const std::exception& e) {
        report(4, "upper-bound property", false, e.what());
    }

    // 5. Best-found V_{1,2} = 0.5 within 1e-9.
    try {
        const auto [q, rep] = lloyd(m, 1, Quantizer(std::vector<double>{0.9}), 100, 1e-13);
        char detail[120];
        std::snprintf(detail, sizeof(detail), "V_1=%.12f site=%.3e", rep.value, q.sites()[0]);
        report(5, "tightness at n=1", std::abs(rep.value - 0.5) < 1e-9, detail);
    } catch (const std::exception& e) {
        report(5, "tightness at n=1", false, e.what());
    }

    // 6. Scaling law for T = [[3,0],[0,1]], n in {1,2,4}, exact evaluator.
    try {
        bool ok = true;
        double worst = 0.0;
        for (int n : {1, 2, 4}) {
            const auto chk = scaling_check(m, Mat2{3.0, 0.0, 0.0, 1.0}, n, 2.0,
                                           ErrorMethod::exact_r2);
            worst = std::max(worst, chk.rel_err);
            if (chk.rel_err >= 1e-9 || !chk.centers_match) ok = false;
        }
        char detail[80];
        std::snprintf(detail, sizeof(detail), "max rel_err=%.2e", worst);
        report(6, "scaling law", ok, detail);
    } catch (const std::exception& e) {
        report(6, "scaling law", false, e.what());
    }

    // 7. Equivariance: 20 random v=0 transforms hold; the v=1 example yields
    //    a concrete witness.
    try {
        std::mt19937_64 gen(2026);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        bool ok = true;
        for (int k = 0; k < 20; ++k) {
            double a = u(gen);
            while (std::abs(a) < 0.1) a = u(gen);
            const Quantizer d({-2.0 / 3.0, -0.1, 2.0 / 3.0});
            const auto res = voronoi_equivariance_check(d, Mat2{a, u(gen), 0.0, 1.0}, 10000,
                                                        static_cast<uint64_t>(k + 1));
            if (!res.holds) ok = false;
        }
        const auto neg = voronoi_equivariance_check(Quantizer({-2.0 / 3.0, 2.0 / 3.0}),
                                                    Mat2{1.0, 0.0, 1.0, 1.0}, 10000, 99);
        const bool witness_found = !neg.holds && neg.witness.has_value();
        char detail[120];
        if (witness_found)
            std::snprintf(detail, sizeof(detail), "all v=0 hold; witness x=%.6f",
                          neg.witness->x());
        else
            std::snprintf(detail, sizeof(detail), "v=0 ok=%d, witness_found=%d", ok ? 1 : 0,
                          witness_found ? 1 : 0);
        report(7, "Voronoi equivariance", ok && witness_found, detail);
    } catch (const std::exception& e) {
        report(7, "Voronoi equivariance", false, e.what());
    }

    // 8. Lloyd vs oracle within the discretization bound; DP vs exhaustive.
    try {
        bool ok = true;
        double worst_gap = 0.0;
        for (int n = 1; n <= 8; ++n) {
            const auto [lq, lrep] = lloyd(m, n, delta_n(m, n), 200, 1e-12);
            const auto [oq, orep] = oracle(m, n, 14);
            const double gap = std::abs(lrep.value - orep.value);
            worst_gap = std::max(worst_gap, gap);
            if (gap > orep.bound + 1e-12) ok = false;
        }
        std::mt19937_64 gen(5);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        bool dp_ok = true;
        for (int trial = 0; trial < 25 && dp_ok; ++trial) {
            const int count = 2 + static_cast<int>(gen() % 11);
            std::vector<Atom> atoms;
            double total = 0.0;
            for (int i = 0; i < count; ++i) {
                atoms.push_back({u(gen), 0.05 + static_cast<double>(gen() % 100) / 100.0});
                total += atoms.back().mass;
            }
            for (Atom& a : atoms) a.mass /= total;
            std::sort(atoms.begin(), atoms.end(),
                      [](const Atom& a, const Atom& b) { return a.x < b.x; });
            for (size_t i = 1; i < atoms.size();)
                if (atoms[i].x == atoms[i - 1].x)
                    atoms.erase(atoms.begin() + static_cast<long>(i));
                else
                    ++i;
            for (int n = 1; n <= std::min(4, static_cast<int>(atoms.size())); ++n) {
                const double dp = discrete_quantize(atoms, n).first;
                const double ref = exhaustive_discrete(atoms, n);
                if (std::abs(dp - ref) > 1e-12 * std::max(1.0, std::abs(ref))) dp_ok = false;
            }
        }
        char detail[120];
        std::snprintf(detail, sizeof(detail), "max |lloyd-oracle|=%.2e, dp_ok=%d", worst_gap,
                      dp_ok ? 1 : 0);
        report(8, "oracle consistency", ok && dp_ok, detail);
    } catch (const std::exception& e) {
        report(8, "oracle consistency", false, e.what());
    }

    // 9. Depth-l cones: 2^l of them, diameter 2*3^-l, nested and disjoint.
    try {
        const RPIFSSpec spec = cantor_spec();
        const Cone base(-1.0, 1.0);
        bool ok = true;
        std::vector<std::vector<std::pair<Word, Cone>>> levels;
        for (int l = 1; l <= 8; ++l) levels.push_back(refine(spec, base, l));
        for (int l = 1; l <= 8; ++l) {
            const auto& cones = levels[static_cast<size_t>(l - 1)];
            if (cones.size() != (1u << l)) ok = false;
            const double want = 2.0 * std::pow(3.0, -l);
            for (const auto& [w, c] : cones)
                if (std::abs(c.diameter() - want) > 1e-12) ok = false;
            for (size_t i = 0; i + 1 < cones.size(); ++i)
                if (cones[i].second.hi().x() >= cones[i + 1].second.lo().x())
                    ok = false;  // disjoint
            if (l >= 2) {
                const auto& parents = levels[static_cast<size_t>(l - 2)];
                for (size_t i = 0; i < cones.size(); ++i) {
                    const Cone& par = parents[i / 2].second;
                    if (cones[i].second.lo().x() < par.lo().x() - 1e-12 ||
                        cones[i].second.hi().x() > par.hi().x() + 1e-12)
                        ok = false;  // nested
                }
            }
        }
        report(9, "cone geometry", ok, "levels 1..8");
    } catch (const std::exception& e) {
        report(9, "cone geometry", false, e.what());
    }

    std::printf("%s: %d/9 criteria passed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                9 - g_failures);
    return g_failures == 0 ? 0 : 1;
}

#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "rpifs/commands.hpp"
#include "rpifs/errors.hpp"
#include "rpifs/io.hpp"

namespace {

void add_common(CLI::App* sub, rpifs::RunConfig& cfg) {
    sub->add_option("--spec", cfg.spec_path,
                    "RPIFS spec JSON (default: bundled projective Cantor system)");
    sub->add_option("--out", cfg.output_path, "Output file (default: stdout)");
    sub->add_option("--base-lo", cfg.base_lo, "Base cone lower endpoint");
    sub->add_option("--base-hi", cfg.base_hi, "Base cone upper endpoint");
    sub->add_option("--seed", cfg.seed, "PRNG seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Real projective IFS toolkit: attractor geometry, dimension, "
                 "invariant measure and quantization error"};
    app.require_subcommand(1);

    rpifs::RunConfig cfg;
    std::map<std::string, std::function<int(const rpifs::RunConfig&)>> dispatch;

    auto* dim = app.add_subcommand("dimension", "Zeta critical-exponent dimension estimate");
    add_common(dim, cfg);
    dim->add_option("--depth", cfg.depth, "Enumeration depth")->capture_default_str();
    dim->add_option("--tol", cfg.tol, "Bisection bracket width")->capture_default_str();
    dispatch["dimension"] = rpifs::cmd_dimension;

    auto* att = app.add_subcommand("attractor", "Cylinder cones at a refinement depth (CSV)");
    add_common(att, cfg);
    att->add_option("--depth", cfg.depth, "Refinement depth")->capture_default_str();
    dispatch["attractor"] = rpifs::cmd_attractor;

    auto* smp = app.add_subcommand("sample", "Chaos-game draws from the invariant measure (CSV)");
    add_common(smp, cfg);
    smp->add_option("--samples", cfg.samples, "Number of points")->capture_default_str();
    dispatch["sample"] = rpifs::cmd_sample;

    auto* qnt = app.add_subcommand("quantize", "Quantization error table over a range of n (CSV)");
    add_common(qnt, cfg);
    qnt->add_option("--n-min", cfg.n_min, "Smallest quantizer size")->capture_default_str();
    qnt->add_option("--n-max", cfg.n_max, "Largest quantizer size")->capture_default_str();
    qnt->add_option("--depth", cfg.oracle_depth, "Oracle discretization depth")
        ->capture_default_str();
    dispatch["quantize"] = rpifs::cmd_quantize;

    auto* ver = app.add_subcommand("verify", "Run the invariant checks and report pass/fail");
    add_common(ver, cfg);
    dispatch["verify"] = rpifs::cmd_verify;

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return dispatch.at(name)(cfg);
    } catch (const rpifs::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const rpifs::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const rpifs::GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return 2;
    } catch (const rpifs::UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

// katz1: mod-p weight-one Hecke modules from the command line.
//
// Exit codes: 0 success, 1 verification failure, 2 bad input, 3 internal error.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "katz1/reports.hpp"

using namespace katz1;

namespace {

BoundMode parse_mode(const std::string& m)
{
    if (m == "fixed") return BoundMode::fixed_character;
    if (m == "full") return BoundMode::full;
    throw std::invalid_argument("mode must be 'fixed' or 'full'");
}

void emit(const Report& r, bool as_json)
{
    if (as_json) std::cout << r.json.dump(2) << "\n";
    else std::cout << r.text;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mod-p weight-one Katz forms through weight-p Hecke algebras"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string mode = "fixed", levels;
    if (const char* env = std::getenv("KATZ1_CACHE")) cfg.cache_dir = env;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--p", cfg.p, "Prime p (weight k = p)")->capture_default_str();
        sub->add_option("--character", cfg.character, "trivial, quadratic or g1:v1,g2:v2 (exponents on unit group generators)")
            ->capture_default_str();
        sub->add_option("--mode", mode, "Bound mode: fixed or full")->capture_default_str();
        sub->add_option("--cache", cfg.cache_dir, "Hecke algebra cache directory (default $KATZ1_CACHE)");
        sub->add_option("--seed", cfg.seed, "Seed for randomized splitting")->capture_default_str();
        sub->add_flag("--json", cfg.json, "JSON output");
        sub->add_flag("--stats", cfg.stats, "Timing and cache statistics");
    };

    auto* compute = app.add_subcommand("compute", "Weight-one module at one level");
    compute->add_option("--level", cfg.level, "Level N")->required();
    compute->add_option("--qexp", cfg.qexp, "q-expansion length");
    common(compute);

    auto* scan = app.add_subcommand("scan", "Table of d, h, UPO and image tags over a level range");
    scan->add_option("--levels", levels, "Range A..B")->required();
    scan->add_flag("--primes-only", cfg.primes_only, "Prime levels only");
    scan->add_option("--width", cfg.width, "Worker threads")->capture_default_str();
    scan->add_flag("--all", cfg.all, "Also list levels with zero module");
    common(scan);

    auto* verify = app.add_subcommand("verify", "Property suites");
    verify->add_option("suite", cfg.suite, "eigenspaces | mod2-direct | dihedral-completeness | algebra-sanity")->required();
    verify->add_option("--levels", levels, "Range A..B (default depends on the suite)");
    verify->add_flag("--primes-only", cfg.primes_only, "Prime levels only");
    verify->add_option("--width", cfg.width, "Worker threads")->capture_default_str();
    common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        cfg.mode = parse_mode(mode);
        if (!levels.empty()) {
            std::tie(cfg.level_lo, cfg.level_hi) = parse_range(levels);
            cfg.has_range = true;
        }
        if (*compute) {
            cfg.command = "compute";
            emit(compute_report(cfg), cfg.json);
            return 0;
        }
        if (*scan) {
            cfg.command = "scan";
            auto rows = scan_levels(cfg, &std::cerr);
            emit(scan_report(rows, cfg), cfg.json);
            return 0;
        }
        cfg.command = "verify";
        auto res = run_verify(cfg);
        emit(verify_report(res, cfg), cfg.json);
        return res.ok() ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "katz1: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "katz1: internal error: " << e.what() << "\n";
        return 3;
    }
}

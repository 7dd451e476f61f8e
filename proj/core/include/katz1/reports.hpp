#pragma once

// Reports behind the katz1 command line: single-level computation, level
// scans (exceptional-level tables) and verification suites, as text and JSON.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "katz1/hecke_algebra.hpp"

namespace katz1 {

inline constexpr const char* kReportSchemaVersion = "1.0";

struct RunConfig {
    std::string command;
    int64_t level = 0;
    int64_t level_lo = 0, level_hi = 0;
    bool has_range = false;
    bool primes_only = false;
    uint64_t p = 2;
    std::string character = "trivial";
    BoundMode mode = BoundMode::fixed_character;
    int64_t qexp = 0;
    bool json = false;
    bool all = false;
    bool stats = false;
    std::string cache_dir;
    unsigned width = 1;
    uint64_t seed = 0x6b61747a31ULL;
    std::string suite;
};

/// "A..B" (or a single level).
std::pair<int64_t, int64_t> parse_range(const std::string& s);
/// Levels of the configured range; with primes_only only primes.
std::vector<int64_t> levels_in_range(const RunConfig& cfg);

struct Report {
    nlohmann::json json;
    std::string text;
};

/// Throws std::invalid_argument on bad input (p | N, N < 5, p not prime,
/// malformed character).
Report compute_report(const RunConfig& cfg);

struct ScanRow {
    int64_t level = 0;
    bool ok = true;
    std::string error;
    size_t d = 0;
    std::optional<size_t> h;
    int max_upo = 0;
    std::vector<std::string> tags;
    bool complete = true; // every dihedral prediction matched
    double seconds = 0;
};

/// One row per level coprime to p (others are reported on `notices`).
/// Levels are computed on `cfg.width` threads; rows keep the level order.
std::vector<ScanRow> scan_levels(const RunConfig& cfg, std::ostream* notices = nullptr);
ScanRow scan_level(int64_t N, const RunConfig& cfg);
Report scan_report(const std::vector<ScanRow>& rows, const RunConfig& cfg);

struct VerifyResult {
    std::string suite;
    size_t checked = 0;
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    bool ok() const { return failures.empty(); }
};

/// Suites: eigenspaces, mod2-direct, dihedral-completeness, algebra-sanity.
/// Default levels when no range is configured: primes <= 300, {23, 31, 491},
/// primes <= 500, primes <= 100.
VerifyResult run_verify(const RunConfig& cfg);
Report verify_report(const VerifyResult& r, const RunConfig& cfg);

} // namespace katz1

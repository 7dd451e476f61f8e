#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "katz1/arith.hpp"
#include "katz1/reports.hpp"

using namespace katz1;

namespace {

RunConfig at(int64_t N, uint64_t p = 2)
{
    RunConfig c;
    c.command = "compute";
    c.level = N;
    c.p = p;
    return c;
}

} // namespace

TEST(Reports, ParseRange)
{
    EXPECT_EQ(parse_range("220..300"), std::make_pair(int64_t{220}, int64_t{300}));
    EXPECT_EQ(parse_range("491"), std::make_pair(int64_t{491}, int64_t{491}));
    EXPECT_THROW(parse_range("300..220"), std::invalid_argument);
    EXPECT_THROW(parse_range("a..b"), std::invalid_argument);
    EXPECT_THROW(parse_range(""), std::invalid_argument);

    RunConfig c;
    c.level_lo = 220, c.level_hi = 300, c.has_range = true, c.primes_only = true;
    std::vector<int64_t> want;
    for (int64_t l : primes_up_to(300))
        if (l >= 220) want.push_back(l);
    EXPECT_EQ(levels_in_range(c), want);
}

TEST(Reports, Compute491)
{
    auto cfg = at(491);
    cfg.qexp = 20;
    auto r = compute_report(cfg);
    EXPECT_NE(r.text.find("Dimension = 6"), std::string::npos);
    EXPECT_NE(r.text.find("Bound = 164"), std::string::npos);
    const auto& j = r.json;
    EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
    EXPECT_EQ(j["dimension"], 6);
    EXPECT_EQ(j["cutoff"], 164);
    EXPECT_EQ(j["class_group"]["h"], 9);
    ASSERT_EQ(j["local_factors"].size(), 2u);
    size_t total = 0;
    for (auto& f : j["local_factors"]) total += f["module_dimension"].get<size_t>();
    EXPECT_EQ(total, 6u);
    EXPECT_TRUE(j["dihedral"]["complete"].get<bool>());
    for (auto& q : j["qexpansions"]) {
        ASSERT_EQ(q["coefficients"].size(), 20u);
        EXPECT_EQ(q["coefficients"][0], "1"); // a_1
    }
}

TEST(Reports, ZeroModuleAndBadInput)
{
    auto r = compute_report(at(7));
    EXPECT_EQ(r.json["dimension"], 0);
    EXPECT_TRUE(r.json["local_factors"].empty());

    try {
        compute_report(at(14));
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("level not coprime to p"), std::string::npos);
    }
    EXPECT_THROW(compute_report(at(3)), std::invalid_argument);
    EXPECT_THROW(compute_report(at(23, 4)), std::invalid_argument);
    auto bad = at(23);
    bad.character = "nonsense";
    EXPECT_THROW(compute_report(bad), std::invalid_argument);
}

TEST(Reports, ScanExceptionalRows)
{
    RunConfig c;
    c.command = "scan";
    c.level_lo = 220, c.level_hi = 300, c.has_range = true, c.primes_only = true;
    c.width = 2;
    auto rows = scan_levels(c);
    struct Want {
        int64_t N;
        size_t d, h;
        int upo;
    };
    for (auto w : {Want{229, 2, 3, 2}, Want{257, 2, 3, 2}, Want{283, 3, 3, 3}}) {
        auto it = std::find_if(rows.begin(), rows.end(), [&](const ScanRow& r) { return r.level == w.N; });
        ASSERT_NE(it, rows.end()) << w.N;
        EXPECT_EQ(it->d, w.d) << w.N;
        EXPECT_EQ(it->h, w.h) << w.N;
        EXPECT_EQ(it->max_upo, w.upo) << w.N;
    }
    for (size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i - 1].level, rows[i].level);

    // the same table on one thread
    c.width = 1;
    auto again = scan_levels(c);
    ASSERT_EQ(again.size(), rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(again[i].level, rows[i].level);
        EXPECT_EQ(again[i].d, rows[i].d);
        EXPECT_EQ(again[i].tags, rows[i].tags);
    }

    auto rep = scan_report(rows, c);
    size_t shown = 0;
    for (auto& r : rows) shown += r.d > 0;
    EXPECT_EQ(rep.json["rows"].size(), shown);
}

TEST(Reports, ScanSmallLevelsIsEmpty)
{
    RunConfig c;
    c.command = "scan";
    c.level_lo = 5, c.level_hi = 20, c.has_range = true;
    std::ostringstream notices;
    auto rows = scan_levels(c, &notices);
    EXPECT_TRUE(scan_report(rows, c).json["rows"].empty());
    EXPECT_NE(notices.str().find("level not coprime to p"), std::string::npos);
}

TEST(Reports, VerifySuites)
{
    RunConfig c;
    c.command = "verify";
    c.suite = "eigenspaces";
    c.level_lo = 5, c.level_hi = 120, c.has_range = true, c.primes_only = true;
    auto v = run_verify(c);
    EXPECT_TRUE(v.ok()) << (v.failures.empty() ? "" : v.failures[0]);
    EXPECT_GT(v.checked, 20u);
    EXPECT_EQ(verify_report(v, c).json["ok"], true);

    c.suite = "unknown";
    EXPECT_THROW(run_verify(c), std::invalid_argument);
    c.suite = "mod2-direct";
    c.p = 3;
    EXPECT_THROW(run_verify(c), std::invalid_argument);
}

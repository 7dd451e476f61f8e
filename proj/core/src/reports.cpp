#include "katz1/reports.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "katz1/arith.hpp"
#include "katz1/galois_forms.hpp"
#include "katz1/weight_one.hpp"

namespace katz1 {

using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

void check_level(int64_t N, uint64_t p)
{
    if (!is_prime64(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
    if (N < 5) throw std::invalid_argument("level must be at least 5 (N = " + std::to_string(N) + ")");
    if (gcd64(N, static_cast<int64_t>(p)) != 1)
        throw std::invalid_argument("level not coprime to p (N = " + std::to_string(N) + ", p = " + std::to_string(p) + ")");
}

WeightOneModule::Options module_options(const RunConfig& cfg)
{
    WeightOneModule::Options opt;
    opt.mode = cfg.mode;
    opt.cache_dir = cfg.cache_dir;
    opt.seed = cfg.seed;
    opt.algebra_bound = cfg.qexp;
    return opt;
}

std::shared_ptr<const WeightOneModule> build_module(int64_t N, const RunConfig& cfg)
{
    check_level(N, cfg.p);
    DirichletCharacter eps = DirichletCharacter::parse(N, cfg.character);
    return WeightOneModule::build(N, cfg.p, eps, module_options(cfg));
}

// predictions for the level, empty when there is no quadratic discriminant
DihedralPredictions predictions_for(int64_t N, uint64_t p)
{
    DihedralPredictions pred;
    pred.N = N;
    pred.p = p;
    if (level_discriminant(N) == 0) return pred;
    return dihedral_predictions(N, p);
}

std::string mode_name(BoundMode m) { return m == BoundMode::full ? "full" : "fixed"; }

json field_json(const FieldPtr& K)
{
    return json{{"order", K->order()}, {"degree", K->degree()}, {"modulus", K->modulus()}};
}

template <class F>
void parallel_for(size_t n, unsigned width, F&& body)
{
    width = std::max(1u, std::min<unsigned>(width, static_cast<unsigned>(std::max<size_t>(n, 1))));
    if (width == 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < width; ++t)
        pool.emplace_back([&] {
            for (size_t i = next++; i < n; i = next++) body(i);
        });
    for (auto& th : pool) th.join();
}

std::string join(const std::vector<std::string>& xs, const std::string& sep)
{
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
    return out;
}

} // namespace

std::pair<int64_t, int64_t> parse_range(const std::string& s)
{
    auto pos = s.find("..");
    try {
        size_t used = 0;
        if (pos == std::string::npos) {
            int64_t a = std::stoll(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return {a, a};
        }
        std::string lo = s.substr(0, pos), hi = s.substr(pos + 2);
        int64_t a = std::stoll(lo, &used);
        if (used != lo.size()) throw std::invalid_argument(s);
        int64_t b = std::stoll(hi, &used);
        if (used != hi.size()) throw std::invalid_argument(s);
        if (a > b) throw std::invalid_argument(s);
        return {a, b};
    } catch (const std::logic_error&) {
        throw std::invalid_argument("malformed level range '" + s + "' (expected A..B)");
    }
}

std::vector<int64_t> levels_in_range(const RunConfig& cfg)
{
    std::vector<int64_t> out;
    for (int64_t N = cfg.level_lo; N <= cfg.level_hi; ++N)
        if (!cfg.primes_only || is_prime64(static_cast<uint64_t>(N))) out.push_back(N);
    return out;
}

Report compute_report(const RunConfig& cfg)
{
    int64_t N = cfg.level;
    auto t0 = std::chrono::steady_clock::now();
    auto W = build_module(N, cfg);
    const auto& A = W->algebra();
    Report r;
    json& j = r.json;
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = "compute";
    j["level"] = N;
    j["p"] = cfg.p;
    j["character"] = W->character_id();
    j["mode"] = mode_name(cfg.mode);
    j["cutoff"] = W->cutoff();
    j["dimension"] = W->dim();
    j["rank_T"] = A ? A->expected_rank() : 0;
    j["dim_A"] = A ? A->dim() : 0;
    j["algebra_bound"] = A ? A->bound() : 0;
    j["exact"] = W->exact();
    j["note"] = W->note();
    j["diagnostics"] = W->diagnostics();

    std::string class_line;
    int64_t D = level_discriminant(N);
    if (D != 0) {
        auto G = class_group(D);
        json g{{"D", D}, {"h", G.h}, {"narrow_h", G.narrow_h}, {"u", G.u}, {"structure", G.structure}};
        if (D > 0) g["unit_norm"] = G.unit_norm;
        j["class_group"] = g;
        class_line = "Class number of quadratic extension with |disc| = " + std::to_string(std::abs(D)) + " is: " + std::to_string(G.h);
    } else {
        j["class_group"] = nullptr;
    }

    std::ostringstream tx;
    tx << W->session_text(class_line);
    tx << "\nCharacter = " << W->character_id() << ", p = " << cfg.p << ", mode = " << mode_name(cfg.mode) << "\n";
    tx << "rank T = " << j["rank_T"].get<size_t>() << ", dim A = " << j["dim_A"].get<size_t>() << "\n";
    if (W->exact()) tx << "Exact: the computed module is the full space of weight-one forms\n";
    else if (W->dim() > 0)
        tx << "Not certified exact: d is the dimension of the weight-one Hecke module obtained from weight p\n";
    if (!W->note().empty()) tx << "Note: " << W->note() << "\n";
    for (auto& d : W->diagnostics()) tx << "Diagnostic: " << d << "\n";

    json factors = json::array();
    for (auto& lf : W->decomposition().factors)
        factors.push_back(json{{"residue_field", field_json(lf.residue_field)},
                               {"local_dimension", lf.local_dimension},
                               {"module_dimension", lf.module_dimension},
                               {"upo", lf.upo},
                               {"gorenstein", lf.gorenstein},
                               {"max_ideals", lf.num_max_ideals()},
                               {"eigenvalues", eigenvalue_set(lf)}});
    j["local_factors"] = factors;

    json systems = json::array();
    if (W->dim() > 0) {
        tx << "\nEigensystems (a_l for primes l <= " << W->cutoff() << ", a_" << cfg.p << " from T_p'):\n";
        std::set<size_t> shown;
        for (auto& s : W->eigensystems()) {
            json a = json::object();
            std::vector<std::string> items;
            for (size_t i = 0; i < s.primes.size(); ++i) {
                std::string v = power_string(*s.field, s.a[i]);
                a[std::to_string(s.primes[i])] = v;
                items.push_back("a_" + std::to_string(s.primes[i]) + " = " + v);
            }
            systems.push_back(json{{"orbit", s.orbit}, {"orbit_size", s.orbit_size}, {"field", field_json(s.field)}, {"a", a}});
            if (shown.insert(s.orbit).second) {
                tx << "  orbit " << s.orbit + 1 << " over " << s.field->header() << " (" << s.orbit_size
                   << (s.orbit_size == 1 ? " system" : " conjugate systems") << "):\n    " << join(items, ", ") << "\n";
            }
        }
    }
    j["eigensystems"] = systems;

    json qexp = json::array();
    if (cfg.qexp > 0 && W->dim() > 0) {
        tx << "\nq-expansions (first eigenform of each local factor):\n";
        for (size_t i = 0; i < W->decomposition().factors.size(); ++i) {
            FieldPtr K;
            FqVector v = W->eigenvector(i, K);
            auto a = W->qexpansion(v, K, cfg.qexp);
            std::vector<std::string> cs;
            for (auto x : a) cs.push_back(power_string(*K, x));
            qexp.push_back(json{{"factor", i}, {"field", field_json(K)}, {"coefficients", cs}});
            tx << "  factor " << i + 1 << " over GF(" << K->order() << "): " << join(cs, " ") << "\n";
        }
    }
    j["qexpansions"] = qexp;

    if (W->dim() > 0) {
        auto pred = predictions_for(N, cfg.p);
        auto C = classify(*W, pred);
        json orbits = json::array();
        tx << "\nImage classification (primes l <= " << C.compared_up_to << " not dividing pN; heuristic, not a proof):\n";
        for (auto& o : C.orbits) {
            orbits.push_back(json{{"orbit", o.orbit},
                                  {"tag", to_string(o.tag)},
                                  {"label", o.label},
                                  {"residue_degree", o.residue_degree},
                                  {"size", o.size},
                                  {"character_order", o.character_order},
                                  {"trace_field_degree", o.trace_field_degree}});
            tx << "  orbit " << o.orbit + 1 << " over GF(" << cfg.p << "^" << o.residue_degree << "): " << o.label << "\n";
        }
        size_t matched = static_cast<size_t>(std::count(C.prediction_matched.begin(), C.prediction_matched.end(), true));
        tx << "  dihedral predictions matched: " << matched << " of " << pred.systems.size() << "\n";
        j["dihedral"] = json{{"compared_up_to", C.compared_up_to},
                             {"predictions", pred.systems.size()},
                             {"matched", matched},
                             {"complete", C.complete()},
                             {"orbits", orbits}};
    } else {
        j["dihedral"] = nullptr;
    }
    double secs = seconds_since(t0);
    if (cfg.stats) {
        j["stats"] = json{{"seconds", secs}, {"from_cache", W->from_cache()}};
        tx << "\nStats: " << std::fixed << std::setprecision(3) << secs << " s, algebra " << (W->from_cache() ? "loaded from cache" : "computed")
           << "\n";
    }
    r.text = tx.str();
    return r;
}

ScanRow scan_level(int64_t N, const RunConfig& cfg)
{
    ScanRow row;
    row.level = N;
    auto t0 = std::chrono::steady_clock::now();
    try {
        auto W = build_module(N, cfg);
        row.d = W->dim();
        int64_t D = level_discriminant(N);
        if (D != 0) row.h = class_group(D).h;
        for (auto& lf : W->decomposition().factors) row.max_upo = std::max(row.max_upo, lf.upo);
        if (W->dim() > 0) {
            auto C = classify(*W, predictions_for(N, cfg.p));
            std::set<std::string> tags;
            for (auto& o : C.orbits) tags.insert(o.tag == ImageTag::dihedral ? "dihedral" : o.label);
            row.tags.assign(tags.begin(), tags.end());
            row.complete = C.complete();
        }
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
    }
    row.seconds = seconds_since(t0);
    return row;
}

std::vector<ScanRow> scan_levels(const RunConfig& cfg, std::ostream* notices)
{
    if (cfg.level_lo < 5) throw std::invalid_argument("level range must start at 5 or above");
    if (!is_prime64(cfg.p)) throw std::invalid_argument("p = " + std::to_string(cfg.p) + " is not prime");
    std::vector<int64_t> levels;
    for (int64_t N : levels_in_range(cfg)) {
        if (gcd64(N, static_cast<int64_t>(cfg.p)) != 1) {
            if (notices) *notices << "skipping level " << N << ": level not coprime to p\n";
            continue;
        }
        levels.push_back(N);
    }
    std::vector<ScanRow> rows(levels.size());
    parallel_for(levels.size(), cfg.width, [&](size_t i) { rows[i] = scan_level(levels[i], cfg); });
    return rows;
}

Report scan_report(const std::vector<ScanRow>& rows, const RunConfig& cfg)
{
    Report r;
    json arr = json::array();
    std::ostringstream tx;
    tx << std::setw(6) << "N" << std::setw(5) << "d" << std::setw(5) << "h" << std::setw(5) << "UPO" << "  tags\n";
    for (auto& row : rows) {
        if (row.ok && row.d == 0 && !cfg.all) continue;
        json o{{"level", row.level}, {"ok", row.ok}, {"d", row.d}, {"max_upo", row.max_upo}, {"tags", row.tags},
               {"complete", row.complete}};
        o["h"] = row.h ? json(*row.h) : json(nullptr);
        if (!row.ok) o["error"] = row.error;
        if (cfg.stats) o["seconds"] = row.seconds;
        arr.push_back(o);
        tx << std::setw(6) << row.level;
        if (!row.ok) {
            tx << "  error: " << row.error << "\n";
            continue;
        }
        tx << std::setw(5) << row.d << std::setw(5) << (row.h ? std::to_string(*row.h) : "-") << std::setw(5) << row.max_upo << "  "
           << join(row.tags, ", ");
        if (!row.complete) tx << " (unmatched dihedral predictions)";
        if (cfg.stats) tx << "  [" << std::fixed << std::setprecision(2) << row.seconds << " s]";
        tx << "\n";
    }
    r.json = json{{"schema_version", kReportSchemaVersion},
                  {"command", "scan"},
                  {"p", cfg.p},
                  {"character", cfg.character},
                  {"mode", mode_name(cfg.mode)},
                  {"levels", {cfg.level_lo, cfg.level_hi}},
                  {"primes_only", cfg.primes_only},
                  {"rows", arr}};
    r.text = tx.str();
    return r;
}

namespace {

std::vector<int64_t> default_levels(const std::string& suite)
{
    auto primes_from_5 = [](int64_t upto) {
        std::vector<int64_t> v;
        for (int64_t l : primes_up_to(upto))
            if (l >= 5) v.push_back(l);
        return v;
    };
    if (suite == "eigenspaces") return primes_from_5(300);
    if (suite == "mod2-direct") return {23, 31, 491};
    if (suite == "dihedral-completeness") return primes_from_5(500);
    return primes_from_5(100);
}

void verify_level(const std::string& suite, int64_t N, const RunConfig& cfg, std::vector<std::string>& fail,
                  std::vector<std::string>& notes)
{
    std::string at = "level " + std::to_string(N) + ": ";
    if (suite == "mod2-direct") {
        auto cv = crossvalidate_mod2(N);
        if (!cv.equal)
            fail.push_back(at + std::to_string(cv.direct.size()) + " direct vs " + std::to_string(cv.reduced.size()) +
                           " reduced non-Eisenstein orbits, systems differ");
        return;
    }
    auto W = build_module(N, cfg);
    if (suite == "eigenspaces") {
        auto rep = eigenspace_check(*W);
        for (auto& f : rep.failures) fail.push_back(f);
        if (rep.lower_bound_caveat) notes.push_back(at + "algebra smaller than the expected rank, check is a lower bound");
    } else if (suite == "dihedral-completeness") {
        auto pred = predictions_for(N, cfg.p);
        if (pred.systems.empty()) return;
        if (W->dim() == 0) {
            fail.push_back(at + std::to_string(pred.systems.size()) + " predictions but the module is zero");
            return;
        }
        auto C = classify(*W, pred);
        for (size_t i = 0; i < pred.systems.size(); ++i)
            if (!C.prediction_matched[i])
                fail.push_back(at + "prediction " + std::to_string(i + 1) + " (character order " + std::to_string(pred.systems[i].order) +
                               ") not matched");
    } else if (suite == "algebra-sanity") {
        const auto& A = W->algebra();
        if (!A) return;
        if (!A->frobenius_recursion_holds()) fail.push_back(at + "t_{pn} != t_p t_n");
        if (!A->commutative()) fail.push_back(at + "algebra not commutative");
        if (!W->transport_consistent()) fail.push_back(at + "Frobenius and transport are not inverse");
        if (!W->r_stable(W->cutoff())) fail.push_back(at + "R not stable under t_l");
        if (!A->faithful()) notes.push_back(at + "dim A = " + std::to_string(A->dim()) + " < rank " + std::to_string(A->expected_rank()));
        if (N <= 60) {
            auto S = ModularSymbolSpace::build(N, static_cast<int>(cfg.p), DirichletCharacter::parse(N, cfg.character));
            auto T = IntegralHeckeAlgebra::generate(*S, A->bound());
            if (!T.table_spans_lattice()) fail.push_back(at + "integral table does not span the lattice");
            if (!T.closed_under_products(3, cfg.seed)) fail.push_back(at + "integral algebra not closed under products");
            auto R = ModPHeckeAlgebra::reduce(T, S, cfg.p, A->prime_choice());
            if (R->dim() != A->dim()) fail.push_back(at + "reduced Hermite basis and direct reduction differ in dimension");
        }
    }
}

} // namespace

VerifyResult run_verify(const RunConfig& cfg)
{
    static const std::set<std::string> suites{"eigenspaces", "mod2-direct", "dihedral-completeness", "algebra-sanity"};
    if (!suites.count(cfg.suite)) throw std::invalid_argument("unknown suite '" + cfg.suite + "'");
    if (cfg.suite == "mod2-direct" && cfg.p != 2) throw std::invalid_argument("mod2-direct needs p = 2");
    VerifyResult res;
    res.suite = cfg.suite;
    std::vector<int64_t> levels;
    for (int64_t N : cfg.has_range ? levels_in_range(cfg) : default_levels(cfg.suite))
        if (N >= 5 && gcd64(N, static_cast<int64_t>(cfg.p)) == 1) levels.push_back(N);
    std::vector<std::vector<std::string>> fails(levels.size()), notes(levels.size());
    parallel_for(levels.size(), cfg.width, [&](size_t i) {
        try {
            verify_level(cfg.suite, levels[i], cfg, fails[i], notes[i]);
        } catch (const std::exception& e) {
            fails[i].push_back("level " + std::to_string(levels[i]) + ": " + e.what());
        }
    });
    res.checked = levels.size();
    for (size_t i = 0; i < levels.size(); ++i) {
        res.failures.insert(res.failures.end(), fails[i].begin(), fails[i].end());
        res.notes.insert(res.notes.end(), notes[i].begin(), notes[i].end());
    }
    return res;
}

Report verify_report(const VerifyResult& v, const RunConfig& cfg)
{
    Report r;
    r.json = json{{"schema_version", kReportSchemaVersion},
                  {"command", "verify"},
                  {"suite", v.suite},
                  {"p", cfg.p},
                  {"levels_checked", v.checked},
                  {"ok", v.ok()},
                  {"failures", v.failures},
                  {"notes", v.notes}};
    std::ostringstream tx;
    tx << "verify " << v.suite << ": " << v.checked << " levels, " << (v.ok() ? "PASS" : "FAIL") << "\n";
    for (auto& f : v.failures) tx << "  FAIL " << f << "\n";
    for (auto& n : v.notes) tx << "  note " << n << "\n";
    r.text = tx.str();
    return r;
}

} // namespace katz1

#include "katz1/dirichlet.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "katz1/arith.hpp"

namespace katz1 {

namespace {

int64_t primitive_root_prime_power(int64_t p, int e)
{
    int64_t pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    for (int64_t g = 2; g < p + 2; ++g) {
        if (g % p == 0) continue;
        if (multiplicative_order(g % p, p) != p - 1) continue;
        if (e == 1) return g;
        if (multiplicative_order(g, p * p) == p * (p - 1)) return g;
        return g + p; // then g + p is primitive mod p^2, hence mod p^e
    }
    throw std::logic_error("primitive root not found");
}

// x with x = a mod m and x = 1 mod N/m.
int64_t crt_lift(int64_t a, int64_t m, int64_t N)
{
    int64_t rest = N / m;
    if (rest == 1) return mod64(a, N);
    // x = 1 + rest * t, with 1 + rest * t = a mod m
    int64_t t = mod64((a - 1) % m * invmod64(rest % m, m), m);
    return mod64(1 + rest * t, N);
}

} // namespace

std::shared_ptr<const UnitGroup> UnitGroup::make(int64_t N)
{
    if (N < 1) throw std::invalid_argument("UnitGroup: modulus must be positive");
    static std::mutex mu;
    static std::map<int64_t, std::shared_ptr<const UnitGroup>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    auto G = std::make_shared<UnitGroup>();
    G->N = N;
    for (auto [p, e] : factor64(N)) {
        int64_t pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        if (p == 2) {
            if (e >= 2) {
                G->gens.push_back(crt_lift(-1, pe, N));
                G->orders.push_back(2);
            }
            if (e >= 3) {
                G->gens.push_back(crt_lift(5, pe, N));
                G->orders.push_back(pe / 4);
            }
        } else {
            G->gens.push_back(crt_lift(primitive_root_prime_power(p, e), pe, N));
            G->orders.push_back(pe / p * (p - 1));
        }
    }
    for (int64_t n : G->orders) G->exponent = lcm64(G->exponent, n);
    G->logs.assign(static_cast<size_t>(N), {});
    size_t r = G->gens.size();
    std::vector<int32_t> k(r, 0);
    while (true) {
        int64_t a = 1 % N;
        for (size_t i = 0; i < r; ++i)
            a = static_cast<int64_t>(mulmod64(static_cast<uint64_t>(a), powmod64(static_cast<uint64_t>(G->gens[i]), static_cast<uint64_t>(k[i]), static_cast<uint64_t>(N)), static_cast<uint64_t>(N)));
        G->logs[static_cast<size_t>(a)] = k;
        size_t i = 0;
        while (i < r) {
            if (++k[i] < G->orders[i]) break;
            k[i] = 0;
            ++i;
        }
        if (i == r) break;
    }
    if (N == 1) G->logs[0] = {};
    cache.emplace(N, G);
    return G;
}

DirichletCharacter::DirichletCharacter(int64_t N, std::vector<int64_t> exps) : N_(N), exps_(std::move(exps))
{
    G_ = UnitGroup::make(N);
    if (exps_.size() != G_->gens.size()) throw std::invalid_argument("DirichletCharacter: wrong number of exponents");
    m_ = 1;
    for (size_t i = 0; i < exps_.size(); ++i) {
        exps_[i] = mod64(exps_[i], G_->orders[i]);
        m_ = lcm64(m_, G_->orders[i] / gcd64(exps_[i], G_->orders[i]));
    }
    K_ = std::make_shared<const CyclotomicField>(m_);
    table_.assign(static_cast<size_t>(N), -1);
    for (int64_t a = 0; a < N; ++a) {
        if (gcd64(a, N) != 1) continue;
        const auto& lg = G_->logs[static_cast<size_t>(a)];
        int64_t e = 0;
        for (size_t i = 0; i < lg.size(); ++i) {
            int64_t g = gcd64(exps_[i], G_->orders[i]);
            int64_t d = G_->orders[i] / g;
            e = mod64(e + lg[i] * (exps_[i] / g) % m_ * (m_ / d), m_);
        }
        table_[static_cast<size_t>(a)] = static_cast<int32_t>(e);
    }
    if (N == 1) table_[0] = 0;
}

DirichletCharacter DirichletCharacter::trivial(int64_t N)
{
    auto G = UnitGroup::make(N);
    return DirichletCharacter(N, std::vector<int64_t>(G->gens.size(), 0));
}

DirichletCharacter DirichletCharacter::quadratic(int64_t N)
{
    if (N % 2 == 0) throw std::invalid_argument("quadratic character: modulus must be odd");
    auto G = UnitGroup::make(N);
    std::vector<int64_t> e;
    for (size_t i = 0; i < G->gens.size(); ++i) e.push_back(kronecker(G->gens[i], N) == 1 ? 0 : G->orders[i] / 2);
    DirichletCharacter chi(N, e);
    for (int64_t a = 1; a < N; ++a) {
        if (gcd64(a, N) != 1) continue;
        int expect = kronecker(a, N);
        int got = chi.exponent_at(a) == 0 ? 1 : -1;
        if (expect != got) throw std::invalid_argument("quadratic character: Jacobi symbol is not a character here");
    }
    return chi;
}

DirichletCharacter DirichletCharacter::parse(int64_t N, const std::string& spec)
{
    if (spec.empty() || spec == "trivial") return trivial(N);
    if (spec == "quadratic") return quadratic(N);
    auto G = UnitGroup::make(N);
    std::vector<int64_t> e(G->gens.size(), 0);
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("character spec: expected g:v pairs");
        int64_t g = std::stoll(item.substr(0, colon));
        int64_t v = std::stoll(item.substr(colon + 1));
        bool found = false;
        for (size_t i = 0; i < G->gens.size(); ++i)
            if (G->gens[i] == mod64(g, N)) {
                e[i] = v;
                found = true;
            }
        if (!found) throw std::invalid_argument("character spec: " + std::to_string(g) + " is not a generator mod " + std::to_string(N));
    }
    return DirichletCharacter(N, e);
}

std::vector<DirichletCharacter> DirichletCharacter::enumerate(int64_t N)
{
    auto G = UnitGroup::make(N);
    std::vector<DirichletCharacter> out;
    size_t r = G->gens.size();
    std::vector<int64_t> k(r, 0);
    while (true) {
        out.emplace_back(N, k);
        size_t i = 0;
        while (i < r) {
            if (++k[i] < G->orders[i]) break;
            k[i] = 0;
            ++i;
        }
        if (i == r) break;
    }
    return out;
}

int64_t DirichletCharacter::exponent_at(int64_t a) const { return table_[static_cast<size_t>(mod64(a, N_))]; }

CyclotomicField::Element DirichletCharacter::value(int64_t a) const
{
    int64_t e = exponent_at(a);
    if (e < 0) return K_->zero();
    return K_->zeta_power(e);
}

int DirichletCharacter::parity() const
{
    if (N_ <= 2) return 1;
    return exponent_at(-1) == 0 ? 1 : -1;
}

int64_t DirichletCharacter::conductor() const
{
    for (int64_t d : divisors(N_)) {
        bool ok = true;
        for (int64_t a = 1 % N_; a < N_ && ok; a += d) {
            if (a % d != 1 % d) continue;
            if (gcd64(a, N_) != 1) continue;
            if (exponent_at(a) != 0) ok = false;
        }
        if (ok) return d;
    }
    return N_;
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& o) const
{
    if (N_ != o.N_) throw std::invalid_argument("character product: different moduli");
    std::vector<int64_t> e(exps_.size());
    for (size_t i = 0; i < e.size(); ++i) e[i] = exps_[i] + o.exps_[i];
    return DirichletCharacter(N_, e);
}

DirichletCharacter DirichletCharacter::pow(int64_t j) const
{
    std::vector<int64_t> e(exps_.size());
    for (size_t i = 0; i < e.size(); ++i) e[i] = mod64(exps_[i] * j, G_->orders[i]);
    return DirichletCharacter(N_, e);
}

std::string DirichletCharacter::id() const
{
    std::string s = std::to_string(N_) + "/";
    for (size_t i = 0; i < exps_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(G_->gens[i]) + ":" + std::to_string(exps_[i]);
    }
    return s;
}

std::vector<DirichletCharacter> DirichletCharacter::galois_orbit() const
{
    std::vector<DirichletCharacter> out;
    for (int64_t j = 1; j <= m_; ++j) {
        if (gcd64(j, m_) != 1) continue;
        DirichletCharacter c = pow(j);
        bool seen = false;
        for (auto& x : out)
            if (x == c) seen = true;
        if (!seen) out.push_back(c);
    }
    return out;
}

std::vector<std::vector<DirichletCharacter>> galois_orbits(const std::vector<DirichletCharacter>& chars)
{
    std::vector<std::vector<DirichletCharacter>> out;
    std::vector<bool> used(chars.size(), false);
    for (size_t i = 0; i < chars.size(); ++i) {
        if (used[i]) continue;
        auto orb = chars[i].galois_orbit();
        for (size_t j = i; j < chars.size(); ++j)
            for (auto& c : orb)
                if (c == chars[j]) used[j] = true;
        out.push_back(orb);
    }
    return out;
}

ReducedCharacter ReducedCharacter::mapped(const FieldEmbedding& emb) const
{
    std::vector<FiniteField::Elt> t(table_.size());
    for (size_t i = 0; i < t.size(); ++i) t[i] = emb(table_[i]);
    return ReducedCharacter(emb.target(), t, N_);
}

ReducedCharacter reduce_character(const DirichletCharacter& chi, uint64_t p, int prime_choice)
{
    if (chi.order() % static_cast<int64_t>(p) == 0)
        throw std::domain_error("reduce_character: p divides the order of the character");
    CyclotomicReduction red(chi.field_ptr(), p, prime_choice);
    return reduce_character_via(chi, red, chi.order());
}

ReducedCharacter reduce_character_via(const DirichletCharacter& chi, const CyclotomicReduction& red, int64_t M)
{
    if (M % chi.order() != 0) throw std::invalid_argument("reduce_character_via: order does not divide M");
    const FieldPtr& F = red.residue_field();
    FiniteField::Elt z = red.zeta_image();
    int64_t N = chi.modulus();
    std::vector<FiniteField::Elt> t(static_cast<size_t>(N), 0);
    int64_t scale = M / chi.order();
    for (int64_t a = 0; a < N; ++a) {
        int64_t e = chi.exponent_at(a);
        if (e < 0) continue;
        t[static_cast<size_t>(a)] = F->pow(z, static_cast<uint64_t>(e * scale));
    }
    return ReducedCharacter(F, t, N);
}

} // namespace katz1

#include "katz1/finite_field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "katz1/arith.hpp"
#include "katz1/fq_poly.hpp"

namespace katz1 {

namespace {

// Dense polynomials over F_p, low to high, used only to vet moduli.
using PPoly = std::vector<uint64_t>;

void ptrim(PPoly& a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PPoly pmulmod(const PPoly& a, const PPoly& b, const PPoly& f, uint64_t p)
{
    if (a.empty() || b.empty()) return {};
    PPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod64(a[i], b[j], p)) % p;
    }
    size_t n = f.size() - 1; // f monic
    for (size_t i = r.size(); i-- > n;) {
        uint64_t c = r[i];
        if (c == 0) continue;
        for (size_t j = 0; j <= n; ++j) r[i - n + j] = (r[i - n + j] + p - mulmod64(c, f[j], p)) % p;
    }
    if (r.size() > n) r.resize(n);
    ptrim(r);
    return r;
}

PPoly ppowmod(PPoly base, BigInt e, const PPoly& f, uint64_t p)
{
    PPoly r{1};
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = pmulmod(r, base, f, p);
        base = pmulmod(base, base, f, p);
        e >>= 1;
    }
    return r;
}

PPoly pgcd(PPoly a, PPoly b, uint64_t p)
{
    ptrim(a);
    ptrim(b);
    while (!b.empty()) {
        uint64_t inv = static_cast<uint64_t>(invmod64(static_cast<int64_t>(b.back()), static_cast<int64_t>(p)));
        while (a.size() >= b.size()) {
            uint64_t c = mulmod64(a.back(), inv, p);
            size_t s = a.size() - b.size();
            for (size_t j = 0; j < b.size(); ++j) a[s + j] = (a[s + j] + p - mulmod64(c, b[j], p)) % p;
            ptrim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a;
}

PPoly x_pow_q_minus_x(const PPoly& f, uint64_t p, int d)
{
    BigInt q;
    mpz_ui_pow_ui(q.get_mpz_t(), p, static_cast<unsigned long>(d));
    PPoly x{0, 1};
    if (f.size() == 2) x = pmulmod(x, PPoly{1}, f, p);
    PPoly r = ppowmod(x, q, f, p);
    r.resize(std::max<size_t>(r.size(), 2), 0);
    r[1] = (r[1] + p - 1) % p;
    ptrim(r);
    return r;
}

} // namespace

bool is_irreducible_mod_p(uint64_t p, const std::vector<uint64_t>& f)
{
    if (f.size() < 2 || f.back() != 1) return false;
    int n = static_cast<int>(f.size()) - 1;
    if (n == 1) return true;
    if (!x_pow_q_minus_x(f, p, n).empty()) return false;
    for (int64_t r : prime_divisors(n)) {
        PPoly g = pgcd(f, x_pow_q_minus_x(f, p, n / static_cast<int>(r)), p);
        if (g.size() != 1) return false;
    }
    return true;
}

std::vector<uint64_t> canonical_modulus(uint64_t p, int k)
{
    if (k < 1) throw std::invalid_argument("canonical_modulus: degree must be positive");
    std::vector<uint64_t> f(static_cast<size_t>(k) + 1, 0);
    f[k] = 1;
    if (k == 1) return f; // x
    while (true) {
        // increment the lower coefficients as a base-p counter
        size_t i = 0;
        while (i < static_cast<size_t>(k)) {
            if (++f[i] < p) break;
            f[i] = 0;
            ++i;
        }
        if (i == static_cast<size_t>(k)) throw std::logic_error("canonical_modulus: exhausted");
        if (f[0] != 0 && is_irreducible_mod_p(p, f)) return f;
    }
}

FiniteField::FiniteField(uint64_t p, std::vector<uint64_t> modulus) : p_(p), modulus_(std::move(modulus))
{
    if (!is_prime64(p)) throw std::invalid_argument("FiniteField: characteristic must be prime");
    k_ = static_cast<int>(modulus_.size()) - 1;
    if (k_ < 1) throw std::invalid_argument("FiniteField: modulus degree must be positive");
    if (k_ > 1 && !is_irreducible_mod_p(p, modulus_))
        throw std::invalid_argument("FiniteField: modulus is not irreducible");
    BigInt q;
    mpz_ui_pow_ui(q.get_mpz_t(), p, static_cast<unsigned long>(k_));
    if (q > BigInt("9223372036854775807")) throw std::invalid_argument("FiniteField: field too large");
    q_ = q.get_ui();
    if (p == 2 && k_ > 1) {
        for (int i = 0; i < k_; ++i)
            if (modulus_[i]) mod_bits_ |= (uint64_t{1} << i);
    }
    if (k_ == 1) {
        gen_ = 1;
        for (uint64_t g = 1; g < p_; ++g) {
            if (mult_order(g) == p_ - 1) {
                gen_ = g;
                break;
            }
        }
    } else {
        gen_ = p_;
    }
}

FieldPtr FiniteField::make(uint64_t p, int k)
{
    static std::mutex mu;
    static std::map<std::pair<uint64_t, int>, FieldPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<uint64_t> m = k == 1 ? std::vector<uint64_t>{0, 1} : canonical_modulus(p, k);
    auto f = std::make_shared<const FiniteField>(p, m);
    cache.emplace(key, f);
    return f;
}

FieldPtr FiniteField::with_modulus(uint64_t p, const std::vector<uint64_t>& modulus)
{
    return std::make_shared<const FiniteField>(p, modulus);
}

FiniteField::Elt FiniteField::gen() const { return gen_; }

FiniteField::Elt FiniteField::from_int(int64_t a) const
{
    return static_cast<Elt>(mod64(a, static_cast<int64_t>(p_)));
}

FiniteField::Elt FiniteField::neg(Elt a) const
{
    if (p_ == 2) return a;
    if (k_ == 1) return a == 0 ? 0 : p_ - a;
    auto c = coeffs(a);
    for (auto& x : c) x = x == 0 ? 0 : p_ - x;
    return from_coeffs(c);
}

FiniteField::Elt FiniteField::add_slow(Elt a, Elt b) const
{
    auto x = coeffs(a), y = coeffs(b);
    for (int i = 0; i < k_; ++i) x[i] = (x[i] + y[i]) % p_;
    return from_coeffs(x);
}

FiniteField::Elt FiniteField::mul_slow(Elt a, Elt b) const
{
    if (p_ == 2) {
        unsigned __int128 r = 0;
        for (int i = 0; i < k_; ++i)
            if ((b >> i) & 1) r ^= static_cast<unsigned __int128>(a) << i;
        for (int i = 2 * k_ - 2; i >= k_; --i) {
            if ((r >> i) & 1) {
                r ^= static_cast<unsigned __int128>(1) << i;
                r ^= static_cast<unsigned __int128>(mod_bits_) << (i - k_);
            }
        }
        return static_cast<Elt>(r);
    }
    auto x = coeffs(a), y = coeffs(b);
    std::vector<uint64_t> r(2 * k_ - 1, 0);
    for (int i = 0; i < k_; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < k_; ++j) r[i + j] = (r[i + j] + mulmod64(x[i], y[j], p_)) % p_;
    }
    for (int i = 2 * k_ - 2; i >= k_; --i) {
        uint64_t c = r[i];
        if (c == 0) continue;
        for (int j = 0; j <= k_; ++j)
            r[i - k_ + j] = (r[i - k_ + j] + p_ - mulmod64(c, modulus_[j], p_)) % p_;
    }
    r.resize(k_);
    return from_coeffs(r);
}

FiniteField::Elt FiniteField::pow(Elt a, uint64_t e) const
{
    Elt r = 1;
    while (e != 0) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

FiniteField::Elt FiniteField::inv(Elt a) const
{
    if (a == 0) throw std::domain_error("FiniteField::inv: zero");
    if (k_ == 1) return static_cast<Elt>(invmod64(static_cast<int64_t>(a), static_cast<int64_t>(p_)));
    return pow(a, q_ - 2);
}

FiniteField::Elt FiniteField::frobenius(Elt a, int times) const
{
    for (int i = 0; i < times; ++i) a = pow(a, p_);
    return a;
}

std::vector<uint64_t> FiniteField::coeffs(Elt a) const
{
    std::vector<uint64_t> c(k_, 0);
    if (p_ == 2) {
        for (int i = 0; i < k_; ++i) c[i] = (a >> i) & 1;
        return c;
    }
    for (int i = 0; i < k_; ++i) {
        c[i] = a % p_;
        a /= p_;
    }
    return c;
}

FiniteField::Elt FiniteField::from_coeffs(const std::vector<uint64_t>& c) const
{
    Elt a = 0;
    if (p_ == 2) {
        for (size_t i = 0; i < c.size() && i < static_cast<size_t>(k_); ++i)
            if (c[i] & 1) a |= (Elt{1} << i);
        return a;
    }
    for (size_t i = std::min(c.size(), static_cast<size_t>(k_)); i-- > 0;) a = a * p_ + c[i] % p_;
    return a;
}

std::string FiniteField::to_string(Elt a, const std::string& var) const
{
    if (k_ == 1) return std::to_string(a);
    if (a == 0) return "0";
    auto c = coeffs(a);
    std::string s;
    for (int i = k_ - 1; i >= 0; --i) {
        if (c[i] == 0) continue;
        if (!s.empty()) s += "+";
        std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
        if (c[i] != 1 || i == 0) {
            s += std::to_string(c[i]);
            if (!mono.empty()) s += "*";
        }
        s += mono;
    }
    return s;
}

std::string FiniteField::header() const
{
    std::string s = "GF(" + std::to_string(q_) + ")";
    if (k_ > 1) {
        std::string m;
        for (int i = k_; i >= 0; --i) {
            if (modulus_[i] == 0) continue;
            if (!m.empty()) m += "+";
            std::string mono = i == 0 ? "" : (i == 1 ? "w" : "w^" + std::to_string(i));
            if (modulus_[i] != 1 || i == 0) {
                m += std::to_string(modulus_[i]);
                if (!mono.empty()) m += "*";
            }
            m += mono;
        }
        s += " modulus " + m;
    }
    return s;
}

uint64_t FiniteField::mult_order(Elt a) const
{
    if (a == 0) throw std::domain_error("mult_order: zero");
    uint64_t n = q_ - 1;
    uint64_t ord = n;
    for (auto& [r, e] : factor64(static_cast<int64_t>(n))) {
        for (int i = 0; i < e; ++i) {
            if (pow(a, ord / static_cast<uint64_t>(r)) == 1)
                ord /= static_cast<uint64_t>(r);
            else
                break;
        }
    }
    return ord;
}

FiniteField::Elt FiniteField::primitive_element() const
{
    for (Elt a = 1; a < q_; ++a)
        if (mult_order(a) == q_ - 1) return a;
    throw std::logic_error("primitive_element: none found");
}

std::vector<FiniteField::Elt> embedding_roots(const FieldPtr& from, const FieldPtr& to)
{
    if (from->characteristic() != to->characteristic() || to->degree() % from->degree() != 0)
        throw std::invalid_argument("embedding: incompatible fields");
    std::vector<FiniteField::Elt> coeffs;
    for (uint64_t c : from->modulus()) coeffs.push_back(to->from_int(static_cast<int64_t>(c)));
    FqPoly f(to, coeffs);
    auto roots = poly_roots(f);
    std::sort(roots.begin(), roots.end());
    return roots;
}

FieldEmbedding::FieldEmbedding(FieldPtr from, FieldPtr to, int root_index) : from_(std::move(from)), to_(std::move(to))
{
    if (from_->degree() == 1) {
        root_ = 0;
    } else {
        auto roots = embedding_roots(from_, to_);
        if (root_index < 0 || static_cast<size_t>(root_index) >= roots.size())
            throw std::invalid_argument("FieldEmbedding: root index out of range");
        root_ = roots[root_index];
    }
    FiniteField::Elt x = 1;
    for (int i = 0; i < from_->degree(); ++i) {
        powers_.push_back(x);
        x = to_->mul(x, root_);
    }
}

FiniteField::Elt FieldEmbedding::operator()(FiniteField::Elt a) const
{
    auto c = from_->coeffs(a);
    FiniteField::Elt r = 0;
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        r = to_->add(r, to_->mul(to_->from_int(static_cast<int64_t>(c[i])), powers_[i]));
    }
    return r;
}

} // namespace katz1

#include "katz1/fq_poly.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "katz1/arith.hpp"

namespace katz1 {

FqPoly::FqPoly(FieldPtr F, std::vector<Elt> coeffs) : F_(std::move(F)), c_(std::move(coeffs)) { trim(); }

FqPoly FqPoly::x(FieldPtr F) { return FqPoly(std::move(F), {0, 1}); }

FqPoly FqPoly::constant(FieldPtr F, Elt c) { return FqPoly(std::move(F), {c}); }

FqPoly FqPoly::monomial(FieldPtr F, Elt c, size_t deg)
{
    std::vector<Elt> v(deg + 1, 0);
    v[deg] = c;
    return FqPoly(std::move(F), std::move(v));
}

void FqPoly::trim()
{
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

FqPoly FqPoly::monic() const
{
    if (c_.empty()) return *this;
    return scaled(F_->inv(c_.back()));
}

FqPoly::Elt FqPoly::eval(Elt x) const
{
    Elt r = 0;
    for (size_t i = c_.size(); i-- > 0;) r = F_->add(F_->mul(r, x), c_[i]);
    return r;
}

FqPoly FqPoly::derivative() const
{
    std::vector<Elt> d;
    for (size_t i = 1; i < c_.size(); ++i) d.push_back(F_->mul(F_->from_int(static_cast<int64_t>(i % F_->characteristic())), c_[i]));
    return FqPoly(F_, d);
}

FqPoly FqPoly::operator+(const FqPoly& o) const
{
    const FieldPtr& F = F_ ? F_ : o.F_;
    std::vector<Elt> r(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = F->add((*this)[i], o[i]);
    return FqPoly(F, r);
}

FqPoly FqPoly::operator-(const FqPoly& o) const
{
    const FieldPtr& F = F_ ? F_ : o.F_;
    std::vector<Elt> r(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = F->sub((*this)[i], o[i]);
    return FqPoly(F, r);
}

FqPoly FqPoly::operator*(const FqPoly& o) const
{
    const FieldPtr& F = F_ ? F_ : o.F_;
    if (c_.empty() || o.c_.empty()) return FqPoly(F);
    std::vector<Elt> r(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] = F->add(r[i + j], F->mul(c_[i], o.c_[j]));
    }
    return FqPoly(F, r);
}

FqPoly FqPoly::scaled(Elt s) const
{
    std::vector<Elt> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = F_->mul(c_[i], s);
    return FqPoly(F_, r);
}

bool FqPoly::operator<(const FqPoly& o) const
{
    if (degree() != o.degree()) return degree() < o.degree();
    for (size_t i = c_.size(); i-- > 0;)
        if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
}

std::string FqPoly::to_string(const std::string& var, const std::string& gen) const
{
    if (c_.empty()) return "0";
    std::string s;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        std::string coef = F_->to_string(c_[i], gen);
        bool compound = coef.find('+') != std::string::npos;
        std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
        if (!s.empty()) s += "+";
        if (i == 0) {
            s += coef;
        } else if (c_[i] == 1) {
            s += mono;
        } else {
            s += (compound ? "(" + coef + ")" : coef) + "*" + mono;
        }
    }
    return s;
}

void poly_divmod(const FqPoly& a, const FqPoly& b, FqPoly& q, FqPoly& r)
{
    if (b.is_zero()) throw std::domain_error("poly_divmod: division by zero");
    const FieldPtr& F = b.field();
    std::vector<FiniteField::Elt> rem = a.coeffs();
    int db = b.degree();
    if (a.degree() < db) {
        q = FqPoly(F);
        r = FqPoly(F, rem);
        return;
    }
    std::vector<FiniteField::Elt> quo(a.degree() - db + 1, 0);
    FiniteField::Elt linv = F->inv(b.lead());
    for (int i = a.degree(); i >= db; --i) {
        FiniteField::Elt c = rem[i];
        if (c == 0) continue;
        c = F->mul(c, linv);
        quo[i - db] = c;
        for (int j = 0; j <= db; ++j) rem[i - db + j] = F->sub(rem[i - db + j], F->mul(c, b[j]));
    }
    rem.resize(db);
    q = FqPoly(F, quo);
    r = FqPoly(F, rem);
}

FqPoly poly_mod(const FqPoly& a, const FqPoly& b)
{
    FqPoly q, r;
    poly_divmod(a, b, q, r);
    return r;
}

FqPoly poly_div(const FqPoly& a, const FqPoly& b)
{
    FqPoly q, r;
    poly_divmod(a, b, q, r);
    return q;
}

FqPoly poly_gcd(const FqPoly& a, const FqPoly& b)
{
    FqPoly x = a, y = b;
    while (!y.is_zero()) {
        FqPoly r = poly_mod(x, y);
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

FqPoly poly_lcm(const FqPoly& a, const FqPoly& b)
{
    if (a.is_zero() || b.is_zero()) return FqPoly(a.field() ? a.field() : b.field());
    return poly_div(a * b, poly_gcd(a, b)).monic();
}

FqPoly poly_powmod(const FqPoly& base, uint64_t e, const FqPoly& mod)
{
    FqPoly r = FqPoly::constant(mod.field(), 1);
    FqPoly b = poly_mod(base, mod);
    r = poly_mod(r, mod);
    while (e != 0) {
        if (e & 1) r = poly_mod(r * b, mod);
        b = poly_mod(b * b, mod);
        e >>= 1;
    }
    return r;
}

namespace {

FqPoly powmod_big(const FqPoly& base, const BigInt& e0, const FqPoly& mod)
{
    FqPoly r = poly_mod(FqPoly::constant(mod.field(), 1), mod);
    FqPoly b = poly_mod(base, mod);
    BigInt e = e0;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = poly_mod(r * b, mod);
        b = poly_mod(b * b, mod);
        e >>= 1;
    }
    return r;
}

// p-th root of a polynomial whose exponents are all multiples of p.
FqPoly pth_root(const FqPoly& f)
{
    const FieldPtr& F = f.field();
    uint64_t p = F->characteristic();
    std::vector<FiniteField::Elt> r;
    for (size_t i = 0; i * p < f.coeffs().size(); ++i) r.push_back(F->frobenius(f[i * p], F->degree() - 1));
    return FqPoly(F, r);
}

// Distinct-degree factorisation of a monic squarefree polynomial.
std::vector<std::pair<FqPoly, int>> ddf(const FqPoly& f0)
{
    const FieldPtr& F = f0.field();
    std::vector<std::pair<FqPoly, int>> out;
    FqPoly f = f0;
    FqPoly X = FqPoly::x(F);
    FqPoly h = poly_mod(X, f);
    int d = 0;
    while (f.degree() >= 2 * (d + 1)) {
        ++d;
        h = poly_powmod(h, F->order(), f);
        FqPoly g = poly_gcd(h - X, f);
        if (!g.is_one()) {
            out.emplace_back(g, d);
            f = poly_div(f, g);
            h = poly_mod(h, f);
        }
    }
    if (f.degree() > 0) out.emplace_back(f.monic(), f.degree());
    return out;
}

void edf(const FqPoly& f, int d, std::mt19937_64& rng, std::vector<FqPoly>& out)
{
    if (f.degree() == d) {
        out.push_back(f.monic());
        return;
    }
    const FieldPtr& F = f.field();
    uint64_t p = F->characteristic();
    BigInt qd;
    mpz_ui_pow_ui(qd.get_mpz_t(), F->order(), static_cast<unsigned long>(d));
    while (true) {
        std::vector<FiniteField::Elt> c(f.degree());
        for (auto& x : c) x = rng() % F->order();
        FqPoly a(F, c);
        if (a.degree() < 1) continue;
        FqPoly g;
        if (p == 2) {
            // absolute trace to F_2 of the residue ring
            int m = F->degree() * d;
            FqPoly t = poly_mod(a, f), s = t;
            for (int i = 1; i < m; ++i) {
                t = poly_mod(t * t, f);
                s = s + t;
            }
            g = poly_gcd(s, f);
        } else {
            FqPoly t = powmod_big(a, (qd - 1) / 2, f);
            g = poly_gcd(t - FqPoly::constant(F, 1), f);
        }
        if (g.degree() > 0 && g.degree() < f.degree()) {
            edf(g, d, rng, out);
            edf(poly_div(f, g), d, rng, out);
            return;
        }
    }
}

} // namespace

FqPoly poly_pow(const FqPoly& base, unsigned e)
{
    FqPoly r = FqPoly::constant(base.field(), 1);
    for (unsigned i = 0; i < e; ++i) r = r * base;
    return r;
}

std::vector<std::pair<FqPoly, int>> squarefree_factor(const FqPoly& f0)
{
    if (f0.is_zero()) throw std::invalid_argument("squarefree_factor: zero polynomial");
    std::vector<std::pair<FqPoly, int>> out;
    FqPoly f = f0.monic();
    if (f.degree() < 1) return out;
    uint64_t p = f.field()->characteristic();
    int mult = 1;
    // iterative form of the classical algorithm; recursion on p-th roots
    std::vector<std::pair<FqPoly, int>> stack{{f, 1}};
    while (!stack.empty()) {
        auto [g, scale] = stack.back();
        stack.pop_back();
        FqPoly d = g.derivative();
        if (d.is_zero()) {
            stack.emplace_back(pth_root(g), scale * static_cast<int>(p));
            continue;
        }
        FqPoly c = poly_gcd(g, d);
        FqPoly w = poly_div(g, c);
        int i = 1;
        while (!w.is_one()) {
            FqPoly y = poly_gcd(w, c);
            FqPoly z = poly_div(w, y);
            if (!z.is_one()) out.emplace_back(z.monic(), i * scale);
            ++i;
            w = y;
            c = poly_div(c, y);
        }
        if (!c.is_one()) stack.emplace_back(pth_root(c), scale * static_cast<int>(p));
    }
    (void)mult;
    // merge equal multiplicities
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<std::pair<FqPoly, int>> merged;
    for (auto& e : out) {
        if (!merged.empty() && merged.back().second == e.second)
            merged.back().first = merged.back().first * e.first;
        else
            merged.push_back(e);
    }
    return merged;
}

std::vector<std::pair<FqPoly, int>> factor_poly(const FqPoly& f, uint64_t seed)
{
    if (f.is_zero()) throw std::invalid_argument("factor_poly: zero polynomial");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<FqPoly, int>> out;
    for (auto& [g, m] : squarefree_factor(f)) {
        for (auto& [h, d] : ddf(g)) {
            std::vector<FqPoly> parts;
            edf(h, d, rng, parts);
            for (auto& part : parts) out.emplace_back(part, m);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    std::vector<std::pair<FqPoly, int>> merged;
    for (auto& e : out) {
        if (!merged.empty() && merged.back().first == e.first)
            merged.back().second += e.second;
        else
            merged.push_back(e);
    }
    return merged;
}

bool poly_is_irreducible(const FqPoly& f)
{
    if (f.degree() < 1) return false;
    auto fac = factor_poly(f);
    return fac.size() == 1 && fac[0].second == 1;
}

std::vector<FiniteField::Elt> poly_roots(const FqPoly& f, uint64_t seed)
{
    std::vector<FiniteField::Elt> roots;
    if (f.is_zero()) throw std::invalid_argument("poly_roots: zero polynomial");
    if (f.degree() < 1) return roots;
    const FieldPtr& F = f.field();
    FqPoly X = FqPoly::x(F);
    FqPoly h = poly_powmod(X, F->order(), f.monic());
    FqPoly g = poly_gcd(h - X, f);
    if (g.degree() < 1) return roots;
    std::mt19937_64 rng(seed);
    std::vector<FqPoly> lin;
    edf(g, 1, rng, lin);
    for (auto& l : lin) roots.push_back(F->neg(l[0]));
    std::sort(roots.begin(), roots.end());
    return roots;
}

FqPoly poly_map(const FqPoly& f, const FieldEmbedding& emb)
{
    std::vector<FiniteField::Elt> c;
    for (auto x : f.coeffs()) c.push_back(emb(x));
    return FqPoly(emb.target(), c);
}

} // namespace katz1

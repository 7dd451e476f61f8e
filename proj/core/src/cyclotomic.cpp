#include "katz1/cyclotomic.hpp"

#include <algorithm>
#include <stdexcept>

namespace katz1 {

std::vector<BigInt> cyclotomic_polynomial(int64_t m)
{
    if (m < 1) throw std::invalid_argument("cyclotomic_polynomial: m must be positive");
    // x^m - 1 divided by Phi_d for the proper divisors d
    std::vector<BigInt> num(static_cast<size_t>(m) + 1, BigInt(0));
    num[0] = -1;
    num[m] = 1;
    for (int64_t d : divisors(m)) {
        if (d == m) continue;
        std::vector<BigInt> den = cyclotomic_polynomial(d);
        size_t dn = den.size() - 1;
        std::vector<BigInt> q(num.size() - dn, BigInt(0));
        for (size_t i = num.size(); i-- > dn;) {
            BigInt c = num[i]; // den is monic
            q[i - dn] = c;
            if (c == 0) continue;
            for (size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
        }
        num = q;
    }
    return num;
}

CyclotomicField::CyclotomicField(int64_t m) : m_(m), phi_(cyclotomic_polynomial(m)) {}

CyclotomicField::Element CyclotomicField::reduce(std::vector<Rational> c) const
{
    size_t n = static_cast<size_t>(degree());
    for (size_t i = c.size(); i-- > n;) {
        if (c[i] == 0) continue;
        Rational f = c[i];
        for (size_t j = 0; j <= n; ++j) c[i - n + j] -= f * Rational(phi_[j]);
    }
    c.resize(n);
    return c;
}

CyclotomicField::Element CyclotomicField::from_rational(const Rational& q) const
{
    Element e = zero();
    if (!e.empty()) e[0] = q;
    return e;
}

CyclotomicField::Element CyclotomicField::zeta_power(int64_t e) const
{
    int64_t r = mod64(e, m_);
    std::vector<Rational> c(static_cast<size_t>(std::max<int64_t>(r + 1, degree())), Rational(0));
    c[r] = 1;
    return reduce(c);
}

CyclotomicField::Element CyclotomicField::add(const Element& a, const Element& b) const
{
    Element r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

CyclotomicField::Element CyclotomicField::sub(const Element& a, const Element& b) const
{
    Element r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

CyclotomicField::Element CyclotomicField::mul(const Element& a, const Element& b) const
{
    if (a.empty()) return a;
    std::vector<Rational> c(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            if (b[j] != 0) c[i + j] += a[i] * b[j];
    }
    return reduce(c);
}

bool CyclotomicField::is_zero(const Element& a) const
{
    return std::all_of(a.begin(), a.end(), [](const Rational& q) { return q == 0; });
}

std::string CyclotomicField::to_string(const Element& a, const std::string& var) const
{
    std::vector<Rational> c(a.begin(), a.end());
    std::string s;
    for (size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        Rational x = c[i];
        bool neg = x < 0;
        if (neg) x = -x;
        std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
        s += s.empty() ? (neg ? "-" : "") : (neg ? "-" : "+");
        if (i == 0)
            s += katz1::to_string(x);
        else if (x == 1)
            s += mono;
        else
            s += katz1::to_string(x) + "*" + mono;
    }
    return s.empty() ? "0" : s;
}

CyclotomicReduction::CyclotomicReduction(std::shared_ptr<const CyclotomicField> K, uint64_t p, int prime_choice)
    : K_(std::move(K)), p_(p)
{
    int64_t m = K_->conductor();
    if (m % static_cast<int64_t>(p) == 0) throw std::domain_error("reduce_cyclotomic: p divides the conductor");
    int f = static_cast<int>(multiplicative_order(static_cast<int64_t>(p % static_cast<uint64_t>(m)), m));
    F_ = FiniteField::make(p, f);
    FieldPtr Fp = FiniteField::make(p, 1);
    std::vector<FiniteField::Elt> c;
    for (const auto& a : K_->defining_polynomial()) c.push_back(Fp->from_int(static_cast<int64_t>(mod_small(a, p))));
    auto factors = factor_poly(FqPoly(Fp, c));
    nprimes_ = static_cast<int>(factors.size());
    if (prime_choice < 0 || prime_choice >= nprimes_) throw std::invalid_argument("reduce_cyclotomic: prime choice out of range");
    const FqPoly& g = factors[static_cast<size_t>(prime_choice)].first;
    std::vector<FiniteField::Elt> gc;
    for (auto x : g.coeffs()) gc.push_back(x); // prime-field digits embed as themselves
    auto roots = poly_roots(FqPoly(F_, gc));
    if (roots.empty()) throw std::logic_error("reduce_cyclotomic: no root in residue field");
    zeta_ = roots.front();
    FiniteField::Elt x = 1;
    for (int64_t i = 0; i < K_->degree(); ++i) {
        powers_.push_back(x);
        x = F_->mul(x, zeta_);
    }
}

FiniteField::Elt CyclotomicReduction::operator()(const CyclotomicField::Element& x) const
{
    FiniteField::Elt r = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        const BigInt& den = x[i].get_den();
        uint64_t d = mod_small(den, p_);
        if (d == 0) throw std::domain_error("reduce_cyclotomic: denominator divisible by p");
        uint64_t n = mod_small(x[i].get_num(), p_);
        uint64_t v = mulmod64(n, static_cast<uint64_t>(invmod64(static_cast<int64_t>(d), static_cast<int64_t>(p_))), p_);
        r = F_->add(r, F_->mul(F_->from_int(static_cast<int64_t>(v)), powers_[i]));
    }
    return r;
}

FiniteField::Elt reduce_cyclotomic(const CyclotomicField& K, const CyclotomicField::Element& x, uint64_t p,
                                   int prime_choice, FieldPtr* field_out)
{
    auto Kp = std::make_shared<const CyclotomicField>(K);
    CyclotomicReduction red(Kp, p, prime_choice);
    if (field_out) *field_out = red.residue_field();
    return red(x);
}

} // namespace katz1

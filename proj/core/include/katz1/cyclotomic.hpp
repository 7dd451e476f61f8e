#pragma once

// Cyclotomic fields Q(zeta_m) and their reduction modulo a prime above p.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "katz1/arith.hpp"
#include "katz1/finite_field.hpp"
#include "katz1/fq_poly.hpp"

namespace katz1 {

/// m-th cyclotomic polynomial over Z, coefficients low to high.
std::vector<BigInt> cyclotomic_polynomial(int64_t m);

class CyclotomicField {
public:
    explicit CyclotomicField(int64_t m);

    int64_t conductor() const { return m_; }
    int64_t degree() const { return static_cast<int64_t>(phi_.size()) - 1; }
    const std::vector<BigInt>& defining_polynomial() const { return phi_; }

    using Element = std::vector<Rational>; // coefficients of 1, zeta, ..., length degree()

    Element zero() const { return Element(static_cast<size_t>(degree())); }
    Element from_rational(const Rational& q) const;
    /// zeta^e for any integer e.
    Element zeta_power(int64_t e) const;
    Element add(const Element& a, const Element& b) const;
    Element sub(const Element& a, const Element& b) const;
    Element mul(const Element& a, const Element& b) const;
    bool is_zero(const Element& a) const;
    std::string to_string(const Element& a, const std::string& var = "z") const;

private:
    Element reduce(std::vector<Rational> c) const;
    int64_t m_;
    std::vector<BigInt> phi_;
};

/// Reduction map O_K -> O_K / P into F_{p^f}, f = order of p mod m, P the
/// prime selected by `prime_choice` among the sorted irreducible factors of
/// Phi_m mod p.
class CyclotomicReduction {
public:
    CyclotomicReduction(std::shared_ptr<const CyclotomicField> K, uint64_t p, int prime_choice = 0);

    const FieldPtr& residue_field() const { return F_; }
    FiniteField::Elt zeta_image() const { return zeta_; }
    /// Throws std::domain_error when a denominator is divisible by p.
    FiniteField::Elt operator()(const CyclotomicField::Element& x) const;
    /// Number of primes above p.
    int prime_count() const { return nprimes_; }

private:
    std::shared_ptr<const CyclotomicField> K_;
    uint64_t p_;
    FieldPtr F_;
    FiniteField::Elt zeta_ = 0;
    std::vector<FiniteField::Elt> powers_;
    int nprimes_ = 1;
};

/// Convenience: reduce x in Q(zeta_m) at a prime above p.
FiniteField::Elt reduce_cyclotomic(const CyclotomicField& K, const CyclotomicField::Element& x, uint64_t p,
                                   int prime_choice, FieldPtr* field_out = nullptr);

} // namespace katz1

#pragma once

// Univariate polynomials over a finite field with factorisation
// (squarefree, distinct-degree, equal-degree splitting).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "katz1/finite_field.hpp"

namespace katz1 {

class FqPoly {
public:
    using Elt = FiniteField::Elt;

    FqPoly() = default;
    explicit FqPoly(FieldPtr F) : F_(std::move(F)) {}
    FqPoly(FieldPtr F, std::vector<Elt> coeffs);

    static FqPoly x(FieldPtr F);
    static FqPoly constant(FieldPtr F, Elt c);
    static FqPoly monomial(FieldPtr F, Elt c, size_t deg);

    const FieldPtr& field() const { return F_; }
    /// Degree, -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    Elt operator[](size_t i) const { return i < c_.size() ? c_[i] : 0; }
    Elt lead() const { return c_.empty() ? 0 : c_.back(); }
    const std::vector<Elt>& coeffs() const { return c_; }

    FqPoly monic() const;
    Elt eval(Elt x) const;
    FqPoly derivative() const;

    FqPoly operator+(const FqPoly& o) const;
    FqPoly operator-(const FqPoly& o) const;
    FqPoly operator*(const FqPoly& o) const;
    FqPoly scaled(Elt s) const;
    bool operator==(const FqPoly& o) const { return c_ == o.c_; }
    bool operator!=(const FqPoly& o) const { return c_ != o.c_; }
    /// Order by degree, then coefficients from the top down.
    bool operator<(const FqPoly& o) const;

    std::string to_string(const std::string& var = "x", const std::string& gen = "w") const;

private:
    void trim();
    FieldPtr F_;
    std::vector<Elt> c_;
};

void poly_divmod(const FqPoly& a, const FqPoly& b, FqPoly& q, FqPoly& r);
FqPoly poly_mod(const FqPoly& a, const FqPoly& b);
FqPoly poly_div(const FqPoly& a, const FqPoly& b);
/// Monic gcd (zero if both are zero).
FqPoly poly_gcd(const FqPoly& a, const FqPoly& b);
FqPoly poly_lcm(const FqPoly& a, const FqPoly& b);
FqPoly poly_powmod(const FqPoly& base, uint64_t e, const FqPoly& mod);
FqPoly poly_pow(const FqPoly& base, unsigned e);

/// Squarefree decomposition: pairs (squarefree g_i, i) with f = lead * prod g_i^i.
std::vector<std::pair<FqPoly, int>> squarefree_factor(const FqPoly& f);

/// Full factorisation into monic irreducibles with multiplicities, sorted.
/// Throws std::invalid_argument on the zero polynomial.
std::vector<std::pair<FqPoly, int>> factor_poly(const FqPoly& f, uint64_t seed = 0x6b61747a31ULL);

bool poly_is_irreducible(const FqPoly& f);

/// Distinct roots in the coefficient field, sorted by encoding.
std::vector<FiniteField::Elt> poly_roots(const FqPoly& f, uint64_t seed = 0x6b61747a31ULL);

/// Re-express coefficients in a larger field through an embedding.
FqPoly poly_map(const FqPoly& f, const FieldEmbedding& emb);

} // namespace katz1

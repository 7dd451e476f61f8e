#pragma once

// Finite fields GF(p^k). Elements are packed into a uint64_t: for p = 2 as
// a bit-polynomial in the generator w, for odd p as the base-p integer whose
// digits are the coefficients of 1, w, w^2, ...

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace katz1 {

class FiniteField;
using FieldPtr = std::shared_ptr<const FiniteField>;

class FiniteField {
public:
    using Elt = uint64_t;

    /// Field with the canonical modulus (least monic irreducible by encoding).
    static FieldPtr make(uint64_t p, int k = 1);

    /// Field with an explicit monic modulus, coefficients low to high.
    static FieldPtr with_modulus(uint64_t p, const std::vector<uint64_t>& modulus);

    uint64_t characteristic() const { return p_; }
    int degree() const { return k_; }
    uint64_t order() const { return q_; }
    bool is_prime_field() const { return k_ == 1; }
    bool is_f2() const { return p_ == 2 && k_ == 1; }
    const std::vector<uint64_t>& modulus() const { return modulus_; }

    Elt zero() const { return 0; }
    Elt one() const { return 1; }
    /// The generator w (for prime fields: the least primitive root).
    Elt gen() const;

    Elt from_int(int64_t a) const;
    Elt add(Elt a, Elt b) const
    {
        if (p_ == 2) return a ^ b;
        if (k_ == 1) {
            Elt s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        return add_slow(a, b);
    }
    Elt sub(Elt a, Elt b) const
    {
        if (p_ == 2) return a ^ b;
        if (k_ == 1) return a >= b ? a - b : a + p_ - b;
        return add_slow(a, neg(b));
    }
    Elt neg(Elt a) const;
    Elt mul(Elt a, Elt b) const
    {
        if (k_ == 1) {
            if (p_ == 2) return a & b;
            return static_cast<Elt>((static_cast<unsigned __int128>(a) * b) % p_);
        }
        return mul_slow(a, b);
    }
    Elt inv(Elt a) const;
    Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }
    Elt pow(Elt a, uint64_t e) const;
    /// x -> x^p.
    Elt frobenius(Elt a, int times = 1) const;

    /// Coefficients (over F_p) of the element as a polynomial in w.
    std::vector<uint64_t> coeffs(Elt a) const;
    Elt from_coeffs(const std::vector<uint64_t>& c) const;

    /// Polynomial string in the generator, e.g. "w^2+w+1"; prime-field elements as integers.
    std::string to_string(Elt a, const std::string& var = "w") const;
    /// "GF(8) modulus w^3+w+1".
    std::string header() const;

    /// Multiplicative order of a nonzero element.
    uint64_t mult_order(Elt a) const;
    Elt primitive_element() const;

    bool same_as(const FiniteField& o) const { return p_ == o.p_ && modulus_ == o.modulus_; }

    FiniteField(uint64_t p, std::vector<uint64_t> modulus);

private:
    Elt add_slow(Elt a, Elt b) const;
    Elt mul_slow(Elt a, Elt b) const;

    uint64_t p_;
    int k_;
    uint64_t q_;
    std::vector<uint64_t> modulus_;
    uint64_t mod_bits_ = 0; // p = 2: modulus as a bit-polynomial without the leading term
    Elt gen_ = 0;
};

/// Is the monic polynomial (coefficients low to high, over F_p) irreducible?
bool is_irreducible_mod_p(uint64_t p, const std::vector<uint64_t>& f);

/// The canonical modulus of GF(p^k): least irreducible monic polynomial by encoding.
std::vector<uint64_t> canonical_modulus(uint64_t p, int k);

/// Embedding of a smaller field into a larger one: images of the small field's
/// generator powers. Chooses the least-encoded root of the small modulus.
class FieldEmbedding {
public:
    FieldEmbedding(FieldPtr from, FieldPtr to, int root_index = 0);
    FiniteField::Elt operator()(FiniteField::Elt a) const;
    const FieldPtr& source() const { return from_; }
    const FieldPtr& target() const { return to_; }
    FiniteField::Elt generator_image() const { return root_; }

private:
    FieldPtr from_, to_;
    FiniteField::Elt root_;
    std::vector<FiniteField::Elt> powers_;
};

/// All roots in `to` of the modulus of `from` (sorted by encoding).
std::vector<FiniteField::Elt> embedding_roots(const FieldPtr& from, const FieldPtr& to);

} // namespace katz1

#pragma once

// Dirichlet characters modulo N with values in Q(zeta_m), keyed by their
// exponents on a fixed CRT generating set of (Z/N)^*.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "katz1/cyclotomic.hpp"
#include "katz1/finite_field.hpp"

namespace katz1 {

/// (Z/N)^* as a product of cyclic groups <g_i> of order n_i.
struct UnitGroup {
    int64_t N = 1;
    std::vector<int64_t> gens;
    std::vector<int64_t> orders;
    int64_t exponent = 1; // lcm of the orders

    static std::shared_ptr<const UnitGroup> make(int64_t N);
    /// Discrete logarithm table: for each unit a, its exponent vector (flattened).
    std::vector<std::vector<int32_t>> logs;
};

class DirichletCharacter {
public:
    DirichletCharacter() = default;
    /// exps[i] in [0, n_i): chi(g_i) = exp(2 pi i exps[i] / n_i).
    DirichletCharacter(int64_t N, std::vector<int64_t> exps);

    static DirichletCharacter trivial(int64_t N);
    /// The Jacobi symbol (./N) for odd N.
    static DirichletCharacter quadratic(int64_t N);
    /// "trivial", "quadratic", or "g1:v1,g2:v2".
    static DirichletCharacter parse(int64_t N, const std::string& spec);
    /// All phi(N) characters, trivial first.
    static std::vector<DirichletCharacter> enumerate(int64_t N);

    int64_t modulus() const { return N_; }
    int64_t order() const { return m_; }
    const std::vector<int64_t>& exponents() const { return exps_; }
    const UnitGroup& group() const { return *G_; }

    /// e with chi(a) = zeta_m^e, or -1 when gcd(a, N) > 1.
    int64_t exponent_at(int64_t a) const;
    CyclotomicField::Element value(int64_t a) const;
    const CyclotomicField& field() const { return *K_; }
    std::shared_ptr<const CyclotomicField> field_ptr() const { return K_; }

    /// chi(-1) as +1 / -1.
    int parity() const;
    bool is_even() const { return parity() == 1; }
    bool is_trivial() const { return m_ == 1; }
    bool is_real() const { return m_ <= 2; }
    int64_t conductor() const;

    DirichletCharacter operator*(const DirichletCharacter& o) const;
    DirichletCharacter pow(int64_t j) const;
    bool operator==(const DirichletCharacter& o) const { return N_ == o.N_ && exps_ == o.exps_; }
    bool operator!=(const DirichletCharacter& o) const { return !(*this == o); }

    /// Canonical identifier "N/g1:v1,g2:v2" (empty list for N <= 2).
    std::string id() const;
    /// Galois conjugates chi^j, gcd(j, m) = 1, without repetition.
    std::vector<DirichletCharacter> galois_orbit() const;

private:
    int64_t N_ = 1;
    int64_t m_ = 1;
    std::vector<int64_t> exps_;
    std::shared_ptr<const UnitGroup> G_;
    std::shared_ptr<const CyclotomicField> K_;
    std::vector<int32_t> table_; // exponent per residue, -1 for non-units
};

/// Partition into Galois orbits (each orbit listed once, in enumeration order).
std::vector<std::vector<DirichletCharacter>> galois_orbits(const std::vector<DirichletCharacter>& chars);

/// A character with values in a finite field.
class ReducedCharacter {
public:
    ReducedCharacter() = default;
    ReducedCharacter(FieldPtr F, std::vector<FiniteField::Elt> table, int64_t N) : F_(std::move(F)), table_(std::move(table)), N_(N) {}
    const FieldPtr& field() const { return F_; }
    FiniteField::Elt operator()(int64_t a) const { return table_[static_cast<size_t>(mod64(a, N_))]; }
    int64_t modulus() const { return N_; }
    ReducedCharacter mapped(const FieldEmbedding& emb) const;

private:
    FieldPtr F_;
    std::vector<FiniteField::Elt> table_;
    int64_t N_ = 1;
};

/// Reduction at the prime above p selected by prime_choice. Throws
/// std::domain_error when p divides the order of chi.
ReducedCharacter reduce_character(const DirichletCharacter& chi, uint64_t p, int prime_choice = 0);

/// Reduction through a fixed reduction of Q(zeta_M), M a multiple of the order.
ReducedCharacter reduce_character_via(const DirichletCharacter& chi, const CyclotomicReduction& red, int64_t M);

} // namespace katz1

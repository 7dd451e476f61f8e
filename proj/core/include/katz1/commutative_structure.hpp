#pragma once

// Commutative algebras of matrices over a finite field: generated algebra,
// splitting into local factors, residue fields, UPO, Gorenstein test and the
// eigenvalue systems of the maximal ideals.

#include <cstdint>
#include <string>
#include <vector>

#include "katz1/finite_field.hpp"
#include "katz1/fq_matrix.hpp"

namespace katz1 {

/// Basis of the unital algebra generated by pairwise commuting square
/// matrices. Throws std::invalid_argument on non-commuting input.
std::vector<FqMatrix> generated_algebra(const std::vector<FqMatrix>& ops);

/// Coordinates of a matrix in a basis of matrices; false if outside the span.
bool matrix_coordinates(const std::vector<FqMatrix>& basis, const FqMatrix& x, FqVector& coords);

struct LocalFactor {
    FieldPtr base;
    /// Residue field as an absolute field GF(p^(f d)), d = degree over the base.
    FieldPtr residue_field;
    int residue_degree = 1;
    size_t local_dimension = 0; // of the local algebra, over the base
    size_t module_dimension = 0;
    int upo = 1;
    bool gorenstein = true;
    /// One per maximal ideal over the residue field, Frobenius conjugates.
    std::vector<std::vector<FiniteField::Elt>> systems;
    /// Dimension over the residue field of the common eigenspace of the first system.
    size_t eigenspace_dimension = 0;
    FqMatrix eigenspace; // that eigenspace, columns in module coordinates over the residue field
    FqMatrix basis;      // primary subspace, columns in module coordinates
    FqMatrix idempotent; // in module coordinates
    /// Generators restricted to the primary subspace.
    std::vector<FqMatrix> restricted;

    size_t num_max_ideals() const { return systems.size(); }
};

struct Decomposition {
    FieldPtr base;
    size_t module_dimension = 0;
    size_t algebra_dimension = 0;
    std::vector<LocalFactor> factors;
    uint64_t seed = 0;
};

/// Splits the module under the commuting generators into primary pieces,
/// one per local factor of the algebra they generate. Random elements are
/// drawn from a generator seeded with `seed` when no generator separates.
Decomposition local_decomposition(const std::vector<FqMatrix>& generators, uint64_t seed = 0x6c6f63616cULL);

/// Least n with m^n = 0 for the maximal ideal of a local algebra.
int upo(const std::vector<FqMatrix>& max_ideal);
/// Socle dimension over the base field.
size_t socle_dimension(const std::vector<FqMatrix>& local_algebra, const std::vector<FqMatrix>& max_ideal);

/// Elements written as powers of the generator w ("0", "1", "w", "w^4");
/// falls back to the polynomial form when w is not primitive.
std::string power_string(const FiniteField& F, FiniteField::Elt a);

/// Session layout for the list of factors. `eigenvalue_sets` optionally gives
/// one line of eigenvalues per factor.
std::string format_factors(const std::vector<LocalFactor>& factors, const std::vector<std::string>& eigenvalue_sets = {});

/// Is `a` a Frobenius conjugate of `b` (systems over the same residue field)?
bool conjugate_systems(const FiniteField& K, const std::vector<FiniteField::Elt>& a, const std::vector<FiniteField::Elt>& b);

} // namespace katz1

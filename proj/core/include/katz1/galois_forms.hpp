#pragma once

// Class groups of quadratic orders through binary quadratic forms, dihedral
// eigensystem predictions mod p and a heuristic image tag for the systems
// of a weight-one module.

#include <cstdint>
#include <string>
#include <vector>

#include "katz1/weight_one.hpp"

namespace katz1 {

struct QuadForm {
    int64_t a = 1, b = 0, c = 0;
    int64_t discriminant() const { return b * b - 4 * a * c; }
    bool operator==(const QuadForm& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const QuadForm& o) const
    {
        return a != o.a ? a < o.a : b != o.b ? b < o.b : c < o.c;
    }
    std::string to_string() const;
};

/// Dirichlet composition of primitive forms of the same discriminant (not reduced).
QuadForm compose(const QuadForm& f, const QuadForm& g);
/// Reduced representative: for D < 0 the unique reduced form, for D > 0 some
/// reduced form of the cycle.
QuadForm reduce_form(const QuadForm& f);
bool is_reduced(const QuadForm& f);
/// D = 0, 1 mod 4 and not a square.
bool is_discriminant(int64_t D);
bool is_fundamental_discriminant(int64_t D);

/// Norm of the fundamental unit of the order of discriminant D > 0, from the
/// parity of the continued-fraction period of (b + sqrt D)/2.
int fundamental_unit_norm(int64_t D);

struct ClassGroupReport {
    int64_t D = 0;
    /// Reduced forms, one per proper (narrow) class; for D > 0 the least
    /// member of each cycle.
    std::vector<QuadForm> forms;
    /// table[i][j] = index of forms[i] * forms[j].
    std::vector<std::vector<size_t>> table;
    size_t identity = 0;
    size_t narrow_h = 0;
    /// Wide class number (equal to narrow_h for D < 0).
    size_t h = 0;
    int unit_norm = 0; // D > 0 only
    size_t u = 1;      // odd part of h
    /// Invariant factors of the wide class group, each dividing the next.
    std::vector<size_t> structure;

    size_t index_of(const QuadForm& f) const;
    size_t order_of(size_t i) const;
    size_t power(size_t i, int64_t e) const;
    /// Class of a prime form above the split prime l (kronecker(D, l) = 1).
    size_t prime_class(int64_t l) const;
};

/// Throws std::invalid_argument unless D is a discriminant.
ClassGroupReport class_group(int64_t D);

/// D = N for N = 1 mod 4, else -N; 0 when that is not a discriminant.
int64_t level_discriminant(int64_t N);

struct DihedralPrediction {
    int64_t order = 1;          // of the class group character
    std::vector<int64_t> chi;   // exponents on the generators of the class group, modulo u
    EigenSystem system;          // a_l for primes l not dividing pD
    size_t orbit = 0;
    size_t orbit_size = 1;
};

struct DihedralPredictions {
    int64_t N = 0;
    uint64_t p = 2;
    ClassGroupReport group;
    std::vector<DihedralPrediction> systems;
    size_t num_orbits = 0;
};

/// One system per odd-order class group character up to inversion, with
/// a_l = chi(l) + chi(l)^-1 for primes l <= max_prime, l not dividing pD.
DihedralPredictions dihedral_predictions(int64_t N, uint64_t p, int64_t max_prime = 200);

enum class ImageTag { dihedral, big_image_candidate, eisenstein, unexplained };

struct ClassifiedOrbit {
    size_t orbit = 0;
    int residue_degree = 1;
    size_t size = 1;
    ImageTag tag = ImageTag::unexplained;
    /// "dihedral (order 9)", "SL2(F8) candidate", "A5 = SL2(F4) candidate", ...
    std::string label;
    int64_t character_order = 0;
    /// Degree over F_p of the field generated by the compared a_l.
    int trace_field_degree = 1;
};

struct Classification {
    int64_t compared_up_to = 0;
    std::vector<ClassifiedOrbit> orbits;
    /// Predictions matched by some computed orbit, by prediction index.
    std::vector<bool> prediction_matched;
    bool complete() const;
    size_t count(ImageTag t) const;
    /// Residue degrees k with an orbit tagged big-image candidate.
    std::vector<int> big_image_degrees() const;
};

/// Matches orbits of W against predictions on primes l <= min(cutoff, 200),
/// l not dividing pN. The big-image tag is a heuristic, not a proof.
Classification classify(const WeightOneModule& W, const DihedralPredictions& pred);

std::string to_string(ImageTag t);

} // namespace katz1

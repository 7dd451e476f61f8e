#pragma once

// Mod-p weight-one Katz forms through the weight-p Hecke algebra: with
// R = span{t_n : p does not divide n, n <= B}, the dual of H = A/R is the
// space L of functionals vanishing on R, and Phi(f) = f(t_p .) carries L to
// the weight-one forms L' inside the dual of A.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "katz1/commutative_structure.hpp"
#include "katz1/dirichlet.hpp"
#include "katz1/hecke_algebra.hpp"

namespace katz1 {

/// floor((p+2) N prod(1 + 1/l) / 12), or floor((p+2) N^2 prod(1 - 1/l^2) / 24)
/// in full mode. Requires N >= 5 and gcd(N, p) = 1.
int64_t weight1_cutoff(int64_t N, uint64_t p, BoundMode mode = BoundMode::fixed_character);

struct EigenSystem {
    FieldPtr field;              // GF(p^d)
    std::vector<int64_t> primes; // l <= cutoff
    std::vector<FiniteField::Elt> a; // a_l; at l = p the eigenvalue of T_p'
    FiniteField::Elt a_p = 0;
    size_t orbit = 0;
    size_t orbit_size = 1;
    std::string tag;

    FiniteField::Elt at(int64_t l) const;
    int degree() const { return field->degree(); }
};

/// Systems found on some module, grouped in Frobenius orbits (one entry each).
struct EigenOrbit {
    EigenSystem rep;
    size_t size = 1;
    size_t eigenspace_dimension = 0;
    FiniteField::Elt trace_tp = 0; // trace of T_p on the eigenspace, when computed
    bool eisenstein = false;
};

/// Does the system agree with chi1(l) + l^(k-1) chi2(l) at the given primes
/// (l not dividing pN) for some pair of characters of (Z/N)^* with values in
/// a finite field?
bool is_eisenstein(const EigenSystem& s, int64_t N, uint64_t p, int k);

/// Eigenvalue systems of the commuting operators ops[i] (acting on the same
/// module) labelled by primes[i].
std::vector<EigenOrbit> eigen_orbits(const std::vector<FqMatrix>& ops, const std::vector<int64_t>& primes,
                                     uint64_t seed = 0x6569676eULL);

/// Orbit sets equal up to Frobenius conjugation and field identification.
bool same_orbits(const std::vector<EigenOrbit>& a, const std::vector<EigenOrbit>& b);
/// Is b a conjugate of a on the primes they share (optionally ignoring one prime)?
bool systems_match(const EigenSystem& a, const EigenSystem& b, int64_t skip_prime = 0);

class WeightOneModule {
public:
    struct Options {
        BoundMode mode = BoundMode::fixed_character;
        int prime_choice = 0;
        std::string cache_dir; // empty: no cache
        int64_t algebra_bound = 0; // lower bound for the algebra bound, e.g. for long q-expansions
        uint64_t seed = 0x6b61747a31ULL;
    };

    static std::shared_ptr<const WeightOneModule> build(int64_t N, uint64_t p, const DirichletCharacter& eps, const Options& opt);
    static std::shared_ptr<const WeightOneModule> build(int64_t N, uint64_t p, const DirichletCharacter& eps)
    {
        return build(N, p, eps, Options{});
    }
    static std::shared_ptr<const WeightOneModule> from_algebra(std::shared_ptr<const ModPHeckeAlgebra> A, int64_t cutoff,
                                                               uint64_t seed = 0x6b61747a31ULL);

    int64_t level() const { return N_; }
    uint64_t p() const { return p_; }
    const std::string& character_id() const { return chi_id_; }
    int64_t cutoff() const { return cutoff_; }
    const std::shared_ptr<const ModPHeckeAlgebra>& algebra() const { return A_; }
    const FieldPtr& field() const { return F_; }
    size_t dim() const { return Yp_.cols(); }
    /// p = 2, trivial character and some prime q = 3 mod 4 divides N: H is all of weight one.
    bool exact() const { return exact_; }
    bool from_cache() const { return from_cache_; }
    /// Non-empty for the structurally zero cases (parity, zero space).
    const std::string& note() const { return note_; }
    const std::vector<std::string>& diagnostics() const { return diag_; }

    /// Columns: bases of R (in A), L and L' (in the dual of A).
    const FqMatrix& R() const { return Rb_; }
    const FqMatrix& L() const { return Y_; }
    const FqMatrix& Lprime() const { return Yp_; }

    /// Weight-one T_n on L' (coordinates in the basis of L').
    FqMatrix op(int64_t n) const;
    /// Generators T_l, l prime <= cutoff, T_p replaced by T_p'.
    const std::vector<FqMatrix>& generators() const { return gens_; }
    const std::vector<int64_t>& generator_primes() const { return gen_primes_; }

    /// Frobenius F computed from q-expansions, on coordinates of L' (columns in the dual of A).
    FqMatrix frobenius() const;
    /// F Phi = id on L and Phi F = id on L'.
    bool transport_consistent() const;
    /// R t_l inside R for primes l != p up to the given bound.
    bool r_stable(int64_t upto) const;

    const Decomposition& decomposition() const { return dec_; }
    /// One system per maximal ideal, orbit ids index the local factors.
    const std::vector<EigenSystem>& eigensystems() const { return systems_; }

    /// a_1..a_nmax of the form with coordinates v (over K) in the basis of L'.
    /// Throws std::invalid_argument unless v is a common eigenvector.
    std::vector<FiniteField::Elt> qexpansion(const FqVector& v, const FieldPtr& K, int64_t nmax) const;
    /// A normalized eigenvector for the first system of local factor i.
    FqVector eigenvector(size_t factor, FieldPtr& K) const;

    /// Session-style summary ("Dimension = ...", "Bound = ...", local factors).
    std::string session_text(const std::string& class_number_line) const;

private:
    WeightOneModule() = default;
    void construct();
    FqMatrix dual_op(int64_t l) const; // on L' coordinates

    int64_t N_ = 1;
    uint64_t p_ = 2;
    std::string chi_id_;
    int64_t cutoff_ = 0;
    std::shared_ptr<const ModPHeckeAlgebra> A_;
    FieldPtr F_;
    bool exact_ = false;
    bool from_cache_ = false;
    std::string note_;
    std::vector<std::string> diag_;
    uint64_t seed_ = 0;

    FqMatrix Rb_, Y_, Yp_;
    FiniteField::Elt eps_p_ = 0;
    std::vector<FqMatrix> gens_;
    std::vector<int64_t> gen_primes_;
    std::map<int64_t, FqMatrix> prime_ops_;
    Decomposition dec_;
    std::vector<EigenSystem> systems_;
};

/// Distinct eigenvalues of the first system of a factor: prime fields in
/// numeric order, otherwise by exponent of w with 0 last.
std::vector<std::string> eigenvalue_set(const LocalFactor& f);

/// One entry per common eigensystem of {T_l : l != p, l <= cutoff} on the
/// dual of A.
struct EigenspaceCheck {
    EigenOrbit orbit;
    bool in_weight_one = false;
    bool trace_matches = false;
    bool ok = false;
};
struct EigenspaceReport {
    std::vector<EigenspaceCheck> entries;
    bool lower_bound_caveat = false;
    bool ok = true;
    std::vector<std::string> failures;
};
EigenspaceReport eigenspace_check(const WeightOneModule& W);

struct CrossValidation {
    int64_t level = 0;
    std::vector<EigenOrbit> direct, reduced; // non-Eisenstein orbits
    size_t direct_eisenstein = 0, reduced_eisenstein = 0;
    bool equal = false;
};
/// Direct F_2 symbols against the reduction, primes up to the weight-one cutoff.
CrossValidation crossvalidate_mod2(int64_t N);

} // namespace katz1

#pragma once

// The Hecke algebra generated by T_n, n <= bound: as a Z-lattice of integer
// matrices (small levels) and as the F-algebra A spanned by the reductions t_n.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "katz1/dirichlet.hpp"
#include "katz1/fq_matrix.hpp"
#include "katz1/int_matrix.hpp"
#include "katz1/modular_symbols.hpp"

namespace katz1 {

enum class BoundMode { fixed_character, full };

/// floor(k N prod(1 + 1/l) / 12), times phi(N)/2 in full mode.
int64_t generation_bound(int64_t N, int k, BoundMode mode = BoundMode::fixed_character);

class IntegralHeckeAlgebra {
public:
    /// Z-span of zeta^j T_n, n <= bound, vectorized row by row.
    static IntegralHeckeAlgebra generate(const ModularSymbolSpace& S, int64_t bound);

    int64_t level() const { return N_; }
    int weight() const { return k_; }
    const std::string& character_id() const { return chi_id_; }
    int64_t bound() const { return bound_; }
    /// Size of the operator matrices.
    size_t matrix_size() const { return n_; }
    /// Rank over Z[eps] and over Z.
    size_t rank() const { return deg_ ? zrank_ / deg_ : 0; }
    size_t z_rank() const { return zrank_; }
    size_t scalar_degree() const { return deg_; }

    /// Hermite basis (rows are vectorized matrices) and its pivots.
    const IntMatrix& hnf_basis() const { return H_; }
    const std::vector<size_t>& pivots() const { return piv_; }
    /// Coordinates of T_n in the Hermite basis. For n beyond the bound the
    /// coordinates come from products of stored elements.
    std::vector<BigInt> express(int64_t n) const;
    IntMatrix element(const std::vector<BigInt>& coords) const;
    IntMatrix basis_matrix(size_t i) const;
    const IntMatrix& zeta() const { return Z_; }

    /// Products of sampled generators lie in the lattice.
    bool closed_under_products(size_t samples, uint64_t seed) const;
    /// The lattice spanned by the expression table equals the Hermite lattice.
    bool table_spans_lattice() const;

    std::string to_cache_text() const;
    /// Throws std::runtime_error on malformed or inconsistent text.
    static IntegralHeckeAlgebra from_cache_text(const std::string& text);

    bool operator==(const IntegralHeckeAlgebra& o) const
    {
        return N_ == o.N_ && k_ == o.k_ && chi_id_ == o.chi_id_ && bound_ == o.bound_ && H_ == o.H_ && table_ == o.table_ &&
               Z_ == o.Z_;
    }

private:
    IntMatrix vector_to_matrix(const std::vector<BigInt>& v) const;
    std::vector<BigInt> matrix_coords(const IntMatrix& M) const;

    int64_t N_ = 1;
    int k_ = 2;
    std::string chi_id_;
    int64_t bound_ = 0;
    size_t n_ = 0;
    size_t deg_ = 1;
    size_t zrank_ = 0;
    IntMatrix H_;
    std::vector<size_t> piv_;
    IntMatrix Z_;
    std::vector<int64_t> eps_exp_; // exponent of eps(a) in the order of zeta, -1 off units
    std::map<int64_t, std::vector<BigInt>> table_;
};

/// The F-algebra spanned by the images t_n. Elements are coordinate vectors
/// in the basis t_{g_1} = t_1, t_{g_2}, ... of Hecke operators chosen greedily.
class ModPHeckeAlgebra {
public:
    /// Reduction of the operators of S at the prime above p selected by
    /// prime_choice; for nontrivial eps the space is cut down to the
    /// eigenspace of zeta for its image z.
    static std::shared_ptr<const ModPHeckeAlgebra> build(std::shared_ptr<const ModularSymbolSpace> S, uint64_t p,
                                                         int64_t bound, int prime_choice = 0);
    /// Same algebra from the reduced Hermite basis.
    static std::shared_ptr<const ModPHeckeAlgebra> reduce(const IntegralHeckeAlgebra& T,
                                                          std::shared_ptr<const ModularSymbolSpace> S, uint64_t p,
                                                          int prime_choice = 0);

    const FieldPtr& field() const { return F_; }
    uint64_t p() const { return p_; }
    int64_t level() const { return N_; }
    int weight() const { return k_; }
    const std::string& character_id() const { return chi_id_; }
    int prime_choice() const { return prime_choice_; }
    int64_t bound() const { return bound_; }
    size_t dim() const { return gens_.size(); }
    /// Rank of the integral algebra over Z[eps] (dimension formula).
    size_t expected_rank() const { return rank_; }
    bool faithful() const { return dim() == rank_; }
    /// Size of the operator matrices, 0 when loaded from a cache.
    size_t module_dimension() const { return D_; }
    bool has_module() const { return D_ > 0; }
    /// Indices n of the basis elements t_n.
    const std::vector<int64_t>& basis_indices() const { return gens_; }

    FiniteField::Elt eps(int64_t a) const;

    /// Coordinates of t_n.
    FqVector express(int64_t n) const;
    FqVector identity() const;
    /// Multiplication by t_l, l prime <= bound, on coordinates (columns).
    const FqMatrix& mult_prime(int64_t l) const;
    /// Multiplication by t_n on coordinates.
    FqMatrix mult(int64_t n) const;
    /// Multiplication by an arbitrary element.
    FqMatrix mult_element(const FqVector& x) const;
    FqVector multiply(const FqVector& a, const FqVector& b) const;
    /// Coordinates of t_n for all n <= bound as columns 0..bound-1.
    const FqMatrix& table() const { return table_; }

    /// t_n acting on the module (requires the module).
    FqMatrix operator_matrix(int64_t n) const;

    /// Exact identity t_{pn} = t_p t_n for all n <= bound / p.
    bool frobenius_recursion_holds() const;
    bool commutative() const;

    std::string to_cache_text(const std::string& key) const;
    static std::shared_ptr<const ModPHeckeAlgebra> from_cache_text(const std::string& text, const std::string& key);

private:
    ModPHeckeAlgebra() = default;
    void generate();
    FqVector coords_of_vector(const FqMatrix& v, FqMatrix* residual) const;
    FqMatrix coords_of_product(const FqMatrix& A) const; // multiplication by A on coordinates
    FqMatrix mult_prime_power(int64_t l, int e) const;
    void setup_from_space(const ModularSymbolSpace& S, int prime_choice);
    FqMatrix restrict_op(const FqMatrix& T) const;

    FieldPtr F_;
    uint64_t p_ = 2;
    int64_t N_ = 1;
    int k_ = 2;
    std::string chi_id_;
    int prime_choice_ = 0;
    int64_t bound_ = 0;
    size_t rank_ = 0;
    size_t D_ = 0;
    std::vector<FiniteField::Elt> eps_table_; // eps(a) mod the chosen prime
    std::vector<int64_t> gens_;
    FqMatrix table_;
    std::map<int64_t, FqMatrix> mult_;
    std::map<int64_t, FqMatrix> prime_ops_; // t_l on the module

    // restriction to the zeta-eigenspace
    bool restricted_ = false;
    FieldPtr base_;
    FqMatrix V_;

    // reduced echelon form of the vectorized span, pivot entries of the
    // basis matrices, rows expressed in the t_{g_i}
    std::vector<FqMatrix> rows_;
    std::vector<size_t> pivots_;
    std::vector<FqVector> E_;
    std::vector<FqMatrix> gen_t_; // transposed basis matrices
};

/// Persistent store keyed by (level, weight, character id, bound, p, prime choice).
class HeckeCache {
public:
    explicit HeckeCache(std::string dir) : dir_(std::move(dir)) {}
    static std::string key(int64_t N, int k, const std::string& chi_id, int64_t bound, uint64_t p, int prime_choice);
    std::string path_for(const std::string& key) const;

    /// Written to a temporary file and renamed into place.
    void store(const ModPHeckeAlgebra& A) const;
    /// nullptr on a miss, a version mismatch, a bad checksum or a failed check.
    std::shared_ptr<const ModPHeckeAlgebra> load(int64_t N, int k, const std::string& chi_id, int64_t bound, uint64_t p,
                                                 int prime_choice) const;

    void store_integral(const IntegralHeckeAlgebra& T) const;
    bool load_integral(int64_t N, int k, const std::string& chi_id, int64_t bound, IntegralHeckeAlgebra& out) const;

private:
    std::string dir_;
};

} // namespace katz1

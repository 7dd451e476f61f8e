#pragma once

// Weight-k Manin symbols for Gamma_0(N) twisted by a Dirichlet character.
// Coefficients in Q(eps) are handled by restriction of scalars: every space
// is a Q-vector space whose generators are zeta^j times Manin symbols.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "katz1/dirichlet.hpp"
#include "katz1/fq_matrix.hpp"
#include "katz1/int_matrix.hpp"

namespace katz1 {

/// [a, b, c, d]
using Mat2 = std::array<int64_t, 4>;

class P1List {
public:
    explicit P1List(int64_t N);

    struct Norm {
        int32_t index;  // -1 when gcd(u, v, N) > 1
        int32_t scalar; // unit l with (u, v) = l * point(index)
    };

    int64_t level() const { return N_; }
    size_t size() const { return pts_.size(); }
    std::pair<int64_t, int64_t> point(size_t i) const { return pts_[i]; }
    Norm normalize(int64_t u, int64_t v) const
    {
        u = mod64(u, N_);
        v = mod64(v, N_);
        int64_t ui = inv_[static_cast<size_t>(u)];
        if (ui > 0) {
            // (u, v) = u * (1, v / u)
            Norm n = table_[static_cast<size_t>(N_ + v * ui % N_)];
            return Norm{n.index, static_cast<int32_t>(u * n.scalar % N_)};
        }
        return table_[static_cast<size_t>(u * N_ + v)];
    }

private:
    int64_t N_;
    std::vector<std::pair<int64_t, int64_t>> pts_;
    std::vector<Norm> table_;
    std::vector<int64_t> inv_; // inverse of each unit, 0 otherwise
};

/// Cremona's Heilbronn matrices of determinant l (l prime).
std::vector<Mat2> heilbronn_matrices(int64_t l);
/// Merel's set {a > b >= 0, d > c >= 0, ad - bc = n}.
std::vector<Mat2> heilbronn_merel(int64_t n);

class ModularSymbolSpace {
public:
    static std::shared_ptr<const ModularSymbolSpace> build(int64_t N, int k, const DirichletCharacter& eps);

    int64_t level() const { return N_; }
    int weight() const { return k_; }
    const DirichletCharacter& character() const { return eps_; }
    /// [Q(eps) : Q]
    size_t scalar_degree() const { return deg_; }
    /// Empty unless the space was declared zero (parity mismatch).
    const std::string& note() const { return note_; }
    const P1List& p1() const { return *p1_; }

    /// Q-dimensions.
    size_t full_rank() const { return nfree_; }
    size_t cuspidal_rank() const { return K_.cols(); }
    size_t boundary_rank() const { return ncusp_ * deg_; }
    size_t num_cusp_classes() const { return ncusp_; }

    /// True when the Manin images span exactly the standard lattice on the
    /// free generators.
    bool lattice_is_standard() const { return standard_; }
    /// Basis of the Manin-image lattice in free-generator coordinates (columns).
    const RatMatrix& lattice_basis() const { return lattice_; }
    /// Cuspidal lattice basis K in lattice coordinates, P with P K = 1.
    const IntMatrix& cuspidal_basis() const { return K_; }
    const IntMatrix& cuspidal_projection() const { return P_; }
    /// Boundary map on lattice coordinates.
    const IntMatrix& boundary_matrix() const { return bd_lattice_; }
    /// Boundary of every generator agrees with the boundary of its expression
    /// in free generators.
    bool boundary_consistent() const;

    /// Integer matrices on the cuspidal lattice (acting on columns).
    IntMatrix hecke(int64_t n) const;
    IntMatrix hecke_prime(int64_t l) const;
    IntMatrix diamond(int64_t a) const;
    IntMatrix star() const;
    /// Multiplication by a primitive root of unity generating Q(eps).
    IntMatrix zeta() const;
    /// The same operators reduced mod a prime, computed without the exact route.
    FqMatrix hecke_prime_mod(int64_t l, uint64_t p) const;
    FqMatrix star_mod(uint64_t p) const;
    FqMatrix zeta_mod(uint64_t p) const;

    /// Same operators on the full Manin-image lattice.
    IntMatrix full_operator(const std::vector<Mat2>& mats) const;

private:
    ModularSymbolSpace() = default;

    struct Term {
        int64_t coef;
        int32_t sym;
        int32_t t; // root of unity exponent (order rou_)
    };
    void build_impl();
    void apply_matrix(int32_t sym, const Mat2& h, std::vector<Term>& out) const;
    void apply_diamond(int32_t sym, int64_t a, std::vector<Term>& out) const;
    int64_t eps_exponent(int64_t unit) const; // exponent of eps(unit) in order rou_
    void add_scaled_root(std::vector<int64_t>& v, size_t offset, int64_t coef, int64_t t) const;
    // Sum over h of (basis element) * h, one row of qcol coefficients per basis element.
    std::vector<int64_t> accumulate(const std::vector<Mat2>& mats, int64_t diamond_unit, bool zeta_shift) const;
    IntMatrix exact_operator(const std::vector<int64_t>& acc) const;
    FqMatrix modp_operator(const std::vector<int64_t>& acc, uint64_t p) const;
    std::vector<Mat2> hecke_matrices(int64_t l) const;

    int64_t N_ = 1;
    int k_ = 2;
    DirichletCharacter eps_;
    std::string note_;
    std::shared_ptr<const P1List> p1_;
    size_t deg_ = 1;   // phi(order of eps)
    int64_t rou_ = 2;  // scalars are powers of a primitive rou_-th root of unity
    std::vector<std::vector<int64_t>> root_vec_; // rou_-th roots in the power basis of Q(zeta_m)

    // symbol -> class, class representative symbols
    std::vector<int32_t> sym_class_;
    std::vector<int32_t> sym_t_;
    std::vector<int32_t> class_rep_;
    size_t nqcols_ = 0; // classes * deg_
    size_t nfree_ = 0;
    std::vector<size_t> free_qcol_;                          // free generator -> qcol
    std::vector<std::vector<std::pair<size_t, Rational>>> expr_; // qcol -> free coordinates

    bool standard_ = true;
    RatMatrix lattice_;
    std::vector<std::vector<std::pair<size_t, BigInt>>> basis_combo_; // basis element -> qcols
    IntMatrix coords_;   // lattice coordinates of each qcol (basis x qcols)
    size_t ncusp_ = 0;
    std::vector<std::vector<std::pair<size_t, BigInt>>> bd_qcol_; // boundary of each qcol
    IntMatrix bd_lattice_;
    IntMatrix K_, P_;

    mutable std::recursive_mutex mu_;
    mutable std::map<int64_t, IntMatrix> hecke_cache_;
    mutable std::map<std::pair<int64_t, uint64_t>, FqMatrix> hecke_mod_cache_;
    mutable std::map<uint64_t, std::pair<FqMatrix, FqMatrix>> reduced_proj_; // P C mod p, K mod p
};

/// Weight-2 symbols for Gamma_0(N) presented directly over F_2.
class ModPSymbolSpace {
public:
    /// Only (k, p) = (2, 2) is supported, with N odd and N >= 5.
    static std::shared_ptr<const ModPSymbolSpace> build(int64_t N, int k, uint64_t p);

    int64_t level() const { return N_; }
    size_t full_dimension() const { return nfree_; }
    size_t cuspidal_dimension() const { return Kc_.cols(); }
    const FieldPtr& field() const { return F_; }
    /// T_l on the cuspidal subspace (columns are images).
    FqMatrix hecke_prime(int64_t l) const;

private:
    ModPSymbolSpace() = default;
    int64_t N_ = 1;
    FieldPtr F_;
    std::shared_ptr<const P1List> p1_;
    size_t nfree_ = 0;
    std::vector<size_t> free_sym_;
    FqMatrix expr_; // symbols x free generators
    FqMatrix Kc_;   // cuspidal basis in free coordinates (columns)
};

} // namespace katz1

#include <random>
#include <stdexcept>

#include "katz1/arith.hpp"
#include "katz1/hecke_algebra.hpp"

namespace katz1 {

namespace {

std::vector<BigInt> vectorize_int(const IntMatrix& T)
{
    std::vector<BigInt> v;
    v.reserve(T.rows() * T.cols());
    for (size_t i = 0; i < T.rows(); ++i)
        for (size_t j = 0; j < T.cols(); ++j) v.push_back(T.at(i, j));
    return v;
}

IntMatrix matrix_power(const IntMatrix& Z, int64_t e, size_t n)
{
    IntMatrix R = IntMatrix::identity(n);
    for (int64_t i = 0; i < e; ++i) R = R * Z;
    return R;
}

} // namespace

IntegralHeckeAlgebra IntegralHeckeAlgebra::generate(const ModularSymbolSpace& S, int64_t bound)
{
    if (bound < 1) throw std::invalid_argument("integral Hecke algebra: bound must be positive");
    IntegralHeckeAlgebra T;
    T.N_ = S.level();
    T.k_ = S.weight();
    T.chi_id_ = S.character().id();
    T.bound_ = bound;
    T.n_ = S.cuspidal_rank();
    T.deg_ = S.scalar_degree();
    T.Z_ = S.zeta();
    T.eps_exp_.assign(static_cast<size_t>(T.N_), -1);
    for (int64_t a = 0; a < T.N_; ++a) T.eps_exp_[static_cast<size_t>(a)] = S.character().exponent_at(a);
    if (T.N_ == 1) T.eps_exp_[0] = 0;
    size_t n = T.n_;
    if (n == 0) {
        for (int64_t m = 1; m <= bound; ++m) T.table_[m] = {};
        return T;
    }
    std::vector<IntMatrix> Zp{IntMatrix::identity(n)};
    for (size_t j = 1; j < T.deg_; ++j) Zp.push_back(Zp.back() * T.Z_);
    IntMatrix M(static_cast<size_t>(bound) * T.deg_, n * n);
    for (int64_t m = 1; m <= bound; ++m) {
        IntMatrix Tm = S.hecke(m);
        for (size_t j = 0; j < T.deg_; ++j) {
            auto v = vectorize_int(Zp[j] * Tm);
            size_t r = static_cast<size_t>(m - 1) * T.deg_ + j;
            for (size_t c = 0; c < v.size(); ++c) M.at(r, c) = v[c];
        }
    }
    HnfResult h = hnf(M, false);
    T.zrank_ = h.rank;
    T.H_ = h.H.row_range(0, h.rank);
    T.piv_ = h.pivots;
    for (int64_t m = 1; m <= bound; ++m) {
        std::vector<BigInt> row(n * n);
        size_t r = static_cast<size_t>(m - 1) * T.deg_;
        for (size_t c = 0; c < n * n; ++c) row[c] = M.at(r, c);
        std::vector<BigInt> coords;
        if (!hnf_coordinates(T.H_, T.piv_, row, coords)) throw std::logic_error("integral Hecke algebra: T_n outside its own span");
        T.table_[m] = coords;
    }
    return T;
}

IntMatrix IntegralHeckeAlgebra::vector_to_matrix(const std::vector<BigInt>& v) const
{
    IntMatrix A(n_, n_);
    for (size_t i = 0; i < n_; ++i)
        for (size_t j = 0; j < n_; ++j) A.at(i, j) = v[i * n_ + j];
    return A;
}

std::vector<BigInt> IntegralHeckeAlgebra::matrix_coords(const IntMatrix& A) const
{
    std::vector<BigInt> c;
    if (!hnf_coordinates(H_, piv_, vectorize_int(A), c)) throw std::domain_error("integral Hecke algebra: element outside the lattice");
    return c;
}

IntMatrix IntegralHeckeAlgebra::basis_matrix(size_t i) const
{
    std::vector<BigInt> v(n_ * n_);
    for (size_t c = 0; c < v.size(); ++c) v[c] = H_.at(i, c);
    return vector_to_matrix(v);
}

IntMatrix IntegralHeckeAlgebra::element(const std::vector<BigInt>& coords) const
{
    IntMatrix A(n_, n_);
    for (size_t i = 0; i < coords.size(); ++i)
        if (sgn(coords[i])) A = A + basis_matrix(i).scaled(coords[i]);
    return A;
}

std::vector<BigInt> IntegralHeckeAlgebra::express(int64_t n) const
{
    if (n < 1) throw std::invalid_argument("express: index must be positive");
    auto it = table_.find(n);
    if (it != table_.end()) return it->second;
    IntMatrix R = IntMatrix::identity(n_);
    for (auto [l, e] : factor64(n)) {
        if (l > bound_) throw std::out_of_range("integral Hecke algebra: prime beyond the bound");
        IntMatrix Tl = element(express(l));
        IntMatrix prev = IntMatrix::identity(n_), cur = Tl;
        IntMatrix dl;
        BigInt s = 1;
        bool coprime = N_ % l != 0;
        if (coprime) {
            dl = matrix_power(Z_, eps_exp_[static_cast<size_t>(l % N_)], n_);
            for (int i = 0; i < k_ - 1; ++i) s *= l;
        }
        for (int i = 2; i <= e; ++i) {
            IntMatrix next = Tl * cur;
            if (coprime) next = next - (dl * prev).scaled(s);
            prev = cur;
            cur = next;
        }
        R = R * cur;
    }
    return matrix_coords(R);
}

bool IntegralHeckeAlgebra::closed_under_products(size_t samples, uint64_t seed) const
{
    if (n_ == 0) return true;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int64_t> pick(1, bound_);
    for (size_t s = 0; s < samples; ++s) {
        IntMatrix P = element(express(pick(rng))) * element(express(pick(rng)));
        std::vector<BigInt> c;
        if (!hnf_coordinates(H_, piv_, vectorize_int(P), c)) return false;
    }
    return true;
}

bool IntegralHeckeAlgebra::table_spans_lattice() const
{
    if (zrank_ == 0) return true;
    std::vector<IntMatrix> Zp{IntMatrix::identity(n_)};
    for (size_t j = 1; j < deg_; ++j) Zp.push_back(Zp.back() * Z_);
    IntMatrix C(table_.size() * deg_, zrank_);
    size_t r = 0;
    for (auto& [m, coords] : table_) {
        IntMatrix Tm = element(coords);
        for (size_t j = 0; j < deg_; ++j, ++r) {
            auto c = matrix_coords(Zp[j] * Tm);
            for (size_t i = 0; i < zrank_; ++i) C.at(r, i) = c[i];
        }
    }
    HnfResult h = hnf(C, false);
    return h.rank == zrank_ && h.H.row_range(0, zrank_) == IntMatrix::identity(zrank_);
}

} // namespace katz1

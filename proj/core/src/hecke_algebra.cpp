#include "katz1/hecke_algebra.hpp"

#include <bit>
#include <stdexcept>

#include "katz1/arith.hpp"
#include "katz1/cyclotomic.hpp"

namespace katz1 {

int64_t generation_bound(int64_t N, int k, BoundMode mode)
{
    if (N < 1 || k < 2) throw std::invalid_argument("generation_bound: need N >= 1, k >= 2");
    int64_t b = static_cast<int64_t>(k) * gamma0_index(N) / 12;
    if (mode == BoundMode::full) b = b * euler_phi(N) / 2;
    return b;
}

namespace {

FqMatrix vectorize(const FqMatrix& T)
{
    size_t D = T.rows();
    FqMatrix v(T.field(), 1, D * D);
    if (T.packed()) {
        uint64_t* out = v.row_words(0);
        for (size_t i = 0; i < D; ++i) {
            const uint64_t* r = T.row_words(i);
            for (size_t j = 0; j < D; ++j)
                if ((r[j >> 6] >> (j & 63)) & 1) {
                    size_t pos = i * D + j;
                    out[pos >> 6] |= uint64_t{1} << (pos & 63);
                }
        }
    } else {
        for (size_t i = 0; i < D; ++i)
            for (size_t j = 0; j < D; ++j) v.set(0, i * D + j, T.get(i, j));
    }
    return v;
}

// row i of A dotted with row j of B
FiniteField::Elt dot_rows(const FqMatrix& A, size_t i, const FqMatrix& B, size_t j)
{
    if (A.packed()) {
        const uint64_t* a = A.row_words(i);
        const uint64_t* b = B.row_words(j);
        int par = 0;
        for (size_t w = 0; w < A.words_per_row(); ++w) par ^= std::popcount(a[w] & b[w]) & 1;
        return static_cast<FiniteField::Elt>(par);
    }
    const FiniteField& F = *A.field();
    FiniteField::Elt s = 0;
    const auto* a = A.row_elts(i);
    const auto* b = B.row_elts(j);
    for (size_t k = 0; k < A.cols(); ++k)
        if (a[k] && b[k]) s = F.add(s, F.mul(a[k], b[k]));
    return s;
}

void axpy(FqVector& y, FiniteField::Elt s, const FqVector& x, const FiniteField& F)
{
    if (!s) return;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i]) y[i] = F.add(y[i], F.mul(s, x[i]));
}

} // namespace

void ModPHeckeAlgebra::setup_from_space(const ModularSymbolSpace& S, int prime_choice)
{
    N_ = S.level();
    k_ = S.weight();
    const DirichletCharacter& chi = S.character();
    chi_id_ = chi.id();
    prime_choice_ = prime_choice;
    if (gcd64(N_, static_cast<int64_t>(p_)) != 1) throw std::invalid_argument("mod-p Hecke algebra: p divides the level");
    size_t deg = S.scalar_degree();
    rank_ = S.cuspidal_rank() / (2 * deg);
    eps_table_.assign(static_cast<size_t>(N_), 0);
    if (chi.order() > 2) {
        if (chi.order() % static_cast<int64_t>(p_) == 0) throw std::domain_error("mod-p Hecke algebra: p divides the character order");
        CyclotomicReduction red(chi.field_ptr(), p_, prime_choice);
        F_ = red.residue_field();
        FiniteField::Elt z = red.zeta_image();
        for (int64_t a = 0; a < N_; ++a) {
            int64_t e = chi.exponent_at(a);
            if (e >= 0) eps_table_[static_cast<size_t>(a)] = F_->pow(z, static_cast<uint64_t>(e));
        }
        restricted_ = true;
        base_ = FiniteField::make(p_, 1);
        FqMatrix Z = S.zeta_mod(p_).mapped(FieldEmbedding(base_, F_));
        V_ = kernel(Z - FqMatrix::scalar(F_, Z.rows(), z));
        D_ = V_.cols();
    } else {
        F_ = FiniteField::make(p_, 1);
        for (int64_t a = 0; a < N_; ++a) {
            int64_t e = chi.exponent_at(a);
            if (e >= 0) eps_table_[static_cast<size_t>(a)] = e == 0 ? F_->one() : F_->neg(F_->one());
        }
        D_ = S.cuspidal_rank();
    }
    if (N_ == 1) eps_table_.assign(1, F_->one());
}

FqMatrix ModPHeckeAlgebra::restrict_op(const FqMatrix& T) const
{
    if (!restricted_) return T;
    FqMatrix Tm = T.mapped(FieldEmbedding(base_, F_));
    FqMatrix X;
    if (!solve(V_, Tm * V_, X)) throw std::logic_error("mod-p Hecke algebra: operator does not preserve the eigenspace");
    return X;
}

FiniteField::Elt ModPHeckeAlgebra::eps(int64_t a) const { return eps_table_[static_cast<size_t>(mod64(a, N_))]; }

FqVector ModPHeckeAlgebra::coords_of_vector(const FqMatrix& v, FqMatrix* residual) const
{
    const FiniteField& F = *F_;
    FqVector c(gens_.size(), 0);
    if (residual) *residual = v;
    for (size_t j = 0; j < rows_.size(); ++j) {
        FiniteField::Elt y = v.get(0, pivots_[j]);
        if (!y) continue;
        axpy(c, y, E_[j], F);
        if (residual) residual->add_scaled(rows_[j], F.neg(y));
    }
    return c;
}

FqMatrix ModPHeckeAlgebra::coords_of_product(const FqMatrix& A) const
{
    // entries of A * t_{g_i} at the pivot positions
    const FiniteField& F = *F_;
    size_t d = gens_.size();
    FqMatrix M(F_, d, d);
    for (size_t i = 0; i < d; ++i) {
        FqVector c(d, 0);
        for (size_t j = 0; j < d; ++j) {
            size_t r = pivots_[j] / D_, col = pivots_[j] % D_;
            axpy(c, dot_rows(A, r, gen_t_[i], col), E_[j], F);
        }
        M.set_column(i, c);
    }
    return M;
}

void ModPHeckeAlgebra::generate()
{
    const FiniteField& F = *F_;
    std::map<int64_t, FqMatrix> pp; // t_q for prime powers q
    pp.emplace(1, FqMatrix::identity(F_, D_));
    auto prime_power = [&](int64_t l, int e) -> const FqMatrix& {
        int64_t q = 1;
        for (int i = 0; i < e; ++i) q *= l;
        auto it = pp.find(q);
        if (it != pp.end()) return it->second;
        FqMatrix T = prime_ops_.at(l) * pp.at(q / l);
        if (e >= 2 && N_ % l != 0) {
            FiniteField::Elt c = F.mul(F.from_int(static_cast<int64_t>(powmod64(static_cast<uint64_t>(l), static_cast<uint64_t>(k_ - 1), p_))), eps(l));
            if (c) T.add_scaled(pp.at(q / (l * l)), F.neg(c));
        }
        return pp.emplace(q, std::move(T)).first->second;
    };

    std::vector<FqVector> coords;
    std::vector<FqMatrix> gen_mats;
    for (int64_t n = 1; n <= bound_; ++n) {
        if (D_ == 0) {
            coords.emplace_back();
            continue;
        }
        FqMatrix T = FqMatrix::identity(F_, D_);
        if (n > 1)
            for (auto [l, e] : factor64(n)) {
                for (int i = 1; i <= e; ++i) prime_power(l, i);
                T = T * prime_power(l, e);
            }
        FqMatrix v = vectorize(T);
        FqMatrix res;
        FqVector c = coords_of_vector(v, &res);
        if (res.is_zero()) {
            coords.push_back(std::move(c));
            continue;
        }
        size_t piv = 0;
        while (!res.get(0, piv)) ++piv;
        FiniteField::Elt s = F.inv(res.get(0, piv));
        res = res.scaled(s);
        // res = (t_n - sum y_j row_j) * s
        for (auto& e : E_) e.push_back(0);
        FqVector enew(gens_.size() + 1, 0);
        for (size_t i = 0; i < gens_.size(); ++i) enew[i] = F.neg(c[i]);
        enew[gens_.size()] = 1;
        for (auto& x : enew) x = F.mul(x, s);
        for (size_t j = 0; j < rows_.size(); ++j) {
            FiniteField::Elt cj = rows_[j].get(0, piv);
            if (!cj) continue;
            rows_[j].add_scaled(res, F.neg(cj));
            axpy(E_[j], F.neg(cj), enew, F);
        }
        rows_.push_back(std::move(res));
        pivots_.push_back(piv);
        E_.push_back(std::move(enew));
        gens_.push_back(n);
        gen_mats.push_back(std::move(T));
        FqVector unit(gens_.size(), 0);
        unit.back() = 1;
        coords.push_back(std::move(unit));
    }

    size_t d = gens_.size();
    table_ = FqMatrix(F_, d, static_cast<size_t>(bound_));
    for (size_t n = 0; n < coords.size(); ++n)
        for (size_t i = 0; i < coords[n].size(); ++i) table_.set(i, n, coords[n][i]);
    gen_t_.clear();
    for (auto& G : gen_mats) gen_t_.push_back(G.transpose());
    mult_.clear();
    for (auto& [l, T] : prime_ops_) {
        mult_.emplace(l, coords_of_product(T));
    }
}

std::shared_ptr<const ModPHeckeAlgebra> ModPHeckeAlgebra::build(std::shared_ptr<const ModularSymbolSpace> S, uint64_t p,
                                                                int64_t bound, int prime_choice)
{
    if (bound < 1) throw std::invalid_argument("mod-p Hecke algebra: bound must be positive");
    std::shared_ptr<ModPHeckeAlgebra> A(new ModPHeckeAlgebra());
    A->p_ = p;
    A->bound_ = bound;
    A->setup_from_space(*S, prime_choice);
    if (A->D_ > 0)
        for (int64_t l : primes_up_to(bound)) A->prime_ops_.emplace(l, A->restrict_op(S->hecke_prime_mod(l, p)));
    A->generate();
    if (A->D_ == 0)
        for (int64_t l : primes_up_to(bound)) A->mult_.emplace(l, FqMatrix(A->F_, 0, 0));
    return A;
}

std::shared_ptr<const ModPHeckeAlgebra> ModPHeckeAlgebra::reduce(const IntegralHeckeAlgebra& T,
                                                                 std::shared_ptr<const ModularSymbolSpace> S, uint64_t p,
                                                                 int prime_choice)
{
    if (T.level() != S->level() || T.weight() != S->weight() || T.character_id() != S->character().id())
        throw std::invalid_argument("reduce: algebra and space differ");
    std::shared_ptr<ModPHeckeAlgebra> A(new ModPHeckeAlgebra());
    A->p_ = p;
    A->bound_ = T.bound();
    A->setup_from_space(*S, prime_choice);
    FieldPtr Fp = FiniteField::make(p, 1);
    if (A->D_ > 0)
        for (int64_t l : primes_up_to(T.bound()))
            A->prime_ops_.emplace(l, A->restrict_op(T.element(T.express(l)).mod_p(Fp)));
    A->generate();
    if (A->D_ == 0) {
        for (int64_t l : primes_up_to(A->bound_)) A->mult_.emplace(l, FqMatrix(A->F_, 0, 0));
        return A;
    }
    // the reduced Hermite basis spans the same space
    EchelonBuilder eb(A->F_, A->D_ * A->D_);
    for (size_t i = 0; i < T.hnf_basis().rows(); ++i) {
        FqMatrix v = vectorize(A->restrict_op(T.basis_matrix(i).mod_p(Fp)));
        FqMatrix res;
        A->coords_of_vector(v, &res);
        if (!res.is_zero()) throw std::logic_error("reduce: Hermite basis leaves the span of the t_n");
        eb.insert(v);
    }
    if (eb.rank() != A->dim()) throw std::logic_error("reduce: Hermite basis spans a smaller space");
    return A;
}

FqVector ModPHeckeAlgebra::identity() const { return express(1); }

FqVector ModPHeckeAlgebra::express(int64_t n) const
{
    if (n < 1) throw std::invalid_argument("express: index must be positive");
    if (n <= bound_) return table_.column(static_cast<size_t>(n - 1));
    return mult(n) * identity();
}

const FqMatrix& ModPHeckeAlgebra::mult_prime(int64_t l) const
{
    auto it = mult_.find(l);
    if (it == mult_.end()) throw std::out_of_range("mod-p Hecke algebra: prime beyond the bound");
    return it->second;
}

FqMatrix ModPHeckeAlgebra::mult_prime_power(int64_t l, int e) const
{
    size_t d = dim();
    const FqMatrix& M = mult_prime(l);
    FqMatrix prev = FqMatrix::identity(F_, d), cur = M;
    if (e == 0) return prev;
    FiniteField::Elt c = 0;
    if (N_ % l != 0)
        c = F_->mul(F_->from_int(static_cast<int64_t>(powmod64(static_cast<uint64_t>(l), static_cast<uint64_t>(k_ - 1), p_))), eps(l));
    for (int i = 2; i <= e; ++i) {
        FqMatrix next = M * cur;
        if (c) next.add_scaled(prev, F_->neg(c));
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

FqMatrix ModPHeckeAlgebra::mult(int64_t n) const
{
    if (n < 1) throw std::invalid_argument("mult: index must be positive");
    FqMatrix M = FqMatrix::identity(F_, dim());
    if (n == 1) return M;
    for (auto [l, e] : factor64(n)) M = M * mult_prime_power(l, e);
    return M;
}

FqMatrix ModPHeckeAlgebra::mult_element(const FqVector& x) const
{
    FqMatrix M(F_, dim(), dim());
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i]) M.add_scaled(mult(gens_[i]), x[i]);
    return M;
}

FqVector ModPHeckeAlgebra::multiply(const FqVector& a, const FqVector& b) const { return mult_element(a) * b; }

FqMatrix ModPHeckeAlgebra::operator_matrix(int64_t n) const
{
    if (!has_module()) throw std::logic_error("operator_matrix: module not available");
    FqVector c = express(n);
    FqMatrix T(F_, D_, D_);
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i]) T.add_scaled(gen_t_[i].transpose(), c[i]);
    return T;
}

bool ModPHeckeAlgebra::frobenius_recursion_holds() const
{
    int64_t P = static_cast<int64_t>(p_);
    if (P > bound_ || dim() == 0) return true;
    const FqMatrix& Mp = mult_prime(P);
    for (int64_t n = 1; n * P <= bound_; ++n)
        if (express(P * n) != Mp * express(n)) return false;
    return true;
}

bool ModPHeckeAlgebra::commutative() const
{
    for (auto a = mult_.begin(); a != mult_.end(); ++a)
        for (auto b = std::next(a); b != mult_.end(); ++b)
            if (a->second * b->second != b->second * a->second) return false;
    return true;
}

} // namespace katz1

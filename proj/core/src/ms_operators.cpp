#include <stdexcept>

#include "katz1/arith.hpp"
#include "katz1/modular_symbols.hpp"

namespace katz1 {

std::vector<int64_t> ModularSymbolSpace::accumulate(const std::vector<Mat2>& mats, int64_t diamond_unit, bool zeta_shift) const
{
    size_t nb = nfree_;
    std::vector<int64_t> acc(nqcols_ * nb, 0);
    std::vector<Term> terms;
    int64_t step = rou_ / eps_.order();
    for (size_t b = 0; b < nb; ++b) {
        for (auto& [q, n] : basis_combo_[b]) {
            if (!n.fits_slong_p()) throw std::overflow_error("modular symbols: lattice combination too large");
            int64_t nn = n.get_si();
            size_t c = q / deg_, j = q % deg_;
            int32_t sym = class_rep_[c];
            int64_t* row = acc.data() + b * nqcols_;
            terms.clear();
            if (!mats.empty()) {
                for (const Mat2& h : mats) apply_matrix(sym, h, terms);
            } else if (diamond_unit != 0) {
                apply_diamond(sym, diamond_unit, terms);
            } else {
                terms.push_back(Term{1, sym, 0});
            }
            int64_t shift = static_cast<int64_t>(j + (zeta_shift ? 1 : 0)) * step;
            for (const Term& x : terms) {
                int32_t cls = sym_class_[static_cast<size_t>(x.sym)];
                if (cls < 0) continue;
                int64_t t = mod64(x.t + sym_t_[static_cast<size_t>(x.sym)] + shift, rou_);
                const auto& r = root_vec_[static_cast<size_t>(t)];
                size_t base = static_cast<size_t>(cls) * deg_;
                for (size_t jj = 0; jj < deg_; ++jj)
                    if (r[jj]) row[base + jj] += nn * x.coef * r[jj];
            }
        }
    }
    return acc;
}

IntMatrix ModularSymbolSpace::full_operator(const std::vector<Mat2>& mats) const
{
    auto acc = accumulate(mats, 0, false);
    IntMatrix A(nqcols_, nfree_);
    for (size_t q = 0; q < nqcols_; ++q)
        for (size_t b = 0; b < nfree_; ++b)
            if (acc[b * nqcols_ + q]) A.at(q, b) = acc[b * nqcols_ + q];
    return coords_ * A;
}

IntMatrix ModularSymbolSpace::exact_operator(const std::vector<int64_t>& acc) const
{
    size_t nb = nfree_;
    IntMatrix AK(nqcols_, K_.cols());
    for (size_t q = 0; q < nqcols_; ++q)
        for (size_t b = 0; b < nb; ++b) {
            int64_t v = acc[b * nqcols_ + q];
            if (!v) continue;
            for (size_t c = 0; c < K_.cols(); ++c)
                if (sgn(K_.at(b, c))) AK.at(q, c) += K_.at(b, c) * v;
        }
    return P_ * (coords_ * AK);
}

FqMatrix ModularSymbolSpace::modp_operator(const std::vector<int64_t>& acc, uint64_t p) const
{
    FieldPtr F = FiniteField::make(p, 1);
    std::pair<FqMatrix, FqMatrix>* proj;
    {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = reduced_proj_.find(p);
        if (it == reduced_proj_.end()) {
            FqMatrix PC = P_.mod_p(F) * coords_.mod_p(F);
            it = reduced_proj_.emplace(p, std::make_pair(PC, K_.mod_p(F))).first;
        }
        proj = &it->second;
    }
    size_t nb = nfree_;
    FqMatrix A(F, nqcols_, nb);
    int64_t P = static_cast<int64_t>(p);
    for (size_t q = 0; q < nqcols_; ++q)
        for (size_t b = 0; b < nb; ++b) {
            int64_t v = acc[b * nqcols_ + q];
            if (v) A.set(q, b, static_cast<FiniteField::Elt>(mod64(v, P)));
        }
    return proj->first * (A * proj->second);
}

std::vector<Mat2> ModularSymbolSpace::hecke_matrices(int64_t l) const
{
    if (N_ % l == 0) return heilbronn_merel(l);
    return heilbronn_matrices(l);
}

IntMatrix ModularSymbolSpace::hecke_prime(int64_t l) const
{
    if (l < 2 || !is_prime64(static_cast<uint64_t>(l))) throw std::invalid_argument("hecke_prime: index must be prime");
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto it = hecke_cache_.find(l);
    if (it != hecke_cache_.end()) return it->second;
    IntMatrix T = exact_operator(accumulate(hecke_matrices(l), 0, false));
    hecke_cache_.emplace(l, T);
    return T;
}

IntMatrix ModularSymbolSpace::hecke(int64_t n) const
{
    if (n < 1) throw std::invalid_argument("hecke: index must be positive");
    size_t d = cuspidal_rank();
    if (n == 1) return IntMatrix::identity(d);
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto it = hecke_cache_.find(n);
    if (it != hecke_cache_.end()) return it->second;
    auto fac = factor64(n);
    IntMatrix T;
    if (fac.size() > 1) {
        T = IntMatrix::identity(d);
        for (auto [l, e] : fac) {
            int64_t q = 1;
            for (int i = 0; i < e; ++i) q *= l;
            T = T * hecke(q);
        }
    } else {
        int64_t l = fac[0].first;
        if (n == l) return hecke_prime(l);
        IntMatrix a = hecke(l) * hecke(n / l);
        if (N_ % l != 0) {
            BigInt s = 1;
            for (int i = 0; i < k_ - 1; ++i) s *= l;
            a = a - (diamond(l) * hecke(n / (l * l))).scaled(s);
        }
        T = a;
    }
    hecke_cache_.emplace(n, T);
    return T;
}

IntMatrix ModularSymbolSpace::diamond(int64_t a) const
{
    if (gcd64(a, N_) != 1) throw std::invalid_argument("diamond: argument must be a unit mod N");
    if (N_ == 1) return IntMatrix::identity(cuspidal_rank());
    return exact_operator(accumulate({}, mod64(a, N_), false));
}

IntMatrix ModularSymbolSpace::star() const { return exact_operator(accumulate({Mat2{-1, 0, 0, 1}}, 0, false)); }

IntMatrix ModularSymbolSpace::zeta() const { return exact_operator(accumulate({}, 0, true)); }

FqMatrix ModularSymbolSpace::hecke_prime_mod(int64_t l, uint64_t p) const
{
    if (l < 2 || !is_prime64(static_cast<uint64_t>(l))) throw std::invalid_argument("hecke_prime_mod: index must be prime");
    {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = hecke_mod_cache_.find({l, p});
        if (it != hecke_mod_cache_.end()) return it->second;
    }
    FqMatrix T = modp_operator(accumulate(hecke_matrices(l), 0, false), p);
    std::lock_guard<std::recursive_mutex> lock(mu_);
    hecke_mod_cache_.emplace(std::make_pair(l, p), T);
    return T;
}

FqMatrix ModularSymbolSpace::star_mod(uint64_t p) const { return modp_operator(accumulate({Mat2{-1, 0, 0, 1}}, 0, false), p); }

FqMatrix ModularSymbolSpace::zeta_mod(uint64_t p) const { return modp_operator(accumulate({}, 0, true), p); }

} // namespace katz1

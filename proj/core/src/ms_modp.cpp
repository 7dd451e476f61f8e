#include <stdexcept>
#include <unordered_map>

#include "katz1/arith.hpp"
#include "katz1/modular_symbols.hpp"

namespace katz1 {

std::shared_ptr<const ModPSymbolSpace> ModPSymbolSpace::build(int64_t N, int k, uint64_t p)
{
    if (k != 2 || p != 2) throw std::invalid_argument("direct mod-p symbols: only k = p = 2 is supported");
    if (N < 5 || N % 2 == 0) throw std::invalid_argument("direct mod-p symbols: level must be odd and at least 5");
    std::shared_ptr<ModPSymbolSpace> S(new ModPSymbolSpace());
    S->N_ = N;
    S->F_ = FiniteField::make(2, 1);
    S->p1_ = std::make_shared<const P1List>(N);
    const P1List& P1 = *S->p1_;
    size_t n = P1.size();
    auto act = [&](size_t s, int64_t a, int64_t b, int64_t c, int64_t d) {
        auto [u, v] = P1.point(s);
        return static_cast<size_t>(P1.normalize(u * a + v * c, u * b + v * d).index);
    };
    FqMatrix R(S->F_, 2 * n, n);
    for (size_t s = 0; s < n; ++s) {
        // a symbol fixed by sigma is 2-torsion over Z and is killed, as over Q
        size_t t = act(s, 0, -1, 1, 0);
        R.add_to(2 * s, s, 1);
        if (t != s) R.add_to(2 * s, t, 1);
        R.add_to(2 * s + 1, s, 1);
        R.add_to(2 * s + 1, act(s, 0, -1, 1, -1), 1);
        R.add_to(2 * s + 1, act(s, -1, 1, -1, 0), 1);
    }
    std::vector<size_t> piv;
    size_t r = rref(R, &piv);
    std::vector<int64_t> free_index(n, -1);
    std::vector<char> is_piv(n, 0);
    for (size_t i = 0; i < r; ++i) is_piv[piv[i]] = 1;
    for (size_t s = 0; s < n; ++s)
        if (!is_piv[s]) {
            free_index[s] = static_cast<int64_t>(S->free_sym_.size());
            S->free_sym_.push_back(s);
        }
    S->nfree_ = S->free_sym_.size();
    S->expr_ = FqMatrix(S->F_, n, S->nfree_);
    for (size_t s = 0; s < n; ++s)
        if (free_index[s] >= 0) S->expr_.set(s, static_cast<size_t>(free_index[s]), 1);
    for (size_t i = 0; i < r; ++i)
        for (size_t f = 0; f < S->nfree_; ++f)
            if (R.get(i, S->free_sym_[f])) S->expr_.set(piv[i], f, 1);

    // cusp classes of Gamma_0(N): (v mod N, u mod gcd(v, N)) up to (u, v) -> (u / s, s v)
    std::unordered_map<int64_t, size_t> cusp_of;
    size_t ncusp = 0;
    auto key = [&](int64_t u, int64_t v) {
        int64_t vn = mod64(v, N);
        int64_t g = gcd64(vn, N);
        return vn * N + mod64(u, g);
    };
    auto cusp = [&](int64_t u, int64_t v) {
        int64_t k0 = key(u, v);
        auto it = cusp_of.find(k0);
        if (it != cusp_of.end()) return it->second;
        size_t id = ncusp++;
        for (int64_t s = 1; s < N; ++s)
            if (gcd64(s, N) == 1) cusp_of.emplace(key(u * invmod64(s, N), v * s), id);
        return id;
    };
    std::vector<std::pair<size_t, size_t>> bd(S->nfree_);
    for (size_t f = 0; f < S->nfree_; ++f) {
        auto [c, d] = P1.point(S->free_sym_[f]);
        int64_t C = c == 0 ? N : c, D = d;
        while (gcd64(C, D) != 1) D += N;
        int64_t x, y;
        xgcd64(D, C, x, y);
        bd[f] = {cusp(x, C), cusp(-y, D)};
    }
    FqMatrix B(S->F_, ncusp, S->nfree_);
    for (size_t f = 0; f < S->nfree_; ++f) {
        B.add_to(bd[f].first, f, 1);
        B.add_to(bd[f].second, f, 1);
    }
    S->Kc_ = kernel(B);
    return S;
}

FqMatrix ModPSymbolSpace::hecke_prime(int64_t l) const
{
    if (l < 2 || !is_prime64(static_cast<uint64_t>(l))) throw std::invalid_argument("hecke_prime: index must be prime");
    std::vector<Mat2> H = (N_ % l == 0) ? heilbronn_merel(l) : heilbronn_matrices(l);
    size_t n = p1_->size();
    FqMatrix acc(F_, nfree_, n);
    for (size_t f = 0; f < nfree_; ++f) {
        auto [u, v] = p1_->point(free_sym_[f]);
        for (const Mat2& h : H) {
            auto nrm = p1_->normalize(u * h[0] + v * h[2], u * h[1] + v * h[3]);
            if (nrm.index >= 0) acc.add_to(f, static_cast<size_t>(nrm.index), 1);
        }
    }
    FqMatrix T = (acc * expr_).transpose();
    FqMatrix X;
    if (!coordinates_in(Kc_, T * Kc_, X)) throw std::logic_error("direct mod-p symbols: cuspidal subspace not stable");
    return X;
}

} // namespace katz1

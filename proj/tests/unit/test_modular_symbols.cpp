#include <gtest/gtest.h>

#include <set>

#include "dimension_oracle.hpp"
#include "katz1/arith.hpp"
#include "katz1/modular_symbols.hpp"

using namespace katz1;

namespace {

// q * prod (1 - q^n)^a (1 - q^{Mn})^b up to q^prec, integer coefficients.
std::vector<BigInt> eta_product(int a, int M, int b, size_t prec)
{
    std::vector<BigInt> f(prec + 1, 0);
    f[1] = 1;
    auto mul_factor = [&](size_t step, int times) {
        for (int t = 0; t < times; ++t)
            for (size_t i = prec; i >= step; --i) f[i] -= f[i - step];
    };
    for (size_t n = 1; n <= prec; ++n) mul_factor(n, a);
    for (size_t n = 1; static_cast<size_t>(M) * n <= prec; ++n) mul_factor(static_cast<size_t>(M) * n, b);
    return f;
}

// Genus of X_0(N): 12 g = 12 + mu - 3 e2 - 4 e3 - 6 c.
int64_t genus_exact(int64_t N)
{
    int64_t mu = gamma0_index(N);
    int64_t e2 = (N % 4 == 0) ? 0 : 1, e3 = (N % 9 == 0) ? 0 : 1, cusps = 0;
    for (auto [p, r] : factor64(N)) {
        (void)r;
        if (p != 2) e2 *= (p % 4 == 1) ? 2 : 0;
        if (p != 3) e3 *= (p % 3 == 1) ? 2 : 0;
    }
    for (int64_t d : divisors(N)) cusps += euler_phi(gcd64(d, N / d));
    return (12 + mu - 3 * e2 - 4 * e3 - 6 * cusps) / 12;
}

FqPoly reduce_qpoly(const std::vector<Rational>& c, const FieldPtr& F)
{
    std::vector<FiniteField::Elt> e;
    int64_t p = static_cast<int64_t>(F->characteristic());
    for (auto& x : c) {
        BigInt n = x.get_num() % p;
        if (n < 0) n += p;
        BigInt d = x.get_den() % p;
        e.push_back(F->div(n.get_ui(), d.get_ui()));
    }
    return FqPoly(F, e);
}

std::vector<Rational> square_linear(const BigInt& a)
{
    // (x - a)^2 low to high
    return {Rational(a * a), Rational(-2 * a), Rational(1)};
}

} // namespace

TEST(P1List, SizesAndNormalization)
{
    EXPECT_EQ(P1List(1).size(), 1u);
    EXPECT_EQ(P1List(11).size(), 12u);
    EXPECT_EQ(P1List(6).size(), 12u);
    for (int64_t N : {12, 25, 30, 49}) {
        P1List P(N);
        EXPECT_EQ(int64_t(P.size()), gamma0_index(N));
        std::set<std::pair<int64_t, int64_t>> seen;
        for (size_t i = 0; i < P.size(); ++i) {
            auto pt = P.point(i);
            EXPECT_TRUE(seen.insert(pt).second);
            auto n = P.normalize(pt.first, pt.second);
            EXPECT_EQ(n.index, int32_t(i));
            EXPECT_EQ(n.scalar, 1);
        }
        for (int64_t u = 0; u < N; ++u)
            for (int64_t v = 0; v < N; ++v) {
                auto n = P.normalize(u, v);
                if (gcd64(gcd64(u, v), N) != 1) {
                    EXPECT_EQ(n.index, -1);
                    continue;
                }
                auto pt = P.point(size_t(n.index));
                EXPECT_EQ(mod64(pt.first * n.scalar, N), u);
                EXPECT_EQ(mod64(pt.second * n.scalar, N), v);
            }
    }
}

TEST(Heilbronn, Determinants)
{
    for (int64_t l : primes_up_to(60))
        for (auto& h : heilbronn_matrices(l)) EXPECT_EQ(h[0] * h[3] - h[1] * h[2], l);
    for (int64_t n : {1, 4, 6, 9, 11})
        for (auto& h : heilbronn_merel(n)) EXPECT_EQ(h[0] * h[3] - h[1] * h[2], n);
    EXPECT_THROW(heilbronn_matrices(4), std::invalid_argument);
}

TEST(ModularSymbols, GenusDimensions)
{
    auto S11 = ModularSymbolSpace::build(11, 2, DirichletCharacter::trivial(11));
    EXPECT_EQ(S11->full_rank(), 3u);
    EXPECT_EQ(S11->cuspidal_rank(), 2u);
    for (int64_t N = 1; N <= 120; ++N) {
        auto S = ModularSymbolSpace::build(N, 2, DirichletCharacter::trivial(N));
        EXPECT_EQ(int64_t(S->cuspidal_rank()), 2 * genus_exact(N)) << N;
        EXPECT_TRUE(S->boundary_consistent()) << N;
    }
    EXPECT_EQ(ModularSymbolSpace::build(7, 2, DirichletCharacter::trivial(7))->cuspidal_rank(), 0u);
    EXPECT_EQ(ModularSymbolSpace::build(23, 2, DirichletCharacter::trivial(23))->cuspidal_rank(), 4u);
}

TEST(ModularSymbols, CharacterDimensions)
{
    for (int64_t N = 1; N <= 26; ++N)
        for (int k = 2; k <= 5; ++k)
            for (auto& orb : galois_orbits(DirichletCharacter::enumerate(N))) {
                const auto& chi = orb[0];
                auto S = ModularSymbolSpace::build(N, k, chi);
                size_t want = size_t(2 * oracle::dim_cusp_forms(N, k, chi)) * S->scalar_degree();
                EXPECT_EQ(S->cuspidal_rank(), want) << N << " " << k << " " << chi.id();
                if (chi.parity() != (k % 2 ? -1 : 1)) EXPECT_FALSE(S->note().empty());
            }
}

TEST(ModularSymbols, Level11EtaProduct)
{
    auto S = ModularSymbolSpace::build(11, 2, DirichletCharacter::trivial(11));
    auto f = eta_product(2, 11, 2, 60);
    for (int64_t l : primes_up_to(60)) {
        auto cp = charpoly_q(RatMatrix(S->hecke(l)));
        EXPECT_EQ(cp, square_linear(f[size_t(l)])) << l;
    }
    IntMatrix T2 = S->hecke(2);
    EXPECT_EQ(S->hecke(4), T2 * T2 - S->diamond(2).scaled(2));
    EXPECT_EQ(S->hecke(1), IntMatrix::identity(2));
    EXPECT_THROW(S->hecke(0), std::invalid_argument);
}

TEST(ModularSymbols, LevelOneDelta)
{
    auto S = ModularSymbolSpace::build(1, 12, DirichletCharacter::trivial(1));
    auto tau = eta_product(24, 1, 0, 30);
    for (int64_t l : {2, 3, 5, 7, 11, 13})
        EXPECT_EQ(charpoly_q(RatMatrix(S->hecke(l))), square_linear(tau[size_t(l)])) << l;
}

TEST(ModularSymbols, OperatorIdentities)
{
    for (int64_t N : {13, 23, 28}) {
        for (int k : {2, 3}) {
            for (auto& orb : galois_orbits(DirichletCharacter::enumerate(N))) {
                auto S = ModularSymbolSpace::build(N, k, orb[0]);
                if (S->cuspidal_rank() == 0) continue;
                const auto& chi = orb[0];
                size_t d = S->cuspidal_rank();
                IntMatrix Z = S->zeta();
                IntMatrix star = S->star();
                EXPECT_EQ(star * star, IntMatrix::identity(d));
                std::vector<IntMatrix> ops{S->hecke(2), S->hecke(3), S->hecke(5), S->hecke(7), star, Z};
                for (int64_t a = 1; a < N; ++a) {
                    if (gcd64(a, N) != 1) continue;
                    IntMatrix D = S->diamond(a);
                    IntMatrix expect = IntMatrix::identity(d);
                    for (int64_t e = 0; e < chi.exponent_at(a); ++e) expect = expect * Z;
                    EXPECT_EQ(D, expect);
                }
                for (auto& A : ops)
                    for (auto& B : ops) EXPECT_EQ(A * B, B * A);
                // Merel's matrices for composite index agree with the recursion
                for (int64_t n : {4, 9, 6}) {
                    if (gcd64(n, N) != 1) continue;
                    IntMatrix M = S->cuspidal_projection() * S->full_operator(heilbronn_merel(n)) * S->cuspidal_basis();
                    EXPECT_EQ(M, S->hecke(n)) << N << " " << chi.id() << " " << n;
                }
            }
        }
    }
}

TEST(ModularSymbols, StarEigenspaces)
{
    auto S = ModularSymbolSpace::build(11, 2, DirichletCharacter::trivial(11));
    RatMatrix st(S->star());
    RatMatrix I = RatMatrix::identity(2);
    EXPECT_EQ(2 - rank_q(st - I), 1u);
    RatMatrix neg(S->star().scaled(-1));
    EXPECT_EQ(2 - rank_q(neg - I), 1u);
}

TEST(ModularSymbols, ReductionMatchesExact)
{
    for (int64_t N : {23, 37, 1}) {
        int k = N == 1 ? 12 : 2;
        auto S = ModularSymbolSpace::build(N, k, DirichletCharacter::trivial(N));
        for (uint64_t p : {2, 3, 5})
            for (int64_t l : {2, 3, 5, 7}) EXPECT_EQ(S->hecke_prime_mod(l, p), S->hecke_prime(l).mod_p(FiniteField::make(p, 1)));
    }
    auto chi = DirichletCharacter::enumerate(13)[2];
    auto S = ModularSymbolSpace::build(13, 2, chi);
    ASSERT_GT(S->cuspidal_rank(), 0u);
    EXPECT_EQ(S->hecke_prime_mod(3, 7), S->hecke_prime(3).mod_p(FiniteField::make(7, 1)));
    EXPECT_EQ(S->zeta_mod(7), S->zeta().mod_p(FiniteField::make(7, 1)));
}

TEST(ModularSymbols, LatticeStructure)
{
    for (int64_t N : {1, 11, 23, 27}) {
        int k = N == 1 ? 12 : 2;
        auto S = ModularSymbolSpace::build(N, k, DirichletCharacter::trivial(N));
        EXPECT_EQ(S->cuspidal_projection() * S->cuspidal_basis(), IntMatrix::identity(S->cuspidal_rank()));
        EXPECT_TRUE((S->boundary_matrix() * S->cuspidal_basis()).is_zero());
        EXPECT_EQ(rank_q(S->lattice_basis()), S->full_rank());
    }
}

TEST(DirectModP, Dimensions)
{
    EXPECT_EQ(ModPSymbolSpace::build(11, 2, 2)->cuspidal_dimension(), 2u);
    EXPECT_EQ(ModPSymbolSpace::build(7, 2, 2)->cuspidal_dimension(), 0u);
    EXPECT_THROW(ModPSymbolSpace::build(11, 3, 3), std::invalid_argument);
    EXPECT_THROW(ModPSymbolSpace::build(22, 2, 2), std::invalid_argument);
}

TEST(DirectModP, MatchesReduction)
{
    FieldPtr F2 = FiniteField::make(2, 1);
    for (int64_t N : {23, 31, 37, 43, 61, 65, 67, 89, 91, 97, 125}) {
        auto D = ModPSymbolSpace::build(N, 2, 2);
        auto S = ModularSymbolSpace::build(N, 2, DirichletCharacter::trivial(N));
        ASSERT_EQ(D->cuspidal_dimension(), S->cuspidal_rank()) << N;
        for (int64_t l : {2, 3, 5, 7, 11}) {
            FqPoly direct = charpoly(D->hecke_prime(l));
            FqPoly reduced = reduce_qpoly(charpoly_q(RatMatrix(S->hecke_prime(l))), F2);
            EXPECT_EQ(direct, reduced) << N << " " << l;
        }
    }
}

#include <gtest/gtest.h>

#include <filesystem>

#include "katz1/arith.hpp"
#include "katz1/weight_one.hpp"

using namespace katz1;

namespace {

// q prod (1 - q^n)(1 - q^{Mn})
std::vector<int64_t> eta_pair(int64_t M, size_t prec)
{
    std::vector<int64_t> f(prec + 1, 0);
    f[1] = 1;
    auto mul = [&](size_t step) {
        for (size_t i = prec; i >= step; --i) f[i] -= f[i - step];
    };
    for (size_t n = 1; n <= prec; ++n) mul(n);
    for (size_t n = static_cast<size_t>(M); n <= prec; n += static_cast<size_t>(M)) mul(n);
    return f;
}

FqPoly from_bits(const FieldPtr& F, const std::string& low_to_high)
{
    std::vector<FiniteField::Elt> c;
    for (char ch : low_to_high) c.push_back(static_cast<FiniteField::Elt>(ch - '0'));
    return FqPoly(F, c);
}

std::shared_ptr<const WeightOneModule> module(int64_t N, uint64_t p = 2)
{
    return WeightOneModule::build(N, p, p == 2 ? DirichletCharacter::trivial(N) : DirichletCharacter::quadratic(N));
}

} // namespace

TEST(Weight1Cutoff, Values)
{
    EXPECT_EQ(weight1_cutoff(491, 2), 164);
    EXPECT_EQ(weight1_cutoff(1429, 2), 476);
    EXPECT_EQ(weight1_cutoff(23, 3), 10);
    // J_2(15) = 192
    EXPECT_EQ(weight1_cutoff(15, 2, BoundMode::full), 32);
    EXPECT_THROW(weight1_cutoff(4, 3), std::invalid_argument);
    EXPECT_THROW(weight1_cutoff(14, 2), std::invalid_argument);
}

TEST(WeightOneModule, Level23MatchesEtaProduct)
{
    auto S = ModularSymbolSpace::build(23, 2, DirichletCharacter::trivial(23));
    auto W = WeightOneModule::from_algebra(ModPHeckeAlgebra::build(S, 2, 200), weight1_cutoff(23, 2));
    ASSERT_EQ(W->dim(), 1u);
    EXPECT_TRUE(W->exact());
    auto a101 = static_cast<FiniteField::Elt>(mod64(eta_pair(23, 101)[101], 2));
    EXPECT_EQ(W->op(101), FqMatrix::scalar(W->field(), 1, a101));
    FieldPtr K;
    FqVector v = W->eigenvector(0, K);
    auto a = W->qexpansion(v, K, 200);
    EXPECT_THROW(module(23)->qexpansion(v, K, 13), std::out_of_range);
    auto f = eta_pair(23, 200);
    for (size_t n = 1; n <= 200; ++n) EXPECT_EQ(a[n - 1], static_cast<FiniteField::Elt>(mod64(f[n], 2))) << n;
}

TEST(WeightOneModule, Level23Mod3QuadraticCharacter)
{
    auto W = module(23, 3);
    ASSERT_GE(W->dim(), 1u);
    auto f = eta_pair(23, W->cutoff());
    EigenSystem target;
    target.field = FiniteField::make(3, 1);
    target.primes = primes_up_to(W->cutoff());
    for (int64_t l : target.primes) target.a.push_back(static_cast<FiniteField::Elt>(mod64(f[static_cast<size_t>(l)], 3)));
    bool found = false;
    for (auto& s : W->eigensystems()) found = found || systems_match(s, target);
    EXPECT_TRUE(found);
}

TEST(WeightOneModule, ZeroCases)
{
    EXPECT_EQ(module(7)->dim(), 0u);
    EXPECT_EQ(module(11)->dim(), 0u);
    auto W = WeightOneModule::build(23, 3, DirichletCharacter::trivial(23));
    EXPECT_EQ(W->dim(), 0u);
    EXPECT_FALSE(W->note().empty());
    EXPECT_THROW(module(14), std::invalid_argument);
}

TEST(WeightOneModule, Level491)
{
    auto W = module(491);
    EXPECT_EQ(W->dim(), 6u);
    EXPECT_EQ(W->cutoff(), 164);
    EXPECT_TRUE(W->transport_consistent());
    EXPECT_TRUE(W->r_stable(W->cutoff()));
    const auto& fs = W->decomposition().factors;
    ASSERT_EQ(fs.size(), 2u);
    EXPECT_EQ(fs[0].residue_field->order(), 8u);
    EXPECT_EQ(fs[0].local_dimension, 3u);
    EXPECT_EQ(fs[0].upo, 1);
    EXPECT_EQ(fs[0].num_max_ideals(), 3u);
    EXPECT_EQ(fs[1].residue_field->order(), 2u);
    EXPECT_EQ(fs[1].local_dimension, 3u);
    EXPECT_EQ(fs[1].upo, 3);
    auto text = W->session_text("");
    EXPECT_NE(text.find("Eigenvalues = { 1, w, w^2, w^4, 0 }"), std::string::npos) << text;
    EXPECT_NE(text.find("Eigenvalues = { 0, 1 }"), std::string::npos);
    EXPECT_NE(text.find("There are 2 local factors."), std::string::npos);
}

TEST(WeightOneModule, OperatorRecursion)
{
    auto W = module(491);
    // trivial character: T_{l^2} = T_l^2 - 1 (= + 1 in characteristic 2)
    for (int64_t l : {3, 5, 2}) {
        FqMatrix lhs = W->op(l * l);
        FqMatrix rhs = W->op(l) * W->op(l);
        rhs.add_scaled(FqMatrix::identity(W->field(), W->dim()), 1);
        EXPECT_EQ(lhs, rhs) << l;
    }
    EXPECT_EQ(W->op(15), W->op(3) * W->op(5));
    EXPECT_EQ(W->op(3) * W->op(7), W->op(7) * W->op(3));
}

TEST(WeightOneModule, Level1429Charpolys)
{
    auto W = module(1429);
    ASSERT_EQ(W->dim(), 8u);
    auto F = W->field();
    EXPECT_EQ(charpoly(W->op(2)), from_bits(F, "001000101"));  // x^2 (x^3+x^2+1)^2
    EXPECT_EQ(charpoly(W->op(11)), from_bits(F, "001010001")); // x^2 (x^3+x+1)^2
    EXPECT_TRUE(W->transport_consistent());
}

TEST(WeightOneModule, CacheReuse)
{
    auto dir = std::filesystem::temp_directory_path() / ("katz1_w1cache_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    WeightOneModule::Options opt;
    opt.cache_dir = dir.string();
    auto a = WeightOneModule::build(131, 2, DirichletCharacter::trivial(131), opt);
    auto b = WeightOneModule::build(131, 2, DirichletCharacter::trivial(131), opt);
    EXPECT_FALSE(a->from_cache());
    EXPECT_TRUE(b->from_cache());
    EXPECT_EQ(a->dim(), b->dim());
    EXPECT_EQ(a->Lprime(), b->Lprime());
    std::filesystem::remove_all(dir);
}

TEST(EigenspaceCheck, SmallLevels)
{
    for (int64_t N : {23, 31, 47, 59}) {
        auto rep = eigenspace_check(*module(N));
        EXPECT_TRUE(rep.ok) << N << (rep.failures.empty() ? "" : rep.failures[0]);
    }
}

TEST(CrossValidation, Mod2)
{
    for (int64_t N : {23, 31}) {
        auto cv = crossvalidate_mod2(N);
        EXPECT_TRUE(cv.equal) << N;
        EXPECT_FALSE(cv.direct.empty());
    }
}

TEST(SystemsMatch, LargeCoprimeDegrees)
{
    // values in F_4 written over GF(2^40) and GF(2^6): the compositum would be GF(2^120)
    auto F4 = FiniteField::make(2, 2), A = FiniteField::make(2, 40), B = FiniteField::make(2, 6);
    FieldEmbedding ea(F4, A), eb(F4, B);
    EigenSystem x, y;
    x.field = A, y.field = B;
    x.primes = y.primes = {3, 5, 7};
    FiniteField::Elt w = F4->gen();
    x.a = {ea(w), ea(1), ea(0)};
    y.a = {eb(F4->mul(w, w)), eb(1), eb(0)}; // the conjugate system
    EXPECT_TRUE(systems_match(x, y));
    y.a[1] = eb(w);
    EXPECT_FALSE(systems_match(x, y));
    x.a[0] = A->gen(); // generates all of GF(2^40)
    EXPECT_FALSE(systems_match(x, y));
}

TEST(WeightOneModule, Level1367PrimarySpaces)
{
    // two conjugate systems over F_4, each with a primary space of dimension 3
    auto W = module(1367);
    EXPECT_EQ(W->dim(), 16u);
    bool seen = false;
    for (auto& f : W->decomposition().factors)
        if (f.residue_field->order() == 4) {
            seen = true;
            EXPECT_EQ(f.num_max_ideals(), 2u);
            EXPECT_EQ(f.module_dimension, 6u);
            EXPECT_EQ(f.upo, 3);
        }
    EXPECT_TRUE(seen);
}

#include <gtest/gtest.h>

#include "katz1/commutative_structure.hpp"

using namespace katz1;

namespace {

FqMatrix jordan(const FieldPtr& F, size_t n, FiniteField::Elt lambda)
{
    FqMatrix J = FqMatrix::scalar(F, n, lambda);
    for (size_t i = 0; i + 1 < n; ++i) J.set(i, i + 1, 1);
    return J;
}

FqMatrix block_diag(const FqMatrix& a, const FqMatrix& b)
{
    FqMatrix M(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) M.set(i, j, a.get(i, j));
    for (size_t i = 0; i < b.rows(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) M.set(a.rows() + i, a.cols() + j, b.get(i, j));
    return M;
}

// companion matrix of a monic polynomial given low to high without the leading 1
FqMatrix companion(const FieldPtr& F, const std::vector<FiniteField::Elt>& c)
{
    size_t n = c.size();
    FqMatrix M(F, n, n);
    for (size_t i = 1; i < n; ++i) M.set(i, i - 1, 1);
    for (size_t i = 0; i < n; ++i) M.set(i, n - 1, F->neg(c[i]));
    return M;
}

} // namespace

TEST(GeneratedAlgebra, Basics)
{
    auto F = FiniteField::make(5, 1);
    EXPECT_EQ(generated_algebra({FqMatrix::identity(F, 3)}).size(), 1u);
    EXPECT_EQ(generated_algebra({jordan(F, 4, 2)}).size(), 4u);
    FqMatrix a(F, 2, 2), b(F, 2, 2);
    a.set(0, 1, 1);
    b.set(1, 0, 1);
    EXPECT_THROW(generated_algebra({a, b}), std::invalid_argument);
}

TEST(LocalDecomposition, JordanBlock)
{
    auto F = FiniteField::make(3, 1);
    auto d = local_decomposition({jordan(F, 4, 1)});
    ASSERT_EQ(d.factors.size(), 1u);
    const auto& f = d.factors[0];
    EXPECT_EQ(f.residue_degree, 1);
    EXPECT_EQ(f.local_dimension, 4u);
    EXPECT_EQ(f.upo, 4);
    EXPECT_TRUE(f.gorenstein);
    EXPECT_EQ(f.eigenspace_dimension, 1u);
    ASSERT_EQ(f.systems.size(), 1u);
    EXPECT_EQ(f.systems[0][0], 1u);
}

TEST(LocalDecomposition, NonGorenstein)
{
    // F[x,y]/(x,y)^2 acting on itself: basis 1, x, y
    auto F = FiniteField::make(2, 1);
    FqMatrix X(F, 3, 3), Y(F, 3, 3);
    X.set(1, 0, 1);
    Y.set(2, 0, 1);
    auto d = local_decomposition({X, Y});
    ASSERT_EQ(d.factors.size(), 1u);
    EXPECT_EQ(d.factors[0].local_dimension, 3u);
    EXPECT_EQ(d.factors[0].upo, 2);
    EXPECT_FALSE(d.factors[0].gorenstein);
    EXPECT_EQ(d.factors[0].eigenspace_dimension, 2u);
}

TEST(LocalDecomposition, SplitsAndIdempotents)
{
    // x^3 + x + 1 (irreducible) together with a 2x2 nilpotent block and a scalar
    auto F = FiniteField::make(2, 1);
    FqMatrix C = companion(F, {1, 1, 0});
    FqMatrix T = block_diag(block_diag(C, jordan(F, 2, 0)), FqMatrix::identity(F, 1));
    auto d = local_decomposition({T});
    ASSERT_EQ(d.factors.size(), 3u);
    EXPECT_EQ(d.factors[0].residue_degree, 3);
    EXPECT_EQ(d.factors[0].residue_field->order(), 8u);
    EXPECT_EQ(d.factors[0].num_max_ideals(), 3u);
    EXPECT_EQ(d.factors[0].upo, 1);
    size_t total = 0;
    FqMatrix sum(F, 6, 6);
    for (auto& f : d.factors) {
        total += f.basis.cols();
        EXPECT_EQ(f.idempotent * f.idempotent, f.idempotent);
        EXPECT_EQ(f.idempotent * T, T * f.idempotent);
        sum.add_scaled(f.idempotent, 1);
    }
    EXPECT_EQ(total, 6u);
    EXPECT_EQ(sum, FqMatrix::identity(F, 6));
    // the systems of the cubic factor are the three roots, permuted by Frobenius
    const auto& K = *d.factors[0].residue_field;
    for (auto& s : d.factors[0].systems) {
        auto x = s[0];
        EXPECT_EQ(K.add(K.add(K.mul(K.mul(x, x), x), x), 1), 0u);
    }
    EXPECT_TRUE(conjugate_systems(K, d.factors[0].systems[0], d.factors[0].systems[1]));
}

TEST(LocalDecomposition, NeedsRandomSeparation)
{
    // two generators, neither separating two eigenvalue pairs alone
    auto F = FiniteField::make(3, 1);
    FqMatrix A(F, 4, 4), B(F, 4, 4);
    for (size_t i = 0; i < 4; ++i) {
        A.set(i, i, i < 2 ? 1 : 2);
        B.set(i, i, i % 2 ? 1 : 2);
    }
    auto d = local_decomposition({A, B}, 7);
    EXPECT_EQ(d.factors.size(), 4u);
    for (auto& f : d.factors) EXPECT_EQ(f.local_dimension, 1u);
}

TEST(Upo, Powers)
{
    auto F = FiniteField::make(7, 1);
    FqMatrix N = jordan(F, 5, 0);
    EXPECT_EQ(upo({N}), 5);
    EXPECT_EQ(upo({N * N}), 3);
}

TEST(PowerString, Gf8)
{
    auto K = FiniteField::make(2, 3);
    EXPECT_EQ(power_string(*K, 0), "0");
    EXPECT_EQ(power_string(*K, 1), "1");
    EXPECT_EQ(power_string(*K, K->gen()), "w");
    EXPECT_EQ(power_string(*K, K->pow(K->gen(), 4)), "w^4");
}

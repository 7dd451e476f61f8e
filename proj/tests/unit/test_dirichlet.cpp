#include <gtest/gtest.h>

#include <complex>
#include <set>

#include "katz1/arith.hpp"
#include "katz1/dirichlet.hpp"

using namespace katz1;

namespace {

std::complex<double> cvalue(const DirichletCharacter& chi, int64_t a)
{
    int64_t e = chi.exponent_at(a);
    if (e < 0) return 0.0;
    return std::polar(1.0, 2 * M_PI * double(e) / double(chi.order()));
}

} // namespace

TEST(Dirichlet, EnumerationCounts)
{
    for (int64_t N : {1, 2, 3, 4, 8, 12, 16, 23, 35, 40, 63, 97}) {
        auto chars = DirichletCharacter::enumerate(N);
        EXPECT_EQ(int64_t(chars.size()), euler_phi(N)) << N;
        EXPECT_TRUE(chars[0].is_trivial());
        std::set<std::string> ids;
        for (auto& c : chars) ids.insert(c.id());
        EXPECT_EQ(ids.size(), chars.size());
    }
}

TEST(Dirichlet, Orthogonality)
{
    for (int64_t N : {8, 15, 23, 40, 63}) {
        auto chars = DirichletCharacter::enumerate(N);
        for (size_t i = 0; i < chars.size(); ++i)
            for (size_t j = 0; j < chars.size(); ++j) {
                std::complex<double> s = 0;
                for (int64_t a = 0; a < N; ++a) s += cvalue(chars[i], a) * std::conj(cvalue(chars[j], a));
                double expect = i == j ? double(euler_phi(N)) : 0.0;
                EXPECT_NEAR(std::abs(s - expect), 0.0, 1e-8);
            }
    }
}

TEST(Dirichlet, MultiplicativityAndPeriodicity)
{
    for (int64_t N : {20, 45, 91}) {
        for (auto& chi : DirichletCharacter::enumerate(N)) {
            for (int64_t a = 0; a < N; ++a)
                for (int64_t b = 0; b < N; ++b) {
                    auto lhs = cvalue(chi, a * b);
                    auto rhs = cvalue(chi, a) * cvalue(chi, b);
                    ASSERT_NEAR(std::abs(lhs - rhs), 0.0, 1e-9);
                }
            EXPECT_EQ(chi.exponent_at(N + 7), chi.exponent_at(7));
        }
    }
}

TEST(Dirichlet, QuadraticParity)
{
    auto q23 = DirichletCharacter::quadratic(23);
    EXPECT_EQ(q23.order(), 2);
    EXPECT_FALSE(q23.is_even());
    auto q13 = DirichletCharacter::quadratic(13);
    EXPECT_TRUE(q13.is_even());
    for (int64_t a = 1; a < 23; ++a) EXPECT_EQ(q23.exponent_at(a) == 0 ? 1 : -1, kronecker(a, 23));
    EXPECT_EQ(q23.conductor(), 23);
    EXPECT_EQ(DirichletCharacter::quadratic(45).conductor(), 5);
}

TEST(Dirichlet, ConductorOracle)
{
    for (int64_t N : {12, 36, 40, 63}) {
        for (auto& chi : DirichletCharacter::enumerate(N)) {
            int64_t f = N;
            for (int64_t d : divisors(N)) {
                bool periodic = true;
                for (int64_t a = 0; a < N && periodic; ++a)
                    for (int64_t b = a + d; b < N; b += d)
                        if (gcd64(a, N) == 1 && gcd64(b, N) == 1 && chi.exponent_at(a) != chi.exponent_at(b)) {
                            periodic = false;
                            break;
                        }
                if (periodic) {
                    f = d;
                    break;
                }
            }
            EXPECT_EQ(chi.conductor(), f) << chi.id();
        }
    }
}

TEST(Dirichlet, OrbitsPartition)
{
    for (int64_t N : {13, 40, 63}) {
        auto chars = DirichletCharacter::enumerate(N);
        auto orbits = galois_orbits(chars);
        size_t total = 0;
        for (auto& o : orbits) {
            total += o.size();
            EXPECT_EQ(int64_t(o.size()), euler_phi(o[0].order()));
            for (auto& c : o) EXPECT_EQ(c.order(), o[0].order());
        }
        EXPECT_EQ(total, chars.size());
    }
}

TEST(Dirichlet, ParseRoundTrip)
{
    for (auto& chi : DirichletCharacter::enumerate(40)) {
        std::string id = chi.id();
        auto spec = id.substr(id.find('/') + 1);
        EXPECT_EQ(DirichletCharacter::parse(40, spec), chi);
    }
    EXPECT_TRUE(DirichletCharacter::parse(23, "trivial").is_trivial());
    EXPECT_THROW(DirichletCharacter::parse(23, "4:1"), std::invalid_argument);
}

TEST(Dirichlet, Reduction)
{
    auto chars = DirichletCharacter::enumerate(13);
    for (auto& chi : chars) {
        if (chi.order() % 2 == 0) {
            EXPECT_THROW(reduce_character(chi, 2), std::domain_error);
            continue;
        }
        auto r = reduce_character(chi, 2);
        const auto& F = *r.field();
        uint64_t f = chi.order() == 1 ? 1 : uint64_t(multiplicative_order(2, chi.order()));
        EXPECT_EQ(F.order(), uint64_t(1) << f);
        for (int64_t a = 0; a < 13; ++a)
            for (int64_t b = 0; b < 13; ++b) EXPECT_EQ(r(a * b), F.mul(r(a), r(b)));
        EXPECT_EQ(r(0), 0u);
        EXPECT_EQ(r(1), 1u);
    }
    // order 3 character mod 7 lands in GF(4) with values a primitive cube root of unity
    for (auto& chi : DirichletCharacter::enumerate(7)) {
        if (chi.order() != 3) continue;
        auto r = reduce_character(chi, 2);
        EXPECT_EQ(r.field()->order(), 4u);
        EXPECT_NE(r(3), 1u);
        EXPECT_EQ(r.field()->pow(r(3), 3), 1u);
    }
}

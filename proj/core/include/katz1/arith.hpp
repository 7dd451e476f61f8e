#pragma once

// Elementary integer arithmetic used throughout: gcds, modular inverses,
// factorisation of machine-size integers, arithmetic functions, and a few
// helpers around GMP integers and rationals.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace katz1 {

using BigInt = mpz_class;
using Rational = mpq_class;

int64_t gcd64(int64_t a, int64_t b);
int64_t lcm64(int64_t a, int64_t b);

/// Extended gcd: returns g >= 0 and sets x, y with a*x + b*y = g.
int64_t xgcd64(int64_t a, int64_t b, int64_t& x, int64_t& y);

/// Least non-negative residue of a modulo m (m > 0).
inline int64_t mod64(int64_t a, int64_t m)
{
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

uint64_t mulmod64(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod64(uint64_t a, uint64_t e, uint64_t m);

/// Inverse of a modulo m; throws std::domain_error when gcd(a, m) != 1.
int64_t invmod64(int64_t a, int64_t m);

bool is_prime64(uint64_t n);

/// Prime factorisation n = prod p^e, primes ascending. n >= 1.
std::vector<std::pair<int64_t, int>> factor64(int64_t n);

std::vector<int64_t> prime_divisors(int64_t n);
std::vector<int64_t> divisors(int64_t n);
std::vector<int64_t> primes_up_to(int64_t bound);

int64_t euler_phi(int64_t n);

/// Index of Gamma_0(N) in SL_2(Z): N * prod_{l | N} (1 + 1/l).
int64_t gamma0_index(int64_t n);

/// Multiplicative order of a modulo m (gcd(a, m) = 1, m >= 1).
int64_t multiplicative_order(int64_t a, int64_t m);

/// Kronecker symbol (a/n) for n >= 1.
int kronecker(int64_t a, int64_t n);

bool is_squarefree(int64_t n);

/// Integer square root floor(sqrt(n)) for n >= 0.
int64_t isqrt64(int64_t n);

/// "a/b" in lowest terms, or "a" when the denominator is one.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

/// Floor of a rational number.
BigInt floor_q(const Rational& q);

/// Residue of a GMP integer modulo a small positive modulus.
uint64_t mod_small(const BigInt& z, uint64_t m);

} // namespace katz1

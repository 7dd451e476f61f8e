#include "katz1/arith.hpp"

#include <algorithm>
#include <stdexcept>

namespace katz1 {

int64_t gcd64(int64_t a, int64_t b)
{
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

int64_t lcm64(int64_t a, int64_t b)
{
    if (a == 0 || b == 0) return 0;
    return (a / gcd64(a, b)) * b < 0 ? -((a / gcd64(a, b)) * b) : (a / gcd64(a, b)) * b;
}

int64_t xgcd64(int64_t a, int64_t b, int64_t& x, int64_t& y)
{
    int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        int64_t q = a / b;
        int64_t t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

uint64_t mulmod64(uint64_t a, uint64_t b, uint64_t m)
{
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod64(uint64_t a, uint64_t e, uint64_t m)
{
    uint64_t r = 1 % m;
    a %= m;
    while (e != 0) {
        if (e & 1) r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return r;
}

int64_t invmod64(int64_t a, int64_t m)
{
    int64_t x, y;
    int64_t g = xgcd64(mod64(a, m), m, x, y);
    if (g != 1) throw std::domain_error("invmod64: not invertible");
    return mod64(x, m);
}

bool is_prime64(uint64_t n)
{
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::pair<int64_t, int>> factor64(int64_t n)
{
    if (n < 1) throw std::invalid_argument("factor64: n must be positive");
    std::vector<std::pair<int64_t, int>> out;
    for (int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<int64_t> prime_divisors(int64_t n)
{
    std::vector<int64_t> out;
    for (auto& [p, e] : factor64(n)) out.push_back(p);
    return out;
}

std::vector<int64_t> divisors(int64_t n)
{
    std::vector<int64_t> out{1};
    for (auto& [p, e] : factor64(n)) {
        size_t cur = out.size();
        int64_t pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < cur; ++j) out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int64_t> primes_up_to(int64_t bound)
{
    std::vector<int64_t> out;
    if (bound < 2) return out;
    std::vector<bool> composite(static_cast<size_t>(bound) + 1, false);
    for (int64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (int64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return out;
}

int64_t euler_phi(int64_t n)
{
    int64_t r = n;
    for (int64_t p : prime_divisors(n)) r = r / p * (p - 1);
    return r;
}

int64_t gamma0_index(int64_t n)
{
    int64_t r = n;
    for (int64_t p : prime_divisors(n)) r = r / p * (p + 1);
    return r;
}

int64_t multiplicative_order(int64_t a, int64_t m)
{
    if (m == 1) return 1;
    if (gcd64(a, m) != 1) throw std::domain_error("multiplicative_order: not a unit");
    int64_t lam = euler_phi(m);
    int64_t ord = lam;
    for (auto& [p, e] : factor64(lam)) {
        for (int i = 0; i < e; ++i) {
            if (powmod64(mod64(a, m), ord / p, m) == 1 % static_cast<uint64_t>(m))
                ord /= p;
            else
                break;
        }
    }
    return ord;
}

int kronecker(int64_t a, int64_t n)
{
    if (n < 1) throw std::invalid_argument("kronecker: n must be positive");
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        int64_t r = mod64(a, 8);
        if (r == 0 || r == 2 || r == 4 || r == 6) return 0;
        if (r == 3 || r == 5) result = -result;
    }
    a = mod64(a, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            int64_t r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

bool is_squarefree(int64_t n)
{
    for (auto& [p, e] : factor64(n))
        if (e > 1) return false;
    return true;
}

int64_t isqrt64(int64_t n)
{
    if (n < 0) throw std::domain_error("isqrt64: negative");
    BigInt z(static_cast<long>(n));
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
    return r.get_si();
}

std::string to_string(const Rational& q)
{
    Rational c = q;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

BigInt floor_q(const Rational& q)
{
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

uint64_t mod_small(const BigInt& z, uint64_t m)
{
    return mpz_fdiv_ui(z.get_mpz_t(), m);
}

} // namespace katz1

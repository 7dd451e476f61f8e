#pragma once

// Cohen-Oesterle dimension formula for S_k(Gamma_0(N), chi), k >= 2.

#include <cmath>
#include <complex>

#include "katz1/arith.hpp"
#include "katz1/dirichlet.hpp"

namespace oracle {

inline std::complex<double> char_value(const katz1::DirichletCharacter& chi, int64_t a)
{
    int64_t e = chi.exponent_at(a);
    if (e < 0) return 0.0;
    return std::polar(1.0, 2 * M_PI * double(e) / double(chi.order()));
}

inline int64_t dim_cusp_forms(int64_t N, int k, const katz1::DirichletCharacter& chi)
{
    if (chi.parity() != (k % 2 == 0 ? 1 : -1)) return 0;
    int64_t f = chi.conductor();
    double idx = double(N);
    double lam = 1;
    for (auto [p, r] : katz1::factor64(N)) {
        idx *= 1.0 + 1.0 / double(p);
        int s = 0;
        for (int64_t g = f; g % p == 0; g /= p) ++s;
        double pr = 1;
        if (2 * s <= r) {
            int rp = r / 2;
            pr = (r % 2 == 0) ? std::pow(double(p), rp) + std::pow(double(p), rp - 1) : 2 * std::pow(double(p), rp);
        } else {
            pr = 2 * std::pow(double(p), r - s);
        }
        lam *= pr;
    }
    double gamma = (k % 2) ? 0.0 : (k % 4 == 2 ? -0.25 : 0.25);
    double mu = (k % 3 == 1) ? 0.0 : (k % 3 == 2 ? -1.0 / 3 : 1.0 / 3);
    std::complex<double> s4 = 0, s3 = 0;
    for (int64_t x = 0; x < N; ++x) {
        if ((x * x + 1) % N == 0) s4 += char_value(chi, x);
        if ((x * x + x + 1) % N == 0) s3 += char_value(chi, x);
    }
    std::complex<double> d = double(k - 1) / 12.0 * idx - 0.5 * lam + gamma * s4 + mu * s3;
    if (k == 2 && chi.is_trivial()) d += 1.0;
    return std::llround(d.real());
}

} // namespace oracle

#pragma once

// Dense integer and rational matrices (GMP entries): Hermite and Smith normal
// forms, integral kernels, rational characteristic polynomials.

#include <cstddef>
#include <string>
#include <vector>

#include "katz1/arith.hpp"
#include "katz1/fq_matrix.hpp"

namespace katz1 {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(size_t rows, size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
    static IntMatrix identity(size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

    size_t rows() const { return r_; }
    size_t cols() const { return c_; }
    BigInt& at(size_t i, size_t j) { return a_[i * c_ + j]; }
    const BigInt& at(size_t i, size_t j) const { return a_[i * c_ + j]; }

    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator+(const IntMatrix& o) const;
    IntMatrix operator-(const IntMatrix& o) const;
    IntMatrix scaled(const BigInt& s) const;
    bool operator==(const IntMatrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    IntMatrix transpose() const;
    IntMatrix row_range(size_t begin, size_t end) const;
    IntMatrix col_range(size_t begin, size_t end) const;
    bool is_zero() const;

    void swap_rows(size_t i, size_t j);
    /// row[dst] += s * row[src]
    void add_row_multiple(size_t dst, size_t src, const BigInt& s);
    void negate_row(size_t i);
    void swap_cols(size_t i, size_t j);
    void add_col_multiple(size_t dst, size_t src, const BigInt& s);
    void negate_col(size_t j);

    /// Reduction into a finite field (prime field or any field of that characteristic).
    FqMatrix mod_p(const FieldPtr& F) const;

    std::string to_string() const;

private:
    size_t r_ = 0, c_ = 0;
    std::vector<BigInt> a_;
};

struct HnfResult {
    IntMatrix H;                // U * M, row-style Hermite form, zero rows last
    IntMatrix U;                // unimodular
    std::vector<size_t> pivots; // pivot column of each nonzero row
    size_t rank = 0;
};

/// Row-style Hermite normal form with transformation. With want_u = false the
/// transformation is skipped (U left empty).
HnfResult hnf(const IntMatrix& M, bool want_u = true);

struct SnfResult {
    IntMatrix D, U, V; // D = U * M * V
    std::vector<BigInt> diagonal;
};

SnfResult smith_normal_form(const IntMatrix& M);

BigInt determinant(const IntMatrix& M);
size_t rank_mod(const IntMatrix& M, uint64_t prime);

/// Coordinates c with c * H = v for v in the row lattice of the Hermite form
/// H (nonzero rows with the given pivots). Returns false when v is not in it.
bool hnf_coordinates(const IntMatrix& H, const std::vector<size_t>& pivots, const std::vector<BigInt>& v,
                     std::vector<BigInt>& coords);

/// Basis K (columns) of the integer kernel {x in Z^n : M x = 0} together with
/// P such that P * K = identity.
void integer_kernel(const IntMatrix& M, IntMatrix& K, IntMatrix& P);

class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(size_t rows, size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
    explicit RatMatrix(const IntMatrix& M);
    static RatMatrix identity(size_t n);

    size_t rows() const { return r_; }
    size_t cols() const { return c_; }
    Rational& at(size_t i, size_t j) { return a_[i * c_ + j]; }
    const Rational& at(size_t i, size_t j) const { return a_[i * c_ + j]; }

    RatMatrix operator*(const RatMatrix& o) const;
    RatMatrix operator-(const RatMatrix& o) const;
    bool operator==(const RatMatrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    RatMatrix transpose() const;

private:
    size_t r_ = 0, c_ = 0;
    std::vector<Rational> a_;
};

/// Characteristic polynomial over Q, coefficients low to high (monic).
std::vector<Rational> charpoly_q(const RatMatrix& M);
/// Rank over Q.
size_t rank_q(const RatMatrix& M);
/// Right kernel over Q (basis as columns).
RatMatrix kernel_q(const RatMatrix& M);

/// Pretty polynomial with rational coefficients, e.g. "x^2+4*x+4".
std::string rational_poly_string(const std::vector<Rational>& c, const std::string& var = "x");

} // namespace katz1

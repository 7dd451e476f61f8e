#pragma once

// Dense matrices over a finite field. Over F_2 rows are bit-packed and the
// row operations, products and eliminations work a word at a time.

#include <cstdint>
#include <string>
#include <vector>

#include "katz1/finite_field.hpp"
#include "katz1/fq_poly.hpp"

namespace katz1 {

using FqVector = std::vector<FiniteField::Elt>;

class FqMatrix {
public:
    using Elt = FiniteField::Elt;

    FqMatrix() = default;
    FqMatrix(FieldPtr F, size_t rows, size_t cols);

    static FqMatrix identity(FieldPtr F, size_t n);
    static FqMatrix scalar(FieldPtr F, size_t n, Elt s);
    /// Matrix whose columns are the given vectors (all of length n).
    static FqMatrix from_columns(FieldPtr F, size_t n, const std::vector<FqVector>& cols);
    static FqMatrix from_rows(FieldPtr F, size_t m, const std::vector<FqVector>& rows);

    const FieldPtr& field() const { return F_; }
    size_t rows() const { return r_; }
    size_t cols() const { return c_; }
    bool packed() const { return packed_; }
    size_t words_per_row() const { return wpr_; }

    Elt get(size_t i, size_t j) const
    {
        if (packed_) return (data_[i * wpr_ + (j >> 6)] >> (j & 63)) & 1;
        return data_[i * c_ + j];
    }
    void set(size_t i, size_t j, Elt v)
    {
        if (packed_) {
            uint64_t& w = data_[i * wpr_ + (j >> 6)];
            uint64_t bit = uint64_t{1} << (j & 63);
            w = (v & 1) ? (w | bit) : (w & ~bit);
        } else {
            data_[i * c_ + j] = v;
        }
    }
    void add_to(size_t i, size_t j, Elt v) { set(i, j, F_->add(get(i, j), v)); }

    uint64_t* row_words(size_t i) { return data_.data() + i * wpr_; }
    const uint64_t* row_words(size_t i) const { return data_.data() + i * wpr_; }
    Elt* row_elts(size_t i) { return data_.data() + i * c_; }
    const Elt* row_elts(size_t i) const { return data_.data() + i * c_; }

    /// row[dst] += s * row[src]
    void add_row_multiple(size_t dst, size_t src, Elt s);
    void scale_row(size_t i, Elt s);
    void swap_rows(size_t i, size_t j);

    FqVector row(size_t i) const;
    FqVector column(size_t j) const;
    void set_row(size_t i, const FqVector& v);
    void set_column(size_t j, const FqVector& v);

    FqMatrix operator*(const FqMatrix& o) const;
    FqMatrix operator+(const FqMatrix& o) const;
    FqMatrix operator-(const FqMatrix& o) const;
    FqMatrix& operator+=(const FqMatrix& o);
    FqMatrix scaled(Elt s) const;
    void add_scaled(const FqMatrix& o, Elt s);
    bool operator==(const FqMatrix& o) const;
    bool operator!=(const FqMatrix& o) const { return !(*this == o); }

    FqVector operator*(const FqVector& v) const;
    /// Row vector times matrix.
    FqVector left_mul(const FqVector& v) const;

    FqMatrix transpose() const;
    FqMatrix submatrix(const std::vector<size_t>& rows, const std::vector<size_t>& cols) const;
    FqMatrix columns_of(const std::vector<size_t>& cols) const;
    FqMatrix hstack(const FqMatrix& o) const;
    FqMatrix vstack(const FqMatrix& o) const;
    bool is_zero() const;
    bool is_identity() const;
    bool is_square() const { return r_ == c_; }

    /// Image under a field embedding.
    FqMatrix mapped(const FieldEmbedding& emb) const;

    std::string to_string() const;

    /// Underlying storage, for hashing and serialization.
    const std::vector<uint64_t>& raw() const { return data_; }

private:
    FieldPtr F_;
    size_t r_ = 0, c_ = 0;
    bool packed_ = false;
    size_t wpr_ = 0;
    std::vector<uint64_t> data_;
};

/// Reduced row echelon form in place; returns the rank, optionally the pivot columns.
size_t rref(FqMatrix& M, std::vector<size_t>* pivots = nullptr);
size_t rank(const FqMatrix& M);
/// Basis of {v : M v = 0} as the columns of the result.
FqMatrix kernel(const FqMatrix& M);
/// Basis of {v : v M = 0} as the rows of the result.
FqMatrix left_kernel(const FqMatrix& M);
/// Column space basis (columns).
FqMatrix column_space(const FqMatrix& M);
/// Solve A X = B; returns false when inconsistent.
bool solve(const FqMatrix& A, const FqMatrix& B, FqMatrix& X);
/// Inverse; throws std::domain_error when singular.
FqMatrix inverse(const FqMatrix& M);

/// Element a of `big` lying in the image of emb: sub -> big, as an element of
/// sub. Throws std::invalid_argument when a is outside the image.
FiniteField::Elt descend(const FieldEmbedding& emb, FiniteField::Elt a);
/// Degree of the subfield generated by the values.
int value_degree(const FiniteField& F, const std::vector<FiniteField::Elt>& values);

FqPoly charpoly(const FqMatrix& M);
FqPoly minpoly(const FqMatrix& M);
/// Minimal polynomial of the vector v under M.
FqPoly minpoly_vector(const FqMatrix& M, const FqVector& v);
FqMatrix poly_eval(const FqPoly& f, const FqMatrix& M);

/// Intersection of two column-spans (basis as columns).
FqMatrix intersect_spaces(const FqMatrix& U, const FqMatrix& V);
/// Coordinates of the columns of X in the column basis B (B of full column rank).
bool coordinates_in(const FqMatrix& B, const FqMatrix& X, FqMatrix& C);

/// Incremental semi-echelon basis for row vectors of fixed length, used to
/// detect linear independence one vector at a time.
class EchelonBuilder {
public:
    EchelonBuilder(FieldPtr F, size_t length);
    /// Reduces v against the current basis; if nonzero, appends it. Returns
    /// true when v was independent.
    bool insert(FqMatrix v); // v is a 1 x length matrix
    size_t rank() const { return pivots_.size(); }
    const std::vector<size_t>& pivots() const { return pivots_; }
    /// Is v in the span (v unchanged)?
    bool contains(const FqMatrix& v) const;

private:
    void reduce(FqMatrix& v) const;
    FieldPtr F_;
    size_t len_;
    std::vector<FqMatrix> rows_;
    std::vector<size_t> pivots_;
};

} // namespace katz1

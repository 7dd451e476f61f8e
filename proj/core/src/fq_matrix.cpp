#include "katz1/fq_matrix.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace katz1 {

FqMatrix::FqMatrix(FieldPtr F, size_t rows, size_t cols) : F_(std::move(F)), r_(rows), c_(cols)
{
    packed_ = F_->is_f2();
    if (packed_) {
        wpr_ = (c_ + 63) / 64;
        data_.assign(r_ * wpr_, 0);
    } else {
        wpr_ = 0;
        data_.assign(r_ * c_, 0);
    }
}

FqMatrix FqMatrix::identity(FieldPtr F, size_t n) { return scalar(std::move(F), n, 1); }

FqMatrix FqMatrix::scalar(FieldPtr F, size_t n, Elt s)
{
    FqMatrix M(std::move(F), n, n);
    if (s != 0)
        for (size_t i = 0; i < n; ++i) M.set(i, i, s);
    return M;
}

FqMatrix FqMatrix::from_columns(FieldPtr F, size_t n, const std::vector<FqVector>& cols)
{
    FqMatrix M(std::move(F), n, cols.size());
    for (size_t j = 0; j < cols.size(); ++j) M.set_column(j, cols[j]);
    return M;
}

FqMatrix FqMatrix::from_rows(FieldPtr F, size_t m, const std::vector<FqVector>& rows)
{
    FqMatrix M(std::move(F), rows.size(), m);
    for (size_t i = 0; i < rows.size(); ++i) M.set_row(i, rows[i]);
    return M;
}

void FqMatrix::add_row_multiple(size_t dst, size_t src, Elt s)
{
    if (s == 0) return;
    if (packed_) {
        uint64_t* d = row_words(dst);
        const uint64_t* a = row_words(src);
        for (size_t w = 0; w < wpr_; ++w) d[w] ^= a[w];
        return;
    }
    Elt* d = row_elts(dst);
    const Elt* a = row_elts(src);
    for (size_t j = 0; j < c_; ++j)
        if (a[j] != 0) d[j] = F_->add(d[j], F_->mul(s, a[j]));
}

void FqMatrix::scale_row(size_t i, Elt s)
{
    if (packed_) {
        if (s == 0) std::fill(row_words(i), row_words(i) + wpr_, 0);
        return;
    }
    Elt* d = row_elts(i);
    for (size_t j = 0; j < c_; ++j) d[j] = F_->mul(d[j], s);
}

void FqMatrix::swap_rows(size_t i, size_t j)
{
    if (i == j) return;
    size_t w = packed_ ? wpr_ : c_;
    std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(i * w), data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * w),
                     data_.begin() + static_cast<std::ptrdiff_t>(j * w));
}

FqVector FqMatrix::row(size_t i) const
{
    FqVector v(c_);
    for (size_t j = 0; j < c_; ++j) v[j] = get(i, j);
    return v;
}

FqVector FqMatrix::column(size_t j) const
{
    FqVector v(r_);
    for (size_t i = 0; i < r_; ++i) v[i] = get(i, j);
    return v;
}

void FqMatrix::set_row(size_t i, const FqVector& v)
{
    if (v.size() != c_) throw std::invalid_argument("set_row: length mismatch");
    for (size_t j = 0; j < c_; ++j) set(i, j, v[j]);
}

void FqMatrix::set_column(size_t j, const FqVector& v)
{
    if (v.size() != r_) throw std::invalid_argument("set_column: length mismatch");
    for (size_t i = 0; i < r_; ++i) set(i, j, v[i]);
}

FqMatrix FqMatrix::operator*(const FqMatrix& o) const
{
    if (c_ != o.r_) throw std::invalid_argument("FqMatrix product: dimension mismatch");
    FqMatrix C(F_, r_, o.c_);
    if (packed_) {
        // method of the four Russians with 8-bit tables
        size_t w = o.wpr_;
        std::vector<uint64_t> table(256 * w);
        for (size_t k0 = 0; k0 < c_; k0 += 8) {
            size_t kb = std::min<size_t>(8, c_ - k0);
            std::fill(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(w), 0);
            for (size_t m = 1; m < (size_t{1} << kb); ++m) {
                size_t low = static_cast<size_t>(__builtin_ctzll(m));
                const uint64_t* prev = table.data() + (m & (m - 1)) * w;
                const uint64_t* src = o.row_words(k0 + low);
                uint64_t* dst = table.data() + m * w;
                for (size_t x = 0; x < w; ++x) dst[x] = prev[x] ^ src[x];
            }
            for (size_t i = 0; i < r_; ++i) {
                const uint64_t* a = row_words(i);
                size_t bits = (a[k0 >> 6] >> (k0 & 63)) & ((size_t{1} << kb) - 1);
                if ((k0 & 63) + kb > 64) bits |= (a[(k0 >> 6) + 1] << (64 - (k0 & 63))) & ((size_t{1} << kb) - 1);
                if (bits == 0) continue;
                const uint64_t* t = table.data() + bits * w;
                uint64_t* c = C.row_words(i);
                for (size_t x = 0; x < w; ++x) c[x] ^= t[x];
            }
        }
        return C;
    }
    for (size_t i = 0; i < r_; ++i) {
        const Elt* a = row_elts(i);
        Elt* c = C.row_elts(i);
        for (size_t k = 0; k < c_; ++k) {
            if (a[k] == 0) continue;
            const Elt* b = o.row_elts(k);
            for (size_t j = 0; j < o.c_; ++j)
                if (b[j] != 0) c[j] = F_->add(c[j], F_->mul(a[k], b[j]));
        }
    }
    return C;
}

FqMatrix FqMatrix::operator+(const FqMatrix& o) const
{
    FqMatrix C = *this;
    C += o;
    return C;
}

FqMatrix& FqMatrix::operator+=(const FqMatrix& o)
{
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("FqMatrix sum: dimension mismatch");
    if (packed_) {
        for (size_t x = 0; x < data_.size(); ++x) data_[x] ^= o.data_[x];
    } else {
        for (size_t x = 0; x < data_.size(); ++x) data_[x] = F_->add(data_[x], o.data_[x]);
    }
    return *this;
}

FqMatrix FqMatrix::operator-(const FqMatrix& o) const
{
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("FqMatrix difference: dimension mismatch");
    FqMatrix C = *this;
    if (packed_) {
        for (size_t x = 0; x < data_.size(); ++x) C.data_[x] ^= o.data_[x];
    } else {
        for (size_t x = 0; x < data_.size(); ++x) C.data_[x] = F_->sub(data_[x], o.data_[x]);
    }
    return C;
}

FqMatrix FqMatrix::scaled(Elt s) const
{
    FqMatrix C = *this;
    if (packed_) {
        if (s == 0) std::fill(C.data_.begin(), C.data_.end(), 0);
    } else {
        for (auto& x : C.data_) x = F_->mul(x, s);
    }
    return C;
}

void FqMatrix::add_scaled(const FqMatrix& o, Elt s)
{
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("add_scaled: dimension mismatch");
    if (s == 0) return;
    if (packed_) {
        for (size_t x = 0; x < data_.size(); ++x) data_[x] ^= o.data_[x];
    } else {
        for (size_t x = 0; x < data_.size(); ++x)
            if (o.data_[x] != 0) data_[x] = F_->add(data_[x], F_->mul(s, o.data_[x]));
    }
}

bool FqMatrix::operator==(const FqMatrix& o) const
{
    return r_ == o.r_ && c_ == o.c_ && data_ == o.data_ && (!F_ || !o.F_ || F_->same_as(*o.F_));
}

FqVector FqMatrix::operator*(const FqVector& v) const
{
    if (v.size() != c_) throw std::invalid_argument("matrix-vector: dimension mismatch");
    FqVector out(r_, 0);
    if (packed_) {
        std::vector<uint64_t> vb(wpr_, 0);
        for (size_t j = 0; j < c_; ++j)
            if (v[j] & 1) vb[j >> 6] |= uint64_t{1} << (j & 63);
        for (size_t i = 0; i < r_; ++i) {
            const uint64_t* a = row_words(i);
            uint64_t acc = 0;
            for (size_t w = 0; w < wpr_; ++w) acc ^= a[w] & vb[w];
            out[i] = static_cast<Elt>(__builtin_parityll(acc));
        }
        return out;
    }
    for (size_t i = 0; i < r_; ++i) {
        const Elt* a = row_elts(i);
        Elt s = 0;
        for (size_t j = 0; j < c_; ++j)
            if (a[j] != 0 && v[j] != 0) s = F_->add(s, F_->mul(a[j], v[j]));
        out[i] = s;
    }
    return out;
}

FqVector FqMatrix::left_mul(const FqVector& v) const
{
    if (v.size() != r_) throw std::invalid_argument("vector-matrix: dimension mismatch");
    FqVector out(c_, 0);
    if (packed_) {
        std::vector<uint64_t> acc(wpr_, 0);
        for (size_t i = 0; i < r_; ++i) {
            if (!(v[i] & 1)) continue;
            const uint64_t* a = row_words(i);
            for (size_t w = 0; w < wpr_; ++w) acc[w] ^= a[w];
        }
        for (size_t j = 0; j < c_; ++j) out[j] = (acc[j >> 6] >> (j & 63)) & 1;
        return out;
    }
    for (size_t i = 0; i < r_; ++i) {
        if (v[i] == 0) continue;
        const Elt* a = row_elts(i);
        for (size_t j = 0; j < c_; ++j)
            if (a[j] != 0) out[j] = F_->add(out[j], F_->mul(v[i], a[j]));
    }
    return out;
}

FqMatrix FqMatrix::transpose() const
{
    FqMatrix T(F_, c_, r_);
    if (packed_) {
        for (size_t i = 0; i < r_; ++i) {
            const uint64_t* a = row_words(i);
            for (size_t w = 0; w < wpr_; ++w) {
                uint64_t x = a[w];
                while (x) {
                    size_t j = w * 64 + static_cast<size_t>(__builtin_ctzll(x));
                    x &= x - 1;
                    T.data_[j * T.wpr_ + (i >> 6)] |= uint64_t{1} << (i & 63);
                }
            }
        }
        return T;
    }
    for (size_t i = 0; i < r_; ++i)
        for (size_t j = 0; j < c_; ++j) T.data_[j * r_ + i] = data_[i * c_ + j];
    return T;
}

FqMatrix FqMatrix::submatrix(const std::vector<size_t>& rows, const std::vector<size_t>& cols) const
{
    FqMatrix S(F_, rows.size(), cols.size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) S.set(i, j, get(rows[i], cols[j]));
    return S;
}

FqMatrix FqMatrix::columns_of(const std::vector<size_t>& cols) const
{
    std::vector<size_t> rows(r_);
    for (size_t i = 0; i < r_; ++i) rows[i] = i;
    return submatrix(rows, cols);
}

FqMatrix FqMatrix::hstack(const FqMatrix& o) const
{
    if (r_ != o.r_) throw std::invalid_argument("hstack: row mismatch");
    FqMatrix S(F_, r_, c_ + o.c_);
    for (size_t i = 0; i < r_; ++i) {
        for (size_t j = 0; j < c_; ++j) S.set(i, j, get(i, j));
        for (size_t j = 0; j < o.c_; ++j) S.set(i, c_ + j, o.get(i, j));
    }
    return S;
}

FqMatrix FqMatrix::vstack(const FqMatrix& o) const
{
    if (c_ != o.c_) throw std::invalid_argument("vstack: column mismatch");
    FqMatrix S(F_, r_ + o.r_, c_);
    std::copy(data_.begin(), data_.end(), S.data_.begin());
    std::copy(o.data_.begin(), o.data_.end(), S.data_.begin() + static_cast<std::ptrdiff_t>(data_.size()));
    return S;
}

bool FqMatrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](uint64_t x) { return x == 0; });
}

bool FqMatrix::is_identity() const
{
    if (r_ != c_) return false;
    for (size_t i = 0; i < r_; ++i)
        for (size_t j = 0; j < c_; ++j)
            if (get(i, j) != (i == j ? 1u : 0u)) return false;
    return true;
}

FqMatrix FqMatrix::mapped(const FieldEmbedding& emb) const
{
    FqMatrix M(emb.target(), r_, c_);
    for (size_t i = 0; i < r_; ++i)
        for (size_t j = 0; j < c_; ++j) {
            Elt x = get(i, j);
            if (x != 0) M.set(i, j, emb(x));
        }
    return M;
}

std::string FqMatrix::to_string() const
{
    std::ostringstream os;
    for (size_t i = 0; i < r_; ++i) {
        os << "[";
        for (size_t j = 0; j < c_; ++j) os << (j ? " " : "") << F_->to_string(get(i, j));
        os << "]\n";
    }
    return os.str();
}

size_t rref(FqMatrix& M, std::vector<size_t>* pivots)
{
    const FieldPtr& F = M.field();
    size_t rank = 0;
    if (pivots) pivots->clear();
    for (size_t c = 0; c < M.cols() && rank < M.rows(); ++c) {
        size_t piv = M.rows();
        if (M.packed()) {
            size_t w = c >> 6;
            uint64_t bit = uint64_t{1} << (c & 63);
            for (size_t i = rank; i < M.rows(); ++i)
                if (M.row_words(i)[w] & bit) {
                    piv = i;
                    break;
                }
            if (piv == M.rows()) continue;
            M.swap_rows(piv, rank);
            const uint64_t* pr = M.row_words(rank);
            size_t wpr = M.words_per_row();
            for (size_t i = 0; i < M.rows(); ++i) {
                if (i == rank) continue;
                uint64_t* r = M.row_words(i);
                if (!(r[w] & bit)) continue;
                for (size_t x = w; x < wpr; ++x) r[x] ^= pr[x];
            }
        } else {
            for (size_t i = rank; i < M.rows(); ++i)
                if (M.get(i, c) != 0) {
                    piv = i;
                    break;
                }
            if (piv == M.rows()) continue;
            M.swap_rows(piv, rank);
            M.scale_row(rank, F->inv(M.get(rank, c)));
            for (size_t i = 0; i < M.rows(); ++i) {
                if (i == rank) continue;
                FiniteField::Elt f = M.get(i, c);
                if (f != 0) M.add_row_multiple(i, rank, F->neg(f));
            }
        }
        if (pivots) pivots->push_back(c);
        ++rank;
    }
    return rank;
}

size_t rank(const FqMatrix& M)
{
    FqMatrix A = M;
    return rref(A);
}

FqMatrix kernel(const FqMatrix& M)
{
    FqMatrix A = M;
    std::vector<size_t> piv;
    size_t r = rref(A, &piv);
    const FieldPtr& F = M.field();
    std::vector<bool> is_piv(M.cols(), false);
    for (size_t c : piv) is_piv[c] = true;
    std::vector<size_t> free_cols;
    for (size_t c = 0; c < M.cols(); ++c)
        if (!is_piv[c]) free_cols.push_back(c);
    FqMatrix K(F, M.cols(), free_cols.size());
    for (size_t j = 0; j < free_cols.size(); ++j) {
        size_t f = free_cols[j];
        K.set(f, j, 1);
        for (size_t i = 0; i < r; ++i) {
            FiniteField::Elt a = A.get(i, f);
            if (a != 0) K.set(piv[i], j, F->neg(a));
        }
    }
    return K;
}

FqMatrix left_kernel(const FqMatrix& M) { return kernel(M.transpose()).transpose(); }

FqMatrix column_space(const FqMatrix& M)
{
    FqMatrix T = M.transpose();
    size_t r = rref(T);
    std::vector<size_t> rows(r), cols(T.cols());
    for (size_t i = 0; i < r; ++i) rows[i] = i;
    for (size_t j = 0; j < T.cols(); ++j) cols[j] = j;
    return T.submatrix(rows, cols).transpose();
}

bool solve(const FqMatrix& A, const FqMatrix& B, FqMatrix& X)
{
    if (A.rows() != B.rows()) throw std::invalid_argument("solve: row mismatch");
    FqMatrix Aug = A.hstack(B);
    std::vector<size_t> piv;
    size_t r = rref(Aug, &piv);
    if (r > 0 && piv.back() >= A.cols()) return false;
    X = FqMatrix(A.field(), A.cols(), B.cols());
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < B.cols(); ++j) X.set(piv[i], j, Aug.get(i, A.cols() + j));
    return true;
}

FqMatrix inverse(const FqMatrix& M)
{
    if (!M.is_square()) throw std::invalid_argument("inverse: non-square matrix");
    FqMatrix X;
    FqMatrix A = M;
    if (rank(A) != M.rows()) throw std::domain_error("inverse: singular matrix");
    solve(M, FqMatrix::identity(M.field(), M.rows()), X);
    return X;
}

FqPoly charpoly(const FqMatrix& M)
{
    if (!M.is_square()) throw std::invalid_argument("charpoly: non-square matrix");
    const FieldPtr& F = M.field();
    size_t n = M.rows();
    std::vector<FiniteField::Elt> H(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) H[i * n + j] = M.get(i, j);
    auto h = [&](size_t i, size_t j) -> FiniteField::Elt& { return H[i * n + j]; };
    // reduce to upper Hessenberg form by similarity
    for (size_t j = 0; j + 2 < n; ++j) {
        size_t i = j + 1;
        while (i < n && h(i, j) == 0) ++i;
        if (i == n) continue;
        if (i != j + 1) {
            for (size_t c = 0; c < n; ++c) std::swap(h(i, c), h(j + 1, c));
            for (size_t r = 0; r < n; ++r) std::swap(h(r, i), h(r, j + 1));
        }
        FiniteField::Elt pinv = F->inv(h(j + 1, j));
        for (size_t r = j + 2; r < n; ++r) {
            FiniteField::Elt u = F->mul(h(r, j), pinv);
            if (u == 0) continue;
            for (size_t c = 0; c < n; ++c) h(r, c) = F->sub(h(r, c), F->mul(u, h(j + 1, c)));
            for (size_t rr = 0; rr < n; ++rr) h(rr, j + 1) = F->add(h(rr, j + 1), F->mul(u, h(rr, r)));
        }
    }
    std::vector<FqPoly> p;
    p.push_back(FqPoly::constant(F, 1));
    FqPoly X = FqPoly::x(F);
    for (size_t m = 0; m < n; ++m) {
        FqPoly next = (X - FqPoly::constant(F, h(m, m))) * p[m];
        FiniteField::Elt prod = 1;
        for (size_t i = m; i-- > 0;) {
            prod = F->mul(prod, h(i + 1, i));
            if (prod == 0) break;
            FiniteField::Elt coef = F->mul(h(i, m), prod);
            if (coef != 0) next = next - p[i].scaled(coef);
        }
        p.push_back(next);
    }
    return p[n];
}

FqPoly minpoly_vector(const FqMatrix& M, const FqVector& v)
{
    const FieldPtr& F = M.field();
    size_t n = M.rows();
    std::vector<FqVector> red;
    std::vector<FqPoly> expr;
    std::vector<size_t> piv;
    FqVector w = v;
    FqPoly e = FqPoly::constant(F, 1);
    FqPoly X = FqPoly::x(F);
    while (true) {
        FqVector r = w;
        FqPoly re = e;
        for (size_t k = 0; k < red.size(); ++k) {
            FiniteField::Elt c = r[piv[k]];
            if (c == 0) continue;
            FiniteField::Elt s = F->neg(c);
            for (size_t j = 0; j < n; ++j)
                if (red[k][j] != 0) r[j] = F->add(r[j], F->mul(s, red[k][j]));
            re = re + expr[k].scaled(s);
        }
        size_t pv = 0;
        while (pv < n && r[pv] == 0) ++pv;
        if (pv == n) return re.monic();
        FiniteField::Elt inv = F->inv(r[pv]);
        for (auto& x : r) x = F->mul(x, inv);
        red.push_back(r);
        expr.push_back(re.scaled(inv));
        piv.push_back(pv);
        w = M * w;
        e = e * X;
    }
}

FqMatrix poly_eval(const FqPoly& f, const FqMatrix& M)
{
    const FieldPtr& F = M.field();
    FqMatrix R(F, M.rows(), M.cols());
    for (int i = f.degree(); i >= 0; --i) {
        R = R * M;
        if (f[i] != 0)
            for (size_t d = 0; d < M.rows(); ++d) R.add_to(d, d, f[i]);
    }
    return R;
}

FqPoly minpoly(const FqMatrix& M)
{
    if (!M.is_square()) throw std::invalid_argument("minpoly: non-square matrix");
    const FieldPtr& F = M.field();
    size_t n = M.rows();
    FqPoly f = FqPoly::constant(F, 1);
    for (size_t i = 0; i < n; ++i) {
        FqVector e(n, 0);
        e[i] = 1;
        // Horner evaluation of f(M) e
        FqVector acc(n, 0);
        for (int d = f.degree(); d >= 0; --d) {
            acc = M * acc;
            acc[i] = F->add(acc[i], f[d]);
        }
        if (std::all_of(acc.begin(), acc.end(), [](auto x) { return x == 0; })) continue;
        f = poly_lcm(f, minpoly_vector(M, e));
    }
    return f;
}

FqMatrix intersect_spaces(const FqMatrix& U, const FqMatrix& V)
{
    const FieldPtr& F = U.field();
    FqMatrix W = U.hstack(V.scaled(F->neg(1)));
    FqMatrix K = kernel(W);
    std::vector<size_t> top(U.cols()), all(K.cols());
    for (size_t i = 0; i < U.cols(); ++i) top[i] = i;
    for (size_t j = 0; j < K.cols(); ++j) all[j] = j;
    FqMatrix I = U * K.submatrix(top, all);
    return column_space(I);
}

bool coordinates_in(const FqMatrix& B, const FqMatrix& X, FqMatrix& C) { return solve(B, X, C); }

EchelonBuilder::EchelonBuilder(FieldPtr F, size_t length) : F_(std::move(F)), len_(length) {}

void EchelonBuilder::reduce(FqMatrix& v) const
{
    if (v.packed()) {
        uint64_t* a = v.row_words(0);
        size_t wpr = v.words_per_row();
        for (size_t k = 0; k < rows_.size(); ++k) {
            size_t p = pivots_[k];
            if (!((a[p >> 6] >> (p & 63)) & 1)) continue;
            const uint64_t* r = rows_[k].row_words(0);
            for (size_t x = p >> 6; x < wpr; ++x) a[x] ^= r[x];
        }
        return;
    }
    for (size_t k = 0; k < rows_.size(); ++k) {
        FiniteField::Elt c = v.get(0, pivots_[k]);
        if (c == 0) continue;
        FiniteField::Elt s = F_->neg(c);
        FiniteField::Elt* a = v.row_elts(0);
        const FiniteField::Elt* r = rows_[k].row_elts(0);
        for (size_t j = pivots_[k]; j < len_; ++j)
            if (r[j] != 0) a[j] = F_->add(a[j], F_->mul(s, r[j]));
    }
}

bool EchelonBuilder::insert(FqMatrix v)
{
    if (v.rows() != 1 || v.cols() != len_) throw std::invalid_argument("EchelonBuilder: bad vector shape");
    reduce(v);
    size_t p = 0;
    if (v.packed()) {
        const uint64_t* a = v.row_words(0);
        size_t w = 0;
        while (w < v.words_per_row() && a[w] == 0) ++w;
        if (w == v.words_per_row()) return false;
        p = w * 64 + static_cast<size_t>(__builtin_ctzll(a[w]));
    } else {
        while (p < len_ && v.get(0, p) == 0) ++p;
        if (p == len_) return false;
        v.scale_row(0, F_->inv(v.get(0, p)));
    }
    // keep rows sorted by pivot so reductions only touch the tail of the vector
    size_t pos = static_cast<size_t>(std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin());
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), p);
    return true;
}

bool EchelonBuilder::contains(const FqMatrix& v) const
{
    FqMatrix w = v;
    reduce(w);
    return w.is_zero();
}

FiniteField::Elt descend(const FieldEmbedding& emb, FiniteField::Elt a)
{
    const FieldPtr& big = emb.target();
    const FieldPtr& sub = emb.source();
    if (sub->same_as(*big) && emb.generator_image() == big->gen()) return a;
    FieldPtr Fp = FiniteField::make(big->characteristic(), 1);
    size_t f = static_cast<size_t>(big->degree()), d = static_cast<size_t>(sub->degree());
    FqMatrix M(Fp, f, d), rhs(Fp, f, 1);
    FiniteField::Elt w = 1;
    for (size_t j = 0; j < d; ++j) {
        auto c = big->coeffs(emb(w));
        for (size_t i = 0; i < f; ++i) M.set(i, j, i < c.size() ? c[i] : 0);
        w = sub->mul(w, sub->gen());
    }
    auto c = big->coeffs(a);
    for (size_t i = 0; i < f; ++i) rhs.set(i, 0, i < c.size() ? c[i] : 0);
    FqMatrix X;
    if (!solve(M, rhs, X)) throw std::invalid_argument("descend: element outside the subfield");
    std::vector<uint64_t> x(d);
    for (size_t j = 0; j < d; ++j) x[j] = X.get(j, 0);
    return sub->from_coeffs(x);
}

int value_degree(const FiniteField& F, const std::vector<FiniteField::Elt>& values)
{
    int deg = F.degree();
    for (int d = 1; d < deg; ++d) {
        if (deg % d) continue;
        bool fixed = true;
        for (auto v : values)
            if (F.frobenius(v, d) != v) {
                fixed = false;
                break;
            }
        if (fixed) return d;
    }
    return deg;
}

} // namespace katz1

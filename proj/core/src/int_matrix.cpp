#include "katz1/int_matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace katz1 {

IntMatrix IntMatrix::identity(size_t n)
{
    IntMatrix I(n, n);
    for (size_t i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows)
{
    size_t c = rows.empty() ? 0 : rows[0].size();
    IntMatrix M(rows.size(), c);
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != c) throw std::invalid_argument("IntMatrix::from_rows: ragged rows");
        for (size_t j = 0; j < c; ++j) M.at(i, j) = rows[i][j];
    }
    return M;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const
{
    if (c_ != o.r_) throw std::invalid_argument("IntMatrix product: dimension mismatch");
    IntMatrix C(r_, o.c_);
    for (size_t i = 0; i < r_; ++i)
        for (size_t k = 0; k < c_; ++k) {
            const BigInt& a = at(i, k);
            if (a == 0) continue;
            for (size_t j = 0; j < o.c_; ++j) {
                const BigInt& b = o.at(k, j);
                if (b != 0) mpz_addmul(C.at(i, j).get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            }
        }
    return C;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const
{
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("IntMatrix sum: dimension mismatch");
    IntMatrix C = *this;
    for (size_t x = 0; x < a_.size(); ++x) C.a_[x] += o.a_[x];
    return C;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const
{
    if (r_ != o.r_ || c_ != o.c_) throw std::invalid_argument("IntMatrix difference: dimension mismatch");
    IntMatrix C = *this;
    for (size_t x = 0; x < a_.size(); ++x) C.a_[x] -= o.a_[x];
    return C;
}

IntMatrix IntMatrix::scaled(const BigInt& s) const
{
    IntMatrix C = *this;
    for (auto& x : C.a_) x *= s;
    return C;
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix T(c_, r_);
    for (size_t i = 0; i < r_; ++i)
        for (size_t j = 0; j < c_; ++j) T.at(j, i) = at(i, j);
    return T;
}

IntMatrix IntMatrix::row_range(size_t begin, size_t end) const
{
    IntMatrix S(end - begin, c_);
    for (size_t i = begin; i < end; ++i)
        for (size_t j = 0; j < c_; ++j) S.at(i - begin, j) = at(i, j);
    return S;
}

IntMatrix IntMatrix::col_range(size_t begin, size_t end) const
{
    IntMatrix S(r_, end - begin);
    for (size_t i = 0; i < r_; ++i)
        for (size_t j = begin; j < end; ++j) S.at(i, j - begin) = at(i, j);
    return S;
}

bool IntMatrix::is_zero() const
{
    for (auto& x : a_)
        if (x != 0) return false;
    return true;
}

void IntMatrix::swap_rows(size_t i, size_t j)
{
    if (i == j) return;
    for (size_t k = 0; k < c_; ++k) mpz_swap(at(i, k).get_mpz_t(), at(j, k).get_mpz_t());
}

void IntMatrix::add_row_multiple(size_t dst, size_t src, const BigInt& s)
{
    if (s == 0) return;
    for (size_t k = 0; k < c_; ++k)
        if (at(src, k) != 0) mpz_addmul(at(dst, k).get_mpz_t(), s.get_mpz_t(), at(src, k).get_mpz_t());
}

void IntMatrix::negate_row(size_t i)
{
    for (size_t k = 0; k < c_; ++k) mpz_neg(at(i, k).get_mpz_t(), at(i, k).get_mpz_t());
}

void IntMatrix::swap_cols(size_t i, size_t j)
{
    if (i == j) return;
    for (size_t k = 0; k < r_; ++k) mpz_swap(at(k, i).get_mpz_t(), at(k, j).get_mpz_t());
}

void IntMatrix::add_col_multiple(size_t dst, size_t src, const BigInt& s)
{
    if (s == 0) return;
    for (size_t k = 0; k < r_; ++k)
        if (at(k, src) != 0) mpz_addmul(at(k, dst).get_mpz_t(), s.get_mpz_t(), at(k, src).get_mpz_t());
}

void IntMatrix::negate_col(size_t j)
{
    for (size_t k = 0; k < r_; ++k) mpz_neg(at(k, j).get_mpz_t(), at(k, j).get_mpz_t());
}

FqMatrix IntMatrix::mod_p(const FieldPtr& F) const
{
    FqMatrix M(F, r_, c_);
    uint64_t p = F->characteristic();
    for (size_t i = 0; i < r_; ++i)
        for (size_t j = 0; j < c_; ++j) {
            uint64_t v = mod_small(at(i, j), p);
            if (v != 0) M.set(i, j, F->from_int(static_cast<int64_t>(v)));
        }
    return M;
}

std::string IntMatrix::to_string() const
{
    std::ostringstream os;
    for (size_t i = 0; i < r_; ++i) {
        os << "[";
        for (size_t j = 0; j < c_; ++j) os << (j ? " " : "") << at(i, j).get_str();
        os << "]\n";
    }
    return os.str();
}

namespace {

HnfResult hnf_impl(const IntMatrix& M, bool want_u, IntMatrix* Uinv)
{
    HnfResult R;
    R.H = M;
    IntMatrix& H = R.H;
    size_t m = M.rows(), n = M.cols();
    if (want_u) R.U = IntMatrix::identity(m);
    if (Uinv) *Uinv = IntMatrix::identity(m);
    size_t r = 0;
    BigInt q;
    for (size_t c = 0; c < n && r < m; ++c) {
        // Euclid on column c: smallest nonzero entry becomes the pivot
        while (true) {
            size_t piv = m;
            for (size_t i = r; i < m; ++i)
                if (H.at(i, c) != 0 && (piv == m || mpz_cmpabs(H.at(i, c).get_mpz_t(), H.at(piv, c).get_mpz_t()) < 0)) piv = i;
            if (piv == m) break;
            if (piv != r) {
                H.swap_rows(r, piv);
                if (want_u) R.U.swap_rows(r, piv);
                if (Uinv) Uinv->swap_cols(r, piv);
            }
            bool done = true;
            for (size_t i = r + 1; i < m; ++i) {
                if (H.at(i, c) == 0) continue;
                mpz_tdiv_q(q.get_mpz_t(), H.at(i, c).get_mpz_t(), H.at(r, c).get_mpz_t());
                BigInt nq = -q;
                H.add_row_multiple(i, r, nq);
                if (want_u) R.U.add_row_multiple(i, r, nq);
                if (Uinv) Uinv->add_col_multiple(r, i, q);
                if (H.at(i, c) != 0) done = false;
            }
            if (done) break;
        }
        if (H.at(r, c) == 0) continue;
        if (H.at(r, c) < 0) {
            H.negate_row(r);
            if (want_u) R.U.negate_row(r);
            if (Uinv) Uinv->negate_col(r);
        }
        for (size_t i = 0; i < r; ++i) {
            mpz_fdiv_q(q.get_mpz_t(), H.at(i, c).get_mpz_t(), H.at(r, c).get_mpz_t());
            if (q == 0) continue;
            BigInt nq = -q;
            H.add_row_multiple(i, r, nq);
            if (want_u) R.U.add_row_multiple(i, r, nq);
            if (Uinv) Uinv->add_col_multiple(r, i, q);
        }
        R.pivots.push_back(c);
        ++r;
    }
    R.rank = r;
    return R;
}

} // namespace

HnfResult hnf(const IntMatrix& M, bool want_u) { return hnf_impl(M, want_u, nullptr); }

SnfResult smith_normal_form(const IntMatrix& M)
{
    SnfResult R;
    size_t m = M.rows(), n = M.cols();
    R.D = M;
    R.U = IntMatrix::identity(m);
    R.V = IntMatrix::identity(n);
    IntMatrix& D = R.D;
    BigInt q;
    for (size_t t = 0; t < std::min(m, n); ++t) {
        while (true) {
            // smallest nonzero entry of the trailing block moves to (t, t)
            size_t bi = m, bj = n;
            for (size_t i = t; i < m; ++i)
                for (size_t j = t; j < n; ++j)
                    if (D.at(i, j) != 0 && (bi == m || mpz_cmpabs(D.at(i, j).get_mpz_t(), D.at(bi, bj).get_mpz_t()) < 0)) {
                        bi = i;
                        bj = j;
                    }
            if (bi == m) return [&] {
                for (size_t k = 0; k < std::min(m, n); ++k) R.diagonal.push_back(D.at(k, k));
                return R;
            }();
            D.swap_rows(t, bi);
            R.U.swap_rows(t, bi);
            D.swap_cols(t, bj);
            R.V.swap_cols(t, bj);
            bool dirty = false;
            for (size_t i = t + 1; i < m; ++i) {
                if (D.at(i, t) == 0) continue;
                mpz_fdiv_q(q.get_mpz_t(), D.at(i, t).get_mpz_t(), D.at(t, t).get_mpz_t());
                BigInt nq = -q;
                D.add_row_multiple(i, t, nq);
                R.U.add_row_multiple(i, t, nq);
                if (D.at(i, t) != 0) dirty = true;
            }
            for (size_t j = t + 1; j < n; ++j) {
                if (D.at(t, j) == 0) continue;
                mpz_fdiv_q(q.get_mpz_t(), D.at(t, j).get_mpz_t(), D.at(t, t).get_mpz_t());
                BigInt nq = -q;
                D.add_col_multiple(j, t, nq);
                R.V.add_col_multiple(j, t, nq);
                if (D.at(t, j) != 0) dirty = true;
            }
            if (dirty) continue;
            // divisibility of the remaining block by the pivot
            size_t fi = m;
            for (size_t i = t + 1; i < m && fi == m; ++i)
                for (size_t j = t + 1; j < n; ++j)
                    if (!mpz_divisible_p(D.at(i, j).get_mpz_t(), D.at(t, t).get_mpz_t())) {
                        fi = i;
                        break;
                    }
            if (fi == m) break;
            D.add_row_multiple(t, fi, BigInt(1));
            R.U.add_row_multiple(t, fi, BigInt(1));
        }
        if (D.at(t, t) < 0) {
            D.negate_row(t);
            R.U.negate_row(t);
        }
    }
    for (size_t k = 0; k < std::min(m, n); ++k) R.diagonal.push_back(D.at(k, k));
    return R;
}

BigInt determinant(const IntMatrix& M)
{
    if (M.rows() != M.cols()) throw std::invalid_argument("determinant: non-square matrix");
    size_t n = M.rows();
    if (n == 0) return 1;
    // Bareiss fraction-free elimination
    IntMatrix A = M;
    BigInt prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (A.at(k, k) == 0) {
            size_t p = k + 1;
            while (p < n && A.at(p, k) == 0) ++p;
            if (p == n) return 0;
            A.swap_rows(k, p);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                BigInt v = A.at(i, j) * A.at(k, k) - A.at(i, k) * A.at(k, j);
                mpz_divexact(A.at(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
        prev = A.at(k, k);
    }
    return sign * A.at(n - 1, n - 1);
}

size_t rank_mod(const IntMatrix& M, uint64_t prime)
{
    size_t m = M.rows(), n = M.cols();
    std::vector<uint64_t> a(m * n);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < n; ++j) a[i * n + j] = mod_small(M.at(i, j), prime);
    size_t r = 0;
    for (size_t c = 0; c < n && r < m; ++c) {
        size_t p = r;
        while (p < m && a[p * n + c] == 0) ++p;
        if (p == m) continue;
        for (size_t k = 0; k < n; ++k) std::swap(a[r * n + k], a[p * n + k]);
        uint64_t inv = static_cast<uint64_t>(invmod64(static_cast<int64_t>(a[r * n + c]), static_cast<int64_t>(prime)));
        for (size_t i = r + 1; i < m; ++i) {
            uint64_t f = mulmod64(a[i * n + c], inv, prime);
            if (f == 0) continue;
            for (size_t k = c; k < n; ++k)
                a[i * n + k] = (a[i * n + k] + prime - mulmod64(f, a[r * n + k], prime)) % prime;
        }
        ++r;
    }
    return r;
}

bool hnf_coordinates(const IntMatrix& H, const std::vector<size_t>& pivots, const std::vector<BigInt>& v0,
                     std::vector<BigInt>& coords)
{
    std::vector<BigInt> v = v0;
    coords.assign(pivots.size(), BigInt(0));
    for (size_t i = 0; i < pivots.size(); ++i) {
        const BigInt& p = H.at(i, pivots[i]);
        if (!mpz_divisible_p(v[pivots[i]].get_mpz_t(), p.get_mpz_t())) return false;
        BigInt c = v[pivots[i]] / p;
        coords[i] = c;
        if (c == 0) continue;
        for (size_t j = pivots[i]; j < H.cols(); ++j)
            if (H.at(i, j) != 0) mpz_submul(v[j].get_mpz_t(), c.get_mpz_t(), H.at(i, j).get_mpz_t());
    }
    for (auto& x : v)
        if (x != 0) return false;
    return true;
}

void integer_kernel(const IntMatrix& M, IntMatrix& K, IntMatrix& P)
{
    size_t n = M.cols();
    IntMatrix Uinv;
    HnfResult R = hnf_impl(M.transpose(), true, &Uinv);
    size_t r = R.rank;
    K = R.U.row_range(r, n).transpose();
    P = Uinv.col_range(r, n).transpose();
}

RatMatrix::RatMatrix(const IntMatrix& M) : r_(M.rows()), c_(M.cols()), a_(M.rows() * M.cols())
{
    for (size_t i = 0; i < r_; ++i)
        for (size_t j = 0; j < c_; ++j) at(i, j) = Rational(M.at(i, j));
}

RatMatrix RatMatrix::identity(size_t n)
{
    RatMatrix I(n, n);
    for (size_t i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const
{
    if (c_ != o.r_) throw std::invalid_argument("RatMatrix product: dimension mismatch");
    RatMatrix C(r_, o.c_);
    for (size_t i = 0; i < r_; ++i)
        for (size_t k = 0; k < c_; ++k) {
            if (at(i, k) == 0) continue;
            for (size_t j = 0; j < o.c_; ++j)
                if (o.at(k, j) != 0) C.at(i, j) += at(i, k) * o.at(k, j);
        }
    return C;
}

RatMatrix RatMatrix::operator-(const RatMatrix& o) const
{
    RatMatrix C = *this;
    for (size_t x = 0; x < a_.size(); ++x) C.a_[x] -= o.a_[x];
    return C;
}

RatMatrix RatMatrix::transpose() const
{
    RatMatrix T(c_, r_);
    for (size_t i = 0; i < r_; ++i)
        for (size_t j = 0; j < c_; ++j) T.at(j, i) = at(i, j);
    return T;
}

std::vector<Rational> charpoly_q(const RatMatrix& M)
{
    if (M.rows() != M.cols()) throw std::invalid_argument("charpoly_q: non-square matrix");
    size_t n = M.rows();
    RatMatrix H = M;
    for (size_t j = 0; j + 2 < n; ++j) {
        size_t i = j + 1;
        while (i < n && H.at(i, j) == 0) ++i;
        if (i == n) continue;
        if (i != j + 1) {
            for (size_t c = 0; c < n; ++c) std::swap(H.at(i, c), H.at(j + 1, c));
            for (size_t r = 0; r < n; ++r) std::swap(H.at(r, i), H.at(r, j + 1));
        }
        for (size_t r = j + 2; r < n; ++r) {
            Rational u = H.at(r, j) / H.at(j + 1, j);
            if (u == 0) continue;
            for (size_t c = 0; c < n; ++c) H.at(r, c) -= u * H.at(j + 1, c);
            for (size_t rr = 0; rr < n; ++rr) H.at(rr, j + 1) += u * H.at(rr, r);
        }
    }
    std::vector<std::vector<Rational>> p(1, std::vector<Rational>{Rational(1)});
    for (size_t m = 0; m < n; ++m) {
        const auto& pm = p[m];
        std::vector<Rational> next(pm.size() + 1);
        for (size_t d = 0; d < pm.size(); ++d) {
            next[d + 1] += pm[d];
            next[d] -= H.at(m, m) * pm[d];
        }
        Rational prod = 1;
        for (size_t i = m; i-- > 0;) {
            prod *= H.at(i + 1, i);
            if (prod == 0) break;
            Rational coef = H.at(i, m) * prod;
            for (size_t d = 0; d < p[i].size(); ++d) next[d] -= coef * p[i][d];
        }
        p.push_back(next);
    }
    return p[n];
}

namespace {

size_t rref_q(RatMatrix& A, std::vector<size_t>& piv)
{
    size_t r = 0;
    piv.clear();
    for (size_t c = 0; c < A.cols() && r < A.rows(); ++c) {
        size_t p = r;
        while (p < A.rows() && A.at(p, c) == 0) ++p;
        if (p == A.rows()) continue;
        for (size_t k = 0; k < A.cols(); ++k) std::swap(A.at(r, k), A.at(p, k));
        Rational inv = 1 / A.at(r, c);
        for (size_t k = 0; k < A.cols(); ++k) A.at(r, k) *= inv;
        for (size_t i = 0; i < A.rows(); ++i) {
            if (i == r || A.at(i, c) == 0) continue;
            Rational f = A.at(i, c);
            for (size_t k = 0; k < A.cols(); ++k)
                if (A.at(r, k) != 0) A.at(i, k) -= f * A.at(r, k);
        }
        piv.push_back(c);
        ++r;
    }
    return r;
}

} // namespace

size_t rank_q(const RatMatrix& M)
{
    RatMatrix A = M;
    std::vector<size_t> piv;
    return rref_q(A, piv);
}

RatMatrix kernel_q(const RatMatrix& M)
{
    RatMatrix A = M;
    std::vector<size_t> piv;
    size_t r = rref_q(A, piv);
    std::vector<bool> is_piv(M.cols(), false);
    for (size_t c : piv) is_piv[c] = true;
    std::vector<size_t> free_cols;
    for (size_t c = 0; c < M.cols(); ++c)
        if (!is_piv[c]) free_cols.push_back(c);
    RatMatrix K(M.cols(), free_cols.size());
    for (size_t j = 0; j < free_cols.size(); ++j) {
        K.at(free_cols[j], j) = 1;
        for (size_t i = 0; i < r; ++i) K.at(piv[i], j) = -A.at(i, free_cols[j]);
    }
    return K;
}

std::string rational_poly_string(const std::vector<Rational>& c, const std::string& var)
{
    std::string s;
    for (size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        Rational a = c[i];
        bool neg = a < 0;
        if (neg) a = -a;
        std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
        if (s.empty())
            s += neg ? "-" : "";
        else
            s += neg ? "-" : "+";
        if (i == 0)
            s += to_string(a);
        else if (a == 1)
            s += mono;
        else
            s += to_string(a) + "*" + mono;
    }
    return s.empty() ? "0" : s;
}

} // namespace katz1

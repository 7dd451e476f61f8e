#include "katz1/commutative_structure.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace katz1 {

namespace {

FqMatrix vec(const FqMatrix& X)
{
    size_t r = X.rows(), c = X.cols();
    FqMatrix v(X.field(), 1, r * c);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) {
            auto e = X.get(i, j);
            if (e) v.set(0, i * c + j, e);
        }
    return v;
}

// X acting on the column span of W (X W inside span W).
FqMatrix restrict_to(const FqMatrix& X, const FqMatrix& W)
{
    FqMatrix R;
    if (!solve(W, X * W, R)) throw std::logic_error("restriction: subspace not invariant");
    return R;
}

FqMatrix matrix_pow(FqMatrix A, uint64_t e)
{
    FqMatrix R = FqMatrix::identity(A.field(), A.rows());
    while (e) {
        if (e & 1) R = R * A;
        e >>= 1;
        if (e) A = A * A;
    }
    return R;
}

// Basis of the span of the given matrices.
std::vector<FqMatrix> span_basis(const std::vector<FqMatrix>& xs)
{
    std::vector<FqMatrix> out;
    if (xs.empty()) return out;
    EchelonBuilder eb(xs[0].field(), xs[0].rows() * xs[0].cols());
    for (auto& x : xs)
        if (eb.insert(vec(x))) out.push_back(x);
    return out;
}

std::string ordinal(size_t i)
{
    const char* suf = "th";
    if (i % 100 < 11 || i % 100 > 13) {
        if (i % 10 == 1) suf = "st";
        else if (i % 10 == 2) suf = "nd";
        else if (i % 10 == 3) suf = "rd";
    }
    return std::to_string(i) + suf;
}

struct Block {
    FqMatrix B;
    std::vector<FqMatrix> X;
};

} // namespace

std::vector<FqMatrix> generated_algebra(const std::vector<FqMatrix>& ops)
{
    if (ops.empty()) throw std::invalid_argument("generated_algebra: no operators");
    for (size_t i = 0; i < ops.size(); ++i) {
        if (!ops[i].is_square() || ops[i].rows() != ops[0].rows()) throw std::invalid_argument("generated_algebra: shape mismatch");
        for (size_t j = i + 1; j < ops.size(); ++j)
            if (ops[i] * ops[j] != ops[j] * ops[i]) throw std::invalid_argument("generated_algebra: operators do not commute");
    }
    size_t n = ops[0].rows();
    const FieldPtr& F = ops[0].field();
    std::vector<FqMatrix> basis;
    EchelonBuilder eb(F, n * n);
    FqMatrix I = FqMatrix::identity(F, n);
    if (n == 0) return basis;
    eb.insert(vec(I));
    basis.push_back(I);
    for (size_t idx = 0; idx < basis.size(); ++idx)
        for (auto& g : ops) {
            FqMatrix y = g * basis[idx];
            if (eb.insert(vec(y))) basis.push_back(std::move(y));
        }
    return basis;
}

bool matrix_coordinates(const std::vector<FqMatrix>& basis, const FqMatrix& x, FqVector& coords)
{
    size_t len = x.rows() * x.cols();
    FqMatrix A(x.field(), len, basis.size());
    for (size_t j = 0; j < basis.size(); ++j) {
        FqMatrix v = vec(basis[j]);
        for (size_t i = 0; i < len; ++i) A.set(i, j, v.get(0, i));
    }
    FqMatrix b = vec(x).transpose(), X;
    if (!solve(A, b, X)) return false;
    coords = X.column(0);
    return true;
}

int upo(const std::vector<FqMatrix>& max_ideal)
{
    int k = 1;
    std::vector<FqMatrix> cur = max_ideal;
    while (!cur.empty()) {
        std::vector<FqMatrix> prod;
        for (auto& x : cur)
            for (auto& y : max_ideal) prod.push_back(x * y);
        cur = span_basis(prod);
        // drop zero products
        cur.erase(std::remove_if(cur.begin(), cur.end(), [](const FqMatrix& m) { return m.is_zero(); }), cur.end());
        ++k;
    }
    return k;
}

size_t socle_dimension(const std::vector<FqMatrix>& local_algebra, const std::vector<FqMatrix>& max_ideal)
{
    if (max_ideal.empty()) return local_algebra.size();
    const FieldPtr& F = local_algebra[0].field();
    size_t n = local_algebra[0].rows();
    size_t len = n * n;
    FqMatrix A(F, len * max_ideal.size(), local_algebra.size());
    for (size_t j = 0; j < local_algebra.size(); ++j)
        for (size_t k = 0; k < max_ideal.size(); ++k) {
            FqMatrix v = vec(local_algebra[j] * max_ideal[k]);
            for (size_t i = 0; i < len; ++i) A.set(k * len + i, j, v.get(0, i));
        }
    return kernel(A).cols();
}

Decomposition local_decomposition(const std::vector<FqMatrix>& generators, uint64_t seed)
{
    if (generators.empty()) throw std::invalid_argument("local_decomposition: no generators");
    const FieldPtr& F = generators[0].field();
    size_t n = generators[0].rows();
    for (size_t i = 0; i < generators.size(); ++i)
        for (size_t j = i + 1; j < generators.size(); ++j)
            if (generators[i] * generators[j] != generators[j] * generators[i])
                throw std::invalid_argument("local_decomposition: operators do not commute");
    Decomposition dec;
    dec.base = F;
    dec.module_dimension = n;
    dec.seed = seed;
    if (n == 0) return dec;
    std::mt19937_64 rng(seed);
    uint64_t q = F->order();
    uint64_t p = F->characteristic();
    int f = F->degree();

    std::vector<Block> done;
    std::function<void(Block)> split = [&](Block blk) {
        size_t b = blk.B.cols();
        for (auto& X : blk.X) {
            auto fac = factor_poly(minpoly(X));
            if (fac.size() < 2) continue;
            for (auto& [g, e] : fac) {
                FqMatrix W = kernel(poly_eval(poly_pow(g, static_cast<unsigned>(e)), X));
                Block sub{blk.B * W, {}};
                for (auto& Y : blk.X) sub.X.push_back(restrict_to(Y, W));
                split(std::move(sub));
            }
            return;
        }
        // every generator is primary; count local factors via x -> x^q
        auto A = generated_algebra(blk.X);
        size_t a = A.size();
        FqMatrix Fr(F, a, a);
        for (size_t j = 0; j < a; ++j) {
            FqVector c;
            if (!matrix_coordinates(A, matrix_pow(A[j], q), c)) throw std::logic_error("local_decomposition: algebra not closed");
            c[j] = F->sub(c[j], F->one());
            Fr.set_column(j, c);
        }
        FqMatrix K = kernel(Fr);
        if (K.cols() <= 1) {
            done.push_back(std::move(blk));
            return;
        }
        // a random fixed element, not a scalar
        FqMatrix x;
        std::uniform_int_distribution<uint64_t> pick(0, q - 1);
        while (true) {
            FqVector c(a, 0);
            for (size_t j = 0; j < K.cols(); ++j) {
                auto s = pick(rng);
                if (!s) continue;
                for (size_t i = 0; i < a; ++i) c[i] = F->add(c[i], F->mul(s, K.get(i, j)));
            }
            bool scalar = true;
            for (size_t i = 1; i < a; ++i)
                if (c[i]) scalar = false;
            if (scalar) continue;
            x = FqMatrix(F, b, b);
            for (size_t i = 0; i < a; ++i)
                if (c[i]) x.add_scaled(A[i], c[i]);
            break;
        }
        for (auto root : poly_roots(minpoly(x))) {
            FqMatrix W = kernel(x - FqMatrix::scalar(F, b, root));
            Block sub{blk.B * W, {}};
            for (auto& Y : blk.X) sub.X.push_back(restrict_to(Y, W));
            split(std::move(sub));
        }
    };
    Block whole{FqMatrix::identity(F, n), generators};
    split(std::move(whole));

    for (auto& blk : done) {
        LocalFactor lf;
        lf.base = F;
        lf.basis = blk.B;
        lf.module_dimension = blk.B.cols();
        lf.restricted = blk.X;
        auto A = generated_algebra(blk.X);
        lf.local_dimension = A.size();
        std::vector<FqPoly> rad;
        std::vector<FqMatrix> mgens;
        int d = 1;
        for (auto& X : blk.X) {
            FqPoly g = factor_poly(minpoly(X))[0].first;
            d = std::lcm(d, g.degree());
            rad.push_back(g);
            FqMatrix gx = poly_eval(g, X);
            for (auto& a : A) mgens.push_back(a * gx);
        }
        auto M = span_basis(mgens);
        M.erase(std::remove_if(M.begin(), M.end(), [](const FqMatrix& m) { return m.is_zero(); }), M.end());
        lf.residue_degree = d;
        lf.upo = upo(M);
        lf.gorenstein = socle_dimension(A, M) == static_cast<size_t>(d);

        FieldPtr K = FiniteField::make(p, f * d);
        lf.residue_field = K;
        FieldEmbedding emb(F, K);
        FqMatrix W = FqMatrix::identity(K, lf.module_dimension);
        std::vector<FiniteField::Elt> sys;
        for (size_t i = 0; i < blk.X.size(); ++i) {
            FqMatrix R = restrict_to(blk.X[i].mapped(emb), W);
            bool found = false;
            for (auto lam : poly_roots(poly_map(rad[i], emb))) {
                FqMatrix Ker = kernel(R - FqMatrix::scalar(K, R.rows(), lam));
                if (Ker.cols() == 0) continue;
                W = W * Ker;
                sys.push_back(lam);
                found = true;
                break;
            }
            if (!found) throw std::logic_error("local_decomposition: no joint eigenvector");
        }
        lf.eigenspace_dimension = W.cols();
        lf.eigenspace = blk.B.mapped(emb) * W;
        for (int j = 0; j < d; ++j) {
            std::vector<FiniteField::Elt> c;
            for (auto v : sys) c.push_back(K->frobenius(v, f * j));
            lf.systems.push_back(std::move(c));
        }
        dec.algebra_dimension += lf.local_dimension;
        dec.factors.push_back(std::move(lf));
    }

    // idempotents
    FqMatrix P(F, n, 0);
    for (auto& lf : dec.factors) P = P.hstack(lf.basis);
    FqMatrix Pinv = inverse(P);
    size_t off = 0;
    for (auto& lf : dec.factors) {
        std::vector<size_t> rows(lf.module_dimension), cols(n);
        std::iota(rows.begin(), rows.end(), off);
        std::iota(cols.begin(), cols.end(), 0);
        lf.idempotent = lf.basis * Pinv.submatrix(rows, cols);
        off += lf.module_dimension;
    }
    std::stable_sort(dec.factors.begin(), dec.factors.end(), [](const LocalFactor& a, const LocalFactor& b) {
        if (a.residue_degree != b.residue_degree) return a.residue_degree > b.residue_degree;
        return a.systems[0] < b.systems[0];
    });
    return dec;
}

std::string power_string(const FiniteField& F, FiniteField::Elt a)
{
    if (a == 0) return "0";
    if (a == 1) return "1";
    FiniteField::Elt w = F.gen();
    if (F.degree() > 1 && F.order() <= (1u << 20) && F.mult_order(w) == F.order() - 1) {
        FiniteField::Elt x = w;
        for (uint64_t k = 1; k < F.order(); ++k, x = F.mul(x, w))
            if (x == a) return k == 1 ? "w" : "w^" + std::to_string(k);
    }
    return F.to_string(a);
}

std::string format_factors(const std::vector<LocalFactor>& factors, const std::vector<std::string>& eigenvalue_sets)
{
    std::ostringstream os;
    if (factors.size() == 1) os << "There is 1 local factor.\n";
    else os << "There are " << factors.size() << " local factors.\n";
    for (size_t i = 0; i < factors.size(); ++i) {
        const auto& lf = factors[i];
        os << "\nLooking at " << ordinal(i + 1) << " local factor:\n\n";
        os << "  Residue field = GF(" << lf.residue_field->order() << ")\n";
        os << "  Local dimension = " << lf.local_dimension << "\n";
        os << "  UPO = " << lf.upo << "\n";
        if (i < eigenvalue_sets.size()) os << "  Eigenvalues = " << eigenvalue_sets[i] << "\n";
        os << "  Number of max. ideals over residue field = " << lf.num_max_ideals() << "\n";
    }
    return os.str();
}

bool conjugate_systems(const FiniteField& K, const std::vector<FiniteField::Elt>& a, const std::vector<FiniteField::Elt>& b)
{
    if (a.size() != b.size()) return false;
    for (int j = 0; j < K.degree(); ++j) {
        bool eq = true;
        for (size_t i = 0; i < a.size() && eq; ++i) eq = a[i] == K.frobenius(b[i], j);
        if (eq) return true;
    }
    return false;
}

} // namespace katz1

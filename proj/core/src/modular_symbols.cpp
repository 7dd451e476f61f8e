#include "katz1/modular_symbols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "katz1/arith.hpp"

namespace katz1 {

P1List::P1List(int64_t N) : N_(N)
{
    if (N < 1) throw std::invalid_argument("P1List: level must be positive");
    size_t NN = static_cast<size_t>(N * N);
    table_.assign(NN, Norm{-1, 0});
    if (N == 1) {
        pts_.push_back({0, 0});
        table_[0] = Norm{0, 1};
        inv_.assign(1, 0);
        return;
    }
    std::vector<int64_t> units;
    inv_.assign(static_cast<size_t>(N), 0);
    for (int64_t a = 1; a < N; ++a)
        if (gcd64(a, N) == 1) {
            units.push_back(a);
            inv_[static_cast<size_t>(a)] = invmod64(a, N);
        }
    for (int64_t c = 0; c < N; ++c) {
        int64_t gc = gcd64(c, N);
        for (int64_t d = 0; d < N; ++d) {
            if (table_[static_cast<size_t>(c * N + d)].index >= 0) continue;
            if (gcd64(gc, d) != 1) continue;
            int32_t idx = static_cast<int32_t>(pts_.size());
            pts_.push_back({c, d});
            for (int64_t l : units)
                table_[static_cast<size_t>((l * c % N) * N + l * d % N)] = Norm{idx, static_cast<int32_t>(l)};
        }
    }
}

std::vector<Mat2> heilbronn_matrices(int64_t l)
{
    if (l < 2 || !is_prime64(static_cast<uint64_t>(l)))
        throw std::invalid_argument("heilbronn_matrices: index must be prime");
    if (l == 2) return {Mat2{1, 0, 0, 2}, Mat2{2, 0, 0, 1}, Mat2{2, 1, 0, 1}, Mat2{1, 0, 1, 2}};
    std::vector<Mat2> out;
    out.push_back(Mat2{1, 0, 0, l});
    for (int64_t r = -(l / 2); r <= l / 2; ++r) {
        int64_t x1 = l, x2 = -r, y1 = 0, y2 = 1, a = -l, b = r;
        out.push_back(Mat2{x1, x2, y1, y2});
        while (b != 0) {
            int64_t q = std::llround(static_cast<double>(a) / static_cast<double>(b));
            int64_t c = a - b * q;
            a = -b;
            b = c;
            int64_t x3 = q * x2 - x1;
            x1 = x2;
            x2 = x3;
            int64_t y3 = q * y2 - y1;
            y1 = y2;
            y2 = y3;
            out.push_back(Mat2{x1, x2, y1, y2});
        }
    }
    return out;
}

std::vector<Mat2> heilbronn_merel(int64_t n)
{
    if (n < 1) throw std::invalid_argument("heilbronn_merel: index must be positive");
    std::vector<Mat2> out;
    for (int64_t a = 1; a <= n; ++a) {
        for (int64_t b = 0; b < a; ++b) {
            if (n % a == 0) out.push_back(Mat2{a, b, 0, n / a});
            // c >= 1, d = (n + b c) / a > c
            for (int64_t c = 1; c * (a - b) < n; ++c) {
                int64_t num = n + b * c;
                if (num % a) continue;
                int64_t d = num / a;
                if (d > c) out.push_back(Mat2{a, b, c, d});
            }
        }
    }
    return out;
}

namespace {

// Sparse elimination over Q keeping every pivot row expressed in non-pivot
// columns only.
class SparseEliminator {
public:
    using Row = std::vector<std::pair<uint32_t, Rational>>;

    explicit SparseEliminator(size_t n) : pivot_row_(n, -1), occ_(n), acc_(n), mark_(n, 0) {}

    void add(const Row& rel)
    {
        touched_.clear();
        for (auto& [j, c] : rel) {
            int32_t r = pivot_row_[j];
            if (r < 0) {
                bump(j, c);
            } else {
                for (auto& [jj, cc] : rows_[static_cast<size_t>(r)]) bump(jj, c * cc);
            }
        }
        Row row;
        for (uint32_t j : touched_) {
            if (sgn(acc_[j]) != 0) row.push_back({j, acc_[j]});
            acc_[j] = 0;
            mark_[j] = 0;
        }
        if (row.empty()) return;
        std::sort(row.begin(), row.end(), [](auto& x, auto& y) { return x.first < y.first; });
        size_t best = 0;
        bool best_unit = false;
        size_t best_occ = SIZE_MAX;
        for (size_t i = 0; i < row.size(); ++i) {
            const Rational& c = row[i].second;
            bool unit = abs(c.get_num()) == 1 && c.get_den() == 1;
            size_t o = occ_[row[i].first].size();
            if ((unit && !best_unit) || (unit == best_unit && o < best_occ)) {
                best = i;
                best_unit = unit;
                best_occ = o;
            }
        }
        uint32_t p = row[best].first;
        Rational inv = -1 / row[best].second;
        Row expr;
        for (auto& [j, c] : row)
            if (j != p) expr.push_back({j, c * inv});
        int32_t rid = static_cast<int32_t>(rows_.size());
        for (uint32_t r : occ_[p]) substitute(r, p, expr);
        occ_[p].clear();
        occ_[p].shrink_to_fit();
        for (auto& [j, c] : expr) occ_[j].push_back(static_cast<uint32_t>(rid));
        rows_.push_back(std::move(expr));
        pcol_.push_back(p);
        pivot_row_[p] = rid;
    }

    bool is_pivot(size_t j) const { return pivot_row_[j] >= 0; }
    const Row& expression(size_t j) const { return rows_[static_cast<size_t>(pivot_row_[j])]; }

private:
    void bump(uint32_t j, const Rational& c)
    {
        if (!mark_[j]) {
            mark_[j] = 1;
            touched_.push_back(j);
        }
        acc_[j] += c;
    }

    void substitute(uint32_t r, uint32_t p, const Row& expr)
    {
        Row& row = rows_[r];
        auto it = std::lower_bound(row.begin(), row.end(), p, [](auto& x, uint32_t v) { return x.first < v; });
        if (it == row.end() || it->first != p) return;
        Rational a = it->second;
        row.erase(it);
        Row merged;
        merged.reserve(row.size() + expr.size());
        size_t i = 0, j = 0;
        while (i < row.size() || j < expr.size()) {
            if (j == expr.size() || (i < row.size() && row[i].first < expr[j].first)) {
                merged.push_back(std::move(row[i++]));
            } else if (i == row.size() || expr[j].first < row[i].first) {
                merged.push_back({expr[j].first, a * expr[j].second});
                occ_[expr[j].first].push_back(r);
                ++j;
            } else {
                Rational s = row[i].second + a * expr[j].second;
                if (sgn(s) != 0) merged.push_back({row[i].first, s});
                ++i;
                ++j;
            }
        }
        row = std::move(merged);
    }

    std::vector<int32_t> pivot_row_;
    std::vector<std::vector<uint32_t>> occ_;
    std::vector<Row> rows_;
    std::vector<uint32_t> pcol_;
    std::vector<Rational> acc_;
    std::vector<char> mark_;
    std::vector<uint32_t> touched_;
};

struct UnionFind {
    std::vector<int32_t> parent;
    std::vector<int64_t> label; // x_s = zeta^label x_parent
    std::vector<char> zero;
    int64_t order;

    UnionFind(size_t n, int64_t rou) : parent(n), label(n, 0), zero(n, 0), order(rou)
    {
        for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int32_t>(i);
    }

    std::pair<int32_t, int64_t> find(int32_t s)
    {
        int64_t t = 0;
        int32_t r = s;
        while (parent[static_cast<size_t>(r)] != r) {
            t += label[static_cast<size_t>(r)];
            r = parent[static_cast<size_t>(r)];
        }
        t = mod64(t, order);
        // path compression
        int64_t acc = t;
        int32_t cur = s;
        while (parent[static_cast<size_t>(cur)] != cur) {
            int32_t next = parent[static_cast<size_t>(cur)];
            int64_t lab = label[static_cast<size_t>(cur)];
            parent[static_cast<size_t>(cur)] = r;
            label[static_cast<size_t>(cur)] = acc;
            acc = mod64(acc - lab, order);
            cur = next;
        }
        return {r, t};
    }

    // x_a = zeta^t x_b
    void relate(int32_t a, int32_t b, int64_t t)
    {
        auto [ra, ta] = find(a);
        auto [rb, tb] = find(b);
        int64_t u = mod64(t + tb - ta, order); // x_ra = zeta^u x_rb
        if (ra == rb) {
            if (u != 0) zero[static_cast<size_t>(ra)] = 1;
            return;
        }
        parent[static_cast<size_t>(ra)] = rb;
        label[static_cast<size_t>(ra)] = u;
        if (zero[static_cast<size_t>(ra)]) zero[static_cast<size_t>(rb)] = 1;
    }
};

} // namespace

int64_t ModularSymbolSpace::eps_exponent(int64_t unit) const
{
    return eps_.exponent_at(unit) * (rou_ / eps_.order());
}

void ModularSymbolSpace::add_scaled_root(std::vector<int64_t>& v, size_t offset, int64_t coef, int64_t t) const
{
    const auto& r = root_vec_[static_cast<size_t>(mod64(t, rou_))];
    for (size_t j = 0; j < deg_; ++j) v[offset + j] += coef * r[j];
}

void ModularSymbolSpace::apply_matrix(int32_t sym, const Mat2& h, std::vector<Term>& out) const
{
    size_t P = p1_->size();
    int i = static_cast<int>(static_cast<size_t>(sym) / P);
    size_t idx = static_cast<size_t>(sym) % P;
    auto [u, v] = p1_->point(idx);
    const int64_t a = h[0], b = h[1], c = h[2], d = h[3];
    auto nrm = p1_->normalize(mod64(u * a + v * c, N_), mod64(u * b + v * d, N_));
    if (nrm.index < 0) return;
    int w = k_ - 2;
    if (w == 0) {
        out.push_back(Term{1, nrm.index, static_cast<int32_t>(eps_exponent(nrm.scalar))});
        return;
    }
    // (aX + bY)^i (cX + dY)^(w - i), coefficient of X^j Y^(w-j)
    std::vector<int64_t> poly(static_cast<size_t>(w + 1), 0);
    poly[0] = 1;
    int deg = 0;
    auto mul_linear = [&](int64_t x, int64_t y) {
        for (int j = deg + 1; j >= 0; --j) {
            int64_t val = 0;
            if (j <= deg) val += poly[static_cast<size_t>(j)] * y;
            if (j >= 1) val += poly[static_cast<size_t>(j - 1)] * x;
            poly[static_cast<size_t>(j)] = val;
        }
        ++deg;
    };
    for (int e = 0; e < i; ++e) mul_linear(a, b);
    for (int e = 0; e < w - i; ++e) mul_linear(c, d);
    int32_t t = static_cast<int32_t>(eps_exponent(nrm.scalar));
    for (int j = 0; j <= w; ++j)
        if (poly[static_cast<size_t>(j)] != 0)
            out.push_back(Term{poly[static_cast<size_t>(j)], static_cast<int32_t>(static_cast<size_t>(j) * P + static_cast<size_t>(nrm.index)), t});
}

void ModularSymbolSpace::apply_diamond(int32_t sym, int64_t a, std::vector<Term>& out) const
{
    size_t P = p1_->size();
    size_t i = static_cast<size_t>(sym) / P;
    auto [u, v] = p1_->point(static_cast<size_t>(sym) % P);
    auto nrm = p1_->normalize(u * a, v * a);
    out.push_back(Term{1, static_cast<int32_t>(i * P + static_cast<size_t>(nrm.index)), static_cast<int32_t>(eps_exponent(nrm.scalar))});
}

std::shared_ptr<const ModularSymbolSpace> ModularSymbolSpace::build(int64_t N, int k, const DirichletCharacter& eps)
{
    if (N < 1) throw std::invalid_argument("modular symbols: level must be positive");
    if (k < 2) throw std::invalid_argument("modular symbols: weight must be at least 2");
    if (eps.modulus() != N) throw std::invalid_argument("modular symbols: character modulus differs from the level");
    std::shared_ptr<ModularSymbolSpace> S(new ModularSymbolSpace());
    S->N_ = N;
    S->k_ = k;
    S->eps_ = eps;
    S->build_impl();
    return S;
}

void ModularSymbolSpace::build_impl()
{
    const CyclotomicField& K = eps_.field();
    int64_t m = eps_.order();
    deg_ = static_cast<size_t>(K.degree());
    rou_ = lcm64(2, m);
    root_vec_.assign(static_cast<size_t>(rou_), std::vector<int64_t>(deg_, 0));
    for (int64_t t = 0; t < rou_; ++t) {
        CyclotomicField::Element z;
        int sign = 1;
        if (rou_ == m) {
            z = K.zeta_power(t);
        } else {
            // zeta_{2m} = -zeta_m^((m + 1) / 2)
            z = K.zeta_power(t * ((m + 1) / 2));
            if (t % 2) sign = -1;
        }
        for (size_t j = 0; j < deg_; ++j) root_vec_[static_cast<size_t>(t)][j] = sign * z[j].get_num().get_si();
    }
    p1_ = std::make_shared<const P1List>(N_);
    int parity = (k_ % 2 == 0) ? 1 : -1;
    if (eps_.parity() != parity) {
        note_ = "character parity differs from (-1)^k: the space is zero";
        lattice_ = RatMatrix(0, 0);
        K_ = IntMatrix(0, 0);
        P_ = IntMatrix(0, 0);
        bd_lattice_ = IntMatrix(0, 0);
        coords_ = IntMatrix(0, 0);
        return;
    }

    size_t P = p1_->size();
    size_t nsym = static_cast<size_t>(k_ - 1) * P;
    const Mat2 sigma{0, -1, 1, 0}, tau{0, -1, 1, -1}, tau2{-1, 1, -1, 0};

    UnionFind uf(nsym, rou_);
    std::vector<Term> terms;
    for (size_t s = 0; s < nsym; ++s) {
        terms.clear();
        apply_matrix(static_cast<int32_t>(s), sigma, terms);
        const Term& x = terms.at(0);
        // x_s + coef zeta^t x_s' = 0
        int64_t t = x.t + (x.coef < 0 ? 0 : rou_ / 2);
        uf.relate(static_cast<int32_t>(s), x.sym, t);
    }
    sym_class_.assign(nsym, -1);
    sym_t_.assign(nsym, 0);
    std::vector<int32_t> root_class(nsym, -1);
    for (size_t s = 0; s < nsym; ++s) {
        auto [r, t] = uf.find(static_cast<int32_t>(s));
        if (uf.zero[static_cast<size_t>(r)]) continue;
        if (root_class[static_cast<size_t>(r)] < 0) {
            root_class[static_cast<size_t>(r)] = static_cast<int32_t>(class_rep_.size());
            class_rep_.push_back(r);
        }
        sym_class_[s] = root_class[static_cast<size_t>(r)];
        sym_t_[s] = static_cast<int32_t>(t);
    }
    nqcols_ = class_rep_.size() * deg_;

    SparseEliminator elim(nqcols_);
    std::vector<int64_t> dense(nqcols_, 0);
    std::vector<size_t> used;
    std::vector<char> used_mark(class_rep_.size(), 0);
    for (size_t s = 0; s < nsym; ++s) {
        terms.clear();
        terms.push_back(Term{1, static_cast<int32_t>(s), 0});
        apply_matrix(static_cast<int32_t>(s), tau, terms);
        apply_matrix(static_cast<int32_t>(s), tau2, terms);
        for (size_t j0 = 0; j0 < deg_; ++j0) {
            used.clear();
            for (const Term& x : terms) {
                int32_t c = sym_class_[static_cast<size_t>(x.sym)];
                if (c < 0) continue;
                if (!used_mark[static_cast<size_t>(c)]) {
                    used_mark[static_cast<size_t>(c)] = 1;
                    used.push_back(static_cast<size_t>(c));
                }
                int64_t t = x.t + sym_t_[static_cast<size_t>(x.sym)] + static_cast<int64_t>(j0) * (rou_ / m);
                add_scaled_root(dense, static_cast<size_t>(c) * deg_, x.coef, t);
            }
            SparseEliminator::Row row;
            std::sort(used.begin(), used.end());
            for (size_t c : used) {
                used_mark[c] = 0;
                for (size_t j = 0; j < deg_; ++j) {
                    size_t q = c * deg_ + j;
                    if (dense[q] != 0) row.push_back({static_cast<uint32_t>(q), Rational(dense[q])});
                    dense[q] = 0;
                }
            }
            if (!row.empty()) elim.add(row);
        }
    }

    std::vector<int64_t> free_index(nqcols_, -1);
    for (size_t q = 0; q < nqcols_; ++q)
        if (!elim.is_pivot(q)) {
            free_index[q] = static_cast<int64_t>(free_qcol_.size());
            free_qcol_.push_back(q);
        }
    nfree_ = free_qcol_.size();
    expr_.assign(nqcols_, {});
    for (size_t q = 0; q < nqcols_; ++q) {
        if (free_index[q] >= 0) {
            expr_[q].push_back({static_cast<size_t>(free_index[q]), Rational(1)});
        } else {
            for (auto& [j, c] : elim.expression(q)) expr_[q].push_back({static_cast<size_t>(free_index[j]), c});
            std::sort(expr_[q].begin(), expr_[q].end(), [](auto& x, auto& y) { return x.first < y.first; });
        }
    }

    // Manin-image lattice
    BigInt D = 1;
    for (auto& e : expr_)
        for (auto& [j, c] : e) D = lcm(D, BigInt(c.get_den()));
    standard_ = (D == 1);
    coords_ = IntMatrix(nfree_, nqcols_);
    if (standard_) {
        lattice_ = RatMatrix::identity(nfree_);
        basis_combo_.assign(nfree_, {});
        for (size_t f = 0; f < nfree_; ++f) basis_combo_[f].push_back({free_qcol_[f], BigInt(1)});
        for (size_t q = 0; q < nqcols_; ++q)
            for (auto& [j, c] : expr_[q]) coords_.at(j, q) = c.get_num();
    } else {
        std::vector<size_t> row_qcol(free_qcol_);
        for (size_t q = 0; q < nqcols_; ++q) {
            if (free_index[q] >= 0) continue;
            bool integral = true;
            for (auto& [j, c] : expr_[q])
                if (c.get_den() != 1) integral = false;
            if (!integral) row_qcol.push_back(q);
        }
        IntMatrix M(row_qcol.size(), nfree_);
        for (size_t r = 0; r < row_qcol.size(); ++r)
            for (auto& [j, c] : expr_[row_qcol[r]]) M.at(r, j) = BigInt(c * D);
        HnfResult H = hnf(M, true);
        if (H.rank != nfree_) throw std::logic_error("modular symbols: lattice rank mismatch");
        IntMatrix Hb = H.H.row_range(0, nfree_);
        lattice_ = RatMatrix(nfree_, nfree_);
        basis_combo_.assign(nfree_, {});
        for (size_t b = 0; b < nfree_; ++b) {
            for (size_t j = 0; j < nfree_; ++j) lattice_.at(j, b) = Rational(Hb.at(b, j)) / Rational(D);
            // b = sum m_q expr(q) + w with m_q reduced mod the denominator of expr(q), w integral
            std::vector<Rational> w(nfree_);
            for (size_t j = 0; j < nfree_; ++j) w[j] = lattice_.at(j, b);
            for (size_t r = nfree_; r < row_qcol.size(); ++r) {
                size_t q = row_qcol[r];
                BigInt den = 1;
                for (auto& [j, c] : expr_[q]) den = lcm(den, BigInt(c.get_den()));
                BigInt mq = H.U.at(b, r) % den;
                if (sgn(mq) < 0) mq += den;
                if (sgn(mq) == 0) continue;
                basis_combo_[b].push_back({q, mq});
                for (auto& [j, c] : expr_[q]) w[j] -= Rational(mq) * c;
            }
            for (size_t f = 0; f < nfree_; ++f) {
                if (w[f].get_den() != 1) throw std::logic_error("modular symbols: lattice basis decomposition failed");
                if (sgn(w[f]) != 0) basis_combo_[b].push_back({free_qcol_[f], w[f].get_num()});
            }
        }
        std::vector<BigInt> v(nfree_), cc;
        for (size_t q = 0; q < nqcols_; ++q) {
            std::fill(v.begin(), v.end(), BigInt(0));
            for (auto& [j, c] : expr_[q]) v[j] = BigInt(c * D);
            if (!hnf_coordinates(Hb, H.pivots, v, cc)) throw std::logic_error("modular symbols: generator outside its lattice");
            for (size_t b = 0; b < nfree_; ++b) coords_.at(b, q) = cc[b];
        }
    }

    // Boundary: Gamma_1(N) vector classes (v mod N, u mod gcd(v, N)) modulo the
    // units s acting by (u, v) -> (u / s, s v) with factor eps(s).
    std::vector<int64_t> units;
    if (N_ == 1) units.push_back(1);
    for (int64_t a = 1; a < N_; ++a)
        if (gcd64(a, N_) == 1) units.push_back(a);
    std::unordered_map<int64_t, std::pair<int32_t, int32_t>> cusp_of;
    int32_t ncls = 0;
    auto cusp_key = [&](int64_t u, int64_t v) {
        int64_t vn = mod64(v, N_);
        int64_t g = gcd64(vn, N_);
        if (g == 0) g = N_;
        return vn * N_ + mod64(u, g);
    };
    auto cusp_class = [&](int64_t u, int64_t v) -> std::pair<int32_t, int32_t> {
        int64_t key = cusp_key(u, v);
        auto it = cusp_of.find(key);
        if (it != cusp_of.end()) return it->second;
        bool vanish = false;
        std::vector<std::pair<int64_t, int32_t>> orbit;
        for (int64_t s : units) {
            int64_t si = N_ == 1 ? 1 : invmod64(s % N_, N_);
            int64_t key2 = cusp_key(u * si, v * s);
            int32_t t = static_cast<int32_t>(mod64(eps_exponent(s), rou_));
            if (key2 == key && t != 0) vanish = true;
            orbit.push_back({key2, t});
        }
        int32_t id = vanish ? -1 : ncls++;
        for (auto& [k2, t] : orbit)
            if (!cusp_of.count(k2)) cusp_of[k2] = {id, vanish ? 0 : t};
        return cusp_of[key];
    };
    std::vector<std::vector<std::pair<int32_t, int64_t>>> bd_terms(nqcols_); // (class, exponent) with sign in coef
    std::vector<std::vector<int64_t>> bd_coef(nqcols_);
    for (size_t q = 0; q < nqcols_; ++q) {
        size_t c = q / deg_, j = q % deg_;
        size_t sym = static_cast<size_t>(class_rep_[c]);
        int i = static_cast<int>(sym / P);
        if (i != k_ - 2 && i != 0) continue;
        auto [cc, dd] = p1_->point(sym % P);
        int64_t C, Dd;
        if (N_ == 1) {
            C = 0;
            Dd = 1;
        } else {
            C = cc == 0 ? N_ : cc;
            Dd = dd;
            while (gcd64(C, Dd) != 1) Dd += N_;
        }
        int64_t x, y;
        xgcd64(Dd, C, x, y); // x Dd + y C = 1
        int64_t a = x, b = -y;
        int64_t shift = static_cast<int64_t>(j) * (rou_ / m);
        if (i == k_ - 2) {
            auto [id, t] = cusp_class(a, C);
            if (id >= 0) {
                bd_terms[q].push_back({id, t + shift});
                bd_coef[q].push_back(1);
            }
        }
        if (i == 0) {
            auto [id, t] = cusp_class(b, Dd);
            if (id >= 0) {
                bd_terms[q].push_back({id, t + shift});
                bd_coef[q].push_back(-1);
            }
        }
    }
    ncusp_ = static_cast<size_t>(ncls);
    size_t nbq = ncusp_ * deg_;
    bd_qcol_.assign(nqcols_, {});
    std::vector<int64_t> tmp(nbq, 0);
    for (size_t q = 0; q < nqcols_; ++q) {
        if (bd_terms[q].empty()) continue;
        for (size_t e = 0; e < bd_terms[q].size(); ++e)
            add_scaled_root(tmp, static_cast<size_t>(bd_terms[q][e].first) * deg_, bd_coef[q][e], bd_terms[q][e].second);
        for (size_t r = 0; r < nbq; ++r)
            if (tmp[r] != 0) {
                bd_qcol_[q].push_back({r, BigInt(tmp[r])});
                tmp[r] = 0;
            }
    }
    bd_lattice_ = IntMatrix(nbq, nfree_);
    for (size_t b = 0; b < nfree_; ++b)
        for (auto& [q, n] : basis_combo_[b])
            for (auto& [r, v] : bd_qcol_[q]) bd_lattice_.at(r, b) += n * v;
    integer_kernel(bd_lattice_, K_, P_);
}

bool ModularSymbolSpace::boundary_consistent() const
{
    size_t nbq = ncusp_ * deg_;
    for (size_t q = 0; q < nqcols_; ++q) {
        std::vector<Rational> want(nbq), got(nbq);
        for (auto& [r, v] : bd_qcol_[q]) want[r] = v;
        for (auto& [f, c] : expr_[q])
            for (auto& [r, v] : bd_qcol_[free_qcol_[f]]) got[r] += c * v;
        if (want != got) return false;
    }
    return true;
}

} // namespace katz1

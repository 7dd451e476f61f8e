#include "katz1/weight_one.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "katz1/arith.hpp"

namespace katz1 {

int64_t weight1_cutoff(int64_t N, uint64_t p, BoundMode mode)
{
    if (N < 5) throw std::invalid_argument("weight1_cutoff: level must be at least 5");
    if (gcd64(N, static_cast<int64_t>(p)) != 1) throw std::invalid_argument("weight1_cutoff: p divides the level");
    int64_t P = static_cast<int64_t>(p);
    if (mode == BoundMode::fixed_character) return (P + 2) * gamma0_index(N) / 12;
    // N^2 prod (1 - 1/l^2)
    BigInt j2 = BigInt(N) * N;
    for (int64_t l : prime_divisors(N)) j2 = j2 / (l * l) * (l * l - 1);
    BigInt b = (P + 2) * j2 / 24;
    return b.get_si();
}

FiniteField::Elt EigenSystem::at(int64_t l) const
{
    auto it = std::lower_bound(primes.begin(), primes.end(), l);
    if (it == primes.end() || *it != l) throw std::out_of_range("eigensystem: prime not recorded");
    return a[static_cast<size_t>(it - primes.begin())];
}

namespace {

FqMatrix restrict_to(const FqMatrix& X, const FqMatrix& W)
{
    FqMatrix R;
    if (!solve(W, X * W, R)) throw std::logic_error("restriction: subspace not invariant");
    return R;
}

FqMatrix as_column(const FqVector& v, const FieldPtr& F)
{
    FqMatrix M(F, v.size(), 1);
    M.set_column(0, v);
    return M;
}

bool trivial_character(const ModPHeckeAlgebra& A)
{
    for (int64_t a = 1; a < A.level(); ++a)
        if (gcd64(a, A.level()) == 1 && A.eps(a) != 1) return false;
    return true;
}

} // namespace

bool is_eisenstein(const EigenSystem& s, int64_t N, uint64_t p, int k)
{
    int e = s.field->degree();
    if (2 * e > 62) return false;
    FieldPtr L = FiniteField::make(p, 2 * e);
    FieldEmbedding emb(s.field, L);
    auto G = UnitGroup::make(N);
    uint64_t Q = L->order() - 1;
    FiniteField::Elt gamma = L->primitive_element();
    std::vector<int64_t> test;
    for (int64_t l : s.primes)
        if (N % l != 0 && static_cast<uint64_t>(l) != p) test.push_back(l);
    if (test.empty()) return false;
    size_t ng = G->gens.size();
    std::vector<uint64_t> g(ng), step(ng);
    uint64_t count = 1;
    for (size_t i = 0; i < ng; ++i) {
        g[i] = std::gcd(static_cast<uint64_t>(G->orders[i]), Q);
        step[i] = Q / g[i];
        count *= g[i];
    }
    if (count > 200000) return false;
    std::vector<std::vector<FiniteField::Elt>> values;
    std::vector<uint64_t> j(ng, 0);
    for (uint64_t c = 0; c < count; ++c) {
        std::vector<FiniteField::Elt> v;
        for (int64_t l : test) {
            const auto& lg = G->logs[static_cast<size_t>(l % N)];
            unsigned __int128 idx = 0;
            for (size_t i = 0; i < ng; ++i) idx += static_cast<unsigned __int128>(static_cast<uint64_t>(lg[i])) * step[i] * j[i];
            v.push_back(L->pow(gamma, static_cast<uint64_t>(idx % Q)));
        }
        values.push_back(std::move(v));
        for (size_t i = 0; i < ng; ++i) {
            if (++j[i] < g[i]) break;
            j[i] = 0;
        }
    }
    std::set<std::vector<FiniteField::Elt>> lookup(values.begin(), values.end());
    std::vector<FiniteField::Elt> a;
    std::vector<FiniteField::Elt> lk;
    for (int64_t l : test) {
        a.push_back(emb(s.at(l)));
        lk.push_back(L->inv(L->from_int(static_cast<int64_t>(powmod64(static_cast<uint64_t>(l), static_cast<uint64_t>(k - 1), p)))));
    }
    for (auto& chi1 : values) {
        std::vector<FiniteField::Elt> want(test.size());
        for (size_t t = 0; t < test.size(); ++t) want[t] = L->mul(L->sub(a[t], chi1[t]), lk[t]);
        if (lookup.count(want)) return true;
    }
    return false;
}

std::vector<EigenOrbit> eigen_orbits(const std::vector<FqMatrix>& ops, const std::vector<int64_t>& primes, uint64_t seed)
{
    std::vector<EigenOrbit> out;
    if (ops.empty() || ops[0].rows() == 0) return out;
    Decomposition dec = local_decomposition(ops, seed);
    for (size_t i = 0; i < dec.factors.size(); ++i) {
        const auto& lf = dec.factors[i];
        EigenOrbit o;
        o.rep.field = lf.residue_field;
        o.rep.primes = primes;
        o.rep.a = lf.systems[0];
        o.rep.orbit = i;
        o.rep.orbit_size = lf.num_max_ideals();
        o.size = lf.num_max_ideals();
        o.eigenspace_dimension = lf.eigenspace_dimension;
        out.push_back(std::move(o));
    }
    return out;
}

bool systems_match(const EigenSystem& a, const EigenSystem& b, int64_t skip_prime)
{
    std::vector<FiniteField::Elt> va, vb;
    for (size_t i = 0; i < a.primes.size(); ++i) {
        int64_t l = a.primes[i];
        if (l == skip_prime) continue;
        auto it = std::lower_bound(b.primes.begin(), b.primes.end(), l);
        if (it == b.primes.end() || *it != l) continue;
        va.push_back(a.a[i]);
        vb.push_back(b.a[static_cast<size_t>(it - b.primes.begin())]);
    }
    // conjugate systems generate the same field of values; compare there
    int e = value_degree(*a.field, va);
    if (value_degree(*b.field, vb) != e) return false;
    FieldPtr K = FiniteField::make(a.field->characteristic(), e);
    FieldEmbedding ea(K, a.field), eb(K, b.field);
    for (auto& v : va) v = descend(ea, v);
    for (auto& v : vb) v = descend(eb, v);
    return conjugate_systems(*K, va, vb);
}

bool same_orbits(const std::vector<EigenOrbit>& a, const std::vector<EigenOrbit>& b)
{
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (auto& x : a) {
        bool found = false;
        for (size_t j = 0; j < b.size() && !found; ++j)
            if (!used[j] && x.size == b[j].size && systems_match(x.rep, b[j].rep)) used[j] = found = true;
        if (!found) return false;
    }
    return true;
}

std::shared_ptr<const WeightOneModule> WeightOneModule::build(int64_t N, uint64_t p, const DirichletCharacter& eps, const Options& opt)
{
    if (N < 5) throw std::invalid_argument("weight-one module: level must be at least 5");
    if (gcd64(N, static_cast<int64_t>(p)) != 1) throw std::invalid_argument("weight-one module: level not coprime to p");
    if (!is_prime64(p)) throw std::invalid_argument("weight-one module: p must be prime");
    if (eps.modulus() != N) throw std::invalid_argument("weight-one module: character modulus differs from the level");
    int k = static_cast<int>(p);
    int64_t cutoff = weight1_cutoff(N, p, opt.mode);
    int wanted = (k % 2) ? -1 : 1;
    if (eps.parity() != wanted) {
        std::shared_ptr<WeightOneModule> W(new WeightOneModule());
        W->N_ = N;
        W->p_ = p;
        W->chi_id_ = eps.id();
        W->cutoff_ = cutoff;
        W->F_ = FiniteField::make(p, 1);
        W->note_ = "character parity differs from (-1)^p: zero module";
        W->Yp_ = FqMatrix(W->F_, 0, 0);
        return W;
    }
    int64_t bound = std::max({generation_bound(N, k), cutoff, static_cast<int64_t>(p), opt.algebra_bound});
    std::shared_ptr<const ModPHeckeAlgebra> A;
    bool hit = false;
    if (!opt.cache_dir.empty()) {
        HeckeCache cache(opt.cache_dir);
        A = cache.load(N, k, eps.id(), bound, p, opt.prime_choice);
        hit = A != nullptr;
        if (!A) {
            A = ModPHeckeAlgebra::build(ModularSymbolSpace::build(N, k, eps), p, bound, opt.prime_choice);
            cache.store(*A);
        }
    } else {
        A = ModPHeckeAlgebra::build(ModularSymbolSpace::build(N, k, eps), p, bound, opt.prime_choice);
    }
    auto W = from_algebra(A, cutoff, opt.seed);
    const_cast<WeightOneModule&>(*W).from_cache_ = hit;
    return W;
}

std::shared_ptr<const WeightOneModule> WeightOneModule::from_algebra(std::shared_ptr<const ModPHeckeAlgebra> A, int64_t cutoff,
                                                                     uint64_t seed)
{
    std::shared_ptr<WeightOneModule> W(new WeightOneModule());
    W->N_ = A->level();
    W->p_ = A->p();
    W->chi_id_ = A->character_id();
    W->cutoff_ = cutoff;
    W->A_ = std::move(A);
    W->F_ = W->A_->field();
    W->seed_ = seed;
    if (cutoff > W->A_->bound() || static_cast<int64_t>(W->p_) > W->A_->bound())
        throw std::invalid_argument("weight-one module: algebra bound below the cutoff");
    W->construct();
    return W;
}

void WeightOneModule::construct()
{
    const ModPHeckeAlgebra& A = *A_;
    size_t d = A.dim();
    int64_t P = static_cast<int64_t>(p_);
    exact_ = false;
    if (p_ == 2 && trivial_character(A))
        for (int64_t q : prime_divisors(N_))
            if (q % 4 == 3) exact_ = true;
    if (!A.faithful())
        diag_.push_back("LOWER-BOUND: dim A = " + std::to_string(d) + " < rank " + std::to_string(A.expected_rank()));
    if (d == 0) {
        note_ = "zero cusp form space";
        Rb_ = Y_ = Yp_ = FqMatrix(F_, 0, 0);
        return;
    }
    eps_p_ = A.eps(P);
    std::vector<FqVector> rcols;
    for (int64_t n = 1; n <= cutoff_; ++n)
        if (n % P != 0) rcols.push_back(A.express(n));
    Rb_ = column_space(FqMatrix::from_columns(F_, d, rcols));
    Y_ = kernel(Rb_.transpose());
    const FqMatrix& Mp = A.mult_prime(P);
    Yp_ = Mp.transpose() * Y_;
    if (rank(Yp_) != Y_.cols()) throw std::runtime_error("weight-one transport degenerate");
    if (2 * dim() > d) diag_.push_back("2 dim H > dim A");
    if (dim() == 0) return;

    for (int64_t l : primes_up_to(cutoff_)) {
        prime_ops_.emplace(l, dual_op(l));
        gens_.push_back(prime_ops_.at(l));
        gen_primes_.push_back(l);
    }
    dec_ = local_decomposition(gens_, seed_);
    for (size_t i = 0; i < dec_.factors.size(); ++i) {
        const auto& lf = dec_.factors[i];
        for (auto& sys : lf.systems) {
            EigenSystem s;
            s.field = lf.residue_field;
            s.primes = gen_primes_;
            s.a = sys;
            s.a_p = s.at(P);
            s.orbit = i;
            s.orbit_size = lf.num_max_ideals();
            systems_.push_back(std::move(s));
        }
    }
}

FqMatrix WeightOneModule::dual_op(int64_t l) const
{
    const ModPHeckeAlgebra& A = *A_;
    FqMatrix Mt = A.mult_prime(l).transpose();
    if (l != static_cast<int64_t>(p_)) return restrict_to(Mt, Yp_);
    // T_p' = (t_p)^T + eps(p) Phi^{-1}
    FqMatrix img = Mt * Yp_;
    img.add_scaled(Y_, eps_p_);
    FqMatrix X;
    if (!solve(Yp_, img, X)) throw std::logic_error("weight-one module: T_p' leaves L'");
    return X;
}

FqMatrix WeightOneModule::op(int64_t n) const
{
    if (n < 1) throw std::invalid_argument("weight-one operator: index must be positive");
    size_t h = dim();
    FqMatrix T = FqMatrix::identity(F_, h);
    if (n == 1 || h == 0) return T;
    for (auto [l, e] : factor64(n)) {
        FqMatrix Tl;
        auto it = prime_ops_.find(l);
        if (it != prime_ops_.end()) Tl = it->second;
        else if (l <= A_->bound()) Tl = dual_op(l);
        else throw std::out_of_range("weight-one operator: prime beyond the algebra bound");
        FqMatrix prev = FqMatrix::identity(F_, h), cur = Tl;
        FiniteField::Elt c = N_ % l == 0 ? 0 : A_->eps(l);
        for (int i = 2; i <= e; ++i) {
            FqMatrix next = Tl * cur;
            if (c) next.add_scaled(prev, F_->neg(c));
            prev = std::move(cur);
            cur = std::move(next);
        }
        T = T * cur;
    }
    return T;
}

FqMatrix WeightOneModule::frobenius() const
{
    const ModPHeckeAlgebra& A = *A_;
    size_t d = A.dim(), h = dim();
    int64_t P = static_cast<int64_t>(p_);
    const FqMatrix& C = A.table();
    size_t B = C.cols();
    FqMatrix rhs(F_, B, h);
    for (size_t j = 0; j < h; ++j) {
        FqVector y = Yp_.column(j);
        for (size_t n = 1; n <= B; ++n) {
            if (n % static_cast<size_t>(P) != 0) continue;
            FqVector c = C.column(n / static_cast<size_t>(P) - 1);
            FiniteField::Elt s = 0;
            for (size_t i = 0; i < d; ++i) s = F_->add(s, F_->mul(y[i], c[i]));
            rhs.set(n - 1, j, s);
        }
    }
    FqMatrix X;
    if (!solve(C.transpose(), rhs, X)) throw std::logic_error("weight-one module: Frobenius not defined on L'");
    return X;
}

bool WeightOneModule::transport_consistent() const
{
    if (dim() == 0) return true;
    FqMatrix Fm = frobenius();
    return Fm == Y_ && A_->mult_prime(static_cast<int64_t>(p_)).transpose() * Fm == Yp_;
}

bool WeightOneModule::r_stable(int64_t upto) const
{
    if (!A_ || A_->dim() == 0) return true;
    size_t r = rank(Rb_);
    for (int64_t l : primes_up_to(std::min(upto, A_->bound()))) {
        if (l == static_cast<int64_t>(p_)) continue;
        if (rank(Rb_.hstack(A_->mult_prime(l) * Rb_)) != r) return false;
    }
    return true;
}

FqVector WeightOneModule::eigenvector(size_t factor, FieldPtr& K) const
{
    const LocalFactor& lf = dec_.factors.at(factor);
    K = lf.residue_field;
    FqVector v = lf.eigenspace.column(0);
    FieldEmbedding emb(F_, K);
    FqMatrix g = Yp_.mapped(emb) * as_column(v, K);
    FqVector c1 = A_->express(1);
    FiniteField::Elt a1 = 0;
    for (size_t i = 0; i < c1.size(); ++i) a1 = K->add(a1, K->mul(g.get(i, 0), emb(c1[i])));
    if (!a1) throw std::logic_error("weight-one module: eigenform with a_1 = 0");
    FiniteField::Elt s = K->inv(a1);
    for (auto& x : v) x = K->mul(x, s);
    return v;
}

std::vector<FiniteField::Elt> WeightOneModule::qexpansion(const FqVector& v, const FieldPtr& K, int64_t nmax) const
{
    if (v.size() != dim()) throw std::invalid_argument("qexpansion: wrong vector length");
    FieldEmbedding emb(F_, K);
    FqMatrix vc = as_column(v, K);
    if (vc.is_zero()) throw std::invalid_argument("qexpansion: zero vector");
    for (auto& X : gens_) {
        FqMatrix Xv = X.mapped(emb) * vc;
        size_t i = 0;
        while (!v[i]) ++i;
        FiniteField::Elt lam = K->div(Xv.get(i, 0), v[i]);
        if (Xv != vc.scaled(lam)) throw std::invalid_argument("qexpansion: not a common eigenvector");
    }
    FqMatrix g = Yp_.mapped(emb) * vc;
    const FqMatrix& C = A_->table();
    size_t d = A_->dim();
    auto direct = [&](int64_t n) {
        FqVector c = C.column(static_cast<size_t>(n - 1));
        FiniteField::Elt s = 0;
        for (size_t i = 0; i < d; ++i)
            if (c[i]) s = K->add(s, K->mul(g.get(i, 0), emb(c[i])));
        return s;
    };
    FiniteField::Elt a1 = direct(1);
    if (!a1) throw std::invalid_argument("qexpansion: a_1 vanishes");
    FiniteField::Elt norm = K->inv(a1);
    std::vector<FiniteField::Elt> a(static_cast<size_t>(nmax) + 1, 0);
    int64_t B = A_->bound();
    for (int64_t n = 1; n <= nmax; ++n) {
        if (n <= B) {
            a[static_cast<size_t>(n)] = K->mul(direct(n), norm);
            continue;
        }
        auto fac = factor64(n);
        if (fac.size() > 1) {
            FiniteField::Elt x = 1;
            for (auto [l, e] : fac) {
                int64_t q = 1;
                for (int i = 0; i < e; ++i) q *= l;
                x = K->mul(x, a[static_cast<size_t>(q)]);
            }
            a[static_cast<size_t>(n)] = x;
            continue;
        }
        int64_t l = fac[0].first;
        if (n == l) throw std::out_of_range("qexpansion: prime beyond the algebra bound");
        FiniteField::Elt x = K->mul(a[static_cast<size_t>(l)], a[static_cast<size_t>(n / l)]);
        if (N_ % l != 0) x = K->sub(x, K->mul(emb(A_->eps(l)), a[static_cast<size_t>(n / (l * l))]));
        a[static_cast<size_t>(n)] = x;
    }
    a.erase(a.begin());
    return a;
}

std::vector<std::string> eigenvalue_set(const LocalFactor& f)
{
    const FiniteField& K = *f.residue_field;
    std::vector<FiniteField::Elt> seen;
    for (auto x : f.systems.at(0))
        if (std::find(seen.begin(), seen.end(), x) == seen.end()) seen.push_back(x);
    auto key = [&](FiniteField::Elt x) -> uint64_t {
        if (K.degree() == 1) return x;
        if (!x) return K.order();
        uint64_t e = 0;
        for (FiniteField::Elt y = 1; y != x; y = K.mul(y, K.gen())) ++e;
        return e;
    };
    std::sort(seen.begin(), seen.end(), [&](auto x, auto y) { return key(x) < key(y); });
    std::vector<std::string> out;
    for (auto x : seen) out.push_back(power_string(K, x));
    return out;
}

std::string WeightOneModule::session_text(const std::string& class_number_line) const
{
    std::ostringstream os;
    os << "Level N = " << N_ << ":\n***************************\n\n";
    os << "Dimension = " << dim() << "\nBound = " << cutoff_ << "\n";
    if (!class_number_line.empty()) os << class_number_line << "\n";
    if (dim() == 0) return os.str();
    std::vector<std::string> eig;
    for (auto& lf : dec_.factors) {
        std::string s = "{ ";
        auto vals = eigenvalue_set(lf);
        for (size_t i = 0; i < vals.size(); ++i) s += (i ? ", " : "") + vals[i];
        eig.push_back(s + " }");
    }
    os << format_factors(dec_.factors, eig);
    return os.str();
}

EigenspaceReport eigenspace_check(const WeightOneModule& W)
{
    EigenspaceReport rep;
    const auto& A = W.algebra();
    if (!A || A->dim() == 0) return rep;
    rep.lower_bound_caveat = !A->faithful();
    int64_t P = static_cast<int64_t>(W.p());
    std::vector<FqMatrix> ops;
    std::vector<int64_t> primes;
    for (int64_t l : primes_up_to(W.cutoff())) {
        if (l == P) continue;
        ops.push_back(A->mult_prime(l).transpose());
        primes.push_back(l);
    }
    FqMatrix Tp = A->mult_prime(P).transpose();
    Decomposition dec = local_decomposition(ops, 0x70726f70ULL);
    std::vector<bool> used(W.eigensystems().size(), false);
    for (size_t i = 0; i < dec.factors.size(); ++i) {
        const auto& lf = dec.factors[i];
        EigenspaceCheck e;
        e.orbit.rep.field = lf.residue_field;
        e.orbit.rep.primes = primes;
        e.orbit.rep.a = lf.systems[0];
        e.orbit.rep.orbit = i;
        e.orbit.size = lf.num_max_ideals();
        e.orbit.eigenspace_dimension = lf.eigenspace_dimension;
        const FieldPtr& K = lf.residue_field;
        FqMatrix V = lf.eigenspace;
        FqMatrix TV = restrict_to(Tp.mapped(FieldEmbedding(Tp.field(), K)), V);
        FiniteField::Elt tr = 0;
        for (size_t j = 0; j < TV.rows(); ++j) tr = K->add(tr, TV.get(j, j));
        e.orbit.trace_tp = tr;
        size_t dv = lf.eigenspace_dimension;
        // the matching weight-one system, a_p compared to the trace
        int found = -1;
        for (size_t j = 0; j < W.eigensystems().size() && found < 0; ++j)
            if (systems_match(W.eigensystems()[j], e.orbit.rep, P)) found = static_cast<int>(j);
        e.in_weight_one = found >= 0;
        if (found >= 0) {
            EigenSystem withp = e.orbit.rep;
            auto pos = std::lower_bound(withp.primes.begin(), withp.primes.end(), P);
            withp.a.insert(withp.a.begin() + (pos - withp.primes.begin()), tr);
            withp.primes.insert(pos, P);
            e.trace_matches = systems_match(W.eigensystems()[static_cast<size_t>(found)], withp);
        }
        std::ostringstream why;
        if (dv < 1 || dv > 2) why << "eigenspace dimension " << dv;
        else if (dv == 2 && !e.in_weight_one) why << "dimension 2 system missing from weight one";
        else if (dv == 2 && !e.trace_matches) why << "a_p differs from the trace of T_p";
        else if (dv == 1 && e.in_weight_one) why << "dimension 1 system present in weight one";
        e.ok = why.str().empty();
        if (!e.ok) {
            rep.ok = false;
            rep.failures.push_back("level " + std::to_string(W.level()) + " system " + std::to_string(i) + ": " + why.str());
        }
        rep.entries.push_back(std::move(e));
    }
    // every weight-one system comes from a dimension-2 eigenspace
    for (size_t j = 0; j < W.eigensystems().size(); ++j) {
        bool hit = false;
        for (auto& e : rep.entries)
            if (e.orbit.eigenspace_dimension == 2 && systems_match(W.eigensystems()[j], e.orbit.rep, P)) hit = true;
        if (!hit) {
            rep.ok = false;
            rep.failures.push_back("level " + std::to_string(W.level()) + " weight-one system " + std::to_string(j) +
                                   " has no dimension-2 eigenspace");
        }
    }
    return rep;
}

CrossValidation crossvalidate_mod2(int64_t N)
{
    if (N < 5 || N % 2 == 0) throw std::invalid_argument("crossvalidate_mod2: N must be odd and at least 5");
    CrossValidation cv;
    cv.level = N;
    int64_t cutoff = weight1_cutoff(N, 2);
    auto primes = primes_up_to(cutoff);
    auto D = ModPSymbolSpace::build(N, 2, 2);
    std::vector<FqMatrix> dops;
    for (int64_t l : primes) dops.push_back(D->hecke_prime(l));
    auto S = ModularSymbolSpace::build(N, 2, DirichletCharacter::trivial(N));
    auto A = ModPHeckeAlgebra::build(S, 2, std::max(cutoff, generation_bound(N, 2)));
    std::vector<FqMatrix> rops;
    for (int64_t l : primes) rops.push_back(A->mult_prime(l).transpose());
    auto filter = [&](std::vector<EigenOrbit> all, size_t& eis) {
        std::vector<EigenOrbit> out;
        for (auto& o : all) {
            o.eisenstein = is_eisenstein(o.rep, N, 2, 2);
            if (o.eisenstein) ++eis;
            else out.push_back(std::move(o));
        }
        return out;
    };
    cv.direct = filter(D->cuspidal_dimension() ? eigen_orbits(dops, primes) : std::vector<EigenOrbit>{}, cv.direct_eisenstein);
    cv.reduced = filter(A->dim() ? eigen_orbits(rops, primes) : std::vector<EigenOrbit>{}, cv.reduced_eisenstein);
    cv.equal = same_orbits(cv.direct, cv.reduced);
    return cv;
}

} // namespace katz1

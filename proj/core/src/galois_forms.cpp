#include "katz1/galois_forms.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "katz1/arith.hpp"

namespace katz1 {

namespace {

int64_t floor_div(int64_t a, int64_t b)
{
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// x < sqrt(D), x > sqrt(D) for non-square D > 0
bool below_root(int64_t x, int64_t D) { return x < 0 || x * x < D; }
bool above_root(int64_t x, int64_t D) { return x > 0 && x * x > D; }

QuadForm normalize_definite(QuadForm f)
{
    int64_t D = f.discriminant();
    int64_t two_a = 2 * f.a;
    int64_t r = mod64(f.b, two_a);
    if (r > f.a) r -= two_a;
    f.b = r;
    f.c = (f.b * f.b - D) / (4 * f.a);
    return f;
}

QuadForm rho(const QuadForm& f)
{
    int64_t D = f.discriminant();
    int64_t ac = std::abs(f.c), m = 2 * ac;
    int64_t r;
    if (below_root(ac, D)) {
        int64_t s = isqrt64(D);
        r = s - mod64(s + f.b, m);
    } else {
        r = mod64(-f.b, m);
        if (r > ac) r -= m;
    }
    return QuadForm{f.c, r, (r * r - D) / (4 * f.c)};
}

int64_t gcd3(int64_t a, int64_t b, int64_t c) { return gcd64(gcd64(std::abs(a), std::abs(b)), std::abs(c)); }

std::vector<QuadForm> cycle_of(const QuadForm& f)
{
    std::vector<QuadForm> cyc{f};
    for (QuadForm g = rho(f); !(g == f); g = rho(g)) cyc.push_back(g);
    return cyc;
}

} // namespace

std::string QuadForm::to_string() const
{
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

bool is_discriminant(int64_t D)
{
    if (mod64(D, 4) > 1) return false;
    if (D >= 0) {
        int64_t s = isqrt64(D);
        if (s * s == D) return false;
    }
    return true;
}

bool is_fundamental_discriminant(int64_t D)
{
    if (!is_discriminant(D)) return false;
    if (mod64(D, 4) == 1) return is_squarefree(std::abs(D));
    int64_t m = D / 4;
    return (mod64(m, 4) == 2 || mod64(m, 4) == 3) && is_squarefree(std::abs(m));
}

QuadForm compose(const QuadForm& f, const QuadForm& g)
{
    int64_t D = f.discriminant();
    if (g.discriminant() != D) throw std::invalid_argument("compose: discriminants differ");
    int64_t s = (f.b + g.b) / 2;
    int64_t x, y, z, w;
    int64_t g1 = xgcd64(f.a, g.a, x, y);
    int64_t e = xgcd64(g1, s, z, w);
    if (e < 0) {
        e = -e;
        z = -z;
        w = -w;
    }
    int64_t u = z * x, v = z * y;
    int64_t A = f.a / e * (g.a / e);
    __int128 num = static_cast<__int128>(u) * f.a * g.b + static_cast<__int128>(v) * g.a * f.b +
                   static_cast<__int128>(w) * ((f.b * g.b + D) / 2);
    int64_t B = static_cast<int64_t>(num / e);
    int64_t m = 2 * std::abs(A);
    B = mod64(B, m);
    return QuadForm{A, B, (B * B - D) / (4 * A)};
}

bool is_reduced(const QuadForm& f)
{
    int64_t D = f.discriminant();
    if (D < 0) {
        if (f.a <= 0 || std::abs(f.b) > f.a || f.a > f.c) return false;
        if ((std::abs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
        return true;
    }
    int64_t a = std::abs(f.a);
    return f.b > 0 && below_root(f.b, D) && above_root(2 * a + f.b, D) && below_root(2 * a - f.b, D);
}

QuadForm reduce_form(const QuadForm& f)
{
    int64_t D = f.discriminant();
    if (D < 0) {
        if (f.a < 0) throw std::invalid_argument("reduce_form: negative definite form");
        QuadForm g = normalize_definite(f);
        while (g.a > g.c || (g.a == g.c && g.b < 0)) g = normalize_definite(QuadForm{g.c, -g.b, g.a});
        return g;
    }
    QuadForm g = f;
    for (int guard = 0; !is_reduced(g); ++guard) {
        if (guard > 100000) throw std::logic_error("reduce_form: no reduced form reached");
        g = rho(g);
    }
    return g;
}

int fundamental_unit_norm(int64_t D)
{
    if (D <= 0 || !is_discriminant(D)) throw std::invalid_argument("fundamental_unit_norm: need a positive discriminant");
    // complete quotients (P + sqrt D)/Q of (b + sqrt D)/2
    int64_t s = isqrt64(D);
    int64_t P = D % 2, Q = 2;
    auto step = [&]() {
        int64_t a = floor_div(P + s, Q);
        P = a * Q - P;
        Q = (D - P * P) / Q;
    };
    step();
    int64_t P1 = P, Q1 = Q;
    int64_t period = 0;
    do {
        step();
        ++period;
    } while (P != P1 || Q != Q1);
    return period % 2 ? -1 : 1;
}

int64_t level_discriminant(int64_t N)
{
    int64_t D = N % 4 == 1 ? N : -N;
    return is_discriminant(D) ? D : 0;
}

size_t ClassGroupReport::index_of(const QuadForm& f) const
{
    QuadForm g = reduce_form(f);
    if (D > 0) g = [&] {
        auto cyc = cycle_of(g);
        return *std::min_element(cyc.begin(), cyc.end());
    }();
    auto it = std::lower_bound(forms.begin(), forms.end(), g);
    if (it == forms.end() || !(*it == g)) throw std::logic_error("class group: form not found");
    return static_cast<size_t>(it - forms.begin());
}

size_t ClassGroupReport::order_of(size_t i) const
{
    size_t n = 1;
    for (size_t x = i; x != identity; x = table[x][i]) ++n;
    return n;
}

size_t ClassGroupReport::power(size_t i, int64_t e) const
{
    int64_t n = static_cast<int64_t>(order_of(i));
    e = mod64(e, n);
    size_t x = identity;
    for (int64_t k = 0; k < e; ++k) x = table[x][i];
    return x;
}

size_t ClassGroupReport::prime_class(int64_t l) const
{
    if (kronecker(D, l) != 1) throw std::invalid_argument("prime_class: prime not split");
    for (int64_t b = 0; b < 2 * l; ++b)
        if (mod64(b * b - D, 4 * l) == 0) return index_of(QuadForm{l, b, (b * b - D) / (4 * l)});
    throw std::logic_error("prime_class: no square root of D");
}

namespace {

// invariant factors of G / H from counts of elements killed by prime powers
std::vector<size_t> invariant_factors(const ClassGroupReport& G, const std::vector<bool>& inH, size_t hsize, size_t h)
{
    size_t n = G.forms.size();
    std::map<int64_t, std::vector<int>> exps; // prime -> exponents, largest first
    for (auto [q, e] : factor64(static_cast<int64_t>(h))) {
        std::vector<int> r; // r[k-1] = #{i : e_i >= k}
        int64_t prev_log = 0, qk = 1;
        for (int k = 1; k <= e; ++k) {
            qk *= q;
            size_t cnt = 0;
            for (size_t g = 0; g < n; ++g)
                if (inH[G.power(g, qk)]) ++cnt;
            cnt /= hsize;
            int64_t lg = 0;
            for (size_t c = cnt; c > 1; c /= static_cast<size_t>(q)) ++lg;
            r.push_back(static_cast<int>(lg - prev_log));
            prev_log = lg;
        }
        std::vector<int> ex(static_cast<size_t>(r.empty() ? 0 : r[0]), 0);
        for (size_t k = 0; k < r.size(); ++k)
            for (int i = 0; i < r[k]; ++i) ex[static_cast<size_t>(i)] = static_cast<int>(k) + 1;
        exps[q] = ex;
    }
    size_t len = 0;
    for (auto& [q, ex] : exps) len = std::max(len, ex.size());
    std::vector<size_t> out(len, 1);
    for (auto& [q, ex] : exps)
        for (size_t i = 0; i < ex.size(); ++i)
            for (int j = 0; j < ex[i]; ++j) out[i] *= static_cast<size_t>(q);
    std::reverse(out.begin(), out.end());
    return out;
}

} // namespace

ClassGroupReport class_group(int64_t D)
{
    if (!is_discriminant(D)) throw std::invalid_argument("class_group: " + std::to_string(D) + " is not a discriminant");
    ClassGroupReport G;
    G.D = D;
    int64_t b0 = mod64(D, 2);
    QuadForm principal{1, b0, (b0 - D) / 4};
    std::map<QuadForm, size_t> where; // every reduced form -> class
    if (D < 0) {
        for (int64_t a = 1; 3 * a * a <= -D; ++a)
            for (int64_t b = -a + 1; b <= a; ++b) {
                if (mod64(b * b - D, 4 * a) != 0) continue;
                int64_t c = (b * b - D) / (4 * a);
                QuadForm f{a, b, c};
                if (c < a || !is_reduced(f) || gcd3(a, b, c) != 1) continue;
                G.forms.push_back(f);
            }
        std::sort(G.forms.begin(), G.forms.end());
    } else {
        std::set<QuadForm> seen;
        int64_t s = isqrt64(D);
        for (int64_t b = 1; b <= s; ++b) {
            if (mod64(b - D, 2) != 0) continue;
            int64_t ac = (D - b * b) / 4; // = -a c
            for (int64_t d : divisors(ac))
                for (int64_t a : {d, -d}) {
                    QuadForm f{a, b, -ac / a};
                    if (seen.count(f) || !is_reduced(f) || gcd3(f.a, f.b, f.c) != 1) continue;
                    auto cyc = cycle_of(f);
                    for (auto& g : cyc) seen.insert(g);
                    G.forms.push_back(*std::min_element(cyc.begin(), cyc.end()));
                }
        }
        std::sort(G.forms.begin(), G.forms.end());
    }
    size_t n = G.forms.size();
    G.narrow_h = n;
    G.identity = G.index_of(principal);
    G.table.assign(n, std::vector<size_t>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) G.table[i][j] = G.table[j][i] = G.index_of(compose(G.forms[i], G.forms[j]));

    std::vector<bool> inH(n, false);
    inH[G.identity] = true;
    size_t hsize = 1;
    if (D > 0) {
        G.unit_norm = fundamental_unit_norm(D);
        size_t J = G.index_of(QuadForm{-1, b0, (D - b0) / 4});
        if ((J == G.identity) != (G.unit_norm == -1)) throw std::logic_error("class group: unit norm and narrow classes disagree");
        if (J != G.identity) {
            inH[J] = true;
            hsize = 2;
        }
    }
    G.h = n / hsize;
    G.u = G.h;
    while (G.u % 2 == 0) G.u /= 2;
    G.structure = invariant_factors(G, inH, hsize, G.h);
    return G;
}

namespace {

// homomorphisms of the class group into Z/u, as values on every element
std::vector<std::vector<int64_t>> odd_characters(const ClassGroupReport& G, std::vector<size_t>& gens)
{
    size_t n = G.forms.size();
    int64_t u = static_cast<int64_t>(G.u);
    std::vector<bool> in(n, false);
    in[G.identity] = true;
    auto close = [&]() {
        bool grew = true;
        while (grew) {
            grew = false;
            for (size_t x = 0; x < n; ++x)
                if (in[x])
                    for (size_t g : gens)
                        if (!in[G.table[x][g]]) in[G.table[x][g]] = grew = true;
        }
    };
    gens.clear();
    for (size_t x = 0; x < n; ++x)
        if (!in[x]) {
            gens.push_back(x);
            close();
        }
    std::vector<std::vector<int64_t>> choices;
    for (size_t g : gens) {
        std::vector<int64_t> c;
        int64_t o = static_cast<int64_t>(G.order_of(g));
        for (int64_t v = 0; v < u; ++v)
            if (o * v % u == 0) c.push_back(v);
        choices.push_back(c);
    }
    std::vector<std::vector<int64_t>> out;
    std::vector<size_t> idx(gens.size(), 0);
    for (;;) {
        std::vector<int64_t> val(n, -1);
        val[G.identity] = 0;
        std::vector<size_t> queue{G.identity};
        bool ok = true;
        for (size_t qi = 0; qi < queue.size() && ok; ++qi) {
            size_t x = queue[qi];
            for (size_t j = 0; j < gens.size() && ok; ++j) {
                size_t y = G.table[x][gens[j]];
                int64_t v = (val[x] + choices[j][idx[j]]) % u;
                if (val[y] < 0) {
                    val[y] = v;
                    queue.push_back(y);
                } else if (val[y] != v) {
                    ok = false;
                }
            }
        }
        if (ok) out.push_back(val);
        size_t j = 0;
        while (j < gens.size() && ++idx[j] == choices[j].size()) idx[j++] = 0;
        if (j == gens.size()) break;
    }
    if (out.size() != G.u) throw std::logic_error("class group: wrong number of odd characters");
    return out;
}

} // namespace

DihedralPredictions dihedral_predictions(int64_t N, uint64_t p, int64_t max_prime)
{
    DihedralPredictions out;
    out.N = N;
    out.p = p;
    int64_t D = level_discriminant(N);
    if (D == 0) throw std::invalid_argument("dihedral_predictions: no quadratic discriminant for this level");
    if (gcd64(N, static_cast<int64_t>(p)) != 1) throw std::invalid_argument("dihedral_predictions: p divides the level");
    out.group = class_group(D);
    const ClassGroupReport& G = out.group;
    if (D > 0 && is_prime64(static_cast<uint64_t>(N)) && G.unit_norm != -1)
        throw std::logic_error("dihedral_predictions: fundamental unit of norm +1 at a prime level");
    int64_t u = static_cast<int64_t>(G.u);
    if (u == 1) return out;
    std::vector<size_t> gens;
    auto chars = odd_characters(G, gens);

    std::vector<int64_t> primes;
    for (int64_t l : primes_up_to(max_prime))
        if (D % l != 0 && static_cast<uint64_t>(l) != p) primes.push_back(l);
    std::vector<int> kron;
    std::vector<size_t> cls;
    for (int64_t l : primes) {
        kron.push_back(kronecker(D, l));
        cls.push_back(kron.back() == 1 ? G.prime_class(l) : 0);
    }

    std::vector<size_t> orbit_rep; // index of the first system of each orbit
    for (auto& chi : chars) {
        std::vector<int64_t> neg(chi.size());
        for (size_t i = 0; i < chi.size(); ++i) neg[i] = (u - chi[i]) % u;
        if (chi == neg || neg < chi) continue; // trivial, or the inverse is taken
        int64_t g = u;
        for (auto x : chi) g = std::gcd(g, x);
        int64_t o = u / g, o1 = o;
        while (o1 % static_cast<int64_t>(p) == 0) o1 /= static_cast<int64_t>(p);
        int f = o1 == 1 ? 1 : static_cast<int>(multiplicative_order(static_cast<int64_t>(p % static_cast<uint64_t>(o1)), o1));
        int d = f;
        if (f % 2 == 0 && powmod64(p, static_cast<uint64_t>(f / 2), static_cast<uint64_t>(o1)) == static_cast<uint64_t>(o1 - 1))
            d = f / 2;
        FieldPtr Kf = FiniteField::make(p, f), Kd = FiniteField::make(p, d);
        FieldEmbedding emb(Kd, Kf);
        FiniteField::Elt zeta = Kf->pow(Kf->primitive_element(), (Kf->order() - 1) / static_cast<uint64_t>(o1));
        DihedralPrediction pr;
        pr.order = o;
        for (size_t gi : gens) pr.chi.push_back(chi[gi]);
        pr.system.field = Kd;
        pr.system.primes = primes;
        pr.system.tag = "dihedral";
        for (size_t i = 0; i < primes.size(); ++i) {
            if (kron[i] != 1) {
                pr.system.a.push_back(0);
                continue;
            }
            FiniteField::Elt x = Kf->pow(zeta, static_cast<uint64_t>(chi[cls[i]] / g));
            pr.system.a.push_back(descend(emb, Kf->add(x, Kf->inv(x))));
        }
        size_t orbit = orbit_rep.size();
        for (size_t j = 0; j < orbit_rep.size() && orbit == orbit_rep.size(); ++j)
            if (systems_match(out.systems[orbit_rep[j]].system, pr.system)) orbit = j;
        if (orbit == orbit_rep.size()) orbit_rep.push_back(out.systems.size());
        pr.orbit = pr.system.orbit = orbit;
        out.systems.push_back(std::move(pr));
    }
    out.num_orbits = orbit_rep.size();
    std::vector<size_t> sizes(out.num_orbits, 0);
    for (auto& pr : out.systems) ++sizes[pr.orbit];
    for (auto& pr : out.systems) {
        pr.orbit_size = pr.system.orbit_size = sizes[pr.orbit];
        bool coprime = pr.order % static_cast<int64_t>(p) != 0;
        if (coprime && pr.orbit_size != static_cast<size_t>(pr.system.degree()))
            throw std::logic_error("dihedral_predictions: orbit size differs from the trace degree");
    }
    if (out.systems.size() != static_cast<size_t>((u - 1) / 2)) throw std::logic_error("dihedral_predictions: wrong number of systems");
    return out;
}

std::string to_string(ImageTag t)
{
    switch (t) {
    case ImageTag::dihedral: return "dihedral";
    case ImageTag::big_image_candidate: return "big-image candidate";
    case ImageTag::eisenstein: return "Eisenstein";
    default: return "unexplained";
    }
}

bool Classification::complete() const
{
    return std::all_of(prediction_matched.begin(), prediction_matched.end(), [](bool b) { return b; });
}

size_t Classification::count(ImageTag t) const
{
    return static_cast<size_t>(std::count_if(orbits.begin(), orbits.end(), [&](auto& o) { return o.tag == t; }));
}

std::vector<int> Classification::big_image_degrees() const
{
    std::vector<int> out;
    for (auto& o : orbits)
        if (o.tag == ImageTag::big_image_candidate) out.push_back(o.trace_field_degree);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

EigenSystem restricted(const EigenSystem& s, int64_t upto, int64_t pN)
{
    EigenSystem r = s;
    r.primes.clear();
    r.a.clear();
    for (size_t i = 0; i < s.primes.size(); ++i)
        if (s.primes[i] <= upto && pN % s.primes[i] != 0) {
            r.primes.push_back(s.primes[i]);
            r.a.push_back(s.a[i]);
        }
    return r;
}

int generated_degree(const EigenSystem& s)
{
    const FiniteField& K = *s.field;
    int k = K.degree();
    for (int j = 1; j < k; ++j) {
        if (k % j) continue;
        bool all = true;
        for (auto a : s.a) all = all && K.frobenius(a, j) == a;
        if (all) return j;
    }
    return k;
}

// a_l = 0 at every compared prime inert in some quadratic field unramified outside pN
bool dihedral_zero_pattern(const EigenSystem& s, int64_t pN)
{
    for (int64_t m : divisors(8 * pN))
        for (int64_t d : {m, -m}) {
            if (d == 1 || !is_fundamental_discriminant(d)) continue;
            bool ok = true;
            for (size_t i = 0; i < s.primes.size() && ok; ++i)
                if (kronecker(d, s.primes[i]) == -1 && s.a[i] != 0) ok = false;
            if (ok) return true;
        }
    return false;
}

} // namespace

Classification classify(const WeightOneModule& W, const DihedralPredictions& pred)
{
    Classification out;
    if (pred.p != W.p() || pred.N != W.level()) throw std::invalid_argument("classify: predictions for another level or prime");
    out.compared_up_to = std::min<int64_t>(W.cutoff(), 200);
    int64_t pN = W.level() * static_cast<int64_t>(W.p());
    out.prediction_matched.assign(pred.systems.size(), false);
    std::set<size_t> seen;
    for (auto& s : W.eigensystems()) {
        if (!seen.insert(s.orbit).second) continue;
        EigenSystem r = restricted(s, out.compared_up_to, pN);
        ClassifiedOrbit c;
        c.orbit = s.orbit;
        c.residue_degree = s.degree();
        c.size = s.orbit_size;
        c.trace_field_degree = generated_degree(r);
        for (size_t j = 0; j < pred.systems.size(); ++j)
            if (systems_match(r, restricted(pred.systems[j].system, out.compared_up_to, pN))) {
                out.prediction_matched[j] = true;
                c.tag = ImageTag::dihedral;
                c.character_order = pred.systems[j].order;
            }
        if (c.tag == ImageTag::dihedral) {
            c.label = "dihedral (order " + std::to_string(c.character_order) + ")";
        } else if (is_eisenstein(r, W.level(), W.p(), static_cast<int>(W.p()))) {
            c.tag = ImageTag::eisenstein;
            c.label = "Eisenstein";
        } else if (W.p() == 2 && c.trace_field_degree >= 2 && !dihedral_zero_pattern(r, pN)) {
            c.tag = ImageTag::big_image_candidate;
            int k = c.trace_field_degree;
            c.label = k == 2 ? "A5 = SL2(F4) candidate" : "SL2(F" + std::to_string(1 << k) + ") candidate";
        } else {
            c.label = "unexplained";
        }
        out.orbits.push_back(std::move(c));
    }
    return out;
}

} // namespace katz1

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "katz1/arith.hpp"
#include "katz1/hecke_algebra.hpp"

namespace katz1 {

namespace {

const char* kMagic = "KATZ1-CACHE v1";

uint64_t fnv1a(const std::string& s)
{
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(uint64_t x)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

// Body followed by its checksum line.
std::string seal(const std::string& body) { return body + "checksum " + hex64(fnv1a(body)) + "\n"; }

std::string unseal(const std::string& text)
{
    size_t pos = text.rfind("checksum ");
    if (pos == std::string::npos) throw std::runtime_error("cache: missing checksum");
    std::string body = text.substr(0, pos);
    std::istringstream tail(text.substr(pos + 9));
    std::string h;
    tail >> h;
    if (h != hex64(fnv1a(body))) throw std::runtime_error("cache: checksum mismatch");
    if (body.compare(0, std::char_traits<char>::length(kMagic), kMagic) != 0) throw std::runtime_error("cache: version mismatch");
    return body;
}

void write_row(std::ostream& os, const FqMatrix& M, size_t i, bool compact)
{
    for (size_t j = 0; j < M.cols(); ++j) {
        if (compact) {
            os << static_cast<char>('0' + M.get(i, j));
        } else {
            if (j) os << ' ';
            os << M.get(i, j);
        }
    }
    os << '\n';
}

void read_matrix(std::istream& is, FqMatrix& M, bool compact)
{
    for (size_t i = 0; i < M.rows(); ++i) {
        if (compact) {
            std::string line;
            is >> line;
            if (M.cols() > 0 && line.size() != M.cols()) throw std::runtime_error("cache: bad row");
            for (size_t j = 0; j < M.cols(); ++j) {
                uint64_t v = static_cast<uint64_t>(line[j] - '0');
                if (v >= M.field()->order()) throw std::runtime_error("cache: bad entry");
                M.set(i, j, v);
            }
        } else {
            for (size_t j = 0; j < M.cols(); ++j) {
                uint64_t v;
                if (!(is >> v) || v >= M.field()->order()) throw std::runtime_error("cache: bad entry");
                M.set(i, j, v);
            }
        }
    }
}

void expect(std::istream& is, const std::string& word)
{
    std::string w;
    if (!(is >> w) || w != word) throw std::runtime_error("cache: expected '" + word + "'");
}

template <class T>
T read_field(std::istream& is, const std::string& name)
{
    expect(is, name);
    T v;
    if (!(is >> v)) throw std::runtime_error("cache: bad value for " + name);
    return v;
}

std::string sanitize(const std::string& s)
{
    std::string o;
    for (char c : s) o += (std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
    return o;
}

void write_atomic(const std::string& path, const std::string& text)
{
    std::filesystem::path target(path);
    std::filesystem::create_directories(target.parent_path());
    std::ostringstream tmpname;
    tmpname << path << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id());
    {
        std::ofstream os(tmpname.str(), std::ios::binary);
        if (!os) throw std::runtime_error("cache: cannot write " + tmpname.str());
        os << text;
        if (!os) throw std::runtime_error("cache: write failed");
    }
    std::filesystem::rename(tmpname.str(), target);
}

bool read_file(const std::string& path, std::string& out)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) return false;
    std::ostringstream ss;
    ss << is.rdbuf();
    out = ss.str();
    return true;
}

} // namespace

std::string ModPHeckeAlgebra::to_cache_text(const std::string& key) const
{
    std::ostringstream os;
    bool compact = F_->order() <= 10;
    os << kMagic << "\nkind modp\nkey " << key << "\nlevel " << N_ << "\nweight " << k_ << "\ncharacter " << chi_id_ << "\nbound "
       << bound_ << "\np " << p_ << "\nprime_choice " << prime_choice_ << "\nmodulus " << F_->modulus().size();
    for (auto c : F_->modulus()) os << ' ' << c;
    os << "\nrank " << rank_ << "\ndim " << dim() << "\neps";
    for (auto e : eps_table_) os << ' ' << e;
    os << "\ngens";
    for (auto g : gens_) os << ' ' << g;
    os << "\ntable\n";
    for (size_t i = 0; i < table_.rows(); ++i) write_row(os, table_, i, compact);
    os << "primes " << mult_.size() << '\n';
    for (auto& [l, M] : mult_) {
        os << "mult " << l << '\n';
        for (size_t i = 0; i < M.rows(); ++i) write_row(os, M, i, compact);
    }
    os << "end\n";
    return seal(os.str());
}

std::shared_ptr<const ModPHeckeAlgebra> ModPHeckeAlgebra::from_cache_text(const std::string& text, const std::string& key)
{
    std::istringstream is(unseal(text));
    std::string line;
    std::getline(is, line);
    expect(is, "kind");
    expect(is, "modp");
    if (read_field<std::string>(is, "key") != key) throw std::runtime_error("cache: key mismatch");
    std::shared_ptr<ModPHeckeAlgebra> A(new ModPHeckeAlgebra());
    A->N_ = read_field<int64_t>(is, "level");
    A->k_ = read_field<int>(is, "weight");
    A->chi_id_ = read_field<std::string>(is, "character");
    A->bound_ = read_field<int64_t>(is, "bound");
    A->p_ = read_field<uint64_t>(is, "p");
    A->prime_choice_ = read_field<int>(is, "prime_choice");
    size_t mlen = read_field<size_t>(is, "modulus");
    std::vector<uint64_t> mod(mlen);
    for (auto& c : mod)
        if (!(is >> c)) throw std::runtime_error("cache: bad modulus");
    if (A->N_ < 1 || A->bound_ < 1 || !is_prime64(A->p_) || mlen < 2) throw std::runtime_error("cache: bad header");
    A->F_ = FiniteField::with_modulus(A->p_, mod);
    A->rank_ = read_field<size_t>(is, "rank");
    size_t d = read_field<size_t>(is, "dim");
    expect(is, "eps");
    A->eps_table_.resize(static_cast<size_t>(A->N_));
    for (auto& e : A->eps_table_)
        if (!(is >> e)) throw std::runtime_error("cache: bad eps");
    expect(is, "gens");
    A->gens_.resize(d);
    for (auto& g : A->gens_)
        if (!(is >> g)) throw std::runtime_error("cache: bad gens");
    expect(is, "table");
    bool compact = A->F_->order() <= 10;
    A->table_ = FqMatrix(A->F_, d, static_cast<size_t>(A->bound_));
    read_matrix(is, A->table_, compact);
    size_t np = read_field<size_t>(is, "primes");
    for (size_t i = 0; i < np; ++i) {
        int64_t l = read_field<int64_t>(is, "mult");
        FqMatrix M(A->F_, d, d);
        read_matrix(is, M, compact);
        A->mult_.emplace(l, std::move(M));
    }
    expect(is, "end");
    if (np != primes_up_to(A->bound_).size()) throw std::runtime_error("cache: incomplete prime list");

    // spot checks
    if (d > 0) {
        if (A->identity() != [&] { FqVector e(d, 0); e[0] = 1; return e; }()) throw std::runtime_error("cache: t_1 is not the first basis element");
        auto primes = primes_up_to(A->bound_);
        std::mt19937_64 rng(0x636163686531ULL);
        std::uniform_int_distribution<size_t> pick(0, primes.size() - 1);
        for (int t = 0; t < 3; ++t) {
            int64_t a = primes[pick(rng)], b = primes[pick(rng)];
            const FqMatrix& Ma = A->mult_prime(a);
            const FqMatrix& Mb = A->mult_prime(b);
            if (Ma * Mb != Mb * Ma) throw std::runtime_error("cache: commutation check failed");
            if (a != b && a * b <= A->bound_ && Ma * A->express(b) != A->express(a * b))
                throw std::runtime_error("cache: multiplicativity check failed");
        }
    }
    return A;
}

std::string IntegralHeckeAlgebra::to_cache_text() const
{
    std::ostringstream os;
    os << kMagic << "\nkind integral\nlevel " << N_ << "\nweight " << k_ << "\ncharacter " << chi_id_ << "\nbound " << bound_
       << "\nsize " << n_ << "\ndegree " << deg_ << "\nrank " << zrank_ << "\npivots";
    for (auto p : piv_) os << ' ' << p;
    os << "\nhnf\n";
    for (size_t i = 0; i < H_.rows(); ++i) {
        for (size_t j = 0; j < H_.cols(); ++j) os << (j ? " " : "") << H_.at(i, j);
        os << '\n';
    }
    os << "zeta\n";
    for (size_t i = 0; i < Z_.rows(); ++i) {
        for (size_t j = 0; j < Z_.cols(); ++j) os << (j ? " " : "") << Z_.at(i, j);
        os << '\n';
    }
    os << "eps";
    for (auto e : eps_exp_) os << ' ' << e;
    os << "\ntable " << table_.size() << '\n';
    for (auto& [m, c] : table_) {
        os << m;
        for (auto& x : c) os << ' ' << x;
        os << '\n';
    }
    os << "end\n";
    return seal(os.str());
}

IntegralHeckeAlgebra IntegralHeckeAlgebra::from_cache_text(const std::string& text)
{
    std::istringstream is(unseal(text));
    std::string line;
    std::getline(is, line);
    expect(is, "kind");
    expect(is, "integral");
    IntegralHeckeAlgebra T;
    T.N_ = read_field<int64_t>(is, "level");
    T.k_ = read_field<int>(is, "weight");
    T.chi_id_ = read_field<std::string>(is, "character");
    T.bound_ = read_field<int64_t>(is, "bound");
    T.n_ = read_field<size_t>(is, "size");
    T.deg_ = read_field<size_t>(is, "degree");
    T.zrank_ = read_field<size_t>(is, "rank");
    if (T.N_ < 1 || T.bound_ < 1 || T.deg_ < 1 || T.n_ > 4096) throw std::runtime_error("cache: bad header");
    expect(is, "pivots");
    T.piv_.resize(T.zrank_);
    for (auto& p : T.piv_)
        if (!(is >> p)) throw std::runtime_error("cache: bad pivots");
    expect(is, "hnf");
    T.H_ = IntMatrix(T.zrank_, T.n_ * T.n_);
    for (size_t i = 0; i < T.zrank_; ++i)
        for (size_t j = 0; j < T.n_ * T.n_; ++j)
            if (!(is >> T.H_.at(i, j))) throw std::runtime_error("cache: bad hnf");
    expect(is, "zeta");
    T.Z_ = IntMatrix(T.n_, T.n_);
    for (size_t i = 0; i < T.n_; ++i)
        for (size_t j = 0; j < T.n_; ++j)
            if (!(is >> T.Z_.at(i, j))) throw std::runtime_error("cache: bad zeta");
    expect(is, "eps");
    T.eps_exp_.resize(static_cast<size_t>(T.N_));
    for (auto& e : T.eps_exp_)
        if (!(is >> e)) throw std::runtime_error("cache: bad eps");
    size_t nt = read_field<size_t>(is, "table");
    for (size_t r = 0; r < nt; ++r) {
        int64_t m;
        if (!(is >> m)) throw std::runtime_error("cache: bad table");
        std::vector<BigInt> c(T.zrank_);
        for (auto& x : c)
            if (!(is >> x)) throw std::runtime_error("cache: bad table");
        T.table_[m] = std::move(c);
    }
    expect(is, "end");
    if (!T.closed_under_products(3, 0x636163686532ULL)) throw std::runtime_error("cache: product check failed");
    if (T.bound_ >= 3) {
        IntMatrix A = T.element(T.express(2)), B = T.element(T.express(3));
        if (A * B != B * A) throw std::runtime_error("cache: commutation check failed");
    }
    return T;
}

std::string HeckeCache::key(int64_t N, int k, const std::string& chi_id, int64_t bound, uint64_t p, int prime_choice)
{
    std::ostringstream os;
    os << "N" << N << "_k" << k << "_c" << sanitize(chi_id) << "_B" << bound << "_p" << p << "_q" << prime_choice;
    return os.str();
}

std::string HeckeCache::path_for(const std::string& key) const { return (std::filesystem::path(dir_) / (key + ".cache")).string(); }

void HeckeCache::store(const ModPHeckeAlgebra& A) const
{
    std::string k = key(A.level(), A.weight(), A.character_id(), A.bound(), A.p(), A.prime_choice());
    write_atomic(path_for(k), A.to_cache_text(k));
}

std::shared_ptr<const ModPHeckeAlgebra> HeckeCache::load(int64_t N, int k, const std::string& chi_id, int64_t bound, uint64_t p,
                                                         int prime_choice) const
{
    std::string kk = key(N, k, chi_id, bound, p, prime_choice);
    std::string text;
    if (!read_file(path_for(kk), text)) return nullptr;
    try {
        return ModPHeckeAlgebra::from_cache_text(text, kk);
    } catch (const std::exception&) {
        return nullptr;
    }
}

void HeckeCache::store_integral(const IntegralHeckeAlgebra& T) const
{
    std::string k = key(T.level(), T.weight(), T.character_id(), T.bound(), 0, 0);
    write_atomic(path_for(k), T.to_cache_text());
}

bool HeckeCache::load_integral(int64_t N, int k, const std::string& chi_id, int64_t bound, IntegralHeckeAlgebra& out) const
{
    std::string text;
    if (!read_file(path_for(key(N, k, chi_id, bound, 0, 0)), text)) return false;
    try {
        IntegralHeckeAlgebra T = IntegralHeckeAlgebra::from_cache_text(text);
        if (T.level() != N || T.weight() != k || T.character_id() != chi_id || T.bound() != bound) return false;
        out = std::move(T);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace katz1

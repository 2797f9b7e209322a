#pragma once

// Noncommutative polynomials in the Laurent coefficients l_i^j[a] of L(u), the
// truncated presentation of the braided Yangian, and bounded ideal membership.

#include "braidcheck/braiding.hpp"
#include "braidcheck/modp.hpp"
#include "braidcheck/report.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

namespace braidcheck {

using Gen = std::uint16_t;
using Word = std::vector<Gen>;

/// Degree-lexicographic order on words (generator ids compared numerically).
struct DegLex {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept {
        std::size_t h = w.size();
        for (Gen g : w) h = h * 1000003u ^ g;
        return h;
    }
};

/// l_i^j[a] (1-based) -> id; ids are ordered lexicographically by (a, i, j).
inline Gen generator_id(std::size_t N, std::size_t a, std::size_t i, std::size_t j) {
    if (a < 1 || i < 1 || j < 1 || i > N || j > N) throw std::out_of_range("generator index out of range");
    std::size_t id = ((a - 1) * N + (i - 1)) * N + (j - 1);
    if (id > 0xFFFF) throw std::out_of_range("too many generators");
    return static_cast<Gen>(id);
}

struct GenIndex {
    std::size_t block, i, j;  // 1-based
};

inline GenIndex decode_generator(Gen g, std::size_t N) {
    return {g / (N * N) + 1, (g / N) % N + 1, g % N + 1};
}

inline Word concat(const Word& a, const Word& b) {
    Word w;
    w.reserve(a.size() + b.size());
    w.insert(w.end(), a.begin(), a.end());
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

template <class K>
class NCPoly {
public:
    using Terms = std::map<Word, K, DegLex>;

    NCPoly() = default;
    explicit NCPoly(const K& c) {
        if (!braidcheck::is_zero(c)) t_.emplace(Word{}, c);
    }
    explicit NCPoly(int c) : NCPoly(K(c)) {}

    static NCPoly generator(Gen g, const K& c = K(1)) { return monomial(Word{g}, c); }
    static NCPoly monomial(Word w, const K& c = K(1)) {
        NCPoly p;
        if (!braidcheck::is_zero(c)) p.t_.emplace(std::move(w), c);
        return p;
    }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }
    /// -1 for the zero polynomial.
    int degree() const { return t_.empty() ? -1 : static_cast<int>(t_.rbegin()->first.size()); }
    /// Largest monomial in deglex order.
    const std::pair<const Word, K>& leading() const { return *t_.rbegin(); }

    void add_term(const Word& w, const K& c) {
        if (braidcheck::is_zero(c)) return;
        auto [it, fresh] = t_.try_emplace(w, c);
        if (!fresh) {
            it->second = it->second + c;
            if (braidcheck::is_zero(it->second)) t_.erase(it);
        }
    }
    K coeff(const Word& w) const {
        auto it = t_.find(w);
        return it == t_.end() ? K(0) : it->second;
    }

    NCPoly& operator+=(const NCPoly& o) {
        for (const auto& [w, c] : o.t_) add_term(w, c);
        return *this;
    }
    NCPoly& operator-=(const NCPoly& o) {
        for (const auto& [w, c] : o.t_) add_term(w, -c);
        return *this;
    }
    NCPoly operator-() const {
        NCPoly r = *this;
        for (auto& [w, c] : r.t_) c = -c;
        return r;
    }
    friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
    friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
    friend NCPoly operator*(const NCPoly& a, const NCPoly& b) {
        NCPoly r;
        for (const auto& [wa, ca] : a.t_)
            for (const auto& [wb, cb] : b.t_) r.add_term(concat(wa, wb), ca * cb);
        return r;
    }
    friend NCPoly operator*(const K& s, const NCPoly& p) {
        NCPoly r;
        if (braidcheck::is_zero(s)) return r;
        for (const auto& [w, c] : p.t_) r.add_term(w, s * c);
        return r;
    }
    friend NCPoly operator*(const NCPoly& p, const K& s) { return s * p; }
    friend bool operator==(const NCPoly& a, const NCPoly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const NCPoly& a, const NCPoly& b) { return !(a == b); }

    template <class F>
    auto map_coeffs(F&& f) const {
        using R = std::decay_t<decltype(f(std::declval<const K&>()))>;
        NCPoly<R> out;
        for (const auto& [w, c] : t_) out.add_term(w, f(c));
        return out;
    }

private:
    Terms t_;
};

template <class K>
bool is_zero(const NCPoly<K>& p) {
    return p.is_zero();
}

using NCP = NCPoly<Scalar>;
using PolyOp = Matrix<NCP>;

template <class K>
NCPoly<K> commutator(const NCPoly<K>& a, const NCPoly<K>& b) {
    return a * b - b * a;
}

// ---------------------------------------------------------------------------
// Printing

inline std::string generator_name(Gen g, std::size_t N, const std::string& symbol = "l") {
    auto [a, i, j] = decode_generator(g, N);
    return symbol + "_" + std::to_string(i) + "^" + std::to_string(j) + "[" + std::to_string(a) + "]";
}

inline std::string word_name(const Word& w, std::size_t N, const std::string& symbol = "l") {
    if (w.empty()) return "1";
    std::string s;
    for (std::size_t k = 0; k < w.size(); ++k) s += (k ? "*" : "") + generator_name(w[k], N, symbol);
    return s;
}

inline std::string to_string(const NCP& p, std::size_t N, const std::string& symbol = "l") {
    if (p.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        if (!first) s += " + ";
        first = false;
        s += "(" + it->second.to_string() + ")";
        if (!it->first.empty()) s += "*" + word_name(it->first, N, symbol);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Matrix series in u^{-1}

/// L(u) = sum_{a=0..T} slice[a] u^{-a} on V^{(x)n}, entries in NCP.
struct SeriesMatrix {
    std::size_t N = 0;
    std::size_t n = 1;
    int T = 0;
    std::vector<PolyOp> slice;
    std::vector<std::string> ledger;  // truncation notes

    PolyOp at(int a) const {
        if (a < 0 || a > T) return PolyOp(ipow(N, n), ipow(N, n));
        return slice[static_cast<std::size_t>(a)];
    }
};

/// Number of free generators of a generating matrix.
inline std::size_t generator_count(std::size_t N, int T) { return N * N * static_cast<std::size_t>(T); }

/// L(u) = I + sum_a scale * L[a] u^{-a} with L[a] = (l_i^j[a]).
inline SeriesMatrix generating_matrix(std::size_t N, int T, const Scalar& scale = Scalar(1)) {
    if (T < 1) throw std::invalid_argument("truncation order T must be >= 1");
    SeriesMatrix L;
    L.N = N;
    L.n = 1;
    L.T = T;
    L.slice.push_back(PolyOp::identity(N, NCP(1)));
    for (int a = 1; a <= T; ++a) {
        PolyOp s(N, N);
        for (std::size_t i = 1; i <= N; ++i)
            for (std::size_t j = 1; j <= N; ++j)
                s.set(i - 1, j - 1, NCP::generator(generator_id(N, static_cast<std::size_t>(a), i, j), scale));
        L.slice.push_back(std::move(s));
    }
    return L;
}

inline SeriesMatrix embed(const SeriesMatrix& L, std::size_t pos, std::size_t n) {
    SeriesMatrix out = L;
    out.n = n;
    for (auto& s : out.slice) s = embed(s, L.N, pos, n);
    return out;
}

inline SeriesMatrix lmul(const Op& A, const SeriesMatrix& L) {
    SeriesMatrix out = L;
    for (auto& s : out.slice) s = A * s;
    return out;
}
inline SeriesMatrix rmul(const SeriesMatrix& L, const Op& A) {
    SeriesMatrix out = L;
    for (auto& s : out.slice) s = s * A;
    return out;
}

/// Truncated product; the result keeps orders up to min(T_a, T_b).
inline SeriesMatrix operator*(const SeriesMatrix& A, const SeriesMatrix& B) {
    if (A.N != B.N || A.n != B.n) throw std::invalid_argument("series shape mismatch");
    SeriesMatrix out;
    out.N = A.N;
    out.n = A.n;
    out.T = std::min(A.T, B.T);
    out.ledger = A.ledger;
    out.ledger.insert(out.ledger.end(), B.ledger.begin(), B.ledger.end());
    for (int c = 0; c <= out.T; ++c) {
        PolyOp acc(ipow(A.N, A.n), ipow(A.N, A.n));
        for (int a = 0; a <= c; ++a) acc = acc + A.slice[static_cast<std::size_t>(a)] * B.slice[static_cast<std::size_t>(c - a)];
        out.slice.push_back(std::move(acc));
    }
    return out;
}

/// L_{bar k} on V^{(x)n}: L_{bar 1} = L_1, L_{bar j+1} = R_j L_{bar j} R_j^{-1}.
inline SeriesMatrix overline_copy(const SeriesMatrix& L, const Braiding& B, std::size_t k, std::size_t n) {
    if (L.n != 1) throw std::invalid_argument("overline_copy expects a single-space series");
    if (k < 1 || k > n) throw std::out_of_range("overline position out of range");
    SeriesMatrix X = embed(L, 1, n);
    for (std::size_t j = 1; j < k; ++j) X = rmul(lmul(B.at(j, n), X), B.at(j, n, -1));
    return X;
}

/// L(s u): slice a is multiplied by s^{-a}. The trig shift L(q^{-2j} u) is s = q^{-2j}.
inline SeriesMatrix shift_scale(const SeriesMatrix& L, const Scalar& s) {
    SeriesMatrix out = L;
    Scalar f(1), inv = s.inverse();
    for (int a = 1; a <= L.T; ++a) {
        f *= inv;
        out.slice[static_cast<std::size_t>(a)] = scale(f, L.slice[static_cast<std::size_t>(a)]);
    }
    return out;
}
inline SeriesMatrix shift_trig(const SeriesMatrix& L, int j) { return shift_scale(L, Scalar::power(-2 * j)); }

/// L(u - c) re-expanded in u^{-1}: (u-c)^{-a} = sum_b C(a+b-1, b) c^b u^{-a-b}; orders above T dropped.
inline SeriesMatrix shift_rational(const SeriesMatrix& L, const Scalar& c) {
    SeriesMatrix out = L;
    if (c.is_zero()) return out;
    const std::size_t d = ipow(L.N, L.n);
    for (int t = 1; t <= L.T; ++t) {
        PolyOp acc(d, d);
        Rational binom = 1;  // C(t-1, t-a) for a = t, t-1, ..., 1
        Scalar cp(1);
        for (int a = t; a >= 1; --a) {
            acc = acc + scale(Scalar(binom) * cp, L.slice[static_cast<std::size_t>(a)]);
            const int b = t - a + 1;  // next power of c
            binom = binom * (t - 1 - (b - 1)) / b;
            cp *= c;
        }
        out.slice[static_cast<std::size_t>(t)] = std::move(acc);
    }
    out.ledger.push_back("argument shift by " + c.to_string() + " truncated at order " + std::to_string(L.T));
    return out;
}

/// Entrywise R-trace over the trailing block first..n of every slice.
inline SeriesMatrix r_trace(const SeriesMatrix& X, const Op& C, std::size_t first) {
    SeriesMatrix out;
    out.N = X.N;
    out.n = first - 1;
    out.T = X.T;
    out.ledger = X.ledger;
    for (const auto& s : X.slice) out.slice.push_back(r_trace(s, C, X.N, first));
    return out;
}

/// Scalar-valued series with NCP coefficients (e_k, p_k, ...).
struct SymSeries {
    std::string label;
    int T = 0;
    std::vector<NCP> c;  // order 0..T

    const NCP& operator[](int a) const { return c.at(static_cast<std::size_t>(a)); }
};

inline SymSeries r_trace_full(const SeriesMatrix& X, const Op& C, std::string label = {}) {
    SymSeries s;
    s.label = std::move(label);
    s.T = X.T;
    for (const auto& sl : X.slice) s.c.push_back(r_trace(sl, C, X.N, std::size_t{1}).get(0, 0));
    return s;
}

inline SymSeries operator*(const SymSeries& a, const SymSeries& b) {
    SymSeries r;
    r.T = std::min(a.T, b.T);
    for (int t = 0; t <= r.T; ++t) {
        NCP acc;
        for (int i = 0; i <= t; ++i) acc += a[i] * b[t - i];
        r.c.push_back(std::move(acc));
    }
    return r;
}
inline SymSeries operator+(SymSeries a, const SymSeries& b) {
    a.T = std::min(a.T, b.T);
    a.c.resize(static_cast<std::size_t>(a.T) + 1);
    for (int t = 0; t <= a.T; ++t) a.c[static_cast<std::size_t>(t)] += b[t];
    return a;
}
inline SymSeries operator*(const Scalar& s, SymSeries a) {
    for (auto& x : a.c) x = s * x;
    return a;
}

// ---------------------------------------------------------------------------
// Relations

enum class YangianCase { trig, rational, hshift };

inline const char* to_string(YangianCase c) {
    switch (c) {
        case YangianCase::trig: return "trig";
        case YangianCase::rational: return "rational";
        case YangianCase::hshift: return "h-shifted";
    }
    return "?";
}

struct Relation {
    NCP poly;
    std::string provenance;
    int weight_top = 0;
    int weight_low = 0;
    int degree = 0;
};

/// Generators are ids < N*N*blocks; a generator of block b has weight b when
/// `weighted`, else 1. `homogeneous` says every relation is weight-homogeneous.
struct RelationSet {
    std::size_t N = 0;
    std::size_t blocks = 0;
    int T = 0;
    std::string symbol = "l";
    bool weighted = true;
    bool homogeneous = true;
    std::vector<Relation> rels;

    int weight(Gen g) const { return weighted ? static_cast<int>(g / (N * N)) + 1 : 1; }
    int word_weight(const Word& w) const {
        int s = 0;
        for (Gen g : w) s += weight(g);
        return s;
    }
    std::size_t generators() const { return N * N * blocks; }
    std::string name(const Word& w) const { return word_name(w, N, symbol); }

    /// Adds p unless it is zero or a scalar multiple of a stored relation.
    bool add(const NCP& p, std::string provenance) {
        if (p.is_zero()) return false;
        NCP monic = p.leading().second.inverse() * p;
        auto [it, fresh] = seen_.try_emplace(monic.leading().first);
        for (std::size_t idx : it->second)
            if (normalized_[idx] == monic) return false;
        it->second.push_back(rels.size());
        normalized_.push_back(monic);
        Relation r{p, std::move(provenance), 0, 1 << 30, p.degree()};
        for (const auto& [w, c] : p.terms()) {
            int wt = word_weight(w);
            r.weight_top = std::max(r.weight_top, wt);
            r.weight_low = std::min(r.weight_low, wt);
        }
        rels.push_back(std::move(r));
        return true;
    }

private:
    std::map<Word, std::vector<std::size_t>, DegLex> seen_;
    std::vector<NCP> normalized_;
};

/// Coefficient relations of (u - v) [R(u,v) L1(u) L2(v) - L1(v) L2(u) R(u,v)] = 0 with
/// overlined copies; a coefficient is kept when all its generators have index <= T.
/// hshift: R(u,v) = R - h/(u-v) with L = I + h L~ (generators are the entries of L~).
inline RelationSet yangian_relations(const Braiding& B, int T, std::optional<YangianCase> which = std::nullopt) {
    const YangianCase yc = which ? *which : (B.is_hecke() ? YangianCase::trig : YangianCase::rational);
    if ((yc == YangianCase::trig) != B.is_hecke())
        throw std::invalid_argument("trig relations need a Hecke symmetry, rational ones an involutive symmetry");
    const std::size_t N = B.dim();
    const Scalar h = yc == YangianCase::hshift ? Scalar::h() : Scalar(1);
    // one extra order: the top slice can cancel from a coefficient relation
    SeriesMatrix L = generating_matrix(N, T + 1, h);
    SeriesMatrix L1 = overline_copy(L, B, 1, 2), L2 = overline_copy(L, B, 2, 2);
    const Op& R = B.matrix();
    const Op I = Op::identity(N * N);
    Op Qu, Qv, Q0(N * N, N * N);
    if (yc == YangianCase::trig) {
        Qu = R - scale(qlambda(), I);
        Qv = scale(Scalar(-1), R);
    } else {
        Qu = R;
        Qv = scale(Scalar(-1), R);
        Q0 = scale(-h, I);
    }
    RelationSet rs;
    rs.N = N;
    rs.blocks = static_cast<std::size_t>(T);
    rs.T = T;
    rs.homogeneous = yc == YangianCase::trig;
    const Gen alphabet = static_cast<Gen>(N * N * static_cast<std::size_t>(T));
    auto fits = [&](const NCP& p) {
        for (const auto& [w, c] : p.terms())
            for (Gen g : w)
                if (g >= alphabet) return false;
        return true;
    };
    for (int a = -1; a <= T; ++a)
        for (int b = -1; b <= T; ++b) {
            PolyOp rel = Qu * (L1.at(a + 1) * L2.at(b)) + Qv * (L1.at(a) * L2.at(b + 1)) + Q0 * (L1.at(a) * L2.at(b)) -
                         (L1.at(b) * L2.at(a + 1)) * Qu - (L1.at(b + 1) * L2.at(a)) * Qv - (L1.at(b) * L2.at(a)) * Q0;
            for (std::size_t r = 0; r < rel.rows(); ++r)
                for (const auto& [c, p] : rel.row(r))
                    if (fits(p))
                        rs.add(p, "(" + std::to_string(a) + "," + std::to_string(b) + ") entry " + multi_index(r, N, 2) +
                                  multi_index(c, N, 2));
        }
    return rs;
}

// ---------------------------------------------------------------------------
// Bounded ideal membership

enum class Verdict { member, not_derivable };

struct CertificateTerm {
    Word left;
    std::size_t relation = 0;
    Word right;
    Scalar coeff;
};

struct Certificate {
    std::vector<CertificateTerm> terms;
    std::optional<Rational> sample_point;  // set when coefficients are only valid at t = point

    /// Sum of coeff * left * r * right (at the sample point, if any).
    NCP evaluate(const RelationSet& rs) const {
        NCP acc;
        for (const auto& t : terms) {
            NCP r = rs.rels.at(t.relation).poly;
            if (sample_point) r = r.map_coeffs([&](const Scalar& s) { return Scalar(s.eval(*sample_point)); });
            NCP row;
            for (const auto& [w, c] : r.terms()) row.add_term(concat(concat(t.left, w), t.right), c);
            acc += t.coeff * row;
        }
        return acc;
    }

    json to_json(const RelationSet& rs) const {
        json arr = json::array();
        for (const auto& t : terms)
            arr.push_back({{"left", rs.name(t.left)},
                           {"relation", t.relation},
                           {"provenance", rs.rels.at(t.relation).provenance},
                           {"right", rs.name(t.right)},
                           {"coefficient", t.coeff.to_string()}});
        json j{{"terms", arr}};
        if (sample_point) j["sample_point"] = sample_point->get_str();
        return j;
    }
};

struct MembershipOptions {
    int D = 4;
    bool symbolic = true;  // false: exact solves at sampled parameter values only
    std::size_t sample_points = 3;
    std::uint64_t seed = 1;
};

struct MembershipResult {
    Verdict verdict = Verdict::not_derivable;
    Certificate certificate;
    std::vector<Certificate> sampled;  // one per point in sampled mode
    std::size_t rows = 0, cols = 0, rank = 0;
    std::string note;
};

namespace detail {

/// A candidate span row w * r * w' kept as (left, relation, right).
struct SpanRow {
    Word left;
    std::size_t rel;
    Word right;
};

/// All words over the alphabet with weight <= wmax and degree <= dmax.
inline std::vector<Word> enumerate_words(const RelationSet& rs, int wmax, int dmax) {
    std::vector<Word> out{Word{}};
    std::vector<Gen> alphabet;
    for (std::size_t g = 0; g < rs.generators(); ++g)
        if (rs.weight(static_cast<Gen>(g)) <= wmax) alphabet.push_back(static_cast<Gen>(g));
    std::vector<Word> frontier{Word{}};
    for (int d = 1; d <= dmax; ++d) {
        std::vector<Word> next;
        for (const auto& w : frontier) {
            int ww = rs.word_weight(w);
            for (Gen g : alphabet)
                if (ww + rs.weight(g) <= wmax) {
                    Word x = w;
                    x.push_back(g);
                    next.push_back(std::move(x));
                }
        }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

struct UnionFind {
    std::vector<std::size_t> p;
    explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    std::size_t find(std::size_t x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { p[find(a)] = find(b); }
};

template <class F, class Eval>
SparseVec<F> sparse_row(const NCP& poly, const Word& l, const Word& r,
                        const std::unordered_map<Word, std::size_t, WordHash>& col, Eval&& ev) {
    SparseVec<F> v;
    v.reserve(poly.size());
    for (const auto& [w, c] : poly.terms()) v.emplace_back(col.at(concat(concat(l, w), r)), ev(c));
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
}

inline bool parametric(const NCP& p) {
    for (const auto& [w, c] : p.terms())
        if (!c.is_constant()) return true;
    return false;
}

inline MembershipResult member_component(const NCP& p, const RelationSet& rs, const MembershipOptions& o) {
    MembershipResult res;
    int W = 0;
    for (const auto& [w, c] : p.terms()) W = std::max(W, rs.word_weight(w));
    // filtered relations: only the degree cap bounds the span
    if (!(rs.weighted && rs.homogeneous)) W = o.D * rs.word_weight(Word{static_cast<Gen>(rs.generators() - 1)});

    // candidate rows
    int min_rel_w = 1 << 30, min_rel_d = 1 << 30;
    for (const auto& r : rs.rels)
        if (r.weight_top <= W && r.degree <= o.D) {
            min_rel_w = std::min(min_rel_w, r.weight_top);
            min_rel_d = std::min(min_rel_d, r.degree);
        }
    if (min_rel_w == (1 << 30)) {
        res.note = "no relation fits the weight/degree window";
        return res;
    }
    std::vector<Word> words = enumerate_words(rs, W - min_rel_w, o.D - min_rel_d);
    std::vector<int> wweight(words.size()), wdeg(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        wweight[i] = rs.word_weight(words[i]);
        wdeg[i] = static_cast<int>(words[i].size());
    }
    std::vector<SpanRow> rows;
    for (std::size_t ri = 0; ri < rs.rels.size(); ++ri) {
        const Relation& r = rs.rels[ri];
        const int bw = W - r.weight_top, bd = o.D - r.degree;
        if (bw < 0 || bd < 0) continue;
        for (std::size_t a = 0; a < words.size(); ++a) {
            if (wweight[a] > bw || wdeg[a] > bd) continue;
            for (std::size_t b = 0; b < words.size(); ++b) {
                if (wdeg[a] + wdeg[b] > bd) continue;
                const int tw = wweight[a] + wweight[b];
                if (rs.homogeneous && rs.weighted ? tw != bw : tw > bw) continue;
                rows.push_back({words[a], ri, words[b]});
            }
        }
    }

    // columns in descending deglex so the smallest index is the leading monomial
    std::vector<Word> cols;
    for (const auto& [w, c] : p.terms()) cols.push_back(w);
    for (const auto& sr : rows)
        for (const auto& [w, c] : rs.rels[sr.rel].poly.terms()) cols.push_back(concat(concat(sr.left, w), sr.right));
    std::sort(cols.begin(), cols.end(), [](const Word& a, const Word& b) { return DegLex{}(b, a); });
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    std::unordered_map<Word, std::size_t, WordHash> col;
    col.reserve(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) col.emplace(cols[i], i);

    // keep only rows connected to the support of p
    UnionFind uf(cols.size());
    for (const auto& sr : rows) {
        std::size_t first = SIZE_MAX;
        for (const auto& [w, c] : rs.rels[sr.rel].poly.terms()) {
            std::size_t k = col.at(concat(concat(sr.left, w), sr.right));
            if (first == SIZE_MAX)
                first = k;
            else
                uf.unite(first, k);
        }
    }
    std::set<std::size_t> target_roots;
    for (const auto& [w, c] : p.terms()) target_roots.insert(uf.find(col.at(w)));
    std::vector<SpanRow> kept;
    for (auto& sr : rows) {
        const Word& w0 = rs.rels[sr.rel].poly.terms().begin()->first;
        if (target_roots.count(uf.find(col.at(concat(concat(sr.left, w0), sr.right))))) kept.push_back(std::move(sr));
    }
    res.rows = kept.size();
    res.cols = cols.size();

    bool has_param = parametric(p);
    for (const auto& r : rs.rels) has_param = has_param || parametric(r.poly);

    // locate a supporting set of rows mod p at a random parameter value
    std::mt19937_64 rng(o.seed);
    auto row_at = [&](const SpanRow& sr, Fp x) {
        return sparse_row<Fp>(rs.rels[sr.rel].poly, sr.left, sr.right, col, [&](const Scalar& s) { return eval_fp(s, x); });
    };
    auto target_at = [&](Fp x) { return sparse_row<Fp>(p, {}, {}, col, [&](const Scalar& s) { return eval_fp(s, x); }); };
    std::vector<std::size_t> support;
    bool found = false;
    for (int attempt = 0; attempt < 2 && !found; ++attempt) {
        Fp x = Fp::raw(rng() % (Fp::P - 3) + 2);
        Echelon<Fp> e;
        std::vector<std::size_t> independent;
        try {
            for (std::size_t i = 0; i < kept.size(); ++i)
                if (e.insert(row_at(kept[i], x))) independent.push_back(i);
            res.rank = e.rank();
            if (!e.reduce(target_at(x)).rest.empty()) {
                if (!has_param) break;  // parameter-free: the verdict does not depend on x
                continue;
            }
            Echelon<Fp> t(true);
            for (std::size_t i : independent) t.insert(row_at(kept[i], x));
            auto red = t.reduce(target_at(x));
            for (const auto& [idx, c] : red.combo) support.push_back(independent[idx]);
            std::sort(support.begin(), support.end());
            found = true;
        } catch (const std::domain_error&) {
            continue;  // x hit a pole; draw again
        }
    }
    if (!found) {
        res.note = "not in the span of relation multiples of degree <= " + std::to_string(o.D);
        return res;
    }

    auto certificate_from = [&](const std::vector<std::size_t>& idx, const SparseVec<Scalar>& combo,
                                std::optional<Rational> at) {
        Certificate c;
        c.sample_point = at;
        for (const auto& [k, coef] : combo) c.terms.push_back({kept[idx[k]].left, kept[idx[k]].rel, kept[idx[k]].right, coef});
        return c;
    };
    auto exact_solve = [&](const std::vector<std::size_t>& idx, auto ev, std::optional<Rational> at) -> std::optional<Certificate> {
        using F = std::decay_t<decltype(ev(Scalar()))>;
        Echelon<F> e(true);
        for (std::size_t i : idx) e.insert(sparse_row<F>(rs.rels[kept[i].rel].poly, kept[i].left, kept[i].right, col, ev));
        auto red = e.reduce(sparse_row<F>(p, {}, {}, col, ev));
        if (!red.rest.empty()) return std::nullopt;
        SparseVec<Scalar> combo;
        for (const auto& [k, c] : red.combo) combo.emplace_back(k, Scalar(c));
        return certificate_from(idx, combo, at);
    };

    if (!has_param || o.symbolic) {
        std::optional<Certificate> cert;
        if (has_param)
            cert = exact_solve(support, [](const Scalar& s) { return s; }, std::nullopt);
        else
            cert = exact_solve(support, [](const Scalar& s) { return s.to_rational(); }, std::nullopt);
        if (!cert) {
            // the sampled value was special; redo over every kept row
            std::vector<std::size_t> all(kept.size());
            std::iota(all.begin(), all.end(), 0);
            cert = has_param ? exact_solve(all, [](const Scalar& s) { return s; }, std::nullopt)
                             : exact_solve(all, [](const Scalar& s) { return s.to_rational(); }, std::nullopt);
        }
        if (!cert) {
            res.note = "exact solve found no combination";
            return res;
        }
        if (cert->evaluate(rs) != p) throw std::logic_error("ideal membership certificate does not re-evaluate");
        res.verdict = Verdict::member;
        res.certificate = std::move(*cert);
        return res;
    }

    // sampled mode: an exact rational certificate at each sampled parameter value
    std::vector<Poly> excluded;
    auto plan = make_sample_plan(0, static_cast<int>(o.sample_points), o.seed, excluded, 0);
    for (const auto& x : plan.points) {
        std::optional<Certificate> cert;
        try {
            cert = exact_solve(support, [&x](const Scalar& s) { return s.eval(x); }, x);
        } catch (const std::domain_error&) {
            continue;
        }
        if (!cert) {
            res.note = "sampled verdicts disagree at t = " + x.get_str();
            throw std::runtime_error("inconsistent membership verdicts across sample points");
        }
        NCP px = p.map_coeffs([&](const Scalar& s) { return Scalar(s.eval(x)); });
        if (cert->evaluate(rs) != px) throw std::logic_error("sampled certificate does not re-evaluate");
        res.sampled.push_back(std::move(*cert));
    }
    if (res.sampled.empty()) throw std::runtime_error("every sample point hit a pole");
    res.verdict = Verdict::member;
    res.certificate = res.sampled.front();
    res.note = "verified at " + std::to_string(res.sampled.size()) + " sampled parameter values";
    return res;
}

}  // namespace detail

/// Is p in the span of { w r w' : r in rels, deg(w r w') <= D }? Weight-homogeneous
/// relation sets are handled one weight component at a time.
inline MembershipResult ideal_member(const NCP& p, const RelationSet& rs, const MembershipOptions& o = {}) {
    MembershipResult res;
    if (p.is_zero()) {
        res.verdict = Verdict::member;
        res.note = "zero polynomial";
        return res;
    }
    if (p.degree() > o.D) throw std::invalid_argument("polynomial degree exceeds the degree cap D");
    for (const auto& [w, c] : p.terms())
        for (Gen g : w)
            if (g >= rs.generators()) throw std::invalid_argument("polynomial uses generators outside the relation set");
    if (!(rs.homogeneous && rs.weighted)) return detail::member_component(p, rs, o);
    std::map<int, NCP> parts;
    for (const auto& [w, c] : p.terms()) parts[rs.word_weight(w)].add_term(w, c);
    if (parts.size() == 1) return detail::member_component(p, rs, o);
    MembershipResult all;
    all.verdict = Verdict::member;
    std::map<Rational, Certificate> per_point;
    std::map<Rational, std::size_t> hits;
    for (const auto& [wt, part] : parts) {
        MembershipResult r = detail::member_component(part, rs, o);
        all.rows += r.rows;
        all.cols += r.cols;
        all.rank += r.rank;
        if (r.verdict != Verdict::member) {
            all.verdict = Verdict::not_derivable;
            all.note = "weight " + std::to_string(wt) + " component: " + r.note;
            return all;
        }
        if (r.sampled.empty()) {
            for (auto& t : r.certificate.terms) all.certificate.terms.push_back(std::move(t));
            continue;
        }
        for (auto& c : r.sampled) {
            Certificate& dst = per_point[*c.sample_point];
            dst.sample_point = c.sample_point;
            for (auto& t : c.terms) dst.terms.push_back(std::move(t));
            ++hits[*c.sample_point];
        }
    }
    for (auto& [x, c] : per_point)
        if (hits[x] == parts.size()) all.sampled.push_back(std::move(c));
    if (!per_point.empty()) {
        if (all.sampled.empty()) throw std::runtime_error("no sample point is shared by every weight component");
        all.certificate = all.sampled.front();
        all.note = "verified at " + std::to_string(all.sampled.size()) + " sampled parameter values";
    }
    return all;
}

}  // namespace braidcheck

namespace braidcheck {

/// Fill a report record from an ideal-membership run: pass with certificate, or
/// inconclusive when the element is not derivable at this truncation.
inline void record_membership(CheckRecord& r, const NCP& p, const RelationSet& rs, const MembershipOptions& o) {
    if (p.is_zero()) {
        r.note = "identically zero";
        return;
    }
    r.params["terms"] = p.size();
    r.params["degree"] = p.degree();
    if (p.degree() > o.D) {
        r.status = Status::inconclusive;
        r.note = "element degree " + std::to_string(p.degree()) + " exceeds D=" + std::to_string(o.D);
        r.witness = json{{"element", to_string(p, rs.N, rs.symbol)}};
        return;
    }
    MembershipResult m = ideal_member(p, rs, o);
    if (m.verdict == Verdict::member) {
        r.note = "member" + (m.note.empty() ? std::string() : "; " + m.note);
        json cert = m.certificate.to_json(rs);
        if (!m.sampled.empty()) {
            cert = json::array();
            for (const auto& c : m.sampled) cert.push_back(c.to_json(rs));
        }
        r.certificate = json{{"element", to_string(p, rs.N, rs.symbol)}, {"combination", cert}};
        return;
    }
    r.status = Status::inconclusive;
    r.note = "not derivable at T=" + std::to_string(rs.T) + ", D=" + std::to_string(o.D) + ": " + m.note;
    r.witness = json{{"element", to_string(p, rs.N, rs.symbol)}, {"rows", m.rows}, {"columns", m.cols}, {"rank", m.rank}};
}

}  // namespace braidcheck

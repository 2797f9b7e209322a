#pragma once

// Classical and braided rational Gaudin models in the fundamental representation at
// every site: Lax matrices, quadratic Hamiltonians, Talalaev operators, residues.

#include "braidcheck/freealg.hpp"

#include <set>

namespace braidcheck {

using RM = Matrix<Rational>;

enum class GaudinFlavor { classical, braided, weighted };

inline const char* to_string(GaudinFlavor f) {
    switch (f) {
        case GaudinFlavor::classical: return "classical";
        case GaudinFlavor::braided: return "braided";
        case GaudinFlavor::weighted: return "weighted";
    }
    return "?";
}

class GaudinError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline RM to_rational_matrix(const Op& A) {
    return A.map([](const Scalar& s) { return s.to_rational(); });
}

/// X acts on C^m (x) C^d (aux first); the result acts on (C^m)^{(x)n} (x) C^d with X in aux factor pos.
inline RM aux_embed(const RM& X, std::size_t m, std::size_t d, std::size_t pos, std::size_t n) {
    const std::size_t before = ipow(m, pos - 1), after = ipow(m, n - pos);
    const std::size_t dim = ipow(m, n) * d;
    RM out(dim, dim);
    for (std::size_t r = 0; r < X.rows(); ++r) {
        const std::size_t a = r / d, phi = r % d;
        for (const auto& [c, v] : X.row(r)) {
            const std::size_t b = c / d, psi = c % d;
            for (std::size_t x = 0; x < before; ++x)
                for (std::size_t y = 0; y < after; ++y) {
                    const std::size_t ra = (x * m + a) * after + y, ca = (x * m + b) * after + y;
                    out.set(ra * d + phi, ca * d + psi, v);
                }
        }
    }
    return out;
}

/// An aux-only operator on (C^m)^{(x)n}, tensored with I_d.
inline RM aux_only(const RM& A, std::size_t d) { return kron(A, RM::identity(d)); }

/// Tr_{C}(aux) X over all n aux factors: sum_{A,B} C^{(x)n}[B,A] X[(A,phi),(B,psi)].
inline RM aux_trace(const RM& X, const RM& C, std::size_t m, std::size_t n, std::size_t d) {
    RM Ct = C;
    for (std::size_t k = 1; k < n; ++k) Ct = kron(Ct, C);
    (void)m;
    RM out(d, d);
    for (std::size_t r = 0; r < X.rows(); ++r) {
        const std::size_t A = r / d, phi = r % d;
        for (const auto& [c, v] : X.row(r)) {
            const std::size_t B = c / d, psi = c % d;
            if (const Rational* cv = Ct.find(B, A)) out.add_to(phi, psi, *cv * v);
        }
    }
    return out;
}

inline RM commutator(const RM& a, const RM& b) { return a * b - b * a; }

struct GaudinSystem {
    GaudinFlavor flavor = GaudinFlavor::classical;
    std::size_t m = 0, K = 0, d = 0;
    std::vector<Rational> points;
    Braiding B = builtin_braiding("flip", 2);
    bool abstract = false;
    std::vector<RM> M;  // M(k) on C^m (x) C^d, aux index first
    std::string realization;
    std::vector<std::string> warnings;
    RM R, Rinv, C;  // aux braiding data as rational matrices

    /// R_j on the aux factors j, j+1 of n, tensored with I_d (power -1 for the inverse).
    RM R_at(std::size_t j, std::size_t n, int power = 1) const {
        return aux_only(embed(power < 0 ? Rinv : R, m, j, n), d);
    }
    /// Overlined copy X_{bar k} on n aux factors, X on C^m (x) C^d.
    RM overline(const RM& X, std::size_t k, std::size_t n) const {
        RM Y = aux_embed(X, m, d, 1, n);
        for (std::size_t j = 1; j < k; ++j) Y = R_at(j, n) * Y * R_at(j, n, -1);
        return Y;
    }
};

namespace detail {

inline void check_points(std::vector<Rational>& pts, std::size_t K) {
    for (auto& x : pts) x.canonicalize();
    if (K < 1) throw GaudinError("a Gaudin system needs at least one site");
    if (pts.size() != K) throw GaudinError("need exactly one point per site");
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j)
            if (pts[i] == pts[j]) throw GaudinError("site points must be pairwise distinct");
}

inline void attach_braiding(GaudinSystem& s, const Braiding& B) {
    s.B = B;
    s.R = to_rational_matrix(B.matrix());
    s.Rinv = to_rational_matrix(B.inverse_matrix());
    s.C = to_rational_matrix(B.c());
}

}  // namespace detail

/// First nonzero residual of the site relations with overlined copies:
///   M(k)_1 M(l)_{bar 2} = M(l)_{bar 2} M(k)_1 (k != l),
///   M(k)_1 M(k)_{bar 2} - M(k)_{bar 2} M(k)_1 = M(k)_1 R - M(k)_{bar 2} R.
inline std::optional<json> site_relation_failure(const GaudinSystem& s) {
    const RM R2 = s.R_at(1, 2);
    for (std::size_t k = 0; k < s.K; ++k)
        for (std::size_t l = 0; l < s.K; ++l) {
            RM A = s.overline(s.M[k], 1, 2), Bl = s.overline(s.M[l], 2, 2);
            RM res = A * Bl - Bl * A;
            if (k == l) res = res - (A * R2 - Bl * R2);
            if (auto nz = res.first_nonzero())
                return json{{"sites", {k + 1, l + 1}},
                            {"row", nz->first},
                            {"col", nz->second},
                            {"value", to_string(res.get(nz->first, nz->second))}};
        }
    return std::nullopt;
}

/// M(k)_i^j = E_ji acting in the k-th factor of (C^m)^{(x)K}, the upper index labelling rows:
/// block (i, j) of the stored matrix is E_ij.
inline GaudinSystem classical_sites(std::size_t m, std::size_t K, std::vector<Rational> points,
                                    GaudinFlavor flavor = GaudinFlavor::classical) {
    detail::check_points(points, K);
    if (m < 1) throw GaudinError("aux dimension must be positive");
    GaudinSystem s;
    s.flavor = flavor;
    s.m = m;
    s.K = K;
    s.d = ipow(m, K);
    s.points = std::move(points);
    s.realization = "fundamental representation at every site";
    detail::attach_braiding(s, builtin_braiding("flip", m));
    for (std::size_t k = 1; k <= K; ++k) {
        RM Mk(m * s.d, m * s.d);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                RM E(m, m);
                E.set(i, j, 1);
                RM op = kron(kron(RM::identity(ipow(m, k - 1)), E), RM::identity(ipow(m, K - k)));
                for (std::size_t r = 0; r < s.d; ++r)
                    for (const auto& [c, v] : op.row(r)) Mk.set(i * s.d + r, j * s.d + c, v);
            }
        s.M.push_back(std::move(Mk));
    }
    if (auto f = site_relation_failure(s)) throw GaudinError("classical site relations fail: " + f->dump());
    return s;
}

/// Braided sites for an involutive B. A conjugated flip (W (x) I) P (W (x) I)^{-1} is realized by
/// conjugating the classical sites with W in the aux space; anything else becomes abstract.
inline GaudinSystem braided_sites(const Braiding& B, std::size_t K, std::vector<Rational> points,
                                  std::optional<Matrix<Scalar>> W = std::nullopt) {
    if (B.is_hecke()) throw GaudinError("braided Gaudin sites need an involutive symmetry");
    const std::size_t m = B.dim();
    if (B.bi_rank() != static_cast<int>(m)) throw GaudinError("braided Gaudin sites need bi-rank (N|0)");
    detail::check_points(points, K);
    GaudinSystem s = classical_sites(m, K, points, GaudinFlavor::braided);
    detail::attach_braiding(s, B);
    if (B.matrix() == flip_matrix(m)) return s;

    Matrix<Scalar> w = W ? *W : default_conjugator(m);
    if (conjugated_flip_matrix(w) == B.matrix()) {
        auto winv = braidcheck::inverse(w);
        RM Wq = to_rational_matrix(w), Wi = to_rational_matrix(*winv);
        RM Wa = aux_only(Wq, s.d), Wai = aux_only(Wi, s.d);
        for (auto& Mk : s.M) Mk = Wa * Mk * Wai;
        s.realization = "classical sites conjugated by W in the aux space";
        if (!site_relation_failure(s)) return s;
        s.warnings.push_back("transported sites fail the braided site relations; falling back to abstract mode");
    } else {
        s.warnings.push_back("no concrete realization known for this symmetry; using abstract mode");
    }
    s.abstract = true;
    s.M.clear();
    s.d = 0;
    s.realization = "abstract: free site generators modulo the braided site relations";
    return s;
}

/// L~(u) = sum_k M(k)/(u - u_k) on C^m (x) C^d.
inline RM lax_matrix(const GaudinSystem& s, const Rational& u) {
    RM L(s.m * s.d, s.m * s.d);
    for (std::size_t k = 0; k < s.K; ++k) {
        if (u == s.points[k]) throw GaudinError("Lax matrix evaluated at a site point");
        L = L + scale(Rational(1) / (u - s.points[k]), s.M[k]);
    }
    return L;
}

/// [L_{bar 1}(u), L_{bar 2}(v)] - [R/(u-v), L_{bar 1}(u) + L_{bar 2}(v)] on two aux factors.
inline RM lax_residual(const GaudinSystem& s, const Rational& u, const Rational& v) {
    if (u == v) throw GaudinError("Lax relation needs u != v");
    RM Lu = lax_matrix(s, u), Lv = lax_matrix(s, v);
    RM A = s.overline(Lu, 1, 2), Bv = s.overline(Lv, 2, 2);
    RM Rq = scale(Rational(1) / (u - v), s.R_at(1, 2));
    return commutator(A, Bv) - commutator(Rq, A + Bv);
}

/// H_k = sum_{l != k} Tr_R M(k) M(l) / (u_k - u_l); the weighted flavor has an extra u_l.
inline std::vector<RM> hamiltonians(const GaudinSystem& s) {
    if (s.abstract) throw GaudinError("abstract systems have no operator Hamiltonians");
    std::vector<RM> H;
    for (std::size_t k = 0; k < s.K; ++k) {
        RM acc(s.d, s.d);
        for (std::size_t l = 0; l < s.K; ++l) {
            if (l == k) continue;
            Rational w = Rational(1) / (s.points[k] - s.points[l]);
            if (s.flavor == GaudinFlavor::weighted) w *= s.points[l];
            acc = acc + scale(w, aux_trace(s.M[k] * s.M[l], s.C, s.m, 1, s.d));
        }
        H.push_back(std::move(acc));
    }
    return H;
}

// ---------------------------------------------------------------------------
// Laurent expansions of operator-valued rational functions of u

/// sum_{i} c[i] t^{val + i}, t = u - u0, known exactly up to and including t^top.
struct PoleExpansion {
    int val = 0;
    int top = 0;
    std::vector<RM> c;
    std::size_t dim = 0;

    static PoleExpansion constant(const RM& A, int top) {
        PoleExpansion p;
        p.dim = A.rows();
        p.val = 0;
        p.top = top;
        p.c.assign(static_cast<std::size_t>(std::max(top, 0)) + 1, RM(p.dim, p.dim));
        if (top >= 0) p.c[0] = A;
        return p;
    }
    RM at(int order) const {
        const int i = order - val;
        if (order > top) throw std::logic_error("Laurent coefficient beyond the known precision");
        if (i < 0 || i >= static_cast<int>(c.size())) return RM(dim, dim);
        return c[static_cast<std::size_t>(i)];
    }
    PoleExpansion derivative() const {
        PoleExpansion p;
        p.dim = dim;
        p.val = val - 1;
        p.top = top - 1;
        for (std::size_t i = 0; i < c.size(); ++i) p.c.push_back(scale(Rational(val + static_cast<int>(i)), c[i]));
        return p;
    }
    friend PoleExpansion operator+(const PoleExpansion& a, const PoleExpansion& b) {
        PoleExpansion p;
        p.dim = a.dim;
        p.val = std::min(a.val, b.val);
        p.top = std::min(a.top, b.top);
        for (int o = p.val; o <= p.top; ++o) p.c.push_back(a.at(o) + b.at(o));
        return p;
    }
    friend PoleExpansion operator-(const PoleExpansion& a, const PoleExpansion& b) {
        return a + b.map([](const RM& x) { return -x; });
    }
    friend PoleExpansion operator*(const PoleExpansion& a, const PoleExpansion& b) {
        PoleExpansion p;
        p.dim = a.dim;
        p.val = a.val + b.val;
        p.top = std::min(a.top + b.val, b.top + a.val);
        for (int o = p.val; o <= p.top; ++o) {
            RM acc(a.dim, a.dim);
            for (int i = a.val; o - i >= b.val; ++i) acc = acc + a.at(i) * b.at(o - i);
            p.c.push_back(std::move(acc));
        }
        return p;
    }
    template <class F>
    PoleExpansion map(F&& f) const {
        PoleExpansion p = *this;
        for (auto& x : p.c) x = f(x);
        if (!p.c.empty()) p.dim = p.c.front().rows();
        return p;
    }
};

/// Expansion of sum_k w_k M(k)/(u - u_k) at u0, exact through t^top. w_k = 1 (or u_k if weighted).
inline PoleExpansion lax_expansion(const GaudinSystem& s, const Rational& u0, int top, bool weighted = false) {
    const std::size_t dim = s.m * s.d;
    PoleExpansion p;
    p.dim = dim;
    p.top = top;
    bool pole = false;
    for (const auto& x : s.points) pole = pole || x == u0;
    p.val = pole ? -1 : 0;
    p.c.assign(static_cast<std::size_t>(top - p.val + 1), RM(dim, dim));
    for (std::size_t k = 0; k < s.K; ++k) {
        const Rational w = weighted ? s.points[k] : Rational(1);
        if (s.points[k] == u0) {
            p.c[0] = p.c[0] + scale(w, s.M[k]);
            continue;
        }
        // 1/(u0 - u_k + t) = sum_j (-1)^j t^j / (u0 - u_k)^{j+1}
        const Rational a = u0 - s.points[k];
        Rational f = w / a;
        for (int j = 0; j <= top; ++j) {
            p.c[static_cast<std::size_t>(j - p.val)] = p.c[static_cast<std::size_t>(j - p.val)] + scale(f, s.M[k]);
            f = -f / a;
        }
    }
    return p;
}

/// sum_p Q_p d^p with Laurent-expanded operator coefficients; d f = f d + f'.
struct DiffOpPoly {
    std::vector<PoleExpansion> q;

    static DiffOpPoly multiplication(PoleExpansion f) { return DiffOpPoly{{std::move(f)}}; }
    /// f - d (the factor L(u) - I d/du).
    static DiffOpPoly minus_d(PoleExpansion f) {
        PoleExpansion one = PoleExpansion::constant(RM::identity(f.dim), f.top);
        return DiffOpPoly{{std::move(f), one.map([](const RM& x) { return -x; })}};
    }

    friend DiffOpPoly operator*(const DiffOpPoly& a, const DiffOpPoly& b) {
        // (Q d^p)(S d^r) = sum_j C(p, j) Q S^{(j)} d^{p - j + r}
        DiffOpPoly out;
        auto add = [&](std::size_t deg, const PoleExpansion& x) {
            if (out.q.size() <= deg) out.q.resize(deg + 1);
            out.q[deg] = out.q[deg].c.empty() && out.q[deg].dim == 0 ? x : out.q[deg] + x;
        };
        for (std::size_t p = 0; p < a.q.size(); ++p)
            for (std::size_t r = 0; r < b.q.size(); ++r) {
                PoleExpansion S = b.q[r];
                Rational binom = 1;
                for (std::size_t j = 0; j <= p; ++j) {
                    add(p - j + r, (a.q[p] * S).map([&](const RM& x) { return scale(binom, x); }));
                    S = S.derivative();
                    binom = binom * static_cast<long>(p - j) / static_cast<long>(j + 1);
                }
            }
        return out;
    }
    /// The operator applied to the constant function 1.
    PoleExpansion apply_to_unit() const { return q.at(0); }
};

/// QH_k at u0: Tr_R(aux 1..m) A^(m) (L_{bar 1} - d) ... (L_{bar k} - d) |> 1, Laurent-expanded
/// through t^top. Classical systems have R = P, so the copies are plain and Tr_R = Tr.
inline PoleExpansion talalaev_expansion(const GaudinSystem& s, std::size_t k, const Rational& u0, int top,
                                        bool weighted = false) {
    if (s.abstract) throw GaudinError("abstract systems have no operator Talalaev Hamiltonians");
    if (k < 1 || k > s.m) throw GaudinError("Talalaev index must satisfy 1 <= k <= m");
    const std::size_t n = s.m;
    // each derivative costs one order of precision
    PoleExpansion L = lax_expansion(s, u0, top + static_cast<int>(k), weighted);
    DiffOpPoly prod;
    for (std::size_t j = 1; j <= k; ++j) {
        PoleExpansion Lj = L.map([&](const RM& x) { return s.overline(x, j, n); });
        DiffOpPoly f = DiffOpPoly::minus_d(std::move(Lj));
        prod = j == 1 ? f : prod * f;
    }
    PoleExpansion unit = prod.apply_to_unit();
    const RM A = aux_only(to_rational_matrix(s.B.symmetrizer(n)), s.d);
    return unit.map([&](const RM& x) { return aux_trace(A * x, s.C, s.m, n, s.d); });
}

/// Same value by the recursion g_{j} = L_{bar j} g_{j+1} - g_{j+1}', g_{k+1} = I.
inline PoleExpansion talalaev_recursive(const GaudinSystem& s, std::size_t k, const Rational& u0, int top) {
    const std::size_t n = s.m;
    PoleExpansion L = lax_expansion(s, u0, top + static_cast<int>(k));
    PoleExpansion g = PoleExpansion::constant(RM::identity(ipow(s.m, n) * s.d), L.top);
    for (std::size_t j = k; j >= 1; --j) {
        PoleExpansion Lj = L.map([&](const RM& x) { return s.overline(x, j, n); });
        g = Lj * g - g.derivative();
    }
    const RM A = aux_only(to_rational_matrix(s.B.symmetrizer(n)), s.d);
    return g.map([&](const RM& x) { return aux_trace(A * x, s.C, s.m, n, s.d); });
}

/// QH_k(u) at a regular point.
inline RM talalaev(const GaudinSystem& s, std::size_t k, const Rational& u) {
    for (const auto& x : s.points)
        if (x == u) throw GaudinError("Talalaev operator evaluated at a site point");
    return talalaev_expansion(s, k, u, 0).at(0);
}

struct ResidueResult {
    std::size_t site = 0;
    std::optional<Rational> c;  // Res QH_2 = c H_k + (scalar) I
    std::optional<Rational> shift;
    bool ok = false;
};

/// Residue of QH_2 at each u_k compared with H_k: Res = c H_k + s I with c, s computed.
inline std::vector<ResidueResult> residue_check(const GaudinSystem& s) {
    std::vector<ResidueResult> out;
    if (s.m < 2 || s.K < 2) return out;
    const std::vector<RM> H = hamiltonians(s);
    for (std::size_t k = 0; k < s.K; ++k) {
        ResidueResult r;
        r.site = k + 1;
        RM res = talalaev_expansion(s, 2, s.points[k], -1).at(-1);
        // the off-diagonal (or non-scalar) part fixes c
        const RM& Hk = H[k];
        std::optional<std::pair<std::size_t, std::size_t>> probe;
        for (std::size_t i = 0; i < s.d && !probe; ++i)
            for (const auto& [j, v] : Hk.row(i))
                if (j != i || (i > 0 && Hk.get(i, i) != Hk.get(0, 0))) {
                    probe = std::make_pair(i, j);
                    break;
                }
        if (probe) {
            const auto [i, j] = *probe;
            Rational c = j != i ? Rational(res.get(i, j) / Hk.get(i, j))
                                : Rational((res.get(i, i) - res.get(0, 0)) / (Hk.get(i, i) - Hk.get(0, 0)));
            RM rest = res - scale(c, Hk);
            Rational sh = rest.get(0, 0);
            r.c = c;
            r.shift = sh;
            r.ok = rest == scale(sh, RM::identity(s.d));
        }
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Abstract mode: site generators modulo the braided site relations

/// Generator M(k)_i^j; block = site.
inline Gen site_generator(std::size_t m, std::size_t k, std::size_t i, std::size_t j) { return generator_id(m, k, i, j); }

inline PolyOp site_matrix(std::size_t m, std::size_t k) {
    PolyOp M(m, m);
    for (std::size_t i = 1; i <= m; ++i)
        for (std::size_t j = 1; j <= m; ++j) M.set(i - 1, j - 1, NCP::generator(site_generator(m, k, i, j)));
    return M;
}

inline RelationSet gaudin_relations(const Braiding& B, std::size_t K) {
    const std::size_t m = B.dim();
    RelationSet rs;
    rs.N = m;
    rs.blocks = K;
    rs.T = static_cast<int>(K);
    rs.symbol = "M";
    rs.weighted = false;
    rs.homogeneous = false;
    const Op& R = B.matrix();
    const Op& Ri = B.inverse_matrix();
    for (std::size_t k = 1; k <= K; ++k)
        for (std::size_t l = 1; l <= K; ++l) {
            PolyOp A = embed(site_matrix(m, k), m, 1, 2);
            PolyOp Bl = R * embed(site_matrix(m, l), m, 1, 2) * Ri;
            PolyOp rel = A * Bl - Bl * A;
            if (k == l) rel = rel - (A * R - Bl * R);
            for (std::size_t r = 0; r < rel.rows(); ++r)
                for (const auto& [c, p] : rel.row(r))
                    rs.add(p, "sites (" + std::to_string(k) + "," + std::to_string(l) + ") entry " + multi_index(r, m, 2) +
                                  multi_index(c, m, 2));
        }
    return rs;
}

/// H_k = sum_{l != k} Tr_R M(k) M(l) / (u_k - u_l) as a quadratic NCP.
inline std::vector<NCP> abstract_hamiltonians(const Braiding& B, const std::vector<Rational>& points,
                                              bool weighted = false) {
    const std::size_t m = B.dim(), K = points.size();
    std::vector<NCP> H;
    for (std::size_t k = 1; k <= K; ++k) {
        NCP acc;
        for (std::size_t l = 1; l <= K; ++l) {
            if (l == k) continue;
            Rational w = Rational(1) / (points[k - 1] - points[l - 1]);
            if (weighted) w *= points[l - 1];
            NCP tr = r_trace_full(site_matrix(m, k) * site_matrix(m, l), B.c(), m);
            acc += Scalar(w) * tr;
        }
        H.push_back(std::move(acc));
    }
    return H;
}

// ---------------------------------------------------------------------------
// Suite

struct GaudinOptions {
    std::size_t pairs = 5;  // sampled (u, v) pairs
    std::uint64_t seed = 1;
    int D = 4;
    bool symbolic = true;
    std::set<std::string> selection;  // check ids without the "gaudin." prefix; empty = all

    bool selected(const std::string& id) const { return selection.empty() || selection.count(id); }
};

namespace detail {

inline std::vector<std::pair<Rational, Rational>> gaudin_pairs(const std::vector<Rational>& pts, std::size_t count,
                                                               std::uint64_t seed) {
    std::vector<Poly> excluded;
    for (const auto& x : pts) excluded.push_back(Poly{-x, 1});
    SamplePlan plan = make_sample_plan(0, static_cast<int>(2 * count), seed, excluded);
    std::vector<std::pair<Rational, Rational>> out;
    for (std::size_t i = 0; i < count; ++i) out.emplace_back(plan.points[2 * i], plan.points[2 * i + 1]);
    return out;
}

inline json matrix_witness(const RM& X) {
    auto nz = X.first_nonzero();
    if (!nz) return json();
    return json{{"row", nz->first}, {"col", nz->second}, {"value", to_string(X.get(nz->first, nz->second))}};
}

inline json points_json(const std::vector<Rational>& pts) {
    json a = json::array();
    for (const auto& x : pts) a.push_back(x.get_str());
    return a;
}

}  // namespace detail

/// Concrete checks on a realized system: site relations, Lax relation, [H_k, H_l], sum H_k,
/// Talalaev commutativity and residues.
inline Report verify_gaudin(const GaudinSystem& s, const GaudinOptions& o = {}) {
    Report rep;
    const json base{{"flavor", to_string(s.flavor)},
                    {"braiding", s.B.name()},
                    {"m", s.m},
                    {"K", s.K},
                    {"points", detail::points_json(s.points)}};
    auto P = [&](json extra = json::object()) {
        json p = base;
        for (auto& [k, v] : extra.items()) p[k] = v;
        return p;
    };
    if (s.abstract) {
        if (o.selected("sites")) rep.run("gaudin.sites", P(), [&](CheckRecord& r) {
            r.status = Status::skipped;
            r.note = s.realization;
        });
        return rep;
    }
    if (o.selected("sites")) rep.run("gaudin.sites", P({{"realization", s.realization}}), [&](CheckRecord& r) {
        if (auto f = site_relation_failure(s)) {
            r.status = Status::fail;
            r.witness = *f;
        }
    });
    const auto pairs = detail::gaudin_pairs(s.points, o.pairs, o.seed);
    if (o.selected("lax")) rep.run("gaudin.lax", P({{"pairs", pairs.size()}}), [&](CheckRecord& r) {
        for (const auto& [u, v] : pairs) {
            RM res = lax_residual(s, u, v);
            if (!res.is_zero_matrix()) {
                r.status = Status::fail;
                r.witness = detail::matrix_witness(res);
                r.witness["u"] = u.get_str();
                r.witness["v"] = v.get_str();
                return;
            }
        }
    });
    const std::vector<RM> H = hamiltonians(s);
    if (o.selected("hamiltonians_commute")) rep.run("gaudin.hamiltonians_commute", P(), [&](CheckRecord& r) {
        for (std::size_t k = 0; k < s.K; ++k)
            for (std::size_t l = k + 1; l < s.K; ++l) {
                RM c = commutator(H[k], H[l]);
                if (!c.is_zero_matrix()) {
                    r.status = Status::fail;
                    r.witness = detail::matrix_witness(c);
                    r.witness["k"] = k + 1;
                    r.witness["l"] = l + 1;
                    return;
                }
            }
    });
    if (s.flavor != GaudinFlavor::weighted && o.selected("sum_zero")) rep.run("gaudin.sum_zero", P(), [&](CheckRecord& r) {
            RM sum(s.d, s.d);
            for (const auto& h : H) sum = sum + h;
            if (!sum.is_zero_matrix()) {
                r.status = Status::fail;
                r.witness = detail::matrix_witness(sum);
            }
        });
    if (s.flavor == GaudinFlavor::weighted) return rep;
    const std::size_t kmax = std::min<std::size_t>(s.m, 2);
    if (o.selected("talalaev_commute")) rep.run("gaudin.talalaev_commute", P({{"pairs", pairs.size()}, {"kmax", kmax}}), [&](CheckRecord& r) {
        for (const auto& [u, v] : pairs) {
            std::vector<RM> Qu, Qv;
            for (std::size_t k = 1; k <= kmax; ++k) {
                Qu.push_back(talalaev(s, k, u));
                Qv.push_back(talalaev(s, k, v));
            }
            for (std::size_t k = 0; k < kmax; ++k)
                for (std::size_t l = 0; l < kmax; ++l) {
                    RM c = commutator(Qu[k], Qv[l]);
                    if (!c.is_zero_matrix()) {
                        r.status = Status::fail;
                        r.witness = detail::matrix_witness(c);
                        r.witness["k"] = k + 1;
                        r.witness["l"] = l + 1;
                        r.witness["u"] = u.get_str();
                        r.witness["v"] = v.get_str();
                        return;
                    }
                }
        }
    });
    if (o.selected("residue")) rep.run("gaudin.residue", P(), [&](CheckRecord& r) {
        if (s.K < 2 || s.m < 2) {
            r.status = Status::skipped;
            r.note = "no pairs of sites";
            return;
        }
        json per = json::array();
        for (const auto& x : residue_check(s)) {
            per.push_back({{"site", x.site},
                           {"c", x.c ? x.c->get_str() : "-"},
                           {"scalar_part", x.shift ? x.shift->get_str() : "-"},
                           {"ok", x.ok}});
            if (!x.ok) r.status = Status::fail;
        }
        r.params["residues"] = per;
        if (r.status == Status::fail) r.witness = per;
    });
    return rep;
}

/// Weighted family: commutes, and H^w_k(1/u) = -u_k H_k(u) for the plain family.
inline Report verify_weighted(std::size_t m, const std::vector<Rational>& points, const Braiding* B = nullptr,
                              const GaudinOptions& o = {}) {
    Report rep;
    json params{{"m", m}, {"K", points.size()}, {"points", detail::points_json(points)}};
    if (B) params["braiding"] = B->name();
    std::vector<Rational> inv;
    for (const auto& x : points) {
        if (x == 0) throw GaudinError("weighted family needs nonzero points");
        inv.push_back(Rational(1) / x);
    }
    auto build = [&](const std::vector<Rational>& pts, GaudinFlavor f) {
        GaudinSystem s = B ? braided_sites(*B, pts.size(), pts) : classical_sites(m, pts.size(), pts);
        s.flavor = f;
        return s;
    };
    GaudinSystem w = build(points, GaudinFlavor::weighted);
    if (w.abstract) {
        rep.run("gaudin.weighted", params, [&](CheckRecord& r) {
            r.status = Status::skipped;
            r.note = w.realization;
        });
        return rep;
    }
    rep.merge(verify_gaudin(w, o));
    rep.run("gaudin.weighted_inversion", params, [&](CheckRecord& r) {
        std::vector<RM> Hw = hamiltonians(build(inv, GaudinFlavor::weighted));
        std::vector<RM> Hp = hamiltonians(build(points, B ? GaudinFlavor::braided : GaudinFlavor::classical));
        for (std::size_t k = 0; k < points.size(); ++k) {
            RM diff = Hw[k] + scale(points[k], Hp[k]);
            if (!diff.is_zero_matrix()) {
                r.status = Status::fail;
                r.witness = detail::matrix_witness(diff);
                r.witness["site"] = k + 1;
                return;
            }
        }
        r.note = "H^w_k(1/u) = -u_k H_k(u)";
    });
    return rep;
}

/// [H_k, H_l] modulo the braided site relations, k < l.
inline Report abstract_commutativity(const Braiding& B, const std::vector<Rational>& points, const GaudinOptions& o = {}) {
    Report rep;
    std::vector<Rational> pts = points;
    detail::check_points(pts, pts.size());
    RelationSet rs = gaudin_relations(B, pts.size());
    std::vector<NCP> H = abstract_hamiltonians(B, pts);
    MembershipOptions mo;
    mo.D = o.D;
    mo.symbolic = o.symbolic;
    mo.seed = o.seed;
    for (std::size_t k = 0; k < H.size(); ++k)
        for (std::size_t l = k + 1; l < H.size(); ++l)
            rep.run("gaudin.abstract_commute",
                    json{{"braiding", B.name()},
                         {"m", B.dim()},
                         {"K", pts.size()},
                         {"points", detail::points_json(pts)},
                         {"k", k + 1},
                         {"l", l + 1},
                         {"D", o.D}},
                    [&](CheckRecord& r) { record_membership(r, commutator(H[k], H[l]), rs, mo); });
    return rep;
}

}  // namespace braidcheck

#pragma once

// Quantum elementary symmetric polynomials and power sums of the braided Yangian,
// and the suites that check their identities modulo the defining relations.

#include "braidcheck/freealg.hpp"

namespace braidcheck {

/// A braided Yangian truncated at order T together with its relation set.
struct Yangian {
    Braiding B;
    int T;
    YangianCase yc;
    SeriesMatrix L;  // for the h-shifted case L = I + h L~
    std::shared_ptr<const RelationSet> rels;

    Yangian(Braiding b, int t, std::optional<YangianCase> which = std::nullopt)
        : B(std::move(b)), T(t), yc(which ? *which : (B.is_hecke() ? YangianCase::trig : YangianCase::rational)) {
        L = generating_matrix(B.dim(), T, yc == YangianCase::hshift ? Scalar::h() : Scalar(1));
        rels = std::make_shared<RelationSet>(yangian_relations(B, T, yc));
    }

    std::size_t N() const { return B.dim(); }
    bool involutive() const { return !B.is_hecke(); }

    /// Relations whose generators have index <= max(T, weight of p). Relations past T
    /// are still exact consequences of the defining system, so member verdicts stay sound.
    const RelationSet& relations_for(const NCP& p) const {
        int w = T;
        for (const auto& [word, c] : p.terms()) w = std::max(w, rels->word_weight(word));
        if (w == T) return *rels;
        auto it = wider_->find(w);
        if (it == wider_->end()) it = wider_->emplace(w, yangian_relations(B, w, yc)).first;
        return it->second;
    }

private:
    std::shared_ptr<std::map<int, RelationSet>> wider_ = std::make_shared<std::map<int, RelationSet>>();

public:

    /// Argument shift by j steps: q^{-2j} u (trig), u - j (rational), u - jh (h-shifted).
    SeriesMatrix shifted(const SeriesMatrix& X, int j) const {
        switch (yc) {
            case YangianCase::trig: return shift_trig(X, j);
            case YangianCase::rational: return shift_rational(X, Scalar(j));
            case YangianCase::hshift: return shift_rational(X, Scalar(j) * Scalar::h());
        }
        return X;
    }
    /// L_{bar k}(shifted by j) on V^{(x)n}.
    SeriesMatrix copy(std::size_t k, std::size_t n, int j) const { return shifted(overline_copy(L, B, k, n), j); }
};

namespace detail {

inline SeriesMatrix as_series(const SymSeries& s) {
    SeriesMatrix X;
    X.N = 1;
    X.n = 1;
    X.T = s.T;
    for (const auto& c : s.c) {
        PolyOp m(1, 1);
        m.set(0, 0, c);
        X.slice.push_back(std::move(m));
    }
    return X;
}

inline SymSeries from_series(const SeriesMatrix& X, std::string label) {
    SymSeries s;
    s.label = std::move(label);
    s.T = X.T;
    for (const auto& sl : X.slice) s.c.push_back(sl.get(0, 0));
    return s;
}

inline void require_rank(const Braiding& B, std::size_t k) {
    if (k < 1) throw std::invalid_argument("symmetric polynomial index must be >= 1");
    if (static_cast<int>(k) > B.bi_rank())
        throw std::domain_error("k = " + std::to_string(k) + " exceeds the bi-rank " + std::to_string(B.bi_rank()) +
                                ": A^(k) = 0 and the series vanishes");
}

}  // namespace detail

inline SymSeries sym_shift(const Yangian& Y, const SymSeries& s, int j) {
    return detail::from_series(Y.shifted(detail::as_series(s), j), s.label);
}

inline SymSeries sym_one(int T) {
    SymSeries s;
    s.label = "e_0";
    s.T = T;
    s.c.assign(static_cast<std::size_t>(T) + 1, NCP());
    s.c[0] = NCP(1);
    return s;
}

/// Ordered product L_{bar 1}(shift s_1) ... L_{bar n}(shift s_n) on V^{(x)n}.
inline SeriesMatrix copy_chain(const Yangian& Y, const std::vector<int>& shifts, std::size_t n) {
    SeriesMatrix X = Y.copy(1, n, shifts.at(0));
    for (std::size_t k = 2; k <= shifts.size(); ++k) X = X * Y.copy(k, n, shifts[k - 1]);
    return X;
}

inline std::vector<int> ascending_shifts(std::size_t k) {
    std::vector<int> s(k);
    std::iota(s.begin(), s.end(), 0);
    return s;
}

/// e_k(u) = Tr_{R(1..k)} A^(k) L_{bar 1}(u) L_{bar 2}(shift 1) ... L_{bar k}(shift k-1).
inline SymSeries elementary_sym(const Yangian& Y, std::size_t k) {
    detail::require_rank(Y.B, k);
    SeriesMatrix X = lmul(Y.B.symmetrizer(k), copy_chain(Y, ascending_shifts(k), k));
    return r_trace_full(X, Y.B.c(), "e_" + std::to_string(k));
}

/// p_k(u) = Tr_{R(1..k)} L_{bar 1}(shift k-1) ... L_{bar k}(u) R_{k-1} ... R_1.
inline SymSeries power_sum(const Yangian& Y, std::size_t k) {
    if (k < 1) throw std::invalid_argument("power sum index must be >= 1");
    std::vector<int> s(k);
    for (std::size_t i = 0; i < k; ++i) s[i] = static_cast<int>(k - 1 - i);
    Op chain = Op::identity(ipow(Y.N(), k));
    for (std::size_t j = k - 1; j >= 1; --j) chain = chain * Y.B.at(j, k);
    SeriesMatrix X = rmul(copy_chain(Y, s, k), chain);
    return r_trace_full(X, Y.B.c(), "p_" + std::to_string(k));
}

/// k_q e_k(u) + sum_{i=1..k} (-1)^i q^{k-i} p_i(shift k-i) e_{k-i}(u); q = 1 for involutive B.
inline SymSeries newton_combination(const Yangian& Y, std::size_t k) {
    const bool inv = Y.involutive();
    SymSeries acc = qint(static_cast<int>(k), inv) * elementary_sym(Y, k);
    for (std::size_t i = 1; i <= k; ++i) {
        SymSeries e = i == k ? sym_one(Y.T) : elementary_sym(Y, k - i);
        SymSeries p = sym_shift(Y, power_sum(Y, i), static_cast<int>(k - i));
        Scalar c = (i % 2 ? Scalar(-1) : Scalar(1)) * (inv ? Scalar(1) : Scalar::power(static_cast<int>(k - i)));
        acc = acc + c * (p * e);
    }
    acc.label = "newton_" + std::to_string(k);
    return acc;
}

/// I_{1..k} (x) Tr_{R(k+1..k+p)} A^(p)_{k+1..k+p} L_{bar k+1}(u) ... L_{bar k+p}(shift p-1), minus I (x) e_p(u).
inline SeriesMatrix shift_lemma_residual(const Yangian& Y, std::size_t k, std::size_t p) {
    detail::require_rank(Y.B, p);
    const std::size_t n = k + p, N = Y.N();
    SeriesMatrix X = Y.copy(k + 1, n, 0);
    for (std::size_t j = 2; j <= p; ++j) X = X * Y.copy(k + j, n, static_cast<int>(j - 1));
    X = lmul(kron(Op::identity(ipow(N, k)), Y.B.symmetrizer(p)), X);
    SeriesMatrix lhs = r_trace(X, Y.B.c(), k + 1);
    SymSeries e = elementary_sym(Y, p);
    const std::size_t d = ipow(N, k);
    for (int a = 0; a <= lhs.T; ++a)
        lhs.slice[static_cast<std::size_t>(a)] = lhs.slice[static_cast<std::size_t>(a)] - PolyOp::identity(d, e[a]);
    return lhs;
}

/// A^(k) L_{bar 1}(u) ... L_{bar k}(shift k-1) - L_{bar 1}(shift k-1) ... L_{bar k}(u) A^(k).
inline SeriesMatrix al_chain_residual(const Yangian& Y, std::size_t k) {
    detail::require_rank(Y.B, k);
    std::vector<int> down(k);
    for (std::size_t i = 0; i < k; ++i) down[i] = static_cast<int>(k - 1 - i);
    const Op& A = Y.B.symmetrizer(k);
    SeriesMatrix lhs = lmul(A, copy_chain(Y, ascending_shifts(k), k));
    SeriesMatrix rhs = rmul(copy_chain(Y, down, k), A);
    for (int a = 0; a <= lhs.T; ++a)
        lhs.slice[static_cast<std::size_t>(a)] = lhs.slice[static_cast<std::size_t>(a)] - rhs.slice[static_cast<std::size_t>(a)];
    return lhs;
}

/// ê_k(u) = Tr_{R(1..m)} A^(m) L_{bar 1}(u) L_{bar 2}(u-h) ... L_{bar k}(u-h(k-1)) on V^{(x)m}.
/// With `top` false the A^(k) variant on V^{(x)k} is built instead. ê_0 = Tr_R A^(m).
inline SymSeries shifted_elementary(const Yangian& Y, std::size_t k, bool top = true) {
    if (Y.yc != YangianCase::hshift) throw std::invalid_argument("shifted elementary polynomials live in the h-shifted Yangian");
    const std::size_t m = static_cast<std::size_t>(Y.B.bi_rank());
    if (k > m) throw std::domain_error("k exceeds the bi-rank");
    const std::size_t n = top ? m : k;
    SymSeries s;
    s.label = "ê_" + std::to_string(k);
    if (k == 0 || n == 0) {
        s = sym_one(Y.T);
        s.label = "ê_0";
        if (top) s.c[0] = NCP(r_trace_full(Y.B.symmetrizer(m), Y.B.c(), Y.N()));
        return s;
    }
    SeriesMatrix X = copy_chain(Y, ascending_shifts(k), n);
    X = lmul(Y.B.symmetrizer(n), X);
    s = r_trace_full(X, Y.B.c(), s.label);
    return s;
}

/// τ_k = sum_p (-1)^{k-p} C(k,p) ê_p.
inline SymSeries tau_combination(const std::vector<SymSeries>& ehat, std::size_t k) {
    if (ehat.size() <= k) throw std::invalid_argument("tau_k needs ê_0 .. ê_k");
    SymSeries acc = sym_one(ehat[0].T);
    for (auto& c : acc.c) c = NCP();
    Rational binom = 1;
    for (std::size_t p = 0; p <= k; ++p) {
        Scalar sign = (k - p) % 2 ? Scalar(-1) : Scalar(1);
        acc = acc + (sign * Scalar(binom)) * ehat[p];
        binom = binom * static_cast<long>(k - p) / static_cast<long>(p + 1);
    }
    acc.label = "tau_" + std::to_string(k);
    return acc;
}

/// Coefficient of h^j in every term (coefficients must be polynomial in h).
inline NCP h_slice(const NCP& p, int j) {
    NCP out;
    for (const auto& [w, c] : p.terms()) {
        if (!c.is_laurent() || c.exponent() < 0) throw std::domain_error("coefficient is not polynomial in h");
        Rational v = c.numerator().coeff(j - c.exponent());
        out.add_term(w, Scalar(v));
    }
    return out;
}

inline int h_degree(const NCP& p) {
    int d = -1;
    for (const auto& [w, c] : p.terms()) d = std::max(d, c.exponent() + c.numerator().degree());
    return d;
}

// ---------------------------------------------------------------------------
// Suites

struct SymOptions {
    int D = 4;
    bool symbolic = true;
    std::size_t sample_points = 3;
    std::uint64_t seed = 1;

    MembershipOptions membership(int D_override = -1) const {
        MembershipOptions o;
        o.D = D_override > 0 ? D_override : D;
        o.symbolic = symbolic;
        o.sample_points = sample_points;
        o.seed = seed;
        return o;
    }
};

namespace detail {

inline json yangian_params(const Yangian& Y) {
    return json{{"braiding", Y.B.name()}, {"N", Y.N()}, {"case", to_string(Y.yc)}, {"T", Y.T}};
}

inline json with(json base, const json& extra) {
    for (auto& [k, v] : extra.items()) base[k] = v;
    return base;
}

}  // namespace detail

/// Newton identities, one record per (k, u-order). k = 1 must vanish identically.
inline Report verify_newton(const Yangian& Y, std::size_t kmax, const SymOptions& o = {}) {
    Report rep;
    for (std::size_t k = 1; k <= kmax; ++k) {
        std::optional<SymSeries> nc;
        try {
            nc = newton_combination(Y, k);
        } catch (const std::exception& e) {
            CheckRecord r;
            r.id = "newton";
            r.params = detail::with(detail::yangian_params(Y), {{"k", k}});
            r.status = Status::fail;
            r.witness = {{"exception", e.what()}};
            rep.add(std::move(r));
            continue;
        }
        for (int a = 0; a <= Y.T; ++a)
            rep.run("newton", detail::with(detail::yangian_params(Y), {{"k", k}, {"order", a}, {"D", o.D}}),
                    [&](CheckRecord& r) {
                        const NCP& p = (*nc)[a];
                        if (k == 1) {
                            r.note = "quotient-free";
                            if (!p.is_zero()) {
                                r.status = Status::fail;
                                r.witness = {{"element", to_string(p, Y.N())}};
                            }
                            return;
                        }
                        record_membership(r, p, Y.relations_for(p), o.membership());
                    });
    }
    return rep;
}

/// [e_k(u), e_p(v)] at every bidegree (a, b), 1 <= a, b <= T.
inline Report verify_bethe_commutativity(const Yangian& Y, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                         const SymOptions& o = {}) {
    Report rep;
    std::map<std::size_t, SymSeries> e;
    for (auto [k, p] : pairs)
        for (std::size_t x : {k, p})
            if (!e.count(x)) e.emplace(x, elementary_sym(Y, x));
    for (auto [k, p] : pairs)
        for (int a = 1; a <= Y.T; ++a)
            for (int b = 1; b <= Y.T; ++b)
                rep.run("bethe", detail::with(detail::yangian_params(Y), {{"k", k}, {"p", p}, {"bidegree", {a, b}}, {"D", o.D}}),
                        [&](CheckRecord& r) {
                            NCP c = commutator(e.at(k)[a], e.at(p)[b]);
                            record_membership(r, c, Y.relations_for(c), o.membership());
                        });
    return rep;
}

/// [e_m(u), l_i^j[b]] for every generator and every order a of e_m.
inline Report verify_qdet_central(const Yangian& Y, const SymOptions& o = {}) {
    Report rep;
    const std::size_t m = static_cast<std::size_t>(Y.B.bi_rank()), N = Y.N();
    SymSeries em = elementary_sym(Y, m);
    for (int b = 1; b <= Y.T; ++b)
        for (std::size_t i = 1; i <= N; ++i)
            for (std::size_t j = 1; j <= N; ++j) {
                const Gen g = generator_id(N, static_cast<std::size_t>(b), i, j);
                rep.run("qdet", detail::with(detail::yangian_params(Y), {{"m", m}, {"generator", generator_name(g, N)}, {"D", o.D}}),
                        [&](CheckRecord& r) {
                            bool all = true;
                            json per = json::array();
                            for (int a = 0; a <= Y.T; ++a) {
                                CheckRecord sub;
                                NCP c = commutator(em[a], NCP::generator(g));
                                record_membership(sub, c, Y.relations_for(c), o.membership());
                                per.push_back({{"order", a}, {"status", to_string(sub.status)}, {"note", sub.note}});
                                if (!sub.certificate.is_null()) r.certificate[std::to_string(a)] = sub.certificate;
                                if (sub.status != Status::pass) {
                                    all = false;
                                    r.witness = sub.witness;
                                }
                            }
                            r.params["orders"] = per;
                            if (!all) r.status = Status::inconclusive;
                        });
            }
    return rep;
}

/// Shift lemma: exact equality in the free algebra, one record per (k, p).
inline Report verify_shift_lemma(const Yangian& Y, std::size_t kmax, std::size_t pmax) {
    Report rep;
    for (std::size_t k = 0; k <= kmax; ++k)
        for (std::size_t p = 1; p <= pmax; ++p)
            rep.run("shiftlemma", detail::with(detail::yangian_params(Y), {{"k", k}, {"p", p}}), [&](CheckRecord& r) {
                SeriesMatrix res = shift_lemma_residual(Y, k, p);
                for (int a = 0; a <= res.T; ++a)
                    if (auto nz = res.slice[static_cast<std::size_t>(a)].first_nonzero()) {
                        r.status = Status::fail;
                        r.witness = {{"order", a},
                                     {"row", nz->first},
                                     {"col", nz->second},
                                     {"value", to_string(res.slice[static_cast<std::size_t>(a)].get(nz->first, nz->second), Y.N())}};
                        return;
                    }
            });
    return rep;
}

/// A^(k) L-chain = reversed L-chain A^(k), entrywise modulo the relations.
inline Report verify_AL_chain(const Yangian& Y, std::size_t kmax, const SymOptions& o = {}) {
    Report rep;
    for (std::size_t k = 1; k <= kmax; ++k) {
        SeriesMatrix res = al_chain_residual(Y, k);
        for (int a = 0; a <= res.T; ++a)
            rep.run("alchain", detail::with(detail::yangian_params(Y), {{"k", k}, {"order", a}, {"D", o.D}}), [&](CheckRecord& r) {
                const PolyOp& s = res.slice[static_cast<std::size_t>(a)];
                std::size_t entries = 0;
                for (std::size_t row = 0; row < s.rows(); ++row)
                    for (const auto& [col, p] : s.row(row)) {
                        ++entries;
                        CheckRecord sub;
                        record_membership(sub, p, Y.relations_for(p), o.membership());
                        if (sub.status != Status::pass) {
                            r.status = sub.status;
                            r.witness = sub.witness;
                            r.witness["entry"] = multi_index(row, Y.N(), k) + multi_index(col, Y.N(), k);
                            r.note = sub.note;
                            return;
                        }
                        if (!sub.certificate.is_null())
                            r.certificate[multi_index(row, Y.N(), k) + multi_index(col, Y.N(), k)] = sub.certificate;
                    }
                r.params["nonzero_entries"] = entries;
                r.note = entries ? "every entry is a member" : "identically zero";
            });
    }
    return rep;
}

/// Multiplier c_k with ê_k(h=1) = c_k e_k, computed from the order-0 terms and checked at every order.
struct MultiplierResult {
    std::optional<Rational> c;
    bool exact = false;       // holds identically in the free algebra
    bool modulo_ideal = false;  // holds modulo the relations
    std::string note;
};

inline MultiplierResult multiplier(const Yangian& H, const Yangian& R, std::size_t k, bool top = true,
                                   const SymOptions& o = {}) {
    MultiplierResult res;
    SymSeries eh = shifted_elementary(H, k, top);
    SymSeries e = elementary_sym(R, k);
    auto at1 = [](const NCP& p) { return p.map_coeffs([](const Scalar& s) { return Scalar(s.eval(Rational(1))); }); };
    const NCP e0 = at1(eh[0]);
    if (e0.is_zero() || e[0].is_zero()) {
        res.note = "order-0 term vanishes";
        return res;
    }
    Rational c = e0.terms().begin()->second.to_rational() / e[0].terms().begin()->second.to_rational();
    res.c = c;
    res.exact = true;
    res.modulo_ideal = true;
    const int T = std::min(H.T, R.T);
    for (int a = 1; a <= T; ++a) {
        NCP d = at1(eh[a]) - Scalar(c) * e[a];
        if (d.is_zero()) continue;
        res.exact = false;
        if (ideal_member(d, R.relations_for(d), o.membership()).verdict != Verdict::member) {
            res.modulo_ideal = false;
            res.note = "order " + std::to_string(a) + " differs from c e_k by a non-derivable element";
            return res;
        }
    }
    return res;
}

/// τ_k coefficients up to u-order T+1 split by powers of h; slices below h^k must reduce to ideal members.
inline Report verify_tau_order(const Braiding& B, int T, std::size_t kmax, const SymOptions& o = {}, bool top = true) {
    Report rep;
    // the h^k term of order-a coefficient needs one order beyond T
    Yangian H(B, T + 1, YangianCase::hshift);
    std::vector<SymSeries> eh;
    for (std::size_t p = 0; p <= kmax; ++p) eh.push_back(shifted_elementary(H, p, top));
    for (std::size_t k = 1; k <= kmax; ++k) {
        SymSeries tau = tau_combination(eh, k);
        for (int a = 0; a <= H.T; ++a) {
            const NCP& c = tau[a];
            const int hd = h_degree(c);
            for (int j = 0; j <= std::max(hd, static_cast<int>(k)); ++j)
                rep.run("tau", detail::with(detail::yangian_params(H), {{"T", T}, {"u_orders", H.T}, {"k", k}, {"order", a}, {"h_power", j}, {"symmetrizer", top ? "A^(m)" : "A^(k)"}}),
                        [&](CheckRecord& r) {
                            NCP s = h_slice(c, j);
                            if (j < static_cast<int>(k)) {
                                record_membership(r, s, H.relations_for(s), o.membership());
                                return;
                            }
                            r.params["nonzero"] = !s.is_zero();
                            r.note = s.is_zero() ? "vanishes" : to_string(s, B.dim());
                        });
        }
    }
    return rep;
}

}  // namespace braidcheck

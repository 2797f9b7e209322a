#pragma once

// Braiding files and the battery of pure R-matrix identities.

#include "braidcheck/braiding.hpp"
#include "braidcheck/report.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace braidcheck {

class BraidingFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A braiding file before any algebraic verification.
struct BraidingSource {
    std::string name;
    std::size_t N = 0;
    Op R;
    std::optional<BraidingKind> kind;
};

/// Parse a braiding file:
///   { "name", "dim", "kind": "hecke"|"involutive"|"auto", "entries": [{ "row", "col", "value" }] }
inline BraidingSource parse_braiding_source(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw BraidingFileError(std::string("JSON parse error at byte ") + std::to_string(e.byte) + ": " + e.what());
    }
    auto need = [&](const char* key) -> const json& {
        if (!doc.is_object() || !doc.contains(key)) throw BraidingFileError(std::string("missing field '") + key + "'");
        return doc[key];
    };
    const json& jdim = need("dim");
    if (!jdim.is_number_integer() || jdim.get<long>() < 1) throw BraidingFileError("'dim' must be a positive integer");
    const std::size_t N = jdim.get<std::size_t>();
    std::string name = doc.value("name", std::string("unnamed"));
    std::optional<BraidingKind> kind;
    std::string k = doc.value("kind", std::string("auto"));
    if (k == "hecke")
        kind = BraidingKind::hecke;
    else if (k == "involutive")
        kind = BraidingKind::involutive;
    else if (k != "auto")
        throw BraidingFileError("'kind' must be hecke, involutive or auto");
    const json& entries = need("entries");
    if (!entries.is_array()) throw BraidingFileError("'entries' must be an array");
    Op R(N * N, N * N);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t e = 0; e < entries.size(); ++e) {
        const json& en = entries[e];
        const std::string where = "entry " + std::to_string(e);
        if (!en.is_object() || !en.contains("row") || !en.contains("col") || !en.contains("value"))
            throw BraidingFileError(where + ": needs row, col and value");
        if (!en["row"].is_number_integer() || !en["col"].is_number_integer())
            throw BraidingFileError(where + ": row and col must be integers");
        long r = en["row"].get<long>(), c = en["col"].get<long>();
        if (r < 0 || c < 0 || static_cast<std::size_t>(r) >= N * N || static_cast<std::size_t>(c) >= N * N)
            throw BraidingFileError(where + ": index out of range [0, N^2)");
        if (!seen.insert({r, c}).second) throw BraidingFileError(where + ": duplicate position");
        Scalar v;
        if (en["value"].is_number_integer()) {
            v = Scalar(en["value"].get<long>());
        } else if (en["value"].is_string()) {
            try {
                v = parse_scalar(en["value"].get<std::string>());
            } catch (const ParseError& pe) {
                throw ParseError(where + " value: " + pe.what(), pe.position());
            }
        } else {
            throw BraidingFileError(where + ": value must be an expression string or integer");
        }
        R.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c), v);
    }
    return BraidingSource{name, N, std::move(R), kind};
}

/// Parse and verify a braiding from its JSON text.
inline Braiding load_braiding(const std::string& text) {
    BraidingSource src = parse_braiding_source(text);
    return Braiding(src.name, src.N, std::move(src.R), src.kind);
}

inline Braiding load_braiding_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BraidingFileError("cannot open braiding file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_braiding(ss.str());
}

/// Serialize in the file format (round-trips through load_braiding).
inline json braiding_to_json(const Braiding& B) {
    json entries = json::array();
    const Op& R = B.matrix();
    for (std::size_t r = 0; r < R.rows(); ++r)
        for (const auto& [c, v] : R.row(r)) entries.push_back({{"row", r}, {"col", c}, {"value", v.to_string()}});
    return {{"name", B.name()}, {"dim", B.dim()}, {"kind", to_string(B.kind())}, {"entries", entries}};
}

/// First nonzero entry of a residual, in multi-index form.
template <class T>
json residual_witness(const Matrix<T>& res, std::size_t N) {
    auto nz = res.first_nonzero();
    if (!nz) return nullptr;
    std::size_t n = spaces_of(res, N);
    std::ostringstream v;
    v << res.get(nz->first, nz->second);
    return {{"row", multi_index(nz->first, N, n)}, {"col", multi_index(nz->second, N, n)}, {"value", v.str()}};
}

// ---------------------------------------------------------------------------
// Closed forms of the skew-symmetrizers as products of chains

enum class ClosedForm { ascending, descending, ascending_minus, descending_minus, descending_minus_printed };

inline const char* to_string(ClosedForm f) {
    switch (f) {
        case ClosedForm::ascending: return "chains R_{1->s}(q^2)";
        case ClosedForm::descending: return "chains R_{k-1->s}(q^2)";
        case ClosedForm::ascending_minus: return "R_1(q^2) chains R_{s->1}(q^2s)^-";
        case ClosedForm::descending_minus: return "R_{k-1}(q^2) chains R_{k-s->k-1}(q^2s)^-";
        case ClosedForm::descending_minus_printed: return "R_{k-1}(q^2) ... R_{k-1->1}(q^2(k-1))^- (as printed)";
    }
    return "?";
}

/// A^(k) on V^{(x)k} from the chain product forms; k >= 2.
inline Op symmetrizer_closed_form(const Braiding& B, std::size_t k, ClosedForm f) {
    if (!B.is_hecke()) throw std::invalid_argument("closed forms are stated for Hecke symmetries");
    if (k < 2) throw std::invalid_argument("closed forms need k >= 2");
    const int K = static_cast<int>(k);
    Scalar pref = ((K * (K - 1) / 2) % 2 ? Scalar(-1) : Scalar(1)) / qfactorial(K);
    Op out = Op::identity(ipow(B.dim(), k));
    auto times = [&](int i, int j, int sign, const Scalar& x) { out = out * chain(B, {i, j, sign, false}, x, k); };
    const Scalar q2 = Scalar::power(2);
    for (int s = 1; s <= K - 1; ++s) {
        switch (f) {
            case ClosedForm::ascending: times(1, K - s, +1, q2); break;
            case ClosedForm::descending: times(K - 1, s, +1, q2); break;
            case ClosedForm::ascending_minus: times(s, 1, -1, Scalar::power(2 * s)); break;
            case ClosedForm::descending_minus: times(K - s, K - 1, -1, Scalar::power(2 * s)); break;
            case ClosedForm::descending_minus_printed:
                if (s == K - 1)
                    times(K - 1, 1, -1, Scalar::power(2 * s));
                else
                    times(K - s, K - 1, -1, Scalar::power(2 * s));
                break;
        }
    }
    return scale(pref, out);
}

// ---------------------------------------------------------------------------
// Chain/symmetrizer commutation relations on V^{(x)(k+1)}; each returns lhs - rhs.

inline Op chain_lemma_residual(const Braiding& B, int relation, std::size_t k, const Scalar& u) {
    const std::size_t n = k + 1;
    const int K = static_cast<int>(k);
    const Op Ak = B.symmetrizer(k);
    const Op A1 = embed(Ak, B.dim(), 1, n), A2 = embed(Ak, B.dim(), 2, n);
    const Scalar us = u * Scalar::power(-2 * (K - 1));
    switch (relation) {
        case 1: return chain(B, {1, K, +1, false}, us, n) * A1 - A2 * chain(B, {1, K, -1, false}, u, n);
        case 2: return chain(B, {1, K, -1, true}, u, n) * A1 - A2 * chain(B, {1, K, +1, true}, us, n);
        case 3: return A1 * chain(B, {K, 1, -1, false}, u, n) - chain(B, {K, 1, +1, false}, us, n) * A2;
        case 4: return A1 * chain(B, {K, 1, +1, true}, us, n) - chain(B, {K, 1, -1, true}, u, n) * A2;
        default: throw std::invalid_argument("chain lemma relation must be 1..4");
    }
}

/// [R_{1->k}(u)]+ [R_{1->k-1}(q^2)]+ - [R_{2->k}(q^2)]+ [R_{1->k-1}(q^2 u)]+ R_k(u), k >= 2.
inline Op chain_permutation_residual(const Braiding& B, std::size_t k, const Scalar& u) {
    const std::size_t n = k + 1;
    const int K = static_cast<int>(k);
    const Scalar q2 = Scalar::power(2);
    Op lhs = chain(B, {1, K, +1, false}, u, n) * chain(B, {1, K - 1, +1, false}, q2, n);
    Op rhs = chain(B, {2, K, +1, false}, q2, n) * chain(B, {1, K - 1, +1, false}, q2 * u, n) *
             chain(B, {K, K, +1, false}, u, n);
    return lhs - rhs;
}

// ---------------------------------------------------------------------------

struct RMatrixOptions {
    std::set<std::string> selection;  // empty = everything applicable
    std::size_t ybe_triples = 20;
    std::size_t u_points = 10;
    std::size_t closed_form_kmax = 4;
    std::size_t chain_kmax = 3;
    std::size_t random_trials = 25;
    std::uint64_t seed = 1;
};

inline const std::vector<std::string>& rmatrix_identity_ids() {
    static const std::vector<std::string> ids{
        "braid",         "kind",       "c_matrix",         "birank",        "idempotency", "ybe",
        "inversion",     "cyclic",     "trace_shift",      "closed_forms",  "chain_inverse",
        "chain_permute", "chain_lemma"};
    return ids;
}

namespace detail {

inline Op random_scalar_op(std::size_t dim, std::mt19937_64& rng, int density_pct = 40) {
    std::uniform_int_distribution<int> coin(0, 99), val(-3, 3);
    Op X(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            if (coin(rng) < density_pct) X.set(r, c, Scalar(val(rng)));
    return X;
}

/// Random polynomial in R_1..R_{k-1} on V^{(x)k}: a sum of short words with small coefficients.
inline Op random_braid_polynomial(const Braiding& B, std::size_t k, std::mt19937_64& rng) {
    const std::size_t dim = ipow(B.dim(), k);
    std::uniform_int_distribution<int> terms(1, 3), len(0, 3), pos(1, static_cast<int>(k) - 1), coef(-3, 3), inv(0, 3);
    Op f(dim, dim);
    for (int t = terms(rng); t > 0; --t) {
        Op w = Op::identity(dim);
        for (int l = len(rng); l > 0; --l) w = w * B.at(static_cast<std::size_t>(pos(rng)), k, inv(rng) == 0 ? -1 : 1);
        f = f + scale(Scalar(coef(rng)), w);
    }
    return f;
}

/// u-points avoiding 0 and +-1; enough of them to pin down an identity between
/// rational functions of u of the given degree.
inline SamplePlan u_plan(int degree, std::size_t wanted, std::uint64_t seed) {
    int count = std::max(static_cast<int>(wanted), degree + 1);
    return make_sample_plan(degree, count, seed, {Poly{-1, 1}, Poly{1, 1}});
}

}  // namespace detail

/// Verify the pure R-matrix identities for B; failures become report entries.
inline Report verify_rmatrix_identities(const Braiding& B, const RMatrixOptions& opt = {}) {
    Report rep;
    const std::size_t N = B.dim();
    auto selected = [&](const std::string& id) { return opt.selection.empty() || opt.selection.count(id); };
    const json base{{"braiding", B.name()}, {"N", N}, {"kind", to_string(B.kind())}};
    auto params = [&](json extra = json::object()) {
        json p = base;
        for (auto& [k, v] : extra.items()) p[k] = v;
        return p;
    };
    auto hecke_only = [&](CheckRecord& r) {
        if (B.is_hecke()) return false;
        r.status = Status::skipped;
        r.note = "stated for Hecke symmetries only";
        return true;
    };

    if (selected("braid"))
        rep.run("braid", params(), [&](CheckRecord& r) {
            Op res = braid_residual(B.matrix(), N);
            if (!res.is_zero_matrix()) {
                r.status = Status::fail;
                r.witness = residual_witness(res, N);
            }
        });
    if (selected("kind"))
        rep.run("kind", params(), [&](CheckRecord& r) {
            Op res = B.is_hecke() ? hecke_residual(B.matrix()) : involutive_residual(B.matrix());
            r.note = B.is_hecke() ? "(R - qI)(R + q^-1 I) = 0" : "R^2 = I";
            if (!res.is_zero_matrix()) {
                r.status = Status::fail;
                r.witness = residual_witness(res, N);
            }
        });
    if (selected("c_matrix"))
        rep.run("c_matrix", params(), [&](CheckRecord& r) {
            // c() verifies the three defining properties; re-check them independently here
            const Op& C = B.c();
            Op t(N, N);
            const Op& R = B.matrix();
            for (std::size_t i1 = 0; i1 < N; ++i1)
                for (std::size_t j1 = 0; j1 < N; ++j1) {
                    Scalar acc;
                    for (std::size_t i2 = 0; i2 < N; ++i2)
                        for (std::size_t k = 0; k < N; ++k) acc += R.get(i1 * N + i2, j1 * N + k) * C.get(k, i2);
                    t.set(i1, j1, acc);
                }
            bool p1 = t == Op::identity(N);
            bool p2 = true;
            for (std::size_t k = 1; k <= 2; ++k) {
                Op CC = embed(kron(C, C), N, k, 3);
                p2 = p2 && B.at(k, 3) * CC == CC * B.at(k, 3);
            }
            const int m = B.bi_rank();
            Scalar expect = B.is_hecke() ? qint(m) * Scalar::power(-m) : Scalar(m);
            bool p3 = trace(C) == expect;
            r.params["trace"] = trace(C).to_string();
            r.params["m"] = m;
            if (!(p1 && p2 && p3)) {
                r.status = Status::fail;
                r.witness = {{"partial_trace", p1}, {"commutes", p2}, {"trace_value", p3}};
            }
        });
    if (selected("birank"))
        rep.run("birank", params(), [&](CheckRecord& r) {
            const int m = B.bi_rank();
            r.params["m"] = m;
            Op Am = B.symmetrizer(static_cast<std::size_t>(m)), An = B.symmetrizer(static_cast<std::size_t>(m) + 1);
            std::size_t rk = rank(Am);
            if (Am.is_zero_matrix() || !An.is_zero_matrix() || rk != 1) {
                r.status = Status::fail;
                r.witness = {{"rank_A_m", rk}, {"A_m_plus_1_zero", An.is_zero_matrix()}};
            }
        });
    if (selected("idempotency"))
        rep.run("idempotency", params(), [&](CheckRecord& r) {
            const int m = B.bi_rank();
            r.params["kmax"] = m;
            for (std::size_t k = 1; k <= static_cast<std::size_t>(m); ++k) {
                Op A = B.symmetrizer(k);
                Op res = A * A - A;
                if (!res.is_zero_matrix()) {
                    r.status = Status::fail;
                    r.witness = residual_witness(res, N);
                    r.witness["k"] = k;
                    return;
                }
            }
        });
    if (selected("ybe"))
        rep.run("ybe", params({{"triples", opt.ybe_triples}}), [&](CheckRecord& r) {
            std::mt19937_64 rng(opt.seed);
            std::uniform_int_distribution<int> a(-9, 9), b(1, 4);
            std::size_t done = 0;
            while (done < opt.ybe_triples) {
                Rational u(a(rng), b(rng)), v(a(rng), b(rng)), w(a(rng), b(rng));
                u.canonicalize();
                v.canonicalize();
                w.canonicalize();
                auto bad = [&](const Rational& x, const Rational& y) { return B.is_hecke() ? (x == y || is_zero(y)) : x == y; };
                if (bad(u, v) || bad(u, w) || bad(v, w)) continue;
                auto Rk = [&](std::size_t k, const Rational& x, const Rational& y) {
                    return embed(current_rmatrix(B, Scalar(x), Scalar(y)), N, k, 3);
                };
                Op res = Rk(1, u, v) * Rk(2, u, w) * Rk(1, v, w) - Rk(2, v, w) * Rk(1, u, w) * Rk(2, u, v);
                if (!res.is_zero_matrix()) {
                    r.status = Status::fail;
                    r.witness = residual_witness(res, N);
                    r.witness["u"] = u.get_str();
                    r.witness["v"] = v.get_str();
                    r.witness["w"] = w.get_str();
                    return;
                }
                ++done;
            }
        });
    if (selected("inversion"))
        rep.run("inversion", params(), [&](CheckRecord& r) {
            // R(x) R^{-1}(x) = I at sampled x; the product has degree <= 4 in x after clearing denominators
            auto plan = detail::u_plan(4, 5, opt.seed);
            const Op I = Op::identity(N * N);
            if (!B.is_hecke()) {
                r.note = "R^-1(x) = x^2/(x^2-1) R(-x)";
                for (const auto& x : plan.points) {
                    Scalar X(x);
                    Op res = baxterize(B, X) * scale(X * X / (X * X - Scalar(1)), baxterize(B, -X)) - I;
                    if (!res.is_zero_matrix()) {
                        r.status = Status::fail;
                        r.witness = residual_witness(res, N);
                        r.witness["x"] = x.get_str();
                        return;
                    }
                }
                return;
            }
            const Scalar lam = qlambda();
            auto holds = [&](bool negated) {
                for (const auto& x : plan.points) {
                    Scalar X(x), xm1 = X - Scalar(1);
                    Scalar arg = negated ? -X.inverse() : X.inverse();
                    Op cand = scale(xm1 * xm1 / (xm1 * xm1 - lam * lam * X), baxterize(B, arg));
                    if (!(baxterize(B, X) * cand == I)) return false;
                }
                return true;
            };
            bool plain = holds(false), negated = holds(true);
            r.params["variant R(1/x)"] = plain ? "holds" : "fails";
            r.params["variant R(-1/x)"] = negated ? "holds" : "fails";
            r.note = plain ? "R^-1(x) = (x-1)^2/((x-1)^2 - lambda^2 x) R(1/x) holds" : "";
            if (negated) r.note += std::string(r.note.empty() ? "" : "; ") + "the R(-1/x) variant also holds";
            else r.note += "; the R(-1/x) variant does not";
            if (!plain && !negated) {
                r.status = Status::fail;
                r.witness = {{"reason", "neither inversion variant holds"}};
            }
        });
    if (selected("cyclic"))
        rep.run("cyclic", params({{"k", 3}, {"trials", opt.random_trials}}), [&](CheckRecord& r) {
            std::mt19937_64 rng(opt.seed + 11);
            const Op& C = B.c();
            for (std::size_t t = 0; t < opt.random_trials; ++t) {
                Op f = detail::random_braid_polynomial(B, 3, rng);
                Op X = detail::random_scalar_op(ipow(N, 3), rng, 20);
                Scalar lhs = r_trace_full(f * X, C, N), rhs = r_trace_full(X * f, C, N);
                if (lhs != rhs) {
                    r.status = Status::fail;
                    r.witness = {{"trial", t}, {"lhs", lhs.to_string()}, {"rhs", rhs.to_string()}};
                    return;
                }
            }
        });
    if (selected("trace_shift"))
        rep.run("trace_shift", params({{"k", {1, 2}}, {"trials", opt.random_trials}}), [&](CheckRecord& r) {
            std::mt19937_64 rng(opt.seed + 17);
            const Op& C = B.c();
            for (std::size_t k = 1; k <= 2; ++k)
                for (int sgn : {+1, -1})
                    for (std::size_t t = 0; t < std::max<std::size_t>(1, opt.random_trials / 5); ++t) {
                        Op X = detail::random_scalar_op(ipow(N, k), rng, 50);
                        Op Xe = embed(X, N, 1, k + 1);
                        Op conj = B.at(k, k + 1, sgn) * Xe * B.at(k, k + 1, -sgn);
                        Op lhs = r_trace(conj, C, N, k + 1);
                        Op rhs = kron(r_trace(X, C, N, k), Op::identity(N));
                        if (lhs != rhs) {
                            r.status = Status::fail;
                            r.witness = residual_witness(lhs - rhs, N);
                            r.witness["k"] = k;
                            r.witness["sign"] = sgn;
                            return;
                        }
                    }
        });
    if (selected("closed_forms"))
        rep.run("closed_forms", params({{"kmax", opt.closed_form_kmax}}), [&](CheckRecord& r) {
            if (hecke_only(r)) return;
            json forms = json::object();
            bool printed_ok = true, pattern_ok = true;
            for (std::size_t k = 2; k <= opt.closed_form_kmax; ++k) {
                Op A = B.symmetrizer(k);
                for (ClosedForm f : {ClosedForm::ascending, ClosedForm::descending, ClosedForm::ascending_minus,
                                     ClosedForm::descending_minus, ClosedForm::descending_minus_printed}) {
                    bool eq = symmetrizer_closed_form(B, k, f) == A;
                    forms[std::string(to_string(f)) + " k=" + std::to_string(k)] = eq;
                    if (f == ClosedForm::descending_minus_printed)
                        printed_ok = printed_ok && eq;
                    else
                        pattern_ok = pattern_ok && eq;
                }
            }
            r.params["forms"] = forms;
            r.note = printed_ok ? "the fourth form holds with last factor R_{k-1->1} as printed"
                                : "the fourth form holds with last factor R_{1->k-1}; the printed R_{k-1->1} does not";
            if (!pattern_ok) {
                r.status = Status::fail;
                r.witness = forms;
            }
        });
    if (selected("chain_inverse"))
        rep.run("chain_inverse", params({{"kmax", opt.chain_kmax}, {"points", opt.u_points}}), [&](CheckRecord& r) {
            if (hecke_only(r)) return;
            for (std::size_t k = 1; k <= opt.chain_kmax; ++k) {
                const int K = static_cast<int>(k);
                auto plan = detail::u_plan(4 * K, opt.u_points, opt.seed + k);
                for (int sign : {+1, -1})
                    for (auto [i, j] : {std::pair{1, K}, std::pair{K, 1}}) {
                        if (k == 1 && i != j) continue;
                        for (const auto& u : plan.points) {
                            ChainSpec s{i, j, sign, false};
                            Op prod = chain(B, s, Scalar(u), k + 1) * inverse_chain(B, s, Scalar(u), k + 1);
                            if (prod != Op::identity(ipow(N, k + 1))) {
                                r.status = Status::fail;
                                r.witness = residual_witness(prod - Op::identity(ipow(N, k + 1)), N);
                                r.witness["chain"] = std::to_string(i) + "->" + std::to_string(j);
                                r.witness["sign"] = sign;
                                r.witness["u"] = u.get_str();
                                return;
                            }
                        }
                    }
            }
        });
    if (selected("chain_permute"))
        rep.run("chain_permute", params({{"kmax", opt.chain_kmax}, {"points", opt.u_points}}), [&](CheckRecord& r) {
            if (hecke_only(r)) return;
            for (std::size_t k = 2; k <= opt.chain_kmax; ++k) {
                auto plan = detail::u_plan(4 * static_cast<int>(k) + 2, opt.u_points, opt.seed + 31 + k);
                for (const auto& u : plan.points) {
                    Op res = chain_permutation_residual(B, k, Scalar(u));
                    if (!res.is_zero_matrix()) {
                        r.status = Status::fail;
                        r.witness = residual_witness(res, N);
                        r.witness["k"] = k;
                        r.witness["u"] = u.get_str();
                        return;
                    }
                }
            }
        });
    if (selected("chain_lemma"))
        for (int rel = 1; rel <= 4; ++rel)
            rep.run("chain_lemma." + std::to_string(rel), params({{"kmax", opt.chain_kmax}, {"points", opt.u_points}}),
                    [&](CheckRecord& r) {
                        if (hecke_only(r)) return;
                        for (std::size_t k = 1; k <= opt.chain_kmax; ++k) {
                            auto plan = detail::u_plan(4 * static_cast<int>(k), opt.u_points, opt.seed + 47 + k);
                            for (const auto& u : plan.points) {
                                Op res = chain_lemma_residual(B, rel, k, Scalar(u));
                                if (!res.is_zero_matrix()) {
                                    r.status = Status::fail;
                                    r.witness = residual_witness(res, N);
                                    r.witness["k"] = k;
                                    r.witness["u"] = u.get_str();
                                    return;
                                }
                            }
                        }
                    });
    return rep;
}

}  // namespace braidcheck

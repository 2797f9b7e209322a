#pragma once

// Batch harness: run configuration, suite dispatch, catalog, report documents.

#include "braidcheck/gaudin.hpp"
#include "braidcheck/rmatrix.hpp"
#include "braidcheck/symfun.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#ifndef BRAIDCHECK_VERSION
#define BRAIDCHECK_VERSION "0.0.0"
#endif

namespace braidcheck {

/// Bad flags, unknown suites, unreadable inputs: exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string suite;
    std::string braiding = "flip";  // builtin name or path to a braiding file
    std::size_t N = 2;
    int T = 0;  // 0 picks the suite default
    int D = 0;
    bool symbolic = true;
    std::size_t samples = 3;
    std::uint64_t seed = 1;
    std::string points;  // "0,1,3/2"
    std::string pairs;   // bethe: "1:1,1:2"; gaudin/talalaev: number of (u, v) pairs
    std::size_t kmax = 0;
    bool abstract = false;
    std::string report_path;
    bool strict = false;
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> s{"braid",      "rmatrix", "bethe",  "newton",   "qdet",
                                            "shiftlemma", "alchain", "gaudin", "talalaev", "tau"};
    return s;
}

inline const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> s{"conjugated_flip", "dj_hecke", "flip"};
    return s;
}

inline bool is_builtin(const std::string& name) {
    const auto& b = builtin_names();
    return name == "P" || std::find(b.begin(), b.end(), name) != b.end();
}

/// "name N=n kind m=birank", sorted by (name, N).
inline std::vector<std::string> catalog(std::size_t Nmax = 3) {
    std::vector<std::string> out;
    for (const auto& name : builtin_names())
        for (std::size_t N = 2; N <= Nmax; ++N) {
            Braiding B = builtin_braiding(name, N);
            out.push_back(name + " N=" + std::to_string(N) + " " + to_string(B.kind()) +
                          " m=" + std::to_string(B.bi_rank()));
        }
    return out;
}

namespace detail {

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        auto b = cur.find_first_not_of(" \t"), e = cur.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    }
    return out;
}

inline Rational parse_rational(const std::string& s) {
    Rational x;
    if (s.empty() || x.set_str(s, 10) != 0) throw ConfigError("not a rational number: '" + s + "'");
    if (x.get_den() == 0) throw ConfigError("zero denominator in '" + s + "'");
    x.canonicalize();
    return x;
}

inline std::size_t parse_count(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size() || v < 1) throw ConfigError("");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ConfigError(std::string(what) + " must be a positive integer, got '" + s + "'");
    }
}

inline std::vector<Rational> parse_points(const std::string& s) {
    std::vector<Rational> pts;
    for (const auto& t : split(s, ',')) pts.push_back(parse_rational(t));
    if (pts.empty()) throw ConfigError("--points is empty");
    std::set<Rational> seen(pts.begin(), pts.end());
    if (seen.size() != pts.size()) throw ConfigError("--points must be pairwise distinct");
    return pts;
}

inline std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(const std::string& s) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& t : split(s, ',')) {
        auto kp = split(t, ':');
        if (kp.size() != 2) throw ConfigError("--pairs entries look like k:p, got '" + t + "'");
        out.emplace_back(parse_count(kp[0], "k"), parse_count(kp[1], "p"));
    }
    if (out.empty()) throw ConfigError("--pairs is empty");
    return out;
}

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

inline const std::set<std::string>& braid_ids() {
    static const std::set<std::string> s{"braid", "kind", "c_matrix", "birank", "idempotency", "closed_forms", "cyclic", "trace_shift"};
    return s;
}
inline const std::set<std::string>& rmatrix_ids() {
    static const std::set<std::string> s{"ybe", "inversion", "chain_inverse", "chain_permute", "chain_lemma"};
    return s;
}

/// The braid suite on a file must report a broken braid relation as a failed check.
inline Report unverifiable_braiding(const BraidingSource& src, const std::string& why) {
    Report rep;
    rep.run("braid", json{{"braiding", src.name}, {"N", src.N}}, [&](CheckRecord& r) {
        r.status = Status::fail;
        r.note = why;
        Op res = src.R.rows() == src.N * src.N ? braid_residual(src.R, src.N) : Op();
        if (res.rows() > 0 && !res.is_zero_matrix())
            r.witness = residual_witness(res, src.N);
        else
            r.witness = json{{"error", why}};
    });
    return rep;
}

}  // namespace detail

/// Default T and D per suite.
inline RunConfig resolved(RunConfig c) {
    using detail::require;
    const auto& s = suite_names();
    require(std::find(s.begin(), s.end(), c.suite) != s.end(), "unknown suite '" + c.suite + "'");
    const bool lightT = c.suite == "shiftlemma" || c.suite == "tau";
    if (c.T == 0) c.T = lightT ? 1 : 2;
    if (c.D == 0) c.D = c.suite == "newton" ? 3 : 4;
    require(c.T >= 1, "--T must be >= 1");
    require(c.D >= 2, "--D must be >= 2");
    require(c.N >= 2 || !is_builtin(c.braiding), "--N must be >= 2 for builtin braidings");
    require(c.samples >= 1, "--samples must be positive");
    return c;
}

inline json config_echo(const RunConfig& c) {
    json j{{"suite", c.suite},   {"braiding", c.braiding}, {"N", c.N},
           {"T", c.T},           {"D", c.D},               {"q_mode", c.symbolic ? "symbolic" : "sampled"},
           {"seed", c.seed},     {"strict", c.strict}};
    if (!c.symbolic) j["samples"] = c.samples;
    if (!c.points.empty()) j["points"] = c.points;
    if (!c.pairs.empty()) j["pairs"] = c.pairs;
    if (c.kmax) j["kmax"] = c.kmax;
    if (c.abstract) j["abstract"] = true;
    return j;
}

/// Execute one suite. Throws ConfigError for anything that is not a verification outcome.
inline Report run(const RunConfig& raw) {
    using detail::require;
    const RunConfig c = resolved(raw);
    Report rep;

    std::optional<Braiding> Bopt;
    if (is_builtin(c.braiding)) {
        try {
            Bopt = builtin_braiding(c.braiding, c.N);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    } else {
        BraidingSource src;
        try {
            src = parse_braiding_source(detail::read_text(c.braiding));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("braiding file '" + c.braiding + "': " + e.what());
        }
        try {
            Bopt = Braiding(src.name, src.N, src.R, src.kind);
        } catch (const BraidingError& e) {
            if (c.suite == "braid") return detail::unverifiable_braiding(src, e.what());
            throw ConfigError("braiding file '" + c.braiding + "': " + e.what());
        }
    }
    const Braiding& B = *Bopt;
    const bool hecke = B.is_hecke();
    const std::size_t m = static_cast<std::size_t>(std::max(B.bi_rank(), 1));

    SymOptions so;
    so.D = c.D;
    so.symbolic = c.symbolic;
    so.sample_points = c.samples;
    so.seed = c.seed;
    const std::size_t kdef = std::min<std::size_t>(2, m);
    const std::size_t kmax = c.kmax ? c.kmax : kdef;
    require(kmax <= m || c.suite == "braid" || c.suite == "rmatrix", "--kmax exceeds the bi-rank m = " + std::to_string(m));

    if (c.suite == "braid" || c.suite == "rmatrix") {
        RMatrixOptions ro;
        ro.seed = c.seed;
        ro.selection = c.suite == "braid" ? detail::braid_ids() : detail::rmatrix_ids();
        return verify_rmatrix_identities(B, ro);
    }
    if (c.suite == "newton") return verify_newton(Yangian(B, c.T), kmax, so);
    if (c.suite == "bethe") {
        auto pairs = c.pairs.empty() ? std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {1, 2}, {2, 2}}
                                     : detail::parse_pairs(c.pairs);
        if (c.pairs.empty())
            pairs.erase(std::remove_if(pairs.begin(), pairs.end(), [&](auto kp) { return kp.second > m; }), pairs.end());
        for (auto [k, p] : pairs) require(k <= m && p <= m, "--pairs entries must not exceed the bi-rank");
        return verify_bethe_commutativity(Yangian(B, c.T), pairs, so);
    }
    if (c.suite == "qdet") return verify_qdet_central(Yangian(B, c.T), so);
    if (c.suite == "shiftlemma") {
        require(hecke, "the shift lemma suite needs a Hecke symmetry");
        return verify_shift_lemma(Yangian(B, c.T), kmax, 2);
    }
    if (c.suite == "alchain") {
        require(hecke, "the AL-chain suite needs a Hecke symmetry");
        return verify_AL_chain(Yangian(B, c.T), kmax, so);
    }
    if (c.suite == "tau") {
        require(!hecke, "the tau suite needs an involutive symmetry");
        return verify_tau_order(B, c.T, kmax, so);
    }

    // gaudin / talalaev
    require(!hecke, "Gaudin systems need an involutive symmetry");
    require(B.bi_rank() == static_cast<int>(B.dim()), "Gaudin systems need bi-rank (N|0)");
    const std::vector<Rational> pts = detail::parse_points(c.points.empty() ? "0,1,3" : c.points);
    GaudinOptions go;
    go.pairs = c.pairs.empty() ? 5 : detail::parse_count(c.pairs, "--pairs");
    go.seed = c.seed;
    go.D = c.D;
    go.symbolic = c.symbolic;
    const bool classical = B.matrix() == flip_matrix(B.dim());
    auto build = [&]() -> GaudinSystem {
        try {
            return classical ? classical_sites(B.dim(), pts.size(), pts) : braided_sites(B, pts.size(), pts);
        } catch (const GaudinError& e) {
            throw ConfigError(e.what());
        }
    };
    GaudinSystem sys = build();
    const bool abstract = sys.abstract || c.abstract;
    if (c.suite == "talalaev") {
        go.selection = {"talalaev_commute", "residue"};
        if (sys.abstract) {
            rep.run("gaudin.talalaev_commute", json{{"braiding", B.name()}}, [&](CheckRecord& r) {
                r.status = Status::skipped;
                r.note = sys.realization;
            });
            return rep;
        }
        return verify_gaudin(sys, go);
    }
    go.selection = {"sites", "lax", "hamiltonians_commute", "sum_zero"};
    if (!sys.abstract) rep.merge(verify_gaudin(sys, go));
    if (abstract) {
        if (pts.size() >= 2) {
            Report ab = abstract_commutativity(B, pts, go);
            for (auto& r : ab.checks()) {
                r.params["realization"] = sys.abstract ? sys.realization : "abstract (requested)";
                if (!sys.warnings.empty()) r.params["warnings"] = sys.warnings;
            }
            rep.merge(ab);
        }
    }
    const bool nonzero = std::none_of(pts.begin(), pts.end(), [](const Rational& x) { return x == 0; });
    if (!nonzero) {
        rep.run("gaudin.weighted", json{{"braiding", B.name()}}, [](CheckRecord& r) {
            r.status = Status::skipped;
            r.note = "the weighted family needs nonzero points";
        });
    } else {
        GaudinOptions wo = go;
        wo.selection = {"sites", "hamiltonians_commute"};
        rep.merge(verify_weighted(B.dim(), pts, classical ? nullptr : &B, wo));
    }
    return rep;
}

/// Move certificates into `dir` (one file each) and leave references in the records.
inline void write_certificates(Report& rep, const std::filesystem::path& dir, const std::filesystem::path& relative_to) {
    std::size_t n = 0;
    for (auto& r : rep.checks()) {
        if (r.certificate.is_null()) continue;
        if (n == 0) std::filesystem::create_directories(dir);
        char name[32];
        std::snprintf(name, sizeof name, "%04zu.json", ++n);
        const auto path = dir / name;
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot write certificate '" + path.string() + "'");
        out << r.certificate.dump(1) << "\n";
        r.certificate_ref = std::filesystem::relative(path, relative_to).generic_string();
    }
}

inline int exit_status(const Report& rep, bool strict) { return rep.ok(strict) ? 0 : 1; }

inline json report_document(const RunConfig& c, const Report& rep, bool with_timing = true) {
    json doc{{"tool", "braidcheck"}, {"version", BRAIDCHECK_VERSION}, {"config", config_echo(resolved(c))}};
    json body = rep.to_json(with_timing);
    doc["checks"] = body["checks"];
    doc["summary"] = body["summary"];
    doc["summary"]["ok"] = rep.ok(c.strict);
    return doc;
}

}  // namespace braidcheck

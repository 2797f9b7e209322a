// braidcheck: exact verification of braided Yangian and Gaudin identities.

#include "braidcheck/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace braidcheck;

namespace {

void print_summary(const Report& rep, std::ostream& os) {
    for (const auto& c : rep.checks()) {
        os << to_string(c.status) << "  " << c.id << " " << c.params.dump();
        if (!c.note.empty()) os << "  (" << c.note << ")";
        os << "\n";
    }
    os << "total " << rep.checks().size() << ", pass " << rep.count(Status::pass) << ", fail "
       << rep.count(Status::fail) << ", inconclusive " << rep.count(Status::inconclusive) << ", skipped "
       << rep.count(Status::skipped) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"braidcheck: exact checks for braided Yangians, Bethe subalgebras and Gaudin models"};
    app.set_version_flag("--version", BRAIDCHECK_VERSION);
    app.require_subcommand(1);

    auto* cat = app.add_subcommand("catalog", "list builtin braidings");

    RunConfig cfg;
    std::string qmode = "symbolic";
    auto* ver = app.add_subcommand("verify", "run one verification suite");
    ver->add_option("suite", cfg.suite, "suite to run")->required()->check(CLI::IsMember(suite_names()));
    ver->add_option("--braiding", cfg.braiding, "builtin name (flip, dj_hecke, conjugated_flip) or braiding file");
    ver->add_option("--N", cfg.N, "dimension for builtin braidings");
    ver->add_option("--T", cfg.T, "truncation order (0 = suite default)");
    ver->add_option("--D", cfg.D, "degree cap for ideal membership (0 = suite default)");
    ver->add_option("--q-mode", qmode, "symbolic or sampled")->check(CLI::IsMember({"symbolic", "sampled"}));
    ver->add_option("--samples", cfg.samples, "sample points in sampled mode");
    ver->add_option("--seed", cfg.seed, "seed for every sampled quantity");
    ver->add_option("--points", cfg.points, "Gaudin site points, e.g. 0,1,3/2");
    ver->add_option("--pairs", cfg.pairs, "bethe: k:p list; gaudin/talalaev: number of (u,v) pairs");
    ver->add_option("--kmax", cfg.kmax, "largest k (0 = suite default)");
    ver->add_flag("--abstract", cfg.abstract, "also run abstract-mode Gaudin commutativity");
    ver->add_option("--report", cfg.report_path, "write the JSON report here (certificates go next to it)");
    ver->add_flag("--strict", cfg.strict, "treat inconclusive as failure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*cat) {
        for (const auto& line : catalog()) std::cout << line << "\n";
        return 0;
    }

    cfg.symbolic = qmode == "symbolic";
    try {
        Report rep = run(cfg);
        if (!cfg.report_path.empty()) {
            namespace fs = std::filesystem;
            fs::path path = fs::absolute(cfg.report_path);
            if (path.has_parent_path()) fs::create_directories(path.parent_path());
            write_certificates(rep, fs::path(path.string() + ".certs"), path.parent_path());
            std::ofstream out(path);
            if (!out) throw ConfigError("cannot write report '" + path.string() + "'");
            out << report_document(cfg, rep).dump(2) << "\n";
            print_summary(rep, std::cout);
        } else {
            std::cout << report_document(cfg, rep).dump(2) << "\n";
        }
        return exit_status(rep, cfg.strict);
    } catch (const ConfigError& e) {
        std::cerr << "braidcheck: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "braidcheck: " << e.what() << "\n";
        return 2;
    }
}

#include "braidcheck/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace braidcheck;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int status;
    std::string out;
};

CliRun cli(const std::string& args) {
    std::string cmd = std::string(BRAIDCHECK_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

fs::path scratch(const std::string& name) {
    fs::path d = fs::temp_directory_path() / "braidcheck_cli_test";
    fs::create_directories(d);
    return d / name;
}

json strip_timing(json doc) {
    for (auto& c : doc["checks"]) c.erase("elapsed_ms");
    return doc;
}

}  // namespace

TEST(Cli, Catalog) {
    CliRun r = cli("catalog");
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("flip N=2 involutive m=2"), std::string::npos);
    EXPECT_NE(r.out.find("dj_hecke N=3 hecke m=3"), std::string::npos);
    auto lines = catalog();
    auto sorted = lines;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(lines, sorted);
}

TEST(Cli, BraidSuiteExitCodes) {
    CliRun ok = cli("verify braid --braiding flip --N 2");
    EXPECT_EQ(ok.status, 0);
    json doc = json::parse(ok.out);
    EXPECT_EQ(doc["summary"]["fail"], 0);
    EXPECT_EQ(doc["config"]["braiding"], "flip");
    EXPECT_TRUE(doc.contains("version"));

    fs::path bad = scratch("random.json");
    std::ofstream(bad) << R"({"name":"rnd","dim":2,"entries":[{"row":0,"col":0,"value":2},{"row":1,"col":2,"value":3},)"
                          R"({"row":2,"col":1,"value":1},{"row":3,"col":3,"value":1},{"row":0,"col":3,"value":1}]})";
    CliRun f = cli("verify braid --braiding " + bad.string());
    EXPECT_EQ(f.status, 1);
    json fd = json::parse(f.out);
    ASSERT_EQ(fd["checks"].size(), 1u);
    EXPECT_EQ(fd["checks"][0]["status"], "fail");
    EXPECT_TRUE(fd["checks"][0]["witness"].contains("row"));

    EXPECT_EQ(cli("verify braid --braiding no_such_file.json").status, 2);
    EXPECT_EQ(cli("verify nonsense").status, 2);
    EXPECT_EQ(cli("verify tau --braiding dj_hecke").status, 2);
    EXPECT_EQ(cli("verify bethe --T 0").status, 0);  // 0 means the suite default
    EXPECT_EQ(cli("verify bethe --D 1").status, 2);
    EXPECT_EQ(cli("verify gaudin --points 1,1").status, 2);
    EXPECT_EQ(cli("verify gaudin --points 1,x").status, 2);
    EXPECT_EQ(cli("verify braid --q-mode fuzzy").status, 2);
}

TEST(Cli, DeterministicReportWithCertificates) {
    fs::path a = scratch("a.json"), b = scratch("b.json");
    fs::remove_all(a.string() + ".certs");
    ASSERT_EQ(cli("verify bethe --braiding dj_hecke --N 2 --report " + a.string()).status, 0);
    ASSERT_EQ(cli("verify bethe --braiding dj_hecke --N 2 --report " + b.string()).status, 0);
    json ja = strip_timing(json::parse(std::ifstream(a))), jb = strip_timing(json::parse(std::ifstream(b)));
    std::string sa = ja.dump(), sb = jb.dump();
    // certificate references differ only by the report name
    for (std::size_t p; (p = sb.find("b.json.certs")) != std::string::npos;) sb.replace(p, 12, "a.json.certs");
    EXPECT_EQ(sa, sb);
    bool referenced = false;
    for (const auto& c : ja["checks"]) {
        EXPECT_EQ(c["status"], "pass");
        if (c.contains("certificate")) {
            referenced = true;
            fs::path cert = a.parent_path() / c["certificate"].get<std::string>();
            ASSERT_TRUE(fs::exists(cert)) << cert;
            json cj = json::parse(std::ifstream(cert));
            EXPECT_TRUE(cj.contains("combination"));
        }
    }
    EXPECT_TRUE(referenced);
    EXPECT_EQ(ja["summary"]["total"], ja["checks"].size());
}

TEST(Cli, SampledModeAndSuites) {
    CliRun s = cli("verify newton --braiding dj_hecke --q-mode sampled --samples 2");
    EXPECT_EQ(s.status, 0);
    EXPECT_EQ(json::parse(s.out)["config"]["q_mode"], "sampled");
    EXPECT_EQ(cli("verify gaudin --braiding conjugated_flip --points 1,2,4").status, 0);
    EXPECT_EQ(cli("verify talalaev --points 0,1,3 --pairs 2").status, 0);
    EXPECT_EQ(cli("verify rmatrix --braiding conjugated_flip").status, 0);
}

TEST(Cli, StrictPromotesInconclusive) {
    // D = 2 is below the degree of the order-2 commutators
    RunConfig c;
    c.suite = "bethe";
    c.braiding = "dj_hecke";
    c.D = 2;
    Report rep = run(c);
    ASSERT_GT(rep.count(Status::inconclusive), 0u);
    EXPECT_EQ(exit_status(rep, false), 0);
    EXPECT_EQ(exit_status(rep, true), 1);
    EXPECT_EQ(cli("verify bethe --braiding dj_hecke --D 2 --strict").status, 1);
}

TEST(Cli, ConfigHelpers) {
    RunConfig c;
    c.suite = "tau";
    RunConfig r = resolved(c);
    EXPECT_EQ(r.T, 1);
    EXPECT_EQ(r.D, 4);
    c.suite = "what";
    EXPECT_THROW(resolved(c), ConfigError);
    c.suite = "bethe";
    c.pairs = "1:3";
    EXPECT_THROW(run(c), ConfigError);
    c.pairs = "1-1";
    EXPECT_THROW(run(c), ConfigError);
    RunConfig q;
    q.suite = "qdet";
    EXPECT_EQ(config_echo(resolved(q))["T"], 2);
}

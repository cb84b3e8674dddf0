#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using lrn::Json;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

// Runs the CLI through the shell; stderr is folded into stdout when asked.
Run run(const std::string& args, bool with_stderr = false) {
    std::string cmd = std::string("\"") + LRN_CLI_PATH + "\" " + args;
    if (with_stderr) cmd += " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "lrn_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(CliSolve, SevenContainsLargestSolution) {
    const auto r = run("solve --p 7 --k-max 1 --n-max 13");
    ASSERT_EQ(r.status, 0);
    const auto j = Json::parse(r.out);
    bool found = false;
    for (const auto& s : j.at("solutions")) {
        found = found || (s.at("x") == "181" && s.at("y") == "2" && s.at("k") == 0 && s.at("n") == 13);
    }
    EXPECT_TRUE(found);
}

TEST(CliSolve, RoundTripThroughVerify) {
    for (const auto p : lrn::RamifiedPrime::kCertified) {
        const auto sols = scratch("sols_" + std::to_string(p) + ".json");
        const auto cert = scratch("cert_" + std::to_string(p) + ".json");
        ASSERT_EQ(run("solve --p " + std::to_string(p) + " --k-max 2 --n-max 15 --output " + sols.string() +
                      " --certificate " + cert.string())
                      .status,
                  0);
        const auto v = run("verify --input " + sols.string());
        EXPECT_EQ(v.status, 0) << v.out;
        EXPECT_EQ(Json::parse(v.out).at("ok"), true);
        const auto c = run("verify --input " + cert.string());
        EXPECT_EQ(c.status, 0) << c.out;
        EXPECT_EQ(Json::parse(c.out).at("certificate").at("replayed"), true);
    }
}

TEST(CliSolve, PipedIntoVerify) {
    const std::string cmd = std::string("\"") + LRN_CLI_PATH + "\" solve --p 11 --k-max 1 --n-max 9 | \"" +
                            LRN_CLI_PATH + "\" verify --input - > /dev/null";
    const int raw = std::system(cmd.c_str());
    ASSERT_TRUE(WIFEXITED(raw));
    EXPECT_EQ(WEXITSTATUS(raw), 0);
}

TEST(CliVerify, LiteralTableFlagsThreeRows) {
    const auto path = scratch("literal.json");
    ASSERT_EQ(run("families --fixture literal --output " + path.string()).status, 0);
    const auto r = run("verify --input " + path.string());
    EXPECT_EQ(r.status, 1);
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j.at("failed_rows"), Json::array({"S3a", "S5b", "S13"}));
    EXPECT_EQ(j.at("ok"), false);
}

TEST(CliVerify, CorrectedTablePasses) {
    const auto path = scratch("corrected.json");
    ASSERT_EQ(run("families --fixture corrected --output " + path.string()).status, 0);
    const auto r = run("verify --input " + path.string());
    EXPECT_EQ(r.status, 0);
    EXPECT_TRUE(Json::parse(r.out).at("failed_rows").empty());
}

TEST(CliVerify, TamperedCertificateFails) {
    const auto cert = scratch("tamper.json");
    ASSERT_EQ(run("solve --p 7 --k-max 1 --n-max 13 --output /dev/null --certificate " + cert.string()).status, 0);
    auto j = Json::parse(slurp(cert));
    j.at("steps").at(11).at("outcome").at("solutions").erase(0);  // k=0, n=13
    std::ofstream(cert) << j.dump();
    const auto r = run("verify --input " + cert.string());
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(Json::parse(r.out).at("certificate").at("step_id"), "k=0,n=13");
}

TEST(CliVerify, MalformedInputIsDataError) {
    const auto path = scratch("bad.json");
    std::ofstream(path) << "{ not json";
    const auto r = run("verify --input " + path.string(), true);
    EXPECT_EQ(r.status, 2);
    EXPECT_EQ(Json::parse(r.out).at("error"), "FormatError");
}

TEST(CliSearch, ElevenFindsSporadic) {
    const auto r = run("search --p 11 --y-max 50 --n-max 10");
    ASSERT_EQ(r.status, 0);
    const auto j = Json::parse(r.out);
    bool found = false;
    for (const auto& s : j.at("solutions")) {
        found = found || (s.at("x") == "31" && s.at("y") == "3" && s.at("k") == 0 && s.at("n") == 5);
    }
    EXPECT_TRUE(found) << r.out;
}

TEST(CliSearch, ByteIdenticalAcrossWorkers) {
    const auto one = run("search --p 3 --y-max 800 --n-max 20 --workers 1");
    ASSERT_EQ(one.status, 0);
    for (const int w : {2, 5, 16}) EXPECT_EQ(run("search --p 3 --y-max 800 --n-max 20 --workers " + std::to_string(w)).out, one.out);
}

TEST(CliSearch, PermissiveNeedsFlag) {
    EXPECT_EQ(run("search --p 19 --y-max 20 --n-max 4", true).status, 2);
    const auto r = run("search --p 19 --y-max 20 --n-max 4 --permissive");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(Json::parse(r.out).at("certified"), false);
}

TEST(CliFormats, CsvMatchesJson) {
    const auto js = run("search --p 7 --y-max 200 --n-max 12 --workers 2");
    const auto csv = run("search --p 7 --y-max 200 --n-max 12 --workers 2 --format csv");
    ASSERT_EQ(js.status, 0);
    ASSERT_EQ(csv.status, 0);
    std::istringstream in(csv.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "p,x,y,k,n,family,params");
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    const auto recs = Json::parse(js.out).at("solutions");
    ASSERT_EQ(rows.size(), recs.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = recs[i];
        std::string params;
        for (auto it = r.at("params").begin(); it != r.at("params").end(); ++it) {
            if (!params.empty()) params += ";";
            params += it.key() + "=" + it.value().dump();
        }
        const std::string expect = std::to_string(r.at("p").get<unsigned long>()) + "," + r.at("x").get<std::string>() +
                                   "," + r.at("y").get<std::string>() + "," + std::to_string(r.at("k").get<unsigned long>()) +
                                   "," + std::to_string(r.at("n").get<unsigned long>()) + "," +
                                   r.at("family").get<std::string>() + "," + params;
        EXPECT_EQ(rows[i], expect);
    }
}

TEST(CliFormats, TableHasHeader) {
    const auto r = run("families --id S13 --count 2 --format table");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("p", 0), 0u);
    EXPECT_NE(r.out.find("181"), std::string::npos);
}

TEST(CliFamilies, ListAndGenerate) {
    const auto l = run("families --list");
    ASSERT_EQ(l.status, 0);
    EXPECT_EQ(Json::parse(l.out).at("families").size(), lrn::family_catalog().size());
    const auto g = run("families --id P3MULT --param r=1 --param s=1");
    ASSERT_EQ(g.status, 0);
    const auto s = Json::parse(g.out).at("solutions").at(0);
    EXPECT_EQ(s.at("x"), "9");
    EXPECT_EQ(s.at("y"), "3");
    EXPECT_EQ(s.at("family"), "P3MULT");
}

TEST(CliFamilies, ConstraintViolationIsDiagnostic) {
    const auto r = run("families --id P3MULT --param r=1 --param s=2", true);
    EXPECT_EQ(r.status, 2);
    EXPECT_EQ(Json::parse(r.out).at("error"), "ConstraintError");
}

TEST(CliLucas, SevenPair) {
    const auto r = run("lucas --p 7 --a 1 --b 1 --n 13 --primitive-divisors");
    ASSERT_EQ(r.status, 0);
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j.at("u_n"), "-1");
    EXPECT_TRUE(j.at("primitive_divisors").empty());
}

TEST(CliLucas, ParityMismatchIsDiagnostic) {
    const auto r = run("lucas --p 7 --a 1 --b 2 --n 5", true);
    EXPECT_EQ(r.status, 2);
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j.at("error"), "ParityError");
    EXPECT_TRUE(j.contains("message"));
}

TEST(CliSieve, RuleVerdicts) {
    const auto r = run("sieve --rule R163");
    ASSERT_EQ(r.status, 0);
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j.at("validated_by_enumeration"), true);
    for (const auto& v : j.at("verdicts").at(0).at("eliminates_k0_to_k5")) EXPECT_EQ(v, true);
}

TEST(CliUsage, BadInvocationsExitTwo) {
    EXPECT_EQ(run("", true).status, 2);
    EXPECT_EQ(run("solve", true).status, 2);
    EXPECT_EQ(run("solve --p 7 --n-max 1", true).status, 2);
    EXPECT_EQ(run("solve --p 19", true).status, 2);
    EXPECT_EQ(run("families --list --id N2", true).status, 2);
    EXPECT_EQ(run("sieve", true).status, 2);
    EXPECT_EQ(run("frobnicate", true).status, 2);
}

TEST(CliFixtures, DataFilesMatchOutput) {
    for (const auto& [which, file] : std::vector<std::pair<std::string, std::string>>{
             {"literal", "families_literal.json"}, {"corrected", "families_corrected.json"}, {"sporadic", "sporadic.json"}}) {
        const auto r = run("families --fixture " + which);
        ASSERT_EQ(r.status, 0);
        EXPECT_EQ(Json::parse(r.out), Json::parse(slurp(std::filesystem::path(LRN_DATA_DIR) / file))) << file;
    }
}

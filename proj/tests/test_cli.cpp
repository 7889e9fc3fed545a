#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// stdout only; stderr carries timing and diagnostics.
Run run(const std::string& args) {
    const std::string cmd = std::string(SWB_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(f);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
    CHECK(run("verify siegel-weil-t0 --d-max 1").code == 2);
    CHECK(run("verify siegel-weil-t0 --budget 1000").code == 2);
    CHECK(run("verify no-such-suite").code == 2);
    CHECK(run("verify siegel-weil-t0 --bogus").code == 2);
    CHECK(run("verify siegel-weil-t0 --jobs 0").code == 2);
    CHECK(run("verify siegel-weil-t0 --N 1..x").code == 2);
    CHECK(run("density --p 4 --target hyp:2:+ --source diag:1").code == 2);
    CHECK(run("density --p 3 --target circle --source diag:1").code == 2);
    CHECK(run("").code == 2);
    CHECK(run("--help").code == 0);
}

TEST_CASE("density subcommand") {
    Run r = run("density --p 3 --d 4 --target hyp:4:+ --source diag:1,3 --format json");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema"] == "swb/1");
    CHECK(j["count"] == "2754990144");
    CHECK(j["normalized"] == "64/81");
    Run s = run("density --p 3 --target hyp:2:+ --source diag:1");
    CHECK(s.code == 0);
    CHECK(s.out.find("Den = 2/3") != std::string::npos);
    Run b = run("density --p 5 --d 6 --target diag:1,1,1,1,1,1 --source diag:1,2 --budget 1e6 --convention B");
    CHECK(b.code == 0);
    CHECK(run("density --p 2 --d 6 --target hyp:4:+ --source diag:1,1 --budget 1e6 --convention B").code == 3);
}

TEST_CASE("verify reports and exit codes") {
    Run ok = run("verify siegel-weil-t0 --N 1..12 --format json");
    REQUIRE(ok.code == 0);
    auto j = nlohmann::json::parse(ok.out);
    CHECK(j["schema"] == "swb/1");
    CHECK(j["suite"] == "siegel-weil-t0");
    CHECK(j["summary"]["fail"] == 0);
    CHECK(j["summary"]["pass"].get<int>() == static_cast<int>(j["cases"].size()));
    CHECK(ok.out.find("1/3*log(2)") != std::string::npos);

    Run empty = run("verify siegel-weil-t0 --N 5..4 --format json");
    CHECK(empty.code == 0);
    CHECK(nlohmann::json::parse(empty.out)["cases"].empty());

    // the inverse-weighted a_N sum is 1 at N = 1
    Run fail = run("verify geometry-ledger --N 1 --format json");
    CHECK(fail.code == 1);
    auto jf = nlohmann::json::parse(fail.out);
    CHECK(jf["summary"]["fail"] == 1);
    for (const auto& c : jf["cases"])
        if (c["status"] == "fail") {
            CHECK(c.contains("lhs"));
            CHECK(c.contains("rhs"));
        }
    CHECK(run("verify geometry-ledger --N 2..20").code == 0);
}

TEST_CASE("budget skips") {
    Run soft = run("verify difference-formula --p 2 --convention B --budget 1e6 --format json");
    CHECK(soft.code == 0);
    auto j = nlohmann::json::parse(soft.out);
    CHECK(j["summary"]["skipped-budget"].get<int>() > 0);
    CHECK(run("verify difference-formula --p 2 --convention B --budget 1e6 --strict-budget").code == 3);
}

TEST_CASE("reports are byte-identical across worker counts") {
    const std::string args = "verify singular-relation --p 3 --N 9,27 --t -3..3 --k 2 --format json";
    Run a = run(args + " --jobs 1");
    Run b = run(args + " --jobs 4");
    Run c = run(args + " --jobs 4");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(b.out == c.out);
    Run ta = run("verify geometry-ledger --N 2..30");
    Run tb = run("verify geometry-ledger --N 2..30 --jobs 3");
    CHECK(ta.out == tb.out);
}

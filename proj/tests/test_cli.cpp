#include <gtest/gtest.h>

#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "JLLAB_OUTPUT=") {
    const std::string cmd = "env " + env + " " + JLLAB_CLI + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

}  // namespace

TEST(Cli, ComponentGroupsQ2) {
    const auto r = run("component-groups --q 2");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["rows"]["J0"]["x"]["text"], "Z/15");
    EXPECT_EQ(j["rows"]["J0"]["y"]["text"], "Z/3");
    EXPECT_EQ(j["rows"]["Jxy"]["y"]["text"], "Z/15");
}

TEST(Cli, ComponentGroupsQ3Text) {
    const auto r = run("component-groups --q 3 --format text");
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("J0(xy)      Z/40"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("component-groups --q 6").status, 2);
    EXPECT_EQ(run("component-groups --q 32").status, 2);
    EXPECT_EQ(run("component-groups --q 2 --x T^2+T+1").status, 2);
    EXPECT_EQ(run("component-groups --q 2 --y T^2+1").status, 2);
    EXPECT_EQ(run("cuspidal --format dot").status, 2);
    EXPECT_EQ(run("drinfeld-census --place T^3+T+1").status, 2);
    EXPECT_EQ(run("no-such-command").status, 2);
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("cuspidal", "JLLAB_OUTPUT=yaml").status, 2);
}

TEST(Cli, VerifyExitCodes) {
    const auto ok = run("verify --q 2");
    ASSERT_EQ(ok.status, 0);
    const auto j = nlohmann::json::parse(ok.out);
    EXPECT_EQ(j["selectedKernel"], "C0");
    EXPECT_EQ(j["x"], "T+1");
    EXPECT_EQ(j["pass"], true);
    const auto q3 = run("verify --q 3");
    ASSERT_EQ(q3.status, 0);
    EXPECT_EQ(nlohmann::json::parse(q3.out)["checks"][8]["status"], "n/a");
    EXPECT_EQ(run("verify --q 2 --inject-fault").status, 1);
}

TEST(Cli, EnvironmentSelectsFormat) {
    const auto dot = run("quotient-graph --q 2", "JLLAB_OUTPUT=dot");
    ASSERT_EQ(dot.status, 0);
    EXPECT_EQ(dot.out.rfind("graph quotient {", 0), 0u);
    const auto json = run("quotient-graph --q 2 --format json", "JLLAB_OUTPUT=dot");
    ASSERT_EQ(json.status, 0);
    EXPECT_EQ(nlohmann::json::parse(json.out)["genus"], 2);
}

TEST(Cli, ByteStableOutput) {
    for (const std::string args : {"component-groups --q 3", "cuspidal --q 4", "quotient-graph --q 3 --format dot",
                                   "quaternion --q 5", "drinfeld-census --q 3 --place T^2+1", "verify --q 2"}) {
        const auto a = run(args), b = run(args);
        EXPECT_EQ(a.status, 0) << args;
        EXPECT_FALSE(a.out.empty()) << args;
        EXPECT_EQ(a.out, b.out) << args;
    }
}

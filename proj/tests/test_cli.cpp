#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "oracles.hpp"

namespace {

int cli(const std::string& args)
{
    const std::string cmd = std::string(MDEVM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Cli, ListFunctions)
{
    EXPECT_EQ(cli("list-functions"), 0);
}

TEST(Cli, InvalidConfigurationExitCode)
{
    const auto dir = oracle::scratch("cli_bad");
    std::ofstream(dir / "c.json") << R"({"schemes": ["rand2"], "n_p": [3]})";
    EXPECT_EQ(cli("run --config " + (dir / "c.json").string() + " --out " + (dir / "a").string()), 2);
    EXPECT_EQ(cli("simulate-diversity --mode xyz --samples 10"), 2);
    EXPECT_EQ(cli("simulate-diversity --range 2 --samples 10"), 2);
    EXPECT_NE(cli("run"), 0);
    EXPECT_NE(cli(""), 0);
}

TEST(Cli, RunCompareCurves)
{
    const auto dir = oracle::scratch("cli_run");
    std::ofstream(dir / "c.json")
        << R"({"functions": ["sphere", "ackley"], "modes": ["cmf", "vrmf"], "d": [2],
              "n_run": 3, "termination": {"nfc_max_multiplier": 50}})";
    const auto arch = (dir / "a").string();
    ASSERT_EQ(cli("run --config " + (dir / "c.json").string() + " --out " + arch), 0);

    const auto report = (dir / "r.json").string();
    ASSERT_EQ(cli("compare --archive " + arch + " --reference best1__vrmf__np5__d2 --opponent "
                  "best1__cmf__np5__d2 --out " + report),
              0);
    const auto j = nlohmann::json::parse(oracle::slurp(report));
    const auto& n = j.at("counts");
    EXPECT_EQ(n.at("plus").get<int>() + n.at("equal").get<int>() + n.at("minus").get<int>(), 2);
    EXPECT_EQ(cli("compare --archive " + arch + " --reference best1__vrmf__np5__d2 --opponent x"), 1);

    const auto csv = (dir / "curve.csv").string();
    ASSERT_EQ(cli("curves --archive " + arch + " --cell sphere__best1__vrmf__np5__d2 --out " + csv), 0);
    EXPECT_EQ(oracle::slurp(csv).rfind("nfc,best_value_so_far_median", 0), 0u);
}

TEST(Cli, SimulateDiversityWritesTable)
{
    const auto dir = oracle::scratch("cli_sim");
    const auto out = (dir / "t.csv").string();
    ASSERT_EQ(cli("simulate-diversity --d 2,5 --np 5 --samples 300 --with-se --out " + out
                  + " --cloud " + (dir / "c.csv").string() + " --mutant-cloud "
                  + (dir / "m.csv").string()),
              0);
    const auto text = oracle::slurp(out);
    EXPECT_EQ(text.rfind("d,n_p,mode,samples,c_d_mean,p_d_mean,c_d_se,p_d_se\n", 0), 0u);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 2 * 3);
    const auto cloud = oracle::slurp(dir / "c.csv");
    EXPECT_EQ(std::count(cloud.begin(), cloud.end(), '\n'), 1 + 3 * 300);
    const auto mutants = oracle::slurp(dir / "m.csv");
    EXPECT_EQ(std::count(mutants.begin(), mutants.end(), '\n'), 1 + 3 * 100);
}

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>

#include "mdevm/harness.hpp"
#include "oracles.hpp"

using namespace mdevm;
using nlohmann::json;

namespace {

ExperimentConfig small_config()
{
    ExperimentConfig c;
    c.functions = {"sphere", "rastrigin"};
    c.schemes = {Scheme::Best1};
    c.modes = {FactorKind::Constant, FactorKind::VectorRandom};
    c.population_sizes = {5};
    c.dimensions = {3};
    c.nfc_max_multiplier = 100;
    c.n_run = 4;
    c.master_seed = 7;
    return c;
}

} // namespace

TEST(Config, DefaultsAndPartialJson)
{
    const auto c = ExperimentConfig::from_json(json::parse(R"({"n_run": 3, "d": [2, 4]})"));
    EXPECT_EQ(c.n_run, 3u);
    EXPECT_EQ(c.dimensions, (std::vector<std::size_t>{2, 4}));
    EXPECT_EQ(c.cr, 0.9);
    EXPECT_EQ(c.nfc_max(10), 10000u);
    const auto back = ExperimentConfig::from_json(c.to_json());
    EXPECT_EQ(back.to_json(), c.to_json());
}

TEST(Config, RejectsUnknownKeysAndBadValues)
{
    EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"nrun": 3})")), InvalidConfiguration);
    EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"termination": {"nfc": 3}})")),
                 InvalidConfiguration);
    EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"schemes": ["best9"]})")),
                 InvalidConfiguration);
    EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"n_run": "many"})")),
                 InvalidConfiguration);
    EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"factor": {"range": [1.5, 0.1]}})")),
                 InvalidConfiguration);
    EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"schemes": ["rand2"], "n_p": [4]})")),
                 InvalidConfiguration);
    EXPECT_THROW(ExperimentConfig::from_json(json::parse(R"({"functions": []})")),
                 InvalidConfiguration);
}

TEST(Config, LoadFromFile)
{
    const auto dir = oracle::scratch("config");
    std::ofstream(dir / "ok.json") << R"({"functions": ["ackley"], "workers": 2})";
    std::ofstream(dir / "broken.json") << "{ not json";
    EXPECT_EQ(load_config(dir / "ok.json").functions, (std::vector<std::string>{"ackley"}));
    EXPECT_THROW(load_config(dir / "broken.json"), InvalidConfiguration);
    EXPECT_THROW(load_config(dir / "missing.json"), InvalidConfiguration);
}

TEST(Cells, IdsAndDuplicates)
{
    const Cell c{"sphere", Scheme::Best1, FactorKind::VectorRandom, 5, 30};
    EXPECT_EQ(c.id(), "sphere__best1__vrmf__np5__d30");
    EXPECT_EQ(c.family(), "best1__vrmf__np5__d30");
    auto cfg = small_config();
    EXPECT_EQ(expand_cells(cfg).size(), 4u);
    cfg.functions = {"sphere", "sphere"};
    EXPECT_THROW(expand_cells(cfg), InvalidConfiguration);
}

TEST(Matrix, OneCellThreeRuns)
{
    ExperimentConfig c;
    c.n_run = 3;
    c.dimensions = {2};
    c.nfc_max_multiplier = 50;
    const auto dir = oracle::scratch("three_runs");
    const auto a = run_matrix(c, dir);
    ASSERT_EQ(a.cells().size(), 1u);
    EXPECT_EQ(a.cells()[0].runs.size(), 3u);
    const auto loaded = Archive::load(dir);
    EXPECT_EQ(loaded.cells()[0].runs.size(), 3u);
    const auto h = loaded.history(loaded.cells()[0], 2);
    EXPECT_EQ(h.back().nfc, loaded.cells()[0].runs[2].nfc);
    EXPECT_EQ(h.back().best_value_so_far, loaded.cells()[0].runs[2].final_best_value);
}

TEST(Matrix, RerunIsByteIdentical)
{
    const auto c = small_config();
    const auto d1 = oracle::scratch("rerun_a"), d2 = oracle::scratch("rerun_b");
    run_matrix(c, d1);
    run_matrix(c, d2);
    EXPECT_EQ(oracle::tree(d1), oracle::tree(d2));
}

TEST(Matrix, WorkerCountDoesNotChangeResults)
{
    auto c = small_config();
    c.functions.push_back("composition_1");
    const auto serial = run_matrix(c, oracle::scratch("workers_1"));
    c.workers = 8;
    const auto parallel = run_matrix(c, oracle::scratch("workers_8"));
    ASSERT_EQ(serial.cells().size(), parallel.cells().size());
    for (std::size_t i = 0; i < serial.cells().size(); ++i)
        for (std::size_t r = 0; r < c.n_run; ++r)
            EXPECT_EQ(serial.cells()[i].runs[r].final_best_value,
                      parallel.cells()[i].runs[r].final_best_value);
}

TEST(Matrix, CompositeDataIsPersisted)
{
    auto c = small_config();
    c.functions = {"composition_2"};
    c.n_run = 1;
    const auto dir = oracle::scratch("composite");
    run_matrix(c, dir);
    const auto spec = json::parse(oracle::slurp(dir / "problems" / "composition_2_d3.json"));
    EXPECT_EQ(spec.at("components").size(), 3u);
    const auto manifest = json::parse(oracle::slurp(dir / "manifest.json"));
    EXPECT_EQ(manifest.at("format"), "mdevm-archive");
    EXPECT_EQ(manifest.at("problems").at(0).at("file"), "problems/composition_2_d3.json");
}

TEST(Matrix, FailingObjectiveMarksOnlyItsCell)
{
    auto c = small_config();
    c.functions = {"sphere", "broken"};
    const FunctionFactory factory = [](const std::string& name, std::size_t d, std::uint64_t seed) {
        if (name != "broken")
            return make_function(name, d, seed);
        return BenchmarkFunction("broken", Category::UniModal, Bounds::uniform(d, -1, 1), 0.0,
                                 std::vector<double>(d, 0.0), [](std::span<const double>) {
                                     return std::numeric_limits<double>::quiet_NaN();
                                 });
    };
    const auto a = run_matrix(c, oracle::scratch("failing"), factory);
    EXPECT_TRUE(a.has_failures());
    for (const auto& cell : a.cells()) {
        EXPECT_EQ(cell.failed, cell.cell.function == "broken") << cell.cell.id();
        if (cell.failed) {
            EXPECT_FALSE(cell.error.empty());
        }
    }
}

TEST(Curves, SingleRunEqualsRawHistory)
{
    auto c = small_config();
    c.functions = {"sphere"};
    c.modes = {FactorKind::VectorRandom};
    c.n_run = 1;
    const auto dir = oracle::scratch("curves_one");
    const auto a = run_matrix(c, dir);
    const auto id = a.cells()[0].cell.id();
    const auto rows = curves(a, id);
    const auto h = a.history(a.cells()[0], 0);
    ASSERT_EQ(rows.size(), h.size());
    for (std::size_t g = 0; g < h.size(); ++g) {
        EXPECT_EQ(rows[g].best_median, h[g].best_value_so_far);
        EXPECT_EQ(rows[g].best_iqr, 0.0);
        EXPECT_EQ(rows[g].c_d_median, h[g].centroid_diversity);
        EXPECT_EQ(rows[g].nfc, h[g].nfc);
    }
    EXPECT_EQ(curves_csv(rows).substr(0, 4), "nfc,");
    EXPECT_THROW(curves(a, "nope"), std::invalid_argument);
}

TEST(Curves, MedianIsMonotoneAndCarriesShortRuns)
{
    auto c = small_config();
    c.functions = {"sphere"};
    c.modes = {FactorKind::VectorRandom};
    c.n_run = 5;
    c.evtr = 1.0; // some runs stop early
    c.nfc_max_multiplier = 300;
    const auto a = run_matrix(c, oracle::scratch("curves_many"));
    const auto rows = curves(a, a.cells()[0].cell.id());
    for (std::size_t g = 1; g < rows.size(); ++g) {
        EXPECT_LE(rows[g].best_median, rows[g - 1].best_median);
        EXPECT_GE(rows[g].best_iqr, 0.0);
    }
}

TEST(Compare, SelfComparisonAndCoverage)
{
    auto c = small_config();
    const auto a = run_matrix(c, oracle::scratch("compare"));
    const auto self = compare(a, "best1__vrmf__np5__d3", "best1__vrmf__np5__d3");
    EXPECT_EQ(self.equal, 2u);
    const auto cross = compare(a, "best1__vrmf__np5__d3", "best1__cmf__np5__d3");
    EXPECT_EQ(cross.plus + cross.equal + cross.minus, 2u);
    EXPECT_THROW(compare(a, "best1__vrmf__np5__d3", "rand1__vrmf__np5__d3"), std::invalid_argument);
}

TEST(Compare, DisjointFunctionListsFail)
{
    auto c = small_config();
    c.modes = {FactorKind::VectorRandom};
    c.functions = {"sphere"};
    c.n_run = 3;
    const auto dir = oracle::scratch("disjoint");
    run_matrix(c, dir);
    // Hand-edit the archive so the two families cover different functions.
    auto manifest = json::parse(oracle::slurp(dir / "manifest.json"));
    auto cell = manifest.at("cells").at(0);
    cell["function"] = "rastrigin";
    cell["mode"] = "cmf";
    manifest["cells"].push_back(cell);
    manifest["config"]["modes"] = {"cmf", "vrmf"};
    std::ofstream(dir / "manifest.json") << manifest.dump();
    const auto a = Archive::load(dir);
    try {
        compare(a, "best1__vrmf__np5__d3", "best1__cmf__np5__d3");
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("sphere"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("rastrigin"), std::string::npos) << e.what();
    }
}

TEST(Archive, RejectsForeignManifests)
{
    const auto dir = oracle::scratch("foreign");
    std::ofstream(dir / "manifest.json") << R"({"format": "something-else"})";
    EXPECT_ANY_THROW(Archive::load(dir));
    EXPECT_ANY_THROW(Archive::load(oracle::scratch("empty")));
}

// mdevm command-line interface.
//
//   mdevm run --config PATH --out DIR [--workers N]
//   mdevm simulate-diversity [--d LIST] [--np LIST] [--mode LIST] [--samples N]
//                            [--range LO:HI] [--crossover BOOL] ...
//   mdevm compare --archive DIR --reference FAMILY --opponent FAMILY [--alpha A]
//   mdevm curves --archive DIR --cell CELL
//
// Exit codes: 0 success, 1 other errors, 2 invalid configuration,
// 3 the matrix finished but some cells failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mdevm/benchmarks.hpp"
#include "mdevm/diversity.hpp"
#include "mdevm/harness.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitPartialFailure = 3;

std::pair<double, double> parse_range(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw mdevm::InvalidConfiguration("--range expects LO:HI, got '" + text + "'");
    try {
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw mdevm::InvalidConfiguration("--range expects LO:HI, got '" + text + "'");
    }
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

struct SimulateOptions {
    std::vector<std::size_t> d = {2};
    std::vector<std::size_t> np = {5};
    std::vector<std::string> modes = {"cmf", "srmf", "vrmf"};
    std::size_t samples = 10000;
    std::string range;
    double cmf = 0.0;
    bool crossover = true;
    double cr = 0.9;
    std::uint64_t seed = 1;
    std::string preset = "simulation";
    bool with_se = false;
    bool no_pairwise = false;
    std::string out;
    std::string cloud;
    std::string mutant_cloud;
    std::size_t mutant_samples = 100;
};

int simulate(const SimulateOptions& o, bool cmf_given, bool range_given)
{
    // "simulation": F_C = 0.5, random factors in [0, 2] (Monte-Carlo study settings).
    // "algorithm":  F_C = 0.9, random factors in [0.1, 1.5] (optimizer defaults).
    double cmf = 0.5, lo = 0.0, hi = 2.0;
    if (o.preset == "algorithm") {
        cmf = 0.9;
        lo = 0.1;
        hi = 1.5;
    } else if (o.preset != "simulation") {
        throw mdevm::InvalidConfiguration("unknown preset '" + o.preset + "'");
    }
    if (cmf_given)
        cmf = o.cmf;
    if (range_given)
        std::tie(lo, hi) = parse_range(o.range);

    auto mode_for = [&](const std::string& name) {
        switch (mdevm::parse_factor_kind(name)) {
        case mdevm::FactorKind::Constant: return mdevm::FactorMode::constant(cmf);
        case mdevm::FactorKind::ScalarRandom: return mdevm::FactorMode::scalar_random(lo, hi);
        case mdevm::FactorKind::VectorRandom: return mdevm::FactorMode::vector_random(lo, hi);
        }
        return mdevm::FactorMode{};
    };

    std::string table = "d,n_p,mode,samples,c_d_mean,p_d_mean";
    if (o.with_se)
        table += ",c_d_se,p_d_se";
    table += '\n';
    std::string cloud_csv = "mode,n_p,x1,x2\n";

    for (auto d : o.d) {
        for (auto np : o.np) {
            for (const auto& m : o.modes) {
                mdevm::TrialSimulation sim;
                sim.dimension = d;
                sim.population_size = np;
                sim.factor = mode_for(m);
                sim.with_crossover = o.crossover;
                sim.cr = o.cr;
                sim.samples = o.samples;
                sim.seed = o.seed;
                sim.compute_pairwise = !o.no_pairwise;
                const auto r = mdevm::monte_carlo_trials(sim);
                table += std::to_string(d) + ',' + std::to_string(np) + ',' + m + ','
                         + std::to_string(o.samples) + ',' + fmt(r.c_d_mean) + ','
                         + fmt(r.p_d_mean);
                if (o.with_se)
                    table += ',' + fmt(r.c_d_se) + ',' + fmt(r.p_d_se);
                table += '\n';

                if (!o.cloud.empty() && d == 2) {
                    const auto cloud = mdevm::trial_cloud(sim);
                    for (std::size_t i = 0; i < cloud.size(); ++i)
                        cloud_csv += m + ',' + std::to_string(np) + ',' + fmt(cloud.row(i)[0])
                                     + ',' + fmt(cloud.row(i)[1]) + '\n';
                }
            }
        }
    }
    emit(o.out, table);
    if (!o.cloud.empty())
        emit(o.cloud, cloud_csv);

    if (!o.mutant_cloud.empty()) {
        // Fixed donors: V = F .* R with R = (1, 1).
        const std::vector<double> origin = {0.0, 0.0}, r = {1.0, 1.0};
        std::string csv = "mode,x1,x2\n";
        for (const auto& m : o.modes) {
            mdevm::RandomStream rng(mdevm::derive_seed(o.seed, "mutant-cloud/" + m, 0));
            const auto cloud = mdevm::monte_carlo_mutants(mode_for(m), origin, r, o.mutant_samples, rng);
            for (std::size_t i = 0; i < cloud.size(); ++i)
                csv += m + ',' + fmt(cloud.row(i)[0]) + ',' + fmt(cloud.row(i)[1]) + '\n';
        }
        emit(o.mutant_cloud, csv);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Micro differential evolution with vectorized random mutation factors"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "Execute an experiment matrix and write an archive");
    std::string config_path, out_dir;
    std::size_t workers = 0;
    run_cmd->add_option("--config", config_path, "JSON experiment config")->required();
    run_cmd->add_option("--out", out_dir, "Archive directory")->required();
    auto* workers_opt = run_cmd->add_option("--workers", workers, "Worker threads (overrides config)");

    // simulate-diversity
    auto* sim_cmd = app.add_subcommand("simulate-diversity",
                                       "Monte-Carlo diversity of DE/Rand/1 trial clouds");
    SimulateOptions sim;
    sim_cmd->add_option("--d", sim.d, "Dimensions, comma separated")->delimiter(',');
    sim_cmd->add_option("--np", sim.np, "Population sizes, comma separated")->delimiter(',');
    sim_cmd->add_option("--mode", sim.modes, "Factor modes: cmf,srmf,vrmf")->delimiter(',');
    sim_cmd->add_option("--samples", sim.samples, "Trial vectors per configuration");
    auto* range_opt = sim_cmd->add_option("--range", sim.range, "Random factor range LO:HI");
    auto* cmf_opt = sim_cmd->add_option("--cmf", sim.cmf, "Constant factor value");
    sim_cmd->add_option("--crossover", sim.crossover, "Apply binomial crossover (true/false)");
    sim_cmd->add_option("--cr", sim.cr, "Crossover rate");
    sim_cmd->add_option("--seed", sim.seed, "Seed");
    sim_cmd->add_option("--preset", sim.preset, "simulation (F_C 0.5, [0,2]) or algorithm (0.9, [0.1,1.5])");
    sim_cmd->add_flag("--with-se", sim.with_se, "Append standard-error columns");
    sim_cmd->add_flag("--no-pairwise", sim.no_pairwise, "Skip the O(n^2) pairwise distance");
    sim_cmd->add_option("--out", sim.out, "CSV output (default stdout)");
    sim_cmd->add_option("--cloud", sim.cloud, "Raw 2-D trial cloud CSV");
    sim_cmd->add_option("--mutant-cloud", sim.mutant_cloud, "Fixed-donor mutant cloud CSV, R = (1,1)");
    sim_cmd->add_option("--mutant-samples", sim.mutant_samples, "Points per mode in the mutant cloud");

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "Wilcoxon rank-sum comparison of two cell families");
    std::string archive_dir, reference, opponent, report_out;
    double alpha = 0.05;
    cmp_cmd->add_option("--archive", archive_dir, "Archive directory")->required();
    cmp_cmd->add_option("--reference", reference, "Reference family, e.g. best1__vrmf__np5__d30")->required();
    cmp_cmd->add_option("--opponent", opponent, "Opponent family")->required();
    cmp_cmd->add_option("--alpha", alpha, "Significance level");
    cmp_cmd->add_option("--out", report_out, "JSON output (default stdout)");

    // curves
    auto* curves_cmd = app.add_subcommand("curves", "Median best-so-far and diversity per generation");
    std::string curve_archive, cell_id, curves_out;
    curves_cmd->add_option("--archive", curve_archive, "Archive directory")->required();
    curves_cmd->add_option("--cell", cell_id, "Cell id")->required();
    curves_cmd->add_option("--out", curves_out, "CSV output (default stdout)");

    auto* list_cmd = app.add_subcommand("list-functions", "List registered benchmark functions");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            auto config = mdevm::load_config(config_path);
            if (workers_opt->count() > 0)
                config.workers = workers;
            config.validate();
            const auto archive = mdevm::run_matrix(config, out_dir);
            std::size_t failed = 0;
            for (const auto& c : archive.cells()) {
                if (c.failed) {
                    ++failed;
                    std::cerr << "cell " << c.cell.id() << " failed: " << c.error << '\n';
                }
            }
            std::cerr << archive.cells().size() << " cells, " << failed << " failed, archive at "
                      << out_dir << '\n';
            return failed > 0 ? kExitPartialFailure : 0;
        }
        if (sim_cmd->parsed())
            return simulate(sim, cmf_opt->count() > 0, range_opt->count() > 0);
        if (cmp_cmd->parsed()) {
            const auto archive = mdevm::Archive::load(archive_dir);
            const auto report = mdevm::compare(archive, reference, opponent, alpha);
            emit(report_out, report.to_json().dump(2) + "\n");
            return 0;
        }
        if (curves_cmd->parsed()) {
            const auto archive = mdevm::Archive::load(curve_archive);
            emit(curves_out, mdevm::curves_csv(mdevm::curves(archive, cell_id)));
            return 0;
        }
        if (list_cmd->parsed()) {
            for (const auto& f : mdevm::suite(2, 0))
                std::cout << f.name() << '\t' << mdevm::to_string(f.category()) << '\n';
            return 0;
        }
    } catch (const mdevm::InvalidConfiguration& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return 0;
}

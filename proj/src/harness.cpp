#include "mdevm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#ifndef MDEVM_VERSION
#define MDEVM_VERSION "unknown"
#endif

namespace mdevm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where)
{
    if (!j.is_object())
        throw InvalidConfiguration(where + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw InvalidConfiguration(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
T read(const json& j, const char* key, const std::string& where)
{
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InvalidConfiguration(where + "." + key + ": " + e.what());
    }
}

template <typename T>
std::vector<T> read_list(const json& j, const char* key, const std::string& where)
{
    const auto& v = j.at(key);
    if (!v.is_array() || v.empty())
        throw InvalidConfiguration(where + "." + key + ": expected a non-empty array");
    return read<std::vector<T>>(j, key, where);
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string run_file_name(std::size_t run)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "run_%03zu.csv", run);
    return buf;
}

constexpr const char* kRunHeader = "generation,nfc,best_value_so_far,centroid_diversity,pairwise_diversity";

void write_run_csv(const fs::path& path, const RunRecord& record)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << kRunHeader << '\n';
    for (const auto& h : record.history) {
        out << h.generation << ',' << h.nfc << ',' << format_double(h.best_value_so_far) << ','
            << format_double(h.centroid_diversity) << ',' << format_double(h.pairwise_diversity)
            << '\n';
    }
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string problem_key(const std::string& function, std::size_t d)
{
    return function + "_d" + std::to_string(d);
}

} // namespace

// ---------------------------------------------------------------------------
// ExperimentConfig

ExperimentConfig ExperimentConfig::from_json(const json& j)
{
    const std::string where = "config";
    reject_unknown_keys(j, {"functions", "schemes", "modes", "n_p", "d", "cr", "termination",
                            "factor", "n_run", "master_seed", "workers"},
                        where);
    ExperimentConfig c;
    if (j.contains("functions"))
        c.functions = read_list<std::string>(j, "functions", where);
    if (j.contains("schemes")) {
        c.schemes.clear();
        for (const auto& s : read_list<std::string>(j, "schemes", where))
            c.schemes.push_back(parse_scheme(s));
    }
    if (j.contains("modes")) {
        c.modes.clear();
        for (const auto& m : read_list<std::string>(j, "modes", where))
            c.modes.push_back(parse_factor_kind(m));
    }
    if (j.contains("n_p"))
        c.population_sizes = read_list<std::size_t>(j, "n_p", where);
    if (j.contains("d"))
        c.dimensions = read_list<std::size_t>(j, "d", where);
    if (j.contains("cr"))
        c.cr = read<double>(j, "cr", where);
    if (j.contains("termination")) {
        const auto& t = j.at("termination");
        reject_unknown_keys(t, {"evtr", "nfc_max_multiplier"}, "config.termination");
        if (t.contains("evtr"))
            c.evtr = read<double>(t, "evtr", "config.termination");
        if (t.contains("nfc_max_multiplier"))
            c.nfc_max_multiplier = read<double>(t, "nfc_max_multiplier", "config.termination");
    }
    if (j.contains("factor")) {
        const auto& f = j.at("factor");
        reject_unknown_keys(f, {"cmf", "range", "shared_across_terms"}, "config.factor");
        if (f.contains("cmf"))
            c.cmf_value = read<double>(f, "cmf", "config.factor");
        if (f.contains("range")) {
            const auto r = read<std::vector<double>>(f, "range", "config.factor");
            if (r.size() != 2)
                throw InvalidConfiguration("config.factor.range: expected [lo, hi]");
            c.factor_lo = r[0];
            c.factor_hi = r[1];
        }
        if (f.contains("shared_across_terms"))
            c.shared_factor = read<bool>(f, "shared_across_terms", "config.factor");
    }
    if (j.contains("n_run"))
        c.n_run = read<std::size_t>(j, "n_run", where);
    if (j.contains("master_seed"))
        c.master_seed = read<std::uint64_t>(j, "master_seed", where);
    if (j.contains("workers"))
        c.workers = read<std::size_t>(j, "workers", where);
    c.validate();
    return c;
}

json ExperimentConfig::to_json() const
{
    std::vector<std::string> scheme_names, mode_names;
    for (auto s : schemes)
        scheme_names.emplace_back(to_string(s));
    for (auto m : modes)
        mode_names.emplace_back(to_string(m));
    return {{"functions", functions},
            {"schemes", scheme_names},
            {"modes", mode_names},
            {"n_p", population_sizes},
            {"d", dimensions},
            {"cr", cr},
            {"termination", {{"evtr", evtr}, {"nfc_max_multiplier", nfc_max_multiplier}}},
            {"factor",
             {{"cmf", cmf_value},
              {"range", {factor_lo, factor_hi}},
              {"shared_across_terms", shared_factor}}},
            {"n_run", n_run},
            {"master_seed", master_seed},
            {"workers", workers}};
}

void ExperimentConfig::validate() const
{
    if (functions.empty() || schemes.empty() || modes.empty() || population_sizes.empty()
        || dimensions.empty())
        throw InvalidConfiguration("config: every matrix axis needs at least one entry");
    if (!(cr >= 0.0 && cr <= 1.0))
        throw InvalidConfiguration("config: cr must lie in [0, 1]");
    if (!(evtr >= 0.0))
        throw InvalidConfiguration("config: evtr must be >= 0");
    if (!(nfc_max_multiplier > 0.0) || !std::isfinite(nfc_max_multiplier))
        throw InvalidConfiguration("config: nfc_max_multiplier must be > 0");
    if (n_run < 1)
        throw InvalidConfiguration("config: n_run must be >= 1");
    if (workers < 1)
        throw InvalidConfiguration("config: workers must be >= 1");
    for (auto kind : modes)
        factor_mode(kind).validate();
    for (auto d : dimensions)
        if (d < 1)
            throw InvalidConfiguration("config: dimensions must be >= 1");
    for (auto s : schemes) {
        for (auto n_p : population_sizes) {
            if (n_p < min_population(s))
                throw InvalidConfiguration("config: scheme " + std::string(to_string(s))
                                           + " needs N_P >= " + std::to_string(min_population(s))
                                           + ", got " + std::to_string(n_p));
            for (auto d : dimensions)
                if (nfc_max(d) < n_p)
                    throw InvalidConfiguration("config: NFC_Max below one evaluation pass");
        }
    }
}

FactorMode ExperimentConfig::factor_mode(FactorKind kind) const
{
    switch (kind) {
    case FactorKind::Constant: return FactorMode::constant(cmf_value);
    case FactorKind::ScalarRandom: return FactorMode::scalar_random(factor_lo, factor_hi);
    case FactorKind::VectorRandom: return FactorMode::vector_random(factor_lo, factor_hi);
    }
    return {};
}

std::size_t ExperimentConfig::nfc_max(std::size_t dimension) const
{
    return static_cast<std::size_t>(std::llround(nfc_max_multiplier * static_cast<double>(dimension)));
}

ExperimentConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidConfiguration("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InvalidConfiguration("config " + path.string() + ": " + e.what());
    }
    return ExperimentConfig::from_json(j);
}

// ---------------------------------------------------------------------------
// Cells

std::string Cell::id() const
{
    return function + "__" + family();
}

std::string Cell::family() const
{
    return std::string(to_string(scheme)) + "__" + std::string(to_string(mode)) + "__np"
           + std::to_string(n_p) + "__d" + std::to_string(d);
}

std::vector<Cell> expand_cells(const ExperimentConfig& config)
{
    std::vector<Cell> cells;
    for (const auto& f : config.functions)
        for (auto s : config.schemes)
            for (auto m : config.modes)
                for (auto n_p : config.population_sizes)
                    for (auto d : config.dimensions)
                        cells.push_back({f, s, m, n_p, d});
    std::set<std::string> seen;
    for (const auto& c : cells)
        if (!seen.insert(c.id()).second)
            throw InvalidConfiguration("config: duplicate cell " + c.id());
    return cells;
}

// ---------------------------------------------------------------------------
// run_matrix

Archive run_matrix(const ExperimentConfig& config, const fs::path& out,
                   const FunctionFactory& factory)
{
    config.validate();
    const auto cells = expand_cells(config);

    // Problem instances, one per (function, D), shared by every cell using them.
    std::map<std::string, BenchmarkFunction> problems;
    json problem_index = json::array();
    for (const auto& f : config.functions) {
        for (auto d : config.dimensions) {
            const auto key = problem_key(f, d);
            const auto seed = derive_seed(config.master_seed, "problem/" + f, d);
            auto fn = factory(f, d, seed);
            json entry = {{"function", f}, {"d", d}, {"seed", seed}};
            if (fn.composite() != nullptr)
                entry["file"] = "problems/" + key + ".json";
            problem_index.push_back(entry);
            problems.emplace(key, std::move(fn));
        }
    }

    fs::create_directories(out);
    for (const auto& p : problems) {
        if (const auto* spec = p.second.composite()) {
            fs::create_directories(out / "problems");
            write_text(out / "problems" / (p.first + ".json"), spec->to_json().dump() + "\n");
        }
    }
    for (const auto& c : cells)
        fs::create_directories(out / c.id());

    struct Task {
        std::size_t cell;
        std::size_t run;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (std::size_t r = 0; r < config.n_run; ++r)
            tasks.push_back({c, r});

    std::vector<std::vector<std::optional<RunSummary>>> summaries(
        cells.size(), std::vector<std::optional<RunSummary>>(config.n_run));
    std::vector<std::vector<std::string>> errors(cells.size(),
                                                 std::vector<std::string>(config.n_run));

    const auto ntasks = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(config.workers))
    for (std::ptrdiff_t t = 0; t < ntasks; ++t) {
        const auto [ci, run_index] = tasks[static_cast<std::size_t>(t)];
        const Cell& cell = cells[ci];
        const BenchmarkFunction& fn = problems.at(problem_key(cell.function, cell.d));
        const auto seed = derive_seed(config.master_seed, cell.id(), run_index);
        try {
            RunConfig rc{fn.bounds(),
                         cell.n_p,
                         MutationConfig{cell.scheme, config.factor_mode(cell.mode), config.shared_factor},
                         config.cr,
                         TerminationCriteria{fn.optimum_value(), config.evtr, config.nfc_max(cell.d)},
                         seed,
                         EvaluationPolicy::Serial};
            const auto record =
                run(rc, [&fn](std::span<const double> x) { return fn.evaluate(x); });
            const auto file = cell.id() + "/" + run_file_name(run_index);
            write_run_csv(out / file, record);

            RunSummary s;
            s.index = run_index;
            s.seed = seed;
            s.file = file;
            s.final_best_value = *record.final_best.fitness;
            s.final_error = std::abs(s.final_best_value - fn.optimum_value());
            s.final_position = record.final_best.position;
            s.terminated_by = record.terminated_by;
            s.nfc = record.nfc();
            s.generations = record.history.back().generation;
            summaries[ci][run_index] = std::move(s);
        } catch (const std::exception& e) {
            errors[ci][run_index] = e.what();
        }
    }

    Archive archive;
    archive.root_ = out;
    archive.config_ = config;
    json cell_rows = json::array();
    for (std::size_t c = 0; c < cells.size(); ++c) {
        CellResult cr;
        cr.cell = cells[c];
        cr.vtr = problems.at(problem_key(cells[c].function, cells[c].d)).optimum_value();
        json runs = json::array();
        for (std::size_t r = 0; r < config.n_run; ++r) {
            if (!errors[c][r].empty()) {
                cr.failed = true;
                if (cr.error.empty())
                    cr.error = "run " + std::to_string(r) + ": " + errors[c][r];
                continue;
            }
            const auto& s = *summaries[c][r];
            runs.push_back({{"index", s.index},
                            {"seed", s.seed},
                            {"file", s.file},
                            {"final_best_value", s.final_best_value},
                            {"final_error", s.final_error},
                            {"final_position", s.final_position},
                            {"terminated_by", to_string(s.terminated_by)},
                            {"nfc", s.nfc},
                            {"generations", s.generations}});
            cr.runs.push_back(s);
        }
        cell_rows.push_back({{"id", cr.cell.id()},
                             {"function", cr.cell.function},
                             {"scheme", to_string(cr.cell.scheme)},
                             {"mode", to_string(cr.cell.mode)},
                             {"n_p", cr.cell.n_p},
                             {"d", cr.cell.d},
                             {"vtr", cr.vtr},
                             {"status", cr.failed ? "failed" : "ok"},
                             {"error", cr.error},
                             {"runs", runs}});
        archive.cells_.push_back(std::move(cr));
    }

    const json manifest = {{"format", "mdevm-archive"},
                           {"format_version", 1},
                           {"code_version", MDEVM_VERSION},
                           {"config", config.to_json()},
                           {"problems", problem_index},
                           {"cells", cell_rows}};
    write_text(out / "manifest.json", manifest.dump(2) + "\n");
    return archive;
}

// ---------------------------------------------------------------------------
// Archive

Archive Archive::load(const fs::path& root)
{
    std::ifstream in(root / "manifest.json");
    if (!in)
        throw std::invalid_argument("no manifest.json under " + root.string());
    json m;
    in >> m;
    if (m.value("format", "") != "mdevm-archive")
        throw std::invalid_argument(root.string() + " is not an experiment archive");

    Archive a;
    a.root_ = root;
    a.config_ = ExperimentConfig::from_json(m.at("config"));
    for (const auto& row : m.at("cells")) {
        CellResult cr;
        cr.cell = {row.at("function").get<std::string>(),
                   parse_scheme(row.at("scheme").get<std::string>()),
                   parse_factor_kind(row.at("mode").get<std::string>()),
                   row.at("n_p").get<std::size_t>(),
                   row.at("d").get<std::size_t>()};
        cr.vtr = row.at("vtr").get<double>();
        cr.failed = row.at("status").get<std::string>() == "failed";
        cr.error = row.at("error").get<std::string>();
        for (const auto& r : row.at("runs")) {
            RunSummary s;
            s.index = r.at("index").get<std::size_t>();
            s.seed = r.at("seed").get<std::uint64_t>();
            s.file = r.at("file").get<std::string>();
            s.final_best_value = r.at("final_best_value").get<double>();
            s.final_error = r.at("final_error").get<double>();
            s.final_position = r.at("final_position").get<std::vector<double>>();
            s.terminated_by = parse_termination(r.at("terminated_by").get<std::string>());
            s.nfc = r.at("nfc").get<std::size_t>();
            s.generations = r.at("generations").get<std::size_t>();
            cr.runs.push_back(std::move(s));
        }
        a.cells_.push_back(std::move(cr));
    }
    return a;
}

const CellResult& Archive::cell(const std::string& id) const
{
    for (const auto& c : cells_)
        if (c.cell.id() == id)
            return c;
    throw std::invalid_argument("archive has no cell '" + id + "'");
}

bool Archive::has_failures() const noexcept
{
    return std::any_of(cells_.begin(), cells_.end(), [](const CellResult& c) { return c.failed; });
}

std::vector<HistoryEntry> Archive::history(const CellResult& cell, std::size_t run) const
{
    const auto path = root_ / cell.runs.at(run).file;
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != kRunHeader)
        throw std::runtime_error(path.string() + ": unexpected header");
    std::vector<HistoryEntry> out;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> f;
        while (std::getline(ss, field, ','))
            f.push_back(field);
        if (f.size() != 5)
            throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
        HistoryEntry e;
        e.generation = std::stoull(f[0]);
        e.nfc = std::stoull(f[1]);
        e.best_value_so_far = std::strtod(f[2].c_str(), nullptr);
        e.centroid_diversity = std::strtod(f[3].c_str(), nullptr);
        e.pairwise_diversity = std::strtod(f[4].c_str(), nullptr);
        out.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reports

std::vector<CurveRow> curves(const Archive& archive, const std::string& cell_id)
{
    const auto& cell = archive.cell(cell_id);
    if (cell.runs.empty())
        throw std::invalid_argument("cell '" + cell_id + "' has no runs");

    std::vector<std::vector<HistoryEntry>> histories;
    std::size_t longest = 0;
    for (std::size_t r = 0; r < cell.runs.size(); ++r) {
        histories.push_back(archive.history(cell, r));
        if (histories.back().empty())
            throw std::runtime_error("run " + std::to_string(r) + " of " + cell_id + " is empty");
        if (histories.back().size() > histories[longest].size())
            longest = r;
    }

    const std::size_t generations = histories[longest].size();
    std::vector<CurveRow> rows;
    rows.reserve(generations);
    for (std::size_t g = 0; g < generations; ++g) {
        std::vector<double> best, cd, pd;
        for (const auto& h : histories) {
            const auto& e = h[std::min(g, h.size() - 1)];
            best.push_back(e.best_value_so_far);
            cd.push_back(e.centroid_diversity);
            pd.push_back(e.pairwise_diversity);
        }
        CurveRow row;
        row.nfc = histories[longest][g].nfc;
        row.best_median = stats::median(best);
        row.best_iqr = stats::quantile(best, 0.75) - stats::quantile(best, 0.25);
        row.c_d_median = stats::median(cd);
        row.p_d_median = stats::median(pd);
        rows.push_back(row);
    }
    return rows;
}

std::string curves_csv(const std::vector<CurveRow>& rows)
{
    std::string out = "nfc,best_value_so_far_median,best_value_so_far_iqr,c_d_median,p_d_median\n";
    for (const auto& r : rows) {
        out += std::to_string(r.nfc) + ',' + format_double(r.best_median) + ','
               + format_double(r.best_iqr) + ',' + format_double(r.c_d_median) + ','
               + format_double(r.p_d_median) + '\n';
    }
    return out;
}

stats::ComparisonReport compare(const Archive& archive, const std::string& reference_family,
                                const std::string& opponent_family, double alpha)
{
    auto collect = [&](const std::string& family) {
        stats::SampleSet set;
        bool any = false;
        for (const auto& c : archive.cells()) {
            if (c.cell.family() != family)
                continue;
            any = true;
            if (c.failed)
                continue;
            auto& v = set[c.cell.function];
            for (const auto& r : c.runs)
                v.push_back(r.final_error);
        }
        if (!any)
            throw std::invalid_argument("archive has no cells in family '" + family + "'");
        return set;
    };
    return stats::summarize(collect(reference_family), collect(opponent_family), alpha,
                            reference_family, opponent_family);
}

} // namespace mdevm

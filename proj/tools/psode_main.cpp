#include "psode/harness.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace {

using namespace psode;
using nlohmann::json;

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// "all" / "pso" / "de" / "hybrid" aliases or a comma-separated name list.
std::vector<std::string> expand_instances(const std::string& arg)
{
    std::optional<AlgorithmKind> only;
    if (arg == "pso")
        only = AlgorithmKind::Pso;
    else if (arg == "de")
        only = AlgorithmKind::De;
    else if (arg == "hybrid")
        only = AlgorithmKind::Hybrid;

    if (arg == "all" || only) {
        std::vector<std::string> names;
        for (const auto& spec : enumerate_instances())
            if (!only || spec.kind == *only)
                names.push_back(render_name(spec));
        return names;
    }

    std::vector<std::string> names;
    std::string token;
    std::istringstream in(arg);
    while (std::getline(in, token, ','))
        if (!token.empty())
            names.push_back(token);
    if (names.empty())
        throw InvalidConfig("--instances needs a name list or all/pso/de/hybrid");
    return names;
}

std::vector<int> expand_functions(const std::string& arg)
{
    if (arg == "all")
        return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<int> ids;
    std::string token;
    std::istringstream in(arg);
    while (std::getline(in, token, ','))
        if (!token.empty())
            ids.push_back(std::stoi(token));
    if (ids.empty())
        throw InvalidConfig("--functions needs an id list or 'all'");
    return ids;
}

std::vector<std::size_t> expand_dims(const std::string& arg)
{
    std::vector<std::size_t> dims;
    std::string token;
    std::istringstream in(arg);
    while (std::getline(in, token, ','))
        if (!token.empty())
            dims.push_back(static_cast<std::size_t>(std::stoul(token)));
    if (dims.empty())
        throw InvalidConfig("--dims needs a comma-separated list");
    return dims;
}

/// Output sink: stdout by default, a file when a path was given.
class Sink
{
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path, std::ios::trunc);
            if (!file_)
                throw InvalidConfig("cannot write " + path);
        }
    }

    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

int cmd_run(const std::string& instance, int function_id, std::size_t dim, std::uint64_t seed,
            std::uint64_t budget_multiplier, std::size_t pop_multiplier, const std::string& out)
{
    const InstanceSpec spec = parse_name(instance);
    if (function_id < 1 || function_id > 10)
        throw InvalidConfig("function id must be in 1..10");

    const auto functions = suite(dim);
    const TestFunction& fn = functions[static_cast<std::size_t>(function_id - 1)];
    const RunRecord rec = execute_run(spec, instance, fn, 0, seed, budget_multiplier * dim,
                                      pop_multiplier * dim);

    Sink sink(out);
    sink.stream() << csv_header(Targets::standard(fn.problem.f_opt)) << '\n'
                  << csv_row(rec) << '\n';
    return 0;
}

int cmd_sweep(const std::string& config_path, const CLI::App& cmd, const std::string& instances,
              const std::string& functions, const std::string& dims, std::size_t runs,
              std::uint64_t master_seed, std::uint64_t budget_multiplier,
              std::size_t pop_multiplier, const std::string& out_dir, int workers)
{
    SweepConfig cfg;
    cfg.functions = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    cfg.dims = {5};

    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in)
            throw InvalidConfig("cannot read config file " + config_path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ParseError("malformed config " + config_path + ": " + e.what());
        }
        if (j.contains("instances")) {
            if (j["instances"].is_string())
                cfg.instances = expand_instances(j["instances"].get<std::string>());
            else
                cfg.instances = j["instances"].get<std::vector<std::string>>();
        }
        if (j.contains("functions"))
            cfg.functions = j["functions"].get<std::vector<int>>();
        if (j.contains("dims"))
            cfg.dims = j["dims"].get<std::vector<std::size_t>>();
        if (j.contains("runs"))
            cfg.runs = j["runs"].get<std::size_t>();
        if (j.contains("master_seed"))
            cfg.master_seed = j["master_seed"].get<std::uint64_t>();
        if (j.contains("budget_multiplier"))
            cfg.budget_multiplier = j["budget_multiplier"].get<std::uint64_t>();
        if (j.contains("pop_multiplier"))
            cfg.pop_multiplier = j["pop_multiplier"].get<std::size_t>();
        if (j.contains("out_dir"))
            cfg.out_dir = j["out_dir"].get<std::string>();
    }

    // explicit flags win over the config file
    if (cmd.count("--instances"))
        cfg.instances = expand_instances(instances);
    if (cmd.count("--functions"))
        cfg.functions = expand_functions(functions);
    if (cmd.count("--dims"))
        cfg.dims = expand_dims(dims);
    if (cmd.count("--runs"))
        cfg.runs = runs;
    if (cmd.count("--master-seed"))
        cfg.master_seed = master_seed;
    if (cmd.count("--budget-multiplier"))
        cfg.budget_multiplier = budget_multiplier;
    if (cmd.count("--pop-multiplier"))
        cfg.pop_multiplier = pop_multiplier;
    if (cmd.count("--out"))
        cfg.out_dir = out_dir;

    if (cfg.instances.empty())
        throw InvalidConfig("no instances selected (use --instances or a config file)");
    if (cfg.out_dir.empty())
        throw InvalidConfig("no output directory (use --out or a config file)");

    const SweepOutcome outcome = run_sweep(cfg, workers);
    std::cout << "sweep complete: " << outcome.cells_written << " cell(s) written, "
              << outcome.cells_skipped << " skipped, results in " << cfg.out_dir << '\n';
    return 0;
}

int cmd_rank(const std::string& results_dir, double display_target, const std::string& out_dir)
{
    Manifest manifest = read_manifest(results_dir);
    SweepConfig cfg = manifest.config;
    cfg.out_dir = results_dir;
    const auto records = load_results(cfg);

    const Targets targets = Targets::standard();
    std::size_t target_index = 0;
    double best_gap = kInf;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const double gap = std::abs(targets.values[t] - display_target);
        if (gap < best_gap) {
            best_gap = gap;
            target_index = t;
        }
    }

    std::vector<int> function_ids = cfg.functions;
    std::sort(function_ids.begin(), function_ids.end());

    for (std::size_t dim : cfg.dims) {
        std::vector<RunRecord> of_dim;
        std::copy_if(records.begin(), records.end(), std::back_inserter(of_dim),
                     [&](const RunRecord& r) { return r.dim == dim; });
        const ErtTable table = ert_table(of_dim, targets);
        const auto ranking = rank_instances(table);

        std::string header = "instance,avg_rank";
        for (int id : function_ids)
            header += ",ert_f" + std::to_string(id);

        Sink sink(out_dir.empty() ? std::string{}
                                  : out_dir + "/rank_d" + std::to_string(dim) + ".csv");
        auto& out = sink.stream();
        if (out_dir.empty())
            out << "# dim=" << dim << '\n';
        out << header << '\n';
        for (const auto& [instance, avg_rank] : ranking) {
            out << instance << ',' << fmt(avg_rank);
            for (int id : function_ids)
                out << ',' << fmt(table.at(instance).at(id)[target_index]);
            out << '\n';
        }
    }
    return 0;
}

int cmd_ecdf(const std::string& results_dir, const std::string& group_arg, std::size_t dim_filter,
             std::size_t points, const std::string& out)
{
    Manifest manifest = read_manifest(results_dir);
    SweepConfig cfg = manifest.config;
    cfg.out_dir = results_dir;
    const auto records = load_results(cfg);

    int group = 0; // 0 = all
    if (group_arg != "all") {
        try {
            group = std::stoi(group_arg);
        } catch (const std::exception&) {
            for (int g = 1; g <= 5; ++g)
                if (group_arg == group_name(g))
                    group = g;
        }
        if (group < 1 || group > 5)
            throw InvalidConfig("--group must be all, 1..5, or a group name");
    }

    std::map<int, int> group_of; // function id -> group
    for (const auto& fn : suite(2))
        group_of[fn.id] = fn.group;

    std::vector<RunRecord> selected;
    for (const auto& rec : records) {
        if (group != 0 && group_of.at(rec.function_id) != group)
            continue;
        if (dim_filter != 0 && rec.dim != dim_filter)
            continue;
        selected.push_back(rec);
    }
    if (selected.empty())
        throw MissingData("no records match the requested group/dim");

    std::uint64_t max_evals = 1;
    for (const auto& rec : selected)
        max_evals = std::max(max_evals, rec.total_evals);
    const auto grid = log_eval_grid(max_evals, points);
    const Targets targets = Targets::standard();
    const std::string group_label = group == 0 ? "all" : group_name(group);

    std::set<std::string> instances;
    for (const auto& rec : selected)
        instances.insert(rec.instance);

    Sink sink(out);
    auto& stream = sink.stream();
    stream << "instance,group,evals,fraction\n";
    for (const auto& instance : instances) {
        std::vector<RunRecord> of_instance;
        std::copy_if(selected.begin(), selected.end(), std::back_inserter(of_instance),
                     [&](const RunRecord& r) { return r.instance == instance; });
        for (const auto& [evals, fraction] : ecdf(of_instance, targets, grid))
            stream << instance << ',' << group_label << ',' << evals << ',' << fmt(fraction)
                   << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"modular PSO/DE/hybrid swarm optimization benchmark"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "execute a single instance run");
    std::string run_instance;
    int run_function = 1;
    std::size_t run_dim = 5;
    std::uint64_t run_seed = 1;
    std::uint64_t run_budget = 10000;
    std::size_t run_pop = 5;
    std::string run_out;
    run_cmd->add_option("--instance", run_instance, "instance name, e.g. H_B_L_PB_B_U2")
        ->required();
    run_cmd->add_option("--function", run_function, "suite function id (1..10)");
    run_cmd->add_option("--dim", run_dim, "problem dimension (>= 2)");
    run_cmd->add_option("--seed", run_seed, "run seed");
    run_cmd->add_option("--budget-multiplier", run_budget, "max evaluations per dimension");
    run_cmd->add_option("--pop-multiplier", run_pop, "population size per dimension");
    run_cmd->add_option("--out", run_out, "write the CSV here instead of stdout");

    auto* sweep_cmd = app.add_subcommand("sweep", "run an instance x function x dim grid");
    std::string sweep_config, sweep_instances, sweep_functions, sweep_dims, sweep_out;
    std::size_t sweep_runs = 30;
    std::uint64_t sweep_seed = 1;
    std::uint64_t sweep_budget = 10000;
    std::size_t sweep_pop = 5;
    int sweep_workers = 1;
    sweep_cmd->add_option("--config", sweep_config, "JSON config mirroring the sweep fields");
    sweep_cmd->add_option("--instances", sweep_instances,
                          "comma-separated names or all/pso/de/hybrid");
    sweep_cmd->add_option("--functions", sweep_functions, "comma-separated ids or 'all'");
    sweep_cmd->add_option("--dims", sweep_dims, "comma-separated dimensions");
    sweep_cmd->add_option("--runs", sweep_runs, "independent runs per tuple (default 30)");
    sweep_cmd->add_option("--master-seed", sweep_seed, "sweep master seed");
    sweep_cmd->add_option("--budget-multiplier", sweep_budget,
                          "max evaluations per dimension (default 10000)");
    sweep_cmd->add_option("--pop-multiplier", sweep_pop, "population size per dimension (default 5)");
    sweep_cmd->add_option("--out", sweep_out, "results directory");
    sweep_cmd->add_option("--workers", sweep_workers, "worker threads (1 = serial reference)");

    auto* rank_cmd = app.add_subcommand("rank", "aggregate a results directory into rank tables");
    std::string rank_results, rank_out;
    double rank_target = 1e-7;
    rank_cmd->add_option("--results", rank_results, "sweep results directory")->required();
    rank_cmd->add_option("--target", rank_target, "target whose ERT columns are shown");
    rank_cmd->add_option("--out-dir", rank_out, "write rank_d<dim>.csv here instead of stdout");

    auto* ecdf_cmd = app.add_subcommand("ecdf", "empirical runtime distributions per instance");
    std::string ecdf_results, ecdf_group = "all", ecdf_out;
    std::size_t ecdf_dim = 0, ecdf_points = 50;
    ecdf_cmd->add_option("--results", ecdf_results, "sweep results directory")->required();
    ecdf_cmd->add_option("--group", ecdf_group, "function group: all, 1..5, or a group name");
    ecdf_cmd->add_option("--dim", ecdf_dim, "restrict to one dimension (0 = pool all)");
    ecdf_cmd->add_option("--points", ecdf_points, "evaluation grid size (default 50)");
    ecdf_cmd->add_option("--out", ecdf_out, "write the CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run_cmd->parsed())
            return cmd_run(run_instance, run_function, run_dim, run_seed, run_budget, run_pop,
                           run_out);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_config, *sweep_cmd, sweep_instances, sweep_functions,
                             sweep_dims, sweep_runs, sweep_seed, sweep_budget, sweep_pop,
                             sweep_out, sweep_workers);
        if (rank_cmd->parsed())
            return cmd_rank(rank_results, rank_target, rank_out);
        if (ecdf_cmd->parsed())
            return cmd_ecdf(ecdf_results, ecdf_group, ecdf_dim, ecdf_points, ecdf_out);
    } catch (const MissingData& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

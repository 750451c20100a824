#include "psode/harness.hpp"

#include "json.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace psode {

namespace {

using nlohmann::json;

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& field, const std::filesystem::path& file)
{
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0')
        throw ParseError("bad numeric field '" + field + "' in " + file.string());
    return v;
}

std::uint64_t parse_u64(const std::string& field, const std::filesystem::path& file)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError("bad integer field '" + field + "' in " + file.string());
    return v;
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

json config_to_json(const SweepConfig& cfg)
{
    // out_dir deliberately omitted: the same results may be read from a
    // moved or copied directory
    return json{{"instances", cfg.instances},
                {"functions", cfg.functions},
                {"dims", cfg.dims},
                {"runs", cfg.runs},
                {"master_seed", cfg.master_seed},
                {"budget_multiplier", cfg.budget_multiplier},
                {"pop_multiplier", cfg.pop_multiplier}};
}

SweepConfig config_from_json(const json& j)
{
    SweepConfig cfg;
    cfg.instances = j.at("instances").get<std::vector<std::string>>();
    cfg.functions = j.at("functions").get<std::vector<int>>();
    cfg.dims = j.at("dims").get<std::vector<std::size_t>>();
    cfg.runs = j.at("runs").get<std::size_t>();
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    cfg.budget_multiplier = j.at("budget_multiplier").get<std::uint64_t>();
    cfg.pop_multiplier = j.at("pop_multiplier").get<std::size_t>();
    return cfg;
}

} // namespace

void SweepConfig::validate() const
{
    if (instances.empty() || functions.empty() || dims.empty())
        throw InvalidConfig("sweep grid must name at least one instance, function, and dimension");
    if (runs < 1 || budget_multiplier < 1 || pop_multiplier < 1)
        throw InvalidConfig("runs and multipliers must be at least 1");
    for (const auto& name : instances)
        parse_name(name); // throws ParseError on a bad name
    for (int id : functions)
        if (id < 1 || id > 10)
            throw InvalidConfig("unknown function id " + std::to_string(id));
    for (std::size_t dim : dims)
        if (dim < 2)
            throw InvalidConfig("suite dimensions start at 2");
}

std::uint64_t tuple_seed(const SweepConfig& cfg, const std::string& instance, int function_id,
                         std::size_t dim, std::size_t run_index)
{
    return derive_seed(cfg.master_seed, instance, function_id, dim, run_index);
}

RunRecord execute_run(const InstanceSpec& spec, const std::string& instance_name,
                      const TestFunction& fn, std::size_t run_index, std::uint64_t seed,
                      std::uint64_t max_evals, std::size_t pop_size)
{
    const RunResult result = run(spec, fn.problem, pop_size, max_evals, seed);
    const Targets targets = Targets::standard(fn.problem.f_opt);

    RunRecord rec;
    rec.instance = instance_name;
    rec.function_id = fn.id;
    rec.dim = fn.problem.dim;
    rec.run_index = run_index;
    rec.seed = seed;
    rec.hits = hits_against(result.improvements, targets);
    rec.total_evals = result.total_evals;
    rec.final_best = result.final_best;
    return rec;
}

std::string records_filename(int function_id, std::size_t dim)
{
    return "f" + std::to_string(function_id) + "_d" + std::to_string(dim) + ".csv";
}

std::string csv_header(const Targets& targets)
{
    std::string header = "instance,function,dim,run,seed,total_evals,final_best";
    for (double t : targets.values) {
        char buf[32];
        std::snprintf(buf, sizeof buf, ",hit_%.0e", t);
        header += buf;
    }
    return header;
}

std::string csv_row(const RunRecord& rec)
{
    std::string row = rec.instance;
    row += ',' + std::to_string(rec.function_id);
    row += ',' + std::to_string(rec.dim);
    row += ',' + std::to_string(rec.run_index);
    row += ',' + std::to_string(rec.seed);
    row += ',' + std::to_string(rec.total_evals);
    row += ',' + format_double(rec.final_best);
    for (const auto& hit : rec.hits) {
        row += ',';
        if (hit)
            row += std::to_string(*hit);
    }
    return row;
}

void write_records_csv(const std::filesystem::path& file, const std::vector<RunRecord>& records,
                       const Targets& targets)
{
    const std::filesystem::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw InvalidConfig("cannot write " + tmp.string());
        out << csv_header(targets) << '\n';
        for (const auto& rec : records)
            out << csv_row(rec) << '\n';
    }
    std::filesystem::rename(tmp, file);
}

std::vector<RunRecord> read_records_csv(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw MissingData("results file not found: " + file.string());

    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty results file: " + file.string());
    const auto header = split_csv(line);
    constexpr std::size_t kFixed = 7; // columns before the per-target hits
    if (header.size() < kFixed || header[0] != "instance")
        throw ParseError("unrecognized results header in " + file.string());
    const std::size_t n_targets = header.size() - kFixed;

    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto fields = split_csv(line);
        if (fields.size() != header.size())
            throw ParseError("row with " + std::to_string(fields.size()) + " fields (expected "
                             + std::to_string(header.size()) + ") in " + file.string());
        RunRecord rec;
        rec.instance = fields[0];
        rec.function_id = static_cast<int>(parse_u64(fields[1], file));
        rec.dim = static_cast<std::size_t>(parse_u64(fields[2], file));
        rec.run_index = static_cast<std::size_t>(parse_u64(fields[3], file));
        rec.seed = parse_u64(fields[4], file);
        rec.total_evals = parse_u64(fields[5], file);
        rec.final_best = parse_double(fields[6], file);
        rec.hits.reserve(n_targets);
        for (std::size_t t = 0; t < n_targets; ++t) {
            const auto& field = fields[kFixed + t];
            if (field.empty())
                rec.hits.emplace_back(std::nullopt);
            else
                rec.hits.emplace_back(parse_u64(field, file));
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<RunRecord> run_cell(const SweepConfig& cfg, const TestFunction& fn, int workers)
{
    const std::size_t dim = fn.problem.dim;
    const std::uint64_t max_evals = cfg.budget_multiplier * dim;
    const std::size_t pop_size = cfg.pop_multiplier * dim;

    struct Tuple {
        const std::string* instance;
        InstanceSpec spec;
        std::size_t run_index;
    };
    std::vector<Tuple> tuples;
    tuples.reserve(cfg.instances.size() * cfg.runs);
    for (const auto& name : cfg.instances) {
        const InstanceSpec spec = parse_name(name);
        for (std::size_t r = 0; r < cfg.runs; ++r)
            tuples.push_back({&name, spec, r});
    }

    // results land at their tuple's slot, so the row order never depends on
    // scheduling
    std::vector<RunRecord> records(tuples.size());
    auto run_one = [&](std::size_t k) {
        const Tuple& t = tuples[k];
        const std::uint64_t seed = tuple_seed(cfg, *t.instance, fn.id, dim, t.run_index);
        records[k] = execute_run(t.spec, *t.instance, fn, t.run_index, seed, max_evals, pop_size);
    };

    if (workers <= 1) {
        // serial reference path; the parallel path must match it byte for byte
        for (std::size_t k = 0; k < tuples.size(); ++k)
            run_one(k);
    } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (long long k = 0; k < static_cast<long long>(tuples.size()); ++k)
            run_one(static_cast<std::size_t>(k));
#else
        for (std::size_t k = 0; k < tuples.size(); ++k)
            run_one(k);
#endif
    }
    return records;
}

void write_manifest(const std::filesystem::path& dir, const Manifest& manifest)
{
    json j{{"format_version", 1},
           {"tool_version", "0.1.0"},
           {"config", config_to_json(manifest.config)},
           {"completed", manifest.completed}};

    const std::filesystem::path file = dir / "manifest.json";
    const std::filesystem::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw InvalidConfig("cannot write " + tmp.string());
        out << j.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, file);
}

Manifest read_manifest(const std::filesystem::path& dir)
{
    const std::filesystem::path file = dir / "manifest.json";
    std::ifstream in(file);
    if (!in)
        throw MissingData("no manifest at " + file.string());

    json j;
    try {
        in >> j;
        Manifest manifest;
        manifest.config = config_from_json(j.at("config"));
        manifest.completed = j.at("completed").get<std::vector<std::string>>();
        return manifest;
    } catch (const json::exception& e) {
        throw ParseError("malformed manifest " + file.string() + ": " + e.what());
    }
}

SweepOutcome run_sweep(const SweepConfig& cfg, int workers)
{
    cfg.validate();
    const std::filesystem::path dir = cfg.out_dir;
    std::filesystem::create_directories(dir);

    Manifest manifest;
    manifest.config = cfg;
    manifest.config.out_dir.clear();
    if (std::filesystem::exists(dir / "manifest.json")) {
        const Manifest existing = read_manifest(dir);
        if (existing.config != manifest.config)
            throw InvalidConfig("results directory " + dir.string()
                                + " holds a sweep with a different configuration");
        manifest.completed = existing.completed;
    }

    std::set<std::string> completed(manifest.completed.begin(), manifest.completed.end());
    SweepOutcome outcome;
    for (std::size_t dim : cfg.dims) {
        const auto functions = suite(dim);
        for (int id : cfg.functions) {
            const std::string filename = records_filename(id, dim);
            if (completed.count(filename) && std::filesystem::exists(dir / filename)) {
                ++outcome.cells_skipped;
                continue;
            }
            const TestFunction& fn = functions[static_cast<std::size_t>(id - 1)];
            const auto records = run_cell(cfg, fn, workers);
            write_records_csv(dir / filename, records, Targets::standard(fn.problem.f_opt));

            completed.insert(filename);
            manifest.completed.assign(completed.begin(), completed.end());
            write_manifest(dir, manifest); // after every cell: interruption-safe
            ++outcome.cells_written;
        }
    }
    return outcome;
}

std::vector<RunRecord> load_results(const SweepConfig& cfg)
{
    const std::filesystem::path dir = cfg.out_dir;
    std::vector<std::string> missing;
    std::vector<RunRecord> all;
    for (std::size_t dim : cfg.dims)
        for (int id : cfg.functions) {
            const std::filesystem::path file = dir / records_filename(id, dim);
            if (!std::filesystem::exists(file)) {
                missing.push_back(records_filename(id, dim));
                continue;
            }
            auto records = read_records_csv(file);
            all.insert(all.end(), std::make_move_iterator(records.begin()),
                       std::make_move_iterator(records.end()));
        }
    if (!missing.empty()) {
        std::string msg = "missing result cells:";
        for (const auto& name : missing)
            msg += ' ' + name;
        throw MissingData(msg);
    }
    return all;
}

} // namespace psode

#ifndef PSODE_HARNESS_HPP
#define PSODE_HARNESS_HPP

#include "psode/bench.hpp"
#include "psode/engine.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace psode {

/// The instance x function x dim x run grid of one sweep, with its budget
/// and population settings. Budgets and population sizes scale with the
/// dimension: max_evals = budget_multiplier * n, M = pop_multiplier * n.
struct SweepConfig {
    std::vector<std::string> instances;
    std::vector<int> functions; // suite function ids
    std::vector<std::size_t> dims;
    std::size_t runs = 30;
    std::uint64_t master_seed = 1;
    std::uint64_t budget_multiplier = 10000;
    std::size_t pop_multiplier = 5;
    std::string out_dir;

    /// Throws InvalidConfig on an empty grid, zero counts/multipliers,
    /// unknown function ids, or instance names that do not parse.
    void validate() const;

    bool operator==(const SweepConfig&) const = default;
};

/// Seed of one (instance, function, dim, run) tuple. Depends only on the
/// master seed and the tuple coordinates, never on scheduling.
std::uint64_t tuple_seed(const SweepConfig& cfg, const std::string& instance, int function_id,
                         std::size_t dim, std::size_t run_index);

/// Executes one tuple end to end: engine run plus target hit extraction.
RunRecord execute_run(const InstanceSpec& spec, const std::string& instance_name,
                      const TestFunction& fn, std::size_t run_index, std::uint64_t seed,
                      std::uint64_t max_evals, std::size_t pop_size);

/// Result-file name of one (function, dim) cell, e.g. "f3_d5.csv".
std::string records_filename(int function_id, std::size_t dim);

// --- CSV persistence --------------------------------------------------------
//
// One header row, one record per row. Missed targets are empty fields;
// doubles carry 17 significant digits so records round-trip exactly.

std::string csv_header(const Targets& targets);
std::string csv_row(const RunRecord& rec);

/// Writes the cell file atomically (temporary file + rename).
void write_records_csv(const std::filesystem::path& file, const std::vector<RunRecord>& records,
                       const Targets& targets);

/// Throws MissingData when the file is absent, ParseError on malformed rows.
std::vector<RunRecord> read_records_csv(const std::filesystem::path& file);

/// All records of one (function, dim) cell, ordered by (instance, run)
/// regardless of the worker count. workers <= 1 runs the serial reference
/// loop; more workers split the independent runs across threads.
std::vector<RunRecord> run_cell(const SweepConfig& cfg, const TestFunction& fn, int workers);

/// Sweep bookkeeping persisted next to the result files. A sweep can be
/// re-submitted after an interruption: completed cells are skipped, and a
/// manifest written by a different configuration aborts the sweep.
struct Manifest {
    SweepConfig config; // out_dir left empty; the manifest's directory is it
    std::vector<std::string> completed;
};

void write_manifest(const std::filesystem::path& dir, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& dir); // MissingData when absent

struct SweepOutcome {
    std::size_t cells_written = 0;
    std::size_t cells_skipped = 0;
};

/// Runs every (function, dim) cell of the config, writing one CSV per cell
/// and updating the manifest after each, so an interrupted sweep resumes
/// where it stopped.
SweepOutcome run_sweep(const SweepConfig& cfg, int workers);

/// Reads every cell file the config describes. Throws MissingData naming the
/// absent cells.
std::vector<RunRecord> load_results(const SweepConfig& cfg);

} // namespace psode

#endif

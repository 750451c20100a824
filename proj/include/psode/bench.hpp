#ifndef PSODE_BENCH_HPP
#define PSODE_BENCH_HPP

#include "psode/core.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace psode {

/// One member of the local test-function suite: a shifted closed-form
/// minimization problem on [-5, 5]^n with its optimum value 0 at the shift.
struct TestFunction {
    int id = 0;   // 1..10
    std::string name;
    int group = 0; // 1..5, see group_name()
    Vec shift;     // optimum location, inside the central 80% of the box
    Problem problem;
};

/// Descriptive label of a function group (1..5): separable, low/moderate
/// conditioning, high conditioning unimodal, multi-modal with adequate
/// structure, multi-modal with weak structure.
const char* group_name(int group);

/// Default seed of the suite's shift vectors. One fixed suite per (dim,
/// seed); runs vary only through their own seeds.
constexpr std::uint64_t kSuiteSeed = 2020;

/// The 10-function suite at the given dimension (two functions per group).
/// Shifts are drawn per function from `seed`. Requires dim >= 2.
std::vector<TestFunction> suite(std::size_t dim, std::uint64_t seed = kSuiteSeed);

/// The target values f_opt + 10^k, k = 1, 0, ..., -8: a strictly decreasing
/// sequence of 10 values.
struct Targets {
    std::vector<double> values;

    static Targets standard(double f_opt = 0.0);
    std::size_t size() const { return values.size(); }
};

/// Everything one run contributes to the benchmark aggregation. `hits[t]` is
/// the number of evaluations consumed when target t was first reached, empty
/// when the run never reached it.
struct RunRecord {
    std::string instance;
    int function_id = 0;
    std::size_t dim = 0;
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    std::vector<std::optional<std::uint64_t>> hits;
    std::uint64_t total_evals = 0;
    double final_best = kInf;

    bool operator==(const RunRecord&) const = default;
};

/// Hitting times of one run against each target, from its improvement
/// trajectory. Monotone by construction: a harder target is hit no earlier
/// than an easier one.
std::vector<std::optional<std::uint64_t>> hits_against(
    const std::vector<Evaluator::Improvement>& improvements, const Targets& targets);

/// Expected running time at one target: the evaluations summed over all runs
/// (hitting runs contribute their hitting time, missing runs their full
/// budget) divided by the number of hitting runs; INF when no run hit. All
/// records must share (instance, function, dim).
double ert(const std::vector<RunRecord>& records, std::size_t target_index);

/// instance -> function id -> ERT per target index.
using ErtTable = std::map<std::string, std::map<int, std::vector<double>>>;

/// ERTs of every (instance, function, target) covered by the records, which
/// must all share one dimension.
ErtTable ert_table(const std::vector<RunRecord>& records, const Targets& targets);

/// Ranks 1..N with ties averaged; INF entries tie with each other at the
/// bottom.
std::vector<double> fractional_ranks(const std::vector<double>& values);

/// Average rank of every instance: rank by ERT per (function, target), ties
/// averaged, INF at the bottom; mean over targets per function; mean over
/// functions. Sorted ascending. Throws MissingData unless every instance
/// covers the same (function, target) grid.
std::vector<std::pair<std::string, double>> rank_instances(const ErtTable& table);

/// Log-spaced evaluation-count grid from 1 to max_evals (inclusive).
std::vector<std::uint64_t> log_eval_grid(std::uint64_t max_evals, std::size_t points = 50);

/// Empirical cumulative distribution of hitting times: at each grid point,
/// the fraction of (run, target) pairs already hit. Non-decreasing, in
/// [0, 1].
std::vector<std::pair<std::uint64_t, double>> ecdf(const std::vector<RunRecord>& records,
                                                   const Targets& targets,
                                                   const std::vector<std::uint64_t>& eval_grid);

} // namespace psode

#endif

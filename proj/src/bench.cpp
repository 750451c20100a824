#include "psode/bench.hpp"

#include "psode/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace psode {

namespace {

double sphere(std::span<const double> z)
{
    double s = 0.0;
    for (double v : z)
        s += v * v;
    return s;
}

double ellipsoid(std::span<const double> z)
{
    const std::size_t n = z.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += std::pow(10.0, 6.0 * static_cast<double>(i) / static_cast<double>(n - 1)) * z[i] * z[i];
    return s;
}

/// quadratic with a 100x penalty on the positive orthant, skewing the
/// level sets into a sector around the optimum
double skewed_sector(std::span<const double> z)
{
    double s = 0.0;
    for (double v : z) {
        const double sv = v > 0.0 ? 100.0 * v : v;
        s += sv * sv;
    }
    return s;
}

double rosenbrock(std::span<const double> z)
{
    const std::size_t n = z.size();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double yi = z[i] + 1.0; // classic form has its optimum at all-ones
        const double yn = z[i + 1] + 1.0;
        const double a = yi * yi - yn;
        const double b = yi - 1.0;
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double bent_cigar(std::span<const double> z)
{
    double s = z[0] * z[0];
    for (std::size_t i = 1; i < z.size(); ++i)
        s += 1e6 * z[i] * z[i];
    return s;
}

double different_powers(std::span<const double> z)
{
    const std::size_t n = z.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += std::pow(std::abs(z[i]),
                      2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(n - 1));
    return s;
}

double rastrigin(std::span<const double> z)
{
    double s = 10.0 * static_cast<double>(z.size());
    for (double v : z)
        s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
    return s;
}

double griewank(std::span<const double> z)
{
    double sum = 0.0;
    double prod = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        sum += z[i] * z[i] / 4000.0;
        prod *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return 1.0 + sum - prod;
}

double schaffers_f7(std::span<const double> z)
{
    const std::size_t n = z.size();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double si = std::sqrt(z[i] * z[i] + z[i + 1] * z[i + 1]);
        const double sin_term = std::sin(50.0 * std::pow(si, 0.2));
        acc += std::sqrt(si) * (1.0 + sin_term * sin_term);
    }
    acc /= static_cast<double>(n - 1);
    return acc * acc;
}

/// two-funnel Rastrigin variant: a second, wider basin centered at -2.5 per
/// component competes with the global funnel at the origin
double double_funnel_rastrigin(std::span<const double> z)
{
    const std::size_t n = z.size();
    const double mu = -2.5, d = 1.0, s = 0.9;
    double sphere_term = 0.0;
    double funnel_term = d * static_cast<double>(n);
    double cos_sum = 0.0;
    for (double v : z) {
        sphere_term += v * v;
        funnel_term += s * (v - mu) * (v - mu);
        cos_sum += std::cos(2.0 * std::numbers::pi * v);
    }
    return std::min(sphere_term, funnel_term) + 10.0 * (static_cast<double>(n) - cos_sum);
}

using Kernel = double (*)(std::span<const double>);

struct CatalogueEntry {
    int id;
    const char* name;
    int group;
    Kernel kernel;
};

constexpr CatalogueEntry kCatalogue[] = {
    {1, "sphere", 1, sphere},
    {2, "ellipsoid", 1, ellipsoid},
    {3, "skewed-sector", 2, skewed_sector},
    {4, "rosenbrock", 2, rosenbrock},
    {5, "bent-cigar", 3, bent_cigar},
    {6, "different-powers", 3, different_powers},
    {7, "rastrigin", 4, rastrigin},
    {8, "griewank", 4, griewank},
    {9, "schaffers-f7", 5, schaffers_f7},
    {10, "double-funnel-rastrigin", 5, double_funnel_rastrigin},
};

} // namespace

const char* group_name(int group)
{
    switch (group) {
    case 1: return "separable";
    case 2: return "low-moderate-conditioning";
    case 3: return "high-conditioning-unimodal";
    case 4: return "multimodal-adequate-structure";
    case 5: return "multimodal-weak-structure";
    }
    return "unknown";
}

std::vector<TestFunction> suite(std::size_t dim, std::uint64_t seed)
{
    if (dim < 2)
        throw InvalidConfig("test suite requires dim >= 2");

    std::vector<TestFunction> out;
    out.reserve(std::size(kCatalogue));
    for (const auto& entry : kCatalogue) {
        TestFunction fn;
        fn.id = entry.id;
        fn.name = entry.name;
        fn.group = entry.group;

        // per-function shift stream, independent of suite iteration order
        RngStream rng(fnv1a64(static_cast<std::uint64_t>(entry.id), fnv1a64(seed, 0xcbf29ce484222325ull)));
        fn.shift.resize(dim);
        for (auto& s : fn.shift)
            s = rng.uniform(-4.0, 4.0); // central 80% of the box

        fn.problem.dim = dim;
        fn.problem.lower.assign(dim, -5.0);
        fn.problem.upper.assign(dim, 5.0);
        fn.problem.f_opt = 0.0;
        fn.problem.objective = [kernel = entry.kernel, shift = fn.shift](std::span<const double> x) {
            Vec z(x.size());
            for (std::size_t j = 0; j < x.size(); ++j)
                z[j] = x[j] - shift[j];
            return kernel(z);
        };
        out.push_back(std::move(fn));
    }
    return out;
}

Targets Targets::standard(double f_opt)
{
    Targets t;
    t.values.reserve(10);
    for (int k = 1; k >= -8; --k)
        t.values.push_back(f_opt + std::pow(10.0, k));
    return t;
}

std::vector<std::optional<std::uint64_t>> hits_against(
    const std::vector<Evaluator::Improvement>& improvements, const Targets& targets)
{
    std::vector<std::optional<std::uint64_t>> hits(targets.size());
    // improvements are decreasing in best_f and targets are decreasing too,
    // so a single forward sweep finds every first-hit time
    std::size_t t = 0;
    for (const auto& imp : improvements)
        while (t < targets.size() && imp.best_f <= targets.values[t])
            hits[t++] = imp.evals;
    return hits;
}

double ert(const std::vector<RunRecord>& records, std::size_t target_index)
{
    if (records.empty())
        throw InvalidConfig("ERT needs at least one run record");

    std::uint64_t evals = 0;
    std::size_t succ = 0;
    for (const auto& rec : records) {
        const auto& hit = rec.hits.at(target_index);
        if (hit) {
            evals += *hit;
            ++succ;
        } else {
            evals += rec.total_evals;
        }
    }
    if (succ == 0)
        return kInf;
    return static_cast<double>(evals) / static_cast<double>(succ);
}

ErtTable ert_table(const std::vector<RunRecord>& records, const Targets& targets)
{
    std::map<std::string, std::map<int, std::vector<RunRecord>>> grouped;
    for (const auto& rec : records)
        grouped[rec.instance][rec.function_id].push_back(rec);

    ErtTable table;
    for (const auto& [instance, by_function] : grouped)
        for (const auto& [function_id, runs] : by_function) {
            auto& cell = table[instance][function_id];
            cell.reserve(targets.size());
            for (std::size_t t = 0; t < targets.size(); ++t)
                cell.push_back(ert(runs, t));
        }
    return table;
}

std::vector<double> fractional_ranks(const std::vector<double>& values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        // [i, j) is a tie group; INF entries compare equal and so tie as well
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]])
            ++j;
        const double shared = static_cast<double>(i + 1 + j) / 2.0; // mean of ranks i+1 .. j
        for (std::size_t k = i; k < j; ++k)
            ranks[order[k]] = shared;
        i = j;
    }
    return ranks;
}

std::vector<std::pair<std::string, double>> rank_instances(const ErtTable& table)
{
    if (table.empty())
        return {};

    const auto& reference = table.begin()->second;
    for (const auto& [instance, by_function] : table) {
        if (by_function.size() != reference.size())
            throw MissingData("instance '" + instance + "' covers a different function set");
        for (const auto& [function_id, erts] : by_function) {
            const auto ref = reference.find(function_id);
            if (ref == reference.end())
                throw MissingData("instance '" + instance + "' covers function "
                                  + std::to_string(function_id) + " missing elsewhere");
            if (erts.size() != ref->second.size())
                throw MissingData("instance '" + instance + "' covers a different target count on function "
                                  + std::to_string(function_id));
        }
    }

    std::vector<std::string> instances;
    instances.reserve(table.size());
    for (const auto& [instance, _] : table)
        instances.push_back(instance);

    std::vector<double> avg(instances.size(), 0.0);
    for (const auto& [function_id, ref_erts] : reference) {
        std::vector<double> func_sum(instances.size(), 0.0);
        for (std::size_t t = 0; t < ref_erts.size(); ++t) {
            std::vector<double> column(instances.size());
            for (std::size_t i = 0; i < instances.size(); ++i)
                column[i] = table.at(instances[i]).at(function_id)[t];
            const auto ranks = fractional_ranks(column);
            for (std::size_t i = 0; i < instances.size(); ++i)
                func_sum[i] += ranks[i];
        }
        for (std::size_t i = 0; i < instances.size(); ++i)
            avg[i] += func_sum[i] / static_cast<double>(ref_erts.size());
    }
    for (auto& a : avg)
        a /= static_cast<double>(reference.size());

    std::vector<std::pair<std::string, double>> out;
    out.reserve(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i)
        out.emplace_back(instances[i], avg[i]);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    return out;
}

std::vector<std::uint64_t> log_eval_grid(std::uint64_t max_evals, std::size_t points)
{
    max_evals = std::max<std::uint64_t>(max_evals, 1);
    if (points == 1)
        return {max_evals};

    std::vector<std::uint64_t> grid;
    grid.reserve(points);
    const double log_max = std::log(static_cast<double>(max_evals));
    for (std::size_t k = 0; k < points; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(points - 1);
        grid.push_back(static_cast<std::uint64_t>(std::llround(std::exp(f * log_max))));
    }
    return grid;
}

std::vector<std::pair<std::uint64_t, double>> ecdf(const std::vector<RunRecord>& records,
                                                   const Targets& targets,
                                                   const std::vector<std::uint64_t>& eval_grid)
{
    std::vector<std::uint64_t> hit_times;
    for (const auto& rec : records) {
        if (rec.hits.size() != targets.size())
            throw InvalidConfig("run record target count differs from the target list");
        for (const auto& hit : rec.hits)
            if (hit)
                hit_times.push_back(*hit);
    }
    std::sort(hit_times.begin(), hit_times.end());

    const double denom = static_cast<double>(records.size()) * static_cast<double>(targets.size());
    std::vector<std::pair<std::uint64_t, double>> out;
    out.reserve(eval_grid.size());
    for (std::uint64_t e : eval_grid) {
        const auto upto = std::upper_bound(hit_times.begin(), hit_times.end(), e);
        const double count = static_cast<double>(upto - hit_times.begin());
        out.emplace_back(e, denom == 0.0 ? 0.0 : count / denom);
    }
    return out;
}

} // namespace psode

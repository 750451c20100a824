#include "psode/core.hpp"

#include <algorithm>
#include <cassert>

namespace psode {

std::optional<double> evaluate(const Problem& problem, std::span<const double> x, Budget& budget)
{
    assert(x.size() == problem.dim);
    if (budget.exhausted())
        return std::nullopt;
    ++budget.used;
    return problem.objective(x);
}

Swarm init_population(const Problem& problem, std::size_t M, RngStream& rng)
{
    if (M < 5)
        throw InvalidConfig("population size must be at least 5, got " + std::to_string(M));

    Swarm swarm(M);
    for (auto& pt : swarm) {
        pt.x.resize(problem.dim);
        for (std::size_t j = 0; j < problem.dim; ++j)
            pt.x[j] = rng.uniform(problem.lower[j], problem.upper[j]);
        pt.v.assign(problem.dim, 0.0);
        pt.p = pt.x;
        pt.f_best = kInf;
        pt.f_cur = kInf;
    }
    return swarm;
}

std::vector<std::size_t> repair(Vec& x, const Problem& problem)
{
    std::vector<std::size_t> clamped;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double c = std::clamp(x[j], problem.lower[j], problem.upper[j]);
        if (c != x[j]) {
            x[j] = c;
            clamped.push_back(j);
        }
    }
    return clamped;
}

} // namespace psode

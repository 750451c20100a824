#ifndef PSODE_CORE_HPP
#define PSODE_CORE_HPP

#include "psode/rng.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace psode {

class InvalidConfig : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class MissingData : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

using Vec = std::vector<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// A box-constrained minimization problem. The objective must be
/// deterministic; bounds must satisfy lower[i] < upper[i].
struct Problem {
    std::size_t dim = 0;
    Vec lower;
    Vec upper;
    std::function<double(std::span<const double>)> objective;
    double f_opt = 0.0;
};

/// Function-evaluation budget. `used` never exceeds `max_evals` and is
/// monotone over a run.
struct Budget {
    std::uint64_t max_evals = 0;
    std::uint64_t used = 0;

    bool exhausted() const { return used >= max_evals; }
};

/// One population member. `p`/`f_best` are the personal-best memory; DE keeps
/// p mirrored to x. `f_cur` is the fitness of the current position.
struct Particle {
    Vec x;
    Vec v;
    Vec p;
    double f_best = kInf;
    double f_cur = kInf;
};

using Swarm = std::vector<Particle>;

/// Evaluates the objective at x, charging the budget. Returns nothing when
/// the budget was already exhausted; the caller must then end the run.
std::optional<double> evaluate(const Problem& problem, std::span<const double> x, Budget& budget);

/// Uniform-random positions, zero velocities, p = x, f_best = +inf until the
/// first evaluation. Throws InvalidConfig when M < 5 (smallest size serving
/// every mutation operator's distinct-index requirement).
Swarm init_population(const Problem& problem, std::size_t M, RngStream& rng);

/// Clamps x into the box in place and returns the indices that were clamped.
/// Callers moving PSO particles zero the matching velocity components.
std::vector<std::size_t> repair(Vec& x, const Problem& problem);

/// Objective + budget + best-so-far bookkeeping for one run. Every
/// improvement is recorded at the evaluation index where it was observed,
/// which is what ERT hitting times are computed from.
class Evaluator
{
public:
    struct Improvement {
        std::uint64_t evals; // budget.used after the improving evaluation
        double best_f;

        bool operator==(const Improvement&) const = default;
    };

    Evaluator(const Problem& problem, Budget budget)
        : problem_(&problem), budget_(budget)
    {
    }

    /// Charged evaluation; nullopt when the budget ran out.
    std::optional<double> evaluate(std::span<const double> x)
    {
        auto f = psode::evaluate(*problem_, x, budget_);
        if (f && *f < best_) {
            best_ = *f;
            improvements_.push_back({budget_.used, best_});
        }
        return f;
    }

    const Problem& problem() const { return *problem_; }
    const Budget& budget() const { return budget_; }
    double budget_fraction() const
    {
        return static_cast<double>(budget_.used) / static_cast<double>(budget_.max_evals);
    }
    double best() const { return best_; }
    const std::vector<Improvement>& improvements() const { return improvements_; }

private:
    const Problem* problem_;
    Budget budget_;
    double best_ = kInf;
    std::vector<Improvement> improvements_;
};

} // namespace psode

#endif

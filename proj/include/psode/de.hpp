#ifndef PSODE_DE_HPP
#define PSODE_DE_HPP

#include "psode/core.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace psode {

enum class MutationKind {
    Rand1,          // baseline; code R1, not in the default instance space
    Best1,          // code B1
    Best2,          // code B2
    TargetToBest1,  // code T1
    TargetToPBest1, // code PB
    TwoOpt1,        // code O1
};

enum class CrossoverKind {
    Binomial,    // code B
    Exponential, // code E
};

/// JADE state: location parameters of the F (Cauchy) and Cr (Normal)
/// sampling distributions, adapted from the generation's successful pairs.
struct AdaptiveParams {
    double mu_f = 0.5;
    double mu_cr = 0.5;
    double c = 0.1; // adaptation rate
    std::vector<double> success_f;
    std::vector<double> success_cr;
};

/// p of target-to-pbest mutation; fixed across all instances.
constexpr double kPTop = 0.1;

namespace detail {

/// `count` mutually distinct indices in [0, M), all different from `self`,
/// drawn by rejection in order.
template <RandomSource R>
std::array<std::size_t, 4> distinct_indices(std::size_t count, std::size_t self, std::size_t M,
                                            R& rng)
{
    assert(count <= 4);
    std::array<std::size_t, 4> out{};
    for (std::size_t k = 0; k < count; ++k) {
        std::size_t r;
        bool fresh;
        do {
            r = rng.uniform_int(M);
            fresh = r != self;
            for (std::size_t m = 0; m < k; ++m)
                fresh = fresh && r != out[m];
        } while (!fresh);
        out[k] = r;
    }
    return out;
}

inline std::size_t best_index(const std::vector<double>& fs)
{
    return static_cast<std::size_t>(
        std::min_element(fs.begin(), fs.end()) - fs.begin()); // ties -> lowest index
}

/// Indices of the top ceil(p*M) members by fitness (at least one), ties
/// ordered by index.
inline std::vector<std::size_t> top_p_indices(const std::vector<double>& fs, double p)
{
    const std::size_t M = fs.size();
    const std::size_t k =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(p * static_cast<double>(M))));
    std::vector<std::size_t> order(M);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    order.resize(std::min(k, M));
    return order;
}

} // namespace detail

/// Donor vector for member i. `xs`/`fs` are the population's positions and
/// fitnesses; donors are not repaired (crossover output is). Throws
/// InvalidConfig when the population cannot supply the kind's distinct
/// indices.
template <RandomSource R>
Vec mutate(MutationKind kind, std::size_t i, const std::vector<Vec>& xs,
           const std::vector<double>& fs, double F, double p_top, R& rng)
{
    const std::size_t M = xs.size();
    const std::size_t needed = kind == MutationKind::Best2 ? 4
                             : (kind == MutationKind::Rand1 || kind == MutationKind::TwoOpt1) ? 3
                                                                                              : 2;
    if (M < needed + 1)
        throw InvalidConfig("population too small for mutation operator");

    const std::size_t n = xs[i].size();
    Vec v(n);
    switch (kind) {
    case MutationKind::Rand1: {
        const auto r = detail::distinct_indices(3, i, M, rng);
        for (std::size_t j = 0; j < n; ++j)
            v[j] = xs[r[0]][j] + F * (xs[r[1]][j] - xs[r[2]][j]);
        break;
    }
    case MutationKind::Best1: {
        const std::size_t best = detail::best_index(fs);
        const auto r = detail::distinct_indices(2, i, M, rng);
        for (std::size_t j = 0; j < n; ++j)
            v[j] = xs[best][j] + F * (xs[r[0]][j] - xs[r[1]][j]);
        break;
    }
    case MutationKind::Best2: {
        const std::size_t best = detail::best_index(fs);
        const auto r = detail::distinct_indices(4, i, M, rng);
        for (std::size_t j = 0; j < n; ++j)
            v[j] = xs[best][j] + F * (xs[r[0]][j] - xs[r[1]][j]) + F * (xs[r[2]][j] - xs[r[3]][j]);
        break;
    }
    case MutationKind::TargetToBest1: {
        const std::size_t best = detail::best_index(fs);
        const auto r = detail::distinct_indices(2, i, M, rng);
        for (std::size_t j = 0; j < n; ++j)
            v[j] = xs[i][j] + F * (xs[best][j] - xs[i][j]) + F * (xs[r[0]][j] - xs[r[1]][j]);
        break;
    }
    case MutationKind::TargetToPBest1: {
        const auto top = detail::top_p_indices(fs, p_top);
        const std::size_t pbest = top[rng.uniform_int(top.size())];
        const auto r = detail::distinct_indices(2, i, M, rng);
        for (std::size_t j = 0; j < n; ++j)
            v[j] = xs[i][j] + F * (xs[pbest][j] - xs[i][j]) + F * (xs[r[0]][j] - xs[r[1]][j]);
        break;
    }
    case MutationKind::TwoOpt1: {
        const auto r = detail::distinct_indices(3, i, M, rng);
        // base and first difference swap when r2 beats r1
        const std::size_t a = fs[r[0]] < fs[r[1]] ? r[0] : r[1];
        const std::size_t b = fs[r[0]] < fs[r[1]] ? r[1] : r[0];
        for (std::size_t j = 0; j < n; ++j)
            v[j] = xs[a][j] + F * (xs[b][j] - xs[r[2]][j]);
        break;
    }
    }
    return v;
}

/// Binomial crossover: each component comes from the donor with probability
/// Cr, and the uniformly drawn j_rand component always does. One uniform is
/// drawn per component regardless of j_rand.
template <RandomSource R>
Vec crossover_binomial(const Vec& target, const Vec& donor, double cr, R& rng)
{
    const std::size_t n = target.size();
    const std::size_t j_rand = rng.uniform_int(n);
    Vec trial(n);
    for (std::size_t j = 0; j < n; ++j) {
        const bool from_donor = rng.uniform01() <= cr || j == j_rand;
        trial[j] = from_donor ? donor[j] : target[j];
    }
    return trial;
}

/// Exponential crossover: a run of q consecutive (mod n) components starting
/// at a uniform p comes from the donor. q is geometric with ratio Cr and a
/// run longer than n copies every component once.
template <RandomSource R>
Vec crossover_exponential(const Vec& target, const Vec& donor, double cr, R& rng)
{
    const std::size_t n = target.size();
    const std::size_t start = rng.uniform_int(n);

    std::size_t q = 0;
    do {
        ++q;
    } while (rng.uniform01() <= cr && q <= n);

    Vec trial = target;
    const std::size_t len = std::min(q, n);
    for (std::size_t k = 0; k < len; ++k)
        trial[(start + k) % n] = donor[(start + k) % n];
    return trial;
}

/// Per-member control parameters: F from Cauchy(mu_f, 0.1) resampled while
/// <= 0 and truncated to 1, Cr from Normal(mu_cr, 0.1) clipped to [0, 1].
template <RandomSource R>
std::pair<double, double> jade_sample(const AdaptiveParams& prm, R& rng)
{
    double f;
    do {
        f = rng.cauchy(prm.mu_f, 0.1);
    } while (f <= 0.0);
    f = std::min(f, 1.0);

    const double cr = std::clamp(rng.normal(prm.mu_cr, 0.1), 0.0, 1.0);
    return {f, cr};
}

/// End-of-generation adaptation: mu_f moves toward the Lehmer mean of the
/// successful F values, mu_cr toward the arithmetic mean of the successful Cr
/// values. No-op when nothing succeeded; the success lists are cleared.
void jade_update(AdaptiveParams& prm);

/// One DE generation (mutation, crossover, repair, elitist 1-to-1 selection,
/// JADE bookkeeping). Replacements are visible to later mutations within the
/// same generation. Returns false when the budget ran out mid-generation.
bool de_step(Swarm& swarm, MutationKind mutation, CrossoverKind crossover, AdaptiveParams& adaptive,
             Evaluator& eval, RngStream& rng);

} // namespace psode

#endif

#ifndef PSODE_PSO_HPP
#define PSODE_PSO_HPP

#include "psode/core.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace psode {

enum class VelocityKind {
    Original,          // Kennedy/Eberhart update with v_max clamp; not part of the instance space
    Inertia,           // fixed inertia weight, code I
    DecreasingInertia, // 0.9 -> 0.4 over the budget, code D
    Fips,              // fully informed, constriction chi, code F
    BareBones,         // Gaussian position sampling, no velocities, code B
};

enum class TopologyKind {
    LocalBest,        // ring, code L
    GlobalBest,       // fully connected, code G
    VonNeumann,       // toroidal grid, code N
    Increasing,       // ring growing to fully connected, code I
    DynamicMultiSwarm // random clusters of 3, code M
};

/// Constriction coefficient chi = 2 / (phi - 2 + sqrt(phi^2 - 4 phi)), phi > 4.
inline double fips_chi(double phi)
{
    return 2.0 / (phi - 2.0 + std::sqrt(phi * phi - 4.0 * phi));
}

/// PSO hyperparameters at their standard settings; v_max (used only by the
/// Original strategy) is half the box range per component.
struct PsoParams {
    double phi1 = 1.49618;
    double phi2 = 1.49618;
    double phi = 4.1; // FIPS
    double chi = fips_chi(4.1);
    double omega = 0.7298;       // fixed inertia
    double omega_start = 0.9;    // decreasing inertia schedule
    double omega_end = 0.4;
    Vec v_max;

    static PsoParams for_problem(const Problem& problem)
    {
        PsoParams prm;
        prm.v_max.resize(problem.dim);
        for (std::size_t j = 0; j < problem.dim; ++j)
            prm.v_max[j] = (problem.upper[j] - problem.lower[j]) / 2.0;
        return prm;
    }
};

/// Linear interpolation of the decreasing-inertia weight over the fraction of
/// the evaluation budget already spent.
inline double decreasing_omega(const PsoParams& prm, double budget_fraction)
{
    return prm.omega_start + (prm.omega_end - prm.omega_start) * budget_fraction;
}

/// Neighborhood structure for one run. Every particle is a member of its own
/// neighborhood. One neighborhoods() call corresponds to one generation: the
/// dynamic multi-swarm topology reshuffles its clusters every 5th call, and
/// the increasing topology grows its degree with the budget fraction.
class NeighborhoodGraph
{
public:
    NeighborhoodGraph(TopologyKind kind, std::size_t M);

    std::vector<std::vector<std::size_t>> neighborhoods(double budget_fraction, RngStream& rng);

    TopologyKind kind() const { return kind_; }
    std::size_t size() const { return M_; }

private:
    TopologyKind kind_;
    std::size_t M_;
    std::uint64_t generation_ = 0;
    std::vector<std::size_t> cluster_of_; // DMS assignment

    void reshuffle_clusters(RngStream& rng);
};

/// Index of the best personal best within each particle's neighborhood
/// (argmin of f_best, ties to the lowest index).
std::vector<std::size_t> neighborhood_best(const std::vector<double>& pbest_f,
                                           const std::vector<std::vector<std::size_t>>& hoods);

// --- velocity updating strategies -----------------------------------------
//
// All strategies draw one uniform per vector component; FIPS draws one per
// neighbor per component, iterating neighbors in index order.

/// v' = v + U(0,phi1) (x) (p - x) + U(0,phi2) (x) (g - x), clamped to [-v_max, v_max].
template <RandomSource R>
Vec velocity_original(const Particle& pt, const Vec& g, const PsoParams& prm, R& rng)
{
    const std::size_t n = pt.x.size();
    Vec v(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double vj = pt.v[j] + rng.uniform(0.0, prm.phi1) * (pt.p[j] - pt.x[j])
                        + rng.uniform(0.0, prm.phi2) * (g[j] - pt.x[j]);
        v[j] = std::clamp(vj, -prm.v_max[j], prm.v_max[j]);
    }
    return v;
}

/// v' = omega v + U(0,phi1) (x) (p - x) + U(0,phi2) (x) (g - x); no clamp.
template <RandomSource R>
Vec velocity_inertia(const Particle& pt, const Vec& g, double omega_now, const PsoParams& prm,
                     R& rng)
{
    const std::size_t n = pt.x.size();
    Vec v(n);
    for (std::size_t j = 0; j < n; ++j)
        v[j] = omega_now * pt.v[j] + rng.uniform(0.0, prm.phi1) * (pt.p[j] - pt.x[j])
             + rng.uniform(0.0, prm.phi2) * (g[j] - pt.x[j]);
    return v;
}

/// v' = chi (v + 1/|N| sum_{p in N} U(0,phi) (x) (p - x)), N the neighborhood
/// personal bests (self included).
template <RandomSource R>
Vec velocity_fips(const Particle& pt, const std::vector<Vec>& pbest_pos,
                  const std::vector<std::size_t>& hood, const PsoParams& prm, R& rng)
{
    const std::size_t n = pt.x.size();
    Vec sum(n, 0.0);
    for (std::size_t k : hood) {
        const Vec& nb = pbest_pos[k];
        for (std::size_t j = 0; j < n; ++j)
            sum[j] += rng.uniform(0.0, prm.phi) * (nb[j] - pt.x[j]);
    }
    Vec v(n);
    const double inv = 1.0 / static_cast<double>(hood.size());
    for (std::size_t j = 0; j < n; ++j)
        v[j] = prm.chi * (pt.v[j] + inv * sum[j]);
    return v;
}

/// Bare-bones position: x_j ~ N((p_j + g_j)/2, |p_j - g_j|), the second moment
/// being the variance. The particle's stored velocity is left untouched.
template <RandomSource R>
Vec position_barebones(const Particle& pt, const Vec& g, R& rng)
{
    const std::size_t n = pt.x.size();
    Vec x(n);
    for (std::size_t j = 0; j < n; ++j)
        x[j] = rng.normal((pt.p[j] + g[j]) / 2.0, std::sqrt(std::abs(pt.p[j] - g[j])));
    return x;
}

/// One particle's move: velocity per strategy, position update, box repair
/// with velocity zeroing on clamped components, evaluation. Personal-best
/// fields are carried over from the source unchanged; nullopt when the budget
/// ran out before the evaluation.
std::optional<Particle> pso_move(const Particle& src, VelocityKind kind, const PsoParams& prm,
                                 double budget_fraction, const std::vector<Vec>& pbest_pos,
                                 const std::vector<std::size_t>& hood, std::size_t g_index,
                                 Evaluator& eval, RngStream& rng);

/// One synchronous PSO generation: neighborhood bests from the
/// generation-start personal bests, then per particle move / repair /
/// evaluate / personal-best update. Returns false when the budget was
/// exhausted mid-generation; the swarm stays consistent either way.
bool pso_step(Swarm& swarm, NeighborhoodGraph& topology, VelocityKind kind, const PsoParams& prm,
              Evaluator& eval, RngStream& rng);

} // namespace psode

#endif

#include "psode/pso.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace psode {

namespace {

std::vector<std::vector<std::size_t>> ring_neighborhoods(std::size_t M, std::size_t half_width)
{
    std::vector<std::vector<std::size_t>> hoods(M);
    for (std::size_t i = 0; i < M; ++i) {
        std::vector<std::size_t> set{i};
        for (std::size_t d = 1; d <= half_width; ++d) { // half_width <= M/2
            set.push_back((i + d) % M);
            set.push_back((i + M - d) % M);
        }
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        hoods[i] = std::move(set);
    }
    return hoods;
}

std::vector<std::vector<std::size_t>> full_neighborhoods(std::size_t M)
{
    std::vector<std::size_t> all(M);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return std::vector<std::vector<std::size_t>>(M, all);
}

// Grid rows: the largest divisor of M not exceeding sqrt(M), so the grid is
// as square as M allows (M = 9 -> 3x3, M = 10 -> 2x5, prime M -> 1xM).
std::size_t grid_rows(std::size_t M)
{
    std::size_t rows = 1;
    for (std::size_t r = 1; r * r <= M; ++r)
        if (M % r == 0)
            rows = r;
    return rows;
}

std::vector<std::vector<std::size_t>> von_neumann_neighborhoods(std::size_t M)
{
    const std::size_t rows = grid_rows(M);
    const std::size_t cols = M / rows;
    std::vector<std::vector<std::size_t>> hoods(M);
    for (std::size_t i = 0; i < M; ++i) {
        const std::size_t r = i / cols;
        const std::size_t c = i % cols;
        std::vector<std::size_t> set{
            i,
            ((r + rows - 1) % rows) * cols + c,
            ((r + 1) % rows) * cols + c,
            r * cols + (c + cols - 1) % cols,
            r * cols + (c + 1) % cols,
        };
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        hoods[i] = std::move(set);
    }
    return hoods;
}

} // namespace

NeighborhoodGraph::NeighborhoodGraph(TopologyKind kind, std::size_t M) : kind_(kind), M_(M)
{
    if (M < 5)
        throw InvalidConfig("topology requires population size >= 5");
}

void NeighborhoodGraph::reshuffle_clusters(RngStream& rng)
{
    std::vector<std::size_t> perm(M_);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = M_ - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.uniform_int(i + 1)]);

    // floor(M/3) clusters of 3; the last one absorbs the remainder, giving it
    // size 3 + (M mod 3)
    const std::size_t n_clusters = M_ / 3;
    cluster_of_.assign(M_, n_clusters - 1);
    for (std::size_t k = 0; k < 3 * n_clusters; ++k)
        cluster_of_[perm[k]] = std::min(k / 3, n_clusters - 1);
    for (std::size_t k = 3 * n_clusters; k < M_; ++k)
        cluster_of_[perm[k]] = n_clusters - 1;
}

std::vector<std::vector<std::size_t>> NeighborhoodGraph::neighborhoods(double budget_fraction,
                                                                       RngStream& rng)
{
    switch (kind_) {
    case TopologyKind::LocalBest:
        ++generation_;
        return ring_neighborhoods(M_, 1);
    case TopologyKind::GlobalBest:
        ++generation_;
        return full_neighborhoods(M_);
    case TopologyKind::VonNeumann:
        ++generation_;
        return von_neumann_neighborhoods(M_);
    case TopologyKind::Increasing: {
        ++generation_;
        // half-width 1 (ring) at fraction 0, M/2 (fully connected) at 1
        const std::size_t h_full = M_ / 2;
        const double h = 1.0 + budget_fraction * static_cast<double>(h_full - 1);
        const auto half = static_cast<std::size_t>(std::llround(h));
        return ring_neighborhoods(M_, std::clamp<std::size_t>(half, 1, h_full));
    }
    case TopologyKind::DynamicMultiSwarm: {
        if (generation_ % 5 == 0)
            reshuffle_clusters(rng);
        ++generation_;
        std::vector<std::vector<std::size_t>> hoods(M_);
        for (std::size_t i = 0; i < M_; ++i)
            for (std::size_t k = 0; k < M_; ++k)
                if (cluster_of_[k] == cluster_of_[i])
                    hoods[i].push_back(k);
        return hoods;
    }
    }
    return {};
}

std::vector<std::size_t> neighborhood_best(const std::vector<double>& pbest_f,
                                           const std::vector<std::vector<std::size_t>>& hoods)
{
    std::vector<std::size_t> g(hoods.size());
    for (std::size_t i = 0; i < hoods.size(); ++i) {
        std::size_t best = hoods[i].front();
        for (std::size_t k : hoods[i])
            if (pbest_f[k] < pbest_f[best] || (pbest_f[k] == pbest_f[best] && k < best))
                best = k; // ties go to the lowest index, whatever the hood order
        g[i] = best;
    }
    return g;
}

std::optional<Particle> pso_move(const Particle& src, VelocityKind kind, const PsoParams& prm,
                                 double budget_fraction, const std::vector<Vec>& pbest_pos,
                                 const std::vector<std::size_t>& hood, std::size_t g_index,
                                 Evaluator& eval, RngStream& rng)
{
    const Vec& g = pbest_pos[g_index];
    Particle moved = src;

    if (kind == VelocityKind::BareBones) {
        // velocities are not used; the stored v rides along unchanged
        moved.x = position_barebones(src, g, rng);
    } else {
        switch (kind) {
        case VelocityKind::Original:
            moved.v = velocity_original(src, g, prm, rng);
            break;
        case VelocityKind::Inertia:
            moved.v = velocity_inertia(src, g, prm.omega, prm, rng);
            break;
        case VelocityKind::DecreasingInertia:
            moved.v = velocity_inertia(src, g, decreasing_omega(prm, budget_fraction), prm, rng);
            break;
        case VelocityKind::Fips:
            moved.v = velocity_fips(src, pbest_pos, hood, prm, rng);
            break;
        case VelocityKind::BareBones:
            break;
        }
        for (std::size_t j = 0; j < moved.x.size(); ++j)
            moved.x[j] += moved.v[j];
    }

    for (std::size_t j : repair(moved.x, eval.problem()))
        moved.v[j] = 0.0;

    const auto f = eval.evaluate(moved.x);
    if (!f)
        return std::nullopt;
    moved.f_cur = *f;
    return moved;
}

bool pso_step(Swarm& swarm, NeighborhoodGraph& topology, VelocityKind kind, const PsoParams& prm,
              Evaluator& eval, RngStream& rng)
{
    const std::size_t M = swarm.size();
    const double fraction = eval.budget_fraction();
    const auto hoods = topology.neighborhoods(fraction, rng);
    assert(hoods.size() == M);

    // generation-start snapshot of the personal bests; all moves this
    // generation are informed by it
    std::vector<Vec> pbest_pos(M);
    std::vector<double> pbest_f(M);
    for (std::size_t i = 0; i < M; ++i) {
        pbest_pos[i] = swarm[i].p;
        pbest_f[i] = swarm[i].f_best;
    }
    const auto g = neighborhood_best(pbest_f, hoods);

    for (std::size_t i = 0; i < M; ++i) {
        auto moved = pso_move(swarm[i], kind, prm, fraction, pbest_pos, hoods[i], g[i], eval, rng);
        if (!moved)
            return false;
        if (moved->f_cur < moved->f_best) {
            moved->p = moved->x;
            moved->f_best = moved->f_cur;
        }
        swarm[i] = std::move(*moved);
    }
    return true;
}

} // namespace psode

#ifndef PSODE_ENGINE_HPP
#define PSODE_ENGINE_HPP

#include "psode/core.hpp"
#include "psode/de.hpp"
#include "psode/pso.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace psode {

enum class AlgorithmKind { Pso, De, Hybrid };

enum class SelectionKind {
    Union2,    // best M from P1 u P3, code U2
    Union3,    // best M from P0 u P1 u P3, code U3
    Pairwise2, // per-index best of P1[i], P3[i], code P2
    Pairwise3, // per-index best of P0[i], P1[i], P3[i], code P3
};

/// One point in the instance space: the module choices of a PSO, DE, or
/// hybrid algorithm. PSO instances carry velocity+topology, DE instances
/// mutation+crossover, hybrids all five.
struct InstanceSpec {
    AlgorithmKind kind = AlgorithmKind::Hybrid;
    std::optional<VelocityKind> velocity;
    std::optional<TopologyKind> topology;
    std::optional<MutationKind> mutation;
    std::optional<CrossoverKind> crossover;
    std::optional<SelectionKind> selection;

    /// Throws InvalidConfig unless exactly the kind's modules are present.
    void validate() const;

    bool operator==(const InstanceSpec&) const = default;
};

/// Parses "H_v_t_m_c_s" / "P_v_t" / "D_m_c" names; throws ParseError naming
/// the offending token. parse_name(render_name(s)) == s.
InstanceSpec parse_name(std::string_view name);
std::string render_name(const InstanceSpec& spec);

/// The full instance space: 20 PSO + 10 DE + 800 hybrid = 830 specs with
/// unique names. `include_rand1` additionally enumerates the DE/rand/1
/// baseline (code R1), which is parseable but not part of the standard space.
std::vector<InstanceSpec> enumerate_instances(bool include_rand1 = false);

/// Survivor selection between the parent population P0, the PSO offspring P1,
/// and the DE offspring P3 (all size M, all evaluated). Pairwise compares the
/// i-th members; union takes the best M of the pooled populations. Ties break
/// by (fitness, source order P0 < P1 < P3, index). Selected members keep
/// their own position, velocity, and personal-best state.
Swarm select(SelectionKind kind, const Swarm& p0, const Swarm& p1, const Swarm& p3);

/// select() plus the provenance of each survivor, for JADE bookkeeping:
/// source is 0/1/3 for P0/P1/P3.
struct Selected {
    Swarm swarm;
    std::vector<std::pair<int, std::size_t>> origin;
};
Selected select_detailed(SelectionKind kind, const Swarm& p0, const Swarm& p1, const Swarm& p3);

/// Velocity of a crossover offspring: its displacement from the generating
/// parent position.
Vec recompute_velocity(const Vec& x0, const Vec& x3);

/// Per-run state of a hybrid instance.
struct HybridState {
    PsoParams pso;
    NeighborhoodGraph topology;
    AdaptiveParams adaptive;
};

/// PSO-moved offspring of p0 (one pso_move per member; personal bests carried
/// over, not yet updated). False when the budget ran out; p1 then holds the
/// members moved so far.
bool pso_offspring(const Swarm& p0, const InstanceSpec& spec, HybridState& state, Swarm& p1,
                   Evaluator& eval, RngStream& rng);

/// DE-varied offspring of p0: donor population via mutation (never
/// evaluated), then per-index crossover with displacement velocities, repair,
/// evaluation. `fcr` records the JADE sample used per index.
struct DeOffspring {
    Swarm p3;
    std::vector<std::pair<double, double>> fcr;
    bool complete = false;
};
DeOffspring de_offspring(const Swarm& p0, const InstanceSpec& spec, HybridState& state,
                         Evaluator& eval, RngStream& rng);

/// One hybrid generation: P1 and P3 from P0 (2M evaluations), per-index
/// personal-best updates against both candidates, survivor selection, JADE
/// bookkeeping. On mid-generation budget exhaustion the selection is skipped
/// and the last consistent population is kept.
bool psode_step(Swarm& swarm, const InstanceSpec& spec, HybridState& state, Evaluator& eval,
                RngStream& rng);

/// Best-so-far trajectory of one run: the evaluation indices at which the
/// best seen value improved, plus the totals.
struct RunResult {
    std::vector<Evaluator::Improvement> improvements;
    std::uint64_t total_evals = 0;
    double final_best = kInf;

    bool operator==(const RunResult&) const = default;
};

/// Executes one instance on one problem until the evaluation budget is
/// exhausted. Defaults used by the benchmark harness are M = 5n and
/// max_evals = 10^4 n.
RunResult run(const InstanceSpec& spec, const Problem& problem, std::size_t M,
              std::uint64_t max_evals, std::uint64_t seed);

} // namespace psode

#endif

#include "psode/engine.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace psode {

namespace {

constexpr std::pair<VelocityKind, const char*> kVelocityCodes[] = {
    {VelocityKind::BareBones, "B"},
    {VelocityKind::Fips, "F"},
    {VelocityKind::Inertia, "I"},
    {VelocityKind::DecreasingInertia, "D"},
};
constexpr std::pair<TopologyKind, const char*> kTopologyCodes[] = {
    {TopologyKind::LocalBest, "L"},
    {TopologyKind::GlobalBest, "G"},
    {TopologyKind::VonNeumann, "N"},
    {TopologyKind::Increasing, "I"},
    {TopologyKind::DynamicMultiSwarm, "M"},
};
constexpr std::pair<MutationKind, const char*> kMutationCodes[] = {
    {MutationKind::Best1, "B1"},
    {MutationKind::Best2, "B2"},
    {MutationKind::TargetToBest1, "T1"},
    {MutationKind::TargetToPBest1, "PB"},
    {MutationKind::TwoOpt1, "O1"},
    {MutationKind::Rand1, "R1"}, // extension, not enumerated by default
};
constexpr std::pair<CrossoverKind, const char*> kCrossoverCodes[] = {
    {CrossoverKind::Binomial, "B"},
    {CrossoverKind::Exponential, "E"},
};
constexpr std::pair<SelectionKind, const char*> kSelectionCodes[] = {
    {SelectionKind::Union2, "U2"},
    {SelectionKind::Union3, "U3"},
    {SelectionKind::Pairwise2, "P2"},
    {SelectionKind::Pairwise3, "P3"},
};

template <typename E, std::size_t N>
const char* code_of(const std::pair<E, const char*> (&table)[N], E value)
{
    for (const auto& [e, code] : table)
        if (e == value)
            return code;
    return "?";
}

template <typename E, std::size_t N>
E parse_code(const std::pair<E, const char*> (&table)[N], std::string_view token,
             std::string_view what)
{
    for (const auto& [e, code] : table)
        if (token == code)
            return e;
    throw ParseError("invalid " + std::string(what) + " code '" + std::string(token) + "'");
}

std::vector<std::string> split_tokens(std::string_view name)
{
    std::vector<std::string> tokens;
    std::size_t start = 0;
    while (start <= name.size()) {
        const std::size_t pos = name.find('_', start);
        if (pos == std::string_view::npos) {
            tokens.emplace_back(name.substr(start));
            break;
        }
        tokens.emplace_back(name.substr(start, pos - start));
        start = pos + 1;
    }
    return tokens;
}

} // namespace

void InstanceSpec::validate() const
{
    const bool pso_part = velocity.has_value() && topology.has_value();
    const bool de_part = mutation.has_value() && crossover.has_value();
    switch (kind) {
    case AlgorithmKind::Pso:
        if (!pso_part || mutation || crossover || selection)
            throw InvalidConfig("PSO spec requires exactly velocity and topology");
        return;
    case AlgorithmKind::De:
        if (!de_part || velocity || topology || selection)
            throw InvalidConfig("DE spec requires exactly mutation and crossover");
        return;
    case AlgorithmKind::Hybrid:
        if (!pso_part || !de_part || !selection)
            throw InvalidConfig("hybrid spec requires all five modules");
        return;
    }
    throw InvalidConfig("unknown algorithm kind");
}

InstanceSpec parse_name(std::string_view name)
{
    const auto tokens = split_tokens(name);
    if (tokens.empty() || tokens[0].empty())
        throw ParseError("empty instance name");

    InstanceSpec spec;
    if (tokens[0] == "H") {
        if (tokens.size() != 6)
            throw ParseError("hybrid name needs 5 module codes: '" + std::string(name) + "'");
        spec.kind = AlgorithmKind::Hybrid;
        spec.velocity = parse_code(kVelocityCodes, tokens[1], "velocity");
        spec.topology = parse_code(kTopologyCodes, tokens[2], "topology");
        spec.mutation = parse_code(kMutationCodes, tokens[3], "mutation");
        spec.crossover = parse_code(kCrossoverCodes, tokens[4], "crossover");
        spec.selection = parse_code(kSelectionCodes, tokens[5], "selection");
    } else if (tokens[0] == "P") {
        if (tokens.size() != 3)
            throw ParseError("PSO name needs 2 module codes: '" + std::string(name) + "'");
        spec.kind = AlgorithmKind::Pso;
        spec.velocity = parse_code(kVelocityCodes, tokens[1], "velocity");
        spec.topology = parse_code(kTopologyCodes, tokens[2], "topology");
    } else if (tokens[0] == "D") {
        if (tokens.size() != 3)
            throw ParseError("DE name needs 2 module codes: '" + std::string(name) + "'");
        spec.kind = AlgorithmKind::De;
        spec.mutation = parse_code(kMutationCodes, tokens[1], "mutation");
        spec.crossover = parse_code(kCrossoverCodes, tokens[2], "crossover");
    } else {
        throw ParseError("invalid kind prefix '" + tokens[0] + "'");
    }
    spec.validate();
    return spec;
}

std::string render_name(const InstanceSpec& spec)
{
    spec.validate();
    std::ostringstream out;
    switch (spec.kind) {
    case AlgorithmKind::Hybrid:
        out << "H_" << code_of(kVelocityCodes, *spec.velocity) << '_'
            << code_of(kTopologyCodes, *spec.topology) << '_'
            << code_of(kMutationCodes, *spec.mutation) << '_'
            << code_of(kCrossoverCodes, *spec.crossover) << '_'
            << code_of(kSelectionCodes, *spec.selection);
        break;
    case AlgorithmKind::Pso:
        out << "P_" << code_of(kVelocityCodes, *spec.velocity) << '_'
            << code_of(kTopologyCodes, *spec.topology);
        break;
    case AlgorithmKind::De:
        out << "D_" << code_of(kMutationCodes, *spec.mutation) << '_'
            << code_of(kCrossoverCodes, *spec.crossover);
        break;
    }
    return out.str();
}

std::vector<InstanceSpec> enumerate_instances(bool include_rand1)
{
    constexpr VelocityKind velocities[] = {VelocityKind::BareBones, VelocityKind::Fips,
                                           VelocityKind::Inertia, VelocityKind::DecreasingInertia};
    constexpr TopologyKind topologies[] = {TopologyKind::LocalBest, TopologyKind::GlobalBest,
                                           TopologyKind::VonNeumann, TopologyKind::Increasing,
                                           TopologyKind::DynamicMultiSwarm};
    std::vector<MutationKind> mutations = {MutationKind::Best1, MutationKind::Best2,
                                           MutationKind::TargetToBest1,
                                           MutationKind::TargetToPBest1, MutationKind::TwoOpt1};
    if (include_rand1)
        mutations.push_back(MutationKind::Rand1);
    constexpr CrossoverKind crossovers[] = {CrossoverKind::Binomial, CrossoverKind::Exponential};
    constexpr SelectionKind selections[] = {SelectionKind::Union2, SelectionKind::Union3,
                                            SelectionKind::Pairwise2, SelectionKind::Pairwise3};

    std::vector<InstanceSpec> out;
    for (auto v : velocities)
        for (auto t : topologies) {
            InstanceSpec s;
            s.kind = AlgorithmKind::Pso;
            s.velocity = v;
            s.topology = t;
            out.push_back(s);
        }
    for (auto m : mutations)
        for (auto c : crossovers) {
            InstanceSpec s;
            s.kind = AlgorithmKind::De;
            s.mutation = m;
            s.crossover = c;
            out.push_back(s);
        }
    for (auto v : velocities)
        for (auto t : topologies)
            for (auto m : mutations)
                for (auto c : crossovers)
                    for (auto sel : selections) {
                        InstanceSpec s;
                        s.velocity = v;
                        s.topology = t;
                        s.mutation = m;
                        s.crossover = c;
                        s.selection = sel;
                        out.push_back(s);
                    }
    return out;
}

namespace {

struct Candidate {
    const Particle* particle;
    int source; // 0, 1, 3
    std::size_t index;
};

bool better(const Candidate& a, const Candidate& b)
{
    if (a.particle->f_cur != b.particle->f_cur)
        return a.particle->f_cur < b.particle->f_cur;
    if (a.source != b.source)
        return a.source < b.source;
    return a.index < b.index;
}

} // namespace

Selected select_detailed(SelectionKind kind, const Swarm& p0, const Swarm& p1, const Swarm& p3)
{
    const std::size_t M = p0.size();
    if (p1.size() != M || p3.size() != M)
        throw InvalidConfig("selection requires equally sized populations");

    const bool with_parents = kind == SelectionKind::Union3 || kind == SelectionKind::Pairwise3;
    const bool pairwise = kind == SelectionKind::Pairwise2 || kind == SelectionKind::Pairwise3;

    Selected out;
    out.swarm.reserve(M);
    out.origin.reserve(M);

    if (pairwise) {
        for (std::size_t i = 0; i < M; ++i) {
            Candidate best{&p1[i], 1, i};
            if (with_parents && better({&p0[i], 0, i}, best))
                best = {&p0[i], 0, i};
            if (better({&p3[i], 3, i}, best))
                best = {&p3[i], 3, i};
            out.swarm.push_back(*best.particle);
            out.origin.emplace_back(best.source, i);
        }
        return out;
    }

    std::vector<Candidate> pool;
    pool.reserve(with_parents ? 3 * M : 2 * M);
    if (with_parents)
        for (std::size_t i = 0; i < M; ++i)
            pool.push_back({&p0[i], 0, i});
    for (std::size_t i = 0; i < M; ++i)
        pool.push_back({&p1[i], 1, i});
    for (std::size_t i = 0; i < M; ++i)
        pool.push_back({&p3[i], 3, i});

    std::sort(pool.begin(), pool.end(), better);
    for (std::size_t k = 0; k < M; ++k) {
        out.swarm.push_back(*pool[k].particle);
        out.origin.emplace_back(pool[k].source, pool[k].index);
    }
    return out;
}

Swarm select(SelectionKind kind, const Swarm& p0, const Swarm& p1, const Swarm& p3)
{
    return select_detailed(kind, p0, p1, p3).swarm;
}

Vec recompute_velocity(const Vec& x0, const Vec& x3)
{
    assert(x0.size() == x3.size());
    Vec v(x0.size());
    for (std::size_t j = 0; j < x0.size(); ++j)
        v[j] = x3[j] - x0[j];
    return v;
}

bool pso_offspring(const Swarm& p0, const InstanceSpec& spec, HybridState& state, Swarm& p1,
                   Evaluator& eval, RngStream& rng)
{
    const std::size_t M = p0.size();
    const double fraction = eval.budget_fraction();
    const auto hoods = state.topology.neighborhoods(fraction, rng);

    std::vector<Vec> pbest_pos(M);
    std::vector<double> pbest_f(M);
    for (std::size_t i = 0; i < M; ++i) {
        pbest_pos[i] = p0[i].p;
        pbest_f[i] = p0[i].f_best;
    }
    const auto g = neighborhood_best(pbest_f, hoods);

    p1.clear();
    p1.reserve(M);
    for (std::size_t i = 0; i < M; ++i) {
        auto moved =
            pso_move(p0[i], *spec.velocity, state.pso, fraction, pbest_pos, hoods[i], g[i], eval, rng);
        if (!moved)
            return false;
        p1.push_back(std::move(*moved));
    }
    return true;
}

DeOffspring de_offspring(const Swarm& p0, const InstanceSpec& spec, HybridState& state,
                         Evaluator& eval, RngStream& rng)
{
    const std::size_t M = p0.size();
    DeOffspring out;

    std::vector<Vec> xs(M);
    std::vector<double> fs(M);
    for (std::size_t i = 0; i < M; ++i) {
        xs[i] = p0[i].x;
        fs[i] = p0[i].f_cur;
    }

    out.fcr.reserve(M);
    for (std::size_t i = 0; i < M; ++i)
        out.fcr.push_back(jade_sample(state.adaptive, rng));

    // donor population; recombined into P3 below and never evaluated itself
    std::vector<Vec> donors(M);
    for (std::size_t i = 0; i < M; ++i)
        donors[i] = mutate(*spec.mutation, i, xs, fs, out.fcr[i].first, kPTop, rng);

    out.p3.reserve(M);
    for (std::size_t i = 0; i < M; ++i) {
        Vec x3 = *spec.crossover == CrossoverKind::Binomial
                     ? crossover_binomial(xs[i], donors[i], out.fcr[i].second, rng)
                     : crossover_exponential(xs[i], donors[i], out.fcr[i].second, rng);
        Vec v3 = recompute_velocity(xs[i], x3); // displacement, pre-repair
        for (std::size_t j : repair(x3, eval.problem()))
            v3[j] = 0.0;

        const auto f3 = eval.evaluate(x3);
        if (!f3)
            return out;

        Particle child;
        child.x = std::move(x3);
        child.v = std::move(v3);
        child.p = p0[i].p;
        child.f_best = p0[i].f_best;
        child.f_cur = *f3;
        out.p3.push_back(std::move(child));
    }
    out.complete = true;
    return out;
}

bool psode_step(Swarm& swarm, const InstanceSpec& spec, HybridState& state, Evaluator& eval,
                RngStream& rng)
{
    const std::size_t M = swarm.size();

    Swarm p1;
    if (!pso_offspring(swarm, spec, state, p1, eval, rng))
        return false;

    DeOffspring de = de_offspring(swarm, spec, state, eval, rng);
    if (!de.complete)
        return false;

    // per-index personal-best update against both evaluated candidates;
    // whichever member survives at an index carries the updated memory
    Swarm p0 = swarm;
    for (std::size_t i = 0; i < M; ++i) {
        const Particle* best = nullptr;
        double f = p0[i].f_best;
        if (p1[i].f_cur < f) {
            f = p1[i].f_cur;
            best = &p1[i];
        }
        if (de.p3[i].f_cur < f) {
            f = de.p3[i].f_cur;
            best = &de.p3[i];
        }
        if (best) {
            const Vec p_new = best->x;
            p0[i].p = p_new;
            p0[i].f_best = f;
            p1[i].p = p_new;
            p1[i].f_best = f;
            de.p3[i].p = p_new;
            de.p3[i].f_best = f;
        }
    }

    Selected next = select_detailed(*spec.selection, p0, p1, de.p3);

    // a sampled (F, Cr) pair succeeded when its P3 member survived
    std::vector<bool> p3_survived(M, false);
    for (const auto& [source, index] : next.origin)
        if (source == 3)
            p3_survived[index] = true;
    for (std::size_t i = 0; i < M; ++i)
        if (p3_survived[i]) {
            state.adaptive.success_f.push_back(de.fcr[i].first);
            state.adaptive.success_cr.push_back(de.fcr[i].second);
        }
    jade_update(state.adaptive);

    swarm = std::move(next.swarm);
    return true;
}

RunResult run(const InstanceSpec& spec, const Problem& problem, std::size_t M,
              std::uint64_t max_evals, std::uint64_t seed)
{
    spec.validate();

    RngStream rng(seed);
    Evaluator eval(problem, Budget{max_evals, 0});
    Swarm swarm = init_population(problem, M, rng);

    bool alive = true;
    for (auto& pt : swarm) {
        const auto f = eval.evaluate(pt.x);
        if (!f) {
            alive = false;
            break;
        }
        pt.f_cur = *f;
        pt.p = pt.x;
        pt.f_best = *f;
    }

    switch (spec.kind) {
    case AlgorithmKind::Pso: {
        PsoParams prm = PsoParams::for_problem(problem);
        NeighborhoodGraph topology(*spec.topology, M);
        while (alive && !eval.budget().exhausted())
            alive = pso_step(swarm, topology, *spec.velocity, prm, eval, rng);
        break;
    }
    case AlgorithmKind::De: {
        AdaptiveParams adaptive;
        while (alive && !eval.budget().exhausted())
            alive = de_step(swarm, *spec.mutation, *spec.crossover, adaptive, eval, rng);
        break;
    }
    case AlgorithmKind::Hybrid: {
        HybridState state{PsoParams::for_problem(problem), NeighborhoodGraph(*spec.topology, M),
                          AdaptiveParams{}};
        while (alive && !eval.budget().exhausted())
            alive = psode_step(swarm, spec, state, eval, rng);
        break;
    }
    }

    assert(swarm.size() == M);
    return RunResult{eval.improvements(), eval.budget().used, eval.best()};
}

} // namespace psode

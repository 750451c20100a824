#include "psode/de.hpp"

namespace psode {

void jade_update(AdaptiveParams& prm)
{
    if (!prm.success_f.empty()) {
        double sum = 0.0, sum_sq = 0.0;
        for (double f : prm.success_f) {
            sum += f;
            sum_sq += f * f;
        }
        prm.mu_f = (1.0 - prm.c) * prm.mu_f + prm.c * (sum_sq / sum);
    }
    if (!prm.success_cr.empty()) {
        double sum = 0.0;
        for (double cr : prm.success_cr)
            sum += cr;
        prm.mu_cr = (1.0 - prm.c) * prm.mu_cr
                  + prm.c * (sum / static_cast<double>(prm.success_cr.size()));
    }
    prm.success_f.clear();
    prm.success_cr.clear();
}

bool de_step(Swarm& swarm, MutationKind mutation, CrossoverKind crossover, AdaptiveParams& adaptive,
             Evaluator& eval, RngStream& rng)
{
    const std::size_t M = swarm.size();

    // working copies updated in place, so later members mutate against
    // already-accepted trials
    std::vector<Vec> xs(M);
    std::vector<double> fs(M);
    for (std::size_t i = 0; i < M; ++i) {
        xs[i] = swarm[i].x;
        fs[i] = swarm[i].f_cur;
    }

    for (std::size_t i = 0; i < M; ++i) {
        const auto [f_i, cr_i] = jade_sample(adaptive, rng);
        Vec donor = mutate(mutation, i, xs, fs, f_i, kPTop, rng);
        Vec trial = crossover == CrossoverKind::Binomial
                        ? crossover_binomial(xs[i], donor, cr_i, rng)
                        : crossover_exponential(xs[i], donor, cr_i, rng);
        repair(trial, eval.problem());

        const auto f_trial = eval.evaluate(trial);
        if (!f_trial)
            return false; // incomplete generation, adaptation skipped

        if (*f_trial < fs[i]) { // strict: equal fitness keeps the target
            xs[i] = trial;
            fs[i] = *f_trial;
            swarm[i].x = std::move(trial);
            swarm[i].f_cur = *f_trial;
            swarm[i].p = swarm[i].x; // DE has no separate memory
            swarm[i].f_best = *f_trial;
            adaptive.success_f.push_back(f_i);
            adaptive.success_cr.push_back(cr_i);
        }
    }

    jade_update(adaptive);
    return true;
}

} // namespace psode

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "psode/core.hpp"
#include "psode/engine.hpp"

#include <cmath>

using namespace psode;

namespace {

Problem sphere_problem(std::size_t dim)
{
    Problem p;
    p.dim = dim;
    p.lower.assign(dim, -5.0);
    p.upper.assign(dim, 5.0);
    p.objective = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x)
            s += v * v;
        return s;
    };
    return p;
}

} // namespace

TEST_CASE("evaluation returns the objective value and charges the budget")
{
    const Problem p = sphere_problem(2);
    Budget b{10, 0};

    const auto f = evaluate(p, Vec{1.0, 2.0}, b);
    REQUIRE(f.has_value());
    CHECK(*f == 5.0);
    CHECK(b.used == 1);

    const auto g = evaluate(p, Vec{0.0, 0.0}, b);
    REQUIRE(g.has_value());
    CHECK(*g == 0.0);
    CHECK(b.used == 2);
}

TEST_CASE("an exhausted budget refuses to evaluate")
{
    const Problem p = sphere_problem(2);
    Budget b{5, 5};
    CHECK_FALSE(evaluate(p, Vec{1.0, 1.0}, b).has_value());
    CHECK(b.used == 5); // nothing was charged
}

TEST_CASE("initial populations have zero velocities and in-box positions")
{
    const Problem p = sphere_problem(2);
    RngStream rng(42);
    const Swarm swarm = init_population(p, 5, rng);

    REQUIRE(swarm.size() == 5);
    for (const auto& pt : swarm) {
        CHECK(pt.v == Vec{0.0, 0.0});
        CHECK(pt.p == pt.x);
        CHECK(pt.f_best == kInf);
        for (std::size_t j = 0; j < p.dim; ++j) {
            CHECK(pt.x[j] >= p.lower[j]);
            CHECK(pt.x[j] <= p.upper[j]);
        }
    }
}

TEST_CASE("population initialization is seed-reproducible")
{
    const Problem p = sphere_problem(3);
    RngStream a(42), b(42);
    const Swarm sa = init_population(p, 6, a);
    const Swarm sb = init_population(p, 6, b);
    for (std::size_t i = 0; i < sa.size(); ++i)
        CHECK(sa[i].x == sb[i].x);
}

TEST_CASE("populations smaller than 5 are rejected")
{
    const Problem p = sphere_problem(2);
    RngStream rng(1);
    CHECK_THROWS_AS(init_population(p, 4, rng), InvalidConfig);
}

TEST_CASE("repair clamps out-of-box components and reports their indices")
{
    const Problem p = sphere_problem(2);

    Vec x{6.0, -6.0};
    CHECK(repair(x, p) == std::vector<std::size_t>{0, 1});
    CHECK(x == Vec{5.0, -5.0});

    Vec y{1.0, -2.0};
    CHECK(repair(y, p).empty());
    CHECK(y == Vec{1.0, -2.0});

    Vec z{5.0, 0.0}; // the box is a closed interval
    CHECK(repair(z, p).empty());
    CHECK(z == Vec{5.0, 0.0});
}

TEST_CASE("the evaluator records an improvement exactly when the best drops")
{
    Problem p = sphere_problem(1);
    p.objective = [](std::span<const double> x) { return x[0]; };
    Evaluator eval(p, Budget{10, 0});

    CHECK(eval.evaluate(Vec{3.0}) == 3.0);
    CHECK(eval.evaluate(Vec{5.0}) == 5.0); // worse: no improvement entry
    CHECK(eval.evaluate(Vec{2.0}) == 2.0);

    const std::vector<Evaluator::Improvement> expected{{1, 3.0}, {3, 2.0}};
    CHECK(eval.improvements() == expected);
    CHECK(eval.best() == 2.0);
    CHECK(eval.budget_fraction() == 0.3);
}

TEST_CASE("total objective calls equal the final budget for every algorithm kind")
{
    for (const char* name : {"P_I_L", "D_B1_B", "H_I_L_T1_B_U2"}) {
        std::size_t calls = 0;
        Problem p = sphere_problem(3);
        const auto inner = p.objective;
        p.objective = [&calls, inner](std::span<const double> x) {
            ++calls;
            return inner(x);
        };

        const RunResult result = run(parse_name(name), p, 6, 500, 123);
        CHECK(result.total_evals == 500);
        CHECK(calls == 500);
    }
}

TEST_CASE("identical seeds give bit-identical runs, different seeds do not")
{
    const Problem p = sphere_problem(4);
    for (const char* name : {"P_D_M", "D_PB_E", "H_B_I_O1_E_U3"}) {
        const InstanceSpec spec = parse_name(name);
        const RunResult a = run(spec, p, 8, 800, 42);
        const RunResult b = run(spec, p, 8, 800, 42);
        CHECK(a == b);

        const RunResult c = run(spec, p, 8, 800, 43);
        CHECK(a.improvements != c.improvements);
    }
}

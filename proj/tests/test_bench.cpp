#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "psode/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

using namespace psode;

namespace {

RunRecord make_record(std::string instance, int fid,
                      std::vector<std::optional<std::uint64_t>> hits, std::uint64_t total)
{
    RunRecord r;
    r.instance = std::move(instance);
    r.function_id = fid;
    r.dim = 5;
    r.hits = std::move(hits);
    r.total_evals = total;
    return r;
}

/// Independent competition-rank oracle: #smaller + (1 + #equal) / 2, with
/// INF == INF counting as equal.
std::vector<double> counting_ranks(const std::vector<double>& values)
{
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::size_t less = 0, equal = 0;
        for (double v : values) {
            if (v < values[i])
                ++less;
            else if (v == values[i])
                ++equal;
        }
        ranks[i] = static_cast<double>(less) + (1.0 + static_cast<double>(equal)) / 2.0;
    }
    return ranks;
}

} // namespace

TEST_CASE("the suite provides ten functions in five labelled groups")
{
    const auto fns = suite(5);
    REQUIRE(fns.size() == 10);

    std::set<std::string> names;
    std::vector<int> groups;
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(fns[i].id == static_cast<int>(i) + 1);
        names.insert(fns[i].name);
        groups.push_back(fns[i].group);
        CHECK(fns[i].problem.dim == 5);
        CHECK(fns[i].problem.lower == Vec(5, -5.0));
        CHECK(fns[i].problem.upper == Vec(5, 5.0));
        CHECK(group_name(fns[i].group) != nullptr);
    }
    CHECK(names.size() == 10);
    CHECK(groups == std::vector<int>{1, 1, 2, 2, 3, 3, 4, 4, 5, 5});
}

TEST_CASE("the suite refuses one-dimensional problems")
{
    CHECK_THROWS_AS(suite(1), InvalidConfig);
    CHECK_NOTHROW(suite(2));
}

TEST_CASE("every function is exactly zero at its shifted optimum")
{
    for (std::size_t dim : {std::size_t{2}, std::size_t{5}, std::size_t{10}})
        for (const auto& fn : suite(dim)) {
            REQUIRE(fn.shift.size() == dim);
            CHECK(fn.problem.objective(fn.shift) == 0.0);
            for (double s : fn.shift) {
                CHECK(s >= -4.0); // central 80% of the box
                CHECK(s <= 4.0);
            }
        }
}

TEST_CASE("the suite is deterministic per seed")
{
    const auto a = suite(5);
    const auto b = suite(5);
    const auto c = suite(5, 999);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(a[i].shift == b[i].shift);
        CHECK(a[i].shift != c[i].shift);
    }
}

TEST_CASE("the Rastrigin member evaluates by hand one unit off its optimum")
{
    const auto fns = suite(2);
    const auto rastrigin =
        std::find_if(fns.begin(), fns.end(), [](const auto& f) { return f.name == "rastrigin"; });
    REQUIRE(rastrigin != fns.end());

    Vec x = rastrigin->shift;
    x[0] += 1.0;
    x[1] += 1.0;
    CHECK(rastrigin->problem.objective(x) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("targets descend from f_opt + 10 to f_opt + 1e-8")
{
    const Targets t = Targets::standard();
    REQUIRE(t.size() == 10);
    CHECK(t.values[0] == doctest::Approx(10.0));
    CHECK(t.values[1] == doctest::Approx(1.0));
    CHECK(t.values[9] == doctest::Approx(1e-8));
    for (std::size_t k = 1; k < t.size(); ++k)
        CHECK(t.values[k] < t.values[k - 1]);

    const Targets shifted = Targets::standard(3.0);
    CHECK(shifted.values[0] == doctest::Approx(13.0));
    CHECK(shifted.values[9] == doctest::Approx(3.0 + 1e-8));
}

TEST_CASE("hitting times are read off the improvement trajectory")
{
    const Targets targets = Targets::standard();

    SUBCASE("a full trajectory hits harder targets later")
    {
        const std::vector<Evaluator::Improvement> imps{{3, 9.0}, {7, 0.05}, {12, 1e-9}};
        const auto hits = hits_against(imps, targets);
        REQUIRE(hits.size() == 10);
        CHECK(hits[0] == 3);  // 10
        CHECK(hits[1] == 7);  // 1
        CHECK(hits[2] == 7);  // 0.1
        for (std::size_t t = 3; t < 10; ++t)
            CHECK(hits[t] == 12);
    }

    SUBCASE("unreached targets stay empty")
    {
        const std::vector<Evaluator::Improvement> imps{{5, 0.5}};
        const auto hits = hits_against(imps, targets);
        CHECK(hits[0] == 5);
        CHECK(hits[1] == 5);
        for (std::size_t t = 2; t < 10; ++t)
            CHECK_FALSE(hits[t].has_value());
    }

    SUBCASE("an empty trajectory hits nothing")
    {
        for (const auto& h : hits_against({}, targets))
            CHECK_FALSE(h.has_value());
    }

    SUBCASE("hits are monotone for any trajectory")
    {
        const std::vector<Evaluator::Improvement> imps{{2, 20.0}, {9, 0.009}, {30, 2e-7}};
        const auto hits = hits_against(imps, targets);
        for (std::size_t t = 1; t < 10; ++t)
            if (hits[t])
                CHECK(*hits[t] >= *hits[t - 1]);
    }
}

TEST_CASE("expected running time follows the closed form")
{
    SUBCASE("all runs hitting at 100 average to 100")
    {
        std::vector<RunRecord> records;
        for (int r = 0; r < 30; ++r)
            records.push_back(make_record("A", 1, {100}, 500));
        CHECK(ert(records, 0) == 100.0);
    }

    SUBCASE("missing runs contribute their whole budget to the numerator")
    {
        const std::vector<RunRecord> records{make_record("A", 1, {50}, 200),
                                             make_record("A", 1, {std::nullopt}, 1000)};
        CHECK(ert(records, 0) == 1050.0);

        const std::vector<RunRecord> reversed{records[1], records[0]};
        CHECK(ert(reversed, 0) == 1050.0);
    }

    SUBCASE("no success means an infinite running time")
    {
        const std::vector<RunRecord> records{make_record("A", 1, {std::nullopt}, 1000),
                                             make_record("A", 1, {std::nullopt}, 1000)};
        CHECK(std::isinf(ert(records, 0)));
    }

    SUBCASE("no records is a configuration error")
    {
        CHECK_THROWS_AS(ert({}, 0), InvalidConfig);
    }
}

TEST_CASE("the ERT table aggregates per instance, function, and target")
{
    const Targets targets = Targets::standard();
    std::vector<RunRecord> records;
    std::vector<std::optional<std::uint64_t>> full(10, std::uint64_t{40});
    std::vector<std::optional<std::uint64_t>> none(10, std::nullopt);
    records.push_back(make_record("A", 1, full, 100));
    records.push_back(make_record("A", 1, none, 100));
    records.push_back(make_record("A", 2, full, 100));
    records.push_back(make_record("B", 1, none, 100));

    const ErtTable table = ert_table(records, targets);
    REQUIRE(table.count("A") == 1);
    REQUIRE(table.count("B") == 1);
    REQUIRE(table.at("A").count(1) == 1);
    REQUIRE(table.at("A").count(2) == 1);
    CHECK(table.at("A").at(1).size() == 10);
    CHECK(table.at("A").at(1)[0] == 140.0); // (40 + 100) / 1
    CHECK(table.at("A").at(2)[0] == 40.0);
    CHECK(std::isinf(table.at("B").at(1)[0]));
}

TEST_CASE("fractional ranks average over ties and push INF to the bottom")
{
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(fractional_ranks({5.0, 1.0, 3.0}) == std::vector<double>{3.0, 1.0, 2.0});
    CHECK(fractional_ranks({2.0, 2.0, 5.0}) == std::vector<double>{1.5, 1.5, 3.0});
    CHECK(fractional_ranks({1.0, inf, inf}) == std::vector<double>{1.0, 2.5, 2.5});
    CHECK(fractional_ranks({7.0, 7.0, 7.0, 7.0}) == std::vector<double>{2.5, 2.5, 2.5, 2.5});

    // cross-check against an independent counting implementation
    const std::vector<double> mixed{4.0, inf, 2.0, 4.0, 9.0, inf, 2.0};
    CHECK(fractional_ranks(mixed) == counting_ranks(mixed));
}

TEST_CASE("instance ranking averages target ranks per function, then functions")
{
    const double inf = std::numeric_limits<double>::infinity();

    SUBCASE("total dominance yields ranks 1 and 2")
    {
        ErtTable table;
        table["A"][1] = {10.0, 20.0};
        table["A"][2] = {10.0, 20.0};
        table["B"][1] = {11.0, 21.0};
        table["B"][2] = {11.0, 21.0};
        const auto ranked = rank_instances(table);
        REQUIRE(ranked.size() == 2);
        CHECK(ranked[0] == std::pair<std::string, double>{"A", 1.0});
        CHECK(ranked[1] == std::pair<std::string, double>{"B", 2.0});
    }

    SUBCASE("ties on every cell average to 1.5, name order breaking the sort tie")
    {
        ErtTable table;
        table["B"][1] = {5.0, 5.0};
        table["A"][1] = {5.0, 5.0};
        const auto ranked = rank_instances(table);
        CHECK(ranked[0] == std::pair<std::string, double>{"A", 1.5});
        CHECK(ranked[1] == std::pair<std::string, double>{"B", 1.5});
    }

    SUBCASE("a hand-built three-instance table matches the worked aggregation")
    {
        ErtTable table;
        table["A"][1] = {1.0, 4.0};
        table["A"][2] = {9.0, 2.0};
        table["B"][1] = {2.0, 4.0};
        table["B"][2] = {3.0, 1.0};
        table["C"][1] = {3.0, inf};
        table["C"][2] = {inf, inf};
        // f1 ranks: (1,2,3) and (1.5,1.5,3) -> A 1.25, B 1.75, C 3
        // f2 ranks: (2,1,3) and (2,1,3)     -> A 2,    B 1,    C 3
        const auto ranked = rank_instances(table);
        REQUIRE(ranked.size() == 3);
        CHECK(ranked[0].first == "B");
        CHECK(ranked[0].second == doctest::Approx(1.375));
        CHECK(ranked[1].first == "A");
        CHECK(ranked[1].second == doctest::Approx(1.625));
        CHECK(ranked[2].first == "C");
        CHECK(ranked[2].second == doctest::Approx(3.0));
    }

    SUBCASE("ranks are invariant under strictly monotone ERT transformations")
    {
        ErtTable table;
        table["A"][1] = {1.0, 40.0};
        table["A"][2] = {90.0, 2.0};
        table["B"][1] = {2.0, 40.0};
        table["B"][2] = {30.0, inf};
        table["C"][1] = {3.0, inf};
        table["C"][2] = {inf, 7.0};
        const auto base = rank_instances(table);

        for (auto transform : {+[](double v) { return 3.0 * v + 7.0; },
                               +[](double v) { return v * v * v; }}) {
            ErtTable warped;
            for (const auto& [inst, per_fn] : table)
                for (const auto& [fid, erts] : per_fn) {
                    auto& cell = warped[inst][fid];
                    for (double v : erts)
                        cell.push_back(std::isinf(v) ? v : transform(v));
                }
            CHECK(rank_instances(warped) == base);
        }
    }

    SUBCASE("mismatched grids are missing data")
    {
        ErtTable table;
        table["A"][1] = {1.0, 2.0};
        table["A"][2] = {1.0, 2.0};
        table["B"][1] = {1.0, 2.0}; // function 2 missing
        CHECK_THROWS_AS(rank_instances(table), MissingData);

        ErtTable uneven;
        uneven["A"][1] = {1.0, 2.0};
        uneven["B"][1] = {1.0}; // fewer targets
        CHECK_THROWS_AS(rank_instances(uneven), MissingData);
    }
}

TEST_CASE("the logarithmic evaluation grid spans 1 to the budget")
{
    const auto grid = log_eval_grid(100000, 50);
    REQUIRE(grid.size() == 50);
    CHECK(grid.front() == 1);
    CHECK(grid.back() == 100000);
    for (std::size_t k = 1; k < grid.size(); ++k)
        CHECK(grid[k] >= grid[k - 1]);

    CHECK(log_eval_grid(500, 1) == std::vector<std::uint64_t>{500});
    CHECK(log_eval_grid(1, 5) == std::vector<std::uint64_t>(5, 1));
}

TEST_CASE("the ECDF counts solved (run, target) pairs per evaluation budget")
{
    const Targets targets = Targets::standard();

    SUBCASE("nothing is solved before the first evaluation")
    {
        const std::vector<RunRecord> records{
            make_record("A", 1, std::vector<std::optional<std::uint64_t>>(10, std::uint64_t{5}),
                        100)};
        const auto curve = ecdf(records, targets, {0});
        REQUIRE(curve.size() == 1);
        CHECK(curve[0].second == 0.0);
    }

    SUBCASE("one run hitting four of ten targets sits at 0.4")
    {
        std::vector<std::optional<std::uint64_t>> hits(10);
        hits[0] = 10;
        hits[1] = 20;
        hits[2] = 30;
        hits[3] = 40;
        const auto curve = ecdf({make_record("A", 1, hits, 100)}, targets, {100});
        CHECK(curve[0].second == doctest::Approx(0.4));
    }

    SUBCASE("every pair hit reaches exactly 1")
    {
        const std::vector<RunRecord> records{
            make_record("A", 1, std::vector<std::optional<std::uint64_t>>(10, std::uint64_t{7}),
                        100),
            make_record("A", 1, std::vector<std::optional<std::uint64_t>>(10, std::uint64_t{50}),
                        100)};
        const auto curve = ecdf(records, targets, {50, 100});
        CHECK(curve[0].second == 1.0);
        CHECK(curve[1].second == 1.0);
    }

    SUBCASE("curves are monotone and bounded on staggered records")
    {
        std::vector<RunRecord> records;
        for (std::uint64_t r = 0; r < 8; ++r) {
            std::vector<std::optional<std::uint64_t>> hits(10);
            for (std::size_t t = 0; t < 10; ++t)
                if (t <= r)
                    hits[t] = (r + 1) * 10 + t;
            records.push_back(make_record("A", 1, std::move(hits), 200));
        }
        const auto curve = ecdf(records, targets, log_eval_grid(200, 20));
        double prev = 0.0;
        for (const auto& [e, frac] : curve) {
            CHECK(frac >= prev);
            CHECK(frac >= 0.0);
            CHECK(frac <= 1.0);
            prev = frac;
        }
        // 1 + 2 + ... + 8 = 36 hits over 8 runs x 10 targets
        CHECK(curve.back().second == doctest::Approx(36.0 / 80.0));
    }

    SUBCASE("records with the wrong target count are rejected")
    {
        const std::vector<RunRecord> records{make_record("A", 1, {std::uint64_t{5}}, 100)};
        CHECK_THROWS_AS(ecdf(records, targets, {10}), InvalidConfig);
    }
}

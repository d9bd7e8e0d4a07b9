#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lopf/simplex.hpp"

#include "lp_oracle.hpp"
#include "random_lp.hpp"

#include <random>

using namespace lopf;

TEST_CASE("single bounded variable goes to its cost-favored bound") {
    LpProblem lp;
    lp.add_variable("x", 3.0, 10.0, 1.0);
    auto r = solve(lp);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective == doctest::Approx(3.0));
    CHECK(r.values.at("x") == doctest::Approx(3.0));
}

TEST_CASE("unbounded below is detected") {
    LpProblem lp;
    lp.add_variable("x", -kInf, kInf, 1.0);
    CHECK(solve(lp).status == SolveStatus::unbounded);

    LpProblem lp2;
    lp2.add_variable("x", -kInf, kInf, 1.0);
    lp2.add_variable("y", 0.0, kInf, 0.0);
    lp2.add_constraint("c", {{0, 1.0}, {1, -1.0}}, Relation::le, 5.0);
    CHECK(solve(lp2).status == SolveStatus::unbounded);
}

TEST_CASE("conflicting constraints are infeasible") {
    LpProblem lp;
    lp.add_variable("x", 0.0, 10.0, 1.0);
    lp.add_constraint("lo", {{0, 1.0}}, Relation::ge, 6.0);
    lp.add_constraint("hi", {{0, 1.0}}, Relation::le, 4.0);
    CHECK(solve(lp).status == SolveStatus::infeasible);
}

TEST_CASE("small diet-style LP") {
    // min 2x + 3y  s.t.  x + y >= 4,  x - y <= 2,  0 <= x,y <= 10
    LpProblem lp;
    lp.add_variable("x", 0.0, 10.0, 2.0);
    lp.add_variable("y", 0.0, 10.0, 3.0);
    lp.add_constraint("c1", {{0, 1.0}, {1, 1.0}}, Relation::ge, 4.0);
    lp.add_constraint("c2", {{0, 1.0}, {1, -1.0}}, Relation::le, 2.0);
    auto r = solve(lp);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective == doctest::Approx(9.0));  // x=3, y=1
}

TEST_CASE("equality constraints and free variables") {
    // min x + y  s.t.  x + 2y = 3,  x - y = 0  -> x=y=1
    LpProblem lp;
    lp.add_variable("x", -kInf, kInf, 1.0);
    lp.add_variable("y", -kInf, kInf, 1.0);
    lp.add_constraint("e1", {{0, 1.0}, {1, 2.0}}, Relation::eq, 3.0);
    lp.add_constraint("e2", {{0, 1.0}, {1, -1.0}}, Relation::eq, 0.0);
    auto r = solve(lp);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.values.at("x") == doctest::Approx(1.0));
    CHECK(r.values.at("y") == doctest::Approx(1.0));
}

TEST_CASE("degenerate LP terminates (Bland fallback)") {
    // Beale's cycling example
    LpProblem lp;
    lp.add_variable("x1", 0.0, kInf, -0.75);
    lp.add_variable("x2", 0.0, kInf, 150.0);
    lp.add_variable("x3", 0.0, kInf, -0.02);
    lp.add_variable("x4", 0.0, kInf, 6.0);
    lp.add_constraint("r1", {{0, 0.25}, {1, -60.0}, {2, -0.04}, {3, 9.0}}, Relation::le, 0.0);
    lp.add_constraint("r2", {{0, 0.5}, {1, -90.0}, {2, -0.02}, {3, 3.0}}, Relation::le, 0.0);
    lp.add_constraint("r3", {{2, 1.0}}, Relation::le, 1.0);
    auto r = solve(lp);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective == doctest::Approx(-0.05));
}

TEST_CASE("iteration limit is honored") {
    LpProblem lp;
    for (int j = 0; j < 6; ++j)
        lp.add_variable("x" + std::to_string(j), 0.0, 10.0, -1.0);
    for (int i = 0; i < 5; ++i)
        lp.add_constraint("c" + std::to_string(i), {{i, 1.0}, {i + 1, 1.0}}, Relation::le,
                          3.0);
    SolveOptions opts;
    opts.max_iterations = 1;
    CHECK(solve(lp, opts).status == SolveStatus::iteration_limit);
}

TEST_CASE("matches vertex-enumeration oracle on random bounded LPs") {
    std::mt19937_64 rng(20240901);
    int feasible = 0;
    for (int i = 0; i < 200; ++i) {
        auto lp = random_lp::make(rng);
        auto oracle = lp_oracle::best_vertex(lp);
        auto r = solve(lp);
        CAPTURE(i);
        if (oracle.feasible) {
            ++feasible;
            REQUIRE(r.status == SolveStatus::optimal);
            CHECK(r.objective ==
                  doctest::Approx(oracle.objective).epsilon(1e-6).scale(1.0));
        } else {
            CHECK(r.status == SolveStatus::infeasible);
        }
    }
    CHECK(feasible > 50);  // the generator should not be degenerate
}

TEST_CASE("deterministic across repeated solves") {
    std::mt19937_64 rng(7);
    auto lp = random_lp::make(rng);
    auto a = solve(lp);
    auto b = solve(lp);
    CHECK(a.status == b.status);
    if (a.status == SolveStatus::optimal) {
        CHECK(a.objective == b.objective);
        CHECK(a.values == b.values);
    }
}

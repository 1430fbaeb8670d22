#include <random>
#include <stdexcept>

#include "doctest.h"
#include "pg/sat.hpp"

using namespace pg;

TEST_CASE("trivial formulas") {
  SUBCASE("no variables, no clauses") {
    Cnf cnf;
    auto a = sat_solve(cnf);
    REQUIRE(a.has_value());
    CHECK(a->empty());
  }
  SUBCASE("empty clause is unsatisfiable") {
    Cnf cnf{{0, 1}, {{}}};
    CHECK(!sat_solve(cnf).has_value());
    CHECK(!sat_enumerate(cnf).has_value());
  }
  SUBCASE("free variables default to false") {
    Cnf cnf{{2, 7}, {}};
    auto a = sat_solve(cnf);
    REQUIRE(a.has_value());
    CHECK(*a == Assignment{{2, false}, {7, false}});
  }
}

TEST_CASE("the model is the counting-first one") {
  // not(a) or not(b), a or b: two models, a=T b=F counts lower than a=F b=T
  // because the lowest variable is the least-significant bit.
  Cnf cnf{{0, 1}, {{neg(0), neg(1)}, {pos(0), pos(1)}}};
  auto a = sat_solve(cnf);
  REQUIRE(a.has_value());
  CHECK(*a == Assignment{{0, true}, {1, false}});
  CHECK(satisfies(cnf, *a));

  // Variable ids need not be contiguous; order is by id.
  Cnf sparse{{3, 10}, {{pos(10)}}};
  auto b = sat_solve(sparse);
  REQUIRE(b.has_value());
  CHECK(*b == Assignment{{3, false}, {10, true}});
}

TEST_CASE("unsatisfiable core") {
  Cnf cnf{{0, 1}, {{pos(0), pos(1)}, {pos(0), neg(1)}, {neg(0), pos(1)}, {neg(0), neg(1)}}};
  CHECK(!sat_solve(cnf).has_value());
  CHECK(!sat_enumerate(cnf).has_value());
}

TEST_CASE("satisfies checks every clause") {
  Cnf cnf{{0, 1}, {{pos(0)}, {neg(1)}}};
  CHECK(satisfies(cnf, {{0, true}, {1, false}}));
  CHECK(!satisfies(cnf, {{0, true}, {1, true}}));
  CHECK(!satisfies(cnf, {{0, false}, {1, false}}));
}

TEST_CASE("solver agrees with exhaustive enumeration on random formulas") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 300; ++round) {
    std::uint32_t nvars = 1 + std::uint32_t(rng() % 5);
    Cnf cnf;
    for (Id v = 0; v < nvars; ++v) cnf.variables.push_back(v * 2 + 1);  // sparse ids
    std::uint32_t nclauses = std::uint32_t(rng() % 8);
    for (std::uint32_t c = 0; c < nclauses; ++c) {
      std::vector<Lit> clause;
      std::uint32_t width = 1 + std::uint32_t(rng() % 3);
      for (std::uint32_t l = 0; l < width; ++l) {
        Id var = cnf.variables[rng() % nvars];
        clause.push_back(rng() & 1 ? pos(var) : neg(var));
      }
      cnf.clauses.push_back(std::move(clause));
    }
    auto fast = sat_solve(cnf);
    auto slow = sat_enumerate(cnf);
    REQUIRE(fast.has_value() == slow.has_value());
    if (fast) {
      CHECK(*fast == *slow);  // identical counting-first model
      CHECK(satisfies(cnf, *fast));
    }
  }
}

TEST_CASE("enumeration refuses large variable sets") {
  Cnf cnf;
  for (Id v = 0; v < 25; ++v) cnf.variables.push_back(v);
  CHECK_THROWS_AS(sat_enumerate(cnf), std::logic_error);
}

TEST_CASE("two literal builder") {
  SUBCASE("satisfiable implication chain") {
    TwoSatBuilder b({0, 1, 2});
    b.add_clause({neg(0), pos(1)});  // 0 -> 1
    b.add_clause({neg(1), pos(2)});  // 1 -> 2
    b.add_clause({pos(0)});
    auto a = b.solve();
    REQUIRE(a.has_value());
    CHECK(*a == Assignment{{0, true}, {1, true}, {2, true}});
    CHECK(b.clause_count() == 3);
  }
  SUBCASE("contradictory cycle") {
    TwoSatBuilder b({0, 1});
    b.add_clause({pos(0), pos(1)});
    b.add_clause({pos(0), neg(1)});
    b.add_clause({neg(0), pos(1)});
    b.add_clause({neg(0), neg(1)});
    CHECK(!b.solve().has_value());
  }
  SUBCASE("explicit contradiction") {
    TwoSatBuilder b({0});
    b.add_contradiction();
    CHECK(!b.solve().has_value());
  }
  SUBCASE("three literals break the invariant") {
    TwoSatBuilder b({0, 1, 2});
    CHECK_THROWS_AS(b.add_clause({pos(0), pos(1), pos(2)}), std::logic_error);
  }
  SUBCASE("empty clause records a contradiction") {
    TwoSatBuilder b({0});
    b.add_clause({});
    CHECK(!b.solve().has_value());
  }
  SUBCASE("agrees with the general solver on random two-literal formulas") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 300; ++round) {
      std::uint32_t nvars = 1 + std::uint32_t(rng() % 6);
      std::vector<Id> vars;
      for (Id v = 0; v < nvars; ++v) vars.push_back(v);
      TwoSatBuilder b(vars);
      Cnf cnf{vars, {}};
      std::uint32_t nclauses = std::uint32_t(rng() % 10);
      for (std::uint32_t c = 0; c < nclauses; ++c) {
        std::vector<Lit> clause;
        std::uint32_t width = 1 + std::uint32_t(rng() % 2);
        for (std::uint32_t l = 0; l < width; ++l) {
          Id var = Id(rng() % nvars);
          clause.push_back(rng() & 1 ? pos(var) : neg(var));
        }
        b.add_clause(clause);
        cnf.clauses.push_back(std::move(clause));
      }
      auto two = b.solve();
      auto general = sat_enumerate(cnf);
      REQUIRE(two.has_value() == general.has_value());
      if (two) CHECK(satisfies(cnf, *two));  // models may differ, validity must not
    }
  }
}

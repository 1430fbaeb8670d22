#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "pg/errors.hpp"
#include "pg/format.hpp"
#include "pg/solver.hpp"
#include "pg/reductions.hpp"

using namespace pg;

namespace {

G5Instance lit(bool system_owned, bool initially_true, bool system_first) {
  G5Instance inst;
  inst.vars.push_back({"x", system_owned, initially_true});
  inst.formula.push_back({G5Instance::Node::Kind::Lit, 0, true, 0, 0});
  inst.system_first = system_first;
  return inst;
}

}  // namespace

TEST_CASE("formula evaluation") {
  // (or (and x (not y)) z)
  G5Instance inst;
  inst.vars = {{"x", false, false}, {"y", true, false}, {"z", false, false}};
  inst.formula.resize(4);
  inst.formula[0] = {G5Instance::Node::Kind::Or, 0, true, 1, 3};
  inst.formula[1] = {G5Instance::Node::Kind::And, 0, true, 2, 0};
  inst.formula[2] = {G5Instance::Node::Kind::Lit, 0, true, 0, 0};   // x
  inst.formula[3] = {G5Instance::Node::Kind::Lit, 2, true, 0, 0};   // z
  // And's right child must follow it; point it at a fresh not-y node.
  inst.formula.push_back({G5Instance::Node::Kind::Lit, 1, false, 0, 0});  // not y
  inst.formula[1].right = 4;
  CHECK_NOTHROW(validate_g5(inst));

  auto eval = [&](bool x, bool y, bool z) {
    return eval_g5(inst, {char(x), char(y), char(z)});
  };
  CHECK(eval(true, false, false));    // and-branch holds
  CHECK(!eval(true, true, false));    // y kills the and
  CHECK(eval(true, true, true));      // z rescues
  CHECK(eval(false, true, true));
  CHECK(!eval(false, false, false));
}

TEST_CASE("formula validation") {
  SUBCASE("empty formula") {
    G5Instance inst;
    inst.vars.push_back({"x", false, false});
    CHECK_THROWS_AS(validate_g5(inst), Error);
  }
  SUBCASE("variable out of range") {
    G5Instance inst = lit(false, false, false);
    inst.formula[0].var = 3;
    CHECK_THROWS_AS(validate_g5(inst), Error);
  }
  SUBCASE("child index not after the parent") {
    G5Instance inst;
    inst.vars.push_back({"x", false, false});
    inst.formula.resize(2);
    inst.formula[0] = {G5Instance::Node::Kind::And, 0, true, 0, 1};  // self child
    inst.formula[1] = {G5Instance::Node::Kind::Lit, 0, true, 0, 0};
    CHECK_THROWS_AS(validate_g5(inst), Error);
  }
  SUBCASE("duplicate variable names") {
    G5Instance inst = lit(false, false, false);
    inst.vars.push_back({"x", true, false});
    CHECK_THROWS_AS(validate_g5(inst), Error);
  }
  SUBCASE("names must be identifiers") {
    G5Instance inst = lit(false, false, false);
    inst.vars[0].name = "a b";
    CHECK_THROWS_AS(validate_g5(inst), Error);
  }
}

TEST_CASE("toggle game structure") {
  // One variable per side, formula (or x y), environment asks first.
  G5Instance inst;
  inst.vars = {{"x", false, false}, {"y", true, false}};
  inst.formula.resize(3);
  inst.formula[0] = {G5Instance::Node::Kind::Or, 0, true, 1, 2};
  inst.formula[1] = {G5Instance::Node::Kind::Lit, 0, true, 0, 0};
  inst.formula[2] = {G5Instance::Node::Kind::Lit, 1, true, 0, 0};
  inst.system_first = false;

  PetriGame g = gen_g5(inst);
  CHECK(g.bound == 1);
  CHECK(g.net.place_count() == 17);       // 6 turn + ctl + 4 variable + 6 subformula
  CHECK(g.net.transition_count() == 15);  // 7 fixed + 4 moves + 2 literal + 2 disjunct proofs

  Id ctl = g.net.place_index.at("ctl");
  CHECK(g.system_place[ctl]);
  for (Id p = 0; p < g.net.place_count(); ++p)
    if (p != ctl) CHECK(!g.system_place[p]);

  CHECK(g.bad.kind == BadSpec::Kind::Places);
  CHECK(g.bad.places == std::vector<Id>{g.net.place_index.at("f0_pr")});

  CHECK(g.net.initial ==
        Multiset::from_entries({{ctl, 1},
                                {g.net.place_index.at("turn_eq"), 1},
                                {g.net.place_index.at("v_x_f"), 1},
                                {g.net.place_index.at("v_y_f"), 1},
                                {g.net.place_index.at("f0_un"), 1},
                                {g.net.place_index.at("f1_un"), 1},
                                {g.net.place_index.at("f2_un"), 1}}));

  // System variable moves need the control token; environment moves do not.
  CHECK(!g.purely_environmental(g.net.transition_index.at("mv_y_t")));
  CHECK(g.purely_environmental(g.net.transition_index.at("mv_x_t")));
  CHECK(g.purely_environmental(g.net.transition_index.at("adv_e")));
  CHECK(!g.purely_environmental(g.net.transition_index.at("inform")));

  REQUIRE_NOTHROW(validate(g));
}

TEST_CASE("toggle game oracle hand cases") {
  // Environment owns the only variable: it simply sets x and claims.
  CHECK(solve_g5_tiny(lit(false, false, false)) == Winner::Environment);
  CHECK(solve_g5_tiny(lit(false, false, true)) == Winner::Environment);
  // The system owns it and keeps x false forever.
  CHECK(solve_g5_tiny(lit(true, false, false)) == Winner::System);
  CHECK(solve_g5_tiny(lit(true, false, true)) == Winner::System);
  // Initially true formulas are claimed before anyone moves.
  CHECK(solve_g5_tiny(lit(true, true, false)) == Winner::Environment);
  CHECK(solve_g5_tiny(lit(false, true, true)) == Winner::Environment);

  SUBCASE("guard") {
    G5Instance big;
    for (int i = 0; i < 11; ++i)
      big.vars.push_back({"x" + std::to_string(i), false, false});
    big.formula.push_back({G5Instance::Node::Kind::Lit, 0, true, 0, 0});
    CHECK_THROWS_AS(solve_g5_tiny(big), Error);
  }
}

TEST_CASE("toggle game matches its oracle") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    CAPTURE(seed);
    G5Instance inst = random_g5(seed, 1 + seed % 3, seed % 3);
    Winner expected = solve_g5_tiny(inst);
    Verdict v = decide(gen_g5(inst));
    CHECK(v.winner == expected);
  }
}

TEST_CASE("clause game structure") {
  // (x1 or not x2 or x3) and (not x3 or x1 or not x4): one complementary
  // occurrence pair (x3 against not x3).
  ThreeSatInstance inst{4, {{{1, -2, 3}}, {{-3, 1, -4}}}};
  CHECK_NOTHROW(validate_3sat(inst));
  PetriGame g = gen_3sat(inst);

  CHECK(g.net.place_count() == 13);       // 6 fixed + 6 occurrences + 1 contradiction
  CHECK(g.net.transition_count() == 10);  // 2 clauses + 6 takes + pair + spin
  CHECK(g.net.place_index.count("c1_l2") == 1);
  CHECK(g.net.place_index.count("contra1") == 1);
  CHECK(g.net.transition_index.count("take_c2_l3") == 1);
  CHECK(g.net.transition_index.count("pair1") == 1);
  CHECK(g.net.transition_index.count("spin1") == 1);

  CHECK(g.system_place[g.net.place_index.at("ctl")]);
  CHECK(g.system_place[g.net.place_index.at("sink_ctl")]);
  CHECK(g.bad.empty());  // the verdict rides on deadlock avoidance alone
  CHECK(g.env_tokens(g.net.initial) == 3);
  REQUIRE_NOTHROW(validate(g));
}

TEST_CASE("clause instance validation") {
  CHECK_THROWS_AS(validate_3sat(ThreeSatInstance{0, {}}), Error);
  CHECK_THROWS_AS(validate_3sat(ThreeSatInstance{2, {{{1, 0, 2}}}}), Error);
  CHECK_THROWS_AS(validate_3sat(ThreeSatInstance{2, {{{1, -3, 2}}}}), Error);

  ThreeSatInstance wide;
  wide.num_vars = 21;
  wide.clauses.push_back({1, 2, 3});
  CHECK_THROWS_AS(brute_force_sat(wide), Error);
}

TEST_CASE("clause game verdict tracks satisfiability") {
  SUBCASE("single tautological clause") {
    ThreeSatInstance inst{1, {{{1, 1, 1}}}};
    CHECK(brute_force_sat(inst));
    CHECK(decide(gen_3sat(inst)).winner == Winner::System);
  }
  SUBCASE("matched contradiction") {
    ThreeSatInstance inst{1, {{{1, 1, 1}}, {{-1, -1, -1}}}};
    CHECK(!brute_force_sat(inst));
    CHECK(decide(gen_3sat(inst)).winner == Winner::Environment);
  }
  SUBCASE("random instances agree with enumeration") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      CAPTURE(seed);
      ThreeSatInstance inst = random_3sat(seed, 3 + seed % 3, 2 + seed % 5);
      Verdict v = decide(gen_3sat(inst));
      CHECK((v.winner == Winner::System) == brute_force_sat(inst));
    }
  }
}

TEST_CASE("dimacs parsing") {
  SUBCASE("golden") {
    ThreeSatInstance inst = parse_dimacs(
        "c sample\n"
        "p cnf 4 2\n"
        "1 -2 3 0\n"
        "-3 1 -4 0\n");
    CHECK(inst.num_vars == 4);
    REQUIRE(inst.clauses.size() == 2);
    CHECK(inst.clauses[0] == std::array<int, 3>{1, -2, 3});
    CHECK(inst.clauses[1] == std::array<int, 3>{-3, 1, -4});
  }
  SUBCASE("clauses may span lines and share them") {
    ThreeSatInstance inst = parse_dimacs("p cnf 2 2\n1 1 2 0 -1 -2\n-2 0\n");
    REQUIRE(inst.clauses.size() == 2);
    CHECK(inst.clauses[1] == std::array<int, 3>{-1, -2, -2});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse_dimacs(""), ParseError);
    CHECK_THROWS_AS(parse_dimacs("1 2 3 0\n"), ParseError);          // clause before header
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 1\np cnf 3 1\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p dnf 3 1\n1 2 3 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 1 junk\n1 2 3 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 0 0\n"), ParseError);        // no variables
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 1\n1 2 0\n"), ParseError); // two literals
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 1\n1 2 3 4 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 1\n1 2 4 0\n"), ParseError);  // out of range
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 2\n1 2 3 0\n"), ParseError);  // count mismatch
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 1\n1 2 3\n"), ParseError);    // unterminated
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 1\n1 2 3 0 x\n"), ParseError);
  }
}

TEST_CASE("toggle instance parsing") {
  SUBCASE("golden") {
    G5Instance inst = parse_g5(
        "# a comment\n"
        "evar x 0\n"
        "svar y 1\n"
        "first e\n"
        "formula (or (and x (not y)) y)\n");
    REQUIRE(inst.vars.size() == 2);
    CHECK(inst.vars[0].name == "x");
    CHECK(!inst.vars[0].system_owned);
    CHECK(!inst.vars[0].initially_true);
    CHECK(inst.vars[1].system_owned);
    CHECK(inst.vars[1].initially_true);
    CHECK(!inst.system_first);
    REQUIRE(inst.formula.size() == 5);
    CHECK(inst.formula[0].kind == G5Instance::Node::Kind::Or);
    CHECK(inst.formula[1].kind == G5Instance::Node::Kind::And);
    CHECK(inst.formula[2].kind == G5Instance::Node::Kind::Lit);
    CHECK(inst.formula[2].var == 0);
    CHECK(inst.formula[2].positive);
    CHECK(inst.formula[3].var == 1);
    CHECK(!inst.formula[3].positive);
    CHECK(inst.formula[4].var == 1);
    CHECK(inst.formula[4].positive);
    CHECK(inst.formula[0].left == 1);
    CHECK(inst.formula[0].right == 4);
  }
  SUBCASE("whitespace insensitivity inside the formula") {
    G5Instance a = parse_g5("evar x 0\nfirst e\nformula (not x)\n");
    G5Instance b = parse_g5("evar x 0\nfirst e\nformula ( not   x )\n");
    CHECK(a.formula.size() == b.formula.size());
    CHECK(!a.formula[0].positive);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse_g5(""), ParseError);
    CHECK_THROWS_AS(parse_g5("evar x 0\nformula x\n"), ParseError);  // missing first
    CHECK_THROWS_AS(parse_g5("evar x 0\nfirst e\n"), ParseError);    // missing formula
    CHECK_THROWS_AS(parse_g5("evar x 2\nfirst e\nformula x\n"), ParseError);
    CHECK_THROWS_AS(parse_g5("evar x 0\nevar x 1\nfirst e\nformula x\n"), ParseError);
    CHECK_THROWS_AS(parse_g5("evar x 0\nfirst q\nformula x\n"), ParseError);
    CHECK_THROWS_AS(parse_g5("evar x 0\nfirst e\nformula y\n"), ParseError);
    CHECK_THROWS_AS(parse_g5("evar x 0\nfirst e\nformula (xor x x)\n"), ParseError);
    CHECK_THROWS_AS(parse_g5("evar x 0\nfirst e\nformula (and x)\n"), ParseError);
    CHECK_THROWS_AS(parse_g5("evar x 0\nfirst e\nformula (not x) x\n"), ParseError);
    CHECK_THROWS_AS(parse_g5("evar x 0\nfirst e\nformula x\nformula x\n"), ParseError);
    CHECK_THROWS_AS(parse_g5("evar x_0 0\nbogus\nfirst e\nformula x_0\n"), ParseError);
  }
}

TEST_CASE("seeded generators are reproducible") {
  SUBCASE("clause instances") {
    ThreeSatInstance a = random_3sat(99, 5, 7);
    ThreeSatInstance b = random_3sat(99, 5, 7);
    CHECK(a.num_vars == b.num_vars);
    CHECK(a.clauses == b.clauses);
    CHECK(a.clauses.size() == 7);
    ThreeSatInstance c = random_3sat(100, 5, 7);
    CHECK(a.clauses != c.clauses);
    CHECK_NOTHROW(validate_3sat(a));
  }
  SUBCASE("toggle instances") {
    G5Instance a = random_g5(7, 3, 2);
    G5Instance b = random_g5(7, 3, 2);
    REQUIRE(a.formula.size() == b.formula.size());
    for (std::size_t i = 0; i < a.formula.size(); ++i) {
      CHECK(a.formula[i].kind == b.formula[i].kind);
      CHECK(a.formula[i].var == b.formula[i].var);
      CHECK(a.formula[i].positive == b.formula[i].positive);
      CHECK(a.formula[i].left == b.formula[i].left);
      CHECK(a.formula[i].right == b.formula[i].right);
    }
    CHECK(a.vars.size() == 3);
    CHECK_NOTHROW(validate_g5(a));
  }
}

TEST_CASE("builtins are well formed") {
  auto examples = builtin_examples();
  REQUIRE(examples.size() == 3);
  std::set<std::string> names;
  for (auto& [name, game] : examples) {
    names.insert(name);
    REQUIRE_NOTHROW(validate(game));
  }
  CHECK(names == std::set<std::string>{"access_control", "minimal_win", "minimal_lose"});

  for (auto& [name, game] : examples) {
    if (name != "access_control") continue;
    CHECK(game.net.place_count() == 12);
    CHECK(game.net.transition_count() == 9);
    CHECK(game.bad.kind == BadSpec::Kind::Markings);
    CHECK(game.bad.markings.size() == 27);
    CHECK(game.bound == 1);
    // Every bad marking has the door open with someone unauthenticated.
    Id s_open = game.net.place_index.at("s_open");
    Id a1_auth = game.net.place_index.at("a1_auth");
    Id a2_auth = game.net.place_index.at("a2_auth");
    for (const Marking& m : game.bad.markings) {
      CHECK(m.contains(s_open));
      CHECK(!(m.contains(a1_auth) && m.contains(a2_auth)));
    }
  }
}

#include "pg/reductions.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "pg/errors.hpp"

namespace pg {
namespace {

PetriGame assemble_game(const NetBuilder& b, const std::vector<std::string>& system_places,
                        Count bound) {
  PetriGame g;
  g.net = b.build();
  g.system_place.assign(g.net.place_count(), false);
  for (const auto& name : system_places) g.system_place[g.net.place_index.at(name)] = true;
  g.bound = bound;
  g.finalize();
  return g;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace

void validate_g5(const G5Instance& inst) {
  if (inst.formula.empty()) throw Error("instance has an empty formula");
  std::vector<std::string> names;
  for (const auto& v : inst.vars) {
    if (!valid_name(v.name)) throw Error("variable name '" + v.name + "' is not an identifier");
    names.push_back(v.name);
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw Error("duplicate variable name");
  for (std::size_t i = 0; i < inst.formula.size(); ++i) {
    const auto& node = inst.formula[i];
    if (node.kind == G5Instance::Node::Kind::Lit) {
      if (node.var >= inst.vars.size()) throw Error("literal references an undeclared variable");
    } else {
      if (node.left <= i || node.right <= i || node.left >= inst.formula.size() ||
          node.right >= inst.formula.size() || node.left == node.right)
        throw Error("formula arena is not in preorder");
    }
  }
}

bool eval_g5(const G5Instance& inst, const std::vector<char>& assignment) {
  // Children follow their parents, so a reverse pass evaluates bottom-up.
  std::vector<char> value(inst.formula.size(), 0);
  for (std::size_t i = inst.formula.size(); i-- > 0;) {
    const auto& node = inst.formula[i];
    switch (node.kind) {
      case G5Instance::Node::Kind::Lit:
        value[i] = (assignment[node.var] != 0) == node.positive;
        break;
      case G5Instance::Node::Kind::And:
        value[i] = value[node.left] && value[node.right];
        break;
      case G5Instance::Node::Kind::Or:
        value[i] = value[node.left] || value[node.right];
        break;
    }
  }
  return value[0] != 0;
}

PetriGame gen_g5(const G5Instance& inst) {
  validate_g5(inst);
  NetBuilder b;
  for (const char* p : {"turn_eq", "turn_e", "turn_sq", "turn_sinfo", "turn_s", "turn_p"})
    b.add_place(p);
  b.add_place("ctl");
  auto var_place = [](const G5Instance::Var& v, bool value) {
    return "v_" + v.name + (value ? "_t" : "_f");
  };
  for (const auto& v : inst.vars) {
    b.add_place(var_place(v, false));
    b.add_place(var_place(v, true));
  }
  auto sub_place = [](std::size_t i, bool proved) {
    return "f" + std::to_string(i) + (proved ? "_pr" : "_un");
  };
  for (std::size_t i = 0; i < inst.formula.size(); ++i) {
    b.add_place(sub_place(i, false));
    b.add_place(sub_place(i, true));
  }

  b.add_transition("adv_e", {{"turn_eq", 1}}, {{"turn_e", 1}});
  b.add_transition("adv_s", {{"turn_sq", 1}}, {{"turn_sinfo", 1}});
  b.add_transition("inform", {{"turn_sinfo", 1}, {"ctl", 1}}, {{"turn_s", 1}, {"ctl", 1}});
  b.add_transition("freeze_e", {{"turn_eq", 1}}, {{"turn_p", 1}});
  b.add_transition("freeze_s", {{"turn_sq", 1}}, {{"turn_p", 1}});
  b.add_transition("pass_e", {{"turn_e", 1}}, {{"turn_sq", 1}});
  b.add_transition("pass_s", {{"turn_s", 1}, {"ctl", 1}}, {{"turn_eq", 1}, {"ctl", 1}});
  for (const auto& v : inst.vars) {
    if (v.system_owned) {
      b.add_transition("mv_" + v.name + "_t",
                       {{"turn_s", 1}, {"ctl", 1}, {var_place(v, false), 1}},
                       {{"turn_eq", 1}, {"ctl", 1}, {var_place(v, true), 1}});
      b.add_transition("mv_" + v.name + "_f",
                       {{"turn_s", 1}, {"ctl", 1}, {var_place(v, true), 1}},
                       {{"turn_eq", 1}, {"ctl", 1}, {var_place(v, false), 1}});
    } else {
      b.add_transition("mv_" + v.name + "_t", {{"turn_e", 1}, {var_place(v, false), 1}},
                       {{"turn_sq", 1}, {var_place(v, true), 1}});
      b.add_transition("mv_" + v.name + "_f", {{"turn_e", 1}, {var_place(v, true), 1}},
                       {{"turn_sq", 1}, {var_place(v, false), 1}});
    }
  }
  for (std::size_t i = 0; i < inst.formula.size(); ++i) {
    const auto& node = inst.formula[i];
    const std::string un = sub_place(i, false), pr = sub_place(i, true);
    switch (node.kind) {
      case G5Instance::Node::Kind::Lit: {
        std::string vp = var_place(inst.vars[node.var], node.positive);
        b.add_transition("prove_f" + std::to_string(i), {{"turn_p", 1}, {un, 1}, {vp, 1}},
                         {{"turn_p", 1}, {pr, 1}, {vp, 1}});
        break;
      }
      case G5Instance::Node::Kind::And: {
        std::string left_pr = sub_place(node.left, true);
        std::string right_pr = sub_place(node.right, true);
        b.add_transition("prove_f" + std::to_string(i),
                         {{"turn_p", 1}, {un, 1}, {left_pr, 1}, {right_pr, 1}},
                         {{"turn_p", 1}, {pr, 1}, {left_pr, 1}, {right_pr, 1}});
        break;
      }
      case G5Instance::Node::Kind::Or: {
        b.add_transition("prove_f" + std::to_string(i) + "_l",
                         {{"turn_p", 1}, {un, 1}, {sub_place(node.left, true), 1}},
                         {{"turn_p", 1}, {pr, 1}, {sub_place(node.left, true), 1}});
        b.add_transition("prove_f" + std::to_string(i) + "_r",
                         {{"turn_p", 1}, {un, 1}, {sub_place(node.right, true), 1}},
                         {{"turn_p", 1}, {pr, 1}, {sub_place(node.right, true), 1}});
        break;
      }
    }
  }

  b.add_initial("ctl");
  b.add_initial(inst.system_first ? "turn_sq" : "turn_eq");
  for (const auto& v : inst.vars) b.add_initial(var_place(v, v.initially_true));
  for (std::size_t i = 0; i < inst.formula.size(); ++i) b.add_initial(sub_place(i, false));

  PetriGame g = assemble_game(b, {"ctl"}, 1);
  g.bad = BadSpec::from_places({g.net.place_index.at(sub_place(0, true))});
  return g;
}

Winner solve_g5_tiny(const G5Instance& inst) {
  validate_g5(inst);
  const std::size_t n = inst.vars.size();
  if (n > 10) throw Error("toggle-game oracle is limited to 10 variables");
  const std::uint32_t masks = std::uint32_t{1} << n;

  std::vector<char> holds(masks);
  std::vector<char> assignment(n);
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    for (std::size_t i = 0; i < n; ++i) assignment[i] = (mask >> i) & 1;
    holds[mask] = eval_g5(inst, assignment);
  }

  // State = assignment * 2 + phase; phase 0: environment question point
  // (environment moves next), phase 1: system question point. The formula
  // holding at a question point wins for the environment; otherwise phase 0
  // states need one winning successor, phase 1 states need all of them.
  std::vector<char> attr(2 * masks, 0);
  for (std::uint32_t mask = 0; mask < masks; ++mask)
    if (holds[mask]) attr[2 * mask] = attr[2 * mask + 1] = 1;

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
      for (int phase = 0; phase < 2; ++phase) {
        if (attr[2 * mask + phase]) continue;
        bool sys_owner = phase == 1;
        bool any = false, all = true;
        auto look = [&](std::uint32_t next_mask) {
          bool won = attr[2 * next_mask + (1 - phase)];
          any = any || won;
          all = all && won;
        };
        look(mask);  // pass
        for (std::size_t i = 0; i < n; ++i)
          if (inst.vars[i].system_owned == sys_owner) look(mask ^ (std::uint32_t{1} << i));
        if (sys_owner ? all : any) {
          attr[2 * mask + phase] = 1;
          changed = true;
        }
      }
    }
  }

  std::uint32_t init = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (inst.vars[i].initially_true) init |= std::uint32_t{1} << i;
  return attr[2 * init + (inst.system_first ? 1 : 0)] ? Winner::Environment : Winner::System;
}

void validate_3sat(const ThreeSatInstance& inst) {
  if (inst.num_vars == 0) throw Error("instance declares no variables");
  for (const auto& clause : inst.clauses)
    for (int lit : clause) {
      if (lit == 0) throw Error("zero literal inside a clause");
      std::uint32_t v = static_cast<std::uint32_t>(lit < 0 ? -lit : lit);
      if (v > inst.num_vars) throw Error("literal references an undeclared variable");
    }
}

PetriGame gen_3sat(const ThreeSatInstance& inst) {
  validate_3sat(inst);
  NetBuilder b;
  b.add_place("ctl");
  b.add_place("sink_ctl");
  b.add_place("sink_env");
  for (int i = 1; i <= 3; ++i) b.add_place("env" + std::to_string(i));

  struct Occurrence {
    std::string place;
    int lit;
  };
  std::vector<Occurrence> occ;
  for (std::size_t c = 0; c < inst.clauses.size(); ++c) {
    std::vector<std::pair<std::string, Count>> post;
    for (int j = 0; j < 3; ++j) {
      std::string place =
          "c" + std::to_string(c + 1) + "_l" + std::to_string(j + 1);
      b.add_place(place);
      occ.push_back({place, inst.clauses[c][j]});
      post.emplace_back(place, 1);
    }
    b.add_transition("clause" + std::to_string(c + 1),
                     {{"env1", 1}, {"env2", 1}, {"env3", 1}}, post);
  }
  for (const auto& o : occ)
    b.add_transition("take_" + o.place, {{o.place, 1}, {"ctl", 1}},
                     {{"sink_env", 1}, {"sink_ctl", 1}});
  std::size_t pair_index = 0;
  for (std::size_t a = 0; a < occ.size(); ++a)
    for (std::size_t c = a + 1; c < occ.size(); ++c) {
      if (occ[a].lit != -occ[c].lit) continue;
      ++pair_index;
      std::string spin_place = "contra" + std::to_string(pair_index);
      b.add_place(spin_place);
      b.add_transition("pair" + std::to_string(pair_index),
                       {{"env1", 1}, {"env2", 1}, {"env3", 1}},
                       {{occ[a].place, 1}, {occ[c].place, 1}, {spin_place, 1}});
      b.add_transition("spin" + std::to_string(pair_index), {{spin_place, 1}},
                       {{spin_place, 1}});
    }

  b.add_initial("ctl");
  for (int i = 1; i <= 3; ++i) b.add_initial("env" + std::to_string(i));
  return assemble_game(b, {"ctl", "sink_ctl"}, 1);
}

bool brute_force_sat(const ThreeSatInstance& inst) {
  validate_3sat(inst);
  if (inst.num_vars > 20) throw Error("assignment enumeration is limited to 20 variables");
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << inst.num_vars); ++mask) {
    bool ok = true;
    for (const auto& clause : inst.clauses) {
      bool sat = false;
      for (int lit : clause) {
        std::uint32_t v = static_cast<std::uint32_t>((lit < 0 ? -lit : lit) - 1);
        if ((((mask >> v) & 1) != 0) == (lit > 0)) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

ThreeSatInstance parse_dimacs(const std::string& text) {
  ThreeSatInstance inst;
  bool have_header = false;
  std::uint64_t declared_clauses = 0;
  std::vector<int> pending;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c") continue;
    if (first == "p") {
      if (have_header) throw ParseError(lineno, 1, "duplicate header");
      std::string kind;
      if (!(ls >> kind) || kind != "cnf") throw ParseError(lineno, 1, "expected 'p cnf'");
      long long vars = 0, clauses = 0;
      if (!(ls >> vars >> clauses) || vars <= 0 || clauses < 0)
        throw ParseError(lineno, 1, "bad header counts");
      std::string extra;
      if (ls >> extra) throw ParseError(lineno, 1, "unexpected token '" + extra + "'");
      inst.num_vars = static_cast<std::uint32_t>(vars);
      declared_clauses = static_cast<std::uint64_t>(clauses);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(lineno, 1, "clause before 'p cnf' header");
    ls.clear();
    ls.str(line);
    long long lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (pending.size() != 3)
          throw ParseError(lineno, 1,
                           "clause has " + std::to_string(pending.size()) +
                               " literals, need exactly 3");
        inst.clauses.push_back({pending[0], pending[1], pending[2]});
        pending.clear();
      } else {
        long long v = lit < 0 ? -lit : lit;
        if (v > inst.num_vars)
          throw ParseError(lineno, 1, "literal " + std::to_string(lit) + " out of range");
        pending.push_back(static_cast<int>(lit));
      }
    }
    std::string trailing;
    ls.clear();
    if (ls >> trailing) throw ParseError(lineno, 1, "unexpected token '" + trailing + "'");
  }
  if (!have_header) throw ParseError(lineno, 1, "missing 'p cnf' header");
  if (!pending.empty()) throw ParseError(lineno, 1, "unterminated clause at end of input");
  if (inst.clauses.size() != declared_clauses)
    throw ParseError(lineno, 1,
                     "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                         std::to_string(inst.clauses.size()));
  return inst;
}

namespace {

struct G5Parser {
  std::vector<std::string> tokens;
  std::vector<std::size_t> lines;
  std::size_t pos = 0;

  const std::string& peek(std::size_t lineno) const {
    if (pos >= tokens.size()) throw ParseError(lineno, 1, "unexpected end of formula");
    return tokens[pos];
  }
  std::string take(std::size_t lineno) {
    std::string t = peek(lineno);
    ++pos;
    return t;
  }
};

std::uint32_t parse_g5_expr(G5Parser& p, G5Instance& inst,
                            const std::unordered_map<std::string, std::uint32_t>& index,
                            std::size_t lineno) {
  std::uint32_t node = static_cast<std::uint32_t>(inst.formula.size());
  inst.formula.emplace_back();
  std::string t = p.take(lineno);
  if (t != "(") {
    auto it = index.find(t);
    if (it == index.end()) throw ParseError(lineno, 1, "undeclared variable '" + t + "'");
    inst.formula[node] = {G5Instance::Node::Kind::Lit, it->second, true, 0, 0};
    return node;
  }
  std::string op = p.take(lineno);
  if (op == "not") {
    std::string name = p.take(lineno);
    auto it = index.find(name);
    if (it == index.end()) throw ParseError(lineno, 1, "undeclared variable '" + name + "'");
    inst.formula[node] = {G5Instance::Node::Kind::Lit, it->second, false, 0, 0};
  } else if (op == "and" || op == "or") {
    std::uint32_t left = parse_g5_expr(p, inst, index, lineno);
    std::uint32_t right = parse_g5_expr(p, inst, index, lineno);
    inst.formula[node] = {op == "and" ? G5Instance::Node::Kind::And : G5Instance::Node::Kind::Or,
                          0, true, left, right};
  } else {
    throw ParseError(lineno, 1, "expected and/or/not, got '" + op + "'");
  }
  if (p.take(lineno) != ")") throw ParseError(lineno, 1, "expected ')'");
  return node;
}

}  // namespace

G5Instance parse_g5(const std::string& text) {
  G5Instance inst;
  std::unordered_map<std::string, std::uint32_t> index;
  bool have_first = false, have_formula = false;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "svar" || word == "evar") {
      std::string name;
      int value = -1;
      if (!(ls >> name >> value) || (value != 0 && value != 1))
        throw ParseError(lineno, 1, "expected '" + word + " NAME 0|1'");
      if (!valid_name(name)) throw ParseError(lineno, 1, "bad variable name '" + name + "'");
      if (index.count(name)) throw ParseError(lineno, 1, "duplicate variable '" + name + "'");
      index.emplace(name, static_cast<std::uint32_t>(inst.vars.size()));
      inst.vars.push_back({name, word == "svar", value == 1});
      continue;
    }
    if (word == "first") {
      std::string who;
      if (!(ls >> who) || (who != "s" && who != "e"))
        throw ParseError(lineno, 1, "expected 'first s' or 'first e'");
      inst.system_first = who == "s";
      have_first = true;
      continue;
    }
    if (word == "formula") {
      if (have_formula) throw ParseError(lineno, 1, "duplicate formula");
      G5Parser p;
      std::string rest;
      std::getline(ls, rest);
      std::string cur;
      for (char c : rest) {
        if (c == '(' || c == ')') {
          if (!cur.empty()) p.tokens.push_back(std::exchange(cur, {}));
          p.tokens.push_back(std::string(1, c));
        } else if (std::isspace(static_cast<unsigned char>(c))) {
          if (!cur.empty()) p.tokens.push_back(std::exchange(cur, {}));
        } else {
          cur.push_back(c);
        }
      }
      if (!cur.empty()) p.tokens.push_back(cur);
      parse_g5_expr(p, inst, index, lineno);
      if (p.pos != p.tokens.size())
        throw ParseError(lineno, 1, "trailing tokens after formula");
      have_formula = true;
      continue;
    }
    throw ParseError(lineno, 1, "unknown directive '" + word + "'");
  }
  if (!have_first) throw ParseError(lineno, 1, "missing 'first' line");
  if (!have_formula) throw ParseError(lineno, 1, "missing 'formula' line");
  validate_g5(inst);
  return inst;
}

ThreeSatInstance random_3sat(std::uint64_t seed, std::uint32_t vars, std::uint32_t clauses) {
  if (vars == 0) throw Error("need at least one variable");
  std::mt19937_64 rng(seed);
  ThreeSatInstance inst;
  inst.num_vars = vars;
  for (std::uint32_t c = 0; c < clauses; ++c) {
    std::array<int, 3> clause{};
    for (int j = 0; j < 3; ++j) {
      int v = static_cast<int>(rng() % vars) + 1;
      clause[j] = (rng() & 1) ? v : -v;
    }
    inst.clauses.push_back(clause);
  }
  return inst;
}

G5Instance random_g5(std::uint64_t seed, std::uint32_t vars, std::uint32_t depth) {
  if (vars == 0) throw Error("need at least one variable");
  std::mt19937_64 rng(seed);
  G5Instance inst;
  for (std::uint32_t i = 0; i < vars; ++i)
    inst.vars.push_back({"x" + std::to_string(i), (rng() & 1) != 0, (rng() & 1) != 0});
  inst.system_first = (rng() & 1) != 0;

  auto build = [&](auto&& self, std::uint32_t d) -> std::uint32_t {
    std::uint32_t node = static_cast<std::uint32_t>(inst.formula.size());
    inst.formula.emplace_back();
    if (d == 0 || rng() % 3 == 0) {
      inst.formula[node] = {G5Instance::Node::Kind::Lit,
                            static_cast<std::uint32_t>(rng() % vars), (rng() & 1) != 0, 0, 0};
    } else {
      auto kind =
          (rng() & 1) ? G5Instance::Node::Kind::And : G5Instance::Node::Kind::Or;
      std::uint32_t left = self(self, d - 1);
      std::uint32_t right = self(self, d - 1);
      inst.formula[node] = {kind, 0, true, left, right};
    }
    return node;
  };
  build(build, depth);
  return inst;
}

std::vector<std::pair<std::string, PetriGame>> builtin_examples() {
  std::vector<std::pair<std::string, PetriGame>> out;

  {
    NetBuilder b;
    for (const char* p : {"e1", "e1_attempt", "e1_wait", "a1", "a1_auth", "e2", "e2_attempt",
                          "e2_wait", "a2", "a2_auth", "s_closed", "s_open"})
      b.add_place(p);
    for (int i = 1; i <= 2; ++i) {
      std::string e = "e" + std::to_string(i), a = "a" + std::to_string(i);
      std::string n = std::to_string(i);
      b.add_transition("attempt" + n, {{e, 1}}, {{e + "_attempt", 1}});
      b.add_transition("auth" + n, {{e, 1}, {a, 1}}, {{e + "_attempt", 1}, {a + "_auth", 1}});
      b.add_transition("consult" + n, {{e + "_attempt", 1}, {"s_closed", 1}},
                       {{e, 1}, {"s_closed", 1}});
      b.add_transition("rest" + n, {{e, 1}, {a + "_auth", 1}},
                       {{e + "_wait", 1}, {a + "_auth", 1}});
    }
    b.add_transition("open", {{"s_closed", 1}}, {{"s_open", 1}});
    for (const char* p : {"e1", "a1", "e2", "a2", "s_closed"}) b.add_initial(p);

    PetriGame g = assemble_game(b, {"s_closed", "s_open"}, 1);
    // Bad: the safe is open while some authenticator has not moved yet. The
    // conjunction is not expressible through bad places alone, so the
    // combinations are enumerated as explicit markings.
    std::vector<Marking> bad;
    for (const char* e1p : {"e1", "e1_attempt", "e1_wait"})
      for (const char* a1p : {"a1", "a1_auth"})
        for (const char* e2p : {"e2", "e2_attempt", "e2_wait"})
          for (const char* a2p : {"a2", "a2_auth"}) {
            if (std::string(a1p) != "a1" && std::string(a2p) != "a2") continue;
            std::vector<std::pair<Id, Count>> entries;
            for (const char* p : {e1p, a1p, e2p, a2p, "s_open"})
              entries.emplace_back(g.net.place_index.at(p), 1);
            bad.push_back(Multiset::from_entries(std::move(entries)));
          }
    g.bad = BadSpec::from_markings(std::move(bad));
    out.emplace_back("access_control", std::move(g));
  }

  {
    NetBuilder b;
    b.add_place("sys");
    b.add_initial("sys");
    out.emplace_back("minimal_win", assemble_game(b, {"sys"}, 1));
  }

  {
    NetBuilder b;
    b.add_place("sys");
    b.add_initial("sys");
    PetriGame g = assemble_game(b, {"sys"}, 1);
    g.bad = BadSpec::from_places({g.net.place_index.at("sys")});
    out.emplace_back("minimal_lose", std::move(g));
  }

  return out;
}

}  // namespace pg

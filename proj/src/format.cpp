#include "pg/format.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>

#include "pg/errors.hpp"

namespace pg {

namespace {

struct Token {
  std::string text;
  std::size_t line;  // 1-based
  std::size_t col;   // 1-based
};

std::vector<std::vector<Token>> tokenize(const std::string& text) {
  std::vector<std::vector<Token>> lines;
  std::size_t line_no = 1;
  std::vector<Token> current;
  std::size_t col = 1;
  std::string word;
  std::size_t word_col = 0;
  bool in_comment = false;

  auto flush_word = [&]() {
    if (!word.empty()) {
      current.push_back({word, line_no, word_col});
      word.clear();
    }
  };
  auto flush_line = [&]() {
    flush_word();
    if (!current.empty()) lines.push_back(std::move(current));
    current.clear();
    ++line_no;
    col = 1;
    in_comment = false;
  };

  for (char c : text) {
    if (c == '\n') {
      flush_line();
      continue;
    }
    if (c == '\r') continue;  // tolerate CRLF
    if (!in_comment) {
      if (c == '#') {
        flush_word();
        in_comment = true;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        flush_word();
      } else {
        if (word.empty()) word_col = col;
        word += c;
      }
    }
    ++col;
  }
  flush_line();
  return lines;
}

const std::set<std::string> kReserved = {"bound", "places", "init",   "transition",
                                         "bad",   "pre",    "post",   "system",
                                         "env",   "marking"};

[[noreturn]] void fail(const Token& tok, const std::string& msg) {
  throw ParseError(tok.line, tok.col, msg);
}

void check_id(const Token& tok) {
  if (kReserved.count(tok.text)) fail(tok, "'" + tok.text + "' is a reserved word");
  if (tok.text.find(':') != std::string::npos) fail(tok, "':' not allowed in an id");
}

Count parse_count(const Token& tok, const std::string& digits) {
  if (digits.empty()) fail(tok, "missing count after ':'");
  std::uint64_t value = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) fail(tok, "count must be a number");
    value = value * 10 + (c - '0');
    if (value > UINT32_MAX) fail(tok, "count out of range");
  }
  if (value == 0) fail(tok, "token count must be positive");
  return Count(value);
}

// "name" or "name:count"
std::pair<std::string, Count> parse_place_token(const Token& tok) {
  auto colon = tok.text.find(':');
  if (colon == std::string::npos) {
    if (kReserved.count(tok.text)) fail(tok, "'" + tok.text + "' is a reserved word");
    return {tok.text, 1};
  }
  std::string name = tok.text.substr(0, colon);
  if (name.empty()) fail(tok, "missing place name before ':'");
  if (kReserved.count(name)) fail(tok, "'" + name + "' is a reserved word");
  return {name, parse_count(tok, tok.text.substr(colon + 1))};
}

}  // namespace

PetriGame parse_game(const std::string& text) {
  auto lines = tokenize(text);

  NetBuilder builder;
  std::set<std::string> system_names;
  std::set<std::string> declared_places;
  std::set<std::string> declared_transitions;
  std::optional<Count> bound;

  // Pass 1: declarations, so later sections may reference places in any order.
  for (const auto& line : lines) {
    const Token& head = line[0];
    if (head.text == "bound") {
      if (bound) fail(head, "duplicate bound");
      if (line.size() != 2) fail(head, "expected: bound <k>");
      Count k = parse_count(line[1], line[1].text);
      bound = k;
    } else if (head.text == "places") {
      if (line.size() < 2 || (line[1].text != "system" && line[1].text != "env"))
        fail(head, "expected: places system|env <id>...");
      if (line.size() < 3) fail(line[1], "empty places section");
      bool system = line[1].text == "system";
      for (std::size_t i = 2; i < line.size(); ++i) {
        check_id(line[i]);
        if (declared_places.count(line[i].text))
          fail(line[i], "duplicate place '" + line[i].text + "'");
        declared_places.insert(line[i].text);
        if (system) system_names.insert(line[i].text);
        builder.add_place(line[i].text);
      }
    }
  }
  if (!bound) {
    if (lines.empty()) throw ParseError(1, 1, "empty input, expected a bound line");
    fail(lines[0][0], "missing bound line");
  }

  auto require_place = [&](const Token& tok, const std::string& name) {
    if (!declared_places.count(name)) fail(tok, "unknown place '" + name + "'");
  };

  std::vector<Id> bad_place_ids_later;  // resolved after build
  std::vector<std::vector<std::pair<std::string, Count>>> bad_marking_tokens;
  std::vector<std::string> bad_place_names;
  bool saw_bad_places = false, saw_bad_markings = false;

  // Pass 2: everything referencing places.
  for (const auto& line : lines) {
    const Token& head = line[0];
    if (head.text == "bound" || head.text == "places") continue;
    if (head.text == "init") {
      if (line.size() < 2) fail(head, "empty init line");
      for (std::size_t i = 1; i < line.size(); ++i) {
        auto [name, n] = parse_place_token(line[i]);
        require_place(line[i], name);
        builder.add_initial(name, n);
      }
    } else if (head.text == "transition") {
      if (line.size() < 2) fail(head, "expected: transition <id> pre <tokens> post <tokens>");
      check_id(line[1]);
      const std::string& name = line[1].text;
      if (declared_transitions.count(name) || declared_places.count(name))
        fail(line[1], "duplicate id '" + name + "'");
      declared_transitions.insert(name);
      std::size_t i = 2;
      if (i >= line.size() || line[i].text != "pre") fail(line[1], "expected 'pre' section");
      ++i;
      std::vector<std::pair<std::string, Count>> pre, post;
      for (; i < line.size() && line[i].text != "post"; ++i) {
        auto [pname, n] = parse_place_token(line[i]);
        require_place(line[i], pname);
        pre.emplace_back(pname, n);
      }
      if (i >= line.size()) fail(line[1], "expected 'post' section");
      ++i;
      for (; i < line.size(); ++i) {
        auto [pname, n] = parse_place_token(line[i]);
        require_place(line[i], pname);
        post.emplace_back(pname, n);
      }
      if (pre.empty())
        fail(line[1], "transition '" + name + "' has an empty precondition");
      if (post.empty())
        fail(line[1], "transition '" + name + "' has an empty postcondition");
      builder.add_transition(name, std::move(pre), std::move(post));
    } else if (head.text == "bad") {
      if (line.size() < 2 || (line[1].text != "places" && line[1].text != "marking"))
        fail(head, "expected: bad places <ids> | bad marking <tokens>");
      if (line[1].text == "places") {
        if (saw_bad_markings) fail(head, "cannot mix 'bad places' and 'bad marking'");
        saw_bad_places = true;
        if (line.size() < 3) fail(line[1], "empty bad places line");
        for (std::size_t i = 2; i < line.size(); ++i) {
          check_id(line[i]);
          require_place(line[i], line[i].text);
          bad_place_names.push_back(line[i].text);
        }
      } else {
        if (saw_bad_places) fail(head, "cannot mix 'bad places' and 'bad marking'");
        saw_bad_markings = true;
        std::vector<std::pair<std::string, Count>> tokens;
        for (std::size_t i = 2; i < line.size(); ++i) {
          auto [pname, n] = parse_place_token(line[i]);
          require_place(line[i], pname);
          tokens.emplace_back(pname, n);
        }
        bad_marking_tokens.push_back(std::move(tokens));
      }
    } else {
      fail(head, "unknown directive '" + head.text + "'");
    }
  }

  PetriGame game;
  game.net = builder.build();
  game.bound = *bound;
  game.system_place.assign(game.net.place_count(), false);
  for (const auto& name : system_names) game.system_place[game.net.place_index.at(name)] = true;

  if (saw_bad_markings) {
    std::vector<Marking> markings;
    for (const auto& tokens : bad_marking_tokens) {
      std::vector<Multiset::Entry> entries;
      for (const auto& [name, n] : tokens) entries.emplace_back(game.net.place_index.at(name), n);
      markings.push_back(Multiset::from_entries(std::move(entries)));
    }
    game.bad = BadSpec::from_markings(std::move(markings));
  } else {
    std::vector<Id> ids;
    for (const auto& name : bad_place_names) ids.push_back(game.net.place_index.at(name));
    game.bad = BadSpec::from_places(std::move(ids));
  }

  game.finalize();
  return game;
}

std::string marking_tokens(const PetriNet& net, const Marking& m) {
  std::string out;
  for (const auto& [p, n] : m) {
    if (!out.empty()) out += ' ';
    out += net.place_names[p];
    if (n != 1) out += ':' + std::to_string(n);
  }
  return out;
}

std::string serialize_game(const PetriGame& game) {
  const PetriNet& net = game.net;
  std::ostringstream out;
  out << "bound " << game.bound << '\n';

  std::string system_line, env_line;
  for (Id p = 0; p < net.place_count(); ++p)
    (game.system_place[p] ? system_line : env_line) += ' ' + net.place_names[p];
  if (!system_line.empty()) out << "places system" << system_line << '\n';
  if (!env_line.empty()) out << "places env" << env_line << '\n';

  if (!net.initial.empty()) out << "init " << marking_tokens(net, net.initial) << '\n';

  for (Id t = 0; t < net.transition_count(); ++t) {
    out << "transition " << net.transition_names[t] << " pre "
        << marking_tokens(net, net.pre[t]) << " post " << marking_tokens(net, net.post[t])
        << '\n';
  }

  if (game.bad.kind == BadSpec::Kind::Places) {
    if (!game.bad.places.empty()) {
      out << "bad places";
      for (Id p : game.bad.places) out << ' ' << net.place_names[p];
      out << '\n';
    }
  } else {
    for (const Marking& m : game.bad.markings)
      out << "bad marking " << marking_tokens(net, m) << '\n';
  }
  return out.str();
}

}  // namespace pg

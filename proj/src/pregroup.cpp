#include "fiblang/pregroup.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>

#include "fiblang/error.hpp"

namespace fiblang::pregroup {

Order::Order(std::set<std::string> basics, const std::vector<std::pair<std::string, std::string>>& leq)
    : basics_(std::move(basics)) {
  for (const auto& b : basics_) leq_.emplace(b, b);
  for (const auto& [a, b] : leq) {
    if (!contains(a) || !contains(b)) {
      throw Error(ErrorCode::InvalidArgument, "order pair (" + a + ", " + b + ") uses an undeclared type");
    }
    leq_.emplace(a, b);
  }
  // Transitive closure, Floyd-Warshall style over the (small) basic set.
  for (const auto& k : basics_) {
    for (const auto& i : basics_) {
      if (!leq_.contains({i, k})) continue;
      for (const auto& j : basics_) {
        if (leq_.contains({k, j})) leq_.emplace(i, j);
      }
    }
  }
  for (const auto& [a, b] : leq_) {
    if (a != b && leq_.contains({b, a})) {
      throw Error(ErrorCode::InvalidArgument, "order is not antisymmetric: " + a + " and " + b);
    }
  }
}

bool Order::leq(std::string_view a, std::string_view b) const {
  return leq_.contains({std::string(a), std::string(b)});
}

std::vector<std::string> Order::strictly_above(std::string_view a) const {
  std::vector<std::string> out;
  for (const auto& b : basics_) {
    if (b != a && leq(a, b)) out.push_back(b);
  }
  return out;
}

Type parse_type(std::string_view text, const Order* order) {
  Type t;
  std::size_t i = 0;
  auto is_name = [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'';
  };
  while (i < text.size()) {
    char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == '.') {
      ++i;
      continue;
    }
    if (text.substr(i, 2) == "\xC2\xB7") {  // middle dot
      i += 2;
      continue;
    }
    if (!is_name(ch)) {
      throw Error(ErrorCode::ParseError, "unexpected '" + std::string(1, ch) + "' in type '" +
                                             std::string(text) + "'");
    }
    std::size_t start = i;
    while (i < text.size() && is_name(text[i])) ++i;
    SimpleType s{std::string(text.substr(start, i - start)), 0};
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t adj = i;
      while (i < text.size() && (text[i] == 'r' || text[i] == 'l')) ++i;
      auto marks = text.substr(adj, i - adj);
      bool uniform = !marks.empty() && std::all_of(marks.begin(), marks.end(),
                                                   [&](char m) { return m == marks.front(); });
      if (!uniform) {
        throw Error(ErrorCode::ParseError, "bad adjoint marks in type '" + std::string(text) + "'");
      }
      int k = static_cast<int>(marks.size());
      s.z = marks.front() == 'r' ? k : -k;
    }
    if (s.basic == "1" && s.z == 0) continue;
    if (order && !order->contains(s.basic)) {
      throw Error(ErrorCode::ParseError, "undeclared basic type '" + s.basic + "'");
    }
    t.push_back(std::move(s));
  }
  return t;
}

std::string format_type(const Type& t) {
  if (t.empty()) return "1";
  std::string out;
  for (const auto& s : t) {
    if (!out.empty()) out += ' ';
    out += s.basic;
    if (s.z != 0) out += '^' + std::string(static_cast<std::size_t>(std::abs(s.z)), s.z > 0 ? 'r' : 'l');
  }
  return out;
}

bool contracts(const Order& order, const SimpleType& left, const SimpleType& right) {
  if (right.z != left.z + 1) return false;
  bool even = left.z % 2 == 0;
  return even ? order.leq(left.basic, right.basic) : order.leq(right.basic, left.basic);
}

namespace {

std::optional<Type> apply(const Order& order, const Type& t, const Step& step) {
  if (step.kind == Step::Kind::Contract) {
    if (step.position + 1 >= t.size() || !contracts(order, t[step.position], t[step.position + 1])) {
      return std::nullopt;
    }
    Type out;
    out.reserve(t.size() - 2);
    out.insert(out.end(), t.begin(), t.begin() + static_cast<std::ptrdiff_t>(step.position));
    out.insert(out.end(), t.begin() + static_cast<std::ptrdiff_t>(step.position) + 2, t.end());
    return out;
  }
  if (step.position >= t.size() || t[step.position].z != 0 ||
      !order.leq(t[step.position].basic, step.to_basic) || t[step.position].basic == step.to_basic) {
    return std::nullopt;
  }
  Type out = t;
  out[step.position].basic = step.to_basic;
  return out;
}

std::vector<Step> steps_from(const Order& order, const Type& t, bool with_induced) {
  std::vector<Step> steps;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (contracts(order, t[i], t[i + 1])) steps.push_back({Step::Kind::Contract, i, {}});
  }
  if (with_induced) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i].z != 0) continue;
      for (auto& b : order.strictly_above(t[i].basic)) steps.push_back({Step::Kind::Induce, i, b});
    }
  }
  return steps;
}

}  // namespace

std::optional<Type> replay(const Order& order, const Type& t, const Derivation& d) {
  Type current = t;
  for (const auto& step : d) {
    auto next = apply(order, current, step);
    if (!next) return std::nullopt;
    current = std::move(*next);
  }
  return current;
}

std::optional<Derivation> reduce(const Order& order, const Type& from, const Type& goal) {
  if (goal.size() > from.size()) return std::nullopt;
  std::map<Type, std::pair<Type, Step>> parent;
  std::set<Type> seen{from};
  std::deque<Type> queue{from};
  while (!queue.empty()) {
    Type t = std::move(queue.front());
    queue.pop_front();
    if (t == goal) {
      Derivation d;
      for (Type at = t; at != from;) {
        const auto& [prev, step] = parent.at(at);
        d.push_back(step);
        at = prev;
      }
      std::reverse(d.begin(), d.end());
      return d;
    }
    for (const auto& step : steps_from(order, t, true)) {
      Type next = *apply(order, t, step);
      if (next.size() < goal.size() || seen.contains(next)) continue;
      seen.insert(next);
      parent.emplace(next, std::pair{t, step});
      queue.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

void validate_lexicon(const Lexicon& lex) {
  auto check = [&](const Type& t, const std::string& where) {
    for (const auto& s : t) {
      if (std::abs(s.z) > lex.z_max) {
        throw Error(ErrorCode::InvalidArgument, where + ": adjoint order beyond z_max");
      }
      if (!lex.order.contains(s.basic)) {
        throw Error(ErrorCode::InvalidArgument, where + ": undeclared basic type '" + s.basic + "'");
      }
    }
  };
  check(lex.sentence, "sentence type");
  for (const auto& [word, types] : lex.entries) {
    if (types.empty()) throw Error(ErrorCode::InvalidArgument, "word '" + word + "' has no type");
    for (const auto& t : types) check(t, "word '" + word + "'");
  }
}

SentenceCheck sentence_check(const Lexicon& lex, const std::vector<std::string>& words) {
  std::vector<const std::vector<Type>*> options;
  for (const auto& w : words) {
    auto it = lex.entries.find(w);
    if (it == lex.entries.end()) throw Error(ErrorCode::UnknownWord, "'" + w + "' is not in the lexicon");
    options.push_back(&it->second);
  }
  SentenceCheck result;
  std::vector<std::size_t> choice(words.size(), 0);
  while (true) {
    Type joined;
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto& t = (*options[i])[choice[i]];
      joined.insert(joined.end(), t.begin(), t.end());
    }
    if (auto d = reduce(lex.order, joined, lex.sentence)) {
      result.grammatical = true;
      result.choice = choice;
      result.concatenated = std::move(joined);
      result.derivation = std::move(*d);
      return result;
    }
    // Odometer over the per-word readings, last word fastest.
    std::size_t i = words.size();
    while (i > 0) {
      --i;
      if (++choice[i] < options[i]->size()) break;
      choice[i] = 0;
      if (i == 0) return result;
    }
    if (words.empty()) return result;
  }
}

FinCategory language_category_from_lexicon(const Lexicon& lex, const std::vector<Phrase>& phrases) {
  struct Node {
    std::string label;
    Type type;
  };
  std::vector<Node> nodes;
  std::map<std::string, Index> by_label;
  auto add_node = [&](const std::string& label, const Type& type) {
    auto it = by_label.find(label);
    if (it != by_label.end()) {
      if (nodes[it->second].type != type) {
        throw Error(ErrorCode::InvalidArgument, "label '" + label + "' used for two different types");
      }
      return it->second;
    }
    Index i = nodes.size();
    nodes.push_back({label, type});
    by_label.emplace(label, i);
    return i;
  };

  std::vector<Index> roots;
  for (const auto& phrase : phrases) {
    if (phrase.kind == Phrase::Kind::Type) {
      Type t = parse_type(phrase.text, &lex.order);
      roots.push_back(add_node(format_type(t), t));
      continue;
    }
    std::vector<std::string> words;
    std::string current;
    for (char ch : phrase.text + " ") {
      if (std::isspace(static_cast<unsigned char>(ch))) {
        if (!current.empty()) words.push_back(std::move(current));
        current.clear();
      } else {
        current += ch;
      }
    }
    std::vector<Type> readings{Type{}};
    for (const auto& w : words) {
      auto it = lex.entries.find(w);
      if (it == lex.entries.end()) throw Error(ErrorCode::UnknownWord, "'" + w + "' is not in the lexicon");
      std::vector<Type> next;
      for (const auto& prefix : readings) {
        for (const auto& t : it->second) {
          Type joined = prefix;
          joined.insert(joined.end(), t.begin(), t.end());
          next.push_back(std::move(joined));
        }
      }
      readings = std::move(next);
    }
    for (const auto& t : readings) {
      std::string label = readings.size() == 1 ? phrase.text : phrase.text + " : " + format_type(t);
      roots.push_back(add_node(label, t));
    }
  }

  // Close under single contractions; reducts are labelled by type.
  std::vector<std::set<Index>> step_to(nodes.size());
  std::deque<Index> work(roots.begin(), roots.end());
  std::set<Index> expanded;
  while (!work.empty()) {
    Index i = work.front();
    work.pop_front();
    if (!expanded.insert(i).second) continue;
    Type t = nodes[i].type;
    for (const auto& step : steps_from(lex.order, t, false)) {
      Type next = *apply(lex.order, t, step);
      Index j = add_node(format_type(next), next);
      step_to.resize(nodes.size());
      step_to[i].insert(j);
      work.push_back(j);
    }
  }
  step_to.resize(nodes.size());

  std::vector<std::set<Index>> reach(nodes.size());
  std::function<const std::set<Index>&(Index)> reachable = [&](Index i) -> const std::set<Index>& {
    if (!reach[i].empty() || step_to[i].empty()) return reach[i];
    for (Index j : step_to[i]) {
      reach[i].insert(j);
      const auto& further = reachable(j);
      reach[i].insert(further.begin(), further.end());
    }
    return reach[i];
  };

  FinCategory c;
  for (const auto& n : nodes) c.add_object_with_identity(n.label);
  std::map<std::pair<Index, Index>, Index> arrow;
  for (Index i = 0; i < nodes.size(); ++i) {
    for (Index j : reachable(i)) {
      arrow.emplace(std::pair{i, j}, c.add_morphism(nodes[i].label + " => " + nodes[j].label, i, j));
    }
  }
  c.fill_identity_composites();
  for (const auto& [ij, f] : arrow) {
    for (Index k : reach[ij.second]) c.set_composite(arrow.at({ij.second, k}), f, arrow.at({ij.first, k}));
  }
  return c;
}

}  // namespace fiblang::pregroup

#pragma once

// Pregroup grammars: simple types (a, z) where z counts adjoints (z < 0
// left, z > 0 right), contraction search, sentence checking, and the thin
// language category whose only morphisms are reductions.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fiblang/fincat.hpp"

namespace fiblang::pregroup {

struct SimpleType {
  std::string basic;
  int z = 0;
  friend auto operator<=>(const SimpleType&, const SimpleType&) = default;
  friend bool operator==(const SimpleType&, const SimpleType&) = default;
};

/// Empty sequence is the unit.
using Type = std::vector<SimpleType>;

/// Basic types with a partial order, closed reflexively and transitively.
class Order {
 public:
  Order() = default;
  /// InvalidArgument if the closure is not antisymmetric or a pair names
  /// an undeclared type.
  Order(std::set<std::string> basics, const std::vector<std::pair<std::string, std::string>>& leq);

  const std::set<std::string>& basics() const { return basics_; }
  bool contains(std::string_view basic) const { return basics_.contains(std::string(basic)); }
  bool leq(std::string_view a, std::string_view b) const;
  /// Basic types b with a <= b, b != a.
  std::vector<std::string> strictly_above(std::string_view a) const;

 private:
  std::set<std::string> basics_;
  std::set<std::pair<std::string, std::string>> leq_;
};

/// "n^r s n^l", "n^ll", "1" (or "") for the unit. ParseError on malformed
/// input or, when an order is given, on undeclared basic types.
Type parse_type(std::string_view text, const Order* order = nullptr);
std::string format_type(const Type& t);

struct Step {
  enum class Kind { Contract, Induce };
  Kind kind = Kind::Contract;
  /// Contract: removes positions i, i+1. Induce: replaces position i.
  std::size_t position = 0;
  std::string to_basic;  // Induce only
  friend bool operator==(const Step&, const Step&) = default;
};

using Derivation = std::vector<Step>;

/// True for (a, z)(b, z+1) with a <= b (z even) or b <= a (z odd).
bool contracts(const Order& order, const SimpleType& left, const SimpleType& right);

/// Applies the steps in order; nullopt as soon as one does not apply.
std::optional<Type> replay(const Order& order, const Type& t, const Derivation& d);

/// Breadth-first over contraction and z = 0 induced steps; the state space
/// is finite because no step lengthens a sequence. nullopt if unreachable.
std::optional<Derivation> reduce(const Order& order, const Type& from, const Type& goal);

struct Lexicon {
  Order order;
  std::map<std::string, std::vector<Type>> entries;
  Type sentence;
  int z_max = 2;
};

/// InvalidArgument for types outside z_max or entries without types.
void validate_lexicon(const Lexicon& lex);

struct SentenceCheck {
  bool grammatical = false;
  /// Chosen type per word (index into the word's entry).
  std::vector<std::size_t> choice;
  Type concatenated;
  Derivation derivation;
};

/// First type assignment, in lexicographic order of choices, reducing to
/// the sentence type. UnknownWord for words missing from the lexicon.
SentenceCheck sentence_check(const Lexicon& lex, const std::vector<std::string>& words);

struct Phrase {
  enum class Kind { Type, Words };
  Kind kind = Kind::Type;
  std::string text;
};

/// Objects: the phrases (a type string, or a word sequence labelled by its
/// words; ambiguous words give one object per reading, "words : type")
/// closed under single contractions, the reducts labelled by their type
/// strings. One morphism X -> Y whenever Y is reachable from X by one or
/// more contractions ("X => Y"), plus identities.
FinCategory language_category_from_lexicon(const Lexicon& lex, const std::vector<Phrase>& phrases);

}  // namespace fiblang::pregroup

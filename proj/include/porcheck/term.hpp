#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace porcheck {

// Interned identifier. Equality is pointer identity, ordering is lexicographic.
class Channel {
 public:
  Channel() = default;
  static Channel named(std::string_view name);

  const std::string& name() const { return *name_; }
  bool valid() const { return name_ != nullptr; }

  friend bool operator==(Channel a, Channel b) { return a.name_ == b.name_; }
  friend std::strong_ordering operator<=>(Channel a, Channel b);

  std::size_t hash() const { return std::hash<const void*>{}(name_); }

 private:
  explicit Channel(const std::string* n) : name_(n) {}
  const std::string* name_ = nullptr;
};

struct Handle {
  Channel channel;
  std::uint32_t index = 0;

  friend bool operator==(const Handle&, const Handle&) = default;
  friend std::strong_ordering operator<=>(const Handle& a, const Handle& b) {
    if (auto c = a.channel <=> b.channel; c != 0) return c;
    return a.index <=> b.index;
  }
  std::string str() const;
};

// Sorted, duplicate-free set of handles.
using HandleSet = std::vector<Handle>;
HandleSet make_handle_set(std::vector<Handle> hs);
bool handle_set_contains(const HandleSet& w, const Handle& h);
bool handle_set_subset(const HandleSet& a, const HandleSet& b);
std::string handle_set_str(const HandleSet& w);

// max({0} ∪ {j+1 | w_{c,j} ∈ W})
std::uint32_t next_output_index(Channel c, const HandleSet& w);

struct SymbolData {
  std::string name;
  std::uint32_t arity;
};

class Symbol {
 public:
  Symbol() = default;
  static Symbol get(std::string_view name, std::uint32_t arity);
  // Reserved 4-ary symbol used by conditional collapsing; never user-declared.
  static Symbol delta();

  const std::string& name() const { return data_->name; }
  std::uint32_t arity() const { return data_->arity; }
  bool valid() const { return data_ != nullptr; }
  bool is_delta() const;
  const SymbolData* data() const { return data_; }

  friend bool operator==(Symbol a, Symbol b) { return a.data_ == b.data_; }

 private:
  explicit Symbol(const SymbolData* d) : data_(d) {}
  const SymbolData* data_ = nullptr;
};

enum class TermKind : std::uint8_t { Name, Handle, Var, FoVar, App };

struct TermNode;
struct FrameNode;

class Frame;

// Hash-consed term. Two terms are equal iff they are the same node.
class Term {
 public:
  Term() = default;

  static Term name(std::string_view n);
  static Term var(std::string_view n);
  static Term handle(Channel c, std::uint32_t i);
  static Term handle(const Handle& h) { return handle(h.channel, h.index); }
  // First-order variable x^{c,i}_φ.
  static Term fo_var(Channel c, std::uint32_t i, Frame phi);
  static Term app(Symbol f, std::vector<Term> args);
  static Term constant(Symbol f) { return app(f, {}); }

  bool valid() const { return node_ != nullptr; }
  TermKind kind() const;
  bool is_name() const { return kind() == TermKind::Name; }
  bool is_var() const { return kind() == TermKind::Var; }
  bool is_handle() const { return kind() == TermKind::Handle; }
  bool is_fo_var() const { return kind() == TermKind::FoVar; }
  bool is_app() const { return kind() == TermKind::App; }

  // Name / Var identifier.
  const std::string& atom() const;
  Handle handle_value() const;  // Handle, FoVar
  Frame fo_frame() const;       // FoVar
  Symbol symbol() const;        // App
  const std::vector<Term>& args() const;

  bool has_var() const;     // contains a process variable
  bool has_fo_var() const;  // contains a first-order variable
  bool ground() const { return !has_var() && !has_fo_var(); }
  std::uint32_t depth() const;

  std::size_t hash() const;
  const TermNode* node() const { return node_; }

  std::string str() const;

  friend bool operator==(Term a, Term b) { return a.node_ == b.node_; }

 private:
  explicit Term(const TermNode* n) : node_(n) {}
  const TermNode* node_ = nullptr;
  friend struct TermNode;
  friend Term intern_term(TermNode&&);
};

// Structural total order, independent of construction history.
std::strong_ordering compare(Term a, Term b);
inline bool term_less(Term a, Term b) { return compare(a, b) < 0; }

struct TermNode {
  TermKind kind;
  const std::string* atom = nullptr;
  Symbol symbol;
  Handle handle;
  const FrameNode* frame = nullptr;
  std::vector<Term> args;
  std::size_t hash = 0;
  bool has_var = false;
  bool has_fo_var = false;
  std::uint32_t depth = 0;
};

// Handle-to-message map with content identity. Entries are kept sorted by handle.
class Frame {
 public:
  Frame();
  static Frame from_entries(std::vector<std::pair<Handle, Term>> entries);

  bool empty() const;
  std::size_t size() const;
  const std::vector<std::pair<Handle, Term>>& entries() const;
  std::optional<Term> lookup(const Handle& h) const;
  bool contains(const Handle& h) const { return lookup(h).has_value(); }
  HandleSet domain() const;

  Frame extend(const Handle& h, Term t) const;
  Frame restrict(const HandleSet& w) const;
  bool has_fo_var() const;

  std::size_t hash() const;
  const FrameNode* node() const { return node_; }
  std::string str() const;

  friend bool operator==(Frame a, Frame b) { return a.node_ == b.node_; }

 private:
  explicit Frame(const FrameNode* n) : node_(n) {}
  const FrameNode* node_;
  friend class Term;
};

std::strong_ordering compare(Frame a, Frame b);

struct FrameNode {
  std::vector<std::pair<Handle, Term>> entries;
  std::size_t hash = 0;
  bool has_fo_var = false;
};

// Substitution on process variables (Var atoms).
using VarSubst = std::vector<std::pair<Term, Term>>;
Term substitute(Term t, const VarSubst& sigma);
// Replaces handles by the frame's messages; unbound handles are left in place.
Term substitute_handles(Term t, Frame phi);

// Handles occurring in a recipe.
HandleSet recipe_vars(Term r);
// A recipe mentions only handles, public constants and function symbols.
bool is_recipe(Term t);
void collect_vars(Term t, std::vector<Term>& out);
void collect_fo_vars(Term t, std::vector<Term>& out);

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  std::size_t x = seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace porcheck

template <>
struct std::hash<porcheck::Term> {
  std::size_t operator()(porcheck::Term t) const { return t.hash(); }
};
template <>
struct std::hash<porcheck::Frame> {
  std::size_t operator()(porcheck::Frame f) const { return f.hash(); }
};
template <>
struct std::hash<porcheck::Channel> {
  std::size_t operator()(porcheck::Channel c) const { return c.hash(); }
};

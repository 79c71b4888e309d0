#include "porcheck/term.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <unordered_map>
#include <stdexcept>
#include <unordered_set>

#include "porcheck/intern.hpp"

namespace porcheck {

namespace {

struct StringTable {
  std::mutex mutex;
  std::unordered_set<std::string> strings;

  const std::string* get(std::string_view s) {
    std::lock_guard lock(mutex);
    return &*strings.emplace(s).first;
  }
};

StringTable& channel_names() {
  static StringTable table;
  return table;
}

StringTable& atom_names() {
  static StringTable table;
  return table;
}

struct SymbolKey {
  std::string name;
  std::uint32_t arity;
  bool operator==(const SymbolKey&) const = default;
};

struct SymbolKeyHash {
  std::size_t operator()(const SymbolKey& k) const {
    return hash_combine(std::hash<std::string>{}(k.name), k.arity);
  }
};

struct SymbolTable {
  std::mutex mutex;
  std::deque<SymbolData> store;
  std::unordered_map<SymbolKey, const SymbolData*, SymbolKeyHash> index;
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

struct TermHash {
  std::size_t operator()(const TermNode& n) const { return n.hash; }
};

struct TermEq {
  bool operator()(const TermNode& a, const TermNode& b) const {
    return a.kind == b.kind && a.atom == b.atom && a.symbol == b.symbol &&
           a.handle == b.handle && a.frame == b.frame && a.args == b.args;
  }
};

detail::Interner<TermNode, TermHash, TermEq>& term_table() {
  static detail::Interner<TermNode, TermHash, TermEq> table;
  return table;
}

struct FrameHash {
  std::size_t operator()(const FrameNode& n) const { return n.hash; }
};

struct FrameEq {
  bool operator()(const FrameNode& a, const FrameNode& b) const { return a.entries == b.entries; }
};

detail::Interner<FrameNode, FrameHash, FrameEq>& frame_table() {
  static detail::Interner<FrameNode, FrameHash, FrameEq> table;
  return table;
}

std::size_t handle_hash(const Handle& h) { return hash_combine(h.channel.hash(), h.index); }

const FrameNode* intern_frame(std::vector<std::pair<Handle, Term>> entries) {
  FrameNode node;
  std::size_t h = 0x51ed;
  for (const auto& [w, t] : entries) {
    h = hash_combine(h, handle_hash(w));
    h = hash_combine(h, t.hash());
    node.has_fo_var = node.has_fo_var || t.has_fo_var();
  }
  node.entries = std::move(entries);
  node.hash = h;
  return frame_table().intern(std::move(node));
}

}  // namespace

Term intern_term(TermNode&& node) {
  std::size_t h = static_cast<std::size_t>(node.kind) * 0x9e3779b1u;
  h = hash_combine(h, std::hash<const void*>{}(node.atom));
  h = hash_combine(h, std::hash<const void*>{}(node.symbol.data()));
  h = hash_combine(h, handle_hash(node.handle));
  h = hash_combine(h, std::hash<const void*>{}(node.frame));
  for (Term a : node.args) h = hash_combine(h, a.hash());
  node.hash = h;
  return Term(term_table().intern(std::move(node)));
}

// ---------------------------------------------------------------- Channel

Channel Channel::named(std::string_view name) { return Channel(channel_names().get(name)); }

std::strong_ordering operator<=>(Channel a, Channel b) {
  if (a.name_ == b.name_) return std::strong_ordering::equal;
  if (!a.name_) return std::strong_ordering::less;
  if (!b.name_) return std::strong_ordering::greater;
  return a.name_->compare(*b.name_) <=> 0;
}

std::string Handle::str() const {
  return "w(" + channel.name() + "," + std::to_string(index) + ")";
}

HandleSet make_handle_set(std::vector<Handle> hs) {
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  return hs;
}

bool handle_set_contains(const HandleSet& w, const Handle& h) {
  return std::binary_search(w.begin(), w.end(), h);
}

bool handle_set_subset(const HandleSet& a, const HandleSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string handle_set_str(const HandleSet& w) {
  std::string out = "{";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ", ";
    out += w[i].str();
  }
  return out + "}";
}

std::uint32_t next_output_index(Channel c, const HandleSet& w) {
  std::uint32_t next = 0;
  for (const Handle& h : w)
    if (h.channel == c) next = std::max(next, h.index + 1);
  return next;
}

// ---------------------------------------------------------------- Symbol

Symbol Symbol::get(std::string_view name, std::uint32_t arity) {
  auto& table = symbols();
  std::lock_guard lock(table.mutex);
  SymbolKey key{std::string(name), arity};
  if (auto it = table.index.find(key); it != table.index.end()) return Symbol(it->second);
  table.store.push_back(SymbolData{key.name, arity});
  const SymbolData* d = &table.store.back();
  table.index.emplace(std::move(key), d);
  return Symbol(d);
}

Symbol Symbol::delta() {
  static const Symbol d = get("Δ", 4);
  return d;
}

bool Symbol::is_delta() const { return *this == delta(); }

// ---------------------------------------------------------------- Term

Term Term::name(std::string_view n) {
  TermNode node{TermKind::Name};
  node.atom = atom_names().get(n);
  return intern_term(std::move(node));
}

Term Term::var(std::string_view n) {
  TermNode node{TermKind::Var};
  node.atom = atom_names().get(n);
  node.has_var = true;
  return intern_term(std::move(node));
}

Term Term::handle(Channel c, std::uint32_t i) {
  TermNode node{TermKind::Handle};
  node.handle = Handle{c, i};
  return intern_term(std::move(node));
}

Term Term::fo_var(Channel c, std::uint32_t i, Frame phi) {
  TermNode node{TermKind::FoVar};
  node.handle = Handle{c, i};
  node.frame = phi.node();
  node.has_fo_var = true;
  return intern_term(std::move(node));
}

Term Term::app(Symbol f, std::vector<Term> args) {
  if (!f.valid()) throw std::invalid_argument("application of an invalid symbol");
  if (args.size() != f.arity())
    throw std::invalid_argument("arity mismatch for " + f.name() + ": expected " +
                                std::to_string(f.arity()) + ", got " +
                                std::to_string(args.size()));
  TermNode node{TermKind::App};
  node.symbol = f;
  std::uint32_t depth = 0;
  for (Term a : args) {
    node.has_var = node.has_var || a.has_var();
    node.has_fo_var = node.has_fo_var || a.has_fo_var();
    depth = std::max(depth, a.depth() + 1);
  }
  node.depth = depth;
  node.args = std::move(args);
  return intern_term(std::move(node));
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::atom() const { return *node_->atom; }
Handle Term::handle_value() const { return node_->handle; }
Frame Term::fo_frame() const { return Frame(node_->frame); }
Symbol Term::symbol() const { return node_->symbol; }
const std::vector<Term>& Term::args() const { return node_->args; }
bool Term::has_var() const { return node_->has_var; }
bool Term::has_fo_var() const { return node_->has_fo_var; }
std::uint32_t Term::depth() const { return node_->depth; }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }

std::string Term::str() const {
  if (!node_) return "<null>";
  switch (kind()) {
    case TermKind::Name:
    case TermKind::Var:
      return atom();
    case TermKind::Handle:
      return handle_value().str();
    case TermKind::FoVar: {
      Handle h = handle_value();
      return "x(" + h.channel.name() + "," + std::to_string(h.index) + ")" +
             handle_set_str(fo_frame().domain());
    }
    case TermKind::App: {
      std::string out = symbol().name();
      if (args().empty()) return out;
      out += "(";
      for (std::size_t i = 0; i < args().size(); ++i) {
        if (i) out += ", ";
        out += args()[i].str();
      }
      return out + ")";
    }
  }
  return "?";
}

std::strong_ordering compare(Term a, Term b) {
  if (a == b) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case TermKind::Name:
    case TermKind::Var:
      return a.atom().compare(b.atom()) <=> 0;
    case TermKind::Handle:
      return a.handle_value() <=> b.handle_value();
    case TermKind::FoVar:
      if (auto c = a.handle_value() <=> b.handle_value(); c != 0) return c;
      return compare(a.fo_frame(), b.fo_frame());
    case TermKind::App: {
      if (auto c = a.symbol().name().compare(b.symbol().name()) <=> 0; c != 0) return c;
      if (auto c = a.args().size() <=> b.args().size(); c != 0) return c;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (auto c = compare(a.args()[i], b.args()[i]); c != 0) return c;
      return std::strong_ordering::equal;
    }
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------- Frame

Frame::Frame() {
  static const FrameNode* const empty_node = intern_frame({});
  node_ = empty_node;
}

Frame Frame::from_entries(std::vector<std::pair<Handle, Term>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].first == entries[i - 1].first)
      throw std::invalid_argument("duplicate handle " + entries[i].first.str() + " in frame");
  return Frame(intern_frame(std::move(entries)));
}

bool Frame::empty() const { return node_->entries.empty(); }
std::size_t Frame::size() const { return node_->entries.size(); }
const std::vector<std::pair<Handle, Term>>& Frame::entries() const { return node_->entries; }
bool Frame::has_fo_var() const { return node_->has_fo_var; }
std::size_t Frame::hash() const { return node_->hash; }

std::optional<Term> Frame::lookup(const Handle& h) const {
  const auto& es = node_->entries;
  auto it = std::lower_bound(es.begin(), es.end(), h,
                             [](const auto& e, const Handle& k) { return e.first < k; });
  if (it != es.end() && it->first == h) return it->second;
  return std::nullopt;
}

HandleSet Frame::domain() const {
  HandleSet out;
  out.reserve(node_->entries.size());
  for (const auto& e : node_->entries) out.push_back(e.first);
  return out;
}

Frame Frame::extend(const Handle& h, Term t) const {
  if (contains(h)) throw std::invalid_argument("handle " + h.str() + " already in frame");
  auto es = node_->entries;
  es.emplace_back(h, t);
  return from_entries(std::move(es));
}

Frame Frame::restrict(const HandleSet& w) const {
  std::vector<std::pair<Handle, Term>> es;
  for (const auto& e : node_->entries)
    if (handle_set_contains(w, e.first)) es.push_back(e);
  if (es.size() == node_->entries.size()) return *this;
  return Frame(intern_frame(std::move(es)));
}

std::string Frame::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < node_->entries.size(); ++i) {
    if (i) out += ", ";
    out += node_->entries[i].first.str() + " |> " + node_->entries[i].second.str();
  }
  return out + "}";
}

std::strong_ordering compare(Frame a, Frame b) {
  if (a == b) return std::strong_ordering::equal;
  const auto& x = a.entries();
  const auto& y = b.entries();
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (auto c = x[i].first <=> y[i].first; c != 0) return c;
    if (auto c = compare(x[i].second, y[i].second); c != 0) return c;
  }
  return x.size() <=> y.size();
}

// ---------------------------------------------------------------- utilities

Term substitute(Term t, const VarSubst& sigma) {
  if (!t.has_var() || sigma.empty()) return t;
  if (t.is_var()) {
    for (const auto& [x, u] : sigma)
      if (x == t) return u;
    return t;
  }
  if (!t.is_app()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (Term a : t.args()) {
    args.push_back(substitute(a, sigma));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::app(t.symbol(), std::move(args)) : t;
}

Term substitute_handles(Term t, Frame phi) {
  if (t.is_handle()) {
    if (auto m = phi.lookup(t.handle_value())) return *m;
    return t;
  }
  if (!t.is_app() || t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (Term a : t.args()) args.push_back(substitute_handles(a, phi));
  return Term::app(t.symbol(), std::move(args));
}

namespace {
void collect_handles(Term t, std::vector<Handle>& out) {
  if (t.is_handle()) out.push_back(t.handle_value());
  if (t.is_app())
    for (Term a : t.args()) collect_handles(a, out);
}
}  // namespace

HandleSet recipe_vars(Term r) {
  std::vector<Handle> hs;
  collect_handles(r, hs);
  return make_handle_set(std::move(hs));
}

bool is_recipe(Term t) {
  switch (t.kind()) {
    case TermKind::Handle:
      return true;
    case TermKind::App:
      if (t.symbol().is_delta()) return false;
      for (Term a : t.args())
        if (!is_recipe(a)) return false;
      return true;
    default:
      return false;
  }
}

void collect_vars(Term t, std::vector<Term>& out) {
  if (!t.has_var()) return;
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  for (Term a : t.args()) collect_vars(a, out);
}

void collect_fo_vars(Term t, std::vector<Term>& out) {
  if (!t.has_fo_var()) return;
  if (t.is_fo_var()) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  for (Term a : t.args()) collect_fo_vars(a, out);
}

}  // namespace porcheck

#include "porcheck/theory.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

namespace porcheck {

// ---------------------------------------------------------------- Signature

void Signature::add(Symbol s) {
  if (s.is_delta() || s.name() == "Δ")
    throw std::invalid_argument("the symbol Δ is reserved");
  if (find(s.name())) throw std::invalid_argument("symbol " + s.name() + " declared twice");
  symbols_.push_back(s);
}

std::optional<Symbol> Signature::find(const std::string& name) const {
  for (Symbol s : symbols_)
    if (s.name() == name) return s;
  return std::nullopt;
}

std::vector<Symbol> Signature::constants() const {
  std::vector<Symbol> out;
  for (Symbol s : symbols_)
    if (s.arity() == 0) out.push_back(s);
  return out;
}

std::vector<Symbol> Signature::functions() const {
  std::vector<Symbol> out;
  for (Symbol s : symbols_)
    if (s.arity() > 0) out.push_back(s);
  return out;
}

void validate_rule(const RewriteRule& rule) {
  if (!rule.lhs.valid() || !rule.rhs.valid()) throw std::invalid_argument("incomplete rule");
  if (rule.lhs.is_var())
    throw std::invalid_argument("rule left-hand side " + rule.lhs.str() + " is a variable");
  std::vector<Term> lv, rv;
  collect_vars(rule.lhs, lv);
  collect_vars(rule.rhs, rv);
  for (Term x : rv)
    if (std::find(lv.begin(), lv.end(), x) == lv.end())
      throw std::invalid_argument("variable " + x.str() + " of rule right-hand side " +
                                  rule.rhs.str() + " does not occur on the left");
}

// ---------------------------------------------------------------- Theory

Theory::Theory(Signature sig, std::vector<RewriteRule> rules, std::size_t step_budget)
    : sig_(std::move(sig)), rules_(std::move(rules)), step_budget_(step_budget) {
  for (const auto& r : rules_) validate_rule(r);
}

namespace {

bool match(Term pattern, Term t, VarSubst& sigma) {
  if (pattern.is_var()) {
    for (const auto& [x, u] : sigma)
      if (x == pattern) return u == t;
    sigma.emplace_back(pattern, t);
    return true;
  }
  if (!pattern.has_var()) return pattern == t;
  if (!t.is_app() || !(pattern.symbol() == t.symbol())) return false;
  for (std::size_t i = 0; i < t.args().size(); ++i)
    if (!match(pattern.args()[i], t.args()[i], sigma)) return false;
  return true;
}

}  // namespace

Term Theory::normalize(Term t) const {
  std::size_t steps = 0;
  return normalize_rec(t, steps);
}

Term Theory::normalize_rec(Term t, std::size_t& steps) const {
  if (!t.is_app() || t.args().empty()) return t;
  {
    std::lock_guard lock(mutex_);
    if (auto it = normal_forms_.find(t); it != normal_forms_.end()) return it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (Term a : t.args()) {
    args.push_back(normalize_rec(a, steps));
    changed = changed || !(args.back() == a);
  }
  Term inner = changed ? Term::app(t.symbol(), std::move(args)) : t;
  Term result = inner;
  if (auto r = rewrite_root(inner, steps)) result = *r;
  std::lock_guard lock(mutex_);
  normal_forms_.emplace(t, result);
  if (!(inner == t)) normal_forms_.emplace(inner, result);
  normal_forms_.emplace(result, result);
  return result;
}

std::optional<Term> Theory::rewrite_root(Term t, std::size_t& steps) const {
  for (const auto& rule : rules_) {
    VarSubst sigma;
    if (!match(rule.lhs, t, sigma)) continue;
    if (++steps > step_budget_)
      throw RewriteBudgetExceeded("rewrite step budget exceeded while normalizing " + t.str());
    return normalize_rec(substitute(rule.rhs, sigma), steps);
  }
  return std::nullopt;
}

Term Theory::apply_recipe(Term recipe, Frame phi) const {
  if (recipe.is_handle()) {
    auto m = phi.lookup(recipe.handle_value());
    if (!m)
      throw std::invalid_argument("recipe handle " + recipe.str() + " outside the frame domain");
    return normalize(*m);
  }
  if (!recipe.is_app()) throw std::invalid_argument(recipe.str() + " is not a recipe");
  {
    std::lock_guard lock(mutex_);
    if (auto it = recipe_values_.find({recipe, phi}); it != recipe_values_.end())
      return it->second;
  }
  std::vector<Term> args;
  args.reserve(recipe.args().size());
  for (Term a : recipe.args()) args.push_back(apply_recipe(a, phi));
  Term value = normalize(Term::app(recipe.symbol(), std::move(args)));
  std::lock_guard lock(mutex_);
  recipe_values_.emplace(std::pair{recipe, phi}, value);
  return value;
}

std::size_t Theory::RecipeKeyHash::operator()(const RecipeKey& k) const {
  std::size_t h = k.depth;
  for (const Handle& w : k.w) h = hash_combine(hash_combine(h, w.channel.hash()), w.index);
  return h;
}

namespace {

// Calls f for each index tuple over [0, end)^arity having at least one
// component ≥ fresh_from, in lexicographic order.
template <class F>
void for_each_tuple(std::size_t arity, std::size_t end, std::size_t fresh_from, F&& f) {
  if (end == 0) return;
  std::vector<std::size_t> idx(arity, 0);
  while (true) {
    bool fresh = false;
    for (std::size_t i : idx) fresh = fresh || i >= fresh_from;
    if (fresh && !f(idx)) return;
    std::size_t pos = arity;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < end) break;
      idx[pos] = 0;
      if (pos == 0) return;
    }
    if (arity == 0) return;
  }
}

std::vector<Term> atoms_of(const HandleSet& w, const Signature& sig) {
  std::vector<Term> out;
  for (const Handle& h : w) out.push_back(Term::handle(h));
  for (Symbol c : sig.constants()) out.push_back(Term::constant(c));
  return out;
}

struct ValueTupleHash {
  std::size_t operator()(const std::vector<Term>& v) const {
    std::size_t h = v.size();
    for (Term t : v) h = hash_combine(h, t.hash());
    return h;
  }
};

// Level-wise closure of value tuples under function application. Recipes with
// equal value tuples are interchangeable as arguments, so only the first one
// reaching each tuple is kept. `on_new` returns false to stop early.
template <class OnNew>
void value_closure(const Theory& th, const std::vector<Frame>& frames, const HandleSet& dom,
                   std::uint32_t depth, OnNew&& on_new) {
  struct Item {
    Term recipe;
    std::vector<Term> values;
  };
  std::vector<Item> items;
  std::unordered_set<std::vector<Term>, ValueTupleHash> seen;

  auto offer = [&](Term recipe, std::vector<Term> values) {
    if (!seen.insert(values).second) return true;
    items.push_back(Item{recipe, std::move(values)});
    return on_new(items.back().recipe, items.back().values);
  };

  for (Term a : atoms_of(dom, th.signature())) {
    std::vector<Term> values;
    values.reserve(frames.size());
    for (Frame f : frames) values.push_back(th.apply_recipe(a, f));
    if (!offer(a, std::move(values))) return;
  }

  std::size_t level_begin = 0;
  const auto functions = th.signature().functions();
  for (std::uint32_t k = 1; k <= depth; ++k) {
    const std::size_t end = items.size();
    bool keep_going = true;
    for (Symbol f : functions) {
      for_each_tuple(f.arity(), end, level_begin, [&](const std::vector<std::size_t>& idx) {
        std::vector<Term> rargs;
        rargs.reserve(idx.size());
        for (std::size_t i : idx) rargs.push_back(items[i].recipe);
        std::vector<Term> values;
        values.reserve(frames.size());
        for (std::size_t j = 0; j < frames.size(); ++j) {
          std::vector<Term> vargs;
          vargs.reserve(idx.size());
          for (std::size_t i : idx) vargs.push_back(items[i].values[j]);
          values.push_back(th.normalize(Term::app(f, std::move(vargs))));
        }
        keep_going = offer(Term::app(f, std::move(rargs)), std::move(values));
        return keep_going;
      });
      if (!keep_going) return;
    }
    if (items.size() == end) return;  // closure reached early
    level_begin = end;
  }
}

}  // namespace

const std::vector<Term>& Theory::enumerate_recipes(const HandleSet& w, std::uint32_t depth) const {
  RecipeKey key{w, depth};
  {
    std::lock_guard lock(mutex_);
    if (auto it = recipe_sets_.find(key); it != recipe_sets_.end()) return *it->second;
  }
  auto out = std::make_unique<std::vector<Term>>(atoms_of(w, sig_));
  std::size_t level_begin = 0;
  for (std::uint32_t k = 1; k <= depth; ++k) {
    const std::size_t end = out->size();
    for (Symbol f : sig_.functions()) {
      for_each_tuple(f.arity(), end, level_begin, [&](const std::vector<std::size_t>& idx) {
        std::vector<Term> args;
        for (std::size_t i : idx) args.push_back((*out)[i]);
        out->push_back(Term::app(f, std::move(args)));
        return true;
      });
    }
    level_begin = end;
  }
  std::lock_guard lock(mutex_);
  auto [it, inserted] = recipe_sets_.emplace(std::move(key), std::move(out));
  return *it->second;
}

std::vector<Term> Theory::recipe_basis(const std::vector<Frame>& frames, const HandleSet& dom,
                                       std::uint32_t depth) const {
  std::vector<Term> out;
  value_closure(*this, frames, dom, depth, [&](Term r, const std::vector<Term>&) {
    out.push_back(r);
    return true;
  });
  return out;
}

StaticVerdict Theory::static_equiv(Frame phi, Frame psi, std::uint32_t depth) const {
  if (phi.domain() != psi.domain())
    throw std::invalid_argument("static equivalence on frames with different domains");
  if (phi == psi) return {};
  StaticKey key{phi, psi, depth};
  {
    std::lock_guard lock(mutex_);
    if (auto it = static_cache_.find(key); it != static_cache_.end()) return it->second;
  }
  StaticVerdict v = static_equiv_uncached(phi, psi, depth);
  std::lock_guard lock(mutex_);
  static_cache_.emplace(key, v);
  return v;
}

StaticVerdict Theory::static_equiv_uncached(Frame phi, Frame psi, std::uint32_t depth) const {
  // The relation {(Mφ, Mψ)} must be a bijection between the two value sets.
  std::unordered_map<Term, Term> left_to_recipe, right_to_recipe;
  std::unordered_map<Term, Term> left_to_right, right_to_left;
  StaticVerdict verdict;
  value_closure(*this, {phi, psi}, phi.domain(), depth,
                [&](Term r, const std::vector<Term>& v) {
                  const Term a = v[0];
                  const Term b = v[1];
                  if (auto it = left_to_right.find(a); it != left_to_right.end() && !(it->second == b)) {
                    verdict = {false, left_to_recipe.at(a), r};
                    return false;
                  }
                  if (auto it = right_to_left.find(b); it != right_to_left.end() && !(it->second == a)) {
                    verdict = {false, right_to_recipe.at(b), r};
                    return false;
                  }
                  left_to_right.emplace(a, b);
                  right_to_left.emplace(b, a);
                  left_to_recipe.emplace(a, r);
                  right_to_recipe.emplace(b, r);
                  return true;
                });
  return verdict;
}

bool Theory::frame_ext_leq(Frame phi, Frame psi, std::uint32_t depth) const {
  HandleSet d = phi.domain();
  if (!handle_set_subset(d, psi.domain())) return false;
  return static_equiv(phi, psi.restrict(d), depth).equivalent;
}

}  // namespace porcheck

#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "porcheck/term.hpp"

namespace porcheck {

class Signature {
 public:
  // Throws on duplicate names or on an attempt to declare Δ.
  void add(Symbol s);
  std::optional<Symbol> find(const std::string& name) const;

  // Declaration order is the enumeration order for recipes.
  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::vector<Symbol> constants() const;
  std::vector<Symbol> functions() const;

  bool delta_enabled = false;

 private:
  std::vector<Symbol> symbols_;
};

struct RewriteRule {
  Term lhs;
  Term rhs;
};

class RewriteBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StaticVerdict {
  bool equivalent = true;
  // Distinguishing pair when !equivalent: exactly one of Mφ=Nφ, Mψ=Nψ holds.
  Term m;
  Term n;
};

// Equational theory given by a convergent rewrite system, together with the
// caches that make normalization and bounded static equivalence cheap.
class Theory {
 public:
  explicit Theory(Signature sig, std::vector<RewriteRule> rules = {},
                  std::size_t step_budget = 10000);

  const Signature& signature() const { return sig_; }
  const std::vector<RewriteRule>& rules() const { return rules_; }

  Term normalize(Term t) const;
  bool eq_mod_e(Term u, Term v) const { return normalize(u) == normalize(v); }

  // normalize(Rφ); throws std::invalid_argument when vars(R) ⊄ dom(φ).
  Term apply_recipe(Term recipe, Frame phi) const;

  // Every recipe over W ∪ public constants with nesting depth ≤ depth.
  const std::vector<Term>& enumerate_recipes(const HandleSet& w, std::uint32_t depth) const;

  // Representatives of enumerate_recipes(dom, depth) with pairwise distinct
  // value tuples across `frames` (all of domain `dom`); order follows the
  // enumeration order of the first recipe reaching each tuple.
  std::vector<Term> recipe_basis(const std::vector<Frame>& frames, const HandleSet& dom,
                                 std::uint32_t depth) const;

  StaticVerdict static_equiv(Frame phi, Frame psi, std::uint32_t depth) const;
  // φ ⊑s ψ: dom(φ) ⊆ dom(ψ) and φ ∼s ψ|dom(φ).
  bool frame_ext_leq(Frame phi, Frame psi, std::uint32_t depth) const;

 private:
  Term normalize_rec(Term t, std::size_t& steps) const;
  std::optional<Term> rewrite_root(Term t, std::size_t& steps) const;
  StaticVerdict static_equiv_uncached(Frame phi, Frame psi, std::uint32_t depth) const;

  Signature sig_;
  std::vector<RewriteRule> rules_;
  std::size_t step_budget_;

  mutable std::mutex mutex_;
  mutable std::unordered_map<Term, Term> normal_forms_;

  struct PairHash {
    template <class A, class B>
    std::size_t operator()(const std::pair<A, B>& p) const {
      return hash_combine(std::hash<A>{}(p.first), std::hash<B>{}(p.second));
    }
  };
  mutable std::unordered_map<std::pair<Term, Frame>, Term, PairHash> recipe_values_;

  struct StaticKey {
    Frame phi;
    Frame psi;
    std::uint32_t depth;
    bool operator==(const StaticKey&) const = default;
  };
  struct StaticKeyHash {
    std::size_t operator()(const StaticKey& k) const {
      return hash_combine(hash_combine(k.phi.hash(), k.psi.hash()), k.depth);
    }
  };
  mutable std::unordered_map<StaticKey, StaticVerdict, StaticKeyHash> static_cache_;

  struct RecipeKey {
    HandleSet w;
    std::uint32_t depth;
    bool operator==(const RecipeKey&) const = default;
  };
  struct RecipeKeyHash {
    std::size_t operator()(const RecipeKey& k) const;
  };
  mutable std::unordered_map<RecipeKey, std::unique_ptr<std::vector<Term>>, RecipeKeyHash>
      recipe_sets_;
};

using TheoryPtr = std::shared_ptr<const Theory>;

// Checks the rule invariants: lhs is not a variable and vars(rhs) ⊆ vars(lhs).
void validate_rule(const RewriteRule& rule);

}  // namespace porcheck

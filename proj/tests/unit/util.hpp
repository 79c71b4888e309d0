#pragma once

#include <string>
#include <vector>

#include "porcheck/parser.hpp"
#include "porcheck/theory.hpp"

namespace porcheck::test {

inline Term fn(const std::string& f, std::vector<Term> args) {
  const auto arity = static_cast<std::uint32_t>(args.size());
  return Term::app(Symbol::get(f, arity), std::move(args));
}
inline Term cst(const std::string& c) { return Term::constant(Symbol::get(c, 0)); }
inline Term nm(const std::string& n) { return Term::name(n); }
inline Term var(const std::string& x) { return Term::var(x); }
inline Channel ch(const std::string& c) { return Channel::named(c); }
inline Handle hd(const std::string& c, std::uint32_t i) { return Handle{ch(c), i}; }
inline Term w(const std::string& c, std::uint32_t i) { return Term::handle(ch(c), i); }

inline Frame frame(std::vector<std::pair<Handle, Term>> entries) {
  return Frame::from_entries(std::move(entries));
}

// enc/dec/h plus the given constants.
inline Theory enc_theory(const std::vector<std::string>& constants = {}) {
  Signature sig;
  for (const auto& c : constants) sig.add(Symbol::get(c, 0));
  sig.add(Symbol::get("enc", 2));
  sig.add(Symbol::get("dec", 2));
  sig.add(Symbol::get("h", 1));
  return Theory(sig, {{fn("dec", {fn("enc", {var("x"), var("y")}), var("y")}), var("x")}});
}

}  // namespace porcheck::test

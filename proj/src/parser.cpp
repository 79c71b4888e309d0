#include "porcheck/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace porcheck {

namespace {

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '#' || (ch == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (ch == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      int l = line, c = col;
      advance(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
      if (i + 1 >= src.size()) throw ParseError("unterminated comment", l, c);
      advance(2);
      continue;
    }
    Token t{Token::Kind::Punct, "", line, col};
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                src[j] == '_' || src[j] == '\''))
        ++j;
      t.kind = Token::Kind::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Kind::Int;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else if (ch == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      t.text = "->";
      advance(2);
    } else if (std::string("{}(),;.=|+/:").find(ch) != std::string::npos) {
      t.text = std::string(1, ch);
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + ch + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  out.push_back(Token{Token::Kind::End, "<end of input>", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Model run() {
    while (!at_end()) item();
    model_.theory = std::make_shared<Theory>(sig_, rules_);
    if (pending_query_) finish_query();
    return std::move(model_);
  }

 private:
  // ---- token helpers
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool is(const std::string& text) const {
    return peek().kind != Token::Kind::End && peek().text == text;
  }
  bool accept(const std::string& text) {
    if (!is(text)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ParseError(msg, at.line, at.column);
  }
  const Token& expect(const std::string& text) {
    if (!is(text)) fail("expected '" + text + "' but found '" + peek().text + "'", peek());
    return toks_[pos_++];
  }
  const Token& ident() {
    if (peek().kind != Token::Kind::Ident)
      fail("expected an identifier but found '" + peek().text + "'", peek());
    return toks_[pos_++];
  }
  std::uint32_t integer() {
    if (peek().kind != Token::Kind::Int)
      fail("expected a number but found '" + peek().text + "'", peek());
    return static_cast<std::uint32_t>(std::stoul(toks_[pos_++].text));
  }

  static bool keyword(const std::string& s) {
    static const std::set<std::string> kws{"theory", "sig",  "rule", "const", "name",
                                           "names",  "channels", "frame", "process",
                                           "query",  "equiv", "include", "under", "in",
                                           "out",    "if",   "then", "else"};
    return kws.count(s) > 0;
  }

  void declare(const Token& t, const std::string& what) {
    if (keyword(t.text)) fail("'" + t.text + "' is a keyword", t);
    if (declared_.count(t.text)) fail(what + " '" + t.text + "' clashes with an earlier declaration", t);
    declared_.insert(t.text);
  }

  // ---- items
  void item() {
    const Token& head = peek();
    if (accept("theory")) {
      expect("{");
      while (!accept("}")) {
        if (accept("sig")) {
          do {
            const Token& n = ident();
            expect("/");
            std::uint32_t arity = integer();
            declare(n, "symbol");
            sig_.add(Symbol::get(n.text, arity));
          } while (accept(","));
          expect(";");
        } else if (accept("rule")) {
          Term lhs = term(Ctx::Rule);
          expect("->");
          Term rhs = term(Ctx::Rule);
          expect(";");
          try {
            validate_rule({lhs, rhs});
          } catch (const std::invalid_argument& e) {
            fail(e.what(), head);
          }
          rules_.push_back({lhs, rhs});
        } else {
          fail("expected 'sig' or 'rule' but found '" + peek().text + "'", peek());
        }
      }
    } else if (accept("const")) {
      do {
        const Token& n = ident();
        declare(n, "constant");
        sig_.add(Symbol::get(n.text, 0));
      } while (accept(","));
      expect(";");
    } else if (accept("name") || accept("names")) {
      do {
        const Token& n = ident();
        declare(n, "name");
        model_.names.push_back(n.text);
      } while (accept(","));
      expect(";");
    } else if (accept("channels")) {
      do {
        const Token& n = ident();
        if (channel_names_.count(n.text)) fail("channel '" + n.text + "' declared twice", n);
        channel_names_.insert(n.text);
        model_.channels.push_back(Channel::named(n.text));
      } while (accept(","));
      expect(";");
    } else if (accept("frame")) {
      frame_decl();
    } else if (accept("process")) {
      process_decl();
    } else if (accept("query")) {
      query_decl();
    } else {
      fail("unexpected '" + head.text + "' at top level", head);
    }
  }

  void frame_decl() {
    const Token& n = ident();
    if (model_.frames.count(n.text)) fail("frame '" + n.text + "' declared twice", n);
    expect("{");
    std::vector<std::pair<Handle, Term>> entries;
    std::map<std::string, std::uint32_t> next;
    while (!accept("}")) {
      const Token& ch = ident();
      Channel c = channel(ch);
      expect(":");
      Term t = term(Ctx::Process);
      expect(";");
      entries.emplace_back(Handle{c, next[ch.text]++}, t);
    }
    model_.frames.emplace(n.text, Frame::from_entries(std::move(entries)));
  }

  void process_decl() {
    const Token& n = ident();
    if (model_.processes.count(n.text)) fail("process '" + n.text + "' defined twice", n);
    ProcessDef def;
    std::size_t scope_mark = scope_.size();
    if (accept("(")) {
      if (!is(")")) {
        do {
          const Token& p = ident();
          Term v = Term::var(p.text);
          def.params.push_back(v);
          scope_.push_back(p.text);
        } while (accept(","));
      }
      expect(")");
    }
    expect("=");
    def.body = proc();
    expect(";");
    scope_.resize(scope_mark);
    model_.processes.emplace(n.text, def);
  }

  struct PendingQuery {
    Query::Kind kind;
    Token left_tok, right_tok;
    Process left, right;
    std::string left_name, right_name;
    std::optional<Token> lf, rf;
  };

  void query_decl() {
    const Token& head = toks_[pos_ - 1];
    if (pending_query_) fail("only one query per file is supported", head);
    PendingQuery q;
    if (accept("equiv")) {
      q.kind = Query::Kind::Equiv;
    } else if (accept("include")) {
      q.kind = Query::Kind::Include;
    } else {
      fail("expected 'equiv' or 'include' after 'query'", peek());
    }
    q.left_tok = peek();
    q.left_name = peek().text;
    q.left = process_ref();
    q.right_tok = peek();
    q.right_name = peek().text;
    q.right = process_ref();
    if (accept("under")) {
      q.lf = ident();
      if (peek().kind == Token::Kind::Ident) q.rf = ident();
    }
    expect(";");
    for (auto* p : {&q.left, &q.right}) {
      auto fv = p->free_vars();
      if (!fv.empty())
        fail("process in query is not closed (free variable " + fv.front().str() + ")",
             p == &q.left ? q.left_tok : q.right_tok);
    }
    pending_query_ = std::move(q);
  }

  void finish_query() {
    auto& q = *pending_query_;
    const Theory& th = *model_.theory;
    auto lookup_frame = [&](const std::optional<Token>& t) {
      if (!t) return Frame();
      auto it = model_.frames.find(t->text);
      if (it == model_.frames.end()) fail("unknown frame '" + t->text + "'", *t);
      std::vector<std::pair<Handle, Term>> es;
      for (const auto& [h, m] : it->second.entries()) es.emplace_back(h, th.normalize(m));
      return Frame::from_entries(std::move(es));
    };
    Query out;
    out.kind = q.kind;
    out.left_name = q.left_name;
    out.right_name = q.right_name;
    out.left = map_terms(q.left, [&](Term t) { return th.normalize(t); });
    out.right = map_terms(q.right, [&](Term t) { return th.normalize(t); });
    out.left_frame = lookup_frame(q.lf);
    out.right_frame = q.rf ? lookup_frame(q.rf) : out.left_frame;
    if (out.left_frame.domain() != out.right_frame.domain())
      fail("initial frames of a query must have the same domain", q.rf ? *q.rf : *q.lf);
    model_.query = out;
  }

  Channel channel(const Token& t) {
    if (!channel_names_.count(t.text)) fail("unknown channel '" + t.text + "'", t);
    return Channel::named(t.text);
  }

  // ---- processes
  Process proc() {
    Process p = choice_level();
    while (accept("|")) p = Process::par(p, choice_level());
    return p;
  }

  Process choice_level() {
    Process p = seq();
    while (accept("+")) p = Process::choice(p, seq());
    return p;
  }

  Process continuation() {
    if (accept(".")) return seq();
    return Process::null();
  }

  Process seq() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Int) {
      if (t.text != "0") fail("expected a process but found '" + t.text + "'", t);
      ++pos_;
      return Process::null();
    }
    if (accept("(")) {
      Process p = proc();
      expect(")");
      return p;
    }
    if (accept("in")) {
      expect("(");
      Channel c = channel(ident());
      expect(",");
      const Token& x = ident();
      if (keyword(x.text)) fail("'" + x.text + "' is a keyword", x);
      expect(")");
      scope_.push_back(x.text);
      Process cont = continuation();
      scope_.pop_back();
      return Process::in(c, Term::var(x.text), cont);
    }
    if (accept("out")) {
      expect("(");
      Channel c = channel(ident());
      expect(",");
      Term m = term(Ctx::Process);
      expect(")");
      return Process::out(c, m, continuation());
    }
    if (accept("if")) {
      Term u = term(Ctx::Process);
      expect("=");
      Term v = term(Ctx::Process);
      expect("then");
      Process p = proc();
      expect("else");
      Process q = seq();
      return Process::cond(u, v, p, q);
    }
    if (t.kind == Token::Kind::Ident) return process_ref();
    fail("expected a process but found '" + t.text + "'", t);
  }

  Process process_ref() {
    const Token& n = ident();
    auto it = model_.processes.find(n.text);
    if (it == model_.processes.end()) fail("unknown process '" + n.text + "'", n);
    const ProcessDef& def = it->second;
    std::vector<Term> args;
    if (accept("(")) {
      if (!is(")")) {
        do args.push_back(term(Ctx::Process));
        while (accept(","));
      }
      expect(")");
    }
    if (args.size() != def.params.size())
      fail("process '" + n.text + "' expects " + std::to_string(def.params.size()) +
               " argument(s), got " + std::to_string(args.size()),
           n);
    // Parameters are replaced simultaneously through fresh placeholders so that
    // an argument mentioning another parameter's name is not rewritten again.
    std::vector<Term> binders;
    collect_binders(def.body, binders);
    for (Term a : args) {
      std::vector<Term> vs;
      collect_vars(a, vs);
      for (Term v : vs)
        if (std::find(binders.begin(), binders.end(), v) != binders.end())
          fail("argument variable '" + v.str() + "' would be captured inside '" + n.text + "'", n);
    }
    Process body = def.body;
    std::vector<Term> holes;
    for (std::size_t i = 0; i < args.size(); ++i) {
      Term hole = Term::var("#arg" + std::to_string(i));
      holes.push_back(hole);
      body = substitute(body, def.params[i], hole, nullptr);
    }
    for (std::size_t i = 0; i < args.size(); ++i) body = substitute(body, holes[i], args[i], nullptr);
    return body;
  }

  static void collect_binders(Process p, std::vector<Term>& out) {
    switch (p.kind()) {
      case ProcKind::Null:
        return;
      case ProcKind::In:
        out.push_back(p.var());
        [[fallthrough]];
      case ProcKind::Out:
        collect_binders(p.cont(), out);
        return;
      default:
        collect_binders(p.left(), out);
        collect_binders(p.right(), out);
    }
  }

  // ---- terms
  enum class Ctx { Process, Rule };

  Term term(Ctx ctx) {
    const Token& t = ident();
    if (accept("(")) {
      std::vector<Term> args;
      if (!is(")")) {
        do args.push_back(term(ctx));
        while (accept(","));
      }
      expect(")");
      auto sym = sig_.find(t.text);
      if (!sym) fail("unknown symbol '" + t.text + "'", t);
      if (sym->arity() != args.size())
        fail("arity mismatch: '" + t.text + "' expects " + std::to_string(sym->arity()) +
                 " argument(s), got " + std::to_string(args.size()),
             t);
      return Term::app(*sym, std::move(args));
    }
    if (ctx == Ctx::Process &&
        std::find(scope_.rbegin(), scope_.rend(), t.text) != scope_.rend())
      return Term::var(t.text);
    if (auto sym = sig_.find(t.text)) {
      if (sym->arity() != 0)
        fail("arity mismatch: '" + t.text + "' expects " + std::to_string(sym->arity()) +
                 " argument(s), got 0",
             t);
      return Term::constant(*sym);
    }
    if (ctx == Ctx::Rule) return Term::var(t.text);
    if (std::find(model_.names.begin(), model_.names.end(), t.text) != model_.names.end())
      return Term::name(t.text);
    fail("unbound variable '" + t.text + "'", t);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Signature sig_;
  std::vector<RewriteRule> rules_;
  std::set<std::string> declared_;
  std::set<std::string> channel_names_;
  std::vector<std::string> scope_;
  std::optional<PendingQuery> pending_query_;
  Model model_;
};

}  // namespace

Process Model::process(const std::string& name) const {
  auto it = processes.find(name);
  if (it == processes.end()) throw std::invalid_argument("unknown process " + name);
  if (!it->second.params.empty())
    throw std::invalid_argument("process " + name + " takes parameters");
  return map_terms(it->second.body, [&](Term t) { return theory->normalize(t); });
}

Model parse_model(const std::string& text) { return Parser(lex(text)).run(); }

Model parse_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace porcheck

#include "relknot/boolterm.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "relknot/errors.hpp"

namespace relknot {

struct BoolTerm::Node {
  Kind kind;
  std::string name;
  BoolTerm left;
  BoolTerm right;
};

BoolTerm::BoolTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

BoolTerm::BoolTerm() : BoolTerm(zero()) {}

BoolTerm BoolTerm::var(std::string name) {
  if (name.empty()) throw ArgumentError("empty variable name");
  return BoolTerm(std::make_shared<const Node>(Node{Kind::var, std::move(name), {}, {}}));
}

BoolTerm BoolTerm::zero() {
  static const BoolTerm z(std::shared_ptr<const Node>(
      new Node{Kind::zero, {}, BoolTerm(std::shared_ptr<const Node>()),
               BoolTerm(std::shared_ptr<const Node>())}));
  return z;
}

BoolTerm BoolTerm::one() {
  static const BoolTerm o(std::shared_ptr<const Node>(
      new Node{Kind::one, {}, BoolTerm(std::shared_ptr<const Node>()),
               BoolTerm(std::shared_ptr<const Node>())}));
  return o;
}

BoolTerm BoolTerm::meet(BoolTerm a, BoolTerm b) {
  return BoolTerm(std::make_shared<const Node>(Node{Kind::meet, {}, std::move(a), std::move(b)}));
}

BoolTerm BoolTerm::join(BoolTerm a, BoolTerm b) {
  return BoolTerm(std::make_shared<const Node>(Node{Kind::join, {}, std::move(a), std::move(b)}));
}

BoolTerm BoolTerm::negate(BoolTerm a) {
  return BoolTerm(
      std::make_shared<const Node>(Node{Kind::negation, {}, std::move(a), BoolTerm::zero()}));
}

BoolTerm BoolTerm::meet_all(const std::vector<BoolTerm>& ts) {
  if (ts.empty()) throw ArgumentError("meet of an empty list");
  BoolTerm t = ts.front();
  for (std::size_t i = 1; i < ts.size(); ++i) t = meet(t, ts[i]);
  return t;
}

BoolTerm BoolTerm::join_all(const std::vector<BoolTerm>& ts) {
  if (ts.empty()) throw ArgumentError("join of an empty list");
  BoolTerm t = ts.front();
  for (std::size_t i = 1; i < ts.size(); ++i) t = join(t, ts[i]);
  return t;
}

BoolTerm::Kind BoolTerm::kind() const { return node_->kind; }
const std::string& BoolTerm::name() const { return node_->name; }
const BoolTerm& BoolTerm::left() const { return node_->left; }
const BoolTerm& BoolTerm::right() const { return node_->right; }

namespace {

void collect_vars(const BoolTerm& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case BoolTerm::Kind::var:
      out.insert(t.name());
      break;
    case BoolTerm::Kind::meet:
    case BoolTerm::Kind::join:
      collect_vars(t.left(), out);
      collect_vars(t.right(), out);
      break;
    case BoolTerm::Kind::negation:
      collect_vars(t.left(), out);
      break;
    default:
      break;
  }
}

int precedence(BoolTerm::Kind k) {
  switch (k) {
    case BoolTerm::Kind::join:
      return 1;
    case BoolTerm::Kind::meet:
      return 2;
    case BoolTerm::Kind::negation:
      return 3;
    default:
      return 4;
  }
}

void render(const BoolTerm& t, std::string& out) {
  switch (t.kind()) {
    case BoolTerm::Kind::var:
      out += t.name();
      return;
    case BoolTerm::Kind::zero:
      out += '0';
      return;
    case BoolTerm::Kind::one:
      out += '1';
      return;
    case BoolTerm::Kind::negation: {
      out += '!';
      bool paren = precedence(t.left().kind()) < 3;
      if (paren) out += '(';
      render(t.left(), out);
      if (paren) out += ')';
      return;
    }
    case BoolTerm::Kind::meet:
    case BoolTerm::Kind::join: {
      const int p = precedence(t.kind());
      bool lp = precedence(t.left().kind()) < p;
      bool rp = precedence(t.right().kind()) <= p;
      if (lp) out += '(';
      render(t.left(), out);
      if (lp) out += ')';
      out += t.kind() == BoolTerm::Kind::meet ? '&' : '|';
      if (rp) out += '(';
      render(t.right(), out);
      if (rp) out += ')';
      return;
    }
  }
}

}  // namespace

std::vector<std::string> BoolTerm::variables() const {
  std::set<std::string> s;
  collect_vars(*this, s);
  return {s.begin(), s.end()};
}

bool BoolTerm::is_lattice() const {
  switch (kind()) {
    case Kind::negation:
      return false;
    case Kind::meet:
    case Kind::join:
      return left().is_lattice() && right().is_lattice();
    default:
      return true;
  }
}

bool BoolTerm::has_constants() const {
  switch (kind()) {
    case Kind::zero:
    case Kind::one:
      return true;
    case Kind::negation:
      return left().has_constants();
    case Kind::meet:
    case Kind::join:
      return left().has_constants() || right().has_constants();
    default:
      return false;
  }
}

bool BoolTerm::evaluate(const std::function<bool(const std::string&)>& value) const {
  switch (kind()) {
    case Kind::var:
      return value(name());
    case Kind::zero:
      return false;
    case Kind::one:
      return true;
    case Kind::negation:
      return !left().evaluate(value);
    case Kind::meet:
      return left().evaluate(value) && right().evaluate(value);
    case Kind::join:
      return left().evaluate(value) || right().evaluate(value);
  }
  return false;
}

BoolTerm BoolTerm::substitute(const std::map<std::string, BoolTerm>& map) const {
  switch (kind()) {
    case Kind::var: {
      auto it = map.find(name());
      return it == map.end() ? *this : it->second;
    }
    case Kind::negation:
      return negate(left().substitute(map));
    case Kind::meet:
      return meet(left().substitute(map), right().substitute(map));
    case Kind::join:
      return join(left().substitute(map), right().substitute(map));
    default:
      return *this;
  }
}

std::string BoolTerm::to_string() const {
  std::string out;
  render(*this, out);
  return out;
}

bool operator==(const BoolTerm& a, const BoolTerm& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case BoolTerm::Kind::var:
      return a.name() == b.name();
    case BoolTerm::Kind::negation:
      return a.left() == b.left();
    case BoolTerm::Kind::meet:
    case BoolTerm::Kind::join:
      return a.left() == b.left() && a.right() == b.right();
    default:
      return true;
  }
}

// ---------------------------------------------------------------------------
// Parsing: recursive descent over a hand-rolled token stream.

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'' ||
         c == ':';
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  BoolTerm parse() {
    skip();
    if (pos_ == s_.size()) fail("empty term");
    BoolTerm t = parse_join();
    skip();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, 1, static_cast<int>(pos_) + 1);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  BoolTerm parse_join() {
    BoolTerm t = parse_meet();
    while (accept('|')) t = BoolTerm::join(t, parse_meet());
    return t;
  }

  BoolTerm parse_meet() {
    BoolTerm t = parse_unary();
    while (accept('&')) t = BoolTerm::meet(t, parse_unary());
    return t;
  }

  BoolTerm parse_unary() {
    if (accept('!')) return BoolTerm::negate(parse_unary());
    return parse_atom();
  }

  BoolTerm parse_atom() {
    skip();
    if (pos_ == s_.size()) fail("unexpected end of term");
    if (accept('(')) {
      BoolTerm t = parse_join();
      if (!accept(')')) fail("expected ')'");
      return t;
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && is_name_char(s_[pos_])) ++pos_;
    if (start == pos_) fail(std::string("unexpected '") + s_[pos_] + "'");
    std::string_view word = s_.substr(start, pos_ - start);
    if (word == "0") return BoolTerm::zero();
    if (word == "1") return BoolTerm::one();
    return BoolTerm::var(std::string(word));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

BoolTerm parse_term(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Relation extension.

namespace {

// Evaluates `t` with variable index lookups through `r`.
template <class F>
bool eval_indexed(const BinaryRelation& r, const BoolTerm& t, F&& bit_of) {
  return t.evaluate([&](const std::string& name) { return bit_of(r.index_of(name)); });
}

void check_names(const BinaryRelation& r, const BoolTerm& t) {
  for (const auto& v : t.variables()) r.index_of(v);
}

}  // namespace

bool eval_rel(const BinaryRelation& r, const BoolTerm& q, const BoolTerm& p) {
  check_names(r, q);
  check_names(r, p);
  // Stage one: a_j R p for each generator a_j occurring in q.
  std::vector<signed char> gen_rel_p(r.size(), -1);
  auto a_rel_p = [&](std::size_t j) {
    if (gen_rel_p[j] < 0)
      gen_rel_p[j] = eval_indexed(r, p, [&](std::size_t i) { return r.at(j, i); }) ? 1 : 0;
    return gen_rel_p[j] == 1;
  };
  // Stage two: q evaluated at those bits.
  return eval_indexed(r, q, a_rel_p);
}

namespace {

ElementSet set_op(const ElementSet& a, const ElementSet& b, bool intersect) {
  ElementSet out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = intersect ? (a[i] && b[i]) : (a[i] || b[i]);
  return out;
}

ElementSet sets_rec(const BinaryRelation& r, const BoolTerm& t, const ElementSet& f, SetSide side) {
  const std::size_t n = r.size();
  switch (t.kind()) {
    case BoolTerm::Kind::var: {
      const std::size_t a = r.index_of(t.name());
      ElementSet out(n, false);
      for (std::size_t y = 0; y < n; ++y)
        out[y] = f[y] && (side == SetSide::lower ? r.at(a, y) : r.at(y, a));
      return out;
    }
    case BoolTerm::Kind::zero:
      return ElementSet(n, false);
    case BoolTerm::Kind::one:
      return f;
    case BoolTerm::Kind::negation: {
      ElementSet inner = sets_rec(r, t.left(), f, side);
      ElementSet out(n, false);
      for (std::size_t y = 0; y < n; ++y) out[y] = f[y] && !inner[y];
      return out;
    }
    case BoolTerm::Kind::meet:
    case BoolTerm::Kind::join:
      return set_op(sets_rec(r, t.left(), f, side), sets_rec(r, t.right(), f, side),
                    t.kind() == BoolTerm::Kind::meet);
  }
  return ElementSet(n, false);
}

}  // namespace

ElementSet eval_sets(const BinaryRelation& r, const BoolTerm& t, const ElementSet& f,
                     SetSide side) {
  if (f.size() != r.size()) throw ArgumentError("element set mask has the wrong length");
  if (side == SetSide::upper && std::find(f.begin(), f.end(), false) != f.end())
    throw ArgumentError("upper sets are only defined relative to all elements");
  check_names(r, t);
  return sets_rec(r, t, f, side);
}

std::vector<bool> truth_table(const BoolTerm& t, const std::vector<std::string>& vars) {
  if (vars.size() > kMaxTruthTableVars)
    throw CapacityError("truth table over " + std::to_string(vars.size()) +
                        " variables exceeds the limit of " + std::to_string(kMaxTruthTableVars));
  std::map<std::string, std::size_t> pos;
  for (std::size_t k = 0; k < vars.size(); ++k) pos.emplace(vars[k], k);
  for (const auto& v : t.variables())
    if (!pos.count(v)) throw NameError("variable '" + v + "' missing from truth-table header");
  const std::size_t rows = std::size_t{1} << vars.size();
  std::vector<bool> out(rows);
  for (std::size_t row = 0; row < rows; ++row)
    out[row] = t.evaluate([&](const std::string& v) { return ((row >> pos.at(v)) & 1) != 0; });
  return out;
}

namespace {

std::vector<std::string> union_vars(const BoolTerm& p, const BoolTerm& q) {
  std::set<std::string> s;
  for (const auto& v : p.variables()) s.insert(v);
  for (const auto& v : q.variables()) s.insert(v);
  return {s.begin(), s.end()};
}

}  // namespace

bool equivalent(const BoolTerm& p, const BoolTerm& q) {
  auto vars = union_vars(p, q);
  return truth_table(p, vars) == truth_table(q, vars);
}

bool lattice_leq(const BoolTerm& p, const BoolTerm& q) {
  if (!p.is_lattice() || !q.is_lattice())
    throw ArgumentError("lattice order is only defined for terms without negation");
  auto vars = union_vars(p, q);
  auto tp = truth_table(p, vars);
  auto tq = truth_table(q, vars);
  for (std::size_t i = 0; i < tp.size(); ++i)
    if (tp[i] && !tq[i]) return false;
  return true;
}

}  // namespace relknot

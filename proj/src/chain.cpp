#include "relknot/chain.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <mutex>
#include <unordered_map>

#include "relknot/errors.hpp"

namespace relknot {

namespace {

constexpr std::size_t kMaxBasis = 4'000'000;
constexpr int kMaxDegree = 16;
constexpr std::size_t kMaxDenseSolve = 16'000'000;

std::string tuple_text(const Tuple& t, const std::vector<std::string>& names) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += names.at(t[i]);
  }
  return s + ")";
}

// Tuples of length n in lexicographic order with defect at most k (no bound
// when `rel` is null), optionally skipping degenerate ones.
std::vector<Tuple> enumerate_tuples(std::size_t size, const BinaryRelation* rel, int k, int n,
                                    bool nondegenerate) {
  std::vector<Tuple> out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  Tuple cur;
  auto rec = [&](auto&& self, int df) -> void {
    if (static_cast<int>(cur.size()) == n) {
      if (out.size() >= kMaxBasis)
        throw CapacityError("chain group in degree " + std::to_string(n) + " exceeds " +
                            std::to_string(kMaxBasis) + " generators");
      out.push_back(cur);
      return;
    }
    for (std::uint32_t x = 0; x < size; ++x) {
      if (nondegenerate && !cur.empty() && cur.back() == x) continue;
      int d = df;
      if (rel)
        for (auto y : cur)
          if (!rel->at(y, x)) ++d;
      if (d > k) continue;
      cur.push_back(x);
      self(self, d);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

std::size_t defect(const BinaryRelation& r, const Tuple& w) {
  std::size_t missing = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (!r.at(w[i], w[j])) ++missing;
  return missing;
}

bool is_degenerate(const Tuple& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] == w[i + 1]) return true;
  return false;
}

std::string to_string(Theory t) {
  switch (t) {
    case Theory::rel_defect: return "rel";
    case Theory::rack: return "rack";
    case Theory::quandle: return "quandle";
    case Theory::partial_rack: return "prack";
    case Theory::partial_quandle: return "pquandle";
    case Theory::general_defect: return "gendefect";
  }
  return "?";
}

Theory parse_theory(std::string_view s) {
  static const std::pair<std::string_view, Theory> table[] = {
      {"rel", Theory::rel_defect},          {"rel_defect", Theory::rel_defect},
      {"rack", Theory::rack},               {"quandle", Theory::quandle},
      {"prack", Theory::partial_rack},      {"partial_rack", Theory::partial_rack},
      {"pquandle", Theory::partial_quandle}, {"partial_quandle", Theory::partial_quandle},
      {"gendefect", Theory::general_defect}, {"general_defect", Theory::general_defect},
  };
  for (const auto& [name, t] : table)
    if (name == s) return t;
  throw ArgumentError("unknown homology theory '" + std::string(s) + "'");
}

std::optional<std::size_t> TupleBasis::find(const Tuple& t) const {
  auto it = std::lower_bound(tuples.begin(), tuples.end(), t);
  if (it == tuples.end() || *it != t) return std::nullopt;
  return static_cast<std::size_t>(it - tuples.begin());
}

void Chain::add(const Tuple& t, const BigInt& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms.emplace(t, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

Chain Chain::operator+(const Chain& o) const {
  Chain r = *this;
  for (const auto& [t, c] : o.terms) r.add(t, c);
  return r;
}

Chain Chain::operator-(const Chain& o) const {
  Chain r = *this;
  for (const auto& [t, c] : o.terms) r.add(t, -c);
  return r;
}

Chain parse_chain(std::string_view text, const std::vector<std::string>& elements,
                  std::optional<int> degree) {
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::size_t i = 0; i < elements.size(); ++i)
    index.emplace(elements[i], static_cast<std::uint32_t>(i));
  Chain out;
  std::optional<int> seen;
  std::size_t p = 0;
  auto col = [&] { return static_cast<int>(p) + 1; };
  auto skip = [&] {
    while (p < text.size() && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
  };
  std::string_view trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
    trimmed.remove_suffix(1);
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
    trimmed.remove_prefix(1);
  if (trimmed == "0") {
    if (!degree) throw ArgumentError("zero chain needs an explicit degree");
    out.degree = *degree;
    return out;
  }
  bool first = true;
  while (true) {
    skip();
    if (p == text.size()) break;
    int sign = 1;
    if (text[p] == '+' || text[p] == '-') {
      sign = text[p] == '-' ? -1 : 1;
      ++p;
      skip();
    } else if (!first) {
      throw ParseError("expected '+' or '-' between terms", 1, col());
    }
    first = false;
    BigInt coef = 1;
    std::size_t digits = p;
    while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
    if (p > digits) coef = BigInt(std::string(text.substr(digits, p - digits)));
    skip();
    if (p < text.size() && text[p] == '*') {
      ++p;
      skip();
    }
    if (p == text.size() || text[p] != '(') throw ParseError("expected '('", 1, col());
    ++p;
    Tuple t;
    while (true) {
      skip();
      std::size_t start = p;
      while (p < text.size() && text[p] != ',' && text[p] != ')' &&
             !std::isspace(static_cast<unsigned char>(text[p])))
        ++p;
      if (p == start) throw ParseError("expected element name", 1, col());
      std::string name(text.substr(start, p - start));
      auto it = index.find(name);
      if (it == index.end()) throw NameError("unknown element '" + name + "'");
      t.push_back(it->second);
      skip();
      if (p == text.size()) throw ParseError("unterminated tuple", 1, col());
      if (text[p] == ')') {
        ++p;
        break;
      }
      if (text[p] != ',') throw ParseError("expected ',' or ')'", 1, col());
      ++p;
    }
    int n = static_cast<int>(t.size());
    if (seen && *seen != n) throw ArgumentError("chain mixes tuple lengths");
    seen = n;
    out.add(t, sign * coef);
  }
  if (!seen) throw ParseError("empty chain", 1, col());
  if (degree && *degree != *seen) throw ArgumentError("chain degree differs from the expected one");
  out.degree = *seen;
  return out;
}

std::string format_chain(const Chain& c, const std::vector<std::string>& elements) {
  if (c.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [t, v] : c.terms) {
    bool neg = v < 0;
    BigInt mag = neg ? BigInt(-v) : v;
    if (first)
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    first = false;
    if (mag != 1) s += mag.str();
    s += tuple_text(t, elements);
  }
  return s;
}

std::string to_string(const AbelianGroup& g) {
  std::vector<std::string> parts;
  if (g.free_rank == 1) parts.push_back("Z");
  if (g.free_rank > 1) parts.push_back("Z^" + std::to_string(g.free_rank));
  for (const auto& d : g.invariant_factors) parts.push_back("Z/" + d.str());
  if (parts.empty()) return "0";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += " + " + parts[i];
  return s;
}

// ---------------------------------------------------------------------------

struct ChainComplex::Cache {
  explicit Cache(int n) : once(new std::once_flag[n + 1]), factors(n + 1) {}
  std::unique_ptr<std::once_flag[]> once;
  std::vector<SmithFactors> factors;
};

const TupleBasis& ChainComplex::basis(int n) const {
  if (n < 0 || n > max_degree_)
    throw ArgumentError("degree " + std::to_string(n) + " outside 0.." +
                        std::to_string(max_degree_));
  return bases_[n];
}

const SparseMatrix& ChainComplex::boundary_matrix(int n) const {
  if (n < 1 || n > max_degree_)
    throw ArgumentError("boundary degree " + std::to_string(n) + " outside 1.." +
                        std::to_string(max_degree_));
  return boundaries_[n];
}

std::optional<std::size_t> ChainComplex::locate(const Tuple& t) const {
  int n = static_cast<int>(t.size());
  if (auto i = basis(n).find(t)) return i;
  // Degenerate generators vanish only when they belong to C_n at all.
  if (quotient_ && is_degenerate(t) &&
      (!rel_ || defect(*rel_, t) <= static_cast<std::size_t>(defect_bound_)))
    return std::nullopt;
  throw ArgumentError("tuple " + tuple_text(t, elements_) + " is not a generator of C_" +
                      std::to_string(n));
}

Chain ChainComplex::project(const Chain& c) const {
  Chain out;
  out.degree = c.degree;
  for (const auto& [t, v] : c.terms)
    if (locate(t)) out.add(t, v);
  return out;
}

const SmithFactors& ChainComplex::factors(int n) const {
  const SparseMatrix& m = boundary_matrix(n);
  std::call_once(cache_->once[n], [&] { cache_->factors[n] = smith_factors(m); });
  return cache_->factors[n];
}

void ChainComplex::check_square_zero() const {
  for (int n = 3; n <= max_degree_; ++n) {
    const SparseMatrix& hi = boundaries_[n];
    const SparseMatrix& lo = boundaries_[n - 1];
    std::vector<std::int64_t> acc(lo.rows, 0);
    std::vector<std::uint32_t> touched;
    for (std::size_t j = 0; j < hi.cols; ++j) {
      for (const auto& [r, v] : hi.columns[j])
        for (const auto& [r2, v2] : lo.columns[r]) {
          if (acc[r2] == 0) touched.push_back(r2);
          acc[r2] += v * v2;
        }
      for (auto r2 : touched) {
        if (acc[r2] != 0)
          throw AxiomError("boundary of boundary is nonzero on " +
                           tuple_text(bases_[n].tuples[j], elements_) + " (degree " +
                           std::to_string(n) + ")");
        acc[r2] = 0;
      }
      touched.clear();
    }
  }
}

ChainComplex ChainComplex::for_relation(const BinaryRelation& r, int k, int max_degree) {
  if (max_degree < 1 || max_degree > kMaxDegree)
    throw ArgumentError("max degree must lie in 1.." + std::to_string(kMaxDegree));
  if (k < 0) throw ArgumentError("defect bound must be nonnegative");
  ChainComplex c;
  c.theory_ = Theory::rel_defect;
  c.max_degree_ = max_degree;
  c.defect_bound_ = k;
  c.elements_ = r.elements();
  c.rel_ = std::make_shared<const BinaryRelation>(r);
  for (int n = 0; n <= max_degree; ++n)
    c.bases_.push_back(
        {n, enumerate_tuples(r.size(), &r, k, n, false), "defect <= " + std::to_string(k)});
  c.boundaries_.resize(max_degree + 1);
  c.boundaries_[1] = SparseMatrix(1, c.bases_[1].size());
  for (int n = 2; n <= max_degree; ++n) {
    SparseMatrix m(c.bases_[n - 1].size(), c.bases_[n].size());
    for (std::size_t j = 0; j < c.bases_[n].size(); ++j) {
      const Tuple& w = c.bases_[n].tuples[j];
      for (int i = 0; i < n; ++i) {
        Tuple d = w;
        d.erase(d.begin() + i);
        // Deleting entries never raises the defect, so the face is a generator.
        std::size_t row = *c.bases_[n - 1].find(d);
        m.add(row, j, (i + 1) % 2 == 0 ? 1 : -1);
      }
    }
    c.boundaries_[n] = std::move(m);
  }
  c.cache_ = std::make_shared<Cache>(max_degree);
  c.check_square_zero();
  return c;
}

ChainComplex ChainComplex::for_algebra(const PartialAlgebra& a, Theory theory, int max_degree,
                                       int k) {
  if (theory == Theory::rel_defect) return for_relation(a.rel(), k, max_degree);
  if (max_degree < 1 || max_degree > kMaxDegree)
    throw ArgumentError("max degree must lie in 1.." + std::to_string(kMaxDegree));
  const bool total_needed = theory == Theory::rack || theory == Theory::quandle ||
                            theory == Theory::general_defect;
  if (total_needed)
    for (std::size_t x = 0; x < a.size(); ++x)
      for (std::size_t y = 0; y < a.size(); ++y)
        if (!a.defined(x, y, Op::star))
          throw AxiomError("operation undefined at (" + a.name(x) + "," + a.name(y) + "); " +
                           to_string(theory) + " complexes need a total table");
  if (theory == Theory::general_defect) {
    if (k < 0) throw ArgumentError("defect bound must be nonnegative");
    auto report = check_defect_operation(a);
    if (!report.ok()) throw AxiomError("general defect conditions fail:\n" + report.describe(a));
  }

  ChainComplex c;
  c.theory_ = theory;
  c.max_degree_ = max_degree;
  c.quotient_ = theory == Theory::quandle || theory == Theory::partial_quandle;
  c.defect_bound_ = theory == Theory::general_defect ? k : 0;
  c.elements_ = a.elements();
  if (theory != Theory::rack && theory != Theory::quandle)
    c.rel_ = std::make_shared<const BinaryRelation>(a.rel());
  const BinaryRelation* rel = c.rel_.get();
  const int bound = c.defect_bound_;
  std::string criterion = rel ? "defect <= " + std::to_string(bound) : "all tuples";
  if (c.quotient_) criterion += ", nondegenerate";
  for (int n = 0; n <= max_degree; ++n)
    c.bases_.push_back({n, enumerate_tuples(a.size(), rel, bound, n, c.quotient_), criterion});

  const auto& star = a.table(Op::star);
  auto faces = [&](const Tuple& w, auto&& emit) {
    const int n = static_cast<int>(w.size());
    for (int i = 0; i < n; ++i) {
      const std::int64_t sign = (i + 1) % 2 == 0 ? 1 : -1;
      Tuple del = w;
      del.erase(del.begin() + i);
      emit(del, sign);
      Tuple act = del;
      for (int j = 0; j < i; ++j) {
        int p = star[w[j]][w[i]];
        if (p < 0)
          throw AxiomError("PQ1: " + a.name(w[j]) + " * " + a.name(w[i]) +
                           " is undefined but needed by the boundary of " +
                           tuple_text(w, c.elements_));
        act[j] = static_cast<std::uint32_t>(p);
      }
      emit(act, -sign);
    }
  };
  auto row_of = [&](const Tuple& face, const Tuple& w) -> std::optional<std::size_t> {
    const int n = static_cast<int>(face.size());
    if (rel && defect(*rel, face) > static_cast<std::size_t>(bound))
      throw AxiomError("boundary of " + tuple_text(w, c.elements_) + " leaves the chain group at " +
                       tuple_text(face, c.elements_) + " (PQ2: x*y must stay equivalent to x)");
    if (c.quotient_ && is_degenerate(face)) return std::nullopt;
    auto row = c.bases_[n].find(face);
    if (!row) throw AxiomError("face " + tuple_text(face, c.elements_) + " missing from basis");
    return row;
  };

  c.boundaries_.resize(max_degree + 1);
  c.boundaries_[1] = SparseMatrix(1, c.bases_[1].size());
  for (int n = 2; n <= max_degree; ++n) {
    SparseMatrix m(c.bases_[n - 1].size(), c.bases_[n].size());
    for (std::size_t j = 0; j < c.bases_[n].size(); ++j) {
      const Tuple& w = c.bases_[n].tuples[j];
      faces(w, [&](const Tuple& f, std::int64_t s) {
        if (auto r = row_of(f, w)) m.add(*r, j, s);
      });
    }
    c.boundaries_[n] = std::move(m);
  }

  if (c.quotient_) {
    // The degenerate generators must span a subcomplex for the quotient to exist.
    for (int n = 2; n <= max_degree; ++n)
      for (const Tuple& w : enumerate_tuples(a.size(), rel, bound, n, false)) {
        if (!is_degenerate(w)) continue;
        std::map<std::size_t, std::int64_t> image;
        faces(w, [&](const Tuple& f, std::int64_t s) {
          if (auto r = row_of(f, w)) image[*r] += s;
        });
        for (const auto& [r, v] : image)
          if (v != 0)
            throw AxiomError("degenerate tuples do not form a subcomplex: boundary of " +
                             tuple_text(w, c.elements_) + " meets " +
                             tuple_text(c.bases_[n - 1].tuples[r], c.elements_));
      }
  }

  c.cache_ = std::make_shared<Cache>(max_degree);
  c.check_square_zero();
  return c;
}

Chain boundary(const ChainComplex& c, const Chain& x) {
  if (x.degree < 1 || x.degree > c.max_degree())
    throw ArgumentError("boundary needs a chain of degree 1.." + std::to_string(c.max_degree()));
  Chain out;
  out.degree = x.degree - 1;
  if (x.degree == 1) return out;
  const SparseMatrix& m = c.boundary_matrix(x.degree);
  const TupleBasis& lower = c.basis(x.degree - 1);
  for (const auto& [t, v] : x.terms) {
    if (static_cast<int>(t.size()) != x.degree)
      throw ArgumentError("chain term has the wrong length");
    auto col = c.locate(t);
    if (!col) continue;
    for (const auto& [r, e] : m.columns[*col]) out.add(lower.tuples[r], v * e);
  }
  return out;
}

AbelianGroup homology(const ChainComplex& c, int n) {
  if (n < 0 || n >= c.max_degree())
    throw ArgumentError("homology in degree " + std::to_string(n) + " needs max degree > " +
                        std::to_string(n) + " (have " + std::to_string(c.max_degree()) + ")");
  AbelianGroup g;
  const std::size_t dim = c.basis(n).size();
  const std::size_t rank_in = n >= 2 ? c.factors(n).rank() : 0;
  const SmithFactors& out = c.factors(n + 1);
  g.free_rank = dim - rank_in - out.rank();
  g.invariant_factors = out.torsion();
  return g;
}

std::vector<AbelianGroup> homology_range(const ChainComplex& c, int lo, int hi) {
  if (lo < 0 || hi >= c.max_degree() || lo > hi)
    throw ArgumentError("homology range " + std::to_string(lo) + ".." + std::to_string(hi) +
                        " needs max degree > " + std::to_string(hi));
  std::vector<std::future<void>> jobs;
  for (int n = std::max(lo, 2); n <= hi + 1; ++n)
    jobs.push_back(std::async(std::launch::async, [&c, n] { c.factors(n); }));
  for (auto& j : jobs) j.get();
  std::vector<AbelianGroup> out;
  for (int n = lo; n <= hi; ++n) out.push_back(homology(c, n));
  return out;
}

BoundaryCertificate express_as_boundary(const ChainComplex& c, const Chain& x) {
  const int n = x.degree;
  if (n < 1 || n + 1 > c.max_degree())
    throw ArgumentError("boundary test in degree " + std::to_string(n) + " needs degrees " +
                        std::to_string(n) + " and " + std::to_string(n + 1));
  Chain px = c.project(x);
  if (!boundary(c, px).is_zero()) throw ArgumentError("chain is not a cycle");
  BoundaryCertificate cert;
  if (px.is_zero()) {
    cert.is_boundary = true;
    cert.witness = Chain{n + 1, {}};
    cert.order = 1;
    return cert;
  }
  const SparseMatrix& m = c.boundary_matrix(n + 1);
  if (m.rows * m.cols > kMaxDenseSolve)
    throw CapacityError("boundary matrix " + std::to_string(m.rows) + "x" +
                        std::to_string(m.cols) + " too large for a dense solve");
  std::vector<BigInt> b(m.rows);
  for (const auto& [t, v] : px.terms) b[*c.basis(n).find(t)] = v;
  auto sol = solve_integer(smith_decomposition(DenseMatrix::from_sparse(m)), b);
  cert.order = sol.order;
  cert.is_boundary = sol.solvable;
  if (sol.solvable) {
    Chain w;
    w.degree = n + 1;
    for (std::size_t j = 0; j < sol.x.size(); ++j) w.add(c.basis(n + 1).tuples[j], sol.x[j]);
    cert.witness = std::move(w);
  }
  return cert;
}

BigInt order_in_homology(const ChainComplex& c, const Chain& x) {
  return express_as_boundary(c, x).order;
}

}  // namespace relknot

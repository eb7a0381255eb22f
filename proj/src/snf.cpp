#include "relknot/snf.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "relknot/errors.hpp"

namespace relknot {

// ---------------------------------------------------------------------------
// SparseMatrix / DenseMatrix basics.

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns) n += c.size();
  return n;
}

void SparseMatrix::add(std::size_t r, std::size_t c, std::int64_t v) {
  if (v == 0) return;
  auto& col = columns.at(c);
  auto it = std::lower_bound(col.begin(), col.end(), r,
                             [](const auto& e, std::size_t row) { return e.first < row; });
  if (it != col.end() && it->first == r) {
    it->second += v;
    if (it->second == 0) col.erase(it);
  } else {
    col.insert(it, {static_cast<std::uint32_t>(r), v});
  }
}

std::int64_t SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto& col = columns.at(c);
  auto it = std::lower_bound(col.begin(), col.end(), r,
                             [](const auto& e, std::size_t row) { return e.first < row; });
  return (it != col.end() && it->first == r) ? it->second : 0;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

DenseMatrix DenseMatrix::from_sparse(const SparseMatrix& s) {
  DenseMatrix m(s.rows, s.cols);
  for (std::size_t c = 0; c < s.cols; ++c)
    for (const auto& [r, v] : s.columns[c]) m.at(r, c) = v;
  return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
  DenseMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw ArgumentError("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& o) const {
  if (cols_ != o.rows_) throw ArgumentError("matrix shapes do not match");
  DenseMatrix out(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const BigInt& a = at(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) out.at(i, j) += a * o.at(k, j);
    }
  return out;
}

std::vector<BigInt> DenseMatrix::operator*(const std::vector<BigInt>& v) const {
  if (cols_ != v.size()) throw ArgumentError("matrix and vector shapes do not match");
  std::vector<BigInt> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += at(i, j) * v[j];
  return out;
}

BigInt DenseMatrix::determinant() const {
  if (rows_ != cols_) throw ArgumentError("determinant of a non-square matrix");
  const std::size_t n = rows_;
  if (n == 0) return 1;
  DenseMatrix a = *this;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a.at(k, k).is_zero()) {
      std::size_t p = k + 1;
      while (p < n && a.at(p, k).is_zero()) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
    prev = a.at(k, k);
  }
  return sign * a.at(n - 1, n - 1);
}

std::vector<BigInt> SmithFactors::torsion() const {
  std::vector<BigInt> out;
  for (const auto& f : factors)
    if (f > 1) out.push_back(f);
  return out;
}

std::vector<BigInt> SmithDecomposition::diagonal() const {
  std::vector<BigInt> d;
  for (std::size_t i = 0; i < std::min(s.rows(), s.cols()); ++i) d.push_back(s.at(i, i));
  return d;
}

void normalize_divisibility(std::vector<BigInt>& diag) {
  std::vector<BigInt> nz;
  std::size_t zeros = 0;
  for (auto& d : diag) {
    if (d.is_zero())
      ++zeros;
    else
      nz.push_back(abs(d));
  }
  std::sort(nz.begin(), nz.end());
  for (std::size_t i = 0; i < nz.size(); ++i)
    for (std::size_t j = i + 1; j < nz.size(); ++j) {
      BigInt g = gcd(nz[i], nz[j]);
      if (g == nz[i]) continue;
      BigInt l = nz[i] / g * nz[j];
      nz[i] = g;
      nz[j] = l;
    }
  nz.resize(nz.size() + zeros);
  diag = std::move(nz);
}

// ---------------------------------------------------------------------------
// Dense Smith form.

namespace {

// Unimodular [[s t] [r q]] sending (x, y) to (g, 0).
struct Gcd {
  BigInt s, t, r, q;
};

Gcd ext_gcd(const BigInt& x, const BigInt& y) {
  if (BigInt(y % x) == 0) return {1, 0, -BigInt(y / x), 1};
  BigInt r0 = x, r1 = y, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (!r1.is_zero()) {
    BigInt k = r0 / r1;
    BigInt tmp = r0 - k * r1;
    r0 = std::move(r1);
    r1 = std::move(tmp);
    tmp = s0 - k * s1;
    s0 = std::move(s1);
    s1 = std::move(tmp);
    tmp = t0 - k * t1;
    t0 = std::move(t1);
    t1 = std::move(tmp);
  }
  // s0*x + t0*y = r0 and s1*x + t1*y = 0 with s0*t1 - t0*s1 = +-1.
  if (s0 * t1 - t0 * s1 < 0) {
    s1 = -s1;
    t1 = -t1;
  }
  return {s0, t0, s1, t1};
}

struct DenseSmith {
  DenseMatrix& a;
  DenseMatrix* u;  // accumulates row operations
  DenseMatrix* v;  // accumulates column operations

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < a.cols(); ++k) std::swap(a.at(i, k), a.at(j, k));
    if (u)
      for (std::size_t k = 0; k < u->cols(); ++k) std::swap(u->at(i, k), u->at(j, k));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < a.rows(); ++k) std::swap(a.at(k, i), a.at(k, j));
    if (v)
      for (std::size_t k = 0; k < v->rows(); ++k) std::swap(v->at(k, i), v->at(k, j));
  }
  // row_i += f * row_j
  void add_row(std::size_t i, std::size_t j, const BigInt& f) {
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (!a.at(j, k).is_zero()) a.at(i, k) += f * a.at(j, k);
    if (u)
      for (std::size_t k = 0; k < u->cols(); ++k)
        if (!u->at(j, k).is_zero()) u->at(i, k) += f * u->at(j, k);
  }
  // (row_i, row_j) <- (p*row_i + q*row_j, r*row_i + s*row_j), determinant 1.
  static void mix(BigInt& x, BigInt& y, const BigInt& p, const BigInt& q, const BigInt& r,
                  const BigInt& s) {
    BigInt nx = p * x + q * y;
    y = r * x + s * y;
    x = std::move(nx);
  }
  void mix_rows(std::size_t i, std::size_t j, const Gcd& g) {
    for (std::size_t k = 0; k < a.cols(); ++k) mix(a.at(i, k), a.at(j, k), g.s, g.t, g.r, g.q);
    if (u)
      for (std::size_t k = 0; k < u->cols(); ++k)
        mix(u->at(i, k), u->at(j, k), g.s, g.t, g.r, g.q);
  }
  void mix_cols(std::size_t i, std::size_t j, const Gcd& g) {
    for (std::size_t k = 0; k < a.rows(); ++k) mix(a.at(k, i), a.at(k, j), g.s, g.t, g.r, g.q);
    if (v)
      for (std::size_t k = 0; k < v->rows(); ++k)
        mix(v->at(k, i), v->at(k, j), g.s, g.t, g.r, g.q);
  }
  void negate_row(std::size_t i) {
    for (std::size_t k = 0; k < a.cols(); ++k) a.at(i, k) = -a.at(i, k);
    if (u)
      for (std::size_t k = 0; k < u->cols(); ++k) u->at(i, k) = -u->at(i, k);
  }

  std::size_t run() {
    const std::size_t r = a.rows(), c = a.cols();
    std::size_t t = 0;
    for (; t < std::min(r, c); ++t) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pi = r, pj = c;
      BigInt best;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j) {
          const BigInt& x = a.at(i, j);
          if (x.is_zero()) continue;
          if (pi == r || abs(x) < best) {
            best = abs(x);
            pi = i;
            pj = j;
            if (best == 1) goto found;
          }
        }
    found:
      if (pi == r) break;
      swap_rows(t, pi);
      swap_cols(t, pj);
      for (;;) {
        // Clearing column t first keeps row operations from refilling row t
        // with large multiples; each pass replaces the pivot by a divisor.
        for (std::size_t i = t + 1; i < r; ++i)
          if (!a.at(i, t).is_zero()) mix_rows(t, i, ext_gcd(a.at(t, t), a.at(i, t)));
        bool clean = true;
        for (std::size_t j = t + 1; j < c; ++j)
          if (!a.at(t, j).is_zero()) {
            mix_cols(t, j, ext_gcd(a.at(t, t), a.at(t, j)));
            for (std::size_t i = t + 1; i < r && clean; ++i) clean = a.at(i, t).is_zero();
          }
        if (!clean) continue;
        // Pivot must divide the rest of the block.
        bool divides = true;
        for (std::size_t i = t + 1; i < r && divides; ++i)
          for (std::size_t j = t + 1; j < c; ++j)
            if (BigInt(a.at(i, j) % a.at(t, t)) != 0) {
              add_row(t, i, 1);
              divides = false;
              break;
            }
        if (divides) break;
      }
      if (a.at(t, t) < 0) negate_row(t);
    }
    return t;
  }
};

}  // namespace

SmithDecomposition smith_decomposition(const DenseMatrix& m) {
  SmithDecomposition d;
  d.s = m;
  d.u = DenseMatrix::identity(m.rows());
  d.v = DenseMatrix::identity(m.cols());
  d.rank = DenseSmith{d.s, &d.u, &d.v}.run();
  return d;
}

SmithFactors smith_factors(const DenseMatrix& m) {
  DenseMatrix a = m;
  std::size_t rank = DenseSmith{a, nullptr, nullptr}.run();
  SmithFactors f;
  for (std::size_t i = 0; i < rank; ++i) f.factors.push_back(a.at(i, i));
  normalize_divisibility(f.factors);
  return f;
}

// ---------------------------------------------------------------------------
// Sparse elimination of unit pivots.

namespace {

struct Overflow {};

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline BigInt checked_mul(const BigInt& a, const BigInt& b) { return a * b; }
inline BigInt checked_sub(const BigInt& a, const BigInt& b) { return a - b; }

inline bool is_unit(std::int64_t v) { return v == 1 || v == -1; }
inline bool is_unit(const BigInt& v) { return v == 1 || v == -1; }

template <class T>
class UnitEliminator {
 public:
  using Entry = std::pair<std::uint32_t, T>;
  using Column = std::vector<Entry>;

  explicit UnitEliminator(const SparseMatrix& m) : cols_(m.cols), row_cols_(m.rows) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      for (const auto& [r, v] : m.columns[c]) {
        cols_[c].emplace_back(r, T(v));
        row_cols_[r].push_back(static_cast<std::uint32_t>(c));
      }
      if (!cols_[c].empty()) queue_.insert({cols_[c].size(), c});
    }
  }

  // Returns the number of unit pivots eliminated.
  std::size_t run() {
    std::size_t units = 0;
    while (!queue_.empty()) {
      auto [len, c] = *queue_.begin();
      queue_.erase(queue_.begin());
      (void)len;
      const Column& col = cols_[c];
      std::size_t best_row = SIZE_MAX, best_cost = SIZE_MAX;
      T pivot{};
      for (const auto& [r, v] : col)
        if (is_unit(v) && row_cols_[r].size() < best_cost) {
          best_cost = row_cols_[r].size();
          best_row = r;
          pivot = v;
        }
      if (best_row == SIZE_MAX) {
        parked_.insert(c);
        continue;
      }
      eliminate(c, best_row, pivot);
      ++units;
    }
    return units;
  }

  // Columns left after elimination, as a dense core.
  DenseMatrix core() const {
    std::vector<std::size_t> keep_cols;
    std::vector<std::uint32_t> rows;
    for (std::size_t c : parked_)
      if (!cols_[c].empty()) {
        keep_cols.push_back(c);
        for (const auto& e : cols_[c]) rows.push_back(e.first);
      }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    DenseMatrix d(rows.size(), keep_cols.size());
    for (std::size_t j = 0; j < keep_cols.size(); ++j)
      for (const auto& [r, v] : cols_[keep_cols[j]]) {
        auto i = std::lower_bound(rows.begin(), rows.end(), r) - rows.begin();
        d.at(i, j) = BigInt(v);
      }
    return d;
  }

 private:
  void unlink(std::uint32_t row, std::size_t c) {
    auto& rc = row_cols_[row];
    auto it = std::find(rc.begin(), rc.end(), static_cast<std::uint32_t>(c));
    *it = rc.back();
    rc.pop_back();
  }

  void requeue(std::size_t c, std::size_t old_len) {
    if (parked_.erase(c) == 0) queue_.erase({old_len, c});
    if (!cols_[c].empty()) queue_.insert({cols_[c].size(), c});
  }

  // target -= f * source, keeping row_cols_ in sync.
  void axpy(std::size_t target, const Column& source, const T& f) {
    Column& dst = cols_[target];
    const std::size_t old_len = dst.size();
    Column out;
    out.reserve(dst.size() + source.size());
    std::size_t i = 0, j = 0;
    while (i < dst.size() || j < source.size()) {
      if (j == source.size() || (i < dst.size() && dst[i].first < source[j].first)) {
        out.push_back(std::move(dst[i++]));
      } else if (i == dst.size() || source[j].first < dst[i].first) {
        out.emplace_back(source[j].first, checked_sub(T(0), checked_mul(f, source[j].second)));
        row_cols_[source[j].first].push_back(static_cast<std::uint32_t>(target));
        ++j;
      } else {
        T v = checked_sub(dst[i].second, checked_mul(f, source[j].second));
        if (v == 0)
          unlink(dst[i].first, target);
        else
          out.emplace_back(dst[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
    dst = std::move(out);
    requeue(target, old_len);
  }

  void eliminate(std::size_t c, std::size_t r, const T& pivot) {
    const Column pivot_col = cols_[c];
    std::vector<std::uint32_t> others;
    for (auto oc : row_cols_[r])
      if (oc != c) others.push_back(oc);
    for (auto oc : others) {
      const Column& col = cols_[oc];
      auto it = std::lower_bound(col.begin(), col.end(), static_cast<std::uint32_t>(r),
                                 [](const Entry& e, std::uint32_t row) { return e.first < row; });
      T f = checked_mul(it->second, pivot);  // pivot is its own inverse
      axpy(oc, pivot_col, f);
    }
    // Row r now meets only column c: drop both.
    for (const auto& e : pivot_col) unlink(e.first, c);
    cols_[c].clear();
  }

  std::vector<Column> cols_;
  std::vector<std::vector<std::uint32_t>> row_cols_;
  std::set<std::pair<std::size_t, std::size_t>> queue_;
  std::set<std::size_t> parked_;
};

template <class T>
SmithFactors sparse_factors(const SparseMatrix& m) {
  UnitEliminator<T> e(m);
  std::size_t units = e.run();
  SmithFactors f = smith_factors(e.core());
  std::vector<BigInt> all(units, BigInt(1));
  all.insert(all.end(), f.factors.begin(), f.factors.end());
  normalize_divisibility(all);
  return SmithFactors{std::move(all)};
}

}  // namespace

SmithFactors smith_factors(const SparseMatrix& m) {
  try {
    return sparse_factors<std::int64_t>(m);
  } catch (const Overflow&) {
    return sparse_factors<BigInt>(m);
  }
}

IntegerSolve solve_integer(const SmithDecomposition& d, const std::vector<BigInt>& b) {
  if (b.size() != d.u.cols()) throw ArgumentError("right-hand side has the wrong length");
  std::vector<BigInt> ub = d.u * b;
  IntegerSolve out;
  out.order = 1;
  bool infinite = false;
  std::vector<BigInt> y(d.v.rows());
  bool exact = true;
  for (std::size_t i = 0; i < ub.size(); ++i) {
    if (i < d.rank) {
      const BigInt& di = d.s.at(i, i);
      BigInt g = gcd(di, abs(ub[i]));
      BigInt need = di / g;
      out.order = out.order / gcd(out.order, need) * need;
      if (BigInt(ub[i] % di) == 0)
        y[i] = ub[i] / di;
      else
        exact = false;
    } else if (!ub[i].is_zero()) {
      infinite = true;
      exact = false;
    }
  }
  if (infinite) out.order = 0;
  out.solvable = exact;
  if (exact) out.x = d.v * y;
  return out;
}

}  // namespace relknot

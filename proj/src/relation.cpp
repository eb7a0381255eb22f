#include "relknot/relation.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "relknot/errors.hpp"
#include "text_util.hpp"

namespace relknot {

BinaryRelation::BinaryRelation(std::vector<std::string> elements)
    : elements_(std::move(elements)), bits_(elements_.size() * elements_.size(), 0) {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (!index_.emplace(elements_[i], i).second)
      throw ArgumentError("duplicate element name '" + elements_[i] + "'");
  }
}

BinaryRelation::BinaryRelation(std::vector<std::string> elements,
                               const std::vector<std::vector<int>>& rows)
    : BinaryRelation(std::move(elements)) {
  const std::size_t n = size();
  if (rows.size() != n) throw ArgumentError("relation matrix must have one row per element");
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw ArgumentError("relation matrix must be square");
    for (std::size_t j = 0; j < n; ++j) set(i, j, rows[i][j] != 0);
  }
}

BinaryRelation BinaryRelation::full(std::vector<std::string> elements) {
  BinaryRelation r(std::move(elements));
  std::fill(r.bits_.begin(), r.bits_.end(), 1);
  return r;
}

std::optional<std::size_t> BinaryRelation::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t BinaryRelation::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw NameError("unknown element '" + std::string(name) + "'");
}

bool BinaryRelation::relate(std::string_view x, std::string_view y) const {
  return at(index_of(x), index_of(y));
}

std::size_t BinaryRelation::pair_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

bool BinaryRelation::includes(const BinaryRelation& other) const {
  if (other.elements_ != elements_) throw ArgumentError("relations over different elements");
  for (std::size_t k = 0; k < bits_.size(); ++k)
    if (other.bits_[k] && !bits_[k]) return false;
  return true;
}

bool BinaryRelation::is_reflexive() const {
  for (std::size_t i = 0; i < size(); ++i)
    if (!at(i, i)) return false;
  return true;
}

bool BinaryRelation::is_symmetric() const {
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

bool BinaryRelation::is_transitive() const {
  const std::size_t n = size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!at(a, b)) continue;
      for (std::size_t c = 0; c < n; ++c)
        if (at(b, c) && !at(a, c)) return false;
    }
  return true;
}

bool BinaryRelation::is_semi_transitive() const {
  const std::size_t n = size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || !at(a, b)) continue;
      for (std::size_t c = 0; c < n; ++c)
        if (c != a && c != b && at(b, c) && !at(a, c)) return false;
    }
  return true;
}

BinaryRelation BinaryRelation::restricted(const std::vector<std::size_t>& keep) const {
  std::vector<std::string> names;
  names.reserve(keep.size());
  for (auto i : keep) names.push_back(elements_.at(i));
  BinaryRelation r(std::move(names));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) r.set(i, j, at(keep[i], keep[j]));
  return r;
}

Preorder dominance(const BinaryRelation& r) {
  const std::size_t n = r.size();
  Preorder p{r, BinaryRelation(r.elements()), {}, std::vector<std::size_t>(n, 0), {}};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      bool dom = true;
      for (std::size_t c = 0; c < n && dom; ++c) {
        if (r.at(a, c) && !r.at(b, c)) dom = false;
        if (r.at(c, a) && !r.at(c, b)) dom = false;
      }
      p.dominance.set(a, b, dom);
    }

  std::vector<bool> placed(n, false);
  for (std::size_t a = 0; a < n; ++a) {
    if (placed[a]) continue;
    std::vector<std::size_t> cls;
    for (std::size_t b = a; b < n; ++b) {
      if (!placed[b] && p.dominance.at(a, b) && p.dominance.at(b, a)) {
        placed[b] = true;
        p.class_of[b] = p.classes.size();
        cls.push_back(b);
      }
    }
    p.classes.push_back(std::move(cls));
  }

  std::vector<std::string> class_names;
  for (const auto& cls : p.classes) {
    auto least = std::min_element(cls.begin(), cls.end(), [&](std::size_t x, std::size_t y) {
      return r.name(x) < r.name(y);
    });
    class_names.push_back(r.name(*least));
  }
  p.quotient = BinaryRelation(std::move(class_names));
  for (std::size_t i = 0; i < p.classes.size(); ++i)
    for (std::size_t j = 0; j < p.classes.size(); ++j)
      p.quotient.set(i, j, r.at(p.classes[i].front(), p.classes[j].front()));
  return p;
}

namespace {

bool symmetric_step(BinaryRelation& r) {
  bool changed = false;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j)
      if (r.at(i, j) && !r.at(j, i)) {
        r.set(j, i);
        changed = true;
      }
  return changed;
}

// Runs the distinct-triple rule to its own fixpoint.
bool semi_transitive_step(BinaryRelation& r) {
  const std::size_t n = r.size();
  bool changed = false;
  bool again = true;
  while (again) {
    again = false;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b || !r.at(a, b)) continue;
        for (std::size_t c = 0; c < n; ++c) {
          if (c == a || c == b || !r.at(b, c) || r.at(a, c)) continue;
          r.set(a, c);
          again = changed = true;
        }
      }
  }
  return changed;
}

}  // namespace

BinaryRelation closure_st(const BinaryRelation& r, bool symmetric_first) {
  BinaryRelation out = r;
  bool changed = true;
  while (changed) {
    if (symmetric_first) {
      changed = symmetric_step(out);
      changed = semi_transitive_step(out) || changed;
    } else {
      changed = semi_transitive_step(out);
      changed = symmetric_step(out) || changed;
    }
  }
  return out;
}

BinaryRelation closure(const BinaryRelation& r, ClosureKind kind) {
  BinaryRelation out = r;
  switch (kind) {
    case ClosureKind::symmetric:
      symmetric_step(out);
      return out;
    case ClosureKind::semi_transitive:
      semi_transitive_step(out);
      return out;
    case ClosureKind::st:
      return closure_st(r, true);
  }
  return out;
}

ElementMap ElementMap::identity(std::size_t n) {
  ElementMap f;
  f.image.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.image[i] = i;
  return f;
}

ElementMap ElementMap::from_names(const BinaryRelation& source, const BinaryRelation& target,
                                  const std::vector<std::pair<std::string, std::string>>& pairs) {
  ElementMap f;
  std::vector<bool> seen(source.size(), false);
  f.image.assign(source.size(), 0);
  for (const auto& [from, to] : pairs) {
    auto i = source.index_of(from);
    f.image[i] = target.index_of(to);
    seen[i] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw ArgumentError("element '" + source.name(i) + "' is not mapped");
  return f;
}

ElementMap ElementMap::then(const ElementMap& next) const {
  ElementMap g;
  g.image.reserve(image.size());
  for (auto i : image) g.image.push_back(next.image.at(i));
  return g;
}

MonotoneCheck is_monotone(const ElementMap& f, const BinaryRelation& source,
                          const BinaryRelation& target) {
  if (f.image.size() != source.size()) throw ArgumentError("map is not total on the source");
  for (std::size_t a = 0; a < source.size(); ++a)
    for (std::size_t b = 0; b < source.size(); ++b)
      if (source.at(a, b) && !target.at(f.image[a], f.image[b])) return {false, {{a, b}}};
  return {};
}

namespace detail {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view raw = text.substr(pos, end - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    auto tokens = split_ws(raw);
    if (!tokens.empty() && tokens.front()[0] != '#')
      out.push_back({number, std::string(raw), std::move(tokens)});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

BinaryRelation parse_relation_lines(const std::vector<Line>& lines, std::size_t begin,
                                    std::size_t end) {
  if (begin >= end) throw ParseError("relation block is empty");
  const auto& names = lines[begin].tokens;
  const std::size_t n = names.size();
  if (end - begin - 1 != n)
    throw ParseError("expected " + std::to_string(n) + " matrix rows, found " +
                         std::to_string(end - begin - 1),
                     lines[begin].number);
  std::vector<std::vector<int>> rows;
  for (std::size_t r = 0; r < n; ++r) {
    const Line& line = lines[begin + 1 + r];
    if (line.tokens.size() != n)
      throw ParseError("row has " + std::to_string(line.tokens.size()) + " entries, expected " +
                           std::to_string(n),
                       line.number);
    std::vector<int> row;
    for (const auto& tok : line.tokens) {
      if (tok != "0" && tok != "1") throw ParseError("matrix entry '" + tok + "' is not 0/1", line.number);
      row.push_back(tok == "1");
    }
    rows.push_back(std::move(row));
  }
  try {
    return BinaryRelation(names, rows);
  } catch (const ArgumentError& e) {
    throw ParseError(e.what(), lines[begin].number);
  }
}

}  // namespace detail

BinaryRelation parse_relation(std::string_view text) {
  auto lines = detail::content_lines(text);
  return detail::parse_relation_lines(lines, 0, lines.size());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BinaryRelation read_relation_file(const std::string& path) {
  try {
    return parse_relation(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string format_relation(const BinaryRelation& r) {
  std::ostringstream out;
  for (std::size_t i = 0; i < r.size(); ++i) out << (i ? " " : "") << r.name(i);
  out << '\n';
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < r.size(); ++j) out << (j ? " " : "") << (r.at(i, j) ? 1 : 0);
    out << '\n';
  }
  return out.str();
}

}  // namespace relknot

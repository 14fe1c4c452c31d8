#pragma once

// Coxeter matrices, the geometric representation, root systems and elements.
//
// Roots are stored in the basis of simple roots. Positive roots get indices
// 0..N-1 with the simple roots first; the negative of root p is p+N. Every
// group element is kept as the permutation it induces on these 2N indices.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coxmin/error.hpp"
#include "coxmin/linalg.hpp"
#include "coxmin/scalar.hpp"

namespace coxmin {

using Perm = std::vector<std::uint16_t>;

inline Perm compose(const Perm& a, const Perm& b) {  // a after b
  Perm r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = a[b[i]];
  return r;
}

inline Perm invert(const Perm& a) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[a[i]] = static_cast<std::uint16_t>(i);
  return r;
}

inline Perm identity_perm(std::size_t n) {
  Perm r(n);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

struct CoxeterMatrix {
  std::size_t rank = 0;
  std::vector<std::vector<unsigned>> m;
  std::string name;  // empty for anonymous matrices

  unsigned operator()(std::size_t i, std::size_t j) const { return m[i][j]; }

  void validate() const {
    if (m.size() != rank) fail(ErrorKind::InvalidInput, "matrix size does not match rank");
    for (std::size_t i = 0; i < rank; ++i) {
      if (m[i].size() != rank) fail(ErrorKind::InvalidInput, "matrix is not square");
      if (m[i][i] != 1) fail(ErrorKind::InvalidInput, "diagonal entries must be 1");
      for (std::size_t j = 0; j < rank; ++j) {
        if (i == j) continue;
        if (m[i][j] < 2) fail(ErrorKind::InvalidInput, "off-diagonal entries must be >= 2");
        if (m[i][j] != m[j][i]) fail(ErrorKind::InvalidInput, "matrix is not symmetric");
      }
    }
  }

  unsigned level() const {
    unsigned l = 1;
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j)
        if (i != j) l = std::lcm(l, m[i][j]);
    return l;
  }

  /// Connected components of the Coxeter graph, each sorted.
  std::vector<std::vector<std::size_t>> components() const {
    std::vector<int> comp(rank, -1);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t s = 0; s < rank; ++s) {
      if (comp[s] >= 0) continue;
      std::vector<std::size_t> stack{s}, members;
      comp[s] = static_cast<int>(out.size());
      while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        members.push_back(v);
        for (std::size_t u = 0; u < rank; ++u)
          if (u != v && m[v][u] > 2 && comp[u] < 0) {
            comp[u] = comp[s];
            stack.push_back(u);
          }
      }
      std::sort(members.begin(), members.end());
      out.push_back(std::move(members));
    }
    return out;
  }

  bool irreducible() const { return components().size() <= 1; }
};

namespace detail {

inline CoxeterMatrix blank_matrix(std::size_t n) {
  CoxeterMatrix c;
  c.rank = n;
  c.m.assign(n, std::vector<unsigned>(n, 2));
  for (std::size_t i = 0; i < n; ++i) c.m[i][i] = 1;
  return c;
}

inline void edge(CoxeterMatrix& c, std::size_t i, std::size_t j, unsigned v) {
  c.m[i][j] = v;
  c.m[j][i] = v;
}

inline CoxeterMatrix irreducible_type(char family, unsigned n, unsigned param) {
  auto c = blank_matrix(n);
  switch (family) {
    case 'A':
      if (n < 1) break;
      for (unsigned i = 0; i + 1 < n; ++i) edge(c, i, i + 1, 3);
      return c;
    case 'B':
    case 'C':
      if (n < 2) break;
      for (unsigned i = 0; i + 1 < n; ++i) edge(c, i, i + 1, 3);
      edge(c, n - 2, n - 1, 4);
      return c;
    case 'D':
      if (n < 4) break;
      for (unsigned i = 0; i + 2 < n; ++i) edge(c, i, i + 1, 3);
      edge(c, n - 3, n - 1, 3);
      return c;
    case 'E':
      if (n < 6 || n > 8) break;
      // Bourbaki labels: 1-3-4-5-..., with 2 attached to 4.
      edge(c, 0, 2, 3);
      edge(c, 1, 3, 3);
      for (unsigned i = 2; i + 1 < n; ++i) edge(c, i, i + 1, 3);
      return c;
    case 'F':
      if (n != 4) break;
      edge(c, 0, 1, 3);
      edge(c, 1, 2, 4);
      edge(c, 2, 3, 3);
      return c;
    case 'G':
      if (n != 2) break;
      edge(c, 0, 1, 6);
      return c;
    case 'H':
      if (n != 3 && n != 4) break;
      edge(c, 0, 1, 5);
      for (unsigned i = 1; i + 1 < n; ++i) edge(c, i, i + 1, 3);
      return c;
    case 'I':
      if (n != 2 || param < 2) break;
      edge(c, 0, 1, param);
      return c;
    default:
      break;
  }
  fail(ErrorKind::InvalidInput, std::string("unknown Coxeter type ") + family + std::to_string(n));
}

}  // namespace detail

/// Block-diagonal sum.
inline CoxeterMatrix product(const CoxeterMatrix& a, const CoxeterMatrix& b) {
  auto c = detail::blank_matrix(a.rank + b.rank);
  for (std::size_t i = 0; i < a.rank; ++i)
    for (std::size_t j = 0; j < a.rank; ++j) c.m[i][j] = a.m[i][j];
  for (std::size_t i = 0; i < b.rank; ++i)
    for (std::size_t j = 0; j < b.rank; ++j) c.m[a.rank + i][a.rank + j] = b.m[i][j];
  c.name = a.name + "x" + b.name;
  return c;
}

/// Parses names like "A3", "B4", "I2(7)", "H3", "A1xA1" (factors joined by x).
inline CoxeterMatrix parse_type(const std::string& spec) {
  if (spec.empty()) fail(ErrorKind::InvalidInput, "empty type string");
  static const std::regex one(R"(([ABCDEFGHI])([0-9]+)(?:\(([0-9]+)\))?)");
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : spec) {
    if (ch == 'x' || ch == '*') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  std::optional<CoxeterMatrix> out;
  for (const auto& p : parts) {
    std::smatch mt;
    if (!std::regex_match(p, mt, one)) fail(ErrorKind::InvalidInput, "cannot parse type '" + p + "'");
    const char fam = mt[1].str()[0];
    const unsigned n = static_cast<unsigned>(std::stoul(mt[2].str()));
    unsigned param = 0;
    if (mt[3].matched) param = static_cast<unsigned>(std::stoul(mt[3].str()));
    if (fam == 'I' && !mt[3].matched) fail(ErrorKind::InvalidInput, "I2 needs a parameter, e.g. I2(5)");
    if (fam != 'I' && mt[3].matched) fail(ErrorKind::InvalidInput, "unexpected parameter in '" + p + "'");
    if (n > 64) fail(ErrorKind::InvalidInput, "rank too large in '" + p + "'");
    auto c = detail::irreducible_type(fam, n, param);
    c.name = p;
    out = out ? product(*out, c) : c;
  }
  out->name = spec;
  return *out;
}

inline std::vector<std::vector<unsigned>> all_twist_perms(const CoxeterMatrix& m);

/// A permutation of the simple reflections preserving the matrix.
struct DiagramTwist {
  std::vector<std::size_t> perm;  // i -> perm[i]
  unsigned order = 1;

  static DiagramTwist identity(std::size_t n) {
    DiagramTwist d;
    d.perm.resize(n);
    std::iota(d.perm.begin(), d.perm.end(), 0);
    return d;
  }

  bool is_identity() const { return order == 1; }

  std::string label() const {
    if (is_identity()) return "id";
    std::string s;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(perm[i] + 1);
    }
    return s;
  }
};

inline DiagramTwist make_twist(const CoxeterMatrix& cm, std::vector<std::size_t> perm) {
  const std::size_t n = cm.rank;
  if (perm.size() != n) fail(ErrorKind::InvalidInput, "twist permutation has wrong size");
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    if (p >= n || seen[p]) fail(ErrorKind::InvalidInput, "twist is not a permutation");
    seen[p] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (cm.m[perm[i]][perm[j]] != cm.m[i][j])
        fail(ErrorKind::InvalidInput, "twist does not preserve the Coxeter matrix");
  DiagramTwist d;
  d.perm = perm;
  std::vector<std::size_t> cur = perm;
  d.order = 1;
  auto is_id = [](const std::vector<std::size_t>& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] != i) return false;
    return true;
  };
  while (!is_id(cur)) {
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = perm[cur[i]];
    cur = std::move(next);
    ++d.order;
  }
  return d;
}

/// All matrix automorphisms, identity first, the rest in lexicographic order.
inline std::vector<DiagramTwist> enumerate_twists(const CoxeterMatrix& cm) {
  const std::size_t n = cm.rank;
  std::vector<std::vector<std::size_t>> found;
  std::vector<std::size_t> perm(n);
  std::vector<bool> used(n, false);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      found.push_back(perm);
      return;
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c]) continue;
      bool ok = cm.m[c][c] == cm.m[i][i];
      for (std::size_t j = 0; ok && j < i; ++j) ok = cm.m[c][perm[j]] == cm.m[i][j];
      if (!ok) continue;
      used[c] = true;
      perm[i] = c;
      rec(i + 1);
      used[c] = false;
    }
  };
  rec(0);
  std::sort(found.begin(), found.end());
  std::vector<DiagramTwist> out;
  for (const auto& p : found) out.push_back(make_twist(cm, p));
  std::stable_sort(out.begin(), out.end(),
                   [](const DiagramTwist& a, const DiagramTwist& b) { return a.is_identity() && !b.is_identity(); });
  return out;
}

/// "id", "flip", or a 1-based comma list such as "3,2,1". "flip" is the
/// reversal of the node order when that preserves the matrix, otherwise the
/// first nontrivial involution.
inline DiagramTwist parse_twist(const CoxeterMatrix& cm, const std::string& spec) {
  const std::size_t n = cm.rank;
  if (spec.empty() || spec == "id") return DiagramTwist::identity(n);
  if (spec == "flip") {
    std::vector<std::size_t> rev(n);
    for (std::size_t i = 0; i < n; ++i) rev[i] = n - 1 - i;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j) ok = cm.m[rev[i]][rev[j]] == cm.m[i][j];
    if (ok && n > 1) return make_twist(cm, rev);
    for (const auto& t : enumerate_twists(cm))
      if (t.order == 2) return t;
    fail(ErrorKind::InvalidInput, "type " + cm.name + " has no nontrivial twist");
  }
  std::vector<std::size_t> perm;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      const long v = std::stol(tok);
      if (v < 1) throw std::invalid_argument("index");
      perm.push_back(static_cast<std::size_t>(v - 1));
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidInput, "cannot parse twist '" + spec + "'");
    }
  }
  return make_twist(cm, perm);
}

inline std::string vec_key(const Vec& v) {
  std::string k;
  for (const auto& x : v) {
    k += x.key();
    k += ';';
  }
  return k;
}

/// The root system of the geometric representation, with exact coordinates.
class RootSystem {
 public:
  static constexpr std::size_t kMaxRoots = 60000;

  RootSystem(CoxeterMatrix matrix, unsigned level_hint = 1) : matrix_(std::move(matrix)) {
    matrix_.validate();
    n_ = matrix_.rank;
    field_ = Field::get(std::lcm(matrix_.level(), std::max(1u, level_hint)));
    build_form();
    check_positive_definite();
    build_roots();
    build_tables();
  }

  const CoxeterMatrix& matrix() const { return matrix_; }
  std::size_t rank() const { return n_; }
  std::size_t num_positive() const { return npos_; }
  std::size_t num_roots() const { return 2 * npos_; }
  const Field* field() const { return field_; }

  const Mat& gram() const { return gram_; }
  const Vec& root(std::size_t idx) const { return roots_[idx]; }
  /// gram * root, so <root, v> = dot(dual(root), v).
  const Vec& dual(std::size_t idx) const { return duals_[idx]; }

  bool is_positive(std::size_t idx) const { return idx < npos_; }
  std::size_t negate(std::size_t idx) const { return idx < npos_ ? idx + npos_ : idx - npos_; }
  std::size_t positive_part(std::size_t idx) const { return idx < npos_ ? idx : idx - npos_; }

  const Perm& simple_reflection(std::size_t i) const { return refl_[i]; }
  /// Root permutation of the reflection in the positive root p.
  const Perm& reflection(std::size_t p) const { return root_refl_[p]; }

  std::optional<std::size_t> find_root(const Vec& v) const {
    auto it = index_.find(vec_key(v));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Height-order parent data: root p = s_{parent_gen(p)}(root parent(p)) for
  /// non-simple positive p.
  std::size_t parent(std::size_t p) const { return parent_[p]; }
  std::size_t parent_gen(std::size_t p) const { return parent_gen_[p]; }

  Scalar inner(const Vec& a, const Vec& b) const { return dot(a, mat_vec(gram_, b)); }
  Scalar pair(std::size_t root_idx, const Vec& v) const { return dot(duals_[root_idx], v); }

  /// Apply a simple reflection to an arbitrary vector (simple-root coordinates).
  Vec reflect(std::size_t i, const Vec& v) const {
    Vec r(v);
    Scalar s;
    for (std::size_t j = 0; j < n_; ++j)
      if (!v[j].is_zero()) s += gram2_[i][j] * v[j];
    r[i] -= s;
    return r;
  }

 private:
  void build_form() {
    gram_ = zero_matrix(n_, n_);
    gram2_ = zero_matrix(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        if (i == j) {
          gram2_[i][j] = Scalar(field_, mpq_class(2));
        } else {
          const unsigned mij = matrix_.m[i][j];
          gram2_[i][j] = -field_->two_cos_pi(mpq_class(1, mij));
        }
        gram_[i][j] = gram2_[i][j] * Scalar(mpq_class(1, 2));
      }
  }

  void check_positive_definite() const {
    Mat a = gram_;
    for (std::size_t k = 0; k < n_; ++k) {
      if (a[k][k].sign() <= 0)
        fail(ErrorKind::NotFinite, "bilinear form of " + matrix_.name + " is not positive definite");
      const Scalar inv = a[k][k].inverse();
      for (std::size_t i = k + 1; i < n_; ++i) {
        if (a[i][k].is_zero()) continue;
        const Scalar f = a[i][k] * inv;
        for (std::size_t j = k; j < n_; ++j) a[i][j] -= f * a[k][j];
      }
    }
  }

  void build_roots() {
    std::vector<Vec> pos;
    std::vector<std::size_t> par, pgen;
    std::unordered_map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < n_; ++i) {
      Vec e(n_);
      e[i] = Scalar(field_, mpq_class(1));
      idx.emplace(vec_key(e), pos.size());
      pos.push_back(std::move(e));
      par.push_back(i);
      pgen.push_back(i);
    }
    for (std::size_t head = 0; head < pos.size(); ++head) {
      for (std::size_t i = 0; i < n_; ++i) {
        if (head == i) continue;
        Vec r = reflect(i, pos[head]);
        const std::string k = vec_key(r);
        if (idx.count(k)) continue;
        idx.emplace(k, pos.size());
        pos.push_back(std::move(r));
        par.push_back(head);
        pgen.push_back(i);
        if (2 * pos.size() > kMaxRoots) fail(ErrorKind::NotFinite, "root orbit exceeds bound");
      }
    }
    npos_ = pos.size();
    roots_ = pos;
    for (const auto& r : pos) roots_.push_back(vec_scale(r, Scalar(-1)));
    for (std::size_t p = 0; p < roots_.size(); ++p) index_.emplace(vec_key(roots_[p]), p);
    parent_ = par;
    parent_gen_ = pgen;
    duals_.reserve(roots_.size());
    for (const auto& r : roots_) duals_.push_back(mat_vec(gram_, r));
  }

  void build_tables() {
    const std::size_t total = roots_.size();
    if (total >= 65535) fail(ErrorKind::TooLarge, "root system too large for 16-bit indices");
    refl_.assign(n_, Perm(total));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t p = 0; p < total; ++p) {
        auto q = find_root(reflect(i, roots_[p]));
        if (!q) fail(ErrorKind::NotFinite, "root set not closed under reflection");
        refl_[i][p] = static_cast<std::uint16_t>(*q);
      }
    root_refl_.resize(npos_);
    for (std::size_t p = 0; p < npos_; ++p) {
      if (p < n_) {
        root_refl_[p] = refl_[p];
      } else {
        const Perm& s = refl_[parent_gen_[p]];
        root_refl_[p] = compose(s, compose(root_refl_[parent_[p]], s));
      }
    }
  }

  CoxeterMatrix matrix_;
  std::size_t n_ = 0;
  std::size_t npos_ = 0;
  const Field* field_ = nullptr;
  Mat gram_, gram2_;
  std::vector<Vec> roots_, duals_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> parent_, parent_gen_;
  std::vector<Perm> refl_, root_refl_;
};

/// delta^twist composed with a Coxeter group element. `perm` is the full
/// action on roots, twist included.
struct Element {
  unsigned twist = 0;
  Perm perm;

  friend bool operator==(const Element& a, const Element& b) {
    return a.twist == b.twist && a.perm == b.perm;
  }
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }
  friend bool operator<(const Element& a, const Element& b) {
    return a.twist != b.twist ? a.twist < b.twist : a.perm < b.perm;
  }
};

/// Bitmask of simple indices.
using IndexSet = std::uint64_t;

inline bool in_set(IndexSet s, std::size_t i) { return (s >> i) & 1u; }
inline IndexSet singleton(std::size_t i) { return IndexSet(1) << i; }
inline std::vector<std::size_t> set_members(IndexSet s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; s; ++i, s >>= 1)
    if (s & 1u) out.push_back(i);
  return out;
}
inline IndexSet full_set(std::size_t n) { return n >= 64 ? ~IndexSet(0) : (IndexSet(1) << n) - 1; }

/// A root system together with a diagram twist: the group <delta> x| W.
class CoxeterSystem {
 public:
  CoxeterSystem(std::shared_ptr<const RootSystem> rs, DiagramTwist delta)
      : rs_(std::move(rs)), delta_(std::move(delta)) {
    if (delta_.perm.empty()) delta_ = DiagramTwist::identity(rs_->rank());
    if (rs_->rank() > 63) fail(ErrorKind::InvalidInput, "rank above 63 is not supported");
    const std::size_t total = rs_->num_roots();
    // delta maps the root with coordinates c to the root with coordinates c permuted.
    Perm d(total);
    for (std::size_t p = 0; p < total; ++p) {
      const Vec& r = rs_->root(p);
      Vec img(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) img[delta_.perm[i]] = r[i];
      auto q = rs_->find_root(img);
      if (!q) fail(ErrorKind::InvalidInput, "twist does not preserve the root system");
      d[p] = static_cast<std::uint16_t>(*q);
    }
    delta_pow_.push_back(identity_perm(total));
    for (unsigned k = 1; k < delta_.order; ++k) delta_pow_.push_back(compose(d, delta_pow_.back()));
    for (unsigned k = 0; k < delta_.order; ++k) {
      std::vector<std::size_t> sp(rank());
      for (std::size_t i = 0; i < rank(); ++i) sp[i] = delta_pow_[k][i];
      delta_simple_.push_back(std::move(sp));
    }
  }

  CoxeterSystem(const CoxeterMatrix& m, const DiagramTwist& delta)
      : CoxeterSystem(std::make_shared<const RootSystem>(m), delta) {}
  explicit CoxeterSystem(const CoxeterMatrix& m) : CoxeterSystem(m, DiagramTwist::identity(m.rank)) {}

  const RootSystem& roots() const { return *rs_; }
  std::shared_ptr<const RootSystem> roots_ptr() const { return rs_; }
  const DiagramTwist& twist() const { return delta_; }
  unsigned twist_order() const { return delta_.order; }
  std::size_t rank() const { return rs_->rank(); }
  std::size_t npos() const { return rs_->num_positive(); }
  std::size_t nroots() const { return rs_->num_roots(); }

  /// delta^k(i) on simple indices.
  std::size_t twist_index(unsigned k, std::size_t i) const { return delta_simple_[k % delta_.order][i]; }
  const Perm& twist_perm(unsigned k) const { return delta_pow_[k % delta_.order]; }

  IndexSet twist_set(unsigned k, IndexSet j) const {
    IndexSet r = 0;
    for (auto i : set_members(j)) r |= singleton(twist_index(k, i));
    return r;
  }

  Element identity() const { return Element{0, identity_perm(nroots())}; }
  Element simple(std::size_t i) const { return Element{0, rs_->simple_reflection(i)}; }
  Element twist_element(unsigned k) const { return Element{k % delta_.order, twist_perm(k)}; }
  Element reflection(std::size_t p) const { return Element{0, rs_->reflection(rs_->positive_part(p))}; }

  Element multiply(const Element& a, const Element& b) const {
    return Element{(a.twist + b.twist) % delta_.order, compose(a.perm, b.perm)};
  }
  Element inverse(const Element& a) const {
    return Element{(delta_.order - a.twist % delta_.order) % delta_.order, invert(a.perm)};
  }
  Element left_simple(std::size_t i, const Element& a) const {
    Element r = a;
    const Perm& s = rs_->simple_reflection(i);
    for (auto& x : r.perm) x = s[x];
    return r;
  }
  Element right_simple(const Element& a, std::size_t i) const {
    Element r = a;
    const Perm& s = rs_->simple_reflection(i);
    for (std::size_t p = 0; p < r.perm.size(); ++p) r.perm[p] = a.perm[s[p]];
    return r;
  }
  Element conjugate_simple(const Element& a, std::size_t i) const { return right_simple(left_simple(i, a), i); }
  /// x^-1 a x
  Element conjugate(const Element& a, const Element& x) const { return multiply(inverse(x), multiply(a, x)); }

  Element power(const Element& a, unsigned long k) const {
    Element r = identity(), base = a;
    while (k) {
      if (k & 1u) r = multiply(r, base);
      base = multiply(base, base);
      k >>= 1;
    }
    return r;
  }

  std::size_t length(const Element& a) const {
    std::size_t l = 0;
    const std::size_t n = npos();
    for (std::size_t p = 0; p < n; ++p) l += a.perm[p] >= n;
    return l;
  }

  bool sends_negative(const Element& a, std::size_t root) const { return a.perm[root] >= npos(); }

  /// The untwisted part w of delta^k w.
  Element body(const Element& a) const {
    if (a.twist == 0) return a;
    const Perm& dinv = twist_perm(delta_.order - a.twist);
    return Element{0, compose(dinv, a.perm)};
  }

  Element with_twist(unsigned k, const Element& w) const {
    return Element{k % delta_.order, compose(twist_perm(k), w.perm)};
  }

  /// delta^k w delta^-k for untwisted w.
  Element twist_conjugate(unsigned k, const Element& w) const {
    if (k % delta_.order == 0) return w;
    return Element{w.twist, compose(twist_perm(k), compose(w.perm, twist_perm(delta_.order - k % delta_.order)))};
  }

  Element from_word(const std::vector<std::size_t>& word, unsigned k = 0) const {
    Element e = twist_element(k);
    for (auto i : word) {
      if (i >= rank()) fail(ErrorKind::InvalidInput, "generator index out of range");
      e = right_simple(e, i);
    }
    return e;
  }

  /// Right descent set of the body: i with l(w s_i) < l(w).
  IndexSet right_descents(const Element& a) const {
    IndexSet d = 0;
    for (std::size_t i = 0; i < rank(); ++i)
      if (a.perm[i] >= npos()) d |= singleton(i);
    return d;
  }
  /// Left descent set: i with l(s_i a) < l(a).
  IndexSet left_descents(const Element& a) const {
    IndexSet d = 0;
    const Perm inv = invert(a.perm);
    for (std::size_t i = 0; i < rank(); ++i)
      if (inv[i] >= npos()) d |= singleton(i);
    return d;
  }

  /// A reduced word of the body, read left to right.
  std::vector<std::size_t> reduced_word(const Element& a) const {
    Element w = body(a);
    std::vector<std::size_t> word;
    for (;;) {
      std::size_t i = 0;
      while (i < rank() && w.perm[i] < npos()) ++i;
      if (i == rank()) break;
      word.push_back(i);
      w = right_simple(w, i);
    }
    std::reverse(word.begin(), word.end());
    return word;
  }

  /// Matrix in the simple-root basis; column i is the image of alpha_i.
  Mat matrix_of(const Element& a) const {
    const std::size_t n = rank();
    Mat m = zero_matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec& col = rs_->root(a.perm[i]);
      for (std::size_t r = 0; r < n; ++r) m[r][i] = col[r];
    }
    return m;
  }

  Vec apply(const Element& a, const Vec& v) const { return mat_vec(matrix_of(a), v); }

  /// Longest element of the standard parabolic W_J.
  Element parabolic_max(IndexSet j) const {
    Element u = identity();
    for (;;) {
      bool moved = false;
      for (auto i : set_members(j))
        if (u.perm[i] < npos()) {
          u = right_simple(u, i);
          moved = true;
        }
      if (!moved) break;
    }
    return u;
  }

  Element longest() const { return parabolic_max(full_set(rank())); }

  struct CosetDecomposition {
    Element left;    // u' in W_J
    Element middle;  // minimal (W_J, W_J) double coset representative
    Element right;   // u'' in W_J
  };

  /// a = left * middle * right with additive lengths.
  CosetDecomposition coset_decompose(const Element& a, IndexSet j) const {
    Element cur = a, left = identity(), right = identity();
    for (bool moved = true; moved;) {
      moved = false;
      for (auto i : set_members(j)) {
        const Element l = left_simple(i, cur);
        if (length(l) < length(cur)) {
          cur = l;
          left = right_simple(left, i);
          moved = true;
        }
        const Element r = right_simple(cur, i);
        if (length(r) < length(cur)) {
          cur = r;
          right = left_simple(i, right);
          moved = true;
        }
      }
    }
    return {left, cur, right};
  }

  /// Does the element normalise J pointwise as a set: a(alpha_j) simple in J for j in J.
  bool maps_set_to(const Element& a, IndexSet j, IndexSet target) const {
    for (auto i : set_members(j)) {
      const std::size_t img = a.perm[i];
      if (img >= rank() || !in_set(target, img)) return false;
    }
    return true;
  }

  /// Order of the standard parabolic W_J, via chains of minimal coset
  /// representatives. No element of W_J is enumerated beyond one coset level.
  std::uint64_t parabolic_order(IndexSet j) const {
    auto members = set_members(j);
    if (members.empty()) return 1;
    // Pick the generator whose removal gives the smallest quotient.
    std::uint64_t best = 0;
    std::size_t best_i = members.front();
    for (auto i : members) {
      const auto q = quotient_size(j, j & ~singleton(i), best);
      if (q && (best == 0 || *q < best)) {
        best = *q;
        best_i = i;
      }
    }
    return best * parabolic_order(j & ~singleton(best_i));
  }

  std::uint64_t group_order() const { return parabolic_order(full_set(rank())); }

  /// |W_J / W_K| for K subset of J by enumerating minimal coset
  /// representatives; gives up (nullopt) once `cap` is exceeded (0 = no cap).
  std::optional<std::uint64_t> quotient_size(IndexSet j, IndexSet k, std::uint64_t cap) const {
    auto jm = set_members(j), km = set_members(k);
    auto is_min = [&](const Element& w) {
      for (auto i : km)
        if (w.perm[i] >= npos()) return false;
      return true;
    };
    auto key = [&](const Element& w) {
      std::string s;
      s.reserve(2 * rank());
      for (std::size_t i = 0; i < rank(); ++i) {
        s += static_cast<char>(w.perm[i] & 0xff);
        s += static_cast<char>(w.perm[i] >> 8);
      }
      return s;
    };
    std::vector<Element> queue{identity()};
    std::set<std::string> seen{key(queue[0])};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (auto i : jm) {
        Element nxt = left_simple(i, queue[head]);
        if (length(nxt) <= length(queue[head]) || !is_min(nxt)) continue;
        if (!seen.insert(key(nxt)).second) continue;
        queue.push_back(std::move(nxt));
        if (cap && queue.size() > cap) return std::nullopt;
      }
    }
    return queue.size();
  }

 private:
  std::shared_ptr<const RootSystem> rs_;
  DiagramTwist delta_;
  std::vector<Perm> delta_pow_;
  std::vector<std::vector<std::size_t>> delta_simple_;
};

/// A Weyl chamber A, stored as the element x_A with x_A(C) = A.
struct Chamber {
  Element x;

  static Chamber fundamental(const CoxeterSystem& sys) { return Chamber{sys.identity()}; }
};

/// Sign of root `idx` on chamber A: +1 when x_A^-1(alpha) is positive.
inline int chamber_sign(const CoxeterSystem& sys, const Chamber& a, const Perm& xinv, std::size_t idx) {
  (void)a;
  return xinv[idx] < sys.npos() ? 1 : -1;
}

/// Sign vector over the positive roots.
inline std::vector<int> sign_vector(const CoxeterSystem& sys, const Chamber& a) {
  const Perm inv = invert(a.x.perm);
  std::vector<int> s(sys.npos());
  for (std::size_t p = 0; p < sys.npos(); ++p) s[p] = inv[p] < sys.npos() ? 1 : -1;
  return s;
}

inline std::vector<std::size_t> separating_set(const CoxeterSystem& sys, const Chamber& a, const Chamber& b) {
  const auto sa = sign_vector(sys, a), sb = sign_vector(sys, b);
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < sa.size(); ++p)
    if (sa[p] != sb[p]) out.push_back(p);
  return out;
}

/// w~_A = x_A^-1 w~ x_A
inline Element conjugate_by_chamber(const CoxeterSystem& sys, const Element& w, const Chamber& a) {
  return sys.conjugate(w, a.x);
}

/// The chamber w~(A).
inline Chamber image_chamber(const CoxeterSystem& sys, const Element& w, const Chamber& a) {
  const Element wx = sys.multiply(w, a.x);
  return Chamber{sys.multiply(wx, sys.twist_element(sys.twist_order() - w.twist % sys.twist_order()))};
}

/// Neighbour of A across its i-th wall: x_A s_i.
inline Chamber adjacent(const CoxeterSystem& sys, const Chamber& a, std::size_t i) {
  return Chamber{sys.right_simple(a.x, i)};
}

/// The positive root of the i-th wall of A.
inline std::size_t wall_root(const CoxeterSystem& sys, const Chamber& a, std::size_t i) {
  return sys.roots().positive_part(a.x.perm[i]);
}

/// Which wall of A (if any) lies on the hyperplane of root idx.
inline std::optional<std::size_t> wall_index(const CoxeterSystem& sys, const Chamber& a, std::size_t idx) {
  const Perm inv = invert(a.x.perm);
  const std::size_t pre = sys.roots().positive_part(inv[idx]);
  if (pre < sys.rank()) return pre;
  return std::nullopt;
}

}  // namespace coxmin

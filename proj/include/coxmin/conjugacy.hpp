#pragma once

// Twisted conjugacy classes of W delta^k and the reduction relations between
// their elements: ->, its equal-length version, and strong conjugacy.
//
// Everything here works on a GroupTable. A twisted element delta^k w is the
// body index of w with k fixed by the caller.

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "coxmin/eigen.hpp"
#include "coxmin/group_table.hpp"

namespace coxmin {

using Index = GroupTable::Index;

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), blocks_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    --blocks_;
    return true;
  }
  std::size_t blocks() const { return blocks_; }

 private:
  std::vector<std::size_t> parent_;
  std::size_t blocks_;
};

/// The coset examined for a system: W delta (W itself when delta = 1).
inline unsigned default_coset(const CoxeterSystem& sys) { return 1 % sys.twist_order(); }

struct ClassRecord {
  std::size_t id = 0;
  unsigned twist = 0;
  std::vector<Index> members;  // ascending, so members.front() has minimal length
  std::vector<Index> omin;
  std::size_t min_length = 0;
  bool elliptic = false;
  bool quasi_elliptic = false;

  Index representative() const { return omin.front(); }
  std::size_t size() const { return members.size(); }
};

struct ClassTable {
  unsigned twist = 0;
  std::vector<ClassRecord> classes;
  std::vector<std::uint32_t> class_of;  // by body index

  const ClassRecord& of(Index g) const { return classes[class_of[g]]; }
};

/// delta^k-closure of J.
inline IndexSet twist_closure(const CoxeterSystem& sys, unsigned k, IndexSet j) {
  IndexSet s = j;
  for (unsigned r = 0; r < sys.twist_order(); ++r) s |= sys.twist_set(r * k, j);
  return s;
}

inline ClassTable enumerate_classes(const GroupTable& t, unsigned k) {
  const CoxeterSystem& sys = t.system();
  DisjointSets ds(t.size());
  for (Index g = 0; g < t.size(); ++g)
    for (std::size_t i = 0; i < t.rank(); ++i) ds.unite(g, t.conj_simple(k, g, i));
  ClassTable out;
  out.twist = k;
  out.class_of.assign(t.size(), 0);
  std::unordered_map<std::size_t, std::uint32_t> id;
  for (Index g = 0; g < t.size(); ++g) {
    const std::size_t r = ds.find(g);
    auto [it, fresh] = id.emplace(r, static_cast<std::uint32_t>(out.classes.size()));
    if (fresh) {
      ClassRecord rec;
      rec.id = out.classes.size();
      rec.twist = k;
      out.classes.push_back(rec);
    }
    out.class_of[g] = it->second;
    out.classes[it->second].members.push_back(g);
  }
  const IndexSet full = full_set(sys.rank());
  for (auto& c : out.classes) {
    c.min_length = t.length(c.members.front());
    for (auto g : c.members) {
      if (t.length(g) == c.min_length) c.omin.push_back(g);
      if (t.length(g) < c.min_length) fail(ErrorKind::TheoremViolation, "class members out of length order");
    }
    const Element rep = t.twisted_element(k, c.representative());
    c.elliptic = is_elliptic(sys, rep);
    c.quasi_elliptic = c.elliptic || is_quasi_elliptic(sys, rep);
    bool meets_parabolic = false;
    for (auto g : c.members)
      if (twist_closure(sys, k, t.support(g)) != full) {
        meets_parabolic = true;
        break;
      }
    if (sys.rank() > 0 && meets_parabolic == c.elliptic)
      fail(ErrorKind::TheoremViolation, "fixed-space and parabolic ellipticity criteria disagree");
  }
  return out;
}

struct ReductionStep {
  std::size_t gen = 0;
  int delta = 0;  // 0 or -2
  Index after = 0;
};

struct ReductionChain {
  Index start = 0;
  std::vector<ReductionStep> steps;
  Index end() const { return steps.empty() ? start : steps.back().after; }
};

/// Reach a minimal element by simple conjugations of non-increasing length.
/// When no neighbour is shorter, the equal-length plateau is searched for an
/// exit; the walk stops when the plateau has none.
inline ReductionChain arrow_reduce(const GroupTable& t, unsigned k, Index g, const ClassTable* classes = nullptr) {
  ReductionChain chain;
  chain.start = g;
  Index cur = g;
  for (;;) {
    bool moved = false;
    for (std::size_t i = 0; i < t.rank(); ++i) {
      const Index nxt = t.conj_simple(k, cur, i);
      if (t.length(nxt) < t.length(cur)) {
        chain.steps.push_back({i, static_cast<int>(t.length(nxt)) - static_cast<int>(t.length(cur)), nxt});
        cur = nxt;
        moved = true;
        break;
      }
    }
    if (moved) continue;
    // breadth-first over the plateau
    std::unordered_map<Index, std::pair<Index, std::size_t>> from{{cur, {cur, 0}}};
    std::deque<Index> queue{cur};
    std::optional<std::pair<Index, std::size_t>> exit;
    Index exit_from = cur;
    while (!queue.empty() && !exit) {
      const Index x = queue.front();
      queue.pop_front();
      for (std::size_t i = 0; i < t.rank(); ++i) {
        const Index y = t.conj_simple(k, x, i);
        if (t.length(y) < t.length(x)) {
          exit = {{y, i}};
          exit_from = x;
          break;
        }
        if (t.length(y) == t.length(x) && from.emplace(y, std::make_pair(x, i)).second) queue.push_back(y);
      }
    }
    if (!exit) break;
    std::vector<ReductionStep> path;
    for (Index x = exit_from; x != cur;) {
      auto [prev, i] = from.at(x);
      path.push_back({i, 0, x});
      x = prev;
    }
    std::reverse(path.begin(), path.end());
    for (auto& s : path) chain.steps.push_back(s);
    chain.steps.push_back({exit->second, -2, exit->first});
    cur = exit->first;
  }
  if (classes && t.length(cur) != classes->of(g).min_length)
    fail(ErrorKind::TheoremViolation, "reduction stopped above the minimal length of the class");
  return chain;
}

/// Blocks of a partition as sorted lists of elements.
using Partition = std::vector<std::vector<Index>>;

inline Partition blocks_of(const std::vector<Index>& elems, DisjointSets& ds) {
  std::unordered_map<std::size_t, std::size_t> slot;
  Partition out;
  for (std::size_t a = 0; a < elems.size(); ++a) {
    auto [it, fresh] = slot.emplace(ds.find(a), out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(elems[a]);
  }
  return out;
}

namespace detail {
inline std::unordered_map<Index, std::size_t> position_map(const std::vector<Index>& elems) {
  std::unordered_map<Index, std::size_t> pos;
  for (std::size_t a = 0; a < elems.size(); ++a) pos.emplace(elems[a], a);
  return pos;
}
}  // namespace detail

/// Components under equal-length simple conjugation.
inline Partition approx_partition(const GroupTable& t, unsigned k, const std::vector<Index>& elems) {
  const auto pos = detail::position_map(elems);
  DisjointSets ds(elems.size());
  for (std::size_t a = 0; a < elems.size(); ++a)
    for (std::size_t i = 0; i < t.rank(); ++i) {
      const Index y = t.conj_simple(k, elems[a], i);
      if (t.length(y) != t.length(elems[a])) continue;
      auto it = pos.find(y);
      if (it != pos.end()) ds.unite(a, it->second);
    }
  return blocks_of(elems, ds);
}

/// Elements y = g x~ g^-1 of the same length with l(g x~) = l(g) + l(x~) or
/// l(x~ g^-1) = l(g) + l(x~). Witnesses are grown one letter at a time and a
/// branch is dropped as soon as additivity fails. Witnesses may be limited
/// to a standard parabolic subgroup.
class StrongWitnessSearch {
 public:
  explicit StrongWitnessSearch(const GroupTable& t, std::optional<IndexSet> gens = std::nullopt)
      : t_(t), gens_(gens.value_or(full_set(t.rank()))), stamp_(t.size(), 0) {}

  template <class F>
  void for_each_pruned(unsigned k, Index x, F&& visit) {
    const CoxeterSystem& sys = t_.system();
    const unsigned dk = sys.twist_order() - k % sys.twist_order();
    const std::size_t lx = t_.length(x);
    // left growth: g -> s_i g, z = body of g x~, y = g x~ g^-1
    struct State {
      Index g, z, y;
    };
    for (int side = 0; side < 2; ++side) {
      bump();
      std::vector<State> layer{{t_.identity(), x, x}};
      stamp_[t_.identity()] = epoch_;
      while (!layer.empty()) {
        std::vector<State> next;
        for (const auto& s : layer) {
          if (t_.length(s.y) == lx) visit(s.y, s.g, side);
          for (std::size_t i = 0; i < t_.rank(); ++i) {
            if (!in_set(gens_, i)) continue;
            Index g2, z2;
            if (side == 0) {
              g2 = t_.left_mul(i, s.g);
              if (t_.length(g2) <= t_.length(s.g)) continue;
              z2 = t_.left_mul(sys.twist_index(dk, i), s.z);
            } else {
              g2 = t_.right_mul(s.g, i);  // g here is h = g^-1
              if (t_.length(g2) <= t_.length(s.g)) continue;
              z2 = t_.right_mul(s.z, i);
            }
            if (t_.length(z2) != t_.length(g2) + lx) continue;
            if (stamp_[g2] == epoch_) continue;
            stamp_[g2] = epoch_;
            next.push_back({g2, z2, t_.conj_simple(k, s.y, i)});
          }
        }
        layer = std::move(next);
      }
    }
  }

  /// Same relation by checking every g in W.
  template <class F>
  void for_each_exhaustive(unsigned k, Index x, F&& visit) {
    const CoxeterSystem& sys = t_.system();
    const unsigned dk = sys.twist_order() - k % sys.twist_order();
    const std::size_t lx = t_.length(x);
    for (Index g = 0; g < t_.size(); ++g) {
      if ((t_.support(g) & ~gens_) != 0) continue;
      const Index gi = t_.inverse(g);
      const Index y = t_.multiply(t_.multiply(t_.twist(dk, g), x), gi);
      if (t_.length(y) != lx) continue;
      const bool a = t_.length(t_.multiply(t_.twist(dk, g), x)) == t_.length(g) + lx;
      const bool b = t_.length(t_.multiply(x, gi)) == t_.length(g) + lx;
      if (a) visit(y, g, 0);
      if (b) visit(y, gi, 1);
    }
  }

  std::vector<Index> neighbours(unsigned k, Index x, bool pruned) {
    std::vector<Index> out;
    auto add = [&](Index y, Index, int) { out.push_back(y); };
    if (pruned)
      for_each_pruned(k, x, add);
    else
      for_each_exhaustive(k, x, add);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  void bump() {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }

  const GroupTable& t_;
  IndexSet gens_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

/// Components of the strong conjugacy graph on equal-length elements. The
/// equal-length simple conjugations are merged first since they are
/// elementary strong conjugations with a single-letter witness.
inline Partition strong_partition(const GroupTable& t, unsigned k, const std::vector<Index>& elems,
                                  bool pruned = true) {
  const auto pos = detail::position_map(elems);
  DisjointSets ds(elems.size());
  for (std::size_t a = 0; a < elems.size(); ++a)
    for (std::size_t i = 0; i < t.rank(); ++i) {
      auto it = pos.find(t.conj_simple(k, elems[a], i));
      if (it != pos.end()) ds.unite(a, it->second);
    }
  StrongWitnessSearch search(t);
  for (std::size_t a = 0; a < elems.size() && ds.blocks() > 1; ++a) {
    for (Index y : search.neighbours(k, elems[a], pruned)) {
      auto it = pos.find(y);
      if (it != pos.end()) ds.unite(a, it->second);
    }
  }
  return blocks_of(elems, ds);
}

struct PathGraphReport {
  std::size_t vertices = 0;    // #W_w
  std::size_t reached = 0;     // reachable from 1
  std::size_t centralizer = 0;
  std::size_t centralizer_reached = 0;
  bool surjective() const { return reached == vertices; }
  bool centralizer_ok() const { return centralizer_reached == centralizer; }
};

/// W_w = {x : l(x^-1 w x) = l(w)} with edges x -> x s_i inside W_w.
inline PathGraphReport path_graph(const GroupTable& t, unsigned k, Index w) {
  PathGraphReport r;
  const std::size_t lw = t.length(w);
  std::vector<Index> conj(t.size());
  std::vector<char> member(t.size(), 0), seen(t.size(), 0);
  // x^-1 w x for every x, by a spanning tree over right multiplication
  std::vector<char> have(t.size(), 0);
  std::deque<Index> q{t.identity()};
  conj[t.identity()] = w;
  have[t.identity()] = 1;
  while (!q.empty()) {
    const Index x = q.front();
    q.pop_front();
    for (std::size_t i = 0; i < t.rank(); ++i) {
      const Index y = t.right_mul(x, i);
      if (have[y]) continue;
      have[y] = 1;
      conj[y] = t.conj_simple(k, conj[x], i);
      q.push_back(y);
    }
  }
  for (Index x = 0; x < t.size(); ++x) {
    member[x] = t.length(conj[x]) == lw;
    r.vertices += member[x];
    r.centralizer += conj[x] == w;
  }
  q.push_back(t.identity());
  seen[t.identity()] = 1;
  while (!q.empty()) {
    const Index x = q.front();
    q.pop_front();
    ++r.reached;
    if (conj[x] == w) ++r.centralizer_reached;
    for (std::size_t i = 0; i < t.rank(); ++i) {
      const Index y = t.right_mul(x, i);
      if (member[y] && !seen[y]) {
        seen[y] = 1;
        q.push_back(y);
      }
    }
  }
  return r;
}

/// Elements reachable from x by ->, i.e. simple conjugations that never
/// increase the length, using the generators in `gens`.
inline std::vector<char> arrow_closure(const GroupTable& t, unsigned k, Index x, IndexSet gens) {
  std::vector<char> seen(t.size(), 0);
  std::deque<Index> q{x};
  seen[x] = 1;
  while (!q.empty()) {
    const Index a = q.front();
    q.pop_front();
    for (auto i : set_members(gens)) {
      const Index b = t.conj_simple(k, a, i);
      if (t.length(b) <= t.length(a) && !seen[b]) {
        seen[b] = 1;
        q.push_back(b);
      }
    }
  }
  return seen;
}

/// Component of x in the strong conjugacy graph.
inline std::vector<char> strong_closure(const GroupTable& t, unsigned k, Index x, IndexSet gens) {
  StrongWitnessSearch search(t, gens);
  std::vector<char> seen(t.size(), 0);
  std::deque<Index> q{x};
  seen[x] = 1;
  while (!q.empty()) {
    const Index a = q.front();
    q.pop_front();
    for (Index b : search.neighbours(k, a, true))
      if (!seen[b]) {
        seen[b] = 1;
        q.push_back(b);
      }
  }
  return seen;
}

struct RelationFlags {
  bool arrow = false;
  bool approx = false;
  bool strong = false;
  friend bool operator==(const RelationFlags& a, const RelationFlags& b) {
    return a.arrow == b.arrow && a.approx == b.approx && a.strong == b.strong;
  }
};

inline RelationFlags relations_between(const GroupTable& t, unsigned k, Index x, Index y, IndexSet gens) {
  RelationFlags r;
  r.arrow = arrow_closure(t, k, x, gens)[y];
  r.approx = r.arrow && arrow_closure(t, k, y, gens)[x];
  r.strong = t.length(x) == t.length(y) && strong_closure(t, k, x, gens)[y];
  return r;
}

inline RelationFlags relations_between(const GroupTable& t, unsigned k, Index x, Index y) {
  return relations_between(t, k, x, y, full_set(t.rank()));
}

inline bool implies(const RelationFlags& a, const RelationFlags& b) {
  return (!a.arrow || b.arrow) && (!a.approx || b.approx) && (!a.strong || b.strong);
}

struct TransferReport {
  RelationFlags big_j;  // w' x versus w' y, conjugating by W_J only
  RelationFlags big;    // the same with all of W
  RelationFlags small;  // delta' x versus delta' y in <delta'> W_J
  /// The W_J-equivariant relations agree, and each relation in the small
  /// group persists in the whole group.
  bool holds() const { return big_j == small && implies(small, big); }
};

/// The parabolic subsystem on J twisted by conjugation with w', which must
/// send the simple roots of J to simple roots of J.
inline CoxeterSystem partial_system(const CoxeterSystem& sys, IndexSet j, const Element& wp) {
  const auto members = set_members(j);
  CoxeterMatrix sub;
  sub.rank = members.size();
  sub.m.assign(sub.rank, std::vector<unsigned>(sub.rank, 1));
  for (std::size_t a = 0; a < sub.rank; ++a)
    for (std::size_t b = 0; b < sub.rank; ++b) sub.m[a][b] = sys.roots().matrix()(members[a], members[b]);
  sub.name = "parabolic";
  std::vector<std::size_t> pi(sub.rank);
  for (std::size_t a = 0; a < sub.rank; ++a) {
    const std::size_t img = wp.perm[members[a]];
    const auto at = std::find(members.begin(), members.end(), img);
    if (at == members.end()) fail(ErrorKind::InvalidInput, "w' does not map the simple roots of J into J");
    pi[a] = static_cast<std::size_t>(at - members.begin());
  }
  return CoxeterSystem(sub, make_twist(sub, pi));
}

/// Compares w' x -> w' y (and the two-sided and strong versions) with
/// delta' x -> delta' y in <delta'> W_J.
inline TransferReport partial_conjugation_transfer(const GroupTable& big, IndexSet j, const Element& wp,
                                                   const Element& x, const Element& y) {
  const CoxeterSystem& sys = big.system();
  const CoxeterSystem sub = partial_system(sys, j, wp);
  const GroupTable small(sub);
  const auto members = set_members(j);
  auto to_sub = [&](const Element& e) {
    std::vector<std::size_t> word;
    for (auto i : sys.reduced_word(e)) {
      const auto at = std::find(members.begin(), members.end(), i);
      if (at == members.end()) fail(ErrorKind::InvalidInput, "element is not in W_J");
      word.push_back(static_cast<std::size_t>(at - members.begin()));
    }
    return small.index_of(sub.from_word(word));
  };
  TransferReport r;
  const unsigned kb = wp.twist;
  const Index bx = big.index_of(sys.multiply(wp, x)), by = big.index_of(sys.multiply(wp, y));
  r.big_j = relations_between(big, kb, bx, by, j);
  r.big = relations_between(big, kb, bx, by);
  const unsigned ks = default_coset(sub);
  r.small = relations_between(small, ks, to_sub(x), to_sub(y));
  return r;
}

}  // namespace coxmin

#include <gtest/gtest.h>

#include <map>
#include <queue>
#include <random>
#include <set>

#include "coxmin/coxeter.hpp"

using namespace coxmin;

namespace {

// Oracle: shortest word length by breadth-first search over words, with
// elements identified by their root permutation.
std::map<Perm, std::size_t> word_lengths(const CoxeterSystem& sys) {
  std::map<Perm, std::size_t> dist;
  std::queue<Element> q;
  q.push(sys.identity());
  dist[sys.identity().perm] = 0;
  while (!q.empty()) {
    Element e = q.front();
    q.pop();
    for (std::size_t i = 0; i < sys.rank(); ++i) {
      Element n = sys.right_simple(e, i);
      if (dist.emplace(n.perm, dist[e.perm] + 1).second) q.push(n);
    }
  }
  return dist;
}

Element random_element(const CoxeterSystem& sys, std::mt19937_64& rng, int steps = 30) {
  std::uniform_int_distribution<std::size_t> g(0, sys.rank() - 1);
  Element e = sys.identity();
  for (int k = 0; k < steps; ++k) e = sys.right_simple(e, g(rng));
  return e;
}

}  // namespace

TEST(BuildSystem, RootCounts) {
  struct Case { const char* type; std::size_t roots; };
  // positive root counts follow nh/2 with Coxeter numbers h
  for (auto c : {Case{"A1", 2}, Case{"A2", 6}, Case{"A1xA1", 4}, Case{"A3", 12}, Case{"B3", 18},
                 Case{"D4", 24}, Case{"F4", 48}, Case{"G2", 12}, Case{"H3", 30}, Case{"H4", 120},
                 Case{"I2(7)", 14}, Case{"E6", 72}}) {
    RootSystem rs(parse_type(c.type));
    EXPECT_EQ(rs.num_roots(), c.roots) << c.type;
    EXPECT_EQ(2 * rs.num_positive(), rs.num_roots());
  }
}

TEST(BuildSystem, RejectsInfiniteAndInvalid) {
  CoxeterMatrix affine;  // affine A2: triangle with m = 3
  affine.rank = 3;
  affine.m = {{1, 3, 3}, {3, 1, 3}, {3, 3, 1}};
  affine.name = "affineA2";
  EXPECT_THROW(RootSystem{affine}, Error);
  try {
    RootSystem rs(affine);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFinite);
  }
  EXPECT_THROW(parse_type("Q3"), Error);
  EXPECT_THROW(parse_type("H5"), Error);
  EXPECT_THROW(parse_type("I2"), Error);
}

TEST(BuildSystem, ReflectionTablesAreInvolutions) {
  for (const char* t : {"A3", "B3", "H3", "G2", "D4"}) {
    RootSystem rs(parse_type(t));
    for (std::size_t i = 0; i < rs.rank(); ++i) {
      const Perm& s = rs.simple_reflection(i);
      EXPECT_EQ(compose(s, s), identity_perm(rs.num_roots()));
      for (std::size_t p = 0; p < rs.num_positive(); ++p) {
        if (p == i) {
          EXPECT_EQ(s[p], rs.negate(p));
        } else {
          EXPECT_TRUE(rs.is_positive(s[p]));
        }
        EXPECT_EQ(s[rs.negate(p)], rs.negate(s[p]));
      }
    }
    // every root has unit norm and reflections are in the group
    for (std::size_t p = 0; p < rs.num_roots(); ++p) EXPECT_EQ(rs.inner(rs.root(p), rs.root(p)), Scalar(1));
  }
}

TEST(Elements, LengthEqualsWordLength) {
  for (const char* t : {"A2", "A3", "B3", "H3", "G2", "I2(5)", "A1xA2"}) {
    CoxeterSystem sys(parse_type(t));
    const auto dist = word_lengths(sys);
    EXPECT_EQ(dist.size(), sys.group_order()) << t;
    for (const auto& [perm, d] : dist) EXPECT_EQ(sys.length(Element{0, perm}), d);
  }
}

TEST(Elements, GroupOrders) {
  struct Case { const char* type; std::uint64_t order; };
  for (auto c : {Case{"A4", 120}, Case{"B4", 384}, Case{"D4", 192}, Case{"F4", 1152}, Case{"H3", 120},
                 Case{"H4", 14400}, Case{"E6", 51840}, Case{"E7", 2903040}, Case{"E8", 696729600},
                 Case{"I2(12)", 24}}) {
    CoxeterSystem sys(parse_type(c.type));
    EXPECT_EQ(sys.group_order(), c.order) << c.type;
  }
}

TEST(Elements, MultiplyExamples) {
  CoxeterSystem a2(parse_type("A2"), parse_twist(parse_type("A2"), "flip"));
  const Element e = a2.identity();
  EXPECT_EQ(a2.multiply(e, e), e);
  const Element s1 = a2.simple(0), s2 = a2.simple(1);
  EXPECT_EQ(a2.length(a2.multiply(s1, s2)), 2u);
  // delta w delta^-1 = delta(w)
  const Element d = a2.twist_element(1);
  EXPECT_EQ(a2.multiply(a2.multiply(d, s1), a2.inverse(d)), s2);
  EXPECT_EQ(a2.length(a2.longest()), 3u);
  CoxeterSystem f4(parse_type("F4"));
  EXPECT_EQ(f4.length(f4.longest()), 24u);
  EXPECT_EQ(f4.longest(), f4.parabolic_max(full_set(4)));
  CoxeterSystem h3(parse_type("H3"));
  EXPECT_EQ(h3.length(h3.parabolic_max(full_set(3))), 15u);
  EXPECT_EQ(h3.parabolic_max(0), h3.identity());
  EXPECT_EQ(h3.parabolic_max(singleton(1)), h3.simple(1));
}

TEST(Elements, FormIsPreserved) {
  std::mt19937_64 rng(11);
  for (const char* t : {"B3", "H3", "F4"}) {
    CoxeterSystem sys(parse_type(t));
    const RootSystem& rs = sys.roots();
    for (int trial = 0; trial < 10; ++trial) {
      const Element w = random_element(sys, rng);
      const Mat m = sys.matrix_of(w);
      // M^T G M = G
      EXPECT_EQ(mat_mul(transpose(m), mat_mul(rs.gram(), m)), rs.gram());
      // commutes with negation
      for (std::size_t p = 0; p < rs.num_roots(); ++p) EXPECT_EQ(w.perm[rs.negate(p)], rs.negate(w.perm[p]));
      // the permutation is the linear action
      for (std::size_t p = 0; p < rs.num_roots(); ++p) EXPECT_EQ(mat_vec(m, rs.root(p)), rs.root(w.perm[p]));
    }
  }
}

TEST(Elements, ReducedWordsRoundTrip) {
  std::mt19937_64 rng(3);
  CoxeterSystem sys(parse_type("B4"), DiagramTwist::identity(4));
  for (int trial = 0; trial < 50; ++trial) {
    const Element w = random_element(sys, rng);
    const auto word = sys.reduced_word(w);
    EXPECT_EQ(word.size(), sys.length(w));
    EXPECT_EQ(sys.from_word(word), w);
  }
}

TEST(Twists, EnumerateSmallTypes) {
  EXPECT_EQ(enumerate_twists(parse_type("A2")).size(), 2u);
  EXPECT_EQ(enumerate_twists(parse_type("B2")).size(), 2u);
  EXPECT_EQ(enumerate_twists(parse_type("H3")).size(), 1u);
  EXPECT_EQ(enumerate_twists(parse_type("D4")).size(), 6u);
  EXPECT_EQ(enumerate_twists(parse_type("F4")).size(), 2u);
  EXPECT_EQ(enumerate_twists(parse_type("A1xA1")).size(), 2u);
  EXPECT_TRUE(enumerate_twists(parse_type("A3")).front().is_identity());
  EXPECT_EQ(parse_twist(parse_type("D4"), "flip").order, 2u);
  EXPECT_EQ(parse_twist(parse_type("D4"), "3,2,4,1").order, 3u);
  EXPECT_THROW(parse_twist(parse_type("A3"), "2,1,3"), Error);
  EXPECT_THROW(parse_twist(parse_type("H3"), "flip"), Error);
}

TEST(Twists, LengthIgnoresTwist) {
  const auto cm = parse_type("A3");
  CoxeterSystem sys(cm, parse_twist(cm, "flip"));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Element w = random_element(sys, rng);
    const Element tw = sys.with_twist(1, w);
    EXPECT_EQ(sys.length(tw), sys.length(w));
    EXPECT_EQ(sys.body(tw), w);
  }
}

TEST(Chambers, SeparatingSetsMatchLengths) {
  const auto cm = parse_type("B2");
  CoxeterSystem sys(cm);
  const auto dist = word_lengths(sys);
  std::vector<Chamber> all;
  for (const auto& [perm, d] : dist) all.push_back(Chamber{Element{0, perm}});
  ASSERT_EQ(all.size(), 8u);
  for (const auto& a : all)
    for (const auto& b : all) {
      const Element rel = sys.multiply(sys.inverse(a.x), b.x);
      EXPECT_EQ(separating_set(sys, a, b).size(), sys.length(rel));
    }
  const Chamber c = Chamber::fundamental(sys);
  EXPECT_TRUE(separating_set(sys, c, c).empty());
  EXPECT_EQ(separating_set(sys, c, adjacent(sys, c, 0)), std::vector<std::size_t>{0});
  CoxeterSystem a2(parse_type("A2"));
  EXPECT_EQ(separating_set(a2, Chamber::fundamental(a2), Chamber{a2.longest()}).size(), 3u);
}

TEST(Chambers, ConjugationAcrossWalls) {
  const auto cm = parse_type("A3");
  CoxeterSystem sys(cm, parse_twist(cm, "flip"));
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const Element w = sys.with_twist(trial % 2, random_element(sys, rng));
    const Chamber a{random_element(sys, rng)};
    const Element wa = conjugate_by_chamber(sys, w, a);
    // l(w_A) = #H(A, w A)
    EXPECT_EQ(sys.length(wa), separating_set(sys, a, image_chamber(sys, w, a)).size());
    for (std::size_t i = 0; i < sys.rank(); ++i) {
      const Chamber b = adjacent(sys, a, i);
      // s_i = x_A^-1 s_H x_A
      const Element sh = sys.reflection(wall_root(sys, a, i));
      EXPECT_EQ(sys.conjugate(sh, a.x), sys.simple(i));
      EXPECT_EQ(conjugate_by_chamber(sys, w, b), sys.conjugate_simple(wa, i));
      EXPECT_EQ(wall_index(sys, a, wall_root(sys, a, i)), std::optional<std::size_t>(i));
    }
  }
  EXPECT_EQ(conjugate_by_chamber(sys, sys.simple(0), Chamber::fundamental(sys)), sys.simple(0));
}

TEST(Cosets, DecomposeIsAdditiveAndMinimal) {
  const auto cm = parse_type("A3");
  CoxeterSystem sys(cm);
  const IndexSet j = singleton(0) | singleton(1);
  const auto w0 = sys.longest();
  const auto dec = sys.coset_decompose(w0, j);
  EXPECT_EQ(sys.length(dec.middle), 1u);
  EXPECT_EQ(sys.multiply(dec.left, sys.multiply(dec.middle, dec.right)), w0);
  EXPECT_EQ(sys.length(dec.left) + sys.length(dec.middle) + sys.length(dec.right), sys.length(w0));
  // brute force: minimum over W_J w0 W_J
  std::vector<Element> wj;
  for (const auto& [perm, d] : word_lengths(sys)) {
    Element e{0, perm};
    bool inside = true;
    for (auto i : sys.reduced_word(e)) inside &= in_set(j, i);
    if (inside) wj.push_back(e);
  }
  std::size_t best = 99;
  for (const auto& a : wj)
    for (const auto& b : wj) best = std::min(best, sys.length(sys.multiply(a, sys.multiply(w0, b))));
  EXPECT_EQ(best, 1u);
  // the one-sided coset w0 W_J has minimal length 3
  std::size_t one_sided = 99;
  for (const auto& b : wj) one_sided = std::min(one_sided, sys.length(sys.multiply(w0, b)));
  EXPECT_EQ(one_sided, 3u);
  const auto trivial = sys.coset_decompose(w0, 0);
  EXPECT_EQ(trivial.middle, w0);
  const auto full = sys.coset_decompose(w0, full_set(3));
  EXPECT_EQ(full.middle, sys.identity());
}

TEST(Cosets, TwistedDecomposition) {
  const auto cm = parse_type("A3");
  CoxeterSystem sys(cm, parse_twist(cm, "flip"));
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Element w = sys.with_twist(1, random_element(sys, rng));
    const IndexSet j = singleton(0) | singleton(2);
    const auto dec = sys.coset_decompose(w, j);
    EXPECT_EQ(sys.multiply(dec.left, sys.multiply(dec.middle, dec.right)), w);
    EXPECT_EQ(sys.length(dec.left) + sys.length(dec.middle) + sys.length(dec.right), sys.length(w));
    // no J-descents remain on either side
    for (auto i : set_members(j)) {
      EXPECT_GT(sys.length(sys.left_simple(i, dec.middle)), sys.length(dec.middle));
      EXPECT_GT(sys.length(sys.right_simple(dec.middle, i)), sys.length(dec.middle));
    }
  }
}

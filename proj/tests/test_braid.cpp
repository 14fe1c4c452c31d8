#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "coxmin/braid.hpp"
#include "coxmin/conjugacy.hpp"
#include "oracles.hpp"

using namespace coxmin;

namespace {

CoxeterSystem sys_of(const std::string& type, const std::string& twist = "id") {
  const auto m = parse_type(type);
  return CoxeterSystem(m, parse_twist(m, twist));
}

using Word = std::vector<std::size_t>;

using oracle::rewriting_closure;

TwistedBraid random_braid(const CoxeterSystem& sys, std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), gen(0, sys.rank() - 1);
  std::uniform_int_distribution<unsigned> tw(0, sys.twist_order() - 1);
  TwistedBraid b;
  b.twist = tw(rng);
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) b.word.push_back(gen(rng));
  return b;
}

}  // namespace

TEST(Braid, LiftExamples) {
  const auto a2 = sys_of("A2");
  EXPECT_TRUE(lift(a2, a2.identity()).word.empty());
  EXPECT_EQ(lift(a2, a2.simple(1)).word, Word{1});
  const auto nf = normal_form(a2, lift(a2, a2.longest()));
  EXPECT_EQ(nf, normal_form(a2, TwistedBraid{0, {0, 1, 0}}));
  EXPECT_EQ(nf, normal_form(a2, TwistedBraid{0, {1, 0, 1}}));
  ASSERT_EQ(nf.factors.size(), 1u);
  EXPECT_EQ(nf.factors[0], a2.longest());
}

TEST(Braid, NormalFormExamples) {
  const auto a2 = sys_of("A2");
  EXPECT_TRUE(normal_form(a2, TwistedBraid{}).factors.empty());
  const auto sq = normal_form(a2, TwistedBraid{0, {0, 0}});
  ASSERT_EQ(sq.factors.size(), 2u);
  EXPECT_EQ(sq.factors[0], a2.simple(0));
  EXPECT_EQ(sq.factors[1], a2.simple(0));
  const auto cube = normal_form(a2, power(a2, TwistedBraid{0, {0, 1}}, 3));
  ASSERT_EQ(cube.factors.size(), 2u);
  EXPECT_EQ(infimum(a2, cube), 2u);
  EXPECT_TRUE(divisible_by_delta_squared(a2, power(a2, lift(a2, a2.longest()), 2)));
  EXPECT_FALSE(divisible_by_delta_squared(a2, TwistedBraid{0, {1}}));
}

TEST(Braid, NormalFormMatchesRewritingClosure) {
  for (const char* t : {"A2", "B2", "G2", "I2(7)"}) {
    const auto cm = parse_type(t);
    const auto sys = sys_of(t);
    for (std::size_t n = 1; n <= 10; ++n) {
      std::map<Word, std::size_t> cls;
      std::map<std::vector<Perm>, std::size_t> by_nf;
      std::size_t next = 0;
      for (std::size_t code = 0; code < (std::size_t(1) << n); ++code) {
        Word w(n);
        for (std::size_t p = 0; p < n; ++p) w[p] = (code >> p) & 1;
        if (!cls.count(w)) {
          for (const auto& v : rewriting_closure(cm, w)) cls[v] = next;
          ++next;
        }
        std::vector<Perm> key;
        for (const auto& f : normal_form(sys, TwistedBraid{0, w}).factors) key.push_back(f.perm);
        auto [it, fresh] = by_nf.emplace(key, cls[w]);
        ASSERT_EQ(it->second, cls[w]) << t << " length " << n;
        (void)fresh;
      }
      EXPECT_EQ(by_nf.size(), next) << t << " length " << n;
    }
  }
}

TEST(Braid, NormalFormProperties) {
  std::mt19937_64 rng(5);
  for (auto [t, tw] : std::vector<std::pair<const char*, const char*>>{
           {"A3", "id"}, {"A3", "flip"}, {"B3", "id"}, {"H3", "id"}, {"D4", "3,2,4,1"}}) {
    const auto sys = sys_of(t, tw);
    const TwistedBraid d2 = power(sys, lift(sys, sys.longest()), 2);
    for (int trial = 0; trial < 40; ++trial) {
      const auto a = random_braid(sys, rng, 18), b = random_braid(sys, rng, 18);
      const auto na = normal_form(sys, a), nb = normal_form(sys, b);
      // round trip and shape
      EXPECT_EQ(normal_form(sys, expand(sys, na)), na);
      EXPECT_EQ(expand(sys, na).word.size(), a.word.size());
      for (std::size_t j = 0; j + 1 < na.factors.size(); ++j) EXPECT_TRUE(left_weighted(sys, na.factors[j], na.factors[j + 1]));
      for (const auto& f : na.factors) EXPECT_GT(sys.length(f), 0u);
      // congruence
      EXPECT_EQ(normal_form(sys, multiply(sys, a, b)),
                normal_form(sys, multiply(sys, expand(sys, na), expand(sys, nb))));
      // the square of the longest element is central
      EXPECT_EQ(normal_form(sys, multiply(sys, d2, a)), normal_form(sys, multiply(sys, a, d2)));
    }
  }
}

TEST(Braid, LiftIsMultiplicativeOnReducedProducts) {
  const auto sys = sys_of("B3");
  GroupTable t(sys);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<GroupTable::Index> pick(0, static_cast<GroupTable::Index>(t.size() - 1));
  std::size_t tested = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Element x = t.element(pick(rng)), y = t.element(pick(rng));
    const Element xy = sys.multiply(x, y);
    if (sys.length(xy) != sys.length(x) + sys.length(y)) continue;
    ++tested;
    EXPECT_TRUE(braid_equal(sys, multiply(sys, lift(sys, x), lift(sys, y)), lift(sys, xy)));
  }
  EXPECT_GT(tested, 10u);
}

TEST(Braid, TwistPowers) {
  const auto sys = sys_of("D4", "3,2,4,1");
  const TwistedBraid d{1, {}};
  EXPECT_EQ(normal_form(sys, power(sys, d, 3)), NormalForm{});
  EXPECT_NE(normal_form(sys, power(sys, d, 2)), NormalForm{});
  EXPECT_EQ(normal_form(sys, power(sys, TwistedBraid{0, {0}}, 0)), NormalForm{});
  // delta s_i = s_delta(i) delta
  const auto a = multiply(sys, d, TwistedBraid{0, {0}});
  const auto b = multiply(sys, TwistedBraid{0, {sys.twist_index(1, 0)}}, d);
  EXPECT_TRUE(braid_equal(sys, a, b));
}

TEST(Good, CertificateExamples) {
  const auto a2 = sys_of("A2");
  const Element c = a2.from_word({0, 1});
  const auto ea = eigen_decomposition(a2, c);
  const auto ca = certify_good(a2, c, admissible_filtration(a2, ea, all_angles(ea)));
  EXPECT_EQ(ca.order, 3u);
  EXPECT_EQ(ca.exponents, std::vector<std::size_t>{2});
  EXPECT_EQ(ca.subsets, std::vector<IndexSet>{full_set(2)});
  EXPECT_FALSE(ca.very_good);

  const auto b2 = sys_of("B2");
  const Element cb = b2.from_word({0, 1});
  const auto eb = eigen_decomposition(b2, cb);
  const auto cert = certify_good(b2, cb, admissible_filtration(b2, eb, all_angles(eb)));
  EXPECT_EQ(cert.order, 4u);
  EXPECT_EQ(cert.exponents, std::vector<std::size_t>{2});
  EXPECT_TRUE(cert.very_good);

  const auto e0 = eigen_decomposition(b2, b2.longest());
  const auto cw = certify_good(b2, b2.longest(), admissible_filtration(b2, e0, all_angles(e0)));
  EXPECT_EQ(cw.subsets, std::vector<IndexSet>{full_set(2)});
  EXPECT_EQ(cw.exponents, std::vector<std::size_t>{2});

  const auto ei = eigen_decomposition(b2, b2.identity());
  const auto ci = certify_good(b2, b2.identity(), admissible_filtration(b2, ei, all_angles(ei)));
  EXPECT_TRUE(ci.subsets.empty());
  EXPECT_TRUE(ci.dropped_zero);
}

TEST(Good, EveryClassHasACertifiedMinimalElement) {
  for (auto [t, tw] : std::vector<std::pair<const char*, const char*>>{{"A2", "id"},
                                                                      {"A2", "flip"},
                                                                      {"B2", "id"},
                                                                      {"G2", "id"},
                                                                      {"G2", "flip"},
                                                                      {"A3", "id"},
                                                                      {"A3", "flip"},
                                                                      {"B3", "id"},
                                                                      {"H3", "id"},
                                                                      {"I2(5)", "id"}}) {
    const auto sys = sys_of(t, tw);
    GroupTable table(sys);
    const unsigned k = default_coset(sys);
    const auto ct = enumerate_classes(table, k);
    for (const auto& cls : ct.classes) {
      const Element w = table.twisted_element(k, cls.representative());
      const auto g = good_min_element(sys, w, cls.min_length);
      EXPECT_EQ(ct.of(table.index_of(g.element)).id, cls.id);
      std::size_t letters = 0;
      for (std::size_t j = 0; j < g.certificate.subsets.size(); ++j)
        letters += g.certificate.exponents[j] * sys.length(sys.parabolic_max(g.certificate.subsets[j]));
      EXPECT_EQ(letters, g.certificate.order * sys.length(g.element));
      EXPECT_EQ(g.certificate.very_good, g.certificate.order % 2 == 0);
      if (cls.quasi_elliptic) {
        const auto q = quasi_elliptic_good_element(sys, w);
        EXPECT_TRUE(divisible_by_delta_squared(sys, power(sys, lift(sys, q.element), q.certificate.order)))
            << t << " class " << cls.id;
      }
    }
  }
}

TEST(Good, RejectsBadPosition) {
  const auto a2 = sys_of("A2");
  // s1 s2 s1 is a reflection; from C the reflecting line is not reached
  const Element w = a2.from_word({0, 1, 0});
  const auto e = eigen_decomposition(a2, w);
  try {
    certify_good(a2, w, admissible_filtration(a2, e, all_angles(e)));
    FAIL() << "expected NotGoodPosition";
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::NotGoodPosition);
  }
}

TEST(Rotation, Examples) {
  const auto b2 = sys_of("B2");
  const Element c = b2.from_word({0, 1});
  const auto eb = eigen_decomposition(b2, c);
  const auto r = verify_rotation_identity(b2, c, eb.spaces[0]);
  EXPECT_EQ(r.exponent, 1u);
  EXPECT_EQ(r.w1, b2.identity());
  EXPECT_TRUE(r.sigma_half.has_value());

  const auto g2 = sys_of("G2");
  const Element cg = g2.from_word({0, 1});
  const auto eg = eigen_decomposition(g2, cg);
  ASSERT_EQ(eg.spaces[0].theta, Angle::of(1, 3));
  EXPECT_EQ(verify_rotation_identity(g2, cg, eg.spaces[0]).exponent, 1u);
  EXPECT_EQ(verify_rotation_identity(g2, cg, eg.spaces[0], 12).exponent, 2u);

  // -1 on V
  const auto e0 = eigen_decomposition(b2, b2.longest());
  ASSERT_TRUE(e0.spaces[0].theta.is_pi());
  EXPECT_EQ(verify_rotation_identity(b2, b2.longest(), e0.spaces[0]).exponent, 1u);
}

TEST(Rotation, HoldsWheneverHypothesesHold) {
  for (auto [t, tw] : std::vector<std::pair<const char*, const char*>>{
           {"A3", "id"}, {"A3", "flip"}, {"B3", "id"}, {"H3", "id"}, {"G2", "flip"}}) {
    const auto sys = sys_of(t, tw);
    GroupTable table(sys);
    const unsigned k = default_coset(sys);
    std::size_t held = 0;
    for (GroupTable::Index g = 0; g < table.size(); ++g) {
      const Element w = table.twisted_element(k, g);
      const auto eig = eigen_decomposition(sys, w);
      for (const auto& sp : eig.spaces) {
        try {
          verify_rotation_identity(sys, w, sp);
          ++held;
        } catch (const Error& e) {
          ASSERT_EQ(e.kind(), ErrorKind::HypothesisFailed) << t << " " << g << " " << e.what();
        }
      }
    }
    EXPECT_GT(held, 0u) << t;
  }
}

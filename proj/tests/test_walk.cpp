#include <gtest/gtest.h>

#include "coxmin/chamber_walk.hpp"
#include "coxmin/conjugacy.hpp"

using namespace coxmin;

namespace {

struct Sys {
  CoxeterSystem sys;
  GroupTable table;
  unsigned k;
  Sys(const std::string& type, const std::string& twist = "id")
      : sys(make(type, twist)), table(sys), k(default_coset(sys)) {}
  static CoxeterSystem make(const std::string& type, const std::string& twist) {
    const auto m = parse_type(type);
    return CoxeterSystem(m, parse_twist(m, twist));
  }
  Chamber chamber(Index g) const { return Chamber{table.element(g)}; }
};

const std::vector<std::pair<std::string, std::string>> kSmall = {
    {"A2", "id"}, {"A2", "flip"}, {"A3", "id"}, {"A3", "flip"}, {"B2", "id"},
    {"B3", "id"}, {"G2", "id"},   {"G2", "flip"}, {"H3", "id"}, {"I2(5)", "flip"}};

// a point of the wall i of A off every other hyperplane
Vec wall_point(const CoxeterSystem& sys, const Chamber& a, std::size_t i) {
  const RootSystem& rs = sys.roots();
  const auto h = kernel(Mat{rs.dual(wall_root(sys, a, i))}, sys.rank());
  auto v = regular_point_in(rs, h, chamber_constraints(sys, a));
  EXPECT_TRUE(v.has_value());
  return *v;
}

template <class F>
void expect_kind(ErrorKind kind, F&& f) {
  try {
    f();
    ADD_FAILURE() << "no error raised";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace

TEST(Derivative, PositiveWhenCrossingRaisesLength) {
  for (auto& [t, tw] : kSmall) {
    Sys s(t, tw);
    std::size_t raised = 0;
    const Index step = std::max<Index>(1, static_cast<Index>(s.table.size() / 40));
    for (Index g = 0; g < s.table.size(); g += step) {
      const Element w = s.table.twisted_element(s.k, g);
      for (Index x = 0; x < s.table.size(); x += 2) {
        const Chamber a = s.chamber(x);
        const std::size_t la = s.sys.length(conjugate_by_chamber(s.sys, w, a));
        for (std::size_t i = 0; i < s.sys.rank(); ++i) {
          const Chamber b = adjacent(s.sys, a, i);
          const std::size_t lb = s.sys.length(conjugate_by_chamber(s.sys, w, b));
          EXPECT_TRUE(lb == la || lb + 2 == la || lb == la + 2);
          if (lb != la + 2) continue;
          ++raised;
          const Vec h = wall_point(s.sys, a, i);
          const Vec v = vec_scale(s.sys.roots().root(a.x.perm[i]), Scalar(-1));
          EXPECT_GT(derivative_test(s.sys, w, h, v), 0) << t << " " << g << " " << x << " " << i;
        }
      }
    }
    EXPECT_GT(raised, 0u) << t;
  }
}

TEST(Flow, ComponentsRecomposeAndLimitIsEigenvector) {
  Sys s("H3");
  const Element w = s.sys.from_word({0, 1, 2, 1});
  const auto eig = eigen_decomposition(s.sys, w);
  const Vec y{Scalar(3), Scalar(-1), Scalar(2)};
  FlowCurve fc(s.sys, eig, y);
  EXPECT_EQ(fc.at_zero(), y);
  for (std::size_t j = 0; j < fc.num_components(); ++j) EXPECT_TRUE(in_span(eig.spaces[j].basis, fc.component(j)));
  EXPECT_TRUE(in_span(eig.v_w(), fc.limit_component()));
}

TEST(Walk, CoxeterElementOfA2NeedsNoSteps) {
  Sys s("A2");
  const Element c = s.sys.from_word({0, 1});
  const auto r = descent_walk(s.sys, c, Chamber{s.sys.identity()});
  EXPECT_TRUE(r.steps.empty());
  EXPECT_TRUE(walk_is_sound(s.sys, c, r));
}

TEST(Walk, SoundAndEndsOnTheFormula) {
  for (auto& [t, tw] : kSmall) {
    Sys s(t, tw);
    const auto ct = enumerate_classes(s.table, s.k);
    std::size_t walks = 0, fallbacks = 0;
    for (Index g = 0; g < s.table.size(); g += 2) {
      const Element w = s.table.twisted_element(s.k, g);
      const auto eig = eigen_decomposition(s.sys, w);
      const auto& cls = ct.of(g);
      for (Index x = 0; x < s.table.size(); x += 5) {
        const Chamber a = s.chamber(x);
        const auto r = descent_walk(s.sys, w, a);
        ++walks;
        fallbacks += r.fallback;
        ASSERT_TRUE(walk_is_sound(s.sys, w, r)) << t << " " << g << " " << x;
        const std::size_t end = s.sys.length(conjugate_by_chamber(s.sys, w, r.end));
        const mpq_class expected = mpq_class(static_cast<long>(component_length(s.sys, w, eig.v_w(), r.end))) +
                                   rotation_count(s.sys.roots(), eig.v_w(), eig.theta0());
        EXPECT_EQ(mpq_class(static_cast<long>(end)), expected) << t << " " << g << " " << x;
        if (cls.elliptic) {
          EXPECT_EQ(end, cls.min_length) << t << " " << g;
        }
        EXPECT_GE(end, cls.min_length);
      }
    }
    EXPECT_EQ(fallbacks, 0u) << t << " of " << walks;
  }
}

TEST(Walk, ReflectionClassOfA3) {
  Sys s("A3");
  // s1 s2 s1 seen from the fundamental chamber becomes a simple reflection
  const Element w = s.sys.from_word({0, 1, 0});
  const auto r = descent_walk(s.sys, w, Chamber{s.sys.identity()});
  EXPECT_TRUE(walk_is_sound(s.sys, w, r));
  EXPECT_EQ(s.sys.length(conjugate_by_chamber(s.sys, w, r.end)), 1u);
  EXPECT_EQ(r.steps.size(), 1u);
}

TEST(Walk, SeedsGiveSoundWalks) {
  Sys s("B3");
  const Element w = s.sys.from_word({0, 1, 0, 2, 1});
  for (std::size_t seed = 0; seed < 6; ++seed) {
    WalkOptions o;
    o.seed = seed;
    o.allow_fallback = false;
    const auto r = descent_walk(s.sys, w, Chamber{s.sys.from_word({2, 1, 0, 1})}, o);
    EXPECT_TRUE(walk_is_sound(s.sys, w, r));
  }
}

TEST(Formula, CoxeterElementOfB2) {
  Sys s("B2");
  const Element c = s.sys.from_word({0, 1});
  const auto eig = eigen_decomposition(s.sys, c);
  ASSERT_EQ(eig.spaces.size(), 1u);
  EXPECT_EQ(eig.theta0(), Angle::of(1, 2));
  EXPECT_EQ(special_length_formula(s.sys, c, eig.v_w(), eig.theta0(), Chamber{s.sys.identity()}), 2u);
}

TEST(Formula, HypothesisGates) {
  Sys s("A2");
  const Element s1 = s.sys.simple(0);
  const auto fixed = fixed_space(s.sys, s1);
  // H_{alpha_1} contains the fixed line and separates A from s1 A
  expect_kind(ErrorKind::HypothesisFailed,
              [&] { special_length_formula(s.sys, s1, fixed, Angle::of(0, 1), Chamber{s.sys.identity()}); });
  // the line through alpha_2 is not s1-stable
  expect_kind(ErrorKind::HypothesisFailed, [&] {
    special_length_formula(s.sys, s1, {s.sys.roots().root(1)}, Angle::of(0, 1), Chamber{s.sys.identity()});
  });
  expect_kind(ErrorKind::HypothesisFailed,
              [&] { decompose_at_regular(s.sys, s1, {}, Angle::of(0, 1), Chamber{s.sys.identity()}); });
}

TEST(Formula, SweepOverEigenspacesAndChambers) {
  for (auto& [t, tw] : kSmall) {
    Sys s(t, tw);
    const auto ct = enumerate_classes(s.table, s.k);
    std::size_t special = 0, decomposed = 0;
    for (const auto& cls : ct.classes)
      for (Index g : {cls.representative(), cls.members.back()}) {
        const Element w = s.table.twisted_element(s.k, g);
        const auto eig = eigen_decomposition(s.sys, w);
        for (const auto& sp : eig.spaces)
          for (Index x = 0; x < s.table.size(); ++x) {
            const Chamber a = s.chamber(x);
            if (!closure_has_regular_point(s.sys, a, sp.basis)) continue;
            const auto dec = decompose_at_regular(s.sys, w, sp.basis, sp.theta, a);
            ++decomposed;
            EXPECT_EQ(s.sys.length(dec.u), component_length(s.sys, w, sp.basis, a));
            if (component_length(s.sys, w, sp.basis, a) != 0) continue;
            const std::size_t l = special_length_formula(s.sys, w, sp.basis, sp.theta, a);
            EXPECT_EQ(l, s.sys.length(conjugate_by_chamber(s.sys, w, a)));
            ++special;
          }
      }
    EXPECT_GT(special, 0u) << t;
    if (s.sys.rank() > 2) {
      EXPECT_GT(decomposed, special) << t;
    }
  }
}

TEST(Formula, StronglyConnectedSteps) {
  std::size_t held = 0;
  for (auto& [t, tw] : kSmall) {
    Sys s(t, tw);
    for (Index g = 0; g < s.table.size(); g += 3) {
      const Element w = s.table.twisted_element(s.k, g);
      for (Index x = 0; x < s.table.size(); x += 3)
        for (std::size_t i = 0; i < s.sys.rank(); ++i) {
          try {
            strongly_connected_step(s.sys, w, s.chamber(x), i);
            ++held;
          } catch (const Error& e) {
            ASSERT_EQ(e.kind(), ErrorKind::HypothesisFailed) << e.what();
          }
        }
    }
  }
  EXPECT_GT(held, 0u);
}

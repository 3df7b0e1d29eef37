// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "storyboard/call_graph.hpp"
#include "storyboard/explore.hpp"
#include "storyboard/instrument.hpp"
#include "storyboard/static_atg.hpp"
#include "support.hpp"

using namespace storyboard;

namespace {

struct Rig {
  AppModel model;
  CallGraph cg;
  IccTable icc;
  Atg static_atg;
  Device device;

  explicit Rig(const std::string& fixture, std::uint64_t seed = 0)
      : model(instrument(fixtures::load_fixture(fixture))),
        cg(build_call_graph(model)),
        icc(extract_icc(model, cg)),
        static_atg(extract_static_atg(model, cg)),
        device(seed) {
    device.install(model);
  }
};

using Kind = ActivityOutcome::Kind;

TEST(RenderAll, RatioMiniLaunchesEightOfTen) {
  Rig s("ratio-mini");
  const ExplorationReport r = render_all(s.model, s.icc, s.device);
  EXPECT_EQ(r.outcomes.size(), 10u);
  EXPECT_EQ(r.launched_count(), 8u);
  EXPECT_EQ(r.pages.size(), 8u);
  EXPECT_EQ(r.outcomes.at("Legacy").kind, Kind::Crashed);
  EXPECT_EQ(r.outcomes.at("Deeplink").kind, Kind::Crashed);
  EXPECT_EQ(r.outcomes.at("Legacy").detail, std::string(kCrashCause));
  EXPECT_EQ(r.outcomes.at("Results").kind, Kind::Launched);
  EXPECT_EQ(r.timings.at("render").crashes, 2);
  EXPECT_EQ(r.timings.at("render").launches, 10);
}

TEST(RenderAll, WithoutIccFewerLaunches) {
  Rig s("ratio-mini");
  const ExplorationReport with = render_all(s.model, s.icc, s.device);
  Device fresh(0);
  fresh.install(s.model);
  const ExplorationReport without = render_all(s.model, IccTable{}, fresh);
  EXPECT_LT(without.launched_count(), with.launched_count());
  for (const auto& [act, o] : without.outcomes)
    if (o.kind == Kind::Launched) EXPECT_EQ(with.outcomes.at(act).kind, Kind::Launched) << act;
}

TEST(RenderAll, RedirectedPagesUseTheActualActivity) {
  Rig s("login-mini");
  const ExplorationReport r = render_all(s.model, s.icc, s.device);
  EXPECT_EQ(r.outcomes.at("Account").kind, Kind::Unreachable);
  EXPECT_EQ(r.outcomes.at("Account").detail, "redirected to Login");
  EXPECT_FALSE(r.pages.count("Account"));
  EXPECT_FALSE(r.pages.count("Orders"));
  ASSERT_TRUE(r.pages.count("Login"));
  EXPECT_EQ(r.pages.at("Login").activity, "Login");
  for (const auto& [name, page] : r.pages) EXPECT_EQ(name, page.activity);
}

TEST(RenderAll, PermissionIsAllowed) {
  Rig s("perm-mini");
  const ExplorationReport r = render_all(s.model, s.icc, s.device);
  EXPECT_EQ(r.outcomes.at("Camera").kind, Kind::Launched);
  EXPECT_EQ(r.timings.at("render").permission_grants, 1);
}

TEST(RenderAll, PageNamesMatchDumps) {
  for (const auto& name : fixtures::corpus_names()) {
    Rig s(name);
    const ExplorationReport r = render_all(s.model, s.icc, s.device);
    for (const auto& [act, page] : r.pages) {
      EXPECT_EQ(act, page.activity) << name;
      ASSERT_TRUE(r.page_commands.count(act)) << name;
      Device d(0);
      d.install(s.model);
      d.launch(r.page_commands.at(act));
      if (d.state().interstitial) d.tap("permission_allow_button");
      EXPECT_EQ(d.top_activity(), act) << name;
      EXPECT_EQ(d.dump_layout(), page.layout_dump) << name;
    }
  }
}

// Each activity is rendered from a fresh state, so the order does not matter.
TEST(RenderAll, OrderIndependent) {
  for (const auto& name : {"ratio-mini", "login-mini", "mixed-mini"}) {
    Rig a(name), b(name);
    auto order = a.model.activity_names();
    std::reverse(order.begin(), order.end());
    const ExplorationReport fwd = render_all(a.model, a.icc, a.device);
    const ExplorationReport rev = render_all(b.model, b.icc, b.device, order);
    EXPECT_EQ(fwd.outcomes, rev.outcomes) << name;
    EXPECT_EQ(fwd.pages.size(), rev.pages.size()) << name;
    for (const auto& [act, page] : fwd.pages) {
      // The login page is kept from the first activity that reached it.
      if (name == std::string("login-mini") && act == "Login") continue;
      EXPECT_EQ(page, rev.pages.at(act)) << name << " " << act;
    }
  }
}

TEST(ExploreComponents, ClickOnlyPair) {
  Rig s("click-only-mini");
  ExplorationReport r = render_all(s.model, s.icc, s.device);
  const auto found = explore_components(s.model, r, s.device, s.static_atg);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0], (TransitionPair{"Main", "About", Origin::Dynamic, Via::tap("about")}));
  EXPECT_EQ(r.dynamic_pairs, found);
}

TEST(ExploreComponents, NothingToTap) {
  Rig s("solo-mini");
  ExplorationReport r = render_all(s.model, s.icc, s.device);
  EXPECT_TRUE(explore_components(s.model, r, s.device, s.static_atg).empty());
  EXPECT_EQ(r.timings["explore"].taps, 0);
}

TEST(ExploreComponents, KnownPairsAreNotRepeated) {
  Rig s("click-only-mini");
  ExplorationReport r = render_all(s.model, s.icc, s.device);
  Atg known;
  known.add({"Main", "About", Origin::Static, Via::direct()});
  EXPECT_TRUE(explore_components(s.model, r, s.device, known).empty());
}

TEST(ExploreComponents, CrashingTapAddsNoPair) {
  AppModel m = fixtures::load_fixture("profile-mini");
  // Tapping "go" opens Profile without the extras it needs.
  std::function<void(Node&)> wire = [&](Node& n) {
    if (n.id == "go") n.on_click = ClickLaunch{"Profile", {}};
    for (auto& c : n.children) wire(c);
  };
  wire(m.layouts.at("main").root);
  m = instrument(m);
  const CallGraph cg = build_call_graph(m);
  const IccTable icc = extract_icc(m, cg);
  Device d(0);
  d.install(m);
  ExplorationReport r = render_all(m, icc, d);
  const auto found = explore_components(m, r, d, extract_static_atg(m, cg));
  EXPECT_TRUE(found.empty());
  EXPECT_EQ(r.timings["explore"].crashes, 1);
}

TEST(ExploreComponents, DeeperSearchReachesSecondHop) {
  Rig shallow("mixed-mini"), deep("mixed-mini");
  ExplorationReport r1 = render_all(shallow.model, shallow.icc, shallow.device);
  ExplorationReport r2 = render_all(deep.model, deep.icc, deep.device);
  const auto one = explore_components(shallow.model, r1, shallow.device, shallow.static_atg, 1);
  const auto two = explore_components(deep.model, r2, deep.device, deep.static_atg, 3);
  EXPECT_GE(two.size(), one.size());
  for (const auto& p : one)
    EXPECT_NE(std::find_if(two.begin(), two.end(),
                           [&](const TransitionPair& q) { return q.source == p.source && q.target == p.target; }),
              two.end());
}

TEST(HybridAtg, UnionKeepsStaticOrigin) {
  Atg st;
  st.add({"A", "B", Origin::Static, Via::direct()});
  const Atg h = hybrid_atg(st, {{"A", "B", Origin::Dynamic, Via::tap("b")}, {"B", "C", Origin::Dynamic, Via::tap("c")}});
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h.pairs()[0].origin, Origin::Static);
  EXPECT_EQ(h.pairs()[1].origin, Origin::Dynamic);
  EXPECT_EQ(hybrid_atg(st, {}), st);
  EXPECT_TRUE(hybrid_atg(Atg{}, {}).empty());
}

TEST(HybridAtg, VespucciClickAddsAbout) {
  Rig s("vespucci-click-mini");
  ExplorationReport r = render_all(s.model, s.icc, s.device);
  const Atg h = hybrid_atg(s.static_atg, explore_components(s.model, r, s.device, s.static_atg));
  EXPECT_EQ(h.size(), 3u);
  EXPECT_TRUE(h.contains("AdvancedPrefEditor", "About"));
}

TEST(HybridAtg, SupersetOfStaticAcrossCorpus) {
  for (const auto& name : fixtures::corpus_names()) {
    Rig s(name);
    ExplorationReport r = render_all(s.model, s.icc, s.device);
    const Atg h = hybrid_atg(s.static_atg, explore_components(s.model, r, s.device, s.static_atg));
    for (const auto& e : s.static_atg.edges()) EXPECT_TRUE(h.edges().count(e)) << name;
    for (const auto& p : h.pairs())
      if (!s.static_atg.contains(p.source, p.target)) EXPECT_EQ(p.origin, Origin::Dynamic) << name;
    const auto click = fixtures::load_expectation(name).click_only;
    for (const auto& e : click) EXPECT_TRUE(h.edges().count(e)) << name << " " << e.first << "->" << e.second;
  }
}

}  // namespace

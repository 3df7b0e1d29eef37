// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "storyboard/app_format.hpp"
#include "storyboard/call_graph.hpp"
#include "storyboard/icc.hpp"
#include "support.hpp"

using namespace storyboard;

namespace {

using K = PrimitiveAttr::Kind;

IccTable icc_of(const AppModel& m, const IccOptions& o = {}) { return extract_icc(m, build_call_graph(m), o); }

ExtraType basic(BasicType t) { return ExtraType::of(t); }

TEST(Icc, ManifestFilterBecomesPrimitives) {
  const IccTable icc = icc_of(fixtures::load_fixture("implicit-mini"));
  const ParamSet& viewer = icc.of("Viewer");
  const std::vector<PrimitiveAttr> want{{K::Action, "android.intent.action.VIEW", {}},
                                        {K::Category, "", {"android.intent.category.DEFAULT"}},
                                        {K::Type, "image/png", {}}};
  EXPECT_EQ(viewer.primitives, want);
  EXPECT_EQ(viewer.extras, (std::vector<ExtraParam>{{"uri", basic(BasicType::String)}}));
  EXPECT_EQ(icc.dump(),
            "Editor: [action=com.example.EDIT, action=com.example.EDIT_ALT, "
            "category={android.intent.category.DEFAULT}] / []\n"
            "Main: [] / []\n"
            "Viewer: [action=android.intent.action.VIEW, category={android.intent.category.DEFAULT}, "
            "type=image/png] / [uri:string]\n");
}

TEST(Icc, ExtrasTwoCallsDeepIncludingBundleAndOnResume) {
  const AppModel m = fixtures::load_fixture("deep-extra-mini");
  const IccTable icc = icc_of(m);
  const ParamSet& p = icc.of("Profile");
  ASSERT_EQ(p.extras.size(), 4u);
  EXPECT_EQ(p.extras[0], (ExtraParam{"userid", basic(BasicType::Integer)}));
  EXPECT_EQ(p.extras[1], (ExtraParam{"username", basic(BasicType::String)}));
  EXPECT_EQ(p.extras[2].key, "prefs");
  EXPECT_EQ(to_string(p.extras[2].type), "bundle{theme:string,fontScale:float}");
  EXPECT_EQ(p.extras[3], (ExtraParam{"fresh", basic(BasicType::Boolean)}));

  IccOptions no_resume;
  no_resume.include_on_resume = false;
  EXPECT_EQ(icc_of(m, no_resume).of("Profile").extras.size(), 3u);
}

TEST(Icc, ActivityWithNothingHasEmptyParams) {
  const IccTable icc = icc_of(fixtures::load_fixture("solo-mini"));
  ASSERT_EQ(icc.entries.size(), 1u);
  EXPECT_TRUE(icc.entries.begin()->second.empty());
}

TEST(Icc, EveryDeclaredActivityHasAnEntry) {
  for (const auto& name : fixtures::corpus_names()) {
    const AppModel m = fixtures::load_fixture(name);
    const IccTable icc = icc_of(m);
    EXPECT_EQ(icc.entries.size(), m.manifest.declared_activities.size()) << name;
    for (const auto& a : m.activity_names()) EXPECT_TRUE(icc.entries.count(a)) << name << " " << a;
  }
}

TEST(GetExtras, LeafMethod) {
  const AppModel m = fixtures::load_fixture("deep-extra-mini");
  const CallGraph cg = build_call_graph(m);
  const ParamSet ps = get_extras(m, cg, {"ArgReader", "read"}, {});
  EXPECT_EQ(ps.extras.size(), 3u);
  EXPECT_TRUE(ps.primitives.empty());
  EXPECT_THROW(get_extras(m, cg, {"ArgReader", "missing"}, {}), AnalysisError);
}

TEST(GetExtras, CyclesTerminateAndUnionCallees) {
  const AppModel m = fixtures::load_fixture("recursion-mini");
  const CallGraph cg = build_call_graph(m);
  const ParamSet ps = get_extras(m, cg, {"Target", "parse"}, {});
  EXPECT_EQ(ps.extras, (std::vector<ExtraParam>{{"q", basic(BasicType::String)}, {"depth", basic(BasicType::Integer)}}));
}

TEST(GetExtras, AccumulatorIsExtendedNotReplaced) {
  const AppModel m = fixtures::load_fixture("recursion-mini");
  const CallGraph cg = build_call_graph(m);
  ParamSet acc;
  acc.add(ExtraParam{"seed", basic(BasicType::Float)});
  const ParamSet ps = get_extras(m, cg, {"Target", "parseMore"}, acc);
  ASSERT_EQ(ps.extras.size(), 3u);
  EXPECT_EQ(ps.extras[0].key, "seed");
}

TEST(GetExtras, DepthCapStopsDescent) {
  const AppModel m = fixtures::load_fixture("deep-extra-mini");
  const CallGraph cg = build_call_graph(m);
  IccOptions shallow;
  shallow.depth_cap = 1;
  EXPECT_TRUE(get_extras(m, cg, {"Profile", "onCreate"}, {}, shallow).extras.empty());
  shallow.depth_cap = 2;
  EXPECT_EQ(get_extras(m, cg, {"Profile", "onCreate"}, {}, shallow).extras.size(), 3u);
}

TEST(ParamSet, AddDeduplicates) {
  ParamSet ps;
  EXPECT_TRUE(ps.add(ExtraParam{"k", basic(BasicType::Integer)}));
  EXPECT_FALSE(ps.add(ExtraParam{"k", basic(BasicType::Integer)}));
  EXPECT_TRUE(ps.add(ExtraParam{"k", basic(BasicType::String)}));
  EXPECT_TRUE(ps.add(PrimitiveAttr{K::Action, "a", {}}));
  EXPECT_FALSE(ps.add(PrimitiveAttr{K::Action, "a", {}}));
  EXPECT_EQ(ps.extras.size(), 2u);
  EXPECT_EQ(ps.primitives.size(), 1u);
}

TEST(Icc, Idempotent) {
  for (const auto& name : fixtures::corpus_names()) {
    const AppModel m = fixtures::load_fixture(name);
    EXPECT_EQ(icc_of(m), icc_of(m)) << name;
  }
}

// Every key a lifecycle method reads directly appears in the table.
TEST(Icc, CompleteForDirectReads) {
  for (const auto& name : fixtures::corpus_names()) {
    const AppModel m = fixtures::load_fixture(name);
    const IccTable icc = icc_of(m);
    for (const auto& act : m.activity_names()) {
      const UnitDef* u = m.find_unit(act);
      for (const auto& method : u->methods) {
        if (!is_lifecycle_name(method.name)) continue;
        for (const auto& s : method.body)
          if (const auto* g = std::get_if<stmt::GetExtra>(&s)) {
            const auto& ex = icc.of(act).extras;
            EXPECT_NE(std::find(ex.begin(), ex.end(), ExtraParam{g->key, g->type}), ex.end()) << name << " " << act;
          }
      }
    }
  }
}

}  // namespace

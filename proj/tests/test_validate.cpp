// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "storyboard/app_format.hpp"
#include "storyboard/instrument.hpp"
#include "storyboard/validate.hpp"
#include "support.hpp"

using namespace storyboard;

namespace {

AppModel base() {
  return parse_app(R"(app v
manifest
  activity Main launcher
  activity Detail
end
unit Main activity layout=main
  method onCreate
    new i explicit Detail
    start i
  end
end
unit Detail activity layout=main
end
layout main
  node root Container 0 0 90 160
  node go Button 5 5 20 10 parent=root clickable launch=Detail
end
)");
}

TEST(Validate, CorpusIsClean) {
  for (const auto& name : fixtures::corpus_names()) {
    const auto diags = validate(fixtures::load_fixture(name));
    EXPECT_TRUE(diags.empty()) << name << ": " << (diags.empty() ? "" : to_string(diags.front()));
  }
}

TEST(Validate, TwoLaunchersIsOneDiagnostic) {
  AppModel m = base();
  m.manifest.declared_activities[1].is_launcher = true;
  const auto d = validate(m);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].category, Diagnostic::Category::Invariant);
}

TEST(Validate, ClickToUndeclaredActivity) {
  AppModel m = base();
  m.layouts["main"].root.children[0].on_click->target = "Nowhere";
  const auto d = validate(m);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].category, Diagnostic::Category::Reference);
  EXPECT_NE(d[0].path.find("go"), std::string::npos);
}

TEST(Validate, LayoutInvariants) {
  AppModel m = base();
  Node& go = m.layouts["main"].root.children[0];
  go.bounds = Rect{80, 5, 20, 10};  // leaves the grid and the parent
  EXPECT_GE(validate(m).size(), 1u);

  m = base();
  m.layouts["main"].root.children[0].clickable = false;
  EXPECT_EQ(validate(m).size(), 1u);

  m = base();
  m.layouts["main"].root.children[0].color = 16;
  EXPECT_EQ(validate(m).size(), 1u);

  m = base();
  m.layouts["main"].root.children[0].label = "Main has stopped";
  EXPECT_EQ(validate(m).size(), 1u);
}

TEST(Validate, StatementInvariants) {
  AppModel m = base();
  auto& body = m.units[0].methods[0].body;
  body.erase(body.begin());  // start before new
  EXPECT_EQ(validate(m).size(), 1u);

  m = base();
  m.units[0].methods[0].body.push_back(stmt::FragmentCommit{});
  EXPECT_EQ(validate(m).size(), 1u);

  m = base();
  m.units[0].methods[0].body.push_back(stmt::Call{"Ghost", "run"});
  const auto d = validate(m);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].category, Diagnostic::Category::Reference);
}

TEST(Validate, UnitInvariants) {
  AppModel m = base();
  m.units.push_back(UnitDef{"Loop", UnitKind::Inner, "Loop", {}, std::nullopt});
  EXPECT_FALSE(validate(m).empty());

  m = base();
  m.units[1].layout_ref.reset();
  EXPECT_EQ(validate(m).size(), 1u);

  m = base();
  m.units.push_back(m.units[1]);
  const auto d = validate(m);
  ASSERT_FALSE(d.empty());
  EXPECT_EQ(d[0].category, Diagnostic::Category::Duplicate);
}

TEST(Validate, RuntimeInvariants) {
  AppModel m = base();
  m.runtime.activities["Detail"].requires_login = true;
  EXPECT_EQ(validate(m).size(), 1u);  // no login activity
  m.runtime.login_activity = "Main";
  EXPECT_TRUE(validate(m).empty());
  m.runtime.activities["Ghost"] = {};
  EXPECT_EQ(validate(m).size(), 1u);
}

TEST(Validate, ReservedLabels) {
  EXPECT_TRUE(is_reserved_label("App has stopped"));
  EXPECT_TRUE(is_reserved_label("App keeps stopping"));
  EXPECT_TRUE(is_reserved_label("ALLOW"));
  EXPECT_TRUE(is_reserved_label("DENY"));
  EXPECT_FALSE(is_reserved_label("Allow"));
  EXPECT_FALSE(is_reserved_label("Stopped"));
}

TEST(Instrument, ExportsEverythingOnce) {
  AppModel m = base();
  ASSERT_FALSE(is_instrumented(m));
  const AppModel once = instrument(m);
  EXPECT_TRUE(is_instrumented(once));
  EXPECT_EQ(once.revision, m.revision + 1);
  for (const auto& a : once.manifest.declared_activities) EXPECT_TRUE(a.exported);

  AppModel reverted = once;
  for (auto& a : reverted.manifest.declared_activities) {
    const auto* orig = m.manifest.find(a.name);
    a.exported = orig->exported;
  }
  reverted.revision = m.revision;
  EXPECT_EQ(reverted, m);  // nothing else changed
}

TEST(Instrument, Idempotent) {
  const AppModel once = instrument(base());
  EXPECT_EQ(instrument(once), once);
  for (const auto& name : fixtures::corpus_names()) {
    const AppModel i = instrument(fixtures::load_fixture(name));
    EXPECT_EQ(instrument(i), i) << name;
  }
}

}  // namespace

// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "storyboard/app_format.hpp"
#include "storyboard/call_graph.hpp"
#include "storyboard/device.hpp"
#include "storyboard/explore.hpp"
#include "storyboard/icc.hpp"
#include "storyboard/instrument.hpp"
#include "support.hpp"

using namespace storyboard;

namespace {

ExtraLiteral int_extra(std::string key, std::int64_t v) {
  return ExtraLiteral{std::move(key), ExtraType::of(BasicType::Integer), BasicValue{v}};
}
ExtraLiteral str_extra(std::string key, std::string v) {
  return ExtraLiteral{std::move(key), ExtraType::of(BasicType::String), BasicValue{std::move(v)}};
}

Device installed(const std::string& fixture, std::uint64_t seed = 0) {
  Device d(seed);
  d.install(instrument(fixtures::load_fixture(fixture)));
  return d;
}

TEST(Device, InstallRequiresValidModelAndKeepsSeed) {
  Device d(42);
  EXPECT_THROW(d.app(), DeviceError);
  AppModel bad = fixtures::load_fixture("solo-mini");
  bad.units[0].layout_ref = "missing";
  EXPECT_THROW(d.install(bad), DeviceError);

  d.install(fixtures::load_fixture("perm-mini"));
  d.grant_permission("android.permission.CAMERA");
  d.set_logged_in(true);
  d.launch({"Main", {}});
  d.install(fixtures::load_fixture("solo-mini"));
  EXPECT_EQ(d.seed(), 42u);
  EXPECT_TRUE(d.state().back_stack.empty());
  EXPECT_TRUE(d.state().granted_permissions.empty());
  EXPECT_FALSE(d.state().logged_in);
}

TEST(Device, ProfileLabelsBindExtras) {
  Device d = installed("profile-mini");
  const LaunchCommand cmd{"Profile", {int_extra("userid", 2), str_extra("username", "Alice")}};
  EXPECT_EQ(to_am_command("profile-mini", cmd),
            "am start -n profile-mini/profile-mini.Profile --ei userid 2 --es username Alice");
  const LaunchOutcome o = d.launch(cmd);
  ASSERT_EQ(o.status, LaunchStatus::Rendered);
  EXPECT_EQ(o.actual_activity, "Profile");
  const LayoutTree dump = d.dump_layout();
  EXPECT_EQ(dump.find("uid")->label, "2");
  EXPECT_EQ(dump.find("name")->label, "Alice");
  EXPECT_EQ(o.page->layout_dump, dump);
}

TEST(Device, MissingExtrasCrash) {
  Device d = installed("profile-mini");
  const LaunchOutcome o = d.launch({"Profile", {int_extra("userid", 2)}});
  EXPECT_EQ(o.status, LaunchStatus::Crashed);
  EXPECT_EQ(o.cause, kCrashCause);
  EXPECT_FALSE(o.page);
  EXPECT_TRUE(d.state().back_stack.empty());
  EXPECT_TRUE(dump_shows_crash(d.dump_layout()));
  EXPECT_EQ(d.tap("crash_close_button").status, LaunchStatus::Dismissed);
  EXPECT_THROW(d.dump_layout(), DeviceError);
}

TEST(Device, WrongTypedExtraStillCrashes) {
  Device d = installed("profile-mini");
  EXPECT_EQ(d.launch({"Profile", {str_extra("userid", "2"), str_extra("username", "Alice")}}).status,
            LaunchStatus::Crashed);
}

TEST(Device, ExternalLaunchNeedsExport) {
  Device d;
  d.install(fixtures::load_fixture("profile-mini"));
  EXPECT_THROW(d.launch({"Profile", {}}), SecurityError);
  EXPECT_EQ(d.launch({"Main", {}}).status, LaunchStatus::Rendered);
  EXPECT_THROW(d.launch({"Nowhere", {}}), DeviceError);
}

TEST(Device, LoginGateRedirects) {
  Device d = installed("login-mini");
  const LaunchOutcome o = d.launch({"Account", {}});
  EXPECT_EQ(o.status, LaunchStatus::Redirected);
  EXPECT_EQ(o.actual_activity, "Login");
  EXPECT_EQ(o.describe(), "Redirected(Login)");
  d.force_stop();
  d.set_logged_in(true);
  EXPECT_EQ(d.launch({"Account", {}}).actual_activity, "Account");
}

TEST(Device, PermissionPromptAllow) {
  Device d = installed("perm-mini");
  LaunchOutcome o = d.launch({"Camera", {}});
  EXPECT_EQ(o.status, LaunchStatus::PermissionPrompt);
  EXPECT_TRUE(dump_shows_permission_prompt(d.dump_layout()));
  EXPECT_FALSE(dump_shows_crash(d.dump_layout()));
  o = d.tap("permission_allow_button");
  EXPECT_EQ(o.status, LaunchStatus::Rendered);
  EXPECT_EQ(o.actual_activity, "Camera");
  EXPECT_EQ(d.dump_layout().find("__placeholder")->label, "Feature not available on this device");

  d.force_stop();
  EXPECT_EQ(d.launch({"Camera", {}}).status, LaunchStatus::Rendered);
}

TEST(Device, PermissionPromptDeny) {
  Device d = installed("perm-mini");
  d.launch({"Main", {}});
  d.launch({"Camera", {}});
  const LaunchOutcome o = d.tap("permission_deny_button");
  EXPECT_EQ(o.status, LaunchStatus::Dismissed);
  EXPECT_EQ(o.actual_activity, "Main");
  EXPECT_TRUE(d.state().granted_permissions.empty());
  EXPECT_THROW(d.tap("nothing"), DeviceError);
}

TEST(Device, ForceStopIdempotentAndKeepsGrants) {
  Device d = installed("perm-mini");
  d.grant_permission("android.permission.CAMERA");
  d.set_logged_in(true);
  d.launch({"Main", {}});
  d.force_stop();
  const DeviceState once = d.state();
  d.force_stop();
  EXPECT_TRUE(d.state().back_stack.empty());
  EXPECT_EQ(d.state().granted_permissions, once.granted_permissions);
  EXPECT_TRUE(d.state().logged_in);
  EXPECT_FALSE(d.state().interstitial);
}

TEST(Device, TapOutcomes) {
  Device d = installed("perm-mini");
  d.grant_permission("android.permission.CAMERA");
  d.launch({"Camera", {}});
  EXPECT_THROW(d.tap("preview"), DeviceError);  // not clickable
  EXPECT_THROW(d.tap("missing"), DeviceError);
  const LaunchOutcome o = d.tap("thumbs");
  EXPECT_EQ(o.actual_activity, "Gallery");
  EXPECT_EQ(d.state().back_stack.size(), 2u);
  d.press_back();
  EXPECT_EQ(d.top_activity(), "Camera");

  Device plain = installed("perm-mini");
  plain.launch({"Main", {}});
  const LaunchOutcome none = plain.tap("capture");  // no click launch
  EXPECT_EQ(none.status, LaunchStatus::Rendered);
  EXPECT_EQ(plain.state().back_stack.size(), 1u);
}

TEST(Device, InvokeFollowsCallsAndLaunches) {
  Device d = installed("chain-mini");
  d.launch({"Main", {}});
  const auto launches = d.invoke({"Main", "onCreate"});
  ASSERT_EQ(launches.size(), 1u);
  EXPECT_EQ(launches[0].source, "Main");
  EXPECT_EQ(launches[0].requested, "Result");
  EXPECT_EQ(d.top_activity(), "Result");
}

TEST(Device, InvokeAttachesFragments) {
  Device d = installed("fragment-multi-mini");
  d.launch({"Gallery", {}});
  d.invoke({"Gallery", "onCreate"});
  EXPECT_EQ(d.top_entry()->attached_fragments, (std::set<std::string>{"PagerFragment", "ThumbFragment"}));
  const auto ms = context_methods(d.app(), "Gallery", d.top_entry()->attached_fragments);
  EXPECT_NE(std::find(ms.begin(), ms.end(), MethodId{"PageListener", "onLongPress"}), ms.end());
  EXPECT_EQ(std::find(ms.begin(), ms.end(), MethodId{"OrphanFragment", "onClick"}), ms.end());
}

TEST(Device, BackStackDiscipline) {
  Device d = installed("vespucci-click-mini");
  EXPECT_THROW(d.tap("x"), DeviceError);
  d.press_back();  // no-op on an empty stack
  d.launch({"Main", {}});
  d.launch({"PrefEditor", {}});
  EXPECT_EQ(d.state().back_stack.size(), 2u);
  d.press_back();
  d.press_back();
  EXPECT_FALSE(d.top_activity());
}

TEST(Device, SessionLogDeterministic) {
  auto run = [] {
    Device d = installed("perm-mini", 9);
    d.launch({"Main", {}});
    d.launch({"Camera", {}});
    d.tap("permission_allow_button");
    d.tap("thumbs");
    d.force_stop();
    return d.session_log();
  };
  const std::string log = run();
  EXPECT_EQ(log, run());
  EXPECT_NE(log.find("0 install perm-mini"), std::string::npos);
  EXPECT_NE(log.find("granted(android.permission.CAMERA)"), std::string::npos);
}

TEST(Device, RastersDependOnlyOnSeedAndPage) {
  for (const auto& name : fixtures::corpus_names()) {
    const AppModel m = instrument(fixtures::load_fixture(name));
    for (const auto& act : m.activity_names()) {
      Device a(3, DeviceOptions{true}), b(3, DeviceOptions{true});
      a.install(m);
      b.install(m);
      a.set_logged_in(true);
      b.set_logged_in(true);
      for (const auto& [n, rt] : m.runtime.activities)
        if (rt.requires_permission) {
          a.grant_permission(*rt.requires_permission);
          b.grant_permission(*rt.requires_permission);
        }
      b.launch({m.activity_names().front(), {}});  // different history
      const auto pa = a.launch({act, {}});
      const auto pb = b.launch({act, {}});
      ASSERT_TRUE(pa.page && pb.page) << name << " " << act;
      EXPECT_EQ(pa.page->raster, pb.page->raster) << name << " " << act;
      EXPECT_EQ(pa.page->raster, rasterize(pa.page->layout_dump, 3));
    }
  }
}

// The keyword scans flag a dump exactly when the device shows that dialog.
TEST(Device, KeywordScansMatchDeviceState) {
  for (const auto& name : fixtures::corpus_names()) {
    const AppModel m = instrument(fixtures::load_fixture(name));
    for (const auto& act : m.activity_names()) {
      Device d(1);
      d.install(m);
      d.launch({act, {}});
      const LayoutTree dump = d.dump_layout();
      const auto& dlg = d.state().interstitial;
      EXPECT_EQ(dump_shows_crash(dump), dlg && dlg->kind == Interstitial::Kind::Crash) << name << " " << act;
      EXPECT_EQ(dump_shows_permission_prompt(dump), dlg && dlg->kind == Interstitial::Kind::Permission)
          << name << " " << act;
    }
  }
}

TEST(Device, IccCommandsLaunchEveryRequiredExtraActivity) {
  for (const auto& name : fixtures::corpus_names()) {
    const AppModel m = instrument(fixtures::load_fixture(name));
    const IccTable icc = extract_icc(m, build_call_graph(m));
    const DummyValues dummies(m, 0);
    for (const auto& [act, rt] : m.runtime.activities) {
      if (!rt.crash_if_missing) continue;
      bool visible = true;
      for (const auto& req : rt.required_extras) {
        const auto& ex = icc.of(act).extras;
        visible = visible && std::find(ex.begin(), ex.end(), ExtraParam{req.key, req.type}) != ex.end();
      }
      if (!visible) continue;
      Device d;
      d.install(m);
      d.set_logged_in(true);
      if (rt.requires_permission) d.grant_permission(*rt.requires_permission);
      EXPECT_EQ(d.launch(synthesize_command(act, icc.of(act), dummies)).status, LaunchStatus::Rendered)
          << name << " " << act;
    }
  }
}

TEST(DummyValues, LayoutLiteralsFirstThenTable) {
  const DummyValues from_layout(fixtures::load_fixture("profile-mini"), 0);
  EXPECT_EQ(from_layout.value_for(BasicType::Integer, "Profile", "userid"), BasicValue{std::int64_t{2}});
  EXPECT_EQ(from_layout.value_for(BasicType::Boolean, "Profile", "x"), BasicValue{true});
  EXPECT_EQ(from_layout.value_for(BasicType::Float, "Profile", "x"), BasicValue{1.0});
  const DummyValues bare(fixtures::load_fixture("chain-mini"), 0);
  EXPECT_EQ(bare.value_for(BasicType::Integer, "A", "k"), BasicValue{std::int64_t{2}});
}

TEST(RunExhaustive, Vespucci) {
  const Atg atg = run_exhaustive(fixtures::load_fixture("vespucci-mini"));
  EXPECT_EQ(atg.edges(), (std::set<Edge>{{"Main", "PrefEditor"}, {"PrefEditor", "AdvancedPrefEditor"}}));
}

TEST(RunExhaustive, SingleActivityIsEmpty) { EXPECT_TRUE(run_exhaustive(fixtures::load_fixture("solo-mini")).empty()); }

TEST(RunExhaustive, ClickOnlyPairIsDynamic) {
  const Atg atg = run_exhaustive(fixtures::load_fixture("click-only-mini"));
  ASSERT_EQ(atg.size(), 1u);
  EXPECT_EQ(atg.pairs()[0].origin, Origin::Dynamic);
  EXPECT_EQ(atg.edges(), (std::set<Edge>{{"Main", "About"}}));
}

TEST(RunExhaustive, BudgetIsReported) {
  ExhaustiveOptions tight;
  tight.command_budget = 3;
  const Atg atg = run_exhaustive(fixtures::load_fixture("mixed-mini"), tight);
  ASSERT_FALSE(atg.diagnostics().empty());
  EXPECT_EQ(atg.diagnostics().back(), "command budget exhausted");
}

}  // namespace

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "storyboard/app_model.hpp"

namespace storyboard {

/// Marks every declared activity exported so the device accepts a direct
/// launch for it. Repackaging bumps `revision`; a model that is already
/// fully exported comes back unchanged.
AppModel instrument(const AppModel& model);

bool is_instrumented(const AppModel& model);

}  // namespace storyboard

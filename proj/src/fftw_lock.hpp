// Copyright 2026 The naec Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <mutex>

namespace naec::detail {

// FFTW's planner is not re-entrant; every plan create/destroy holds this.
std::mutex& fftw_planner_mutex();

}  // namespace naec::detail

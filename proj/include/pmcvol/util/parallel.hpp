#pragma once

#include <cstddef>

namespace pmcvol::util {

/// Worker count for `tasks` independent jobs: the OpenMP default, capped by the
/// PMC_THREADS environment variable when it holds a positive integer, and by `tasks`.
int worker_count(std::size_t tasks);

}  // namespace pmcvol::util

#include "pmcvol/util/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>

namespace pmcvol::util {

int worker_count(std::size_t tasks) {
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("PMC_THREADS")) {
        int cap = 0;
        const auto* end = env + std::strlen(env);
        const auto [ptr, ec] = std::from_chars(env, end, cap);
        if (ec == std::errc() && ptr == end && cap > 0) {
            n = std::min(n, cap);
        }
    }
    return std::max(1, std::min(n, static_cast<int>(std::max<std::size_t>(tasks, 1))));
}

}  // namespace pmcvol::util

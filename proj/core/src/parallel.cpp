#include "vk/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vk {

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void configure_threads_from_env() {
#ifdef _OPENMP
    const char* env = std::getenv("VK_THREADS");
    if (env == nullptr) return;
    try {
        const int cap = std::stoi(env);
        if (cap >= 1) omp_set_num_threads(std::min(cap, omp_get_num_procs()));
    } catch (const std::exception&) {
        // ignore malformed values and keep the runtime default
    }
#endif
}

}  // namespace vk

#pragma once

namespace vk {

/// Worker-thread count for data-parallel loops. Honors the VK_THREADS
/// environment variable as an upper bound; 1 when built without OpenMP.
int thread_count();

/// Re-read VK_THREADS and apply it to the OpenMP runtime.
void configure_threads_from_env();

}  // namespace vk

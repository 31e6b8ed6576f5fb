#ifndef RSFIELD_PARALLEL_HPP
#define RSFIELD_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace rsfield {

/// Global worker cap used when parallel_for is called with jobs <= 0.
/// Defaults to the hardware concurrency; the CLI sets it from --jobs.
void set_default_jobs(int jobs);
int default_jobs();

/// Runs body(i) for i in [0, n). Work items must write to disjoint state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int jobs = 0);

}  // namespace rsfield

#endif

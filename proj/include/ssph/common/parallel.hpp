#pragma once

namespace ssph {

/// Upper bound on worker threads used by particle loops and Monte Carlo
/// campaigns. Defaults to 1; the CLI sets it from --threads or
/// S_SPH_THREADS.
int thread_count();
void set_thread_count(int n);

}  // namespace ssph

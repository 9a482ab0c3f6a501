#pragma once

namespace fracspec::runtime {

/// Effective thread cap for parallel kernels. Defaults to the OpenMP limit,
/// clamped by the FRACSPEC_THREADS environment variable when set.
int max_threads();

/// Process-wide override (1 = serial). Values < 1 restore the default.
void set_max_threads(int n);

}  // namespace fracspec::runtime

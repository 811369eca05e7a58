#pragma once

namespace viscograd {

/// Thread cap for OpenMP kernels: VISCOGRAD_THREADS when set to a positive
/// integer, otherwise the OpenMP default.
int configured_threads();

/// Applies configured_threads() to the OpenMP runtime. Idempotent.
void apply_thread_limit();

} // namespace viscograd

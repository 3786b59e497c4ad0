#pragma once

namespace confluence {

// Serial paths are kept as the reference the parallel ones are tested against.
enum class Execution { serial, parallel };

// Caps the OpenMP worker count; n <= 0 leaves the runtime default.
void set_thread_limit(int n);
int thread_limit();

}  // namespace confluence

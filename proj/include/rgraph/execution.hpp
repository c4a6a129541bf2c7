#pragma once

namespace rgraph {

// Selects between the OpenMP kernels and the serial reference kernels they
// are tested against. Both produce the same result up to summation order.
enum class Execution { serial, parallel };

int max_threads();

}  // namespace rgraph

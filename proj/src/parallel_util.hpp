#pragma once

#include <exception>

#include "dio/intmath.hpp"

namespace dio {

// OpenMP loop over [0, n) whose body may throw: the first exception is
// captured and rethrown after the region so it never crosses the parallel
// boundary.  Each index must be independent of the others.
template <class Body>
void parallel_index_loop(i64 n, Body&& body) {
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(static)
  for (i64 i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(dio_parallel_index_loop_err)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace dio

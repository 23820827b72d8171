#pragma once

#include <vector>

namespace ndas {

/// Worker count for spectral loops and FFTs. Read once from NDAS_THREADS
/// (default 1); set_thread_count overrides it for the rest of the process.
int thread_count();
void set_thread_count(int threads);

/// Run body(row) for row in [0, rows) across the configured threads.
template <class F>
void parallel_rows(int rows, F&& body) {
  const int threads = thread_count();
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
  for (int r = 0; r < rows; ++r) body(r);
}

/// Sum of row_sum(row) over rows. Each row is reduced by one thread and the
/// row totals are added in row order, so the result does not depend on the
/// thread count.
template <class F>
double parallel_row_sum(int rows, F&& row_sum) {
  std::vector<double> partial(static_cast<std::size_t>(rows), 0.0);
  parallel_rows(rows, [&](int r) { partial[static_cast<std::size_t>(r)] = row_sum(r); });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace ndas

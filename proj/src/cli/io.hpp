#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sadik::cli {

/// Comma-separated output: one header line, then rows of numbers with 9
/// significant digits.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);

  void row(std::initializer_list<double> values);
  void row(std::span<const double> values);

 private:
  std::ostream& out_;
};

std::string format_number(double x);

/// "a:b:n" (n equally spaced points, n >= 2, a < b) or a single number.
std::vector<double> parse_grid(std::string_view text);

/// Reads a JSON object and turns it into "--key value" arguments. Booleans
/// become bare flags when true; an object {"t_min","t_max","n_points"} under
/// "grid" becomes "--<grid_flag> t_min:t_max:n_points".
std::vector<std::string> config_arguments(const std::string& path, std::string_view grid_flag);

/// Worker count from SADIK_FRAC_THREADS (default: hardware concurrency).
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. The
/// exception from the lowest failing index is rethrown after all workers
/// finish, so failures report the same way for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sadik::cli

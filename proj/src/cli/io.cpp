#include "io.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "sadik/core.hpp"

namespace sadik::cli {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header)
    : out_(out) {
  bool first = true;
  for (auto h : header) {
    out_ << (first ? "" : ",") << h;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::row(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    out_ << (i ? "," : "") << format_number(values[i]);
  }
  out_ << '\n';
}

namespace {

double parse_double(std::string_view s) {
  const std::string copy(s);
  char* end = nullptr;
  const double x = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size() || !std::isfinite(x)) {
    throw Error(ErrorCode::InvalidGrid, "not a number: '" + copy + "'");
  }
  return x;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  const auto first = text.find(':');
  if (first == std::string_view::npos) return {parse_double(text)};
  const auto second = text.find(':', first + 1);
  if (second == std::string_view::npos) {
    throw Error(ErrorCode::InvalidGrid, "grid must be a:b:n");
  }
  const double a = parse_double(text.substr(0, first));
  const double b = parse_double(text.substr(first + 1, second - first - 1));
  const auto count_text = text.substr(second + 1);
  long n = 0;
  const auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), n);
  if (ec != std::errc() || ptr != count_text.data() + count_text.size() || n < 2) {
    throw Error(ErrorCode::InvalidGrid, "grid point count must be an integer >= 2");
  }
  if (!(a < b)) throw Error(ErrorCode::InvalidGrid, "grid needs a < b");
  return linspace(a, b, static_cast<std::size_t>(n));
}

std::vector<std::string> config_arguments(const std::string& path, std::string_view grid_flag) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidParams, "cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidParams, "config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::InvalidParams, "config must be a JSON object");

  std::vector<std::string> args;
  for (const auto& [key, value] : j.items()) {
    if (key == "grid" && value.is_object()) {
      const double lo = value.at("t_min").get<double>();
      const double hi = value.at("t_max").get<double>();
      const long n = value.at("n_points").get<long>();
      args.push_back("--" + std::string(grid_flag));
      args.push_back(format_number(lo) + ":" + format_number(hi) + ":" + std::to_string(n));
    } else if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
    } else if (value.is_number()) {
      args.push_back("--" + key);
      args.push_back(value.is_number_integer() ? std::to_string(value.get<long>())
                                               : format_number(value.get<double>()));
    } else if (value.is_string()) {
      args.push_back("--" + key);
      args.push_back(value.get<std::string>());
    } else {
      throw Error(ErrorCode::InvalidParams, "config key '" + key + "' has unsupported type");
    }
  }
  return args;
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SADIK_FRAC_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failure_index = n;
  std::mutex failure_lock;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (i < failure_index) {
          failure = std::current_exception();
          failure_index = i;
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace sadik::cli

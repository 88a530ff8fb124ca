#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "grasslab/liealg.hpp"

namespace grasslab {

/// One checked identity: a residual against a tolerance.
struct IdentityEntry {
  std::string name;
  std::string anchor;  ///< the identity in words
  double residual = 0.0;
  double tolerance = 0.0;
  std::optional<double> value;  ///< measured quantity when it is not itself a residual
  bool pass() const { return residual < tolerance; }
};

struct VerifyOptions {
  std::string algebra = "so4";  ///< so4, sp2 or file:PATH (flow suite)
  int k = 3;
  int n = 6;
  int samples = 100;
  std::uint64_t seed = 1;
  std::optional<double> tol;  ///< overrides every tolerance when set
  int threads = 1;
};

/// so4, sp2, or file:PATH (orthonormalized). Throws InputError on an unknown
/// name and propagates loader errors.
LieAlgebra load_algebra(const std::string& spec);

/// Suites: rep, grass, flow, qk, all. Entries sorted by name. Throws
/// InputError on an unknown suite or invalid options.
std::vector<IdentityEntry> verify_suite(const std::string& suite, const VerifyOptions& opts);

/// Names and anchors every suite run reports (for catalog checks).
std::vector<std::pair<std::string, std::string>> identity_catalog(const std::string& suite, const VerifyOptions& opts);

/// Versioned JSON report with echoed tolerances.
nlohmann::json verify_report(const std::string& suite, const VerifyOptions& opts,
                             const std::vector<IdentityEntry>& entries);

/// Runs task(i) for i in [0, count) on up to `threads` workers.
template <class F>
void parallel_for(int count, int threads, F&& task);

/// Worker cap from GRASSLAB_THREADS (default: hardware concurrency, at least 1).
int default_threads();

}  // namespace grasslab

#include <thread>

namespace grasslab {

template <class F>
void parallel_for(int count, int threads, F&& task) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) task(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace grasslab

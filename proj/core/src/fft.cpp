// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "mpdo/error.hpp"

namespace mpdo::detail {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface
// is. Plans are created once per shape and kept for the process lifetime.
// FFTW_UNALIGNED keeps the chosen codelets independent of buffer alignment,
// which keeps results bitwise stable across calls.
class PlanCache {
 public:
  fftw_plan get(const std::vector<int>& dims, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(dims, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf,
                                   sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (plan == nullptr) throw Error(Errc::construction, "fftw plan creation failed");
    plans_.emplace(std::move(key), plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void fft(std::complex<double>* data, const std::vector<int>& dims, int sign) {
  fftw_plan plan = cache().get(dims, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
}

}  // namespace mpdo::detail

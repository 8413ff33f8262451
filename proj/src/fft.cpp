#include "fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "zenolab/errors.hpp"

namespace zenolab::detail {

struct UnitaryDft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  Plans() = default;
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
  ~Plans() {
    if (forward != nullptr) fftw_destroy_plan(forward);
    if (backward != nullptr) fftw_destroy_plan(backward);
  }
};

namespace {

// The FFTW planner is not thread-safe; execution on an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::shared_ptr<const UnitaryDft::Plans> cached_plans(std::size_t n) {
  static std::map<std::size_t, std::shared_ptr<const UnitaryDft::Plans>> cache;
  std::lock_guard lock(planner_mutex());
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  // In-place, unaligned, estimate-only plans: deterministic codelet choice
  // regardless of where std::vector places its buffer.
  std::vector<std::complex<double>> scratch(n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  auto plans = std::make_shared<UnitaryDft::Plans>();
  const int len = static_cast<int>(n);
  plans->forward = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans->backward = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plans->forward == nullptr || plans->backward == nullptr) {
    throw std::runtime_error("FFTW planning failed");
  }
  cache.emplace(n, plans);
  return plans;
}

std::vector<std::complex<double>> execute(fftw_plan plan, std::span<const std::complex<double>> in,
                                          std::size_t n) {
  if (in.size() != n) throw ShapeError("DFT input length does not match transform size");
  std::vector<std::complex<double>> out(in.begin(), in.end());
  auto* buf = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, buf, buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& c : out) c *= scale;
  return out;
}

}  // namespace

UnitaryDft::UnitaryDft(std::size_t n) : n_(n), plans_(cached_plans(n)) {}

std::vector<std::complex<double>> UnitaryDft::forward(std::span<const std::complex<double>> in) const {
  return execute(plans_->forward, in, n_);
}

std::vector<std::complex<double>> UnitaryDft::inverse(std::span<const std::complex<double>> in) const {
  return execute(plans_->backward, in, n_);
}

}  // namespace zenolab::detail

#pragma once

// Unitary discrete Fourier transform backed by FFTW.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace zenolab::detail {

/// c_m = n^(-1/2) sum_j psi_j exp(-2 pi i j m / n) and its inverse.
/// Both directions preserve the Euclidean norm. Instances share cached plans
/// and are safe to use from several threads at once.
class UnitaryDft {
 public:
  explicit UnitaryDft(std::size_t n);

  std::size_t size() const { return n_; }
  std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in) const;
  std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> in) const;

  struct Plans;

 private:
  std::size_t n_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace zenolab::detail

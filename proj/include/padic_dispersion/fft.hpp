#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <vector>

#include "padic_dispersion/arithmetic.hpp"

namespace padic {

/// exp(sign * 2 pi i k / N) for k in [0, N).
inline std::vector<std::complex<double>> roots_of_unity(std::uint64_t N, int sign) {
  std::vector<std::complex<double>> w(N);
  for (std::uint64_t k = 0; k < N; ++k) {
    const long double angle = sign * 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(k) /
                              static_cast<long double>(N);
    w[k] = {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
  }
  return w;
}

/**
 * In-place n-dimensional DFT of a row-major cube of side N:
 *   A[k] = sum_j a[j] exp(sign 2 pi i [j, k] / N).
 * The FFTW plan is built once (FFTW_ESTIMATE, so it does not depend on timing) and
 * executed on caller arrays; execute() is safe to call concurrently.
 */
class DftPlan {
 public:
  DftPlan(std::uint64_t N, std::size_t n, int sign) : N_(N), total_(checked_pow(N, static_cast<std::int64_t>(n))) {
    std::vector<int> dims(n, static_cast<int>(N));
    std::vector<std::complex<double>> scratch(total_);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft(static_cast<int>(n), dims.data(), buf, buf, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD,
                          FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  DftPlan(const DftPlan&) = delete;
  DftPlan& operator=(const DftPlan&) = delete;
  ~DftPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }

  std::uint64_t side() const noexcept { return N_; }
  std::uint64_t size() const noexcept { return total_; }

  void execute(std::vector<std::complex<double>>& a) const {
    auto* buf = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(plan_, buf, buf);
  }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

  std::uint64_t N_;
  std::uint64_t total_;
  fftw_plan plan_;
};

}  // namespace padic

#include "fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace cwss::detail {
namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.fwd);
      fftw_destroy_plan(p.inv);
    }
  }

  PlanPair get(std::size_t n) {
    std::lock_guard lock(mu_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    // Planning with FFTW_ESTIMATE does not touch the buffers.
    CVector scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p{fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, flags),
               fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, flags)};
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(std::span<const Complex> in, std::span<Complex> out, bool inverse) {
  const std::size_t n = in.size();
  if (out.size() != n) throw InvalidArgument("dft: output length mismatch");
  if (n == 0) return;
  const PlanPair p = cache().get(n);
  if (out.data() != in.data()) std::copy(in.begin(), in.end(), out.begin());
  auto* buf = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(inverse ? p.inv : p.fwd, buf, buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : out) v *= scale;
}

}  // namespace

void dft_forward(std::span<const Complex> in, std::span<Complex> out) {
  run(in, out, false);
}

void dft_inverse(std::span<const Complex> in, std::span<Complex> out) {
  run(in, out, true);
}

}  // namespace cwss::detail

#include "gowerslab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace gowerslab {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (size, direction) and kept.
std::mutex g_plan_mutex;
std::map<std::pair<std::size_t, int>, fftw_plan> g_plans;

fftw_plan plan_for(std::size_t n, int sign) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = g_plans.find({n, sign});
  if (it != g_plans.end()) return it->second;
  std::vector<std::complex<double>> scratch(n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  g_plans.emplace(std::make_pair(n, sign), p);
  return p;
}

}  // namespace

std::vector<std::complex<double>> dft(std::vector<std::complex<double>> x, bool inverse) {
  if (x.empty()) return x;
  const int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
  fftw_plan p = plan_for(x.size(), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(x.data());
  fftw_execute_dft(p, buf, buf);
  return x;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace gowerslab

// Compiled with -mavx2 only; callers reach it through the dispatch table
// after a runtime CPU check.
#include "bfe/simd/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace bfe::simd {
namespace {

constexpr std::size_t kLanes = 4;

void weighted_row_sum(const double* const* rows, const double* weights,
                      std::size_t taps, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < taps; ++k) {
      const __m256d w = _mm256_set1_pd(weights[k]);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(w, _mm256_loadu_pd(rows[k] + i)));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < taps; ++k) acc = acc + weights[k] * rows[k][i];
    out[i] = acc;
  }
}

inline __m256d abs_pd(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

double gvf_row_update(const GvfRow& r) {
  const __m256d mu = _mm256_set1_pd(r.mu);
  const __m256d dt = _mm256_set1_pd(r.dt);
  const __m256d four = _mm256_set1_pd(4.0);
  __m256d worst4 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= r.n; i += kLanes) {
    const __m256d uc = _mm256_loadu_pd(r.u_mid + i);
    const __m256d vc = _mm256_loadu_pd(r.v_mid + i);
    const __m256d lap_u = _mm256_sub_pd(
        _mm256_add_pd(_mm256_add_pd(_mm256_loadu_pd(r.u_up + i), _mm256_loadu_pd(r.u_down + i)),
                      _mm256_add_pd(_mm256_loadu_pd(r.u_mid + i - 1), _mm256_loadu_pd(r.u_mid + i + 1))),
        _mm256_mul_pd(four, uc));
    const __m256d lap_v = _mm256_sub_pd(
        _mm256_add_pd(_mm256_add_pd(_mm256_loadu_pd(r.v_up + i), _mm256_loadu_pd(r.v_down + i)),
                      _mm256_add_pd(_mm256_loadu_pd(r.v_mid + i - 1), _mm256_loadu_pd(r.v_mid + i + 1))),
        _mm256_mul_pd(four, vc));
    const __m256d m = _mm256_loadu_pd(r.mag2 + i);
    const __m256d du = _mm256_sub_pd(_mm256_mul_pd(mu, lap_u),
                                     _mm256_mul_pd(_mm256_sub_pd(uc, _mm256_loadu_pd(r.fx + i)), m));
    const __m256d dv = _mm256_sub_pd(_mm256_mul_pd(mu, lap_v),
                                     _mm256_mul_pd(_mm256_sub_pd(vc, _mm256_loadu_pd(r.fy + i)), m));
    _mm256_storeu_pd(r.u_out + i, _mm256_add_pd(uc, _mm256_mul_pd(dt, du)));
    _mm256_storeu_pd(r.v_out + i, _mm256_add_pd(vc, _mm256_mul_pd(dt, dv)));
    worst4 = _mm256_max_pd(worst4, _mm256_max_pd(abs_pd(du), abs_pd(dv)));
  }
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, worst4);
  double worst = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
  for (; i < r.n; ++i) {
    const double uc = r.u_mid[i];
    const double vc = r.v_mid[i];
    const double lap_u = ((r.u_up[i] + r.u_down[i]) + (r.u_mid[i - 1] + r.u_mid[i + 1])) - 4.0 * uc;
    const double lap_v = ((r.v_up[i] + r.v_down[i]) + (r.v_mid[i - 1] + r.v_mid[i + 1])) - 4.0 * vc;
    const double du = r.mu * lap_u - (uc - r.fx[i]) * r.mag2[i];
    const double dv = r.mu * lap_v - (vc - r.fy[i]) * r.mag2[i];
    r.u_out[i] = uc + r.dt * du;
    r.v_out[i] = vc + r.dt * dv;
    worst = std::fmax(worst, std::fmax(std::fabs(du), std::fabs(dv)));
  }
  return worst;
}

double min_sq_distance(double px, double py, const double* xs, const double* ys,
                       std::size_t n) {
  const __m256d qx = _mm256_set1_pd(px);
  const __m256d qy = _mm256_set1_pd(py);
  __m256d best4 = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), qx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), qy);
    best4 = _mm256_min_pd(best4, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
  }
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, best4);
  double best = std::fmin(std::fmin(lanes[0], lanes[1]), std::fmin(lanes[2], lanes[3]));
  for (; i < n; ++i) {
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    best = std::fmin(best, dx * dx + dy * dy);
  }
  return best;
}

const KernelTable table{&weighted_row_sum, &gvf_row_update, &min_sq_distance};

}  // namespace

namespace detail {
const KernelTable* avx2_table() { return &table; }
}

}  // namespace bfe::simd

#else

namespace bfe::simd::detail {
const KernelTable* avx2_table() { return nullptr; }
}

#endif

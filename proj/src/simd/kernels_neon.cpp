#include "bfe/simd/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <cmath>
#include <limits>

namespace bfe::simd {
namespace {

constexpr std::size_t kLanes = 2;

void weighted_row_sum(const double* const* rows, const double* weights,
                      std::size_t taps, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < taps; ++k) {
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(weights[k]), vld1q_f64(rows[k] + i)));
    }
    vst1q_f64(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < taps; ++k) acc = acc + weights[k] * rows[k][i];
    out[i] = acc;
  }
}

double gvf_row_update(const GvfRow& r) {
  const float64x2_t mu = vdupq_n_f64(r.mu);
  const float64x2_t dt = vdupq_n_f64(r.dt);
  const float64x2_t four = vdupq_n_f64(4.0);
  float64x2_t worst2 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= r.n; i += kLanes) {
    const float64x2_t uc = vld1q_f64(r.u_mid + i);
    const float64x2_t vc = vld1q_f64(r.v_mid + i);
    const float64x2_t lap_u = vsubq_f64(
        vaddq_f64(vaddq_f64(vld1q_f64(r.u_up + i), vld1q_f64(r.u_down + i)),
                  vaddq_f64(vld1q_f64(r.u_mid + i - 1), vld1q_f64(r.u_mid + i + 1))),
        vmulq_f64(four, uc));
    const float64x2_t lap_v = vsubq_f64(
        vaddq_f64(vaddq_f64(vld1q_f64(r.v_up + i), vld1q_f64(r.v_down + i)),
                  vaddq_f64(vld1q_f64(r.v_mid + i - 1), vld1q_f64(r.v_mid + i + 1))),
        vmulq_f64(four, vc));
    const float64x2_t m = vld1q_f64(r.mag2 + i);
    const float64x2_t du = vsubq_f64(vmulq_f64(mu, lap_u), vmulq_f64(vsubq_f64(uc, vld1q_f64(r.fx + i)), m));
    const float64x2_t dv = vsubq_f64(vmulq_f64(mu, lap_v), vmulq_f64(vsubq_f64(vc, vld1q_f64(r.fy + i)), m));
    vst1q_f64(r.u_out + i, vaddq_f64(uc, vmulq_f64(dt, du)));
    vst1q_f64(r.v_out + i, vaddq_f64(vc, vmulq_f64(dt, dv)));
    worst2 = vmaxq_f64(worst2, vmaxq_f64(vabsq_f64(du), vabsq_f64(dv)));
  }
  double worst = std::fmax(vgetq_lane_f64(worst2, 0), vgetq_lane_f64(worst2, 1));
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
  const float64x2_t qx = vdupq_n_f64(px);
  const float64x2_t qy = vdupq_n_f64(py);
  float64x2_t best2 = vdupq_n_f64(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), qx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), qy);
    best2 = vminq_f64(best2, vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)));
  }
  double best = std::fmin(vgetq_lane_f64(best2, 0), vgetq_lane_f64(best2, 1));
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
const KernelTable* neon_table() { return &table; }
}

}  // namespace bfe::simd

#else

namespace bfe::simd::detail {
const KernelTable* neon_table() { return nullptr; }
}

#endif

#include "bfe/simd/kernels.hpp"

#include <cmath>
#include <limits>

namespace bfe::simd {
namespace {

void weighted_row_sum(const double* const* rows, const double* weights,
                      std::size_t taps, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < taps; ++k) acc = acc + weights[k] * rows[k][i];
    out[i] = acc;
  }
}

double gvf_row_update(const GvfRow& r) {
  double worst = 0.0;
  for (std::size_t i = 0; i < r.n; ++i) {
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
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    best = std::fmin(best, dx * dx + dy * dy);
  }
  return best;
}

}  // namespace

namespace detail {
const KernelTable scalar_table{&weighted_row_sum, &gvf_row_update, &min_sq_distance};
}

}  // namespace bfe::simd

#pragma once

#include <cstddef>

// Data-parallel inner loops used by the raster and snake modules. Every
// kernel has a scalar reference and vector variants that evaluate the same
// expression tree lane by lane, so results are bit-identical across levels
// (the build disables floating-point contraction).

namespace bfe::simd {

enum class Level { Scalar, Avx2, Neon };

/// One row of an explicit GVF diffusion step. Row pointers address the
/// first interior element of padded arrays: u_mid[-1] and u_mid[n] must be
/// valid ghost cells.
struct GvfRow {
  const double* u_up;
  const double* u_mid;
  const double* u_down;
  const double* v_up;
  const double* v_mid;
  const double* v_down;
  const double* fx;
  const double* fy;
  const double* mag2;
  double* u_out;
  double* v_out;
  std::size_t n;
  double mu;
  double dt;
};

struct KernelTable {
  /// out[i] = sum_k weights[k] * rows[k][i], accumulated in k order.
  void (*weighted_row_sum)(const double* const* rows, const double* weights,
                           std::size_t taps, double* out, std::size_t n);
  /// Writes the updated u/v row and returns max |du/dt|, |dv/dt| over it.
  double (*gvf_row_update)(const GvfRow& row);
  /// min_i (xs[i]-px)^2 + (ys[i]-py)^2; +inf when n == 0.
  double (*min_sq_distance)(double px, double py, const double* xs,
                            const double* ys, std::size_t n);
};

const char* name(Level level);
bool supported(Level level);

/// Best supported level at startup, unless BFE_SIMD=scalar|avx2|neon is set.
Level active_level();
/// Throws bfe::Error when the level is not supported on this CPU.
void set_level(Level level);

const KernelTable& kernels();
const KernelTable& kernels(Level level);

namespace detail {
extern const KernelTable scalar_table;
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();
}  // namespace detail

}  // namespace bfe::simd

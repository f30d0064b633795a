#pragma once

#include <span>
#include <string>
#include <vector>

#include "bfe/geometry.hpp"
#include "bfe/lidar.hpp"
#include "bfe/pentadiagonal.hpp"
#include "bfe/raster.hpp"

namespace bfe {

// Pixel frame: pixel (i, j) covers [i, i+1) x [j, j+1); its center is at
// (i + 0.5, j + 0.5). Fields are sampled at pixel centers.

enum class SnakeMode { Basic, Gvf, Proposed };

const char* to_string(SnakeMode mode);
SnakeMode parse_snake_mode(const std::string& text);

struct SnakeParams {
  double alpha = 0.01;  // tension
  double beta = 0.01;   // rigidity
  double gamma = 0.05;  // implicit step weight (inverse step size)
  int max_iters = 400;
  double epsilon = 0.1;  // px, convergence threshold on max displacement
  int resample_every = 10;
  SnakeMode mode = SnakeMode::Proposed;
};

struct ImageEnergyParams {
  double w_line = 0.04;
  double w_edge = 2.0;
  double w_term = 0.01;
  double sigma = 10.0;
  double kappa = 1e-6;  // regularizes the termination-energy denominator
};

struct GvfParams {
  double mu = 0.2;
  int iters = 200;
};

struct ShapeSimParams {
  double delta = 50.0;  // px^2
  double weight = 1.0;
};

struct SnakeConfig {
  SnakeParams snake;
  ImageEnergyParams energy;
  GvfParams gvf;
  ShapeSimParams shape;
};

void validate(const SnakeConfig& config);

struct SnakeContour {
  std::vector<Point2> points;
};

/// Raw (unnormalized, unweighted) Kass energy terms of the smoothed image.
struct EnergyTerms {
  Field line;  // C
  Field edge;  // -(C_x^2 + C_y^2)
  Field term;  // level-line curvature
};

EnergyTerms image_energy_terms(const GrayImage& gray, const ImageEnergyParams& p);
/// Each term min-max normalized to [0, 1] (constant terms become 0), then
/// weighted and summed.
Field image_energy(const GrayImage& gray, const ImageEnergyParams& p);
Field normalize_min_max(const Field& f);

/// Planar vector field sampled at pixel centers.
struct VectorField {
  Field x, y;
};

struct GvfField {
  Field u, v;
  double mu = 0.0;
  int iters = 0;        // iterations actually run
  double residual = 0;  // max |u_t|, |v_t| at the last iterate
  double time_step = 0;
};

/// Gradient vector flow of f = -energy by explicit time stepping; stops
/// after `iters` steps or when the update residual drops below
/// 1e-4 * max |grad f|.
GvfField compute_gvf(const Field& energy, double mu, int iters);
/// Max-abs over interior pixels of mu Lap(u) - (u - f_x)|grad f|^2 and the
/// v analogue.
double gvf_euler_residual(const GvfField& gvf, const Field& energy);

/// -grad(energy), the external force of the basic snake.
VectorField potential_force(const Field& energy);
VectorField as_vector_field(const GvfField& gvf);

/// Bilinear sample in the pixel frame; zero outside the pixel-center hull.
Point2 sample(const VectorField& field, Point2 p);

/// 1 - exp(-d_H^2 / delta), d_H the discrete point-set Hausdorff distance.
double shape_sim_energy(std::span<const Point2> snake, std::span<const Point2> reference, double delta);
/// Per-point -weight * central difference (h = 1 px) of shape_sim_energy.
std::vector<Point2> shape_force(std::span<const Point2> snake, std::span<const Point2> reference,
                                const ShapeSimParams& p, double h = 1.0);

/// Cyclic operator A of the internal forces: A x = -(alpha x'' - beta x'''').
CyclicPentadiagonal internal_system(std::size_t n, const SnakeParams& p);

/// One semi-implicit step (gamma I + A) x_new = gamma x_old + F, where F is
/// the sampled external field plus `extra_force` (may be empty). New points
/// are clamped to the pixel-center hull of the field.
SnakeContour evolve_step(const SnakeContour& snake, const VectorField& field, std::span<const Point2> extra_force,
                         const SnakeParams& params, const CyclicPentadiagonal& system);
SnakeContour evolve_step(const SnakeContour& snake, const VectorField& field, std::span<const Point2> extra_force,
                         const SnakeParams& params);

/// External field for the configured mode: -grad(E_img) for basic, the GVF
/// for gvf and proposed. Computed once per image and shared read-only.
VectorField external_field(const GrayImage& gray, const SnakeConfig& config);

struct SnakeRun {
  SnakeContour contour;
  int iterations = 0;
  bool converged = false;
  double last_displacement = 0.0;
};

/// Number of snake points for an initial boundary: max(32, round(perimeter / 2)).
std::size_t snake_point_count(std::span<const Point2> boundary);
/// Shape reference: the closed boundary densified to ~1 px spacing.
std::vector<Point2> shape_reference(std::span<const Point2> boundary);

SnakeRun run_snake(const ProjectedBoundary& init, const VectorField& field, int width, int height,
                   const SnakeConfig& config);
SnakeRun run_snake(const ProjectedBoundary& init, const GrayImage& gray, const SnakeConfig& config);

}  // namespace bfe

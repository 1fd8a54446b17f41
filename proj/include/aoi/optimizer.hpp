#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "aoi/analytic.hpp"
#include "aoi/model.hpp"
#include "aoi/rng.hpp"

namespace aoi {

struct SingularNormalEquations : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Feasible region: z_matrix * rates < b_vector elementwise. Rows are the
// processing stability row, the transmission stability row (dropped when
// parallel to the first, keeping the tighter one), then -I for positivity.
struct ConstraintSystem {
  std::vector<std::vector<double>> z_matrix;
  std::vector<double> b_vector;
  std::vector<double> row_norms;
  std::size_t dimension = 0;
};

struct ConeBasis {
  std::vector<std::size_t> binding_indices;
  std::vector<std::vector<double>> normal_generators;   // the binding rows
  std::vector<std::vector<double>> tangent_generators;  // search directions
};

struct GapIterate {
  std::size_t iteration = 0;
  double objective = 0.0;
  double phi = 0.0;  // current step scale
  std::size_t n_binding = 0;
  bool accepted = false;
  std::vector<double> rates;
};

struct GapTrace {
  std::vector<GapIterate> iterates;
};

struct GapOptions {
  std::uint64_t seed = 1;
  double phi_min = 1e-5;
  std::size_t max_iterations = 100000;
  RateVector start;  // empty: sample a feasible point from the seed
};

struct GapResult {
  RateVector rates;
  double objective = 0.0;
  GapTrace trace;
  std::size_t iterations = 0;
  double final_phi = 0.0;
  bool hit_iteration_cap = false;
};

using Objective = std::function<double(const RateVector&)>;

ConstraintSystem build_constraints(const std::vector<double>& processing,
                                   const std::vector<double>& transmission);
ConstraintSystem build_constraints(const SystemConfig& config);

// indices of rows whose hyperplane lies within Euclidean distance epsilon
std::vector<std::size_t> binding_set(const ConstraintSystem& cs, const RateVector& point,
                                     double epsilon);

// Search directions spanning the feasible tangent cone of the binding set:
// rows of the orthogonal-complement projector of the independent binding
// rows, their negations, and the rows moving off each binding face. Zero rows
// are dropped, and any candidate with a positive component along any binding
// row (binding rows may be linearly dependent) is discarded so that every
// returned direction respects polarity against the full binding set.
ConeBasis tangent_generators(const ConstraintSystem& cs, const std::vector<std::size_t>& binding);

RateVector sample_feasible_point(const std::vector<double>& processing,
                                 const std::vector<double>& transmission, rng::Stream& stream);

double initial_step(const std::vector<double>& processing,
                    const std::vector<double>& transmission);
double initial_step(const SystemConfig& config);

RateVector ppt_baseline(const std::vector<double>& processing,
                        const std::vector<double>& transmission, double k);
RateVector ppt_baseline(const SystemConfig& config, double k);

GapResult gap_optimize(const SystemConfig& config, const GapOptions& options);
GapResult gap_optimize(const SystemConfig& config, const Objective& objective,
                       const GapOptions& options);

}  // namespace aoi

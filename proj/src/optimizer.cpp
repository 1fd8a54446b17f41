#include "aoi/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

namespace aoi {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Cholesky factorization and solve for the small SPD normal-equation systems
// (at most J x J with J ~ 10).
struct Cholesky {
  std::vector<std::vector<double>> l;
  std::size_t m = 0;

  explicit Cholesky(const std::vector<std::vector<double>>& a) : l(a), m(a.size()) {
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs(l[i][i]));
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t r = c; r < m; ++r) {
        double s = l[r][c];
        for (std::size_t k = 0; k < c; ++k) s -= l[r][k] * l[c][k];
        if (r == c) {
          if (!(s > 1e-14 * scale))
            throw SingularNormalEquations(
                "normal equations singular after independence filtering");
          l[c][c] = std::sqrt(s);
        } else {
          l[r][c] = s / l[c][c];
        }
      }
    }
  }

  std::vector<double> solve(std::vector<double> rhs) const {
    for (std::size_t r = 0; r < m; ++r) {
      double s = rhs[r];
      for (std::size_t k = 0; k < r; ++k) s -= l[r][k] * rhs[k];
      rhs[r] = s / l[r][r];
    }
    for (std::size_t r = m; r-- > 0;) {
      double s = rhs[r];
      for (std::size_t k = r + 1; k < m; ++k) s -= l[k][r] * rhs[k];
      rhs[r] = s / l[r][r];
    }
    return rhs;
  }
};

void check_moment_sizes(const std::vector<double>& zp, const std::vector<double>& zt) {
  if (zp.empty() || zp.size() != zt.size())
    throw std::invalid_argument("service moment vectors must be non-empty and of equal size");
}

}  // namespace

ConstraintSystem build_constraints(const std::vector<double>& processing,
                                   const std::vector<double>& transmission) {
  check_moment_sizes(processing, transmission);
  const std::size_t n = processing.size();
  ConstraintSystem cs;
  cs.dimension = n;

  // the two stability rows collapse to the tighter one when parallel
  const double scale = dot(transmission, processing) / dot(processing, processing);
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = transmission[i] - scale * processing[i];
    residual += d * d;
  }
  const bool parallel = std::sqrt(residual) <= 1e-12 * l2_norm(transmission);
  if (parallel) {
    cs.z_matrix.push_back(scale > 1.0 ? transmission : processing);
    cs.b_vector.push_back(1.0);
  } else {
    cs.z_matrix.push_back(processing);
    cs.z_matrix.push_back(transmission);
    cs.b_vector.push_back(1.0);
    cs.b_vector.push_back(1.0);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> row(n, 0.0);
    row[j] = -1.0;
    cs.z_matrix.push_back(std::move(row));
    cs.b_vector.push_back(0.0);
  }
  cs.row_norms.resize(cs.z_matrix.size());
  for (std::size_t l = 0; l < cs.z_matrix.size(); ++l) cs.row_norms[l] = l2_norm(cs.z_matrix[l]);
  return cs;
}

ConstraintSystem build_constraints(const SystemConfig& config) {
  const ServiceMoments m = service_moments(config);
  return build_constraints(m.processing, m.transmission);
}

std::vector<std::size_t> binding_set(const ConstraintSystem& cs, const RateVector& point,
                                     double epsilon) {
  if (point.size() != cs.dimension)
    throw std::invalid_argument("point size does not match the constraint system");
  std::vector<std::size_t> out;
  for (std::size_t l = 0; l < cs.z_matrix.size(); ++l) {
    const double distance = (cs.b_vector[l] - dot(cs.z_matrix[l], point)) / cs.row_norms[l];
    if (distance <= epsilon) out.push_back(l);
  }
  return out;
}

ConeBasis tangent_generators(const ConstraintSystem& cs, const std::vector<std::size_t>& binding) {
  const std::size_t n = cs.dimension;
  ConeBasis out;
  out.binding_indices = binding;
  for (std::size_t l : binding) {
    if (l >= cs.z_matrix.size()) throw std::out_of_range("binding index out of range");
    out.normal_generators.push_back(cs.z_matrix[l]);
  }

  if (binding.empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> e(n, 0.0);
      e[j] = 1.0;
      out.tangent_generators.push_back(std::move(e));
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> e(n, 0.0);
      e[j] = -1.0;
      out.tangent_generators.push_back(std::move(e));
    }
    return out;
  }

  // maximal linearly independent subset of the binding rows, in index order
  std::vector<std::vector<double>> f;           // selected rows
  std::vector<std::vector<double>> orthobasis;  // their orthonormalization
  for (std::size_t l : binding) {
    std::vector<double> v = cs.z_matrix[l];
    for (const auto& q : orthobasis) {
      const double c = dot(v, q);
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * q[i];
    }
    const double rnorm = l2_norm(v);
    if (rnorm > 1e-10 * cs.row_norms[l]) {
      for (std::size_t i = 0; i < n; ++i) v[i] /= rnorm;
      orthobasis.push_back(std::move(v));
      f.push_back(cs.z_matrix[l]);
    }
  }
  const std::size_t m = f.size();

  std::vector<std::vector<double>> fft(m, std::vector<double>(m, 0.0));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) fft[r][c] = dot(f[r], f[c]);
  const Cholesky chol(fft);

  // g = (F F^T)^{-1} F, solved column by column
  std::vector<std::vector<double>> g(m, std::vector<double>(n, 0.0));
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> rhs(m);
    for (std::size_t r = 0; r < m; ++r) rhs[r] = f[r][c];
    const std::vector<double> col = chol.solve(std::move(rhs));
    for (std::size_t r = 0; r < m; ++r) g[r][c] = col[r];
  }

  // candidates: projector rows onto the complement of span(F), their
  // negations, then the rows moving off each face
  std::vector<std::vector<double>> candidates;
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> row(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      double s = r == c ? 1.0 : 0.0;
      for (std::size_t k = 0; k < m; ++k) s -= f[k][r] * g[k][c];
      row[c] = s;
    }
    candidates.push_back(std::move(row));
  }
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> row(n);
    for (std::size_t c = 0; c < n; ++c) row[c] = -candidates[r][c];
    candidates.push_back(std::move(row));
  }
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<double> row(n);
    for (std::size_t c = 0; c < n; ++c) row[c] = -g[r][c];
    candidates.push_back(std::move(row));
  }

  for (auto& s : candidates) {
    const double norm = l2_norm(s);
    if (norm < 1e-12) continue;
    bool ok = true;
    for (std::size_t l : binding) {
      if (dot(s, cs.z_matrix[l]) > 1e-10 * norm * cs.row_norms[l]) {
        ok = false;
        break;
      }
    }
    if (ok) out.tangent_generators.push_back(std::move(s));
  }
  return out;
}

RateVector sample_feasible_point(const std::vector<double>& processing,
                                 const std::vector<double>& transmission, rng::Stream& stream) {
  check_moment_sizes(processing, transmission);
  const std::size_t n = processing.size();
  const double nd = static_cast<double>(n);
  RateVector x(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double cap = 0.999 * std::min(1.0 / (nd * processing[j]), 1.0 / (nd * transmission[j]));
    x[j] = stream.next_u01() * cap;
  }
  return x;
}

double initial_step(const std::vector<double>& processing,
                    const std::vector<double>& transmission) {
  check_moment_sizes(processing, transmission);
  double step = 0.0;
  for (double z : processing) step = std::max(step, 1.0 / z);
  for (double z : transmission) step = std::max(step, 1.0 / z);
  return step;
}

double initial_step(const SystemConfig& config) {
  const ServiceMoments m = service_moments(config);
  return initial_step(m.processing, m.transmission);
}

RateVector ppt_baseline(const std::vector<double>& processing,
                        const std::vector<double>& transmission, double k) {
  check_moment_sizes(processing, transmission);
  if (!(k > 1.0)) throw std::invalid_argument("ppt_baseline requires k > 1");
  const std::size_t n = processing.size();
  RateVector x(n);
  for (std::size_t j = 0; j < n; ++j)
    x[j] = std::min(1.0 / processing[j], 1.0 / transmission[j]) / (k * static_cast<double>(n));
  return x;
}

RateVector ppt_baseline(const SystemConfig& config, double k) {
  const ServiceMoments m = service_moments(config);
  return ppt_baseline(m.processing, m.transmission, k);
}

GapResult gap_optimize(const SystemConfig& config, const Objective& objective,
                       const GapOptions& options) {
  validate(config);
  PaoiEvaluator evaluator(config);
  const std::vector<double> zp = evaluator.moments().processing;
  const std::vector<double> zt = evaluator.moments().transmission;
  auto evaluate = [&](const RateVector& x) {
    return objective ? objective(x) : evaluator.objective(x);
  };

  const ConstraintSystem cs = build_constraints(zp, zt);
  rng::Stream stream(options.seed, rng::kSearchStream);
  RateVector x = options.start.empty() ? sample_feasible_point(zp, zt, stream) : options.start;
  if (x.size() != zp.size())
    throw std::invalid_argument("start point size does not match the system");
  double f = evaluate(x);

  double phi = initial_step(zp, zt);
  const double eps_max = phi;
  GapResult result;
  RateVector trial(x.size());
  std::size_t t = 0;
  while (phi >= options.phi_min) {
    if (t >= options.max_iterations) {
      result.hit_iteration_cap = true;
      break;
    }
    const double eps = std::min(eps_max, phi);
    const std::vector<std::size_t> binding = binding_set(cs, x, eps);
    const ConeBasis cone = tangent_generators(cs, binding);

    std::ptrdiff_t best = -1;
    double best_f = f;
    RateVector best_x;
    for (std::size_t d = 0; d < cone.tangent_generators.size(); ++d) {
      const auto& s = cone.tangent_generators[d];
      const double step = eps / l2_norm(s);
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = x[i] + step * s[i];
      const double ft = evaluate(trial);
      if (ft < f - 1e-4 * (step * step) && ft < best_f) {
        best = static_cast<std::ptrdiff_t>(d);
        best_f = ft;
        best_x = trial;
      }
    }
    const bool accepted = best >= 0;
    result.trace.iterates.push_back({t, f, phi, binding.size(), accepted, x});
    if (accepted) {
      x = best_x;
      f = best_f;
    } else {
      phi *= 0.5;
    }
    ++t;
  }
  result.rates = std::move(x);
  result.objective = f;
  result.iterations = t;
  result.final_phi = phi;
  return result;
}

GapResult gap_optimize(const SystemConfig& config, const GapOptions& options) {
  return gap_optimize(config, Objective{}, options);
}

}  // namespace aoi

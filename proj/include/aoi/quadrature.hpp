#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace aoi {

struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace quad_detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
// Abscissae are the positive half; index 7 is the midpoint. Gauss points are
// the odd-indexed abscissae plus the midpoint.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
void kronrod15(const F& f, double a, double b, double& value, double& error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double result_gauss = kWg[3] * fc;
  double result_kronrod = kWgk[7] * fc;
  double fv1[7], fv2[7];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    fv1[i] = f(center - dx);
    fv2[i] = f(center + dx);
    result_kronrod += kWgk[i] * (fv1[i] + fv2[i]);
    if (i % 2 == 1) result_gauss += kWg[i / 2] * (fv1[i] + fv2[i]);
  }
  const double mean = 0.5 * result_kronrod;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int i = 0; i < 7; ++i)
    resasc += kWgk[i] * (std::abs(fv1[i] - mean) + std::abs(fv2[i] - mean));
  resasc *= std::abs(half);
  value = result_kronrod * half;
  error = std::abs((result_kronrod - result_gauss) * half);
  if (resasc != 0.0 && error != 0.0)
    error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
}

struct Segment {
  double a, b, value, error;
};

}  // namespace quad_detail

// Globally adaptive bisection, always refining the segment with the largest
// error estimate. Deterministic: the refinement order and the running sums
// depend only on the integrand and the bounds.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double abs_tol = 1e-8,
                                    double rel_tol = 1e-6, int max_intervals = 10000) {
  QuadratureResult out;
  if (a == b) return out;
  std::vector<quad_detail::Segment> segments;
  segments.reserve(128);
  double value, error;
  quad_detail::kronrod15(f, a, b, value, error);
  segments.push_back({a, b, value, error});
  double total_value = value;
  double total_error = error;
  out.intervals = 1;
  while (total_error > std::max(abs_tol, rel_tol * std::abs(total_value))) {
    if (out.intervals >= max_intervals)
      throw QuadratureFailure("quadrature error target not met within the interval budget");
    std::size_t worst = 0;
    for (std::size_t i = 1; i < segments.size(); ++i)
      if (segments[i].error > segments[worst].error) worst = i;
    const quad_detail::Segment s = segments[worst];
    const double mid = 0.5 * (s.a + s.b);
    if (s.error == 0.0 || mid <= std::min(s.a, s.b) || mid >= std::max(s.a, s.b))
      break;  // cannot refine further at floating resolution
    quad_detail::Segment left{s.a, mid, 0.0, 0.0};
    quad_detail::Segment right{mid, s.b, 0.0, 0.0};
    quad_detail::kronrod15(f, left.a, left.b, left.value, left.error);
    quad_detail::kronrod15(f, right.a, right.b, right.value, right.error);
    total_value += left.value + right.value - s.value;
    total_error += left.error + right.error - s.error;
    segments[worst] = left;
    segments.push_back(right);
    ++out.intervals;
  }
  out.value = total_value;
  out.error = total_error;
  return out;
}

}  // namespace aoi

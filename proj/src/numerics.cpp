#include "superres/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace superres::numerics {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const RealFunction& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

constexpr double kInvPhi = 0.6180339887498948482;  // 1/golden ratio

}  // namespace

void ToleranceSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw DomainError("tolerances must be positive");
  }
  if (max_iterations < 1) throw DomainError("max_iterations must be at least 1");
}

double erf(double x) { return std::erf(x); }

double erfc(double x) { return std::erfc(x); }

IntegrationResult integrate(const RealFunction& f, double lo, double hi,
                            const ToleranceSpec& tol) {
  tol.validate();
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("integration limits must be finite");
  if (lo == hi) return {0.0, 0.0, 0};
  const double sign = hi < lo ? -1.0 : 1.0;
  if (hi < lo) std::swap(lo, hi);

  std::priority_queue<Segment> heap;
  Segment first = kronrod15(f, lo, hi);
  double total = first.value;
  double error = first.error;
  heap.push(first);

  int splits = 0;
  auto converged = [&] { return error <= std::max(tol.abs_tol, tol.rel_tol * std::abs(total)); };
  while (!converged()) {
    if (splits >= tol.max_iterations) {
      throw ConvergenceError("integrate: subdivision budget exhausted", sign * total, error);
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw ConvergenceError("integrate: interval collapsed below machine resolution", sign * total, error);
    }
    Segment left = kronrod15(f, worst.lo, mid);
    Segment right = kronrod15(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }

  // Re-sum from the pieces to shed the drift of the running update.
  double resummed = 0.0;
  double err_sum = 0.0;
  int count = 0;
  while (!heap.empty()) {
    resummed += heap.top().value;
    err_sum += heap.top().error;
    heap.pop();
    ++count;
  }
  return {sign * resummed, err_sum, count};
}

double find_root(const RealFunction& f, double lo, double hi, const ToleranceSpec& tol) {
  tol.validate();
  if (!(lo < hi)) throw DomainError("find_root: bracket must satisfy lo < hi");
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(std::signbit(flo) != std::signbit(fhi)) || std::isnan(flo) || std::isnan(fhi)) {
    throw DomainError("find_root: function does not change sign over the bracket");
  }
  for (int it = 0; it < tol.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol.abs_tol || mid <= lo || mid >= hi) return mid;
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if (std::signbit(fmid) == std::signbit(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo <= tol.abs_tol) return 0.5 * (lo + hi);
  throw ConvergenceError("find_root: iteration budget exhausted", 0.5 * (lo + hi), hi - lo);
}

Minimum golden_section_min(const RealFunction& f, double lo, double hi, const ToleranceSpec& tol) {
  tol.validate();
  if (!(lo < hi)) throw DomainError("golden_section_min: requires lo < hi");
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < tol.max_iterations && hi - lo > tol.abs_tol; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  if (hi - lo > tol.abs_tol) {
    throw ConvergenceError("golden_section_min: iteration budget exhausted", 0.5 * (lo + hi), hi - lo);
  }
  return f1 <= f2 ? Minimum{x1, f1} : Minimum{x2, f2};
}

Minimum minimize_1d(const RealFunction& f, double lo, double hi, const ToleranceSpec& tol,
                    std::size_t grid_points) {
  if (!(lo < hi)) throw DomainError("minimize_1d: requires lo < hi");
  grid_points = std::max<std::size_t>(grid_points, 256);
  const auto xs = linspace(lo, hi, grid_points);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double v = f(xs[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  if (!std::isfinite(best_value)) {
    throw DomainError("minimize_1d: function is nowhere finite on the grid");
  }
  const double left = xs[best == 0 ? 0 : best - 1];
  const double right = xs[std::min(best + 1, xs.size() - 1)];
  Minimum refined = golden_section_min(f, left, right, tol);
  if (refined.value <= best_value) return refined;
  return {xs[best], best_value};
}

std::vector<Peak> find_local_maxima(std::span<const double> xs, std::span<const double> ys,
                                    double period, double min_prominence,
                                    const std::optional<RealFunction>& refine) {
  if (xs.size() != ys.size()) throw DomainError("find_local_maxima: xs and ys differ in length");
  const std::size_t n = ys.size();
  std::vector<Peak> peaks;
  if (n < 3) return peaks;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(xs[i] > xs[i - 1])) throw DomainError("find_local_maxima: xs must be strictly increasing");
  }

  // Runs of equal values, merged across the periodic seam.
  struct Run {
    std::size_t start;
    std::size_t length;
    double value;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < n; ++i) {
    if (!runs.empty() && ys[i] == runs.back().value) {
      ++runs.back().length;
    } else {
      runs.push_back({i, 1, ys[i]});
    }
  }
  if (runs.size() > 1 && runs.front().value == runs.back().value) {
    runs.back().length += runs.front().length;
    runs.erase(runs.begin());
  }
  const std::size_t m = runs.size();
  if (m < 2) return peaks;

  const double spacing = period / static_cast<double>(n);
  for (std::size_t r = 0; r < m; ++r) {
    const double height = runs[r].value;
    const double before = runs[(r + m - 1) % m].value;
    const double after = runs[(r + 1) % m].value;
    if (!(height > before && height > after)) continue;

    // Lowest point on each side before meeting higher ground.
    double left_base = height;
    for (std::size_t s = 1; s < m; ++s) {
      const double v = runs[(r + m - s) % m].value;
      if (v > height) break;
      left_base = std::min(left_base, v);
    }
    double right_base = height;
    for (std::size_t s = 1; s < m; ++s) {
      const double v = runs[(r + s) % m].value;
      if (v > height) break;
      right_base = std::min(right_base, v);
    }
    const double prominence = height - std::max(left_base, right_base);
    if (prominence < min_prominence) continue;

    const std::size_t index = runs[r].start;
    double x = xs[index] + spacing * static_cast<double>(runs[r].length - 1) / 2.0;
    double y = height;
    if (refine) {
      const auto& g = *refine;
      const double half_width = spacing * (static_cast<double>(runs[r].length - 1) / 2.0 + 1.0);
      try {
        Minimum best = golden_section_min([&](double t) { return -g(t); }, x - half_width,
                                          x + half_width, {1e-12, 1e-12, 200});
        if (-best.value >= y) {
          x = best.x;
          y = -best.value;
        }
      } catch (const ConvergenceError&) {
        // keep the grid location
      }
    }
    // Wrap into [x0 - spacing/2, x0 + period - spacing/2) so a peak sitting on
    // the seam is reported next to the first sample.
    const double x0 = xs.front() - 0.5 * spacing;
    x = x0 + std::fmod(std::fmod(x - x0, period) + period, period);
    peaks.push_back({x, y, prominence, index});
  }
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.x < b.x; });
  return peaks;
}

PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw DomainError("fit_power_law: need at least two matching points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw DomainError("fit_power_law: values must be positive");
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0)) throw DomainError("fit_power_law: x values must not all be equal");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  return {slope, std::exp(intercept)};
}

double fit_prefactor(std::span<const double> xs, std::span<const double> ys, double exponent) {
  if (xs.size() != ys.size() || xs.empty()) throw DomainError("fit_prefactor: need matching points");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double basis = std::pow(xs[i], exponent);
    num += basis * ys[i];
    den += basis * basis;
  }
  if (!(den > 0.0)) throw DomainError("fit_prefactor: degenerate basis");
  return num / den;
}

std::vector<double> linspace(double start, double end, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = start;
    return out;
  }
  const double step = (end - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
  if (count > 1) out.back() = end;
  return out;
}

std::vector<double> periodic_grid(double start, double period, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = start + period * static_cast<double>(i) / static_cast<double>(count);
  }
  return out;
}

}  // namespace superres::numerics

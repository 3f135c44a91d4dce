#include "superres/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "superres/numerics.hpp"
#include "superres/parallel.hpp"

namespace superres {

namespace {

struct Candidate {
  double spacing = 0.0;
  int n_bins = 1;
  int fringes = 0;
  double figure = -1.0;
  FringeAnalysis analysis;
};

Candidate evaluate(const CoherentSource& source, const SpacingSearch& search, double b, int n) {
  Candidate c;
  c.spacing = b;
  c.n_bins = n;
  c.analysis = analyze_fringes(BinningScheme::multi(search.half_width, b, n), source);
  c.fringes = c.analysis.count();
  c.figure = c.fringes > 0 ? contrast_figure(c.analysis, search.criterion) : -1.0;
  return c;
}

std::vector<int> bin_counts_for(double sweep, double b) {
  const int base = 2 * static_cast<int>(std::floor(sweep / b)) + 1;
  std::vector<int> out;
  for (int n : {base - 2, base, base + 2}) {
    if (n >= 1) out.push_back(n);
  }
  return out;
}

SpacingResult to_result(const Candidate& c) {
  SpacingResult r;
  r.multi = true;
  r.spacing = c.spacing;
  r.n_bins = c.n_bins;
  r.fringes = c.fringes;
  r.visibility_min = c.analysis.visibility_min();
  r.visibility_mean = c.analysis.visibility_mean();
  r.peak_contrast_min = c.analysis.peak_contrast_min();
  r.peak_contrast_mean = c.analysis.peak_contrast_mean();
  return r;
}

}  // namespace

double contrast_figure(const FringeAnalysis& analysis, ContrastCriterion criterion) {
  switch (criterion) {
    case ContrastCriterion::VisibilityMin: return analysis.visibility_min();
    case ContrastCriterion::VisibilityMean: return analysis.visibility_mean();
    case ContrastCriterion::PeakContrastMin: return analysis.peak_contrast_min();
    case ContrastCriterion::PeakContrastMean: return analysis.peak_contrast_mean();
  }
  return analysis.visibility_min();
}

BinningScheme SpacingResult::scheme(double half_width) const {
  if (!multi) return BinningScheme::binary(half_width);
  return BinningScheme::multi(half_width, spacing, n_bins);
}

SpacingResult optimize_spacing(const CoherentSource& source, const SpacingSearch& search) {
  const double n_photons = source.mean_photon_number();
  if (!(n_photons > 0.0)) throw DomainError("optimize_spacing requires N > 0");
  if (!(search.threshold > 0.0 && search.threshold < 1.0)) {
    throw DomainError("visibility threshold must lie in (0, 1)");
  }
  if (!(search.half_width > 0.0)) throw DomainError("bin half-width must be positive");
  if (search.coarse_points < 2) throw DomainError("optimize_spacing needs at least 2 grid points");

  const double a = search.half_width;
  const double sweep = 0.5 * std::sqrt(n_photons);
  const double b_hi = sweep + 3.0 * a;
  const double b_lo = 2.0 * a;
  // Grid over (b_lo, b_hi]: the open lower end is never sampled.
  std::vector<double> grid(search.coarse_points);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = b_lo + (b_hi - b_lo) * static_cast<double>(i + 1) / static_cast<double>(grid.size());
  }

  // One slot per (grid point, bin-count option); filled independently.
  struct Job {
    std::size_t grid_index;
    int n_bins;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int n : bin_counts_for(sweep, grid[i])) jobs.push_back({i, n});
  }
  std::vector<Candidate> evaluated(jobs.size());
  detail::parallel_for(jobs.size(), search.workers, [&](std::size_t j) {
    evaluated[j] = evaluate(source, search, grid[jobs[j].grid_index], jobs[j].n_bins);
  });

  auto feasible = [&](const Candidate& c) { return c.fringes > 0 && c.figure >= search.threshold; };
  auto better = [](const Candidate& x, const Candidate& y) {
    if (x.fringes != y.fringes) return x.fringes > y.fringes;
    if (x.spacing != y.spacing) return x.spacing < y.spacing;
    return x.n_bins < y.n_bins;
  };

  std::optional<Candidate> best;
  for (const auto& c : evaluated) {
    if (feasible(c) && (!best || better(c, *best))) best = c;
  }

  // Runs of consecutive grid points with equal (n_bins, fringes) above the
  // best feasible count: maximise the contrast inside each run.
  std::map<int, std::vector<const Candidate*>> by_bins;
  for (const auto& c : evaluated) by_bins[c.n_bins].push_back(&c);
  const double step = (b_hi - b_lo) / static_cast<double>(grid.size());
  for (auto& [n, list] : by_bins) {
    std::size_t start = 0;
    while (start < list.size()) {
      std::size_t end = start;
      while (end + 1 < list.size() && list[end + 1]->fringes == list[start]->fringes &&
             list[end + 1]->spacing - list[end]->spacing < 1.5 * step) {
        ++end;
      }
      const int target = list[start]->fringes;
      const bool promising = target > (best ? best->fringes : 0) && target > 2;
      const bool already_feasible =
          std::any_of(list.begin() + static_cast<std::ptrdiff_t>(start),
                      list.begin() + static_cast<std::ptrdiff_t>(end + 1),
                      [&](const Candidate* c) { return feasible(*c); });
      if (promising && !already_feasible) {
        const double lo = std::max(b_lo + 1e-9, list[start]->spacing - step);
        const double hi = std::min(b_hi, list[end]->spacing + step);
        auto objective = [&](double b) {
          const Candidate c = evaluate(source, search, b, n);
          return c.fringes == target ? -c.figure : 1.0;
        };
        try {
          const auto found = numerics::golden_section_min(objective, lo, hi, {1e-6, 1e-9, 100});
          Candidate c = evaluate(source, search, found.x, n);
          if (c.fringes == target && feasible(c) && (!best || better(c, *best))) best = c;
        } catch (const ConvergenceError&) {
        }
      }
      start = end + 1;
    }
  }

  if (!best) {
    SpacingResult r;
    const auto analysis = analyze_fringes(BinningScheme::binary(a), source);
    r.fringes = analysis.count();
    r.visibility_min = analysis.visibility_min();
    r.visibility_mean = analysis.visibility_mean();
    r.peak_contrast_min = analysis.peak_contrast_min();
    r.peak_contrast_mean = analysis.peak_contrast_mean();
    return r;
  }
  return to_result(*best);
}

}  // namespace superres

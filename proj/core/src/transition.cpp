#include <algorithm>
#include <cmath>
#include <limits>

#include "dsop/errors.hpp"
#include "dsop/transition.hpp"

namespace dsop {

namespace {

// min over a in [0, w) of P(lo - a <= T < hi - a) for a finite support. The
// probability is a right-continuous step function of a, so its infimum is
// attained at 0 or at one of the breakpoints inside (0, w). Breakpoints within
// a relative 1e-9 of either end are snapped onto it: range bounds are computed
// as k * width, and an outcome that lands on a bound in exact arithmetic must
// not be split across two ranges by rounding.
double discrete_window_min(const DiscreteDist& d, double lo, double hi, double w) {
  const double tol = 1e-9 * w;
  auto snap = [&](double c) {
    if (std::abs(c) <= tol) return 0.0;
    if (std::abs(c - w) <= tol) return w;
    return c;
  };
  struct Window {
    double c1, c2, p;
  };
  Window near[64];
  std::size_t n_near = 0;
  std::vector<Window> spill;
  for (const auto& o : d.outcomes) {
    const Window win{snap(lo - o.time), snap(hi - o.time), o.probability};
    if (win.c2 <= 0.0 || win.c1 >= w) continue;  // never inside the window
    if (n_near < std::size(near))
      near[n_near++] = win;
    else
      spill.push_back(win);
  }
  if (n_near == 0) return 0.0;

  auto value_at = [&](double x) {
    double g = 0.0;
    for (std::size_t i = 0; i < n_near; ++i)
      if (near[i].c1 <= x && x < near[i].c2) g += near[i].p;
    for (const auto& win : spill)
      if (win.c1 <= x && x < win.c2) g += win.p;
    return g;
  };
  double best = value_at(0.0);
  auto probe = [&](const Window& win) {
    if (win.c1 > 0.0 && win.c1 < w) best = std::min(best, value_at(win.c1));
    if (win.c2 > 0.0 && win.c2 < w) best = std::min(best, value_at(win.c2));
  };
  for (std::size_t i = 0; i < n_near; ++i) probe(near[i]);
  for (const auto& win : spill) probe(win);
  return best;
}

}  // namespace

double ArrivalDistribution::on_time() const {
  double total = 0.0;
  for (std::size_t r = 0; r + 1 < mass.size(); ++r) total += mass[r];
  return total;
}

ArrivalDistribution initial_distribution(const RangeGrid& grid, double start_time) {
  ArrivalDistribution out;
  out.mass.assign(grid.dimension(), 0.0);
  out.mass[grid.index_of(start_time)] = 1.0;
  return out;
}

double TransitionMatrix::at(std::size_t p, std::size_t q) const {
  if (p > count_ || q > count_) return 0.0;
  if (p == count_) return q == count_ ? 1.0 : 0.0;
  const auto& prof = profiles_[row_profile_[p]];
  if (q == count_) return prof.tail[count_ - p];
  if (q < p) return 0.0;
  const std::size_t d = q - p;
  if (d < prof.first || d >= prof.first + prof.values.size()) return 0.0;
  return prof.values[d - prof.first];
}

void TransitionMatrix::propagate(std::span<const double> in, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t p = 0; p < count_; ++p) {
    const double m = in[p];
    if (m == 0.0) continue;
    const auto& prof = profiles_[row_profile_[p]];
    const std::size_t q0 = p + prof.first;
    if (q0 < count_) {
      const std::size_t n = std::min(prof.values.size(), count_ - q0);
      const double* v = prof.values.data();
      double* o = out.data() + q0;
      for (std::size_t i = 0; i < n; ++i) o[i] += m * v[i];
    }
    out[count_] += m * prof.tail[count_ - p];
  }
  out[count_] += in[count_];
}

ArrivalDistribution TransitionMatrix::propagate(const ArrivalDistribution& in) const {
  ArrivalDistribution out;
  out.mass.resize(dimension());
  propagate(in.mass, out.mass);
  return out;
}

TransitionMatrix edge_transition_matrix(const TimeDependentEdge& edge, const RangeGrid& grid,
                                        const MatrixOptions& options) {
  if (edge.bands.empty()) throw ConfigError("edge without bands");
  const std::size_t count = grid.count();
  const double w = grid.width();

  TransitionMatrix m;
  m.count_ = count;
  m.row_profile_.resize(count);
  for (std::size_t p = 0; p < count; ++p) {
    const double mid = 0.5 * (grid.lower(p) + grid.upper(p));
    m.row_profile_[p] = static_cast<std::uint32_t>(edge.band_index(mid));
  }

  for (const auto& band : edge.bands) {
    TransitionMatrix::Profile prof;
    std::vector<double> values(count, 0.0);

    if (const auto* d = std::get_if<DiscreteDist>(&band.dist)) {
      for (std::size_t k = 0; k < count; ++k)
        values[k] = discrete_window_min(*d, grid.lower(k), grid.lower(k + 1), w);
    } else if (std::holds_alternative<GammaDist>(band.dist)) {
      const std::size_t probes = options.interior_probes;
      std::vector<double> f(count + 1);
      std::vector<double> best(count, std::numeric_limits<double>::infinity());
      for (std::size_t j = 0; j <= probes + 1; ++j) {
        // Probe at offset a in [0, w]; a == w stands for the left limit at the
        // top of the range, which is the same value for a continuous CDF.
        const double a = w * static_cast<double>(j) / static_cast<double>(probes + 1);
        bool saturated = false;
        for (std::size_t i = 0; i <= count; ++i) {
          if (saturated) {
            f[i] = 1.0;
            continue;
          }
          f[i] = cdf(band.dist, grid.lower(i) - a);
          if (f[i] >= 1.0) saturated = true;
        }
        for (std::size_t k = 0; k < count; ++k) best[k] = std::min(best[k], f[k + 1] - f[k]);
      }
      for (std::size_t k = 0; k < count; ++k) values[k] = std::max(0.0, best[k]);
    } else {
      throw UnsupportedError("unsupported distribution type");
    }

    for (auto& v : values)
      if (v < options.drop_below) v = 0.0;
    const auto first = std::find_if(values.begin(), values.end(), [](double v) { return v > 0.0; });
    if (first != values.end()) {
      const auto last = std::find_if(values.rbegin(), values.rend(), [](double v) {
                          return v > 0.0;
                        }).base();
      prof.first = static_cast<std::size_t>(first - values.begin());
      prof.values.assign(first, last);
    }

    prof.tail.resize(count + 1);
    for (std::size_t j = 0; j <= count; ++j)
      prof.tail[j] = std::clamp(1.0 - cdf_below(band.dist, grid.lower(j)), 0.0, 1.0);

    m.profiles_.push_back(std::move(prof));
  }
  return m;
}

MatrixModel::MatrixModel(const Instance& instance, RangeGrid grid, const MatrixOptions& options)
    : instance_(&instance), grid_(grid) {
  matrices_.reserve(instance.edges().size());
  for (const auto& edge : instance.edges())
    matrices_.push_back(edge_transition_matrix(edge, grid_, options));
}

const TransitionMatrix* MatrixModel::matrix(VertexId from, VertexId to) const {
  const auto e = instance_->edge_index(from, to);
  return e ? &matrices_[*e] : nullptr;
}

}  // namespace dsop

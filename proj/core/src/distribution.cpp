#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "dsop/model.hpp"

namespace dsop {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double gamma_cdf(const GammaDist& g, double x) {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(g.shape, x / g.scale);
}

}  // namespace

double cdf(const Distribution& dist, double x) {
  return std::visit(overloaded{
                        [x](const GammaDist& g) { return gamma_cdf(g, x); },
                        [x](const DiscreteDist& d) {
                          double total = 0.0;
                          for (const auto& o : d.outcomes)
                            if (o.time <= x) total += o.probability;
                          return std::min(total, 1.0);
                        },
                    },
                    dist);
}

double cdf_below(const Distribution& dist, double x) {
  return std::visit(overloaded{
                        [x](const GammaDist& g) { return gamma_cdf(g, x); },
                        [x](const DiscreteDist& d) {
                          double total = 0.0;
                          for (const auto& o : d.outcomes)
                            if (o.time < x) total += o.probability;
                          return std::min(total, 1.0);
                        },
                    },
                    dist);
}

double mean(const Distribution& dist) {
  return std::visit(overloaded{
                        [](const GammaDist& g) { return g.mean(); },
                        [](const DiscreteDist& d) {
                          double m = 0.0;
                          for (const auto& o : d.outcomes) m += o.time * o.probability;
                          return m;
                        },
                    },
                    dist);
}

}  // namespace dsop

#include "kt1/roles.hpp"

#include <random>

#include "kt1/rng.hpp"

namespace kt1 {

Roles assign_roles(const Graph& g, const RoleOptions& opt) {
  Roles r;
  r.low.resize(g.n());
  for (NodeIndex x = 0; x < g.n(); ++x) {
    if (opt.degree_threshold)
      r.low[x] = static_cast<double>(g.degree(x)) < *opt.degree_threshold;
    else
      r.low[x] = g.degree_class(x) == DegreeClass::Low;
  }
  if (opt.stars) {
    if (opt.stars->size() != g.n()) throw ConfigError("star set size differs from n");
    r.star = *opt.stars;
  } else if (opt.star_probability) {
    r.star.resize(g.n());
    for (NodeIndex x = 0; x < g.n(); ++x) {
      auto rng = make_stream(opt.seed, {stream::kStars, x});
      r.star[x] = std::bernoulli_distribution(*opt.star_probability)(rng);
    }
  } else {
    r.star = select_stars(g, opt.seed);
  }
  return r;
}

}  // namespace kt1

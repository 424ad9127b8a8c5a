#include "sirmeta/numerics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace sirmeta {

namespace detail {

const GaussKronrod15& gauss_kronrod15() {
  static const GaussKronrod15 rule = [] {
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    using Gauss = boost::math::quadrature::gauss<double, 7>;
    const auto& abscissa = Kronrod::abscissa();  // 0 first, then ascending positives
    const auto& kw = Kronrod::weights();
    const auto& gw = Gauss::weights();
    GaussKronrod15 r{};
    constexpr std::size_t half = 7;
    for (std::size_t j = 0; j < abscissa.size(); ++j) {
      const double g = (j % 2 == 0) ? gw[j / 2] : 0.0;
      r.nodes[half + j] = abscissa[j];
      r.kronrod[half + j] = kw[j];
      r.gauss[half + j] = g;
      r.nodes[half - j] = -abscissa[j];
      r.kronrod[half - j] = kw[j];
      r.gauss[half - j] = g;
    }
    return r;
  }();
  return rule;
}

}  // namespace detail

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw InputError("rel_tol must be > 0");
  if (!(abs_tol >= 0.0)) throw InputError("abs_tol must be >= 0");
  if (max_subdivisions < 1) throw InputError("max_subdivisions must be >= 1");
  if (!(tail_cutoff > 0.0 && tail_cutoff < 1.0)) throw InputError("tail_cutoff must lie in (0, 1)");
}

void GilPelaezOptions::validate() const {
  if (!(t_max > 0.0)) throw InputError("t_max must be > 0");
  if (!(t_cap >= t_max)) throw InputError("t_cap must be >= t_max");
  if (!(abs_tol > 0.0)) throw InputError("Gil-Pelaez abs_tol must be > 0");
  if (!(max_panel_width > 0.0)) throw InputError("max_panel_width must be > 0");
}

void OptimizerSpec::validate() const {
  if (!(lo < hi)) throw InputError("optimizer bracket must satisfy lo < hi");
  if (!(x_tol > 0.0)) throw InputError("optimizer x_tol must be > 0");
  if (max_evals < 1) throw InputError("optimizer max_evals must be >= 1");
}

}  // namespace sirmeta

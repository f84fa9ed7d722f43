#include "fsteer/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace fsteer {

LineFit fit_line(const std::vector<double>& xs,
                 const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("fit_line: size mismatch");
  }
  const int n = static_cast<int>(xs.size());
  if (n < 2) throw std::invalid_argument("fit_line: need at least two points");

  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");

  LineFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.rss = 0;
  for (int i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    fit.rss += r * r;
  }
  fit.r_squared = (syy == 0.0) ? 1.0 : 1.0 - fit.rss / syy;
  return fit;
}

double aic_score(double rss, int n, int k) {
  if (n <= 0) throw std::invalid_argument("aic_score: need n > 0");
  const double floor_rss = std::max(rss, 1e-300);
  return n * std::log(floor_rss / n) + 2.0 * k;
}

DecayComparison compare_decay_models(const std::vector<double>& xs,
                                     const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("compare_decay_models: size mismatch");
  }
  std::vector<double> x_lin, logy_lin, logx, logy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(ys[i] > 0.0)) continue;
    if (!(xs[i] > 0.0)) continue;
    x_lin.push_back(xs[i]);
    logy_lin.push_back(std::log(ys[i]));
    logx.push_back(std::log(xs[i]));
    logy.push_back(std::log(ys[i]));
  }
  if (x_lin.size() < 3) {
    throw std::invalid_argument(
        "compare_decay_models: need at least three usable points");
  }
  DecayComparison cmp;
  cmp.points_used = static_cast<int>(x_lin.size());
  cmp.exponential = fit_line(x_lin, logy_lin);
  cmp.power_law = fit_line(logx, logy);
  cmp.aic_exponential = aic_score(cmp.exponential.rss, cmp.exponential.n, 2);
  cmp.aic_power_law = aic_score(cmp.power_law.rss, cmp.power_law.n, 2);
  cmp.favors_power_law = cmp.aic_power_law < cmp.aic_exponential;
  return cmp;
}

}  // namespace fsteer

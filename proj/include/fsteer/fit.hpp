// SPDX-License-Identifier: MIT
//
// Small least-squares helpers used by the observable post-processing:
// straight-line fits with R², and an AIC comparison between exponential
// (ln y linear in x) and power-law (ln y linear in ln x) decay models.

#pragma once

#include <vector>

namespace fsteer {

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  double rss = 0;  // residual sum of squares
  int n = 0;
};

// Ordinary least squares y ≈ slope·x + intercept. Requires >= 2 points.
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

// AIC for a Gaussian-residual model: n·ln(RSS/n) + 2k, with k parameters.
double aic_score(double rss, int n, int k);

struct DecayComparison {
  LineFit exponential;  // ln y vs x
  LineFit power_law;    // ln y vs ln x
  double aic_exponential = 0;
  double aic_power_law = 0;
  bool favors_power_law = false;
  int points_used = 0;  // pairs with y > 0 (and x > 0 for the power law)
};

// Fits both decay models to (x, y) samples, silently dropping non-positive
// values that the logarithms cannot accommodate.
DecayComparison compare_decay_models(const std::vector<double>& xs,
                                     const std::vector<double>& ys);

}  // namespace fsteer

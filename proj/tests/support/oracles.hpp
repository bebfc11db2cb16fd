#pragma once

#include <cstddef>
#include <functional>
#include <vector>

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written from first principles (naive
// algorithms, closed forms, plain quadrature) rather than by calling the
// code under test.
namespace oracles {

// Composite Simpson rule with n (even) panels.
double simpson(const std::function<double(double)>& f, double a, double b,
               int n);

// Left-endpoint rectangular rule with n panels.
double rectangle(const std::function<double(double)>& f, double a, double b,
                 int n);

// Chi-squared density and, for df in {2, 3}, the closed-form CDF.
double chi2_pdf(double x, int df);
double chi2_cdf(double x, int df);

// Density/CDF of chi-squared(df) truncated to [a, b].
double truncated_chi2_pdf(double x, int df, double a, double b);
double truncated_chi2_cdf(double x, int df, double a, double b);

// Mean of the truncated distribution by quadrature.
double truncated_chi2_mean(int df, double a, double b);

// Exact 1D optimal transport cost between two discrete distributions that
// share support positions, via the monotone (sorted) coupling.
double transport_cost(const std::vector<double>& mass_r,
                      const std::vector<double>& mass_s,
                      const std::vector<double>& positions);

// Central finite-difference gradient of f at x.
std::vector<double> central_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x, double h);

// Kolmogorov-Smirnov statistic of samples against a CDF.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

// Two-pass reference moments: mean, sample std (n-1), adjusted
// Fisher-Pearson skewness, non-excess kurtosis.
struct Moments {
  double mean;
  double std_dev;
  double skewness;
  double kurtosis;
};
Moments reference_moments(const std::vector<double>& x);

}  // namespace oracles

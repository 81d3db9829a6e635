#ifndef TAFI_STATS_H_
#define TAFI_STATS_H_

#include <span>
#include <vector>

namespace tafi {

struct AnovaResult {
  double f_stat = 0;
  int df_between = 0;
  int df_within = 0;
  double p_value = 1;
};

struct TTestResult {
  double t_stat = 0;
  double df = 0;  // Welch-Satterthwaite, fractional
  double p_value = 1;  // two-sided
};

// Regularised incomplete beta I_x(a, b) by continued fraction.
// Throws kDomainError outside x in [0, 1], a > 0, b > 0.
double RegIncBeta(double x, double a, double b);

// Upper tail P(F > f) for F(d1, d2).
double FSurvival(double f, double d1, double d2);

// Two-sided P(|T| > |t|) for Student t with df degrees of freedom.
double StudentTwoSided(double t, double df);

AnovaResult OneWayAnova(const std::vector<std::vector<double>>& groups);

TTestResult WelchTTest(std::span<const double> x, std::span<const double> y);

}  // namespace tafi

#endif  // TAFI_STATS_H_

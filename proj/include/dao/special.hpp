#ifndef DAO_SPECIAL_HPP
#define DAO_SPECIAL_HPP

namespace dao {

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

// Regularized incomplete beta I_x(a, b).
double regularized_beta(double a, double b, double x);

double chi2_cdf(int dof, double x);

// Inverse chi-square CDF by bisection, absolute tolerance 1e-10.
double chi2_quantile(int dof, double p);

// Two-sided tail probability P(|T| >= |t|) for Student's t with dof degrees.
double student_t_two_sided_p(double t, double dof);

double normal_cdf(double x);

// CDF of the range of `groups` iid standard normals (infinite degrees of
// freedom), evaluated by quadrature.
double studentized_range_cdf(double q, int groups);

// Nemenyi critical value q_alpha (the studentized range quantile divided by
// sqrt 2) for the given number of compared methods. Supported for
// 1e-6 <= alpha < 1; below that the quadrature cannot resolve the tail.
double nemenyi_q(double alpha, int methods);

} // namespace dao

#endif // DAO_SPECIAL_HPP

#pragma once

namespace swissfair::dist {

/// Regularized incomplete beta I_x(a, b), evaluated with the Lentz continued
/// fraction (switching to the symmetric form when x > (a+1)/(a+b+2)).
/// Accurate to about 1e-14 relative for a, b in the range used by t-tests.
double incomplete_beta(double a, double b, double x);

double normal_cdf(double x);

/// P(|Z| >= |z|) for a standard normal Z.
double normal_two_sided_p(double z);

/// CDF of Student's t with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

/// P(|T| >= |t|) = I_{dof/(dof+t^2)}(dof/2, 1/2).
double student_t_two_sided_p(double t, double dof);

}  // namespace swissfair::dist

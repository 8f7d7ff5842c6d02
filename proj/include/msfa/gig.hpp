#pragma once

#include "msfa/rng.hpp"

namespace msfa {

/// Log of the unnormalized generalized-inverse-Gaussian density
///   f(x) proportional to x^(p-1) exp(-(a*x + b/x)/2),  x > 0.
double gig_log_kernel(double p, double a, double b, double x);

/// Draw from GIG(p, a, b) under the kernel above. Admissible parameters:
/// (a>0, b>0), or (a>0, b=0, p>0) which is Gamma(p, a/2), or (a=0, b>0, p<0)
/// which is an inverse gamma. Anything else is rejected.
///
/// Uses ratio-of-uniforms (with mode shift for concentrated densities) and a
/// three-piece hat for the non-log-concave region with small sqrt(a*b),
/// following Hormann & Leydold (2014).
double draw_gig(double p, double a, double b, Rng& rng);

}  // namespace msfa

#include "msfa/gig.hpp"

#include <cmath>
#include <stdexcept>

#include "msfa/types.hpp"

namespace msfa {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Two-parameter form: g(y) proportional to y^(lam-1) exp(-(om/2)(y + 1/y)).
double log_kernel2(double lam, double om, double y) {
  return (lam - 1.0) * std::log(y) - 0.5 * om * (y + 1.0 / y);
}

// Mode of g; stable form for lam < 1.
double gig_mode(double lam, double om) {
  if (lam >= 1.0)
    return (std::sqrt((lam - 1.0) * (lam - 1.0) + om * om) + (lam - 1.0)) / om;
  return om / (std::sqrt((1.0 - lam) * (1.0 - lam) + om * om) + (1.0 - lam));
}

// Ratio-of-uniforms without shift. Valid for all lam >= 0, om > 0; efficient
// unless the density is strongly concentrated.
double rou_noshift(double lam, double om, Rng& rng) {
  const double m = gig_mode(lam, om);
  const double lgm = log_kernel2(lam, om, m);
  // maximizer of y^2 g(y) gives the right-hand bound of the u-envelope
  const double yp = ((lam + 1.0) + std::sqrt((lam + 1.0) * (lam + 1.0) + om * om)) / om;
  const double up = yp * std::exp(0.5 * (log_kernel2(lam, om, yp) - lgm));
  for (;;) {
    const double u = up * rng.uniform();
    const double v = rng.uniform();
    const double y = u / v;
    if (2.0 * std::log(v) <= log_kernel2(lam, om, y) - lgm) return y;
  }
}

// Ratio-of-uniforms shifted to the mode. The u-envelope bounds solve
// d/dy [(y-m) sqrt(g(y))] = 0, a cubic with roots on both sides of the mode.
double rou_shift(double lam, double om, Rng& rng) {
  const double m = gig_mode(lam, om);
  const double lgm = log_kernel2(lam, om, m);
  const double a2 = -(2.0 * (lam + 1.0) / om + m);
  const double a1 = 2.0 * m * (lam - 1.0) / om - 1.0;
  const double a0 = m;
  const double pc = a1 - a2 * a2 / 3.0;
  const double qc = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
  double arg = -qc / (2.0 * std::sqrt(-pc * pc * pc / 27.0));
  arg = std::min(1.0, std::max(-1.0, arg));
  const double phi = std::acos(arg);
  const double fac = 2.0 * std::sqrt(-pc / 3.0);
  const double y1 = fac * std::cos(phi / 3.0) - a2 / 3.0;
  const double y2 = fac * std::cos(phi / 3.0 + 4.0 * kPi / 3.0) - a2 / 3.0;
  const double up = (y1 - m) * std::exp(0.5 * (log_kernel2(lam, om, y1) - lgm));
  const double um = (y2 - m) * std::exp(0.5 * (log_kernel2(lam, om, y2) - lgm));
  for (;;) {
    const double u = um + (up - um) * rng.uniform();
    const double v = rng.uniform();
    const double y = u / v + m;
    if (y <= 0.0) continue;
    if (2.0 * std::log(v) <= log_kernel2(lam, om, y) - lgm) return y;
  }
}

// Three-piece hat for 0 <= lam < 1 with small om, where g is not
// T_(-1/2)-concave: constant up to x0 = om/(1-lam), then a power bound
// y^(lam-1) (the exponential factor is at most e^-om there), then an
// exponential tail bound from 2/om on.
double hat_decomposition(double lam, double om, Rng& rng) {
  const double m = gig_mode(lam, om);
  const double lgm = log_kernel2(lam, om, m);
  const double x0 = om / (1.0 - lam);
  const double logk1 = -om - lgm;

  const double area0 = x0;  // hat = 1 on (0, x0], density normalized by g(m)
  double area1 = 0.0, area2 = 0.0;
  double k2s, split;  // split point and coefficient of the exponential tail
  if (x0 >= 2.0 / om) {
    split = x0;
    k2s = std::exp((lam - 1.0) * std::log(x0) - lgm);
    area2 = k2s * (2.0 / om) * std::exp(-0.5 * om * x0);
  } else {
    split = 2.0 / om;
    if (lam == 0.0)
      area1 = std::exp(logk1) * std::log(2.0 / (om * om));
    else
      area1 = std::exp(logk1) / lam *
              (std::pow(2.0 / om, lam) - std::pow(x0, lam));
    k2s = std::exp((lam - 1.0) * std::log(2.0 / om) - lgm);
    area2 = k2s * (2.0 / om) * std::exp(-1.0);
  }
  const double total = area0 + area1 + area2;

  for (;;) {
    double v = total * rng.uniform();
    double y, log_hat;
    if (v <= area0) {
      y = x0 * v / area0;
      log_hat = 0.0;
    } else if ((v -= area0) <= area1) {
      const double k1 = std::exp(logk1);
      y = (lam == 0.0) ? x0 * std::exp(v / k1)
                       : std::pow(std::pow(x0, lam) + v * lam / k1, 1.0 / lam);
      log_hat = logk1 + (lam - 1.0) * std::log(y);
    } else {
      v -= area1;
      y = -(2.0 / om) *
          std::log(std::exp(-0.5 * om * split) - v * om / (2.0 * k2s));
      log_hat = std::log(k2s) - 0.5 * om * y;
    }
    const double u = rng.uniform();
    if (std::log(u) + log_hat <= log_kernel2(lam, om, y) - lgm) return y;
  }
}

double draw_gig2(double lam, double om, Rng& rng) {
  if (lam > 2.0 || om > 3.0) return rou_shift(lam, om, rng);
  if (om > 0.2 || lam >= 1.0 - 2.25 * om * om) return rou_noshift(lam, om, rng);
  return hat_decomposition(lam, om, rng);
}

}  // namespace

double gig_log_kernel(double p, double a, double b, double x) {
  return (p - 1.0) * std::log(x) - 0.5 * (a * x + b / x);
}

double draw_gig(double p, double a, double b, Rng& rng) {
  if (a < 0.0 || b < 0.0 || !std::isfinite(p) || !std::isfinite(a) || !std::isfinite(b))
    throw ParameterError("draw_gig: a and b must be finite and nonnegative");
  if (b == 0.0) {
    if (!(a > 0.0) || !(p > 0.0))
      throw ParameterError("draw_gig: b=0 requires a>0 and p>0");
    return rng.gamma(p, 0.5 * a);
  }
  if (a == 0.0) {
    if (!(p < 0.0)) throw ParameterError("draw_gig: a=0 requires b>0 and p<0");
    return 1.0 / rng.gamma(-p, 0.5 * b);
  }
  if (p < 0.0) return 1.0 / draw_gig(-p, b, a, rng);
  const double om = std::sqrt(a * b);
  const double alpha = std::sqrt(b / a);
  return alpha * draw_gig2(p, om, rng);
}

}  // namespace msfa

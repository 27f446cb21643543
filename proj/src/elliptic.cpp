#include "polylab/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace polylab {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

enum class ThetaKind { value, derivative };

ScaledValue theta_series(cplx v, cplx tau, const ThetaOptions& opts, ThetaKind kind) {
  const double im_tau = tau.imag();
  if (!(im_tau > 0)) throw std::domain_error("theta series needs Im(tau) > 0");
  const double im_v = v.imag();
  const double peak = std::abs(im_v) / (kPi * im_tau);
  const int n_peak = static_cast<int>(std::floor(peak)) + 1;
  if (n_peak + 2 > opts.truncation_bound)
    throw TruncationFailure("theta argument too far from the real axis for the truncation bound");

  auto exponent = [&](int n, int sign) {
    const double h = n + 0.5;
    return kI * kPi * tau * (h * h) + static_cast<double>(sign) * kI * (2.0 * n + 1.0) * v;
  };
  double L = -std::numeric_limits<double>::infinity();
  for (int n = 0; n <= n_peak + 1; ++n)
    L = std::max({L, exponent(n, 1).real(), exponent(n, -1).real()});

  cplx S(0.0);
  const double log_eps = std::log(opts.target_eps);
  for (int n = 0; n < opts.truncation_bound; ++n) {
    const cplx ep = exponent(n, 1), em = exponent(n, -1);
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    const cplx a = std::exp(ep - L), b = std::exp(em - L);
    cplx term = kind == ThetaKind::value ? sgn * (-kI) * (a - b) : sgn * (2.0 * n + 1.0) * (a + b);
    S += term;
    const double head = std::max(ep.real(), em.real()) - L + std::log(2.0 * n + 3.0);
    if (n > n_peak && S != cplx(0.0) && head < log_eps + std::log(std::abs(S)))
      return {L, S};
    if (n > n_peak && S == cplx(0.0) && head < log_eps - 700.0) return {L, S};
  }
  throw TruncationFailure("theta series did not reach target precision within " +
                          std::to_string(opts.truncation_bound) + " terms");
}

// sum_{n>=1} n^k q^n / (1 - q^n)
cplx lambert(cplx q, int k) {
  cplx sum(0.0);
  cplx qn = q;
  for (int n = 1; n < 2000; ++n) {
    const cplx term = std::pow(static_cast<double>(n), k) * qn / (1.0 - qn);
    sum += term;
    if (std::abs(term) < 1e-19 * std::max(1.0, std::abs(sum))) return sum;
    qn *= q;
  }
  throw TruncationFailure("Lambert series did not converge");
}

cplx cot_stable(cplx x) {
  if (x.imag() >= 0) {
    const cplx w = std::exp(2.0 * kI * x);
    return kI * (w + 1.0) / (w - 1.0);
  }
  const cplx w = std::exp(-2.0 * kI * x);
  return kI * (1.0 + w) / (1.0 - w);
}

cplx csc2_stable(cplx x) {
  if (x.imag() >= 0) {
    const cplx w = std::exp(2.0 * kI * x);
    return -4.0 * w / ((w - 1.0) * (w - 1.0));
  }
  const cplx w = std::exp(-2.0 * kI * x);
  return -4.0 * w / ((1.0 - w) * (1.0 - w));
}

double rel_diff(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

ScaledValue theta1(cplx v, cplx tau, const ThetaOptions& opts) {
  return theta_series(v, tau, opts, ThetaKind::value);
}

ScaledValue theta1_prime(cplx v, cplx tau, const ThetaOptions& opts) {
  return theta_series(v, tau, opts, ThetaKind::derivative);
}

cplx eisenstein_e2(cplx tau) { return 1.0 - 24.0 * lambert(std::exp(2.0 * kPi * kI * tau), 1); }
cplx eisenstein_e4(cplx tau) { return 1.0 + 240.0 * lambert(std::exp(2.0 * kPi * kI * tau), 3); }
cplx eisenstein_e6(cplx tau) { return 1.0 - 504.0 * lambert(std::exp(2.0 * kPi * kI * tau), 5); }

cplx weierstrass_zeta_lattice_sum(const Lattice& L, cplx z) {
  const cplx w1 = L.omega1();
  const cplx tau = L.tau();
  const cplx c = kPi / w1;
  cplx zeta = c * cot_stable(kPi * z / w1) + z * (kPi * kPi) / (3.0 * w1 * w1);
  for (int n = 1; n < 400; ++n) {
    cplx pair(0.0);
    for (int sgn : {1, -1}) {
      const double m = sgn * n;
      const cplx nt = m * tau;
      pair += c * (cot_stable(kPi * (z / w1 - nt)) + cot_stable(kPi * nt)) +
              z * c * c * csc2_stable(kPi * nt);
    }
    zeta += pair;
    if (n > 2 && std::abs(pair) < 1e-18 * std::abs(zeta)) return zeta;
  }
  throw TruncationFailure("lattice sum for zeta did not converge");
}

cplx QuasiPeriods::eta(cplx z) const {
  const auto [s, t] = host.coords(z);
  return s * eta1 + t * eta2;
}

cplx eta_linear(const QuasiPeriods& Q, cplx z) { return Q.eta(z); }

QuasiPeriods quasi_periods(const Lattice& L) {
  const cplx w1 = L.omega1(), w2 = L.omega2(), tau = L.tau();
  const cplx eta1 = kPi * kPi * eisenstein_e2(tau) / (3.0 * w1);
  // eta2 = 2 zeta(omega2/2) from the theta quotient at v = pi tau / 2.
  const cplx v = kPi * tau / 2.0;
  const ScaledValue th = theta1(v, tau), thp = theta1_prime(v, tau);
  const cplx quotient = (thp.mantissa / th.mantissa) * std::exp(thp.log_scale - th.log_scale);
  const cplx eta2 = eta1 * w2 / w1 + 2.0 * kPi / w1 * quotient;

  const cplx alt1 = 2.0 * weierstrass_zeta_lattice_sum(L, w1 / 2.0);
  const cplx alt2 = 2.0 * weierstrass_zeta_lattice_sum(L, w2 / 2.0);
  const double scale = std::abs(eta1) + std::abs(eta2);
  if (std::abs(alt1 - eta1) > 1e-8 * scale || std::abs(alt2 - eta2) > 1e-8 * scale)
    throw PrecisionLoss("quasi-period routes disagree beyond 1e-8");
  const cplx legendre = eta1 * w2 - eta2 * w1;
  if (std::abs(legendre - 2.0 * kPi * kI) > 1e-10 * 2.0 * kPi)
    throw PrecisionLoss("Legendre relation violated beyond 1e-10");
  return {eta1, eta2, L};
}

SigmaEvaluator::SigmaEvaluator(const Lattice& L, ThetaOptions opts)
    : SigmaEvaluator(L, quasi_periods(L), opts) {}

SigmaEvaluator::SigmaEvaluator(const Lattice& L, const QuasiPeriods& Q, ThetaOptions opts)
    : host_(L), eta1_(Q.eta1), q_(std::exp(kI * kPi * L.tau())), opts_(opts) {
  const ScaledValue d0 = theta1_prime(cplx(0.0), L.tau(), opts_);
  log_prefactor_ = std::log(L.omega1() / kPi) - d0.log();
}

cplx SigmaEvaluator::log_sigma(cplx z) const {
  const cplx w1 = host_.omega1();
  const ScaledValue th = theta1(kPi * z / w1, host_.tau(), opts_);
  return log_prefactor_ + eta1_ * z * z / (2.0 * w1) + th.log();
}

double SigmaEvaluator::log_abs_sigma(cplx z) const {
  const cplx w1 = host_.omega1();
  const ScaledValue th = theta1(kPi * z / w1, host_.tau(), opts_);
  return log_prefactor_.real() + (eta1_ * z * z / (2.0 * w1)).real() + th.log_abs();
}

cplx SigmaEvaluator::sigma(cplx z) const {
  const cplx w1 = host_.omega1();
  const ScaledValue th = theta1(kPi * z / w1, host_.tau(), opts_);
  if (th.mantissa == cplx(0.0)) return cplx(0.0);
  return std::exp(log_prefactor_ + eta1_ * z * z / (2.0 * w1) + th.log_scale) * th.mantissa;
}

cplx SigmaEvaluator::zeta(cplx z) const {
  const cplx w1 = host_.omega1();
  const cplx v = kPi * z / w1;
  const ScaledValue th = theta1(v, host_.tau(), opts_), thp = theta1_prime(v, host_.tau(), opts_);
  const cplx quotient = (thp.mantissa / th.mantissa) * std::exp(thp.log_scale - th.log_scale);
  return eta1_ * z / w1 + kPi / w1 * quotient;
}

cplx dedekind_eta(cplx tau) {
  if (!(tau.imag() > 0.05)) throw std::domain_error("dedekind_eta needs Im(tau) > 0.05");
  // Euler pentagonal series: prod (1 - q^n) = sum_k (-1)^k q^{k(3k-1)/2}
  cplx sum(1.0);
  for (int k = 1; k < 10000; ++k) {
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    const double e1 = k * (3.0 * k - 1.0) / 2.0, e2 = k * (3.0 * k + 1.0) / 2.0;
    const cplx term = sgn * (std::exp(2.0 * kPi * kI * tau * e1) + std::exp(2.0 * kPi * kI * tau * e2));
    sum += term;
    if (std::abs(term) < 1e-19 * std::abs(sum)) break;
  }
  return std::exp(kPi * kI * tau / 12.0) * sum;
}

ModularValues modular_values(const Lattice& L) {
  const cplx tau = L.tau(), w1 = L.omega1();
  const cplx eta = dedekind_eta(tau);
  const double two_pi = 2.0 * kPi;
  const cplx delta = std::pow(two_pi, 12) * std::pow(eta, 24);
  const cplx lattice_delta = delta / std::pow(w1, 12);
  const double log_abs =
      12.0 * std::log(two_pi) + 24.0 * std::log(std::abs(eta)) - 12.0 * std::log(std::abs(w1));
  const cplx c = two_pi / w1;
  const cplx g2 = std::pow(c, 4) * eisenstein_e4(tau) / 12.0;
  const cplx g3 = std::pow(c, 6) * eisenstein_e6(tau) / 216.0;
  const cplx check = g2 * g2 * g2 - 27.0 * g3 * g3;
  // g2^3 - 27 g3^2 cancels catastrophically for tall lattices.
  const double cancellation = (std::abs(g2 * g2 * g2) + 27.0 * std::abs(g3 * g3)) / std::abs(check);
  const double tol = std::max(1e-8, 64.0 * std::numeric_limits<double>::epsilon() * cancellation);
  if (lattice_delta == cplx(0.0) || rel_diff(check, lattice_delta) > tol)
    throw PrecisionLoss("discriminant cross-check failed beyond 1e-8");
  return {eta, delta, lattice_delta, log_abs, g2, g3, L};
}

}  // namespace polylab

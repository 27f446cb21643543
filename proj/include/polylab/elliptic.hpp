#pragma once

#include <complex>
#include <stdexcept>

#include "polylab/lattice.hpp"

namespace polylab {

class PrecisionLoss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TruncationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// value = exp(log_scale) * mantissa
struct ScaledValue {
  double log_scale = 0.0;
  cplx mantissa;

  cplx log() const { return log_scale + std::log(mantissa); }
  double log_abs() const { return log_scale + std::log(std::abs(mantissa)); }
  cplx value() const { return std::exp(log_scale) * mantissa; }
};

struct ThetaOptions {
  double target_eps = 1e-17;
  int truncation_bound = 64;
};

// Jacobi theta_1(v | tau) with nome q = exp(i pi tau), and its v-derivative.
ScaledValue theta1(cplx v, cplx tau, const ThetaOptions& opts = {});
ScaledValue theta1_prime(cplx v, cplx tau, const ThetaOptions& opts = {});

// Weight-2 Eisenstein series E2(tau) = 1 - 24 sum sigma_1(n) q^n, q = exp(2 pi i tau).
cplx eisenstein_e2(cplx tau);
cplx eisenstein_e4(cplx tau);
cplx eisenstein_e6(cplx tau);

// Weierstrass zeta by Eisenstein-ordered lattice summation with closed-form row sums.
cplx weierstrass_zeta_lattice_sum(const Lattice& L, cplx z);

struct QuasiPeriods {
  cplx eta1;
  cplx eta2;
  Lattice host;

  // R-linear extension: s*eta1 + t*eta2 for z = s*omega1 + t*omega2.
  cplx eta(cplx z) const;
};

QuasiPeriods quasi_periods(const Lattice& L);
cplx eta_linear(const QuasiPeriods& Q, cplx z);

class SigmaEvaluator {
 public:
  explicit SigmaEvaluator(const Lattice& L, ThetaOptions opts = {});
  SigmaEvaluator(const Lattice& L, const QuasiPeriods& Q, ThetaOptions opts = {});

  const Lattice& host() const { return host_; }
  cplx nome() const { return q_; }
  int truncation_bound() const { return opts_.truncation_bound; }
  double target_eps() const { return opts_.target_eps; }

  cplx sigma(cplx z) const;
  // Some logarithm of sigma(z); only the real part is branch-free.
  cplx log_sigma(cplx z) const;
  double log_abs_sigma(cplx z) const;
  // Weierstrass zeta = d/dz log sigma.
  cplx zeta(cplx z) const;

 private:
  Lattice host_;
  cplx eta1_;
  cplx q_;
  ThetaOptions opts_;
  cplx log_prefactor_;  // log(omega1 / (pi theta1'(0)))
};

cplx dedekind_eta(cplx tau);

struct ModularValues {
  cplx dedekind_eta;
  cplx delta;           // (2 pi)^12 eta(tau)^24
  cplx lattice_delta;   // omega1^-12 delta = g2^3 - 27 g3^2 of the lattice itself
  double log_abs_lattice_delta = 0.0;
  cplx g2;
  cplx g3;
  Lattice host;
};

ModularValues modular_values(const Lattice& L);

}  // namespace polylab

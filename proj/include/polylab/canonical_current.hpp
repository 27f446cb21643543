#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "polylab/elliptic.hpp"
#include "polylab/lattice.hpp"

namespace polylab {

// Typed signals for inputs on the singular locus; never returned as floats.
class EvaluationSignal : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SingularInput : public EvaluationSignal {
 public:
  using EvaluationSignal::EvaluationSignal;
};

class PoleSignal : public EvaluationSignal {
 public:
  using EvaluationSignal::EvaluationSignal;
};

class ZeroSignal : public EvaluationSignal {
 public:
  using EvaluationSignal::EvaluationSignal;
};

class GreenEvaluator {
 public:
  static constexpr double kDefaultSingularRadius = 0.05;

  explicit GreenEvaluator(const Lattice& L, double singular_radius = kDefaultSingularRadius,
                          ThetaOptions opts = {});

  const Lattice& host() const { return host_; }
  const QuasiPeriods& quasi() const { return Q_; }
  const SigmaEvaluator& sigma() const { return S_; }
  const ModularValues& modular() const { return M_; }
  double singular_radius() const { return singular_radius_; }

  GreenEvaluator with_singular_radius(double r) const;

  // g(z) = -2 log| exp(-z eta(z)/2) sigma(z) Delta^(1/12) |
  double value(cplx z) const;
  double value_unchecked(cplx z) const;
  bool is_singular(cplx z) const { return host_.lattice_distance(z) < singular_radius_; }

 private:
  Lattice host_;
  QuasiPeriods Q_;
  SigmaEvaluator S_;
  ModularValues M_;
  double singular_radius_;
};

double g_value(const GreenEvaluator& G, cplx z);

// phi(z) = exp(z eta(z0) - z0 eta(z0)/2) sigma(z - z0) / sigma(z)
class TranslationUnit {
 public:
  static constexpr double kSignalTolerance = 1e-12;

  TranslationUnit(const GreenEvaluator& G, cplx z0, int N);
  static TranslationUnit from_torsion(const GreenEvaluator& G, const TorsionPoint& p);

  const Lattice& host() const { return host_; }
  cplx z0() const { return z0_; }
  int order() const { return N_; }

  cplx value(cplx z) const;
  cplx log_value(cplx z) const;
  double log_abs(cplx z) const;

  // exp(omega eta(z0) - eta(omega) z0)
  cplx automorphy(cplx omega) const;

 private:
  void check_regular(cplx z) const;

  Lattice host_;
  QuasiPeriods Q_;
  SigmaEvaluator S_;
  cplx z0_;
  cplx eta_z0_;
  int N_;
};

cplx phi_value(const TranslationUnit& T, cplx z);
cplx automorphy_factor(const TranslationUnit& T, cplx omega);

double pushforward_check(const GreenEvaluator& G, int n, cplx z);
double distribution_check(const GreenEvaluator& G, int N, cplx z);
double main_theorem_check(const GreenEvaluator& G, int N, cplx z);

// P(z) / phi(z) with P(z) the product of phi over the a-division fibre of z.
cplx robert_ratio(const TranslationUnit& T, int a, cplx z);

struct RobertResult {
  double modulus_residual = 0.0;
  double phase_drift = 0.0;
  std::vector<cplx> ratios;
};

RobertResult robert_trace_check(const TranslationUnit& T, int a, std::span<const cplx> zs);

}  // namespace polylab

#include "polylab/canonical_current.hpp"

#include <cmath>
#include <numeric>
#include <numbers>
#include <sstream>

namespace polylab {

namespace {

std::string describe(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}

double wrap_phase(double x) { return std::remainder(x, 2.0 * std::numbers::pi); }

}  // namespace

GreenEvaluator::GreenEvaluator(const Lattice& L, double singular_radius, ThetaOptions opts)
    : host_(L),
      Q_(quasi_periods(L)),
      S_(L, Q_, opts),
      M_(modular_values(L)),
      singular_radius_(singular_radius) {
  if (!(singular_radius >= 0)) throw std::invalid_argument("singular radius must be non-negative");
}

GreenEvaluator GreenEvaluator::with_singular_radius(double r) const {
  if (!(r >= 0)) throw std::invalid_argument("singular radius must be non-negative");
  GreenEvaluator out = *this;
  out.singular_radius_ = r;
  return out;
}

double GreenEvaluator::value_unchecked(cplx z) const {
  const double log_abs_exp = (-z * Q_.eta(z) / 2.0).real();
  return -2.0 * (log_abs_exp + S_.log_abs_sigma(z)) - M_.log_abs_lattice_delta / 6.0;
}

double GreenEvaluator::value(cplx z) const {
  if (is_singular(z))
    throw SingularInput("g evaluated within the exclusion radius of the lattice at z = " +
                        describe(z));
  return value_unchecked(z);
}

double g_value(const GreenEvaluator& G, cplx z) { return G.value(z); }

TranslationUnit::TranslationUnit(const GreenEvaluator& G, cplx z0, int N)
    : host_(G.host()), Q_(G.quasi()), S_(G.sigma()), z0_(z0), eta_z0_(G.quasi().eta(z0)), N_(N) {
  if (N < 1) throw std::invalid_argument("translation unit order must be positive");
  if (host_.contains(z0, 1e-9))
    throw std::invalid_argument("translation unit needs z0 outside the lattice");
  if (!host_.contains(static_cast<double>(N) * z0, 1e-9))
    throw std::invalid_argument("z0 is not N-torsion");
}

TranslationUnit TranslationUnit::from_torsion(const GreenEvaluator& G, const TorsionPoint& p) {
  return TranslationUnit(G, p.z, p.order);
}

void TranslationUnit::check_regular(cplx z) const {
  if (host_.lattice_distance(z) < kSignalTolerance)
    throw PoleSignal("phi has a pole at z = " + describe(z));
  if (host_.lattice_distance(z - z0_) < kSignalTolerance)
    throw ZeroSignal("phi vanishes at z = " + describe(z));
}

cplx TranslationUnit::log_value(cplx z) const {
  check_regular(z);
  return z * eta_z0_ - z0_ * eta_z0_ / 2.0 + S_.log_sigma(z - z0_) - S_.log_sigma(z);
}

double TranslationUnit::log_abs(cplx z) const {
  check_regular(z);
  return (z * eta_z0_ - z0_ * eta_z0_ / 2.0).real() + S_.log_abs_sigma(z - z0_) -
         S_.log_abs_sigma(z);
}

cplx TranslationUnit::value(cplx z) const { return std::exp(log_value(z)); }

cplx TranslationUnit::automorphy(cplx omega) const {
  if (!host_.contains(omega, 1e-9))
    throw std::invalid_argument("automorphy factor needs a lattice element");
  return std::exp(omega * eta_z0_ - Q_.eta(omega) * z0_);
}

cplx phi_value(const TranslationUnit& T, cplx z) { return T.value(z); }

cplx automorphy_factor(const TranslationUnit& T, cplx omega) { return T.automorphy(omega); }

double pushforward_check(const GreenEvaluator& G, int n, cplx z) {
  if (n < 1) throw std::invalid_argument("pushforward degree must be positive");
  const double target = G.value(z);
  double sum = 0.0;
  for (cplx w : division_preimages(G.host(), z, n)) sum += G.value(w);
  return std::abs(sum - target);
}

double distribution_check(const GreenEvaluator& G, int N, cplx z) {
  if (N < 1) throw std::invalid_argument("distribution order must be positive");
  const double target = G.value(static_cast<double>(N) * z);
  double sum = 0.0;
  for (const TorsionPoint& s : enumerate_torsion(G.host(), N)) sum += G.value(z + s.z);
  return std::abs(target - sum);
}

double main_theorem_check(const GreenEvaluator& G, int N, cplx z) {
  if (N < 1) throw std::invalid_argument("theorem order must be positive");
  const double lhs = G.value(static_cast<double>(N) * z) - static_cast<double>(N) * N * G.value(z);
  double rhs = 0.0;
  for (const TorsionPoint& s : enumerate_torsion(G.host(), N)) {
    if (s.is_zero()) continue;
    rhs += -2.0 * TranslationUnit(G, -s.z, N).log_abs(z);
  }
  return std::abs(lhs - rhs);
}

cplx robert_ratio(const TranslationUnit& T, int a, cplx z) {
  if (a < 1) throw std::invalid_argument("trace degree must be positive");
  if (std::gcd(a, T.order()) != 1 || (a - 1) % T.order() != 0)
    throw std::invalid_argument("Robert relation needs a = 1 (mod N)");
  cplx log_p(0.0);
  for (cplx w : division_preimages(T.host(), z, a)) log_p += T.log_value(w);
  return std::exp(log_p - T.log_value(z));
}

RobertResult robert_trace_check(const TranslationUnit& T, int a, std::span<const cplx> zs) {
  RobertResult out;
  for (cplx z : zs) {
    const cplx r = robert_ratio(T, a, z);
    out.ratios.push_back(r);
    out.modulus_residual = std::max(out.modulus_residual, std::abs(std::abs(r) - 1.0));
  }
  for (std::size_t i = 1; i < out.ratios.size(); ++i) {
    const double d = wrap_phase(std::arg(out.ratios[i]) - std::arg(out.ratios[0]));
    out.phase_drift = std::max(out.phase_drift, std::abs(d));
  }
  return out;
}

}  // namespace polylab

#include "polylab/lattice.hpp"

#include <cmath>
#include <limits>

namespace polylab {

namespace {

constexpr int kMaxReductionSteps = 10000;

// Applies the row operation (omega2, omega1) <- B (omega2, omega1) to M.
void compose(BasisChange& M, const BasisChange& B) {
  BasisChange out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      out.m[r][c] = B.m[r][0] * M.m[0][c] + B.m[r][1] * M.m[1][c];
  M = out;
}

}  // namespace

Lattice::Lattice(cplx omega1, cplx omega2)
    : omega1_(omega1), omega2_(omega2), tau_(omega2 / omega1) {}

double Lattice::covolume() const {
  return std::abs((std::conj(omega1_) * omega2_).imag());
}

LatticeCoords Lattice::coords(cplx z) const {
  const double a = omega1_.real(), b = omega2_.real();
  const double c = omega1_.imag(), d = omega2_.imag();
  const double det = a * d - b * c;
  return {(d * z.real() - b * z.imag()) / det,
          (-c * z.real() + a * z.imag()) / det};
}

double Lattice::lattice_distance(cplx z) const {
  const auto [s, t] = coords(z);
  return std::hypot(s - std::round(s), t - std::round(t));
}

cplx Lattice::fundamental_rep(cplx z) const {
  const auto [s, t] = coords(z);
  double fs = s - std::floor(s);
  double ft = t - std::floor(t);
  if (fs >= 1.0) fs = 0.0;
  if (ft >= 1.0) ft = 0.0;
  return point(fs, ft);
}

Lattice Lattice::scaled(cplx c) const {
  if (c == cplx(0.0)) throw DegenerateLattice("scaling a lattice by zero");
  return Lattice(c * omega1_, c * omega2_);
}

std::pair<Lattice, BasisChange> Lattice::reduce(cplx omega1, cplx omega2) {
  if (omega1 == cplx(0.0) || omega2 == cplx(0.0) || !std::isfinite(std::abs(omega1)) ||
      !std::isfinite(std::abs(omega2)))
    throw DegenerateLattice("lattice periods must be finite and nonzero");
  BasisChange M;
  cplx w1 = omega1, w2 = omega2;
  cplx tau = w2 / w1;
  const double guard = std::sqrt(std::numeric_limits<double>::epsilon());
  if (std::abs(tau.imag()) < guard * std::abs(tau))
    throw DegenerateLattice("periods are (nearly) collinear");
  if (tau.imag() < 0) {
    std::swap(w1, w2);
    compose(M, BasisChange{{{{0, 1}, {1, 0}}}});
    tau = w2 / w1;
  }
  for (int step = 0; step < kMaxReductionSteps; ++step) {
    const double shift = std::round(tau.real());
    if (shift != 0.0) {
      const auto k = static_cast<std::int64_t>(shift);
      w2 -= shift * w1;
      compose(M, BasisChange{{{{1, -k}, {0, 1}}}});
      tau = w2 / w1;
    }
    if (std::norm(tau) < 1.0 - 1e-15) {
      // tau -> -1/tau: (omega2, omega1) -> (-omega1, omega2)
      const cplx nw2 = -w1;
      w1 = w2;
      w2 = nw2;
      compose(M, BasisChange{{{{0, -1}, {1, 0}}}});
      tau = w2 / w1;
      continue;
    }
    break;
  }
  // Boundary ties: prefer Re tau >= 0.
  if (std::abs(tau.real() + 0.5) < 1e-14) {
    w2 += w1;
    compose(M, BasisChange{{{{1, 1}, {0, 1}}}});
    tau = w2 / w1;
  }
  if (std::abs(std::norm(tau) - 1.0) < 1e-14 && tau.real() < 0) {
    const cplx nw2 = -w1;
    w1 = w2;
    w2 = nw2;
    compose(M, BasisChange{{{{0, -1}, {1, 0}}}});
    tau = w2 / w1;
  }
  if (!(tau.imag() > 0) || std::abs(tau.real()) > 0.5 + 1e-12 || std::norm(tau) < 1.0 - 1e-12)
    throw DegenerateLattice("modulus reduction did not converge");
  return {Lattice(w1, w2), M};
}

Lattice Lattice::from_tau(cplx tau) { return reduce(cplx(1.0), tau).first; }

std::pair<Lattice, BasisChange> reduce_lattice(cplx omega1, cplx omega2) {
  return Lattice::reduce(omega1, omega2);
}

PointRep PointRep::make(const Lattice& L, cplx z) {
  const auto [s, t] = L.coords(z);
  return {z, L, s >= 0 && s < 1 && t >= 0 && t < 1};
}

PointRep PointRep::to_fundamental() const { return {host.fundamental_rep(z), host, true}; }

std::vector<TorsionPoint> enumerate_torsion(const Lattice& L, int N) {
  if (N < 1) throw std::invalid_argument("torsion order must be positive");
  std::vector<TorsionPoint> out;
  out.reserve(static_cast<std::size_t>(N) * N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k)
      out.push_back({j, k, N, L.element(j, k) / static_cast<double>(N)});
  return out;
}

int torsion_index(int j, int k, int N) {
  auto mod = [N](int v) { return ((v % N) + N) % N; };
  return mod(j) * N + mod(k);
}

std::vector<cplx> division_preimages(const Lattice& L, cplx z, int a) {
  if (a < 1) throw std::invalid_argument("division order must be positive");
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(a) * a);
  for (int j = 0; j < a; ++j)
    for (int k = 0; k < a; ++k) out.push_back((z + L.element(j, k)) / static_cast<double>(a));
  return out;
}

bool is_congruent(const Lattice& L, cplx z, cplx w, double tol) {
  return L.lattice_distance(z - w) <= tol;
}

}  // namespace polylab

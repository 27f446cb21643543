#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace polylab {

using cplx = std::complex<double>;

class DegenerateLattice : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Integer 2x2 matrix acting on the column (omega2, omega1).
struct BasisChange {
  std::array<std::array<std::int64_t, 2>, 2> m{{{1, 0}, {0, 1}}};

  std::int64_t det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  bool operator==(const BasisChange&) const = default;
};

struct LatticeCoords {
  double s = 0.0;
  double t = 0.0;
};

// Oriented, reduced lattice: Im(tau) > 0, |Re tau| <= 1/2, |tau| >= 1.
class Lattice {
 public:
  static std::pair<Lattice, BasisChange> reduce(cplx omega1, cplx omega2);
  static Lattice from_tau(cplx tau);

  cplx omega1() const { return omega1_; }
  cplx omega2() const { return omega2_; }
  cplx tau() const { return tau_; }
  double covolume() const;

  LatticeCoords coords(cplx z) const;
  cplx point(double s, double t) const { return s * omega1_ + t * omega2_; }
  cplx element(std::int64_t j, std::int64_t k) const {
    return static_cast<double>(j) * omega1_ + static_cast<double>(k) * omega2_;
  }

  // Distance from z to the nearest lattice point, measured in (s, t).
  double lattice_distance(cplx z) const;
  bool contains(cplx z, double tol) const { return lattice_distance(z) <= tol; }

  // Representative of z with lattice coordinates in [0, 1).
  cplx fundamental_rep(cplx z) const;

  Lattice scaled(cplx c) const;

 private:
  Lattice(cplx omega1, cplx omega2);

  cplx omega1_;
  cplx omega2_;
  cplx tau_;
};

std::pair<Lattice, BasisChange> reduce_lattice(cplx omega1, cplx omega2);

struct PointRep {
  cplx z;
  Lattice host;
  bool reduced = false;

  static PointRep make(const Lattice& L, cplx z);
  PointRep to_fundamental() const;
};

struct TorsionPoint {
  int j = 0;
  int k = 0;
  int order = 1;
  cplx z;

  bool is_zero() const { return j == 0 && k == 0; }
};

std::vector<TorsionPoint> enumerate_torsion(const Lattice& L, int N);

std::vector<cplx> division_preimages(const Lattice& L, cplx z, int a);

bool is_congruent(const Lattice& L, cplx z, cplx w, double tol);

// Position of the class of (j, k) mod N in enumerate_torsion order.
int torsion_index(int j, int k, int N);

}  // namespace polylab

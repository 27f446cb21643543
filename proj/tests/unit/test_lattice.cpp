#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "polylab/lattice.hpp"
#include "polylab/sampling.hpp"

using namespace polylab;

namespace {

void check_reduced(const Lattice& L) {
  CHECK(L.tau().imag() > 0);
  CHECK(std::abs(L.tau().real()) <= 0.5 + 1e-14);
  CHECK(std::abs(L.tau()) >= 1.0 - 1e-14);
}

// Basis change applied to the input basis must reproduce the output basis.
void check_matrix(cplx w1, cplx w2, const Lattice& L, const BasisChange& M) {
  const auto& m = M.m;
  const cplx out2 = static_cast<double>(m[0][0]) * w2 + static_cast<double>(m[0][1]) * w1;
  const cplx out1 = static_cast<double>(m[1][0]) * w2 + static_cast<double>(m[1][1]) * w1;
  CHECK(std::abs(out2 - L.omega2()) < 1e-12 * std::abs(L.omega2()));
  CHECK(std::abs(out1 - L.omega1()) < 1e-12 * std::abs(L.omega1()));
  CHECK(std::abs(M.det()) == 1);
}

}  // namespace

TEST_CASE("integer translation example") {
  auto [L, M] = reduce_lattice(1.0, cplx(3, 1));
  CHECK(std::abs(L.tau() - cplx(0, 1)) < 1e-15);
  CHECK(M == BasisChange{{{{1, -3}, {0, 1}}}});
}

TEST_CASE("homothety is preserved") {
  auto [L, M] = reduce_lattice(2.0, cplx(0, 2));
  CHECK(std::abs(L.tau() - cplx(0, 1)) < 1e-15);
  CHECK(L.omega1() == cplx(2.0));
  CHECK(M.det() == 1);
}

TEST_CASE("hand-reduced example 0.3+0.4i") {
  // 0.3+0.4i -> S: -1/tau = -1.2+1.6i -> T: -0.2+1.6i
  auto [L, M] = reduce_lattice(1.0, cplx(0.3, 0.4));
  check_reduced(L);
  CHECK(std::abs(L.tau() - cplx(-0.2, 1.6)) < 1e-14);
  check_matrix(1.0, cplx(0.3, 0.4), L, M);
}

TEST_CASE("orientation is repaired") {
  auto [L, M] = reduce_lattice(1.0, cplx(0.2, -1.7));
  check_reduced(L);
  CHECK(M.det() == -1);
  check_matrix(1.0, cplx(0.2, -1.7), L, M);
}

TEST_CASE("boundary ties resolve to Re tau >= 0") {
  auto [L1, M1] = reduce_lattice(1.0, cplx(-0.5, 2.0));
  CHECK(std::abs(L1.tau() - cplx(0.5, 2.0)) < 1e-14);
  const cplx unit = std::polar(1.0, 1.745);
  auto [L2, M2] = reduce_lattice(1.0, unit);
  CHECK(std::abs(L2.tau() + std::conj(unit)) < 1e-14);
  check_matrix(1.0, unit, L2, M2);
}

TEST_CASE("degenerate lattices are rejected") {
  CHECK_THROWS_AS(reduce_lattice(1.0, 2.0), DegenerateLattice);
  CHECK_THROWS_AS(reduce_lattice(0.0, cplx(0, 1)), DegenerateLattice);
  CHECK_THROWS_AS(reduce_lattice(1.0, cplx(3.0, 1e-10)), DegenerateLattice);
}

TEST_CASE("reduction is idempotent and respects random bases") {
  Sampler rng(11);
  for (int i = 0; i < 200; ++i) {
    const cplx w1(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const cplx w2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    if (std::abs((w2 / w1).imag()) < 1e-3) continue;
    auto [L, M] = reduce_lattice(w1, w2);
    check_reduced(L);
    check_matrix(w1, w2, L, M);
    auto [L2, M2] = reduce_lattice(L.omega1(), L.omega2());
    CHECK(M2 == BasisChange{});
    CHECK(L2.omega1() == L.omega1());
    CHECK(L2.omega2() == L.omega2());
  }
}

TEST_CASE("torsion enumeration") {
  const Lattice L = Lattice::from_tau(cplx(0, 1));
  auto pts = enumerate_torsion(L, 2);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].is_zero());
  CHECK(std::abs(pts[1].z - cplx(0, 0.5)) < 1e-15);
  CHECK(std::abs(pts[2].z - cplx(0.5, 0)) < 1e-15);
  CHECK(std::abs(pts[3].z - cplx(0.5, 0.5)) < 1e-15);
  CHECK(enumerate_torsion(L, 1).size() == 1);

  const Lattice H = Lattice::from_tau(cplx(0.5, std::sqrt(3.0) / 2));
  auto p3 = enumerate_torsion(H, 3);
  REQUIRE(p3.size() == 9);
  int nonzero = 0;
  for (std::size_t a = 0; a < p3.size(); ++a) {
    nonzero += p3[a].is_zero() ? 0 : 1;
    for (std::size_t b = a + 1; b < p3.size(); ++b) CHECK_FALSE(is_congruent(H, p3[a].z, p3[b].z, 1e-9));
  }
  CHECK(nonzero == 8);
}

TEST_CASE("multiplication by a permutes torsion points") {
  const Lattice L = Lattice::from_tau(cplx(0.25, 2.0));
  for (int N : {2, 3, 5, 6}) {
    auto pts = enumerate_torsion(L, N);
    for (int a = 1; a <= 13; ++a) {
      if (std::gcd(a, N) != 1) continue;
      std::vector<int> hit(pts.size(), 0);
      for (const auto& p : pts) {
        const cplx az = static_cast<double>(a) * p.z;
        int found = -1;
        for (std::size_t i = 0; i < pts.size(); ++i)
          if (is_congruent(L, az, pts[i].z, 1e-9)) found = static_cast<int>(i);
        REQUIRE(found >= 0);
        CHECK(found == torsion_index(a * p.j, a * p.k, N));
        ++hit[found];
        if (a % N == 1 % N) CHECK(found == torsion_index(p.j, p.k, N));
      }
      for (int h : hit) CHECK(h == 1);
    }
  }
}

TEST_CASE("division preimages") {
  const Lattice L = Lattice::from_tau(cplx(0, 1));
  auto zero_fibre = division_preimages(L, 0.0, 2);
  auto two_torsion = enumerate_torsion(L, 2);
  REQUIRE(zero_fibre.size() == 4);
  for (const auto& t : two_torsion) {
    int count = 0;
    for (cplx w : zero_fibre) count += is_congruent(L, w, t.z, 1e-12) ? 1 : 0;
    CHECK(count == 1);
  }
  auto id = division_preimages(L, cplx(0.3, 0.4), 1);
  REQUIRE(id.size() == 1);
  CHECK(id[0] == cplx(0.3, 0.4));

  const cplx z(0.3, 0.4);
  auto nine = division_preimages(L, z, 3);
  REQUIRE(nine.size() == 9);
  for (std::size_t a = 0; a < nine.size(); ++a) {
    CHECK(is_congruent(L, 3.0 * nine[a], z, 1e-12));
    for (std::size_t b = a + 1; b < nine.size(); ++b) CHECK_FALSE(is_congruent(L, nine[a], nine[b], 1e-9));
    // closed under translation by (1/3)-lattice points
    for (const auto& t : enumerate_torsion(L, 3)) {
      int count = 0;
      for (cplx w : nine) count += is_congruent(L, nine[a] + t.z, w, 1e-12) ? 1 : 0;
      CHECK(count == 1);
    }
  }
}

TEST_CASE("congruence") {
  const Lattice L = Lattice::from_tau(cplx(0, 1));
  CHECK(is_congruent(L, 0.5, cplx(1.5, 1.0), 1e-12));
  CHECK_FALSE(is_congruent(L, 0.5, 0.6, 1e-12));
  const Lattice R = Lattice::from_tau(cplx(0.31, 1.7));
  const cplx z(0.123, -0.456);
  CHECK(is_congruent(R, z, z + R.element(7, -4), 1e-10));
  CHECK(is_congruent(R, R.fundamental_rep(z), z, 1e-12));
  auto rep = PointRep::make(R, z + R.element(3, 2));
  CHECK_FALSE(rep.reduced);
  CHECK(rep.to_fundamental().reduced);
}

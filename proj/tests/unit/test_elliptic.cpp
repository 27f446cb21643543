#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "polylab/elliptic.hpp"
#include "polylab/sampling.hpp"

using namespace polylab;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0, 1);

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

Lattice random_lattice(Sampler& rng) {
  for (;;) {
    const cplx w1(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const cplx w2(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const cplx tau = w2 / w1;
    if (std::abs(tau.imag()) < 0.05 * std::abs(tau)) continue;
    auto L = reduce_lattice(w1, w2).first;
    if (L.tau().imag() < 4.0) return L;
  }
}

}  // namespace

TEST_CASE("gaussian lattice quasi-periods") {
  const Lattice L = Lattice::from_tau(kI);
  const QuasiPeriods Q = quasi_periods(L);
  CHECK(std::abs(Q.eta1 - kPi) < 1e-14);
  CHECK(std::abs(Q.eta2 + kPi * kI) < 1e-14);
  // Lattice-sum route alone, then Legendre closure.
  const cplx zeta_half = weierstrass_zeta_lattice_sum(L, 0.5);
  CHECK(std::abs(zeta_half - kPi / 2) < 1e-14);
  CHECK(std::abs(eta_linear(Q, kI) + kPi * kI) < 1e-14);
  CHECK(std::abs(eta_linear(Q, L.omega1()) - Q.eta1) < 1e-15);
  CHECK(std::abs(eta_linear(Q, L.point(0.5, 0.5)) - (Q.eta1 + Q.eta2) / 2.0) < 1e-15);
}

TEST_CASE("raw box sum converges to the accelerated lattice sum") {
  // Box |m|,|n| <= 60 summed directly (high-precision oracle): 1.5708077103524664.
  // The box sum approaches pi/2 slowly; the accelerated sum must land on pi/2.
  const Lattice L = Lattice::from_tau(kI);
  const double box60 = 1.5708077103524664;
  CHECK(std::abs(box60 - kPi / 2) < 2e-5);
  CHECK(std::abs(weierstrass_zeta_lattice_sum(L, 0.5).real() - kPi / 2) < 1e-14);
}

TEST_CASE("Legendre relation and homogeneity on random lattices") {
  Sampler rng(2024);
  for (int i = 0; i < 20; ++i) {
    const Lattice L = random_lattice(rng);
    const QuasiPeriods Q = quasi_periods(L);
    const cplx leg = Q.eta1 * L.omega2() - Q.eta2 * L.omega1();
    CHECK(std::abs(leg - 2.0 * kPi * kI) < 1e-10);
    const cplx c(rng.uniform(0.3, 3), rng.uniform(-2, 2));
    const QuasiPeriods Qc = quasi_periods(L.scaled(c));
    CHECK(rel(Qc.eta1, Q.eta1 / c) < 1e-12);
    CHECK(rel(Qc.eta2, Q.eta2 / c) < 1e-12);
    const cplx z(rng.uniform(-2, 2), rng.uniform(-2, 2)), w(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const double a = rng.uniform(-3, 3);
    CHECK(std::abs(Q.eta(a * z + w) - (a * Q.eta(z) + Q.eta(w))) < 1e-12 * (1 + std::abs(Q.eta(z))));
  }
}

TEST_CASE("sigma against high-precision oracles") {
  {
    const SigmaEvaluator S(Lattice::from_tau(kI));
    const cplx ref(0.3020724719345795928592624368603383330169, 0.4241657447152292165326444852685817778223);
    CHECK(rel(S.sigma(cplx(0.3, 0.4)), ref) < 1e-14);
  }
  {
    const Lattice L = reduce_lattice(1.0, cplx(0.5, 1.0)).first;
    REQUIRE(std::abs(L.tau() - cplx(0.5, 1.0)) < 1e-15);
    const SigmaEvaluator S(L);
    const cplx ref(-3.595160002569732664492393772821327025293, 6.735758597693279679045691699897672063613);
    CHECK(rel(S.sigma(cplx(0.7, -1.3)), ref) < 1e-13);
    // Laurent-series route (independent of theta functions) at two points.
    CHECK(rel(S.sigma(cplx(0.3, 0.2)), cplx(0.30208911933634154856, 0.20005222421225521720)) < 1e-14);
    CHECK(rel(S.sigma(cplx(0.1, -0.25)), cplx(0.09962520391370799076, -0.25008153629332769472)) < 1e-14);
  }
}

TEST_CASE("sigma normalization and parity") {
  const SigmaEvaluator S(Lattice::from_tau(kI));
  const cplx z(1e-6, 0);
  CHECK(std::abs(S.sigma(z) / z - 1.0) < 1e-9);
  CHECK(std::abs(S.sigma(cplx(1e-8, 0)) / cplx(1e-8, 0) - 1.0) < 1e-12);
  CHECK(std::abs(S.sigma(0.0)) < 1e-300);
  Sampler rng(5);
  const SigmaEvaluator T(Lattice::from_tau(cplx(0.25, 2.0)));
  for (int i = 0; i < 50; ++i) {
    const cplx w(rng.uniform(-2, 2), rng.uniform(-3, 3));
    CHECK(rel(T.sigma(-w), -T.sigma(w)) < 1e-13);
  }
}

TEST_CASE("sigma periodicity law") {
  Sampler rng(77);
  for (int i = 0; i < 10; ++i) {
    const Lattice L = random_lattice(rng);
    const QuasiPeriods Q = quasi_periods(L);
    const SigmaEvaluator S(L, Q);
    for (int j = 0; j < 20; ++j) {
      const cplx z = rng.lattice_point(L);
      for (auto [w, psi] : {std::pair{L.omega1(), -1.0}, std::pair{L.omega2(), -1.0},
                            std::pair{L.omega1() + L.omega2(), -1.0}}) {
        const cplx expected = psi * std::exp(Q.eta(w) * (z + w / 2.0)) * S.sigma(z);
        CHECK(rel(S.sigma(z + w), expected) < 1e-9);
      }
      // psi(2 omega1) = +1: 2 omega1 / 2 lies in the lattice.
      const cplx w2 = 2.0 * L.omega1();
      CHECK(rel(S.sigma(z + w2), std::exp(Q.eta(w2) * (z + w2 / 2.0)) * S.sigma(z)) < 1e-9);
    }
  }
}

TEST_CASE("sigma homogeneity and zeta consistency") {
  Sampler rng(31);
  const Lattice L = Lattice::from_tau(cplx(-0.3, 1.2));
  const SigmaEvaluator S(L);
  for (int i = 0; i < 20; ++i) {
    const cplx c(rng.uniform(0.2, 3), rng.uniform(-2, 2));
    const SigmaEvaluator Sc(L.scaled(c));
    const cplx z = rng.lattice_point(L, -0.5, 0.5);
    CHECK(rel(Sc.sigma(c * z), c * S.sigma(z)) < 1e-9);
    const double h = 1e-5;
    const cplx fd = (S.log_sigma(z + h) - S.log_sigma(z - h)) / (2 * h);
    CHECK(std::abs(fd - S.zeta(z)) < 1e-5 * std::max(1.0, std::abs(S.zeta(z))));
  }
  const QuasiPeriods Q = quasi_periods(L);
  CHECK(rel(2.0 * S.zeta(L.omega1() / 2.0), Q.eta1) < 1e-12);
  CHECK(rel(2.0 * S.zeta(L.omega2() / 2.0), Q.eta2) < 1e-12);
}

TEST_CASE("truncation failure is reported") {
  const Lattice L = Lattice::from_tau(kI);
  const SigmaEvaluator S(L, ThetaOptions{1e-17, 8});
  CHECK_NOTHROW(S.sigma(cplx(0.3, 0.2)));
  CHECK_THROWS_AS(S.sigma(cplx(0.0, 40.0)), TruncationFailure);
}

TEST_CASE("modular values") {
  const double eta_i = std::tgamma(0.25) / (2.0 * std::pow(kPi, 0.75));
  CHECK(std::abs(dedekind_eta(kI) - eta_i) < 1e-15);
  CHECK(std::abs(dedekind_eta(kI).real() - 0.7682254223260566590) < 1e-15);
  const ModularValues M = modular_values(Lattice::from_tau(kI));
  CHECK(std::abs(M.log_abs_lattice_delta - 15.72639511093811421902730099965674401542) < 1e-13);
  CHECK(rel(M.delta, M.lattice_delta) < 1e-14);
  CHECK(rel(M.g2 * M.g2 * M.g2 - 27.0 * M.g3 * M.g3, M.lattice_delta) < 1e-12);

  // |Delta(-1/tau)| = |tau|^12 |Delta(tau)| at tau = 2i, using the unreduced modulus.
  const cplx tau(0, 2);
  auto Delta = [](cplx t) { return std::pow(2 * kPi, 12) * std::pow(dedekind_eta(t), 24); };
  CHECK(std::abs(std::abs(Delta(tau)) - 13201.29864455624445912727777277113759384) < 1e-9);
  CHECK(rel(std::abs(Delta(-1.0 / tau)), std::pow(std::abs(tau), 12) * std::abs(Delta(tau))) < 1e-12);

  // tau and tau + 1 give the same |delta|.
  const cplx t0(0.2, 1.1);
  CHECK(rel(std::abs(Delta(t0 + 1.0)), std::abs(Delta(t0))) < 1e-13);
  const ModularValues A = modular_values(Lattice::from_tau(t0));
  const ModularValues B = modular_values(Lattice::from_tau(t0 + 1.0));
  CHECK(std::abs(A.log_abs_lattice_delta - B.log_abs_lattice_delta) < 1e-12);
}

TEST_CASE("lattice discriminant transforms with weight 12") {
  const Lattice L = Lattice::from_tau(cplx(0.1, 1.3));
  const cplx c(0.7, -1.1);
  const ModularValues A = modular_values(L), B = modular_values(L.scaled(c));
  CHECK(rel(B.lattice_delta, A.lattice_delta / std::pow(c, 12)) < 1e-12);
}

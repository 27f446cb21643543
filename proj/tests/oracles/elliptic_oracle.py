"""Independent high-precision reference values (mpmath) frozen into the C++ tests.

Run with `python3 tests/oracles/elliptic_oracle.py`; nothing in the build depends on it.
"""
from mpmath import mp, mpf, mpc, pi, exp, log, jtheta, gamma, sqrt, cot, nsum, inf, fabs

mp.dps = 40


def zeta_half_direct(omega1, omega2, z, M):
    # Raw lattice sum 1/z + sum' [1/(z-w) + 1/w + z/w^2] over the box |m|,|n| <= M.
    s = 1 / z
    for m in range(-M, M + 1):
        for n in range(-M, M + 1):
            if m == 0 and n == 0:
                continue
            w = m * omega1 + n * omega2
            s += 1 / (z - w) + 1 / w + z / w**2
    return s


def sigma_theta(omega1, omega2, z):
    tau = omega2 / omega1
    q = exp(1j * pi * tau)
    v = pi * z / omega1
    eta1 = (pi**2 / (3 * omega1)) * e2(tau)
    th1p = jtheta(1, 0, q, 1)
    return (omega1 / pi) * exp(eta1 * z**2 / (2 * omega1)) * jtheta(1, v, q) / th1p


def e2(tau):
    qq = exp(2j * pi * tau)
    return 1 - 24 * nsum(lambda n: n * qq**n / (1 - qq**n), [1, inf])


def quasi(omega1, omega2):
    tau = omega2 / omega1
    eta1 = (pi**2 / (3 * omega1)) * e2(tau)
    eta2 = (eta1 * omega2 - 2j * pi) / omega1
    return eta1, eta2


def delta(omega1, omega2):
    tau = omega2 / omega1
    qq = exp(2j * pi * tau)
    prod = mpf(1)
    for n in range(1, 200):
        prod *= (1 - qq**n)
    return (2 * pi / omega1) ** 12 * qq * prod**24


def g2g3(omega1, omega2):
    tau = omega2 / omega1
    qq = exp(2j * pi * tau)
    e4 = 1 + 240 * nsum(lambda n: n**3 * qq**n / (1 - qq**n), [1, inf])
    e6 = 1 - 504 * nsum(lambda n: n**5 * qq**n / (1 - qq**n), [1, inf])
    return (2 * pi / omega1) ** 4 * e4 / 12, (2 * pi / omega1) ** 6 * e6 / 216


def sigma_laurent(omega1, omega2, z, K=40):
    # Taylor route independent of theta functions: wp = z^-2 + sum c_k z^(2k-2).
    g2, g3 = g2g3(omega1, omega2)
    c = {2: g2 / 20, 3: g3 / 28}
    for k in range(4, K):
        c[k] = 3 * sum(c[m] * c[k - m] for m in range(2, k - 1)) / ((2 * k + 1) * (k - 3))
    return exp(log(z) - sum(c[k] * z ** (2 * k) / ((2 * k - 1) * (2 * k)) for k in range(2, K)))


def g_value(omega1, omega2, z):
    eta1, eta2 = quasi(omega1, omega2)
    # lattice coordinates
    a, b, c, d = omega1.real, omega2.real, omega1.imag, omega2.imag
    det = a * d - b * c
    s = (d * z.real - b * z.imag) / det
    t = (-c * z.real + a * z.imag) / det
    eta_z = s * eta1 + t * eta2
    val = exp(-z * eta_z / 2) * sigma_theta(omega1, omega2, z)
    return -2 * log(abs(val)) - log(abs(delta(omega1, omega2))) / 6


if __name__ == "__main__":
    one, i = mpc(1), mpc(0, 1)
    print("eta1(Z[i]) =", quasi(one, i)[0])
    print("eta2(Z[i]) =", quasi(one, i)[1])
    print("dedekind eta(i) =", gamma(mpf(1) / 4) / (2 * pi ** (mpf(3) / 4)))
    print("zeta(1/2) raw box M=60 =", zeta_half_direct(one, i, mpc(0.5), 60))
    print("g(0.3+0.4i; Z[i]) =", g_value(one, i, mpc("0.3", "0.4")))
    tau = mpc("0.5", sqrt(3) / 2)
    print("g(0.2+0.1i; hex) =", g_value(one, tau, mpc("0.2", "0.1")))
    tau2 = mpc("0.25", "2")
    print("g(0.37+0.91i; [1,1/4+2i]) =", g_value(one, tau2, mpc("0.37", "0.91")))
    print("sigma(0.3+0.4i; Z[i]) =", sigma_theta(one, i, mpc("0.3", "0.4")))
    print("sigma(0.7-1.3i; [1,0.5+i]) =", sigma_theta(one, mpc("0.5", "1"), mpc("0.7", "-1.3")))
    print("log|Delta(Z[i])| =", log(abs(delta(one, i))))
    print("|Delta(2i)| =", abs(delta(one, 2 * i)))
    for z in (mpc("0.3", "0.2"), mpc("0.1", "-0.25")):
        print("sigma(%s; [1,0.5+i]) theta/laurent =" % z,
              sigma_theta(one, mpc("0.5", "1"), z), sigma_laurent(one, mpc("0.5", "1"), z))

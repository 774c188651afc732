"""High-precision reference values frozen into the unit tests.

Independent of the C++ code: everything is built from mpmath's erfc, its
quadrature and findroot. Run with `python3 tests/oracle/references.py`.
"""
import mpmath as mp

mp.mp.dps = 50
S2PI = mp.sqrt(2 * mp.pi)


def faddeeva(z):
    return mp.exp(-z * z) * mp.erfc(-1j * z)


def Z(z):
    """Z(z) = <1/(v - z)> under the unit Gaussian, continued from Im z > 0."""
    return 1j * mp.sqrt(mp.pi / 2) * faddeeva(z / mp.sqrt(2))


def Z_integral(z):
    """Direct quadrature of the defining integral (Im z > 0 only)."""
    f = lambda v: mp.exp(-v * v / 2) / (v - z)
    x = mp.re(z)
    return mp.quad(f, [-mp.inf, x - 5, x, x + 5, mp.inf]) / S2PI


def resolvent_moments(z, n=7):
    # <v^j/(v - z)> from <v^j> = 1, 0, 1, 0, 3, 0, 15
    m = [1, 0, 1, 0, 3, 0, 15, 0]
    p = [Z(z)]
    for j in range(n - 1):
        p.append(m[j] + z * p[-1])
    return p


def green(z):
    """5x5 G in the basis (1, v1, v2, v3, (|v|^2 - 3)/sqrt6), v1 along k."""
    p = resolvent_moments(z)
    r6 = mp.sqrt(6)
    G = mp.zeros(5, 5)
    G[0, 0], G[0, 1], G[1, 1] = p[0], p[1], p[2]
    G[0, 4] = (p[2] - p[0]) / r6
    G[1, 4] = (p[3] - p[1]) / r6
    G[4, 4] = (p[4] - 2 * p[2] + 5 * p[0]) / 6
    G[2, 2] = G[3, 3] = p[0]
    for i in range(5):
        for j in range(i):
            G[i, j] = G[j, i]
    return G


def zeta(lam, k, tau):
    return 1j * (tau * lam + 1) / (k * tau)


def sigma(lam, k, tau):
    return mp.det(green(zeta(lam, k, tau)) / (1j * tau * k) - mp.eye(5))


def long_block(lam, k, tau):
    G = green(zeta(lam, k, tau))
    idx = [0, 1, 4]
    B = mp.matrix(3, 3)
    for a in range(3):
        for b in range(3):
            B[a, b] = G[idx[a], idx[b]] / (1j * tau * k) - (1 if a == b else 0)
    return B


def shear(lam, k, tau):
    return Z(zeta(lam, k, tau)) - 1j * tau * k


def null3(A):
    return [A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1],
            -(A[1, 0] * A[2, 2] - A[1, 2] * A[2, 0]),
            A[1, 0] * A[2, 1] - A[1, 1] * A[2, 0]]


def generator(k, tau, seeds):
    """Roots and S = M diag(lambda) M^-1 from the null vectors at each root."""
    ld = mp.findroot(lambda l: mp.det(long_block(l, k, tau)), mp.mpc(seeds[0]))
    la = mp.findroot(lambda l: mp.det(long_block(l, k, tau)), mp.mpc(seeds[1]))
    ls = mp.findroot(lambda l: shear(l, k, tau), mp.mpc(seeds[2]))
    M = mp.zeros(5, 5)
    for c, l in enumerate([ld, la, mp.conj(la)]):
        M[0, c], M[1, c], M[4, c] = null3(long_block(l, k, tau))
    M[2, 3] = M[3, 4] = 1
    return M * mp.diag([ld, la, mp.conj(la), ls, ls]) * mp.inverse(M), (ld, la, ls)


def show(label, x, n=20):
    print(f"{label}: {mp.nstr(x, n)}")


def main():
    print("== Faddeeva w")
    for z in [3j, 0.3 + 0.7j, 1 + 1j, 5 + 0.01j, -2 + 0.5j, 20 + 20j, 0.5 - 0.2j, -3 - 1j]:
        show(f"w({z})", faddeeva(mp.mpc(z)), 18)

    print("== Z (erfc form; quadrature gap for Im z > 0)")
    for z in [0.5 + 0.5j, 2j, 5j, 3 + 0.1j, -1 + 2j, 1 - 1j, -2 - 0.5j, 10 + 1j, 1j, 1 + 1j]:
        z = mp.mpc(z)
        gap = abs(Z_integral(z) - Z(z)) if mp.im(z) > 0 else mp.mpf(0)
        print(f"Z({mp.nstr(z, 4)}) = {mp.nstr(Z(z), 20)}  gap {mp.nstr(gap, 3)}")
    print("asymptotic Z(10), seventh term 11!!/10^13 =", mp.nstr(mp.mpf(10395) / 10**13, 6))

    print("== Green's matrix at zeta = 1 + i")
    G = green(mp.mpc(1, 1))
    show("G(0,1)", G[0, 1])
    show("G(4,4)", G[4, 4])
    show("G(0,4)", G[0, 4])

    print("== Sigma at k = 0.7, tau = 0.5")
    for lam in [-0.5 + 0.3j, 0.2 - 1.1j, -1.5 + 2j]:
        show(f"Sigma({lam})", sigma(mp.mpc(lam), mp.mpf(0.7), mp.mpf(0.5)))

    cases = [(0.7, 0.5, [-0.2127, -0.218 + 0.92j, -0.2236]),
             (0.02, 0.25, [-9.9995e-5, -9.99966e-5 + 0.02582j, -9.99975e-5]),
             (4.5, 0.25, [-3.0055, -3.1545 + 6.133j, -3.3714])]
    for k, tau, seeds in cases:
        S, (ld, la, ls) = generator(mp.mpf(k), mp.mpf(tau), seeds)
        print(f"== roots and generator at k = {k}, tau = {tau}")
        show(" lambda_diff", ld)
        show(" lambda_ac", la)
        show(" lambda_shear", ls)
        for i, j in [(1, 0), (1, 1), (1, 4), (4, 0), (4, 1), (4, 4)]:
            show(f" S({i},{j})", S[i, j], 17)

    print("== critical k tau")
    # diffusion: the root reaches the essential line at zeta = 0
    kd = mp.findroot(lambda s: mp.re(mp.det(long_block(mp.mpf(-1), s, mp.mpf(1)))), 1.356)
    show("diffusion", kd)
    # acoustic: a real-zeta root of the longitudinal determinant
    def ac(s, x):
        B = green(x)
        idx = [0, 1, 4]
        d = mp.det(mp.matrix([[B[idx[a], idx[b]] / (1j * s) - (a == b) for b in range(3)] for a in range(3)]))
        return [mp.re(d), mp.im(d)]
    r = mp.findroot(ac, (mp.mpf(1.3118), mp.mpf(-1.5)))
    show("acoustic", r[0])
    show("shear", mp.sqrt(mp.pi / 2))


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Regenerate the hybrid Gauss-trapezoidal end-correction rule for log-singular
periodic integrands (Alpert, SIAM J. Sci. Comput. 20, 1999).

The rule replaces the trapezoidal nodes 0, h, ..., (a-1)h next to a
logarithmic singularity at 0 by j nodes v_k h with weights u_k h.  Nodes and
weights solve the moment equations

    sum_k u_k v_k^m          = -zeta(-m, a)
    sum_k u_k v_k^m log v_k  =  zeta'(-m, a)        m = 0, ..., j-1

(Hurwitz zeta), which make the rule exact through the generalized
Euler-Maclaurin expansion for f(x) = phi(x) + psi(x) log x.  The system is
solved by Newton's method with homotopy in the target moments, in shifted
Legendre moments and log-node variables, at 160 digits.

Usage: alpert_rule.py [j] [a]      (defaults 15 10, the order-16 rule)
Output: one "node weight" pair per line, ascending, 25 significant digits.
"""
import sys

import mpmath as mp

mp.mp.dps = 160
TOL = mp.mpf(10) ** -110


def legendre_coeffs(j):
    """C[m][i]: P_m(2y - 1) = sum_i C[m][i] y^i."""
    return [[(-1) ** (m + i) * mp.binomial(m, i) * mp.binomial(m + i, i)
             for i in range(j)] for m in range(j)]


def to_legendre(raw, C, j):
    plain = [mp.fsum(C[m][i] * raw[i] for i in range(j)) for m in range(j)]
    logs = [mp.fsum(C[m][i] * raw[j + i] for i in range(j)) for m in range(j)]
    return plain + logs


def raw_moments(u, v, j, a):
    out = [mp.fsum(u[k] * v[k] ** m for k in range(j)) / a ** m for m in range(j)]
    out += [mp.fsum(u[k] * v[k] ** m * mp.log(v[k]) for k in range(j)) / a ** m
            for m in range(j)]
    return out


def raw_jacobian(u, v, j, a):
    # derivatives with respect to u_k and w_k = log v_k
    J = [[mp.mpf(0)] * (2 * j) for _ in range(2 * j)]
    for m in range(j):
        for k in range(j):
            vm = v[k] ** m / a ** m
            lv = mp.log(v[k])
            J[m][k] = vm
            J[m][j + k] = m * u[k] * vm
            J[j + m][k] = vm * lv
            J[j + m][j + k] = u[k] * vm * (m * lv + 1)
    return J


def gauss_solve(A, b):
    n = len(b)
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    for c in range(n):
        p = max(range(c, n), key=lambda r: abs(M[r][c]))
        M[c], M[p] = M[p], M[c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            for q in range(c, n + 1):
                M[r][q] -= f * M[c][q]
    x = [mp.mpf(0)] * n
    for i in reversed(range(n)):
        x[i] = (M[i][n] - mp.fsum(M[i][q] * x[q] for q in range(i + 1, n))) / M[i][i]
    return x


def gauss_legendre(j):
    xs, ws = [], []
    for i in range(1, j + 1):
        x = mp.cos(mp.pi * (i - mp.mpf(1) / 4) / (j + mp.mpf(1) / 2))
        for _ in range(200):
            p0, p1 = mp.mpf(1), x
            for n in range(2, j + 1):
                p0, p1 = p1, ((2 * n - 1) * x * p1 - (n - 1) * p0) / n
            dp = j * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < TOL:
                break
        xs.append(x)
        ws.append(2 / ((1 - x * x) * dp * dp))
    return xs, ws


def solve(j, a, clustering=2):
    C = legendre_coeffs(j)
    xs, ws = gauss_legendre(j)
    y = [(x + 1) / 2 for x in xs]
    v = [a * t ** clustering for t in y]
    u = [a * w / 2 * clustering * t ** (clustering - 1) for t, w in zip(y, ws)]

    zeta = [-mp.zeta(-m, a) / a ** m for m in range(j)]
    zeta += [mp.zeta(-m, a, 1) / a ** m for m in range(j)]
    target = to_legendre(zeta, C, j)
    start = to_legendre(raw_moments(u, v, j, a), C, j)

    tau, dt = mp.mpf(0), mp.mpf(1) / 50
    while tau < 1:
        tn = min(tau + dt, mp.mpf(1))
        goal = [(1 - tn) * s + tn * t for s, t in zip(start, target)]
        uu, vv, ok = u[:], v[:], False
        for _ in range(30):
            F = [f - g for f, g in zip(to_legendre(raw_moments(uu, vv, j, a), C, j), goal)]
            if max(abs(f) for f in F) < TOL:
                ok = True
                break
            R = raw_jacobian(uu, vv, j, a)
            Jl = [[mp.fsum(C[m][i] * R[blk + i][c] for i in range(j)) for c in range(2 * j)]
                  for blk in (0, j) for m in range(j)]
            d = gauss_solve(Jl, [-f for f in F])
            if max(abs(x) for x in d[j:]) > 3:
                break
            uu = [uu[k] + d[k] for k in range(j)]
            vv = [vv[k] * mp.exp(d[j + k]) for k in range(j)]
        if ok:
            u, v, tau = uu, vv, tn
            dt = min(dt * 2, mp.mpf(1) / 10)
        else:
            dt /= 2
            if dt < mp.mpf(10) ** -10:
                raise RuntimeError("homotopy stalled at tau = %s" % mp.nstr(tau, 8))
    return u, v


def main():
    j = int(sys.argv[1]) if len(sys.argv) > 1 else 15
    a = int(sys.argv[2]) if len(sys.argv) > 2 else 10
    u, v = solve(j, a)
    for vk, uk in sorted(zip(v, u)):
        print(mp.nstr(vk, 25, min_fixed=-30, max_fixed=30),
              mp.nstr(uk, 25, min_fixed=-30, max_fixed=30))


if __name__ == "__main__":
    main()

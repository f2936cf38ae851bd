"""One- and two-electron integrals over contracted Cartesian Gaussians.

McMurchie-Davidson scheme: Cartesian overlap distributions expanded in
Hermite Gaussians, Coulomb integrals assembled from Boys-function
recurrences. Plenty fast at STO-3G scale for s and p shells.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import special

from chem_ingest.basis import BasisFunction


@lru_cache(maxsize=None)
def _hermite_e(l1: int, l2: int, t: int, qx: float, a: float, b: float) -> float:
    """Hermite expansion coefficient E_t^{l1 l2} for one Cartesian direction."""
    p = a + b
    q = a * b / p
    if t < 0 or t > l1 + l2:
        return 0.0
    if l1 == l2 == t == 0:
        return math.exp(-q * qx * qx)
    if l2 == 0:
        return (
            _hermite_e(l1 - 1, l2, t - 1, qx, a, b) / (2 * p)
            - (q * qx / a) * _hermite_e(l1 - 1, l2, t, qx, a, b)
            + (t + 1) * _hermite_e(l1 - 1, l2, t + 1, qx, a, b)
        )
    return (
        _hermite_e(l1, l2 - 1, t - 1, qx, a, b) / (2 * p)
        + (q * qx / b) * _hermite_e(l1, l2 - 1, t, qx, a, b)
        + (t + 1) * _hermite_e(l1, l2 - 1, t + 1, qx, a, b)
    )


def _boys(n: int, x: float) -> float:
    return special.hyp1f1(n + 0.5, n + 1.5, -x) / (2.0 * n + 1.0)


def _hermite_coulomb(t: int, u: int, v: int, n: int, p: float,
                     pc: tuple[float, float, float]) -> float:
    if t < 0 or u < 0 or v < 0:
        return 0.0
    if t == u == v == 0:
        r2 = pc[0] ** 2 + pc[1] ** 2 + pc[2] ** 2
        return (-2.0 * p) ** n * _boys(n, p * r2)
    if t > 0:
        return (
            (t - 1) * _hermite_coulomb(t - 2, u, v, n + 1, p, pc)
            + pc[0] * _hermite_coulomb(t - 1, u, v, n + 1, p, pc)
        )
    if u > 0:
        return (
            (u - 1) * _hermite_coulomb(t, u - 2, v, n + 1, p, pc)
            + pc[1] * _hermite_coulomb(t, u - 1, v, n + 1, p, pc)
        )
    return (
        (v - 1) * _hermite_coulomb(t, u, v - 2, n + 1, p, pc)
        + pc[2] * _hermite_coulomb(t, u, v - 1, n + 1, p, pc)
    )


def _overlap_prim(la, lb, ra, rb, a, b) -> float:
    p = a + b
    value = (math.pi / p) ** 1.5
    for axis in range(3):
        value *= _hermite_e(la[axis], lb[axis], 0, ra[axis] - rb[axis], a, b)
    return value


def _kinetic_prim(la, lb, ra, rb, a, b) -> float:
    def shifted(axis, delta):
        lb_new = list(lb)
        lb_new[axis] += delta
        if lb_new[axis] < 0:
            return 0.0
        return _overlap_prim(la, tuple(lb_new), ra, rb, a, b)

    total = b * (2 * sum(lb) + 3) * _overlap_prim(la, lb, ra, rb, a, b)
    for axis in range(3):
        total += -2.0 * b * b * shifted(axis, 2)
        l = lb[axis]
        if l >= 2:
            total += -0.5 * l * (l - 1) * shifted(axis, -2)
    return total


def _nuclear_prim(la, lb, ra, rb, a, b, nucleus) -> float:
    p = a + b
    P = tuple((a * ra[i] + b * rb[i]) / p for i in range(3))
    pc = tuple(P[i] - nucleus[i] for i in range(3))
    total = 0.0
    for t in range(la[0] + lb[0] + 1):
        ex = _hermite_e(la[0], lb[0], t, ra[0] - rb[0], a, b)
        if ex == 0.0:
            continue
        for u in range(la[1] + lb[1] + 1):
            ey = _hermite_e(la[1], lb[1], u, ra[1] - rb[1], a, b)
            if ey == 0.0:
                continue
            for v in range(la[2] + lb[2] + 1):
                ez = _hermite_e(la[2], lb[2], v, ra[2] - rb[2], a, b)
                if ez == 0.0:
                    continue
                total += ex * ey * ez * _hermite_coulomb(t, u, v, 0, p, pc)
    return 2.0 * math.pi / p * total


def _eri_prim(la, lb, lc, ld, ra, rb, rc, rd, a, b, c, d) -> float:
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    P = tuple((a * ra[i] + b * rb[i]) / p for i in range(3))
    Q = tuple((c * rc[i] + d * rd[i]) / q for i in range(3))
    pq = tuple(P[i] - Q[i] for i in range(3))

    total = 0.0
    for t in range(la[0] + lb[0] + 1):
        e1x = _hermite_e(la[0], lb[0], t, ra[0] - rb[0], a, b)
        if e1x == 0.0:
            continue
        for u in range(la[1] + lb[1] + 1):
            e1y = _hermite_e(la[1], lb[1], u, ra[1] - rb[1], a, b)
            if e1y == 0.0:
                continue
            for v in range(la[2] + lb[2] + 1):
                e1z = _hermite_e(la[2], lb[2], v, ra[2] - rb[2], a, b)
                if e1z == 0.0:
                    continue
                for tau in range(lc[0] + ld[0] + 1):
                    e2x = _hermite_e(lc[0], ld[0], tau, rc[0] - rd[0], c, d)
                    if e2x == 0.0:
                        continue
                    for nu in range(lc[1] + ld[1] + 1):
                        e2y = _hermite_e(lc[1], ld[1], nu, rc[1] - rd[1], c, d)
                        if e2y == 0.0:
                            continue
                        for phi in range(lc[2] + ld[2] + 1):
                            e2z = _hermite_e(lc[2], ld[2], phi, rc[2] - rd[2], c, d)
                            if e2z == 0.0:
                                continue
                            sign = (-1.0) ** (tau + nu + phi)
                            total += (
                                e1x * e1y * e1z * e2x * e2y * e2z * sign
                                * _hermite_coulomb(
                                    t + tau, u + nu, v + phi, 0, alpha, pq
                                )
                            )
    return total * 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))


def _contract2(fa: BasisFunction, fb: BasisFunction, primitive) -> float:
    total = 0.0
    for a, ca in zip(fa.exponents, fa.coefficients):
        for b, cb in zip(fb.exponents, fb.coefficients):
            total += ca * cb * primitive(a, b)
    return total


def overlap_contracted(fa: BasisFunction, fb: BasisFunction) -> float:
    return _contract2(
        fa, fb,
        lambda a, b: _overlap_prim(fa.powers, fb.powers, fa.center, fb.center, a, b),
    )


def kinetic_contracted(fa: BasisFunction, fb: BasisFunction) -> float:
    return _contract2(
        fa, fb,
        lambda a, b: _kinetic_prim(fa.powers, fb.powers, fa.center, fb.center, a, b),
    )


def nuclear_contracted(fa: BasisFunction, fb: BasisFunction, nuclei) -> float:
    total = 0.0
    for charge, position in nuclei:
        total -= charge * _contract2(
            fa, fb,
            lambda a, b: _nuclear_prim(
                fa.powers, fb.powers, fa.center, fb.center, a, b, position
            ),
        )
    return total


def eri_contracted(fa, fb, fc, fd) -> float:
    total = 0.0
    for a, ca in zip(fa.exponents, fa.coefficients):
        for b, cb in zip(fb.exponents, fb.coefficients):
            for c, cc in zip(fc.exponents, fc.coefficients):
                for d, cd in zip(fd.exponents, fd.coefficients):
                    total += ca * cb * cc * cd * _eri_prim(
                        fa.powers, fb.powers, fc.powers, fd.powers,
                        fa.center, fb.center, fc.center, fd.center,
                        a, b, c, d,
                    )
    return total


def integral_tables(functions: list[BasisFunction], nuclei):
    """(S, T, V, ERI) AO matrices; ERI in chemists' notation (ij|kl)."""
    n = len(functions)
    S = np.empty((n, n))
    T = np.empty((n, n))
    V = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            S[i, j] = S[j, i] = overlap_contracted(functions[i], functions[j])
            T[i, j] = T[j, i] = kinetic_contracted(functions[i], functions[j])
            V[i, j] = V[j, i] = nuclear_contracted(functions[i], functions[j], nuclei)
    eri = np.zeros((n, n, n, n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1)]
    for index_ij, (i, j) in enumerate(pairs):
        for k, l in pairs[: index_ij + 1]:
            value = eri_contracted(
                functions[i], functions[j], functions[k], functions[l]
            )
            for (p, q, r, s) in (
                (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
            ):
                eri[p, q, r, s] = value
    return S, T, V, eri

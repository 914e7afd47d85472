"""Hot floating-point kernels with a numba path and a pure-numpy fallback.

Set ``TAYLORSTAB_DISABLE_NUMBA=1`` to force the numpy implementations.  Both
paths perform the same floating-point operations in the same order, so their
outputs agree bit for bit on IEEE hardware.

The box kernel returns rigorous enclosures: every floating-point rounding is
covered by an a-priori error bound, assuming round-to-nearest binary64.
"""
from __future__ import annotations

import os

import numpy as np

U = 2.0**-53
_SLOP = 1.0 + 1e-12

_disabled = os.environ.get("TAYLORSTAB_DISABLE_NUMBA", "").strip() not in ("", "0")
try:  # pragma: no cover - depends on the environment
    if _disabled:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def _gamma(m):
    return m * U / (1.0 - m * U)


# ---------------------------------------------------------------------------
# box enclosure of G = |s_n(m z)|^2 - 1 and of dG/dx
# ---------------------------------------------------------------------------


def _box_enclose_np(n, m, xlo, xhi, ylo, yhi):
    xlo = np.asarray(xlo, dtype=np.float64)
    xhi = np.asarray(xhi, dtype=np.float64)
    ylo = np.asarray(ylo, dtype=np.float64)
    yhi = np.asarray(yhi, dtype=np.float64)
    cx = 0.5 * (xlo + xhi)
    cy = 0.5 * (ylo + yhi)
    hx = 0.5 * (xhi - xlo)
    hy = 0.5 * (yhi - ylo)
    wr = m * cx
    wi = m * cy
    aw = np.sqrt(wr * wr + wi * wi)
    R = (m * np.sqrt(hx * hx + hy * hy) * (1.0 + 4.0 * U) + 4.0 * U * aw) * _SLOP
    nb = xlo.shape[0]
    sr = np.empty((n + 1, nb))
    si = np.empty((n + 1, nb))
    err = np.empty((n + 1, nb))
    tr = np.ones(nb)
    ti = np.zeros(nb)
    ta = np.ones(nb)
    accr = np.ones(nb)
    acci = np.zeros(nb)
    acca = np.ones(nb)
    sr[0] = accr
    si[0] = acci
    err[0] = 0.0
    for k in range(1, n + 1):
        nr = (tr * wr - ti * wi) / k
        ni = (tr * wi + ti * wr) / k
        tr = nr
        ti = ni
        ta = ta * aw / k
        accr = accr + tr
        acci = acci + ti
        acca = acca + ta
        sr[k] = accr
        si[k] = acci
        err[k] = 2.0 * _gamma(10.0 * (k + 1)) * acca * (1.0 + _gamma(4.0 * (k + 1)))
    sabs = np.sqrt(sr * sr + si * si)
    # radius of s_n over the disk
    radp = err[n].copy()
    rj = np.ones(nb)
    for j in range(1, n + 1):
        rj = rj * R / j
        radp = radp + rj * (sabs[n - j] + err[n - j])
    radp = radp * (1.0 + _gamma(4.0 * (n + 2))) * _SLOP
    # derivative m * s_{n-1}
    if n >= 1:
        radd = err[n - 1].copy()
        rj = np.ones(nb)
        for j in range(1, n):
            rj = rj * R / j
            radd = radd + rj * (sabs[n - 1 - j] + err[n - 1 - j])
        radd = m * radd * (1.0 + _gamma(4.0 * (n + 2))) * _SLOP
        dr = m * sr[n - 1]
        di = m * si[n - 1]
    pr = sr[n]
    pi_ = si[n]
    pabs = sabs[n] * (1.0 + 2.0 * U)
    plo = np.maximum(sabs[n] * (1.0 - 2.0 * U) - radp, 0.0)
    phi = pabs + radp
    gmin = (plo * plo - 1.0) - 4.0 * U * (plo * plo + 1.0)
    gmax = (phi * phi - 1.0) + 4.0 * U * (phi * phi + 1.0)
    # Re(conj(P) P') enclosure
    qre = pr * dr + pi_ * di
    dabs = np.sqrt(dr * dr + di * di) * (1.0 + 2.0 * U)
    rq = (pabs * radd + dabs * radp + radp * radd + 6.0 * U * pabs * dabs) * _SLOP
    hmin = 2.0 * (qre - rq)
    hmax = 2.0 * (qre + rq)
    return gmin, gmax, hmin, hmax


if HAVE_NUMBA:

    @njit(cache=True)
    def _box_enclose_nb(n, m, xlo, xhi, ylo, yhi):  # pragma: no cover - compiled
        nb = xlo.shape[0]
        gmin = np.empty(nb)
        gmax = np.empty(nb)
        hmin = np.empty(nb)
        hmax = np.empty(nb)
        sr = np.empty(n + 1)
        si = np.empty(n + 1)
        sabs = np.empty(n + 1)
        err = np.empty(n + 1)
        g4 = (4.0 * (n + 2)) * U / (1.0 - (4.0 * (n + 2)) * U)
        for b in range(nb):
            cx = 0.5 * (xlo[b] + xhi[b])
            cy = 0.5 * (ylo[b] + yhi[b])
            hx = 0.5 * (xhi[b] - xlo[b])
            hy = 0.5 * (yhi[b] - ylo[b])
            wr = m * cx
            wi = m * cy
            aw = np.sqrt(wr * wr + wi * wi)
            R = (m * np.sqrt(hx * hx + hy * hy) * (1.0 + 4.0 * U) + 4.0 * U * aw) * _SLOP
            tr = 1.0
            ti = 0.0
            ta = 1.0
            accr = 1.0
            acci = 0.0
            acca = 1.0
            sr[0] = 1.0
            si[0] = 0.0
            err[0] = 0.0
            for k in range(1, n + 1):
                nr = (tr * wr - ti * wi) / k
                ni = (tr * wi + ti * wr) / k
                tr = nr
                ti = ni
                ta = ta * aw / k
                accr = accr + tr
                acci = acci + ti
                acca = acca + ta
                sr[k] = accr
                si[k] = acci
                g10 = (10.0 * (k + 1)) * U / (1.0 - (10.0 * (k + 1)) * U)
                g4k = (4.0 * (k + 1)) * U / (1.0 - (4.0 * (k + 1)) * U)
                err[k] = 2.0 * g10 * acca * (1.0 + g4k)
            for k in range(n + 1):
                sabs[k] = np.sqrt(sr[k] * sr[k] + si[k] * si[k])
            radp = err[n]
            rj = 1.0
            for j in range(1, n + 1):
                rj = rj * R / j
                radp = radp + rj * (sabs[n - j] + err[n - j])
            radp = radp * (1.0 + g4) * _SLOP
            radd = err[n - 1]
            rj = 1.0
            for j in range(1, n):
                rj = rj * R / j
                radd = radd + rj * (sabs[n - 1 - j] + err[n - 1 - j])
            radd = m * radd * (1.0 + g4) * _SLOP
            dr = m * sr[n - 1]
            di = m * si[n - 1]
            pr = sr[n]
            pi_ = si[n]
            pabs = sabs[n] * (1.0 + 2.0 * U)
            plo = max(sabs[n] * (1.0 - 2.0 * U) - radp, 0.0)
            phi = pabs + radp
            gmin[b] = (plo * plo - 1.0) - 4.0 * U * (plo * plo + 1.0)
            gmax[b] = (phi * phi - 1.0) + 4.0 * U * (phi * phi + 1.0)
            qre = pr * dr + pi_ * di
            dabs = np.sqrt(dr * dr + di * di) * (1.0 + 2.0 * U)
            rq = (pabs * radd + dabs * radp + radp * radd + 6.0 * U * pabs * dabs) * _SLOP
            hmin[b] = 2.0 * (qre - rq)
            hmax[b] = 2.0 * (qre + rq)
        return gmin, gmax, hmin, hmax


def box_enclose(n, m, xlo, xhi, ylo, yhi, backend=None):
    """Enclosures of ``G`` and ``dG/dx`` over boxes, where ``G(z) = |s_n(m z)|^2 - 1``.

    Returns four arrays ``(gmin, gmax, hmin, hmax)``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    args = [np.ascontiguousarray(a, dtype=np.float64) for a in (xlo, xhi, ylo, yhi)]
    use = backend or BACKEND
    if use == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend unavailable")
        return _box_enclose_nb(int(n), float(m), *args)
    return _box_enclose_np(int(n), float(m), *args)


# ---------------------------------------------------------------------------
# pointwise |s_n(m z)|^2 - 1 on a grid (float grade)
# ---------------------------------------------------------------------------


def g_values(n, m, x, y):
    """Float-grade ``|s_n(m z)|^2 - 1`` at arrays of points (no error bound)."""
    wr = m * np.asarray(x, dtype=np.float64)
    wi = m * np.asarray(y, dtype=np.float64)
    tr = np.ones_like(wr)
    ti = np.zeros_like(wr)
    accr = np.ones_like(wr)
    acci = np.zeros_like(wr)
    for k in range(1, n + 1):
        nr = (tr * wr - ti * wi) / k
        ni = (tr * wi + ti * wr) / k
        tr, ti = nr, ni
        accr = accr + tr
        acci = acci + ti
    return accr * accr + acci * acci - 1.0


# ---------------------------------------------------------------------------
# Aberth-Ehrlich simultaneous iteration
# ---------------------------------------------------------------------------


def _aberth_np(coeffs, z0, max_iter, tol):
    a = np.asarray(coeffs, dtype=np.complex128)
    d = a.shape[0] - 1
    da = a[1:] * np.arange(1, d + 1)
    z = np.array(z0, dtype=np.complex128)
    for it in range(max_iter):
        p = np.full(d, a[d], dtype=np.complex128)
        for k in range(d - 1, -1, -1):
            p = p * z + a[k]
        dp = np.full(d, da[d - 1], dtype=np.complex128)
        for k in range(d - 2, -1, -1):
            dp = dp * z + da[k]
        ratio = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        step = ratio / (1.0 - ratio * s)
        z = z - step
        if np.max(np.abs(step) / np.maximum(1.0, np.abs(z))) <= tol:
            return z, it + 1
    return z, -1


if HAVE_NUMBA:

    @njit(cache=True)
    def _aberth_nb(coeffs, z0, max_iter, tol):  # pragma: no cover - compiled
        d = coeffs.shape[0] - 1
        z = z0.copy()
        da = np.empty(d, dtype=np.complex128)
        for k in range(d):
            da[k] = coeffs[k + 1] * (k + 1)
        step = np.empty(d, dtype=np.complex128)
        for it in range(max_iter):
            big = 0.0
            for i in range(d):
                p = coeffs[d]
                for k in range(d - 1, -1, -1):
                    p = p * z[i] + coeffs[k]
                dp = da[d - 1]
                for k in range(d - 2, -1, -1):
                    dp = dp * z[i] + da[k]
                ratio = p / dp
                s = 0.0 + 0.0j
                for j in range(d):
                    if j != i:
                        s += 1.0 / (z[i] - z[j])
                step[i] = ratio / (1.0 - ratio * s)
            for i in range(d):
                z[i] = z[i] - step[i]
                rel = abs(step[i]) / max(1.0, abs(z[i]))
                if rel > big:
                    big = rel
            if big <= tol:
                return z, it + 1
        return z, -1


def aberth(coeffs, z0, max_iter=500, tol=1e-12, backend=None):
    """Simultaneous zeros of ``sum coeffs[k] z^k``; returns ``(zeros, iterations)``.

    ``iterations`` is ``-1`` when the cap is reached.  Note the numba path
    updates all zeros after computing every correction (Jacobi style), like
    the numpy path.
    """
    a = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z = np.ascontiguousarray(z0, dtype=np.complex128)
    use = backend or BACKEND
    if use == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend unavailable")
        return _aberth_nb(a, z, int(max_iter), float(tol))
    return _aberth_np(a, z, int(max_iter), float(tol))

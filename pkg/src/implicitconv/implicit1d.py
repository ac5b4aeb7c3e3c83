"""Implicitly zero-padded 1D transforms and convolutions.

Each padded backward transform is computed as a set of residue streams of
length ``m`` (or ``2m``) that are left *scrambled*: the streams are not
interleaved back into natural order, because a pointwise product does not
care about the order of transform positions.  The matching forward routine
consumes the same layout.

Layouts, with ``m`` the unpadded length:

``fftpad`` (complex, padded to 2m)
    ``f`` holds ``u_{2l}``, ``u`` holds ``u_{2l+1}``.
``fft0pad`` (centered, length 2m-1, padded to 3m)
    stream r=0 in ``f[0:m-1]`` plus ``u[m]`` (its last entry), stream r=1 in
    ``f[m-1:2m-1]``, stream r=-1 in ``u[0:m]``.
``fft0tpad`` (centered with a leading zero, length 2m, padded to 4m)
    ``f`` holds ``(-1)^l u_{2l}``, ``u`` holds ``(-1)^l u_{2l+1}``.  The sign
    cancels in ternary products.
``build`` (Hermitian, length 2c, padded to 6c)
    half-spectra for r=0 in ``f[0:c+1]``, r=-1 in ``u[0:c+1]``, and the
    conjugate of r=1 in reverse order in ``f[c-1:2c]``; the two overlapping
    words are patched by :func:`hconv`.

``fftpad``, ``fft0pad`` and ``fft0tpad`` act along axis 0 and broadcast over
any trailing axes, which is how the multidimensional routines apply a single
twiddle to a whole column of data.
"""
from __future__ import annotations

import warnings
from math import gcd

import numpy as np

from .buffers import real_view
from .fft_core import BACKWARD, FORWARD, transform
from .roots import cached_table

ZETA3 = complex(-0.5, np.sqrt(3) / 2)
ZETA3_INV = complex(-0.5, -np.sqrt(3) / 2)
SQRT3 = float(np.sqrt(3))


class SizeAdvisory(UserWarning):
    """The size is outside the design range; the result is still exact."""


def _column(tw, ndim):
    return tw.reshape((-1,) + (1,) * (ndim - 1))


def _check_disjoint(*arrays):
    for i, a in enumerate(arrays):
        for b in arrays[i + 1:]:
            if np.shares_memory(a, b):
                raise ValueError("work buffers must not alias the data")


def _batched(x, ndim):
    """View ``x`` with a leading batch axis (adds one of length 1 if absent)."""
    if x.ndim == ndim:
        return x[None]
    if x.ndim == ndim + 1:
        return x
    raise ValueError(f"expected {ndim}D data or a batch of it, got shape {x.shape}")


# -- 1/2 rule ---------------------------------------------------------------

def fftpad_backward(f, u):
    m = f.shape[0]
    if u.shape != f.shape:
        raise ValueError(f"u must match f: {u.shape} vs {f.shape}")
    _check_disjoint(f, u)
    tw = _column(cached_table(2 * m, m).powers(), f.ndim)
    np.multiply(tw, f, out=u)
    transform(f)
    transform(u)
    return f, u


def fftpad_forward(f, u):
    m = f.shape[0]
    if u.shape != f.shape:
        raise ValueError(f"u must match f: {u.shape} vs {f.shape}")
    _check_disjoint(f, u)
    tw = _column(cached_table(2 * m, m).powers(), f.ndim)
    transform(f, direction=FORWARD)
    transform(u, direction=FORWARD)
    f += np.conj(tw) * u
    f /= 2 * m
    return f


def cconv(f, g, u, v):
    """Dealiased linear convolution of standard spectra, in place in ``f``.

    ``f`` and ``g`` are either length-``m`` vectors or ``(M, m)`` stacks; for
    a stack the result ``sum_i f_i * g_i`` lands in ``f[0]`` (also returned).
    ``g`` is overwritten.  ``u`` and ``v`` are length-``m`` work vectors.
    """
    F, G = _batched(f, 1), _batched(g, 1)
    if F.shape != G.shape:
        raise ValueError(f"f and g differ in shape: {f.shape} vs {g.shape}")
    M, m = F.shape
    if u.shape != (m,) or v.shape != (m,):
        raise ValueError(f"work vectors must have length {m}")
    _check_disjoint(f, g, u, v)
    tw = cached_table(2 * m, m).powers()
    for i in range(M):
        fi, gi = F[i], G[i]
        np.multiply(tw, fi, out=u)
        np.multiply(tw, gi, out=v)
        transform(fi)
        transform(gi)
        fi *= gi
        transform(u)
        transform(v)
        np.multiply(u, v, out=gi)
    f0, g0 = F[0], G[0]
    for i in range(1, M):
        f0 += F[i]
        g0 += G[i]
    transform(f0, direction=FORWARD)
    transform(g0, direction=FORWARD)
    f0 += np.conj(tw) * g0
    f0 /= 2 * m
    return f0


# -- centered 2/3 rule ------------------------------------------------------

def fft0pad_backward(f, u):
    n = f.shape[0]
    m = (n + 1) // 2
    if n % 2 == 0 or m < 2:
        raise ValueError(f"centered data must have odd length 2m-1 >= 3, got {n}")
    if u.shape != (m + 1,) + f.shape[1:]:
        raise ValueError(f"u must have shape {(m + 1,) + f.shape[1:]}, got {u.shape}")
    _check_disjoint(f, u)
    tw = _column(cached_table(3 * m, m).powers()[1:], f.ndim)
    X = f[m:2 * m - 1]          # U_k,   k = 1..m-1
    Y = f[0:m - 1]              # U_{k-m}
    A = tw * (X.real + ZETA3_INV * Y.real)
    B = 1j * tw * (X.imag + ZETA3_INV * Y.imag)
    S = X + Y
    u[0] = f[m - 1]
    u[1:m] = np.conj(A - B)
    f[m:2 * m - 1] = A + B
    f[1:m] = S
    f[0] = u[0]
    transform(f[0:m])
    u[m] = f[m - 1]
    f[m - 1] = u[0]
    transform(f[m - 1:2 * m - 1])
    transform(u[0:m])
    return f, u


def fft0pad_forward(f, u):
    n = f.shape[0]
    m = (n + 1) // 2
    if n % 2 == 0 or m < 2:
        raise ValueError(f"centered data must have odd length 2m-1 >= 3, got {n}")
    if u.shape != (m + 1,) + f.shape[1:]:
        raise ValueError(f"u must have shape {(m + 1,) + f.shape[1:]}, got {u.shape}")
    _check_disjoint(f, u)
    tw = _column(cached_table(3 * m, m).powers()[1:], f.ndim)
    transform(f[m - 1:2 * m - 1], direction=FORWARD)
    held = f[m - 1].copy()
    f[m - 1] = u[m]
    u[m] = held
    transform(f[0:m], direction=FORWARD)
    transform(u[0:m], direction=FORWARD)
    u[m] += f[0] + u[0]
    a = np.conj(tw) * f[m:2 * m - 1]
    b = tw * u[1:m]
    s0 = f[1:m]
    lower = s0 + ZETA3 * a + ZETA3_INV * b
    upper = s0 + a + b
    f[0:m - 1] = lower
    f[m:2 * m - 1] = upper
    f[m - 1] = u[m]
    f /= 3 * m
    return f


# -- centered Hermitian -----------------------------------------------------

def build(f, u):
    """Split a Hermitian spectrum of length 2c into the three padded streams.

    Leaves ``u[c]`` alone and ``f[c]`` holding an upper-stream value; see
    :func:`hconv` for the words that need patching.
    """
    m = f.shape[0]
    if f.ndim != 1 or m % 2:
        raise ValueError(f"Hermitian data must be a vector of even length, got {f.shape}")
    c = m // 2
    if u.shape != (c + 1,):
        raise ValueError(f"u must have length {c + 1}")
    _check_disjoint(f, u)
    tw = np.conj(cached_table(6 * c, c + 1).powers(c)[1:])   # zeta_6c^-k, k=1..c-1
    fk = f[1:c]
    Fk = np.conj(f[2 * c - 1:c:-1])                           # conj U_{m-k}
    A = tw * (fk.real + ZETA3 * Fk.real)
    B = -1j * tw * (fk.imag + ZETA3 * Fk.imag)
    lower = fk + Fk
    u[0] = f[0]
    u[1:c] = A - B
    f[c:2 * c - 1] = (A + B)[::-1]
    f[2 * c - 1] = f[0]
    f[1:c] = lower
    return f, u


def hconv(f, g, u, v):
    """Dealiased centered Hermitian convolution, in place in ``f``.

    ``f`` and ``g`` hold the non-negative modes ``0..m-1`` (``m = 2c``) of
    spectra of real data, singly or as ``(M, m)`` stacks; the stack result
    lands in ``f[0]``.  ``u`` and ``v`` hold ``c+1`` words per stack member.
    Nine real/complex transforms of size ``m`` for a single pair.
    """
    F, G = _batched(f, 1), _batched(g, 1)
    if F.shape != G.shape:
        raise ValueError(f"f and g differ in shape: {f.shape} vs {g.shape}")
    M, m = F.shape
    if m % 2:
        raise ValueError(f"Hermitian convolution needs even length, got {m}")
    c = m // 2
    Uw, Vw = _batched(u, 1), _batched(v, 1)
    if Uw.shape != (M, c + 1) or Vw.shape != (M, c + 1):
        raise ValueError(f"work arrays must have shape {(M, c + 1)}")
    _check_disjoint(f, g, u, v)

    fc, gc, C, D = [], [], [], []
    for i in range(M):
        for x, w, top, saved in ((F[i], Uw[i], fc, C), (G[i], Vw[i], gc, D)):
            Xc = x[c]
            build(x, w)
            top.append(Xc)
            saved.append(x[c])
            x[c] = 2 * Xc.real
            w[c] = Xc.real + SQRT3 * Xc.imag

    def crfft(z, out):
        transform(z, real_view(out, m), direction=BACKWARD, kind="crfft")

    def rcfft(r, out):
        transform(real_view(r, m), out, direction=FORWARD, kind="rcfft")

    def accumulate(dst, products):
        acc = real_view(dst, m)
        for i in range(1, M):
            acc += real_view(products[i], m)

    # r = -1
    for i in range(M):
        crfft(Uw[i], Uw[i])
        crfft(Vw[i], Vw[i])
        real_view(Vw[i], m)[:] *= real_view(Uw[i], m)
    accumulate(Vw[0], Vw)
    rcfft(Vw[0], Uw[0])

    # r = 0
    for i in range(M):
        crfft(F[i][0:c + 1], Vw[i])
        crfft(G[i][0:c + 1], F[i][0:c + 1])
        real_view(Vw[i], m)[:] *= real_view(F[i][0:c + 1], m)
    accumulate(Vw[0], Vw)
    rcfft(Vw[0], F[0][0:c + 1])

    S = F[0][c - 1]
    T = F[0][c]
    for i in range(M):
        F[i][c - 1] = fc[i].real - SQRT3 * fc[i].imag
        F[i][c] = C[i]
        G[i][c - 1] = gc[i].real - SQRT3 * gc[i].imag
        G[i][c] = D[i]

    # r = 1 (conjugated, reversed)
    for i in range(M):
        crfft(G[i][c - 1:2 * c], Vw[i])
        crfft(F[i][c - 1:2 * c], G[i][c - 1:2 * c])
        real_view(G[i][c - 1:2 * c], m)[:] *= real_view(Vw[i], m)
    accumulate(G[0][c - 1:2 * c], [G[i][c - 1:2 * c] for i in range(M)])
    rcfft(G[0][c - 1:2 * c], Vw[0])

    out, su, sv = F[0], Uw[0], Vw[0]
    tw = cached_table(6 * c, c + 1).powers(c + 1)
    if c > 2:
        k = np.arange(1, c - 1)
        s0 = out[1:c - 1].copy()
        out[1:c - 1] = s0 + np.conj(tw[k]) * sv[k] + tw[k] * su[k]
        out[c + 2:2 * c] = (np.conj(s0) + ZETA3_INV * tw[k] * np.conj(sv[k])
                            + ZETA3 * np.conj(tw[k]) * np.conj(su[k]))[::-1]
    if c > 1:
        out[0] += sv[0] + su[0]
    j = c - 1
    out[j] = S + np.conj(tw[j]) * sv[j] + tw[j] * su[j]
    out[c] = T - ZETA3 * sv[c] - ZETA3_INV * su[c]
    if c > 1:
        out[c + 1] = (np.conj(S) + ZETA3_INV * tw[j] * np.conj(sv[j])
                      + ZETA3 * np.conj(tw[j]) * np.conj(su[j]))
    out /= 6 * c
    return out


# -- ternary ----------------------------------------------------------------

def fft0tpad_backward(f, u):
    n = f.shape[0]
    if n % 2 or n < 2:
        raise ValueError(f"signed centered data must have even length 2m, got {n}")
    if u.shape != f.shape:
        raise ValueError(f"u must match f: {u.shape} vs {f.shape}")
    _check_disjoint(f, u)
    m = n // 2
    tw = _column(cached_table(4 * m, 2 * m).powers()[1:], f.ndim)
    f[0] = 0
    u[0] = 0
    np.multiply(-1j * tw, f[1:], out=u[1:])
    transform(f)
    transform(u)
    return f, u


def fft0tpad_forward(f, u):
    n = f.shape[0]
    if n % 2 or n < 2:
        raise ValueError(f"signed centered data must have even length 2m, got {n}")
    if u.shape != f.shape:
        raise ValueError(f"u must match f: {u.shape} vs {f.shape}")
    _check_disjoint(f, u)
    m = n // 2
    tw = _column(cached_table(4 * m, 2 * m).powers()[1:], f.ndim)
    transform(f, direction=FORWARD)
    transform(u, direction=FORWARD)
    f[1:] += 1j * np.conj(tw) * u[1:]
    f /= 4 * m
    f[0] = 0
    return f


def tconv(f, g, h, u, v, w):
    """Dealiased centered Hermitian ternary convolution, in place in ``f``.

    Inputs hold modes ``0..m`` (length ``m+1``; mode ``m`` is treated as
    zero).  ``g`` and ``h`` are overwritten.  Eight transforms of size 2m.
    """
    n = f.shape[0]
    m = n - 1
    for x in (g, h, u, v, w):
        if x.shape != (n,):
            raise ValueError(f"all vectors must have length {n}")
    if m < 1 or f.ndim != 1:
        raise ValueError("tconv needs vectors of length m+1 with m >= 1")
    if m & (m - 1):
        warnings.warn(f"tconv is laid out for power-of-two m, got m={m}", SizeAdvisory,
                      stacklevel=2)
    _check_disjoint(f, g, h, u, v, w)
    N2 = 2 * m
    tw = cached_table(4 * m, m).powers()

    def crfft(z, out):
        transform(z, real_view(out, N2), direction=BACKWARD, kind="crfft")

    def rcfft(r, out):
        transform(real_view(r, N2), out, direction=FORWARD, kind="rcfft")

    np.multiply(tw, f[:m], out=u[:m])
    np.multiply(tw, g[:m], out=v[:m])
    np.multiply(tw, h[:m], out=w[:m])
    u[m] = v[m] = w[m] = 0
    crfft(u, u)
    crfft(v, v)
    crfft(w, w)
    rv = real_view(v, N2)
    rv *= real_view(u, N2)
    rv *= real_view(w, N2)
    rcfft(v, u)

    f[m] = g[m] = h[m] = 0
    crfft(f, v)
    crfft(g, w)
    crfft(h, g)
    rv *= real_view(w, N2)
    rv *= real_view(g, N2)
    rcfft(v, f)

    f[:m] += np.conj(tw) * u[:m]
    f /= 4 * m
    f[m] = 0
    return f


# -- general p/q padding ----------------------------------------------------

def _pq_check(p, q, n=None):
    if p < 1 or q < 1 or gcd(p, q) != 1:
        raise ValueError(f"p and q must be coprime positive integers, got {p}/{q}")
    if p >= q:
        raise ValueError(f"need p < q, got {p}/{q}")
    if n is not None and (n == 0 or n % p):
        raise ValueError(f"input length {n} is not a positive multiple of p={p}")


def pq_backward(U, p, q, out=None):
    """Backward transform of ``U`` (length ``p*m``) zero padded to ``q*m``.

    Returns a ``(q, m)`` array whose row ``r`` holds ``u_{q*l + r}``.
    """
    U = np.asarray(U)
    _pq_check(p, q, U.shape[0])
    m = U.shape[0] // p
    if out is None:
        out = np.empty((q, m), np.complex128)
    elif out.shape != (q, m):
        raise ValueError(f"out must have shape {(q, m)}")
    table = cached_table(q * m, q * m)
    k = np.arange(p * m)
    for r in range(q):
        twiddled = table(r * k % (q * m)) * U
        out[r] = twiddled.reshape(p, m).sum(axis=0)
    transform(out, axis=1)
    return out


def pq_forward(streams, p, q):
    """Invert :func:`pq_backward`; ``streams`` is transformed in place."""
    _pq_check(p, q)
    if streams.ndim != 2 or streams.shape[0] != q:
        raise ValueError(f"streams must have shape (q, m), got {streams.shape}")
    m = streams.shape[1]
    transform(streams, direction=FORWARD, axis=1)
    table = cached_table(q * m, q * m)
    k = np.arange(p * m)
    U = np.zeros(p * m, np.complex128)
    for r in range(q):
        U += np.conj(table(r * k % (q * m))) * streams[r][k % m]
    return U / (q * m)

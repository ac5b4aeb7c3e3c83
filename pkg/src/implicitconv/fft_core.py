"""Planned, unnormalized 1D FFTs over strided buffers.

Conventions
-----------
``direction=BACKWARD`` (+1) computes ``u_j = sum_k zeta_N^{jk} U_k`` and
``direction=FORWARD`` (-1) the same sum with ``zeta_N^{-jk}``.  Neither
direction is scaled; the convolution layer divides by the padded size.

Kinds are ``"c2c"``, ``"crfft"`` (Hermitian half-spectrum of ``size//2+1``
words to ``size`` reals, backward only) and ``"rcfft"`` (``size`` reals to
``size//2+1`` words, forward only).

Two backends sit behind :func:`execute`: ``"optimized"`` (numpy's pocketfft)
and ``"naive"`` (an O(N^2) DFT matrix).  The default comes from the
``CONV_FFT_BACKEND`` environment variable.
"""
from __future__ import annotations

import contextlib
import os
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.lib.stride_tricks import as_strided

BACKWARD = 1
FORWARD = -1

KINDS = ("c2c", "crfft", "rcfft")
PLACEMENTS = ("in-place", "out-of-place")
BACKENDS = ("naive", "optimized")

_backend_override: str | None = None
_counters: list[Counter] = []


def get_backend():
    if _backend_override is not None:
        return _backend_override
    name = os.environ.get("CONV_FFT_BACKEND", "optimized")
    if name not in BACKENDS:
        raise ValueError(f"CONV_FFT_BACKEND={name!r}; expected one of {BACKENDS}")
    return name


@contextlib.contextmanager
def use_backend(name):
    global _backend_override
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    saved, _backend_override = _backend_override, name
    try:
        yield
    finally:
        _backend_override = saved


@contextlib.contextmanager
def count_transforms():
    """Tally executed 1D transforms as ``{(kind, size): n}``."""
    c = Counter()
    _counters.append(c)
    try:
        yield c
    finally:
        _counters.remove(c)


@dataclass(frozen=True)
class FftPlan:
    size: int
    direction: int
    kind: str
    placement: str
    stride: int
    count: int
    dist: int
    ostride: int
    odist: int
    backend: str

    @property
    def n_in(self):
        return self.size // 2 + 1 if self.kind == "crfft" else self.size

    @property
    def n_out(self):
        return self.size // 2 + 1 if self.kind == "rcfft" else self.size


@lru_cache(maxsize=1024)
def _make_plan(size, direction, kind, placement, stride, count, dist, ostride, odist, backend):
    return FftPlan(size, direction, kind, placement, stride, count, dist, ostride, odist, backend)


def plan(size, direction=BACKWARD, kind="c2c", placement="out-of-place", stride=1,
         count=1, dist=None, ostride=None, odist=None, backend=None):
    """Describe ``count`` transforms of length ``size``.

    ``stride`` and ``dist`` are measured in elements of the input buffer;
    ``ostride``/``odist`` (defaulting to the input values for complex
    transforms, and to a dense layout otherwise) in elements of the output.
    """
    if size < 1 or count < 1 or stride < 1:
        raise ValueError("size, count and stride must be positive")
    if direction not in (BACKWARD, FORWARD):
        raise ValueError(f"direction must be +1 or -1, got {direction}")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if kind == "crfft" and direction != BACKWARD:
        raise ValueError("crfft is a backward (complex-to-real) transform")
    if kind == "rcfft" and direction != FORWARD:
        raise ValueError("rcfft is a forward (real-to-complex) transform")
    if placement not in PLACEMENTS:
        raise ValueError(f"unknown placement {placement!r}")
    backend = get_backend() if backend is None else backend
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    n_in = size // 2 + 1 if kind == "crfft" else size
    n_out = size // 2 + 1 if kind == "rcfft" else size
    if dist is None:
        dist = n_in * stride
    if kind == "c2c":
        ostride = stride if ostride is None else ostride
        odist = dist if odist is None else odist
    else:
        ostride = 1 if ostride is None else ostride
        odist = n_out * ostride if odist is None else odist
    return _make_plan(int(size), direction, kind, placement, int(stride), int(count),
                      int(dist), int(ostride), int(odist), backend)


# -- backends ---------------------------------------------------------------

def _numpy_exec(p, x):
    if p.kind == "c2c":
        if p.direction == BACKWARD:
            return np.fft.ifft(x, axis=-1, norm="forward")
        return np.fft.fft(x, axis=-1)
    if p.kind == "crfft":
        return np.fft.irfft(x, n=p.size, axis=-1, norm="forward")
    return np.fft.rfft(x, axis=-1)


@lru_cache(maxsize=64)
def _dft_matrix(n, sign):
    jk = np.outer(np.arange(n), np.arange(n)) % n
    mat = np.exp(sign * 2j * np.pi * jk / n)
    mat.setflags(write=False)
    return mat


def _naive_exec(p, x):
    n = p.size
    if p.kind == "c2c":
        return x @ _dft_matrix(n, p.direction).T
    if p.kind == "rcfft":
        return x @ _dft_matrix(n, FORWARD)[: n // 2 + 1].T
    full = np.empty(x.shape[:-1] + (n,), np.complex128)
    h = n // 2 + 1
    full[..., :h] = x
    full[..., 0] = x[..., 0].real
    if n % 2 == 0:
        full[..., n // 2] = x[..., n // 2].real
    full[..., h:] = np.conj(x[..., 1:n - h + 1][..., ::-1])
    return (full @ _dft_matrix(n, BACKWARD).T).real


_EXECUTORS = {"optimized": _numpy_exec, "naive": _naive_exec}


def _run(p, xin, xout):
    result = _EXECUTORS[p.backend](p, xin)
    xout[...] = result
    for c in _counters:
        c[(p.kind, p.size)] += p.count


def _strided(buf, n, stride, count, dist):
    if buf.ndim != 1:
        raise ValueError("buffers passed to execute must be one-dimensional")
    last = (count - 1) * dist + (n - 1) * stride
    if last >= buf.shape[0]:
        raise ValueError(f"plan reaches element {last} of a buffer of length {buf.shape[0]}")
    step = buf.strides[0]
    return as_strided(buf, shape=(count, n), strides=(dist * step, stride * step))


def execute(p, input, output=None):
    """Run plan ``p`` from ``input`` into ``output`` (both 1D buffers)."""
    if output is None:
        if p.placement != "in-place":
            raise ValueError("out-of-place plans need an output buffer")
        output = input
    want_in = np.float64 if p.kind == "rcfft" else np.complex128
    want_out = np.float64 if p.kind == "crfft" else np.complex128
    if input.dtype != want_in or output.dtype != want_out:
        raise TypeError(f"{p.kind} expects {want_in.__name__} -> {want_out.__name__}")
    same = np.shares_memory(input, output)
    if p.placement == "in-place" and not same:
        raise ValueError("in-place plan given disjoint buffers")
    if p.placement == "out-of-place" and same:
        raise ValueError("out-of-place plan given overlapping buffers")
    xin = _strided(input, p.n_in, p.stride, p.count, p.dist)
    xout = _strided(output, p.n_out, p.ostride, p.count, p.odist)
    _run(p, xin, xout)
    return output


def transform(x, out=None, direction=BACKWARD, kind="c2c", axis=0):
    """Transform ndarray ``x`` along ``axis`` into ``out`` (default: in place).

    Batches over the remaining axes with strided plans, the way FFTW's
    advanced interface would be used.
    """
    if out is None:
        out = x
    size = x.shape[axis] if kind != "crfft" else out.shape[axis]
    if x.ndim == 1 and out.ndim == 1:
        # the per-row inner loops land here; skip the batching machinery
        placement = "in-place" if out is x or np.shares_memory(x, out) else "out-of-place"
        p = plan(size, direction, kind, placement, stride=x.strides[0] // x.itemsize,
                 ostride=out.strides[0] // out.itemsize)
        _run(p, x[None], out[None])
        return out
    y = np.moveaxis(x, axis, -1)
    z = np.moveaxis(out, axis, -1)
    if y.shape[:-1] != z.shape[:-1]:
        raise ValueError(f"batch shapes differ: {y.shape} vs {z.shape}")
    placement = "in-place" if np.shares_memory(x, out) else "out-of-place"
    if y.ndim == 1:
        y, z = y[None], z[None]
    for idx in np.ndindex(y.shape[:-2]):
        a, b = y[idx], z[idx]
        ia, ib = a.itemsize, b.itemsize
        p = plan(size, direction, kind, placement, stride=a.strides[1] // ia,
                 count=a.shape[0], dist=a.strides[0] // ia,
                 ostride=b.strides[1] // ib, odist=b.strides[0] // ib)
        _run(p, a, b)
    return out


def naive_dft(input, sign=BACKWARD):
    """Direct O(N^2) transform, accumulated in extended precision."""
    x = np.asarray(input, dtype=np.complex128)
    if x.ndim != 1 or x.size < 1:
        raise ValueError("naive_dft takes a non-empty 1D sequence")
    if sign not in (BACKWARD, FORWARD):
        raise ValueError("sign must be +1 or -1")
    n = x.size
    jk = np.outer(np.arange(n), np.arange(n)) % n
    theta = sign * 8 * np.arctan(np.longdouble(1)) * jk.astype(np.longdouble) / n
    mat = np.cos(theta) + 1j * np.sin(theta)
    return (mat @ x.astype(np.clongdouble)).astype(np.complex128)

"""Ground truth for the implicit convolutions.

Three families, all written without touching the implicit code paths:

* ``direct_*``: literal index sums accumulated in ``clongdouble``.  Work is
  capped at ``MAX_WORK`` multiply-adds unless ``max_work=None``.
* ``explicit_*``: zero pad, backward FFT, multiply, forward FFT, truncate.
* ``pruned_explicit_2d/3d``: explicit padding that skips the 1D
  subtransforms whose inputs are known to be zero.

Input layouts match :mod:`implicitconv.implicit_nd` (see its table).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import buffers
from .fft_core import FORWARD, transform

MAX_WORK = 1 << 20
PADDINGS = {"half": (1, 2), "two-thirds": (2, 3), "quarter-centered": (1, 4)}

_PADDING_OF = {"cconv": "half", "cconv2": "half", "cconv3": "half",
               "hconv": "two-thirds", "conv2": "two-thirds", "hconv3": "two-thirds",
               "tconv": "quarter-centered", "tconv2": "quarter-centered"}


@dataclass(frozen=True)
class OracleConfig:
    kind: str = "direct"                 # direct, explicit, pruned-explicit
    padding: str | tuple = "half"        # a PADDINGS key or a (p, q) pair

    def __post_init__(self):
        if self.kind not in ("direct", "explicit", "pruned-explicit"):
            raise ValueError(f"unknown oracle kind {self.kind!r}")
        if isinstance(self.padding, tuple):
            p, q = self.padding
            if not 0 < p < q:
                raise ValueError(f"bad p/q padding {self.padding}")
        elif self.padding not in PADDINGS:
            raise ValueError(f"unknown padding {self.padding!r}")

    @property
    def ratio(self):
        return self.padding if isinstance(self.padding, tuple) else PADDINGS[self.padding]

    @classmethod
    def for_kind(cls, conv_kind, kind="direct"):
        if conv_kind not in _PADDING_OF:
            raise ValueError(f"unknown convolution kind {conv_kind!r}")
        cfg = cls(kind, _PADDING_OF[conv_kind])
        cfg.check(conv_kind)
        return cfg

    def check(self, conv_kind):
        """Raise unless this config fits ``conv_kind``."""
        want = _PADDING_OF.get(conv_kind)
        if want is None:
            raise ValueError(f"unknown convolution kind {conv_kind!r}")
        if self.padding != want:
            raise ValueError(f"{conv_kind} uses {want} padding, not {self.padding}")
        if self.kind == "pruned-explicit" and conv_kind not in ("cconv2", "cconv3"):
            raise ValueError("pruned explicit variants exist for cconv2 and cconv3 only")


def run(cfg, conv_kind, *fields, **kw):
    cfg.check(conv_kind)
    if cfg.kind == "direct":
        return direct(conv_kind, *fields, **kw)
    if cfg.kind == "explicit":
        return explicit(conv_kind, *fields, **kw)
    return (pruned_explicit_2d if conv_kind == "cconv2" else pruned_explicit_3d)(*fields, **kw)


# -- direct sums -------------------------------------------------------------

def _linear(a, b):
    """Full linear convolution of two nd boxes, summed in extended precision."""
    a = np.asarray(a, np.clongdouble)
    b = np.asarray(b, np.clongdouble)
    out = np.zeros(tuple(x + y - 1 for x, y in zip(a.shape, b.shape)), np.clongdouble)
    for idx in zip(*np.nonzero(a)):
        sl = tuple(slice(i, i + n) for i, n in zip(idx, b.shape))
        out[sl] += a[idx] * b
    return out


def _chain_work(shapes):
    work, acc = 0, shapes[0]
    for s in shapes[1:]:
        work += int(np.prod(acc)) * int(np.prod(s))
        acc = tuple(x + y - 1 for x, y in zip(acc, s))
    return work


def _sum_into(terms, out_shape, offset, max_work):
    work = _chain_work([t.shape for t in terms])
    if max_work is not None and work > max_work:
        raise ValueError(f"direct sum needs {work} multiply-adds, cap is {max_work}; "
                         "pass max_work=None to override")
    acc = terms[0]
    for t in terms[1:]:
        acc = _linear(acc, t)
    sl = tuple(slice(o, o + n) for o, n in zip(offset, out_shape))
    return acc[sl].astype(np.complex128)


def hermitian_full(f):
    """Expand a stored half spectrum to the full centered box.

    Leading axes already run over ``-(m-1)..m-1``; the last runs over
    ``0..m-1`` and is mirrored with ``U(-k) = conj U(k)``.  Where the stored
    zero line is not itself symmetric the stored values win.
    """
    f = np.asarray(f)
    mz = f.shape[-1]
    full = np.zeros(f.shape[:-1] + (2 * mz - 1,), f.dtype)
    flip = (slice(None, None, -1),) * (f.ndim - 1)
    full[..., :mz] = np.conj(f[flip][..., ::-1])
    full[..., mz - 1:] = f
    return full


def _hermitian_terms(fields, nterms):
    shape = fields[0].shape
    if any(x.shape != shape for x in fields):
        raise ValueError("inputs differ in shape")
    full = [hermitian_full(x) for x in fields]
    # the origin of an n-fold product sits at n times the single-field
    # origin; centered axes start at -(m-1), the last axis at 0
    offset = tuple((nterms - 1) * ((n - 1) // 2) for n in shape[:-1]) \
        + (nterms * (shape[-1] - 1),)
    return full, shape, offset


def direct_cconv(f, g, max_work=MAX_WORK):
    """``h_k = sum_{0<=p<=k} f_p g_{k-p}`` over the standard box (any dimension)."""
    f, g = np.asarray(f), np.asarray(g)
    if f.shape != g.shape:
        raise ValueError("f and g differ in shape")
    return _sum_into([f, g], f.shape, (0,) * f.ndim, max_work)


def direct_hconv(f, g, max_work=MAX_WORK):
    """Centered Hermitian convolution in the ``hconv``/``conv2``/``hconv3`` layouts."""
    full, shape, offset = _hermitian_terms([np.asarray(f), np.asarray(g)], 2)
    return _sum_into(full, shape, offset, max_work)


def _ternary_core(x):
    x = np.asarray(x)
    if x.ndim == 1:
        return x[:-1]
    if x.ndim == 2:
        return x[1:, :-1]
    raise ValueError("ternary oracles take 1D or 2D inputs")


def direct_tconv(f, g, h, order="fg", max_work=MAX_WORK):
    """Ternary ``sum f_p g_q h_r delta_{p+q+r,k}`` over centered Hermitian data.

    1D inputs hold modes ``0..m`` (mode ``m`` ignored); 2D inputs use the
    ``tconv2`` layout.  Returns the valid region only: ``m`` modes in 1D,
    ``(2mx-1) x my`` in 2D.  ``order`` picks which pair is summed first,
    giving independent evaluations of the same triple sum.
    """
    full, shape, offset = _hermitian_terms([_ternary_core(x) for x in (f, g, h)], 3)
    perm = {"fg": (0, 1, 2), "gh": (1, 2, 0), "fh": (0, 2, 1)}.get(order)
    if perm is None:
        raise ValueError(f"unknown order {order!r}")
    return _sum_into([full[i] for i in perm], shape, offset, max_work)


def direct(kind, *fields, max_work=MAX_WORK, **kw):
    """Direct oracle for any convolution kind, returning the valid region."""
    if kind in ("cconv", "cconv2", "cconv3"):
        return direct_cconv(*fields, max_work=max_work)
    if kind in ("hconv", "conv2", "hconv3"):
        return direct_hconv(*fields, max_work=max_work)
    if kind in ("tconv", "tconv2"):
        return direct_tconv(*fields, max_work=max_work, **kw)
    raise ValueError(f"unknown kind {kind!r}")


def direct_work(kind, shape):
    """Multiply-adds :func:`direct` would spend on fields of storage ``shape``."""
    shape = tuple(shape)
    if kind in ("cconv", "cconv2", "cconv3"):
        return _chain_work([shape, shape])
    if kind in ("tconv", "tconv2"):
        shape = (shape[0] - 1,) if len(shape) == 1 else (shape[0] - 1, shape[1] - 1)
        n = 3
    elif kind in ("hconv", "conv2", "hconv3"):
        n = 2
    else:
        raise ValueError(f"unknown kind {kind!r}")
    full = shape[:-1] + (2 * shape[-1] - 1,)
    return _chain_work([full] * n)


# -- explicit padding --------------------------------------------------------

def explicit_cconv(f, g, fp=None, gp=None):
    """Explicitly padded (to 2m per axis) convolution of standard spectra."""
    f, g = np.asarray(f), np.asarray(g)
    if f.shape != g.shape:
        raise ValueError("f and g differ in shape")
    shape = tuple(2 * n for n in f.shape)
    fp = buffers.zeros(shape, "fpad") if fp is None else fp
    gp = buffers.zeros(shape, "gpad") if gp is None else gp
    if fp.shape != shape or gp.shape != shape:
        raise ValueError(f"padded buffers must have shape {shape}")
    box = tuple(slice(0, n) for n in f.shape)
    for dst, src in ((fp, f), (gp, g)):
        dst[...] = 0
        dst[box] = src
        for ax in range(f.ndim):
            transform(dst, axis=ax)
    fp *= gp
    for ax in range(f.ndim):
        transform(fp, direction=FORWARD, axis=ax)
    return fp[box] / np.prod(shape)


def padded_shape(kind, dims):
    """Padded transform sizes used by the explicit pipelines.

    Complex kinds pad to ``2m``.  Hermitian kinds pad to ``3m`` in 1D, to the
    minimal ``3m-2`` per axis in 2D and to ``3m`` on the centered axes with
    a minimal ``3mz-2`` real axis in 3D (these reproduce the usual explicit
    storage counts exactly).  Ternary kinds pad to ``4m``.
    """
    dims = tuple(dims)
    if kind in ("cconv", "cconv2", "cconv3"):
        return tuple(2 * m for m in dims)
    if kind == "hconv":
        return (3 * dims[0],)
    if kind == "conv2":
        return tuple(3 * m - 2 for m in dims)
    if kind == "hconv3":
        return (3 * dims[0], 3 * dims[1], 3 * dims[2] - 2)
    if kind in ("tconv", "tconv2"):
        return tuple(4 * m for m in dims)
    raise ValueError(f"unknown kind {kind!r}")


def _hermitian_explicit(kind, fields):
    """Pad centered Hermitian fields, transform to real space, multiply, return."""
    x0 = fields[0]
    if any(x.shape != x0.shape for x in fields):
        raise ValueError("inputs differ in shape")
    mz = x0.shape[-1]
    dims = tuple((n + 1) // 2 for n in x0.shape[:-1]) + (mz,)
    if kind in ("tconv", "tconv2"):
        dims = dims[:-1] + (mz,)
    N = padded_shape(kind, dims)
    nz = N[-1]
    if nz < 2 * mz:
        raise ValueError(f"padded size {nz} is too small for {mz} modes")
    nd = len(N)
    bufs = []
    for i, x in enumerate(fields):
        b = buffers.zeros(N[:-1] + (nz // 2 + 1,), f"pad{i}")
        for idx in np.ndindex(x.shape[:-1]):
            k = tuple(j - (n - 1) // 2 for j, n in zip(idx, x.shape[:-1]))
            b[k + (slice(0, mz),)] = x[idx]
        for ax in range(nd - 1):
            transform(b, axis=ax)
        transform(b, b.view(np.float64)[..., :nz], kind="crfft", axis=nd - 1)
        bufs.append(b)
    prod = bufs[0].view(np.float64)[..., :nz]
    for b in bufs[1:]:
        prod *= b.view(np.float64)[..., :nz]
    out = bufs[0]
    transform(prod, out, direction=FORWARD, kind="rcfft", axis=nd - 1)
    for ax in range(nd - 1):
        transform(out, direction=FORWARD, axis=ax)
    res = np.empty(x0.shape, np.complex128)
    for idx in np.ndindex(x0.shape[:-1]):
        k = tuple(j - (n - 1) // 2 for j, n in zip(idx, x0.shape[:-1]))
        res[idx] = out[k + (slice(0, mz),)]
    return res / np.prod(N)


def explicit_hconv(f, g):
    """Explicit centered Hermitian convolution (``hconv``, ``conv2``, ``hconv3`` layouts)."""
    f = np.asarray(f)
    kind = {1: "hconv", 2: "conv2", 3: "hconv3"}.get(f.ndim)
    if kind is None:
        raise ValueError("explicit_hconv takes 1D, 2D or 3D fields")
    return _hermitian_explicit(kind, [f, np.asarray(g)])


def explicit_tconv(f, g, h):
    """Explicit ternary convolution padded to ``4m`` per axis; valid region only."""
    core = [_ternary_core(x) for x in (f, g, h)]
    kind = "tconv" if core[0].ndim == 1 else "tconv2"
    if kind == "tconv":
        return _hermitian_explicit(kind, core)
    # the tconv2 core is (2mx-1) x my; the x padding follows mx
    return _hermitian_explicit(kind, core)


def explicit(kind, *fields):
    if kind in ("cconv", "cconv2", "cconv3"):
        return explicit_cconv(*fields)
    if kind in ("hconv", "conv2", "hconv3"):
        return explicit_hconv(*fields)
    if kind in ("tconv", "tconv2"):
        return explicit_tconv(*fields)
    raise ValueError(f"unknown kind {kind!r}")


def explicit_allocation(kind, dims, dry=True):
    """Complex words an explicit convolution allocates for ``dims``."""
    N = padded_shape(kind, dims)
    nfields = 3 if kind in ("tconv", "tconv2") else 2
    if kind in ("cconv", "cconv2", "cconv3"):
        shape = N
    else:
        shape = N[:-1] + (N[-1] // 2 + 1,)
    with buffers.track(dry=dry) as tally:
        for i in range(nfields):
            buffers.zeros(shape, f"pad{i}")
    return tally.words


# -- pruned explicit ---------------------------------------------------------

def pruned_explicit_2d(f, g, fp=None, gp=None):
    """2D complex convolution padded to ``2mx x 2my``, skipping zero x-columns.

    The backward x transforms run only over the ``my`` nonzero columns and
    the forward x transforms only over the ``my`` columns that are kept.
    """
    f, g = np.asarray(f), np.asarray(g)
    if f.ndim != 2 or f.shape != g.shape:
        raise ValueError("f and g must be matching 2D arrays")
    mx, my = f.shape
    fp = buffers.zeros((2 * mx, 2 * my), "fpad") if fp is None else fp
    gp = buffers.zeros((2 * mx, 2 * my), "gpad") if gp is None else gp
    for dst, src in ((fp, f), (gp, g)):
        dst[...] = 0
        dst[:mx, :my] = src
        transform(dst[:, :my], axis=0)
        transform(dst, axis=1)
    fp *= gp
    transform(fp, direction=FORWARD, axis=1)
    transform(fp[:, :my], direction=FORWARD, axis=0)
    return fp[:mx, :my] / (4 * mx * my)


def pruned_explicit_3d(f, g, fp=None, gp=None):
    """3D complex convolution padded to ``2m`` per axis, skipping zero lines.

    Backward: z lines only where ``x < mx, y < my``; y lines only where
    ``x < mx``; x lines everywhere.  Forward mirrors this, keeping only the
    lines that feed the retained ``mx x my x mz`` box.
    """
    f, g = np.asarray(f), np.asarray(g)
    if f.ndim != 3 or f.shape != g.shape:
        raise ValueError("f and g must be matching 3D arrays")
    mx, my, mz = f.shape
    shape = (2 * mx, 2 * my, 2 * mz)
    fp = buffers.zeros(shape, "fpad") if fp is None else fp
    gp = buffers.zeros(shape, "gpad") if gp is None else gp
    for dst, src in ((fp, f), (gp, g)):
        dst[...] = 0
        dst[:mx, :my, :mz] = src
        transform(dst[:mx, :my], axis=2)
        transform(dst[:mx], axis=1)
        transform(dst, axis=0)
    fp *= gp
    transform(fp, direction=FORWARD, axis=0)
    transform(fp[:mx], direction=FORWARD, axis=1)
    transform(fp[:mx, :my], direction=FORWARD, axis=2)
    return fp[:mx, :my, :mz] / (8 * mx * my * mz)

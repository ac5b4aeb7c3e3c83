"""2D and 3D implicitly dealiased convolutions.

The outer (x) direction is padded implicitly with a multivector 1D routine
acting on whole columns; the inner convolutions then run serially, row by
row (or slab by slab), all sharing the same small work buffers.  That reuse
is where the memory saving comes from, so the inner loop is never batched.

Storage conventions (``dims`` are unpadded mode counts):

=========  ============================  ======================================
kind       field shape                   index -> wavenumber
=========  ============================  ======================================
cconv2     (mx, my)                      (i, j) -> (i, j)
cconv3     (mx, my, mz)                  (i, j, k) -> (i, j, k)
conv2      (2mx-1, my)                   (i, j) -> (i - mx + 1, j)
hconv3     (2mx-1, 2my-1, mz)            (i, j, k) -> (i - mx + 1, j - my + 1, k)
tconv2     (2mx, my+1)                   (i, j) -> (i - mx, j); row 0, column my
                                         are padding
=========  ============================  ======================================

The Hermitian kinds store only non-negative innermost wavenumbers; the
zero line (2D) or plane (3D) must itself be Hermitian symmetric, which
:func:`enforce_symmetry` guarantees.
"""
from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from . import buffers
from .implicit1d import (cconv, fft0pad_backward, fft0pad_forward, fft0tpad_backward,
                         fft0tpad_forward, fftpad_backward, fftpad_forward, hconv, tconv)

KINDS_ND = ("cconv2", "conv2", "cconv3", "hconv3", "tconv2")
KINDS_1D = ("cconv", "hconv", "tconv")
NDIM = {"cconv": 1, "hconv": 1, "tconv": 1, "cconv2": 2, "conv2": 2, "tconv2": 2,
        "cconv3": 3, "hconv3": 3}
N_INPUTS = {"cconv": 2, "hconv": 2, "tconv": 3, "cconv2": 2, "conv2": 2, "tconv2": 3,
            "cconv3": 2, "hconv3": 2}
FIELD_KIND = {"cconv": "standard", "cconv2": "standard", "cconv3": "standard",
              "hconv": "centered-hermitian", "conv2": "centered-hermitian",
              "hconv3": "centered-hermitian", "tconv": "signed-centered",
              "tconv2": "signed-centered"}


def _check_dims(kind, dims):
    if kind not in NDIM:
        raise ValueError(f"unknown kind {kind!r}")
    dims = tuple(int(d) for d in dims)
    if len(dims) != NDIM[kind] or min(dims) < 1:
        raise ValueError(f"{kind} needs {NDIM[kind]} positive dims, got {dims}")
    if kind == "hconv" and dims[0] % 2:
        raise ValueError("hconv needs even m")
    if kind == "conv2" and (dims[1] % 2 or dims[0] < 2):
        raise ValueError("conv2 needs even my and mx >= 2")
    if kind == "hconv3" and (dims[2] % 2 or min(dims[:2]) < 2):
        raise ValueError("hconv3 needs even mz and mx, my >= 2")
    return dims


def field_shape(kind, dims):
    """Storage shape of one input field for ``kind`` at unpadded ``dims``."""
    dims = _check_dims(kind, dims)
    if kind in ("cconv", "hconv", "cconv2", "cconv3"):
        return dims
    if kind == "tconv":
        return (dims[0] + 1,)
    if kind == "conv2":
        return (2 * dims[0] - 1, dims[1])
    if kind == "hconv3":
        return (2 * dims[0] - 1, 2 * dims[1] - 1, dims[2])
    return (2 * dims[0], dims[1] + 1)


def valid_region(kind, a):
    """The part of a stored result that carries convolution output."""
    if kind == "tconv":
        return a[..., :-1]
    if kind == "tconv2":
        return a[..., 1:, :-1]
    return a


@dataclass
class Field:
    data: np.ndarray
    dims: tuple
    kind: str

    @classmethod
    def zeros(cls, conv_kind, dims):
        dims = _check_dims(conv_kind, dims)
        return cls(buffers.zeros(field_shape(conv_kind, dims), "field"), dims,
                   FIELD_KIND[conv_kind])


@dataclass
class WorkspaceND:
    """Work buffers for one multidimensional convolution.

    ``U, V, W`` hold the extra x-streams; ``u1, v1, w1`` are the innermost
    1D buffers and ``u2, v2`` the 2D sub-workspace used by the 3D kinds.
    """
    U: np.ndarray | None = None
    V: np.ndarray | None = None
    W: np.ndarray | None = None
    u1: np.ndarray | None = None
    v1: np.ndarray | None = None
    w1: np.ndarray | None = None
    u2: np.ndarray | None = None
    v2: np.ndarray | None = None

    @property
    def complex_words(self):
        return sum(getattr(self, f.name).size for f in fields(self)
                   if getattr(self, f.name) is not None)

    def inner(self):
        """The 2D workspace nested inside a 3D one."""
        return WorkspaceND(U=self.u2, V=self.v2, u1=self.u1, v1=self.v1)


def make_workspace(kind, dims, M=1):
    dims = _check_dims(kind, dims)
    z = buffers.zeros
    if kind == "cconv":
        (m,) = dims
        return WorkspaceND(u1=z(m, "u"), v1=z(m, "v"))
    if kind == "hconv":
        c = dims[0] // 2
        return WorkspaceND(u1=z((M, c + 1), "u"), v1=z((M, c + 1), "v"))
    if kind == "tconv":
        n = dims[0] + 1
        return WorkspaceND(u1=z(n, "u"), v1=z(n, "v"), w1=z(n, "w"))
    if kind == "cconv2":
        mx, my = dims
        return WorkspaceND(U=z((M, mx, my), "U"), V=z((M, mx, my), "V"),
                           u1=z(my, "u"), v1=z(my, "v"))
    if kind == "conv2":
        mx, my = dims
        c1 = my // 2 + 1
        return WorkspaceND(U=z((M, mx + 1, my), "U"), V=z((M, mx + 1, my), "V"),
                           u1=z((M, c1), "u"), v1=z((M, c1), "v"))
    if kind == "cconv3":
        mx, my, mz = dims
        return WorkspaceND(U=z((M, mx, my, mz), "U"), V=z((M, mx, my, mz), "V"),
                           u2=z((M, my, mz), "u2"), v2=z((M, my, mz), "v2"),
                           u1=z(mz, "u1"), v1=z(mz, "v1"))
    if kind == "hconv3":
        mx, my, mz = dims
        c1 = mz // 2 + 1
        return WorkspaceND(U=z((M, mx + 1, 2 * my - 1, mz), "U"),
                           V=z((M, mx + 1, 2 * my - 1, mz), "V"),
                           u2=z((M, my + 1, mz), "u2"), v2=z((M, my + 1, mz), "v2"),
                           u1=z((M, c1), "u1"), v1=z((M, c1), "v1"))
    mx, my = dims
    shape = (2 * mx, my + 1)
    return WorkspaceND(U=z(shape, "U"), V=z(shape, "V"), W=z(shape, "W"),
                       u1=z(my + 1, "u"), v1=z(my + 1, "v"), w1=z(my + 1, "w"))


def _stack(f, g, ndim):
    F = f[None] if f.ndim == ndim else f
    G = g[None] if g.ndim == ndim else g
    if F.ndim != ndim + 1 or F.shape != G.shape:
        raise ValueError(f"f and g must be matching {ndim}D fields (or stacks), "
                         f"got {f.shape} and {g.shape}")
    return F, G


def _require(ws, name, shape):
    a = getattr(ws, name)
    if a is None or a.shape != shape:
        got = None if a is None else a.shape
        raise ValueError(f"workspace {name} must have shape {shape}, got {got}")
    return a


def cconv2(f, g, ws=None, M=None):
    """Dealiased 2D convolution of ``mx x my`` standard spectra, in place in ``f``.

    ``f`` may be an ``(M, mx, my)`` stack, in which case ``sum_i f_i * g_i``
    is returned in ``f[0]``.  ``g`` is overwritten.
    """
    F, G = _stack(f, g, 2)
    M_, mx, my = F.shape
    if M is not None and M != M_:
        raise ValueError(f"M={M} but the inputs stack {M_} fields")
    if ws is None:
        ws = make_workspace("cconv2", (mx, my), M_)
    U = _require(ws, "U", (M_, mx, my))
    V = _require(ws, "V", (M_, mx, my))
    u = _require(ws, "u1", (my,))
    v = _require(ws, "v1", (my,))
    for i in range(M_):
        fftpad_backward(F[i], U[i])
        fftpad_backward(G[i], V[i])
    for i in range(mx):
        cconv(F[:, i], G[:, i], u, v)
    for i in range(mx):
        cconv(U[:, i], V[:, i], u, v)
    fftpad_forward(F[0], U[0])
    return F[0]


def conv2(f, g, ws=None, M=None):
    """Dealiased centered Hermitian 2D convolution of ``(2mx-1) x my`` spectra."""
    F, G = _stack(f, g, 2)
    M_, nx, my = F.shape
    if M is not None and M != M_:
        raise ValueError(f"M={M} but the inputs stack {M_} fields")
    if nx % 2 == 0 or my % 2:
        raise ValueError(f"conv2 needs odd rows and even columns, got {F.shape[1:]}")
    mx = (nx + 1) // 2
    if ws is None:
        ws = make_workspace("conv2", (mx, my), M_)
    U = _require(ws, "U", (M_, mx + 1, my))
    V = _require(ws, "V", (M_, mx + 1, my))
    u = _require(ws, "u1", (M_, my // 2 + 1))
    v = _require(ws, "v1", (M_, my // 2 + 1))
    for i in range(M_):
        fft0pad_backward(F[i], U[i])
        fft0pad_backward(G[i], V[i])
    for i in range(2 * mx - 1):
        hconv(F[:, i], G[:, i], u, v)
    for i in range(mx + 1):
        hconv(U[:, i], V[:, i], u, v)
    fft0pad_forward(F[0], U[0])
    return F[0]


def cconv3(f, g, ws=None, M=None):
    """Dealiased 3D convolution of ``mx x my x mz`` standard spectra."""
    F, G = _stack(f, g, 3)
    M_, mx, my, mz = F.shape
    if M is not None and M != M_:
        raise ValueError(f"M={M} but the inputs stack {M_} fields")
    if ws is None:
        ws = make_workspace("cconv3", (mx, my, mz), M_)
    U = _require(ws, "U", (M_, mx, my, mz))
    V = _require(ws, "V", (M_, mx, my, mz))
    inner = ws.inner()
    for i in range(M_):
        fftpad_backward(F[i], U[i])
        fftpad_backward(G[i], V[i])
    for i in range(mx):
        cconv2(F[:, i], G[:, i], inner)
    for i in range(mx):
        cconv2(U[:, i], V[:, i], inner)
    fftpad_forward(F[0], U[0])
    return F[0]


def hconv3(f, g, ws=None, M=None):
    """Dealiased centered Hermitian 3D convolution of ``(2mx-1) x (2my-1) x mz`` spectra.

    Pads x implicitly with the centered 3m transform and hands each x-stream
    slab to :func:`conv2`.
    """
    F, G = _stack(f, g, 3)
    M_, nx, ny, mz = F.shape
    if M is not None and M != M_:
        raise ValueError(f"M={M} but the inputs stack {M_} fields")
    if nx % 2 == 0 or ny % 2 == 0 or mz % 2:
        raise ValueError(f"hconv3 needs odd x, y extents and even z, got {F.shape[1:]}")
    mx, my = (nx + 1) // 2, (ny + 1) // 2
    if ws is None:
        ws = make_workspace("hconv3", (mx, my, mz), M_)
    U = _require(ws, "U", (M_, mx + 1, ny, mz))
    V = _require(ws, "V", (M_, mx + 1, ny, mz))
    inner = ws.inner()
    for i in range(M_):
        fft0pad_backward(F[i], U[i])
        fft0pad_backward(G[i], V[i])
    for i in range(nx):
        conv2(F[:, i], G[:, i], inner)
    for i in range(mx + 1):
        conv2(U[:, i], V[:, i], inner)
    fft0pad_forward(F[0], U[0])
    return F[0]


def tconv2(f, g, h, ws=None):
    """Dealiased centered Hermitian ternary convolution of ``2mx x (my+1)`` arrays.

    Row 0 (``kx = -mx``) and column ``my`` are padding and are zeroed.
    ``g`` and ``h`` are overwritten.
    """
    if not (f.shape == g.shape == h.shape) or f.ndim != 2:
        raise ValueError("f, g, h must be matching 2D arrays")
    nx, ny = f.shape
    if nx % 2 or ny < 2:
        raise ValueError(f"tconv2 arrays are 2mx x (my+1), got {f.shape}")
    mx, my = nx // 2, ny - 1
    if ws is None:
        ws = make_workspace("tconv2", (mx, my))
    U = _require(ws, "U", (nx, ny))
    V = _require(ws, "V", (nx, ny))
    W = _require(ws, "W", (nx, ny))
    u = _require(ws, "u1", (ny,))
    v = _require(ws, "v1", (ny,))
    w = _require(ws, "w1", (ny,))
    fft0tpad_backward(f[:, :my], U[:, :my])
    fft0tpad_backward(g[:, :my], V[:, :my])
    fft0tpad_backward(h[:, :my], W[:, :my])
    for i in range(nx):
        tconv(f[i], g[i], h[i], u, v, w)
        tconv(U[i], V[i], W[i], u, v, w)
    fft0tpad_forward(f[:, :my], U[:, :my])
    f[:, my] = 0
    return f


def convolve(kind, *fields_, ws=None):
    """Dispatch to the implicit convolution for ``kind`` (1D or ND)."""
    if kind == "cconv":
        ws = ws or make_workspace("cconv", (fields_[0].shape[-1],))
        return cconv(*fields_, ws.u1, ws.v1)
    if kind == "hconv":
        f = fields_[0]
        M = 1 if f.ndim == 1 else f.shape[0]
        ws = ws or make_workspace("hconv", (f.shape[-1],), M)
        u, v = (ws.u1, ws.v1) if f.ndim == 2 else (ws.u1[0], ws.v1[0])
        return hconv(*fields_, u, v)
    if kind == "tconv":
        ws = ws or make_workspace("tconv", (fields_[0].shape[0] - 1,))
        return tconv(*fields_, ws.u1, ws.v1, ws.w1)
    fn = {"cconv2": cconv2, "conv2": conv2, "cconv3": cconv3, "hconv3": hconv3,
          "tconv2": tconv2}.get(kind)
    if fn is None:
        raise ValueError(f"unknown kind {kind!r}")
    return fn(*fields_, ws=ws)


# -- Hermitian symmetry -----------------------------------------------------

def enforce_symmetry(f, kind):
    """Make the self-conjugate line/plane of a Hermitian field exactly symmetric.

    ``kind`` is ``"conv2"``, ``"hconv3"`` or ``"tconv2"`` (the storage layout).
    Each pair is replaced by its average ``(U_k + conj U_-k) / 2``, which also
    makes the origin real.
    """
    if kind == "conv2":
        line = f[:, 0]
    elif kind == "hconv3":
        line = f[:, :, 0]
    elif kind == "tconv2":
        f[0] = 0
        line = f[1:, 0]
    else:
        raise ValueError(f"no Hermitian symmetry for kind {kind!r}")
    mirrored = np.conj(line[(slice(None, None, -1),) * line.ndim])
    line[...] = (line + mirrored) / 2
    return f


def symmetry_residual(f, kind):
    """Max ``|U_k - conj U_-k|`` over the self-conjugate line/plane."""
    if kind == "conv2":
        line = f[:, 0]
    elif kind == "hconv3":
        line = f[:, :, 0]
    elif kind == "tconv2":
        line = f[1:, 0]
    else:
        raise ValueError(f"no Hermitian symmetry for kind {kind!r}")
    mirrored = np.conj(line[(slice(None, None, -1),) * line.ndim])
    return float(np.max(np.abs(line - mirrored), initial=0.0))


# -- pseudospectral advection ----------------------------------------------

def advection2d(omega, ws=None, tol=1e-12):
    """Dealiased advective term of 2D incompressible flow from its vorticity.

    ``omega`` is a ``(2mx-1) x my`` centered Hermitian spectrum.  Returns
    ``sum_p (p_x k_y - p_y k_x) / |k-p|^2 omega_p omega_{k-p}`` in the same
    layout, computed with a single two-term :func:`conv2`.  The mean-flow
    mode ``k = 0`` of the inverse Laplacian is taken as zero.
    """
    nx, my = omega.shape
    if nx % 2 == 0 or my % 2:
        raise ValueError(f"omega must be (2mx-1) x my with even my, got {omega.shape}")
    scale = np.max(np.abs(omega), initial=0.0)
    if symmetry_residual(omega, "conv2") > tol * max(scale, 1.0):
        raise ValueError("omega is not Hermitian symmetric on ky = 0; "
                         "apply enforce_symmetry first")
    mx = (nx + 1) // 2
    kx = np.arange(-mx + 1, mx)[:, None]
    ky = np.arange(my)[None, :]
    k2 = kx ** 2 + ky ** 2
    inv_k2 = np.divide(1.0, k2, out=np.zeros(k2.shape), where=k2 != 0)
    f = buffers.zeros((2, nx, my), "f")
    g = buffers.zeros((2, nx, my), "g")
    f[0] = 1j * kx * omega
    f[1] = 1j * ky * omega
    g[0] = -1j * ky * omega * inv_k2
    g[1] = 1j * kx * omega * inv_k2
    return conv2(f, g, ws).copy()


# -- memory accounting -----------------------------------------------------

def implicit_formula(kind, dims):
    """Complex words used by the implicit convolution (inputs + work)."""
    dims = _check_dims(kind, dims)
    if kind == "cconv":
        return 4 * dims[0]
    if kind == "hconv":
        return 3 * dims[0] + 2
    if kind == "tconv":
        return 6 * (dims[0] + 1)
    if kind == "cconv2":
        mx, my = dims
        return 4 * mx * my + 2 * my
    if kind == "conv2":
        mx, my = dims
        return 6 * mx * my + my + 2
    if kind == "cconv3":
        mx, my, mz = dims
        return 4 * mx * my * mz + 2 * my * mz + 2 * mz
    if kind == "hconv3":
        mx, my, mz = dims
        # inputs plus x-streams, the conv2 sub-workspace, the hconv work vectors;
        # this sums to 12 mx my mz - 6 mx mz + 2 my mz + 3 mz + 2
        return 6 * mx * (2 * my - 1) * mz + 2 * (my + 1) * mz + 2 * (mz // 2 + 1)
    mx, my = dims
    return 12 * mx * my + 12 * mx + 3 * my + 3


def explicit_formula(kind, dims):
    """Complex words for the conventional explicitly padded convolution."""
    dims = _check_dims(kind, dims)
    if kind == "cconv":
        return 4 * dims[0]
    if kind == "hconv":
        return 3 * dims[0] + 2
    if kind == "tconv":
        return 3 * (2 * dims[0] + 1)
    if kind == "cconv2":
        mx, my = dims
        return 8 * mx * my
    if kind == "conv2":
        mx, my = dims
        return 9 * mx * my - 6 * my
    if kind == "cconv3":
        mx, my, mz = dims
        return 16 * mx * my * mz
    if kind == "hconv3":
        mx, my, mz = dims
        return 27 * mx * my * mz
    mx, my = dims
    return 24 * mx * my + 12 * mx


def implicit_allocation(kind, dims, dry=True):
    """Count the words actually requested for inputs plus workspace."""
    dims = _check_dims(kind, dims)
    with buffers.track(dry=dry) as tally:
        for _ in range(N_INPUTS[kind]):
            buffers.zeros(field_shape(kind, dims), "input")
        make_workspace(kind, dims)
    return tally.words


def memory_report(kind, dims):
    """Closed-form and instrumented complex-word counts for one geometry."""
    from .reference_oracles import explicit_allocation
    return {
        "implicit": implicit_formula(kind, dims),
        "implicit_allocated": implicit_allocation(kind, dims),
        "explicit": explicit_formula(kind, dims),
        "explicit_allocated": explicit_allocation(kind, dims),
    }

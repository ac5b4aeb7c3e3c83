"""Complex-word buffers with optional allocation accounting.

Every buffer the library owns (workspaces, explicitly padded arrays, and the
input fields built by the benchmark harness) is created through
:func:`zeros`.  Inside a :func:`track` block each allocation is tallied in
complex words, which is how memory use is reported throughout.
"""
from __future__ import annotations

import contextlib
from dataclasses import dataclass, field

import numpy as np

COMPLEX = np.complex128


@dataclass
class AllocationTally:
    """Running count of complex words handed out by :func:`zeros`.

    With ``dry=True`` no memory is committed: buffers are zero-strided
    read-only views, so very large geometries can be audited cheaply.
    """

    dry: bool = False
    words: int = 0
    log: list = field(default_factory=list)

    def record(self, shape, label):
        n = int(np.prod(shape, dtype=np.int64))
        self.words += n
        self.log.append((label, tuple(shape), n))


_active: list[AllocationTally] = []


@contextlib.contextmanager
def track(dry=False):
    tally = AllocationTally(dry=dry)
    _active.append(tally)
    try:
        yield tally
    finally:
        _active.remove(tally)


def zeros(shape, label=""):
    """Allocate a zeroed complex buffer, recording it with any active tally."""
    if isinstance(shape, (int, np.integer)):
        shape = (int(shape),)
    shape = tuple(int(s) for s in shape)
    dry = False
    for tally in _active:
        tally.record(shape, label)
        dry = dry or tally.dry
    if dry:
        return np.broadcast_to(np.zeros((), COMPLEX), shape)
    return np.zeros(shape, COMPLEX)


def real_view(z, n):
    """The first ``n`` doubles of a contiguous complex vector, as a writable view.

    A complex-to-real transform of size ``n`` stores its output in the
    ``n//2+1`` complex words that held its input.
    """
    if z.ndim != 1 or z.strides[0] != z.itemsize:
        raise ValueError("real_view needs a contiguous 1D complex buffer")
    if 2 * z.shape[0] < n:
        raise ValueError(f"{z.shape[0]} complex words cannot hold {n} reals")
    return z.view(np.float64)[:n]

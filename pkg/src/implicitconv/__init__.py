"""Implicitly dealiased convolutions on numpy arrays."""
from .implicit1d import (build, cconv, fft0pad_backward, fft0pad_forward,
                         fft0tpad_backward, fft0tpad_forward, fftpad_backward,
                         fftpad_forward, hconv, pq_backward, pq_forward, tconv)
from .implicit_nd import (WorkspaceND, advection2d, cconv2, cconv3, conv2, convolve,
                          enforce_symmetry, hconv3, make_workspace, memory_report, tconv2)

__version__ = "0.1.0"

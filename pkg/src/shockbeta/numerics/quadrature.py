"""Composite quadrature rules on uniformly spaced samples.

All rules accept real or complex sample arrays.  ``h`` is the (constant)
spacing between consecutive samples.
"""

from __future__ import annotations

import numpy as np

from ..errors import BadSampleCount


def quad_trapezoid(samples, h: float):
    """Composite trapezoid rule over ``len(samples) - 1`` intervals."""
    y = np.asarray(samples)
    if y.ndim != 1 or y.size < 2:
        raise BadSampleCount("trapezoid rule needs a 1-D array of >= 2 samples")
    return h * (0.5 * (y[0] + y[-1]) + y[1:-1].sum())


def quad_simpson(samples, h: float):
    """Composite Simpson rule; requires an odd sample count >= 3."""
    y = np.asarray(samples)
    if y.ndim != 1 or y.size < 3 or y.size % 2 == 0:
        raise BadSampleCount("Simpson rule needs an odd number of samples >= 3")
    return (h / 3.0) * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum())


def cumquad_simpson(samples, h: float):
    """Running integral from the left endpoint at every node.

    Even prefixes (an even number of intervals) are composite Simpson; odd
    prefixes take the Simpson value one node back plus a single trapezoid
    interval.  Entry 0 is 0.
    """
    y = np.asarray(samples)
    if y.ndim != 1 or y.size < 2:
        raise BadSampleCount("cumulative Simpson needs a 1-D array of >= 2 samples")
    n = y.size
    out = np.zeros(n, dtype=np.result_type(y.dtype, float))
    # Simpson value at even nodes, accumulated pair by pair.
    pair = (h / 3.0) * (y[0:-2:2] + 4.0 * y[1:-1:2] + y[2::2])
    out[2::2] = np.cumsum(pair)
    # Odd nodes: even-prefix value plus one trapezoid interval.
    out[1::2] = out[0:-1:2] + (h / 2.0) * (y[0:-1:2] + y[1::2])
    return out

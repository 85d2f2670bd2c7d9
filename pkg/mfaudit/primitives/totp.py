"""Time-based one-time password counters."""

import math

from ..errors import InvalidIntervalError


def totp_counter(t, t0, interval):
    """
    The TOTP time step floor((t - t0) / I).

    Parameters
    ----------
    t: int or float
        Current time, in seconds.
    t0: int or float
        Epoch of the counter, in seconds.
    interval: int or float
        Step length I, in seconds (strictly positive).

    Returns
    -------
    int

    """
    if interval <= 0:
        raise InvalidIntervalError(f"TOTP interval must be positive, got {interval}.")
    if t < t0:
        raise ValueError("Time lies before the TOTP epoch.")
    return int(math.floor((t - t0) / interval))

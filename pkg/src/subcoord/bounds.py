"""Approximation guarantees of the coordinate-ascent family, as right-hand sides.

Each function returns the value the solver's output is guaranteed to reach
given the optimum value ``opt``.
"""
import math

E = math.e
ECA_RATIO = (E - 1) / (2 * E - 1)  # ~0.3873


def ca_bound(opt, eps, B, L, max_upper):
    """Plain coordinate ascent; strong when every ``u_i`` is small next to ``B``."""
    return (1 - 1 / E - max_upper / B - eps) * opt - eps * B * L


def eca_bound(opt, eps, B, L):
    return (ECA_RATIO - 2 * eps) * opt - eps * B * L


def feca_bound(opt, eps, B, L):
    return (1 - 1 / E - 4 * eps) * opt - eps * (B + 2) * L


def conditioned_bound(x_norm, ref_norm, ref_value, eps, B, L):
    """Lower bound on ``F(x)`` after a prefix of good iterations w.r.t. a reference point."""
    return (1 - math.exp(-x_norm / (ref_norm + eps * B))) * ref_value - x_norm * eps * L


def ca_iteration_bound(n, eps):
    return n + 1 + n / eps


def guess_set_size_bound(eps):
    return 1 + math.ceil(1 / eps)

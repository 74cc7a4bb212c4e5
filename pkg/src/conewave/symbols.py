"""Strictly convex dispersion symbols and their band diagnostics.

A :class:`Symbol` bundles the dispersion relation ``f`` with its first three
derivatives.  All callables are vectorized (accept and return numpy arrays).
Built-in symbols carry closed-form extrema of ``f''`` and ``|f'''|`` so that
the error constants built on top of them over-estimate without grid slack.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConvexityError, DomainError, RangeError

__all__ = ["SymbolKind", "Symbol", "eval_derivs", "band_extrema", "invert_velocity"]


class SymbolKind(enum.Enum):
    FREE_SCHRODINGER = "free_schrodinger"
    KLEIN_GORDON = "klein_gordon"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Symbol:
    """Dispersion relation f with derivatives f', f'', f'''.

    Immutable after construction; all operations are pure, so instances can
    be shared freely across threads.
    """

    kind: SymbolKind
    f: Callable
    df: Callable
    d2f: Callable
    d3f: Callable
    mass: float | None = field(default=None)

    @staticmethod
    def free_schrodinger() -> "Symbol":
        """f(p) = p^2 / 2 (free quantum particle)."""
        return Symbol(
            kind=SymbolKind.FREE_SCHRODINGER,
            f=lambda p: 0.5 * np.asarray(p, dtype=float) ** 2,
            df=lambda p: np.asarray(p, dtype=float) + 0.0,
            d2f=lambda p: np.ones_like(np.asarray(p, dtype=float)),
            d3f=lambda p: np.zeros_like(np.asarray(p, dtype=float)),
        )

    @staticmethod
    def klein_gordon(mass: float = 1.0) -> "Symbol":
        """f(p) = sqrt(p^2 + m^2), relativistic dispersion with mass m > 0."""
        if not (mass > 0.0):
            raise DomainError(f"Klein-Gordon mass must be positive, got {mass}")
        m2 = mass * mass

        def f(p):
            return np.sqrt(np.asarray(p, dtype=float) ** 2 + m2)

        def df(p):
            p = np.asarray(p, dtype=float)
            return p / np.sqrt(p * p + m2)

        def d2f(p):
            p = np.asarray(p, dtype=float)
            return m2 * (p * p + m2) ** -1.5

        def d3f(p):
            p = np.asarray(p, dtype=float)
            return -3.0 * m2 * p * (p * p + m2) ** -2.5

        return Symbol(kind=SymbolKind.KLEIN_GORDON, f=f, df=df, d2f=d2f, d3f=d3f, mass=mass)

    @staticmethod
    def custom(f, df, d2f, d3f) -> "Symbol":
        """Wrap user-supplied vectorized callables; no automatic differentiation."""
        return Symbol(kind=SymbolKind.CUSTOM, f=f, df=df, d2f=d2f, d3f=d3f)


def eval_derivs(sym: Symbol, p: float) -> tuple[float, float, float, float]:
    """Evaluate (f, f', f'', f''') at a single point."""
    if not math.isfinite(p):
        raise DomainError(f"p must be finite, got {p}")
    vals = (float(sym.f(p)), float(sym.df(p)), float(sym.d2f(p)), float(sym.d3f(p)))
    if not all(math.isfinite(v) for v in vals):
        raise DomainError(f"non-finite derivative values at p={p}: {vals}")
    return vals


_SCAN_POINTS = 4096


def band_extrema(sym: Symbol, a: float, b: float) -> tuple[float, float, float]:
    """Certified (sup f'', inf f'', sup |f'''|) over [a, b].

    Built-in symbols use closed-form extrema; custom symbols fall back to a
    dense uniform scan plus endpoints.  Raises ConvexityError when the
    infimum of f'' is not strictly positive.
    """
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")

    if sym.kind is SymbolKind.FREE_SCHRODINGER:
        return 1.0, 1.0, 0.0

    if sym.kind is SymbolKind.KLEIN_GORDON:
        m = sym.mass
        # f'' = m^2 (p^2+m^2)^{-3/2} decreases in |p|: extremal at the
        # points of the band closest to / farthest from 0.
        absmin = 0.0 if a <= 0.0 <= b else min(abs(a), abs(b))
        absmax = max(abs(a), abs(b))
        sup_d2f = float(sym.d2f(absmin))
        inf_d2f = float(sym.d2f(absmax))
        # |f'''| = 3 m^2 |p| (p^2+m^2)^{-5/2} peaks at |p| = m/2.
        cand = [a, b]
        for c in (m / 2.0, -m / 2.0):
            if a <= c <= b:
                cand.append(c)
        sup_abs_d3f = max(abs(float(sym.d3f(c))) for c in cand)
        return sup_d2f, inf_d2f, sup_abs_d3f

    grid = np.linspace(a, b, _SCAN_POINTS)
    d2 = np.asarray(sym.d2f(grid), dtype=float)
    d3 = np.abs(np.asarray(sym.d3f(grid), dtype=float))
    sup_d2f = float(d2.max())
    inf_d2f = float(d2.min())
    sup_abs_d3f = float(d3.max())
    if inf_d2f <= 0.0:
        raise ConvexityError(
            f"symbol is not strictly convex on [{a}, {b}]: min f'' = {inf_d2f}"
        )
    return sup_d2f, inf_d2f, sup_abs_d3f


def invert_velocity(sym: Symbol, v: float, a: float, b: float, tol: float = 1e-12) -> float:
    """Solve f'(p) = v on [a, b].

    f' is strictly increasing (strict convexity), so a bisection bracket is
    always valid; Newton steps refine it.  The result satisfies
    |f'(p) - v| < tol * max(1, |v|).
    """
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    va, vb = float(sym.df(a)), float(sym.df(b))
    if not (va <= v <= vb):
        raise RangeError(f"velocity {v} outside [f'({a}), f'({b})] = [{va}, {vb}]")

    target = tol * max(1.0, abs(v))
    lo, hi = a, b
    p = 0.5 * (lo + hi)
    for _ in range(200):
        fp = float(sym.df(p)) - v
        if abs(fp) < target:
            return p
        if fp > 0.0:
            hi = p
        else:
            lo = p
        d2 = float(sym.d2f(p))
        step = p - fp / d2 if d2 > 0.0 else None
        if step is not None and lo < step < hi:
            p = step
        else:
            p = 0.5 * (lo + hi)
    # Newton + bisection on a monotone function: reaching here means the
    # tolerance is below representable resolution; return the midpoint.
    return 0.5 * (lo + hi)

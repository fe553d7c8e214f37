from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Optional

import numpy as np

from rank1det.config import CFG
from rank1det.dense import DenseMatrix
from rank1det.fubini_study import ChartPoint
from rank1det.rank1 import Rank1System
from rank1det.scalars import GaussianRational, ScalarKind

__all__ = [
    "make_rng",
    "random_entries",
    "random_system",
    "random_dense",
    "random_chart_point",
    "random_ball_point",
    "random_rational_point",
    "well_conditioned_system",
]


def make_rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_entries(rng: np.random.Generator, count: int, kind: ScalarKind, *, bound: Optional[int] = None,
                   nonzero: bool = False) -> List:
    """
    Uniform integers in [-bound, bound] as scalars of `kind`; complex kinds
    draw real and imaginary parts independently.
    """
    bound = CFG.ENTRY_BOUND if bound is None else int(bound)

    def draw(size: int) -> np.ndarray:
        vals = rng.integers(-bound, bound + 1, size=size)
        if nonzero:
            # redraw zeros in place, keeps the stream deterministic per seed
            while np.any(vals == 0):
                zeros = vals == 0
                vals[zeros] = rng.integers(-bound, bound + 1, size=int(zeros.sum()))
        return vals

    re = draw(count).tolist()
    if not kind.is_complex:
        if kind is ScalarKind.Q:
            return [Fraction(v) for v in re]
        return [float(v) for v in re]
    im = rng.integers(-bound, bound + 1, size=count).tolist()
    if kind is ScalarKind.QI:
        return [GaussianRational(r, i) for r, i in zip(re, im)]
    return [complex(r, i) for r, i in zip(re, im)]


def random_system(rng: np.random.Generator, n: int, kind: ScalarKind, *, bound: Optional[int] = None,
                  nonzero_ab: bool = False, nonzero_x: bool = False) -> Rank1System:
    x = random_entries(rng, n, kind, bound=bound, nonzero=nonzero_x)
    a = random_entries(rng, n, kind, bound=bound, nonzero=nonzero_ab)
    b = random_entries(rng, n, kind, bound=bound, nonzero=nonzero_ab)
    return Rank1System(tuple(x), tuple(a), tuple(b), kind)


def random_dense(rng: np.random.Generator, n: int, kind: ScalarKind, *, bound: Optional[int] = None) -> DenseMatrix:
    return DenseMatrix(n, tuple(random_entries(rng, n * n, kind, bound=bound)), kind)


def random_chart_point(rng: np.random.Generator, n: int, *, radius: Optional[float] = None) -> ChartPoint:
    """
    Uniform in the polydisk |z_i| <= radius.
    """
    radius = CFG.FSCHECK_RADIUS if radius is None else float(radius)
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * math.pi * rng.random(n)
    return ChartPoint(tuple(complex(v) for v in r * np.exp(1j * theta)), ScalarKind.C64)


def random_ball_point(rng: np.random.Generator, n: int, *, radius: float) -> ChartPoint:
    """
    Uniform direction with |z| <= radius.
    """
    g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    g /= np.linalg.norm(g)
    rho = radius * rng.random() ** (1.0 / (2 * n))
    return ChartPoint(tuple(complex(v) for v in rho * g), ScalarKind.C64)


def random_rational_point(rng: np.random.Generator, n: int, *, denominator: int = 4,
                          bound: int = 6) -> ChartPoint:
    """
    Exact point with coordinates p/denominator + (q/denominator) i, |p|, |q| <= bound.
    """
    re = rng.integers(-bound, bound + 1, size=n).tolist()
    im = rng.integers(-bound, bound + 1, size=n).tolist()
    z = tuple(GaussianRational(Fraction(p, denominator), Fraction(q, denominator)) for p, q in zip(re, im))
    return ChartPoint(z, ScalarKind.QI)


def well_conditioned_system(rng: np.random.Generator, n: int) -> Rank1System:
    """
    a, b in [-1, 1], x in [n, 2n]: strictly diagonally dominant, so both
    the structured and the dense path see a benign matrix.
    """
    a = rng.uniform(-1.0, 1.0, size=n)
    b = rng.uniform(-1.0, 1.0, size=n)
    x = rng.uniform(float(n), 2.0 * n, size=n)
    return Rank1System(tuple(x.tolist()), tuple(a.tolist()), tuple(b.tolist()), ScalarKind.F64)

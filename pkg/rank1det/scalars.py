from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Union

from rank1det.errors import ScalarKindError

__all__ = [
    "ScalarKind",
    "GaussianRational",
    "Scalar",
    "coerce",
    "convert",
    "zero",
    "one",
    "scalar_sum",
    "scalar_prod",
    "magnitude",
    "is_close",
    "parse_scalar",
    "format_scalar",
]


class ScalarKind(str, Enum):
    F64 = "f64"
    C64 = "c64"
    Q = "q"
    QI = "qi"

    @property
    def is_exact(self) -> bool:
        return self in (ScalarKind.Q, ScalarKind.QI)

    @property
    def is_complex(self) -> bool:
        return self in (ScalarKind.C64, ScalarKind.QI)

    @property
    def exact_counterpart(self) -> "ScalarKind":
        return ScalarKind.QI if self.is_complex else ScalarKind.Q


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)):
        return Fraction(v)
    if isinstance(v, float):
        # exact binary value of the float
        return Fraction(v)
    raise TypeError(f"cannot use {type(v).__name__} as a rational part")


@dataclass(frozen=True, eq=False)
class GaussianRational:
    """
    Exact complex number re + im*i with rational parts.
    """
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", _as_fraction(self.re))
        object.__setattr__(self, "im", _as_fraction(self.im))

    @staticmethod
    def _wrap(other) -> "GaussianRational | None":
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(Fraction(other), Fraction(0))
        return None

    # arithmetic
    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        den = o.abs_sq()
        if den == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / den,
            (self.im * o.re - self.re * o.im) / den,
        )

    def __rtruediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o.__truediv__(self)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussianRational(1) / (self ** (-k))
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __pos__(self) -> "GaussianRational":
        return self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.sqrt(self.abs_sq())

    # comparisons / conversions
    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({format_scalar(self, ScalarKind.QI)})"

    def __str__(self) -> str:
        return format_scalar(self, ScalarKind.QI)


Scalar = Union[float, complex, Fraction, GaussianRational]


# ============================================================
# Kind-generic helpers
# ============================================================
def coerce(value, kind: ScalarKind) -> Scalar:
    """
    Convert value into the Python type that represents `kind`.
    Exact kinds refuse floats that are not integral to keep inputs honest.
    """
    if kind is ScalarKind.F64:
        if isinstance(value, GaussianRational):
            if value.im != 0:
                raise ScalarKindError(f"complex value {value} in real kind f64")
            return float(value.re)
        if isinstance(value, complex):
            if value.imag != 0:
                raise ScalarKindError(f"complex value {value!r} in real kind f64")
            return float(value.real)
        return float(value)

    if kind is ScalarKind.C64:
        if isinstance(value, GaussianRational):
            return complex(value)
        if isinstance(value, Fraction):
            return complex(float(value))
        return complex(value)

    if kind is ScalarKind.Q:
        if isinstance(value, GaussianRational):
            if value.im != 0:
                raise ScalarKindError(f"complex value {value} in real kind q")
            return value.re
        if isinstance(value, complex):
            raise ScalarKindError(f"float-complex value {value!r} in exact kind q")
        if isinstance(value, float) and not value.is_integer():
            raise ScalarKindError(f"non-integral float {value!r} in exact kind q")
        return _as_fraction(value)

    if kind is ScalarKind.QI:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            if not (value.real.is_integer() and value.imag.is_integer()):
                raise ScalarKindError(f"non-integral complex {value!r} in exact kind qi")
            return GaussianRational(int(value.real), int(value.imag))
        if isinstance(value, float) and not value.is_integer():
            raise ScalarKindError(f"non-integral float {value!r} in exact kind qi")
        return GaussianRational(_as_fraction(value), Fraction(0))

    raise ScalarKindError(f"unknown scalar kind {kind!r}")


def convert(value: Scalar, kind: ScalarKind) -> Scalar:
    """
    Like coerce, but lossy exact -> float conversions are allowed.
    """
    if kind is ScalarKind.F64 and isinstance(value, Fraction):
        return float(value)
    if kind is ScalarKind.C64 and isinstance(value, GaussianRational):
        return complex(value)
    return coerce(value, kind)


def zero(kind: ScalarKind) -> Scalar:
    return coerce(0, kind)


def one(kind: ScalarKind) -> Scalar:
    return coerce(1, kind)


def scalar_sum(values: Iterable[Scalar], kind: ScalarKind) -> Scalar:
    """
    Compensated (math.fsum) for float kinds, exact otherwise.
    """
    if kind is ScalarKind.F64:
        return math.fsum(values)
    if kind is ScalarKind.C64:
        vals = list(values)
        return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))
    return sum(values, zero(kind))


def scalar_prod(values: Iterable[Scalar], kind: ScalarKind) -> Scalar:
    return math.prod(values, start=one(kind))


def magnitude(value: Scalar) -> float:
    return float(abs(value))


def is_close(value: Scalar, reference: Scalar, kind: ScalarKind, *, rtol: float, atol: float = 0.0) -> bool:
    if kind.is_exact:
        return value == reference
    return abs(value - reference) <= max(atol, rtol * abs(reference))


# ============================================================
# Token grammar: p/q, re+imi
# ============================================================
def _split_complex(token: str) -> tuple[str, str]:
    body = token[:-1]
    cut = None
    for idx in range(len(body) - 1, 0, -1):
        if body[idx] in "+-" and body[idx - 1] not in "eE":
            cut = idx
            break
    if cut is None:
        re_part, im_part = "0", body
    else:
        re_part, im_part = body[:cut], body[cut:]
    if im_part in ("", "+", "-"):
        im_part += "1"
    return re_part, im_part


def _parse_real(text: str, exact: bool):
    if exact:
        return Fraction(text)
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def parse_scalar(token: str, kind: ScalarKind) -> Scalar:
    """
    Parse one whitespace-free token; raises ValueError on bad input.
    """
    if not token or any(ch.isspace() for ch in token):
        raise ValueError(f"bad scalar token {token!r}")
    exact = kind.is_exact
    if token.endswith("i"):
        if not kind.is_complex:
            raise ValueError(f"imaginary token {token!r} in real kind {kind.value}")
        re_txt, im_txt = _split_complex(token)
        re_v = _parse_real(re_txt, exact)
        im_v = _parse_real(im_txt, exact)
        if exact:
            return GaussianRational(re_v, im_v)
        return complex(re_v, im_v)
    value = _parse_real(token, exact)
    return coerce(value, kind)


def _fmt_float(x: float) -> str:
    return repr(float(x))


def format_scalar(value: Scalar, kind: ScalarKind) -> str:
    if kind is ScalarKind.Q:
        return str(coerce(value, kind))
    if kind is ScalarKind.QI:
        g = coerce(value, kind)
        sign = "-" if g.im < 0 else "+"
        return f"{g.re}{sign}{abs(g.im)}i"
    if kind is ScalarKind.F64:
        return _fmt_float(coerce(value, kind))
    c = coerce(value, kind)
    sign = "-" if math.copysign(1.0, c.imag) < 0 else "+"
    return f"{_fmt_float(c.real)}{sign}{_fmt_float(abs(c.imag))}i"

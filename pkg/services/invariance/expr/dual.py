"""Dual numbers with one derivative slot for forward-mode differentiation."""

import math

from core.errors import DomainError


class Dual:
    """``val + der * eps`` with ``eps**2 = 0``.

    Arithmetic accepts plain floats on either side, so a compiled expression
    runs unchanged on floats (values) or on duals (one directional derivative).
    """

    __slots__ = ("val", "der")

    def __init__(self, val: float, der: float = 0.0):
        self.val = val
        self.der = der

    def __repr__(self) -> str:
        return f"Dual({self.val!r}, {self.der!r})"

    def __add__(self, other: "Dual | float") -> "Dual":
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.der + other.der)
        return Dual(self.val + other, self.der)

    def __radd__(self, other: float) -> "Dual":
        return Dual(other + self.val, self.der)

    def __sub__(self, other: "Dual | float") -> "Dual":
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.der - other.der)
        return Dual(self.val - other, self.der)

    def __rsub__(self, other: float) -> "Dual":
        return Dual(other - self.val, -self.der)

    def __mul__(self, other: "Dual | float") -> "Dual":
        if isinstance(other, Dual):
            return Dual(self.val * other.val, self.der * other.val + self.val * other.der)
        return Dual(self.val * other, self.der * other)

    def __rmul__(self, other: float) -> "Dual":
        return Dual(other * self.val, other * self.der)

    def __truediv__(self, other: "Dual | float") -> "Dual":
        if isinstance(other, Dual):
            q = self.val / other.val
            return Dual(q, (self.der - q * other.der) / other.val)
        return Dual(self.val / other, self.der / other)

    def __rtruediv__(self, other: float) -> "Dual":
        q = other / self.val
        return Dual(q, -q * self.der / self.val)

    def __neg__(self) -> "Dual":
        return Dual(-self.val, -self.der)


Number = Dual | float


def real(v: Number) -> float:
    """Value part of a float or a dual."""
    return v.val if isinstance(v, Dual) else v


def divide(a: Number, b: Number, where: str) -> Number:
    if real(b) == 0.0:
        raise DomainError(where, "division by zero")
    return a / b


def exp(v: Number, where: str) -> Number:
    try:
        if isinstance(v, Dual):
            e = math.exp(v.val)
            return Dual(e, e * v.der)
        return math.exp(v)
    except OverflowError as exc:
        raise DomainError(where, "exp overflow") from exc


def log(v: Number, where: str) -> Number:
    if real(v) <= 0.0:
        raise DomainError(where, "log of non-positive value")
    if isinstance(v, Dual):
        return Dual(math.log(v.val), v.der / v.val)
    return math.log(v)


def int_power(base: Number, k: int, where: str) -> Number:
    """``base**k`` for an integer exponent; any sign of base."""
    b = real(base)
    if b == 0.0 and k < 0:
        raise DomainError(where, "zero to a negative power")
    try:
        if isinstance(base, Dual):
            if k == 0:
                return Dual(1.0, 0.0)
            return Dual(b**k, k * b ** (k - 1) * base.der)
        return float(b**k)
    except OverflowError as exc:
        raise DomainError(where, "power overflow") from exc


def real_power(base: Number, expo: Number, where: str) -> Number:
    """``base**expo`` for a real or variable exponent; requires base > 0."""
    b = real(base)
    if b <= 0.0:
        raise DomainError(where, "non-positive base with non-integer exponent")
    e = real(expo)
    try:
        value = math.pow(b, e)
    except OverflowError as exc:
        raise DomainError(where, "power overflow") from exc
    if not isinstance(base, Dual) and not isinstance(expo, Dual):
        return value
    db = base.der if isinstance(base, Dual) else 0.0
    de = expo.der if isinstance(expo, Dual) else 0.0
    der = 0.0
    if db:
        der += e * math.pow(b, e - 1.0) * db
    if de:
        der += value * math.log(b) * de
    return Dual(value, der)

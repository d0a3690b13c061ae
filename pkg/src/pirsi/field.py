"""Prime-field arithmetic.

Elements of GF(p) are stored as canonical representatives in [0, p).
``FieldElement`` is immutable and hashable; every operation returns a new
element, so values can be shared freely across threads.
"""

from __future__ import annotations

DEFAULT_PRIME = 65537

# Witnesses making Miller-Rabin deterministic for all n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (valid for n < 2**64)."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldElement:
    """A residue modulo a fixed prime, with exact arithmetic."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        self.value = value % modulus
        self.modulus = modulus

    def _check(self, other: "FieldElement") -> None:
        if self.modulus != other.modulus:
            raise ValueError(
                f"incompatible moduli: {self.modulus} vs {other.modulus}"
            )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.value + other.value, self.modulus)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.value - other.value, self.modulus)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.value * other.value, self.modulus)

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value, self.modulus)

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse via Fermat's little theorem."""
        if self.value == 0:
            raise ValueError("zero has no multiplicative inverse")
        return FieldElement(pow(self.value, self.modulus - 2, self.modulus), self.modulus)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.value == other.value and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash((self.value, self.modulus))

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"FieldElement({self.value}, mod {self.modulus})"


class PrimeField:
    """Factory for elements of GF(p).

    The modulus is validated once here; elements carry it along so that
    cross-field operations fail loudly instead of silently mixing moduli.
    """

    __slots__ = ("p",)

    def __init__(self, p: int = DEFAULT_PRIME):
        if not is_prime(p):
            raise ValueError(f"modulus must be prime, got {p}")
        self.p = p

    def element(self, value: int) -> FieldElement:
        return FieldElement(value, self.p)

    def zero(self) -> FieldElement:
        return FieldElement(0, self.p)

    def one(self) -> FieldElement:
        return FieldElement(1, self.p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrimeField):
            return NotImplemented
        return self.p == other.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

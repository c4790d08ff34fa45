"""Dirichlet characters as dense value tables, plus Gauss sums.

Tables are built from a primitive root, so prime moduli get the full group
of q-1 characters.  Composite moduli appear only through nebentypus
bookkeeping (trivial characters and inductions of prime-modulus ones).
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod q stored as its value table on residues 0..q-1."""

    modulus: int
    values: np.ndarray  # complex, shape (q,)
    is_trivial: bool = False
    label: str = ""

    def __call__(self, n: int) -> complex:
        return complex(self.values[n % self.modulus])

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, np.conj(self.values),
                                  self.is_trivial, self.label + "~")

    def __hash__(self):
        return hash((self.modulus, self.label, self.is_trivial))

    def __eq__(self, other):
        return (self.modulus == other.modulus
                and np.array_equal(self.values, other.values))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def trivial_character(modulus: int) -> DirichletCharacter:
    """Principal character mod `modulus` (modulus 1 allowed: constant 1)."""
    vals = np.zeros(max(modulus, 1), dtype=complex)
    for n in range(max(modulus, 1)):
        if math.gcd(n, modulus) == 1:
            vals[n] = 1.0
    return DirichletCharacter(modulus, vals, is_trivial=True, label=f"chi0_mod{modulus}")


def primitive_root(q: int) -> int:
    """Smallest primitive root mod prime q."""
    if q == 2:
        return 1
    phi = q - 1
    # prime factors of q-1 by trial division
    fac, m = [], phi
    d = 2
    while d * d <= m:
        if m % d == 0:
            fac.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        fac.append(m)
    for g in range(2, q):
        if all(pow(g, phi // p, q) != 1 for p in fac):
            return g
    raise ValidationError(f"no primitive root mod {q} (is it prime?)")


def character_table(q: int) -> list[DirichletCharacter]:
    """All q-1 Dirichlet characters mod prime q; first entry is trivial."""
    if not is_prime(q):
        raise ValidationError(f"character_table needs a prime modulus, got {q}")
    if q == 2:
        return [trivial_character(2)]
    g = primitive_root(q)
    phi = q - 1
    # discrete logs: dlog[g^t mod q] = t
    dlog = np.zeros(q, dtype=int)
    acc = 1
    for t in range(phi):
        dlog[acc] = t
        acc = (acc * g) % q
    omega = cmath.exp(2j * math.pi / phi)
    out = []
    for j in range(phi):
        vals = np.zeros(q, dtype=complex)
        for n in range(1, q):
            vals[n] = omega ** ((j * dlog[n]) % phi)
        out.append(DirichletCharacter(q, vals, is_trivial=(j == 0),
                                      label=f"chi_mod{q}_{j}"))
    return out


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_{a mod q} chi(a) e(a/q)."""
    q = chi.modulus
    total = 0j
    for a in range(q):
        v = chi.values[a]
        if v != 0:
            total += v * cmath.exp(2j * math.pi * a / q)
    return total


def induce(chi: DirichletCharacter, modulus: int) -> DirichletCharacter:
    """Character mod `modulus` induced by chi (modulus must be a multiple)."""
    if modulus % chi.modulus != 0:
        raise ValidationError("induction target must be a multiple of the modulus")
    vals = np.zeros(modulus, dtype=complex)
    for n in range(modulus):
        if math.gcd(n, modulus) == 1:
            vals[n] = chi.values[n % chi.modulus]
    trivial = bool(np.all(np.isclose(vals[np.nonzero(vals)], 1.0)))
    return DirichletCharacter(modulus, vals, is_trivial=trivial,
                              label=chi.label + f"_ind{modulus}")


def multiply(chi1: DirichletCharacter, chi2: DirichletCharacter,
             modulus: int | None = None) -> DirichletCharacter:
    """Pointwise product chi1*chi2 as a character mod lcm (or a multiple)."""
    m = math.lcm(chi1.modulus, chi2.modulus)
    if modulus is None:
        modulus = m
    if modulus % m != 0:
        raise ValidationError("product modulus must be a multiple of the lcm")
    vals = np.zeros(modulus, dtype=complex)
    for n in range(modulus):
        if math.gcd(n, modulus) == 1:
            vals[n] = chi1.values[n % chi1.modulus] * chi2.values[n % chi2.modulus]
    trivial = bool(np.all(np.isclose(vals[np.nonzero(vals)], 1.0)))
    return DirichletCharacter(modulus, vals, is_trivial=trivial,
                              label=f"({chi1.label}*{chi2.label})_mod{modulus}")

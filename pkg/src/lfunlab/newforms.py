"""Newform coefficient data: construction, validation, file I/O, twists.

A `Newform` carries weight k, level N, nebentypus, root number and the
Hecke eigenvalue array a(1..n_max).  The built-in example is the Ramanujan
delta form (weight 12, level 1), whose coefficients are computed exactly
from the eta product.
"""

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .characters import DirichletCharacter, gauss_sum, induce, is_prime, multiply, trivial_character
from .errors import ValidationError

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    _mpz = int


@dataclass
class Newform:
    """Normalized Hecke eigenform data (a(1) = 1)."""

    weight: int
    level: int
    nebentypus: DirichletCharacter
    root_number: complex
    coeffs: np.ndarray          # complex, index n for a(n); index 0 unused
    n_max: int
    label: str = ""
    exact_coeffs: list | None = None   # integer sidecar when the source is exact
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def a(self, n: int) -> complex:
        return complex(self.coeffs[n])

    def __hash__(self):
        return hash((self.label, self.weight, self.level, self.n_max))


# ----------------------------------------------------------------------
# eta product for the delta form
# ----------------------------------------------------------------------

def pentagonal_series(n_max: int) -> list[tuple[int, int]]:
    """(exponent, sign) terms of prod_{n>=1} (1-q^n) up to q^n_max
    (Euler's pentagonal number theorem)."""
    terms = [(0, 1)]
    j = 1
    while True:
        g1 = j * (3 * j - 1) // 2
        g2 = j * (3 * j + 1) // 2
        if g1 > n_max and g2 > n_max:
            break
        s = -1 if j % 2 else 1
        if g1 <= n_max:
            terms.append((g1, s))
        if g2 <= n_max:
            terms.append((g2, s))
        j += 1
    return terms


def _eta3_series(n_max: int) -> list[int]:
    """Coefficients of prod (1-q^n)^3 = sum_j (-1)^j (2j+1) q^{j(j+1)/2}."""
    out = [0] * (n_max + 1)
    j = 0
    while j * (j + 1) // 2 <= n_max:
        out[j * (j + 1) // 2] = (-1) ** j * (2 * j + 1)
        j += 1
    return out


def _pack(vals: list[int], width_bytes: int) -> int:
    return int.from_bytes(
        b"".join(v.to_bytes(width_bytes, "little") for v in vals), "little"
    )


def _unpack(x: int, width_bytes: int, count: int) -> list[int]:
    nbytes = max((x.bit_length() + 7) // 8, width_bytes * count)
    raw = x.to_bytes(nbytes + width_bytes, "little")
    return [
        int.from_bytes(raw[i * width_bytes:(i + 1) * width_bytes], "little")
        for i in range(count)
    ]


def poly_mult_trunc(a: list[int], b: list[int], n_max: int) -> list[int]:
    """Exact truncated product of integer power series.

    Kronecker substitution: each series is split into positive/negative
    parts, packed into one big integer with fixed-width blocks, and the
    products are recovered by byte slicing.  gmpy2 (when present) supplies
    the fast big-integer multiply.
    """
    a = a[:n_max + 1]
    b = b[:n_max + 1]
    max_a = max((abs(v) for v in a), default=0)
    max_b = max((abs(v) for v in b), default=0)
    if max_a == 0 or max_b == 0:
        return [0] * (n_max + 1)
    bound = max_a * max_b * min(len(a), len(b)) * 2
    width_bytes = (bound.bit_length() + 8) // 8 + 1
    ap = _pack([v if v > 0 else 0 for v in a], width_bytes)
    an = _pack([-v if v < 0 else 0 for v in a], width_bytes)
    bp = _pack([v if v > 0 else 0 for v in b], width_bytes)
    bn = _pack([-v if v < 0 else 0 for v in b], width_bytes)
    ap, an, bp, bn = _mpz(ap), _mpz(an), _mpz(bp), _mpz(bn)
    pos = int(ap * bp + an * bn)
    neg = int(ap * bn + an * bp)
    pos_c = _unpack(pos, width_bytes, n_max + 1)
    neg_c = _unpack(neg, width_bytes, n_max + 1)
    return [p - q for p, q in zip(pos_c, neg_c)]


def delta_exact_coeffs(n_max: int) -> list[int]:
    """tau(1..n_max) as exact integers, via q * (eta^3)^8 with repeated
    truncated squaring of the Jacobi series."""
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    deg = n_max - 1
    e3 = _eta3_series(deg)
    e6 = poly_mult_trunc(e3, e3, deg)
    e12 = poly_mult_trunc(e6, e6, deg)
    e24 = poly_mult_trunc(e12, e12, deg)
    return [0] + e24  # tau(n) = coefficient of q^{n-1} in eta^24


def ramanujan_delta(n_max: int, label: str = "delta") -> Newform:
    """The Ramanujan delta form: weight 12, level 1, trivial nebentypus."""
    tau = delta_exact_coeffs(n_max)
    coeffs = np.zeros(n_max + 1, dtype=complex)
    coeffs[1:] = [float(t) for t in tau[1:]]
    return Newform(weight=12, level=1, nebentypus=trivial_character(1),
                   root_number=1.0 + 0.0j, coeffs=coeffs, n_max=n_max,
                   label=label, exact_coeffs=tau)


# ----------------------------------------------------------------------
# Hecke extension and validation
# ----------------------------------------------------------------------

def _smallest_prime_factor(n_max: int) -> np.ndarray:
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for p in range(2, n_max + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    return spf


def hecke_extend(primes_data: dict, k: int, N: int, xi: DirichletCharacter,
                 n_max: int, exact: bool | None = None):
    """Extend a(p) on primes to a(n) for all n <= n_max.

    Uses a(p^{r+1}) = a(p) a(p^r) - xi(p) p^{k-1} a(p^{r-1}) at p not
    dividing N (xi(p) = 0 otherwise, so ramified primes recurse with a
    degree-1 factor), then multiplicativity.  Returns a list of exact
    ints when every input is an int and xi is integral, else a complex
    ndarray.
    """
    spf = _smallest_prime_factor(n_max)
    primes = [p for p in range(2, n_max + 1) if spf[p] == p]
    for p in primes:
        if p not in primes_data:
            raise ValidationError(f"missing prime coefficient a({p})")
    if exact is None:
        exact = all(isinstance(primes_data[p], int) for p in primes) and (
            N == 1 or all(v in (0.0, 1.0, -1.0) for v in xi.values.real)
        ) and not np.any(xi.values.imag)
    if exact:
        a = [0] * (n_max + 1)
        a[1] = 1
        xiv = lambda p: int(round(xi.values[p % xi.modulus].real))
    else:
        a = np.zeros(n_max + 1, dtype=complex)
        a[1] = 1.0
        xiv = lambda p: complex(xi.values[p % xi.modulus])
    for n in range(2, n_max + 1):
        p = int(spf[n])
        pe, m = p, n // p
        while m % p == 0:
            pe *= p
            m //= p
        if m > 1:
            a[n] = a[pe] * a[m]
        elif pe == p:
            a[n] = primes_data[p]
        else:
            a[n] = primes_data[p] * a[n // p] - xiv(p) * p ** (k - 1) * a[n // (p * p)]
    return a


def deligne_bound(p: int, k: int) -> float:
    return 2.0 * p ** ((k - 1) / 2.0)


def check_deligne(f: Newform, p_max: int | None = None) -> list[tuple]:
    """Rows (p, |a(p)|, 2 p^{(k-1)/2}, strict) for unramified p <= p_max."""
    p_max = f.n_max if p_max is None else min(p_max, f.n_max)
    rows = []
    for p in range(2, p_max + 1):
        if not is_prime(p) or f.level % p == 0:
            continue
        bound = deligne_bound(p, f.weight)
        mag = abs(f.a(p))
        rows.append((p, mag, bound, mag < bound * (1 - 1e-12)))
    return rows


def deligne_ok(f: Newform) -> bool:
    if "deligne_ok" not in f._cache:
        rows = check_deligne(f)
        f._cache["deligne_ok"] = all(m <= b * (1 + 1e-9) for _, m, b, _ in rows)
    return f._cache["deligne_ok"]


def validate_newform(f: Newform, rel_tol: float = 1e-8) -> None:
    """Check all structural invariants; raise ValidationError naming the
    first violation.  Deligne violations are warnings, not errors."""
    if abs(f.a(1) - 1.0) > rel_tol:
        raise ValidationError("a(1) != 1 (not a normalized eigenform)")
    if abs(abs(f.root_number) - 1.0) > 1e-8:
        raise ValidationError(f"|root number| != 1 (got {f.root_number})")
    spf = _smallest_prime_factor(f.n_max)
    scale = lambda n: max(1.0, abs(f.a(n)))
    for n in range(2, f.n_max + 1):
        p = int(spf[n])
        pe, m = p, n // p
        while m % p == 0:
            pe *= p
            m //= p
        if m > 1:
            if abs(f.a(n) - f.a(pe) * f.a(m)) > rel_tol * scale(n):
                raise ValidationError(
                    f"multiplicativity fails at n={n} (= {pe} * {m})")
        elif pe != p:
            r = n // p
            xi_p = 0.0 if f.level % p == 0 else complex(
                f.nebentypus.values[p % f.nebentypus.modulus])
            pred = f.a(p) * f.a(r) - xi_p * p ** (f.weight - 1) * f.a(r // p)
            if abs(f.a(n) - pred) > rel_tol * scale(n):
                raise ValidationError(f"Hecke recursion fails at p={p}, n={n}")
    bad = [(p, m, b) for p, m, b, _ in check_deligne(f) if m > b * (1 + 1e-9)]
    if bad:
        warnings.warn(
            f"Deligne bound violated at p={bad[0][0]} "
            f"(|a(p)|={bad[0][1]:.6g} > {bad[0][2]:.6g}); "
            "tail bounds downstream will refuse this form",
            stacklevel=2)


# ----------------------------------------------------------------------
# file format
# ----------------------------------------------------------------------

def save_newform(f: Newform, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# lfunlab newform file\n")
        fh.write(f"{f.weight} {f.level} {float(f.root_number.real)!r} "
                 f"{float(f.root_number.imag)!r} {f.n_max} {f.label}\n")
        chi_vals = " ".join(
            f"{float(v.real)!r},{float(v.imag)!r}"
            for v in f.nebentypus.values[:max(f.level, 1)])
        fh.write(f"chi {chi_vals}\n")
        for n in range(1, f.n_max + 1):
            v = f.a(n)
            fh.write(f"{n} {float(v.real)!r} {float(v.imag)!r}\n")


def load_newform(path) -> Newform:
    """Parse and fully validate a newform file (see save_newform for the
    line layout); parse errors carry the offending line number."""
    header = None
    chi = None
    rows = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                if header is None:
                    parts = line.split()
                    k, N = int(parts[0]), int(parts[1])
                    eps = complex(float(parts[2]), float(parts[3]))
                    n_max = int(parts[4])
                    label = parts[5] if len(parts) > 5 else ""
                    header = (k, N, eps, n_max, label)
                elif chi is None:
                    parts = line.split()
                    if parts[0] != "chi":
                        raise ValueError("expected 'chi' line")
                    vals = []
                    for tok in parts[1:]:
                        re, im = tok.split(",")
                        vals.append(complex(float(re), float(im)))
                    q = max(header[1], 1)
                    if len(vals) != q:
                        raise ValueError(f"chi needs {q} values, got {len(vals)}")
                    arr = np.array(vals, dtype=complex)
                    trivial = bool(np.all(np.isclose(arr[np.nonzero(arr)], 1.0)))
                    chi = DirichletCharacter(header[1], arr, is_trivial=trivial,
                                             label=f"chi_mod{header[1]}_file")
                else:
                    n_s, re_s, im_s = line.split()
                    n = int(n_s)
                    if rows and n <= max(rows):
                        raise ValueError("coefficient indices must increase")
                    rows[n] = complex(float(re_s), float(im_s))
            except (ValueError, IndexError) as exc:
                raise ValidationError(f"{path}:{lineno}: parse error: {exc}") from exc
    if header is None or chi is None:
        raise ValidationError(f"{path}: missing header or chi line")
    k, N, eps, n_max, label = header
    coeffs = np.zeros(n_max + 1, dtype=complex)
    for n in range(1, n_max + 1):
        if n not in rows:
            raise ValidationError(f"{path}: missing coefficient a({n})")
        coeffs[n] = rows[n]
    f = Newform(weight=k, level=N, nebentypus=chi, root_number=eps,
                coeffs=coeffs, n_max=n_max, label=label)
    validate_newform(f)
    return f


# ----------------------------------------------------------------------
# dual and twists
# ----------------------------------------------------------------------

def dual(f: Newform) -> Newform:
    """The dual form: conjugated coefficients, nebentypus and root number."""
    exact = None
    if f.exact_coeffs is not None:
        exact = list(f.exact_coeffs)
    return Newform(weight=f.weight, level=f.level,
                   nebentypus=f.nebentypus.conjugate(),
                   root_number=f.root_number.conjugate(),
                   coeffs=np.conj(f.coeffs), n_max=f.n_max,
                   label=f.label + "_bar", exact_coeffs=exact)


def twist_newform(f: Newform, chi: DirichletCharacter) -> Newform:
    """Twist by a primitive character mod a prime q not dividing the level.

    Coefficients a(n) chi(n), weight unchanged, level N q^2, nebentypus
    xi chi^2, root number eps * xi(q) * chi(N) * tau(chi)^2 / q.  The root
    number is a formula, not an article of faith: it is validated
    numerically downstream through the functional equation and the
    Dirichlet-series overlap of the twisted completed L-function.
    """
    q = chi.modulus
    if not is_prime(q):
        raise ValidationError("twisting character must have prime modulus")
    if f.level % q == 0:
        raise ValidationError("twisting prime must not divide the level")
    if chi.is_trivial:
        raise ValidationError("twisting character must be nontrivial")
    new_level = f.level * q * q
    chi_sq = multiply(chi, chi)
    neben = multiply(f.nebentypus, chi_sq, modulus=new_level)
    xi_q = complex(f.nebentypus.values[q % f.nebentypus.modulus])
    eps = f.root_number * xi_q * chi(f.level) * gauss_sum(chi) ** 2 / q
    mask = np.array([chi.values[n % q] for n in range(f.n_max + 1)])
    coeffs = f.coeffs * mask
    exact = None
    if f.exact_coeffs is not None and np.all(np.isreal(chi.values)):
        exact = [int(t) * int(round(mask[n].real))
                 for n, t in enumerate(f.exact_coeffs)]
    return Newform(weight=f.weight, level=new_level, nebentypus=neben,
                   root_number=eps, coeffs=coeffs, n_max=f.n_max,
                   label=f.label + f"_x_{chi.label}", exact_coeffs=exact)

"""Diagonal quadratic forms over Q: local and global representability.

The local decisions run on square-class data (valuations, Legendre symbols,
unit residues mod 8) and are exact; the global decision checks the finitely
many relevant places and returns a per-place trace.  A height-bounded
witness search is provided as an independent cross-validation oracle: a
found tuple proves representability, absence below a bound proves nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import FactorizationLimitExceeded  # re-exported path for callers
from .exact import (
    INFINITE_PLACE,
    Place,
    factor_rational,
    is_prime,
    legendre,
    unit_part,
    unit_residue,
    valuation,
)

__all__ = [
    "DiagonalForm",
    "LocalVerdict",
    "GlobalRepresentation",
    "SelmerReport",
    "hilbert_symbol",
    "locally_represents",
    "represents",
    "relevant_places",
    "witness_search",
    "robinson_phi",
    "selmer_demo",
]

REASON_SIGN = "sign"
REASON_VALUATION = "valuation-parity"
REASON_SYMBOL = "residue-symbol"
REASON_AUTOMATIC = "automatic-n>=5"
REASON_TWO_ADIC = "two-adic-table"
REASON_ZERO = "zero-tuple"


@dataclass(frozen=True)
class DiagonalForm:
    """a1*X1^2 + ... + an*Xn^2 with all ai nonzero rationals."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("form must have at least one coefficient")
        if any(c == 0 for c in coeffs):
            raise ValueError("diagonal form must be nondegenerate (no zero coefficients)")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    @staticmethod
    def parse(text: str) -> "DiagonalForm":
        return DiagonalForm(tuple(Fraction(part.strip()) for part in text.split(",")))

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coefficients)

    def evaluate(self, point: tuple[Fraction, ...]) -> Fraction:
        if len(point) != self.rank:
            raise ValueError("point has wrong arity")
        return sum((c * x * x for c, x in zip(self.coefficients, point)), Fraction(0))


@dataclass(frozen=True)
class LocalVerdict:
    """Audit record of one local representability check."""

    place: Place
    representable: bool
    reason: str

    def to_json(self) -> dict:
        return {"place": str(self.place), "representable": self.representable, "reason": self.reason}


@dataclass(frozen=True)
class GlobalRepresentation:
    representable: bool
    trace: tuple[LocalVerdict, ...]

    def to_json(self) -> dict:
        return {
            "representable": self.representable,
            "trace": [v.to_json() for v in self.trace],
        }


def _eps(residue: int) -> int:
    """(r-1)/2 mod 2 for an odd residue r: 0 for r = 1 mod 4, 1 for r = 3 mod 4."""
    return (residue - 1) // 2 % 2


def _omega(residue: int) -> int:
    """(r^2-1)/8 mod 2 for an odd residue r: 0 for r = +-1 mod 8, 1 for r = +-3."""
    return (residue * residue - 1) // 8 % 2


def hilbert_symbol(a: Fraction | int, b: Fraction | int, v: Place) -> int:
    """+1 iff a*x^2 + b*y^2 = z^2 has a nontrivial solution over the completion at v.

    At the infinite place the symbol is -1 exactly when both arguments are
    negative.  At an odd prime it is determined by the valuation parities
    and the Legendre symbols of the unit parts; at 2 by the classes of the
    unit parts mod 8 via the exponent eps(u)eps(w) + alpha*omega(w) +
    beta*omega(u).
    """
    a = Fraction(a)
    b = Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("hilbert symbol requires nonzero arguments")
    if not v.is_finite:
        return -1 if a < 0 and b < 0 else 1
    p = v.prime
    assert p is not None
    alpha = int(valuation(a, p))
    beta = int(valuation(b, p))
    if p == 2:
        ur = unit_residue(unit_part(a, 2), 2, 8)
        wr = unit_residue(unit_part(b, 2), 2, 8)
        exponent = _eps(ur) * _eps(wr) + alpha * _omega(wr) + beta * _omega(ur)
        return -1 if exponent % 2 else 1
    sign = 1
    if alpha % 2 and beta % 2:
        sign *= legendre(-1, p)
    if beta % 2:
        sign *= legendre(unit_residue(unit_part(a, p), p, p), p)
    if alpha % 2:
        sign *= legendre(unit_residue(unit_part(b, p), p, p), p)
    return sign


def _is_local_square(x: Fraction, p: int) -> tuple[bool, bool]:
    """(is a square in Q_p, decided by valuation parity alone) for nonzero x."""
    v = int(valuation(x, p))
    if v % 2:
        return False, True
    if p == 2:
        return unit_residue(unit_part(x, 2), 2, 8) == 1, False
    return legendre(unit_residue(unit_part(x, p), p, p), p) == 1, False


def _isotropic_at(coeffs: tuple[Fraction, ...], p: int) -> tuple[bool, str]:
    """Isotropy of a nondegenerate diagonal form over Q_p, with a reason tag."""
    n = len(coeffs)
    symbol_tag = REASON_TWO_ADIC if p == 2 else REASON_SYMBOL
    if n == 1:
        return False, REASON_VALUATION
    if n >= 5:
        return True, REASON_AUTOMATIC
    place = Place(p)
    d = math.prod(coeffs, start=Fraction(1))
    if n == 2:
        ok, by_parity = _is_local_square(-d, p)
        return ok, REASON_VALUATION if by_parity else symbol_tag
    eps = 1
    for i in range(n):
        for j in range(i + 1, n):
            eps *= hilbert_symbol(coeffs[i], coeffs[j], place)
    if n == 3:
        return hilbert_symbol(Fraction(-1), -d, place) == eps, symbol_tag
    # n == 4
    d_square, _ = _is_local_square(d, p)
    if not d_square:
        return True, symbol_tag
    return eps == hilbert_symbol(Fraction(-1), Fraction(-1), place), symbol_tag


def locally_represents(q: DiagonalForm, a: Fraction | int, v: Place) -> LocalVerdict:
    """Exact local decision: is ``a`` represented by ``q`` over the completion at v?

    a = 0 is always represented (zero tuple).  For a != 0 at a finite place
    the decision is the isotropy of the rank n+1 form <q, -a>; at the
    infinite place it is sign analysis.
    """
    a = Fraction(a)
    if a == 0:
        return LocalVerdict(v, True, REASON_ZERO)
    if not v.is_finite:
        ok = any(c > 0 for c in q.coefficients) if a > 0 else any(c < 0 for c in q.coefficients)
        return LocalVerdict(v, ok, REASON_SIGN)
    assert v.prime is not None
    ok, reason = _isotropic_at(q.coefficients + (-a,), v.prime)
    return LocalVerdict(v, ok, reason)


def relevant_places(q: DiagonalForm, a: Fraction | int) -> tuple[Place, ...]:
    """{2, inf} plus every prime at which ``a`` or a coefficient has nonzero valuation."""
    primes = {2}
    a = Fraction(a)
    values = list(q.coefficients) + ([a] if a != 0 else [])
    for value in values:
        for prime, _ in factor_rational(value).factors:
            primes.add(prime)
    return tuple(Place(p) for p in sorted(primes)) + (INFINITE_PLACE,)


def represents(q: DiagonalForm, a: Fraction | int) -> GlobalRepresentation:
    """Global representability of ``a`` by ``q`` via the local checks.

    Only the finitely many relevant places are checked; the verdict is the
    conjunction and the full per-place trace is returned.  Factoring the
    inputs can raise FactorizationLimitExceeded.
    """
    a = Fraction(a)
    if a == 0:
        places: tuple[Place, ...] = (Place(2), INFINITE_PLACE)
    else:
        places = relevant_places(q, a)
    trace = tuple(locally_represents(q, a, v) for v in places)
    return GlobalRepresentation(all(t.representable for t in trace), trace)


def _boundary_tuples(m: int, s: int):
    """All (w, u) with w in [1, s], u in [0, s]^m and max(w, *u) == s."""
    if m == 0:
        yield s, ()
        return
    for u in product(range(s + 1), repeat=m):
        yield s, u
    if s >= 2:
        for w in range(1, s):
            for first in range(m):
                for head in product(range(s), repeat=first):
                    for tail in product(range(s + 1), repeat=m - first - 1):
                        yield w, head + (s,) + tail


def witness_search(
    q: DiagonalForm, a: Fraction | int, height_bound: int
) -> tuple[Fraction, ...] | None:
    """Search for a tuple with q(x) = a, numerators and denominator bounded.

    Candidates are x_i = u_i / w over the grid 1 <= w <= height_bound,
    0 <= u_i <= height_bound, enumerated in shells of increasing
    max(w, u_1..u_{n-1}) with the last numerator solved exactly (signs are
    immaterial since only squares occur).  Any returned tuple re-verifies
    exactly; ``None`` only means the grid holds no solution.
    """
    if height_bound < 1:
        raise ValueError("height_bound must be >= 1")
    a = Fraction(a)
    lcm = math.lcm(a.denominator, *(c.denominator for c in q.coefficients))
    ints = [c * lcm for c in q.coefficients]
    assert all(c.denominator == 1 for c in ints)
    coeffs = [c.numerator for c in ints]
    target = a * lcm
    c_num = target.numerator
    last = coeffs[-1]
    m = q.rank - 1
    for s in range(1, height_bound + 1):
        for w, u in _boundary_tuples(m, s):
            rest = c_num * w * w - sum(ci * ui * ui for ci, ui in zip(coeffs, u))
            quotient, remainder = divmod(rest, last)
            if remainder != 0 or quotient < 0:
                continue
            root = math.isqrt(quotient)
            if root * root != quotient or root > height_bound:
                continue
            point = tuple(Fraction(ui, w) for ui in u) + (Fraction(root, w),)
            assert q.evaluate(point) == a
            return point
    return None


def robinson_phi(a: Fraction | int, b: Fraction | int, k: Fraction | int) -> bool:
    """Decide exists x,y,z with 2 + a*b*k^2 + b*z^2 == x^2 + a*y^2 over Q.

    Reduces to representability of 2 + a*b*k^2 by the form <1, a, -b>.
    """
    a = Fraction(a)
    b = Fraction(b)
    k = Fraction(k)
    if a == 0 or b == 0:
        raise ValueError("parameters a, b must be nonzero")
    form = DiagonalForm((Fraction(1), a, -b))
    return represents(form, 2 + a * b * k * k).representable


# --- the cubic local-global counterexample demo -----------------------------

_CUBIC_COEFFS = (3, 4, -5)  # 3x^3 + 4y^3 - 5 = 0


@dataclass(frozen=True)
class SelmerLocalCheck:
    place: str
    solvable: bool
    certificate: str

    def to_json(self) -> dict:
        return {"place": self.place, "solvable": self.solvable, "certificate": self.certificate}


@dataclass(frozen=True)
class SelmerReport:
    local_checks: tuple[SelmerLocalCheck, ...]
    all_local_solvable: bool
    global_witness: tuple[Fraction, Fraction] | None
    height_bound: int
    global_status: str

    def to_json(self) -> dict:
        return {
            "local_checks": [c.to_json() for c in self.local_checks],
            "all_local_solvable": self.all_local_solvable,
            "global_witness": None
            if self.global_witness is None
            else [str(x) for x in self.global_witness],
            "height_bound": self.height_bound,
            "global_status": self.global_status,
        }


def _int_valuation(n: int, p: int) -> float | int:
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _local_cubic_check(p: int, modulus_cap: int = 10**4) -> SelmerLocalCheck:
    """Certified residue search for 3x^3 + 4y^3 = 5 over Q_p.

    Candidates allow denominators via the balanced scalings x -> X/p^e: for
    shift e the integral model is 3X^3 + 4Y^3 - 5p^(3e) = 0.  A root mod p^k
    at which some partial derivative has valuation m with k > 2m lifts to an
    exact root by Newton iteration in that variable, so the certificate is
    sound.
    """
    for shift in (0, 1, 2):
        c0 = -5 * p ** (3 * shift)
        k = 0
        while True:
            k += 1
            mod = p**k
            if mod > modulus_cap and k > 1:
                break
            cubes = [pow(x, 3, mod) for x in range(mod)]
            by_value: dict[int, list[int]] = {}
            for y in range(mod):
                by_value.setdefault(4 * cubes[y] % mod, []).append(y)
            for x in range(mod):
                want = (-c0 - 3 * cubes[x]) % mod
                for y in by_value.get(want, ()):
                    for dv, var in ((9 * x * x, "x"), (12 * y * y, "y")):
                        m = _int_valuation(dv, p)
                        if k > 2 * m:
                            return SelmerLocalCheck(
                                str(p),
                                True,
                                f"root (x,y)=({x},{y}) of 3x^3+4y^3-5*{p}^{3*shift} "
                                f"mod {p}^{k}; d/d{var} has valuation {m}, {k} > {2 * m}: "
                                f"Newton-liftable (denominator shift {shift})",
                            )
    return SelmerLocalCheck(str(p), False, "no certified residue root within search caps")


def _icbrt(n: int) -> int:
    """Exact floor cube root for n >= 0."""
    if n == 0:
        return 0
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    while x * x * x > n:
        x -= 1
    return x


def selmer_demo(place_bound: int, height_bound: int) -> SelmerReport:
    """Check 3x^3 + 4y^3 = 5 locally at inf and every prime <= place_bound,
    then corroborate global insolubility by exhaustive search up to the
    height bound.

    The global verdict is labelled as a classical assertion: the bounded
    search can only corroborate, never decide, insolubility over Q.
    """
    if place_bound < 1 or height_bound < 1:
        raise ValueError("bounds must be >= 1")
    checks = [
        SelmerLocalCheck(
            "inf", True, "odd degree: y = cbrt((5 - 3x^3)/4) is real for every real x"
        )
    ]
    primes = [p for p in range(2, max(place_bound, 2) + 1) if is_prime(p)]
    for p in primes:
        checks.append(_local_cubic_check(p))
    witness = None
    for w in range(1, height_bound + 1):
        rhs_base = 5 * w**3
        for v in range(-height_bound, height_bound + 1):
            t = rhs_base - 4 * v**3
            if t % 3:
                continue
            c = t // 3
            u = _icbrt(abs(c)) * (1 if c >= 0 else -1)
            if u**3 == c and abs(u) <= height_bound:
                witness = (Fraction(u, w), Fraction(v, w))
                break
        if witness:
            break
    status = (
        "classical-assertion, search-corroborated: no rational witness of height <= "
        f"{height_bound}; insolubility over Q is asserted from the literature, not decided here"
        if witness is None
        else "UNEXPECTED witness found; classical insolubility assertion contradicted"
    )
    return SelmerReport(
        tuple(checks),
        all(c.solvable for c in checks),
        witness,
        height_bound,
        status,
    )

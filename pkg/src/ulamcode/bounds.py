"""Closed-form and asymptotic bounds on maximum Ulam-code sizes.

Combinatorial quantities are computed with exact integer or rational
arithmetic; only the asymptotic evaluators work on a log scale in floating
point.  ``BoundReport`` aggregates everything known about one (n, d) pair.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional


@dataclass(frozen=True)
class CodeParams:
    """Code length n and minimum Ulam distance d, with 1 <= d <= n - 1."""

    n: int
    d: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not 1 <= self.d <= self.n - 1:
            raise ValueError(
                f"d must satisfy 1 <= d <= n - 1 = {self.n - 1}, got {self.d}"
            )

    @property
    def delta(self) -> int:
        """d - 1, the ball radius that must stay codeword-free."""
        return self.d - 1


def singleton_upper(params: CodeParams) -> int:
    """Singleton-type upper bound (n - d + 1)!, exact."""
    return math.factorial(params.n - params.d + 1)


def gv_lower(params: CodeParams) -> int:
    """Gilbert-Varshamov-type lower bound: ceil((n-d+1)! / C(n, d-1)), exact.

    This is the raw formula value; aggregation with other known lower bounds
    (e.g. the trivial two-word code) happens in BoundReport assembly.
    """
    num = math.factorial(params.n - params.d + 1)
    den = math.comb(params.n, params.d - 1)
    return -(-num // den)


def nat_entropy(p: float) -> float:
    """Natural-log binary entropy -p ln p - (1-p) ln(1-p), with 0 ln 0 = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"entropy argument must be in [0, 1], got {p}")
    out = 0.0
    if p > 0.0:
        out -= p * math.log(p)
    if p < 1.0:
        out -= (1.0 - p) * math.log(1.0 - p)
    return out


def entropy_lower_log(params: CodeParams) -> float:
    """Log of the entropy-form lower bound on the code size.

    Returns (n - D)(ln(n - D) - 1) - n * h(D / n) with D = d - 1; this is
    the exponent, not the exponential.
    """
    n = params.n
    delta = params.delta
    m = n - delta
    return m * (math.log(m) - 1.0) - n * nat_entropy(delta / n)


def asymptotic_lower_log(c: float, n: int) -> float:
    """Log of the constant-c asymptotic lower bound: 2 sqrt(n) c (ln c - 1).

    Intended for the regime d - 1 = n - c sqrt(n) with c constant.
    """
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return 2.0 * math.sqrt(n) * c * (math.log(c) - 1.0)


def rate_function(c: float) -> float:
    """Large-deviation rate I(c) for the LIS exceeding c sqrt(n), c >= 2.

    I(c) = 2c ln(c/2 + sqrt(c^2/4 - 1)) - 2 sqrt(c^2 - 4); I(2) = 0 and I is
    continuous at 2.
    """
    if c < 2.0:
        raise ValueError(f"rate function needs c >= 2, got {c}")
    return 2.0 * c * math.log(c / 2.0 + math.sqrt(c * c / 4.0 - 1.0)) - 2.0 * math.sqrt(
        c * c - 4.0
    )


def rate_function_acosh(c: float) -> float:
    """Equivalent acosh form of rate_function, kept for cross-checking."""
    if c < 2.0:
        raise ValueError(f"rate function needs c >= 2, got {c}")
    return 2.0 * c * math.acosh(c / 2.0) - 2.0 * math.sqrt(c * c - 4.0)


def kim_tail_log(n: int, t: float) -> float:
    """Log of Kim's upper estimate for P(LIS - 2 sqrt(n) >= t n^(1/6)).

    Valid for 0 < t <= n^(1/3) / 20; returns -(4/3) t^(3/2) + phi(t) where
    phi(t) = (t / (27 n^(1/3)) + 5 ln n / (t^(1/2) n^(1/3))) t^(3/2).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cbrt_n = n ** (1.0 / 3.0)
    # Compare cubes (with float-rounding headroom) so exact edges like
    # t = 1 at n = 8000 stay inside.
    if not (t > 0.0 and 8000.0 * t**3 <= n * (1.0 + 1e-12)):
        raise ValueError(
            f"t must lie in (0, n^(1/3)/20] = (0, {cbrt_n / 20.0:.6g}], got {t}"
        )
    phi = (t / (27.0 * cbrt_n) + 5.0 * math.log(n) / (math.sqrt(t) * cbrt_n)) * t**1.5
    return -(4.0 / 3.0) * t**1.5 + phi


def kim_rate_log(c: float, n: int) -> float:
    """APPROXIMATE log-scale lower-bound rate (c-2)^(3/2) (38-c)/27 sqrt(n).

    Only meaningful for c slightly above 2 (c <= 2 + 1/20); derived from
    Kim's tail estimate with constants dropped, so it is a report line, not
    a certified bound.
    """
    if not 2.0 < c <= 2.0 + 1.0 / 20.0:
        raise ValueError(f"c must lie in (2, 2.05], got {c}")
    return (c - 2.0) ** 1.5 * ((38.0 - c) / 27.0) * math.sqrt(n)


def simple_tail_bound(params: CodeParams) -> Fraction:
    """Exact rational upper estimate C(n, D) / (n - D)! for P(LIS >= n - D)."""
    n = params.n
    delta = params.delta
    return Fraction(math.comb(n, delta), math.factorial(n - delta))


def log_of_big(x: int) -> float:
    """Natural log of a positive integer too large for float conversion."""
    if x <= 0:
        raise ValueError("log of non-positive integer")
    shift = max(x.bit_length() - 512, 0)
    return math.log(x >> shift) + shift * math.log(2.0)


@dataclass
class BoundReport:
    """Everything known about A(n, d) for one parameter pair.

    best_lower folds in the trivial two-word code {identity, reversal}
    (valid whenever d <= n - 1); best_upper is the min of the populated
    upper bounds.
    """

    params: CodeParams
    singleton_upper: int
    gv_lower: int
    ip_upper: Optional[int] = None
    sphere_lower: Optional[int] = None
    sphere_upper: Optional[int] = None
    best_lower: int = 0
    best_upper: int = 0
    notes: list[str] = field(default_factory=list)

    def finalize(self) -> "BoundReport":
        lowers = [self.gv_lower, 2]  # {e, reversal} has distance n - 1 >= d
        if self.sphere_lower is not None:
            lowers.append(self.sphere_lower)
        uppers = [self.singleton_upper]
        if self.ip_upper is not None:
            uppers.append(self.ip_upper)
        if self.sphere_upper is not None:
            uppers.append(self.sphere_upper)
        self.best_lower = max(lowers)
        self.best_upper = min(uppers)
        if self.best_lower > self.best_upper:
            raise AssertionError(
                f"bound inversion at {self.params}: {self.best_lower} > {self.best_upper}"
            )
        return self

    def to_dict(self) -> dict:
        return {
            "params": {"n": self.params.n, "d": self.params.d},
            "singleton_upper": self.singleton_upper,
            "gv_lower": self.gv_lower,
            "ip_upper": self.ip_upper,
            "sphere_lower": self.sphere_lower,
            "sphere_upper": self.sphere_upper,
            "best_lower": self.best_lower,
            "best_upper": self.best_upper,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        rows = [
            ("n", self.params.n),
            ("d", self.params.d),
            ("singleton_upper", self.singleton_upper),
            ("gv_lower", self.gv_lower),
            ("ip_upper", "-" if self.ip_upper is None else self.ip_upper),
            ("sphere_lower", "-" if self.sphere_lower is None else self.sphere_lower),
            ("sphere_upper", "-" if self.sphere_upper is None else self.sphere_upper),
            ("best_lower", self.best_lower),
            ("best_upper", self.best_upper),
        ]
        width = max(len(name) for name, _ in rows)
        lines = [f"{name:<{width}}  {value}" for name, value in rows]
        lines += [f"note: {note}" for note in self.notes]
        return "\n".join(lines)


def basic_report(params: CodeParams) -> BoundReport:
    """BoundReport with the closed-form bounds only (no IP, no spheres)."""
    return BoundReport(
        params=params,
        singleton_upper=singleton_upper(params),
        gv_lower=gv_lower(params),
    ).finalize()

"""Log-domain evaluation of the union-bound functional and the constant system.

``g(p, s, r, i) = n * C(n, s) * C(n^2, r) * (p * C(s, i) * p^i)^r`` is
evaluated as a logarithm with real arguments, so the parameter
substitutions (``r = p n^2 / ln n`` and so on) need no rounding.  A grid point
passes when ``ln g + 5 ln n < 0``, which is a finite-``n`` stand-in for
``g = o(n^-5)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

CLAIMS = ("link_small_s", "link_large_s", "heavy_codegree", "rich_divided", "rich_undivided")
DEFAULT_NS = (1e6, 1e9, 1e12)
DEFAULT_C = 1e4
C_GRID = (10.0, 1e2, 1e3, 1e4)
GRID_POINTS = 32
CSV_FIELDS = ("claim_id", "n", "C", "s", "r", "i", "ln_g", "margin", "holds", "flags")

_STIRLING_CUTOFF = 1e6


@dataclass(frozen=True)
class Constants:
    delta: float = 1e-100
    eps1: float = 1 / 3000
    eps2: float = 1 / 400
    eps3: float = 1e-10
    bigC: float = DEFAULT_C

    def __post_init__(self):
        for k in ("delta", "eps1", "eps2", "eps3", "bigC"):
            if not getattr(self, k) > 0:
                raise ValueError(f"{k} must be positive")


def _lgamma_diff(a: float, b: float) -> float:
    """``lgamma(a + 1) - lgamma(a - b + 1)`` for ``0 <= b <= a`` without cancellation.

    ``b`` is passed directly: recovering it as ``a - (a - b)`` would lose
    most of its digits once ``a`` is near ``1e24``.
    """
    y = a - b
    if y < _STIRLING_CUTOFF:
        return math.lgamma(a + 1) - math.lgamma(y + 1)
    # Stirling with two correction terms; the leading difference is rewritten
    # so that nothing of size a*ln(a) is ever subtracted
    lead = (y + 0.5) * math.log1p(b / y) + b * math.log(a) - b
    corr = (1 / (12 * a) - 1 / (360 * a**3)) - (1 / (12 * y) - 1 / (360 * y**3))
    return lead + corr


def ln_binom(a: float, b: float) -> float:
    """Natural log of the binomial coefficient with real arguments ``0 <= b <= a``."""
    if not (a >= 0 and 0 <= b <= a):
        raise ValueError(f"ln_binom domain: need 0 <= b <= a, got a={a!r}, b={b!r}")
    b = min(b, a - b)
    if b == 0:
        return 0.0
    return _lgamma_diff(a, b) - math.lgamma(b + 1)


def ln_binom_upper(a: float, b: float) -> float:
    """``b * ln(e a / b)``, the textbook upper bound on ``ln C(a, b)``."""
    if not (a >= 0 and 0 <= b <= a):
        raise ValueError("ln_binom_upper domain: need 0 <= b <= a")
    return 0.0 if b == 0 else b * (1 + math.log(a / b))


def ln_g(n: float, p: float, s: float, r: float, i: float) -> float:
    """``ln g(p, s, r, i)``.

    For ``i > s`` the factor ``C(s, i)`` is zero and ``g`` vanishes; the
    factor is then replaced by its upper bound ``(e s / i)^i`` so the result
    stays finite and is still an upper bound on ``ln g``.
    """
    if not (0 < p <= 1):
        raise ValueError(f"p must lie in (0, 1], got {p!r}")
    if not (1 <= s <= n):
        raise ValueError(f"need 1 <= s <= n, got s={s!r}, n={n!r}")
    if not (0 <= r <= n * n):
        raise ValueError(f"need 0 <= r <= n^2, got r={r!r}")
    if not i >= 0:
        raise ValueError(f"need i >= 0, got i={i!r}")
    lp = math.log(p)
    head = math.log(n) + ln_binom(n, s) + ln_binom(n * n, r)
    if r == 0:
        return head
    inner = ln_binom(s, i) if i <= s else i * (1 + math.log(s / i))
    return head + r * (lp + inner + i * lp)


def chernoff_c(eps: float) -> float:
    """``min((1 + eps) ln(1 + eps) - eps, eps^2 / 2)``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    if eps < 1e-2:
        # alternating series sum_{k>=2} (-1)^k eps^k / (k (k - 1))
        first = sum((-1) ** k * eps**k / (k * (k - 1)) for k in range(2, 12))
    else:
        first = (1 + eps) * math.log1p(eps) - eps
    return min(first, eps * eps / 2)


# ---------------------------------------------------------------------------
# claims


def claim_p(n: float, bigC: float) -> float:
    return bigC * math.sqrt(math.log(n)) / n


def claim_range(claim_id: str, n: float, consts: Constants) -> tuple[float, float, bool]:
    """``(lo, hi, lo_open)`` for the admissible values of ``s``."""
    rl = math.sqrt(math.log(n))
    if claim_id == "link_small_s":
        return 1.0, consts.eps1 * n / rl, False
    if claim_id == "link_large_s":
        return consts.eps1 * n / rl, consts.eps1 * n, True
    if claim_id == "heavy_codegree":
        return 1.0, float(n), False
    if claim_id == "rich_divided":
        return 1.0, consts.eps3 * n / rl, False
    if claim_id == "rich_undivided":
        return 1.0, consts.eps3 * n, False
    raise ValueError(f"unknown claim {claim_id!r}")


def claim_params(claim_id: str, n: float, p: float, s: float, consts: Constants) -> tuple[float, float]:
    """``(r, i)`` substituted for a given ``s``."""
    ln_n = math.log(n)
    rl = math.sqrt(ln_n)
    if claim_id == "link_small_s":
        return p * n * s / rl, p * n * math.log(ln_n) / (500 * rl)
    if claim_id == "link_large_s":
        return p * n * s / 500, 3 * consts.eps1 * p * n
    if claim_id == "heavy_codegree":
        return p * n * n / ln_n, 3 * p * n
    if claim_id == "rich_divided":
        return consts.eps2 * p * n * n / 2, 3 * consts.eps3 * p * n / rl
    if claim_id == "rich_undivided":
        return consts.eps2 * p * n * n / 2, 3 * consts.eps3 * p * n
    raise ValueError(f"unknown claim {claim_id!r}")


def s_grid(claim_id: str, n: float, consts: Constants, points: int = GRID_POINTS) -> list[float]:
    lo, hi, lo_open = claim_range(claim_id, n, consts)
    if hi < lo or (lo_open and hi == lo):
        return []
    if lo_open:
        lo = float(np.nextafter(lo, math.inf))
    return [float(x) for x in np.geomspace(lo, hi, points)]


@dataclass
class BoundReport:
    claim_id: str
    n: float
    C: float
    p: float
    s: float
    r: float
    i: float
    ln_g: float
    margin: float
    holds: bool
    flags: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def degenerate(self) -> bool:
        return bool(self.flags)

    def row(self) -> dict[str, str]:
        return {
            "claim_id": self.claim_id,
            "n": _fmt(self.n),
            "C": _fmt(self.C),
            "s": _fmt(self.s),
            "r": _fmt(self.r),
            "i": _fmt(self.i),
            "ln_g": _fmt(self.ln_g),
            "margin": _fmt(self.margin),
            "holds": "true" if self.holds else "false",
            "flags": ";".join(self.flags + self.notes),
        }


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return repr(float(x))


def evaluate_point(claim_id: str, n: float, bigC: float, s: float, consts: Constants, extra_flags=()) -> BoundReport:
    p = claim_p(n, bigC)
    r, i = claim_params(claim_id, n, p, s, consts)
    flags = list(extra_flags)
    if p > 1:
        flags.append("p_gt_1")
    if s < 1:
        flags.append("s_lt_1")
    if r < 1:
        flags.append("r_lt_1")
    if i < 1:
        flags.append("i_lt_1")
    notes = ("i_gt_s",) if i > s else ()
    if r > n * n:
        flags.append("r_gt_n2")
    try:
        lg = ln_g(n, p, s, r, i)
    except ValueError:
        lg = math.nan
    margin = lg + 5 * math.log(n)
    return BoundReport(claim_id, n, bigC, p, s, r, i, lg, margin, bool(margin < 0), tuple(flags), notes)


def check_claim(
    claim_id: str,
    n: float,
    bigC: float = DEFAULT_C,
    consts: Constants | None = None,
    s_values: Iterable[float] | None = None,
) -> list[BoundReport]:
    """Margins over ``s_values`` (default: log-spaced over the claim's range).

    Points outside the range, or where a substituted parameter drops below 1
    or leaves the domain of ``ln_g``, are kept but flagged.  An empty range
    yields one flagged point at its lower end.
    """
    consts = consts or Constants(bigC=bigC)
    lo, hi, lo_open = claim_range(claim_id, n, consts)
    if s_values is None:
        grid = s_grid(claim_id, n, consts)
        if not grid:
            return [evaluate_point(claim_id, n, bigC, max(lo, 1.0), consts, ("empty_range",))]
        return [evaluate_point(claim_id, n, bigC, s, consts) for s in grid]
    out = []
    for s in s_values:
        inside = (lo < s if lo_open else lo <= s) and s <= hi
        out.append(evaluate_point(claim_id, n, bigC, s, consts, () if inside else ("out_of_range",)))
    return out


def check_grid(
    ns: Sequence[float] = DEFAULT_NS,
    bigC: float = DEFAULT_C,
    consts: Constants | None = None,
    claims: Sequence[str] = CLAIMS,
) -> list[BoundReport]:
    out = []
    for cid in claims:
        for n in ns:
            out.extend(check_claim(cid, n, bigC, consts))
    return out


def min_passing_c(
    claim_id: str,
    ns: Sequence[float] = DEFAULT_NS,
    consts: Constants | None = None,
    c_grid: Sequence[float] = C_GRID,
) -> float | None:
    """Smallest grid ``C`` at which every non-degenerate point holds, if any."""
    for c in c_grid:
        reps = [r for n in ns for r in check_claim(claim_id, n, c, consts) if not r.degenerate]
        if reps and all(r.holds for r in reps):
            return c
    return None


# ---------------------------------------------------------------------------
# constants


@dataclass
class ConstraintCheck:
    name: str
    lhs: float
    rhs: float
    holds: bool


@dataclass
class ConstantsReport:
    consts: Constants
    checks: list[ConstraintCheck] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(c.holds for c in self.checks)


def check_constants(consts: Constants) -> ConstantsReport:
    d, e1, e2, e3 = consts.delta, consts.eps1, consts.eps2, consts.eps3
    rows = [
        ConstraintCheck("inv_72eps1_ge_30", 1 / (72 * e1), 30.0, 1 / (72 * e1) >= 30),
        ConstraintCheck("inv_40eps2_ge_10", (1 / 20) * (1 / (2 * e2)), 10.0, (1 / 20) * (1 / (2 * e2)) >= 10),
        ConstraintCheck("tenth_minus_eps2_ge_twentieth", 0.1 - e2, 1 / 20, 0.1 - e2 >= 1 / 20),
        ConstraintCheck("eps3_between", e3, e1, 100 * d / e1 <= e3 <= e1),
        ConstraintCheck("eps1eps2_over_12eps3_ge_20", (e1 * e2 / 4) / (3 * e3), 20.0, (e1 * e2 / 4) / (3 * e3) >= 20),
    ]
    return ConstantsReport(consts, rows)


# ---------------------------------------------------------------------------
# CSV


def constants_rows(rep: ConstantsReport) -> list[dict[str, str]]:
    return [
        {
            "claim_id": "constants",
            "n": "",
            "C": _fmt(rep.consts.bigC),
            "s": "",
            "r": "",
            "i": "",
            "ln_g": _fmt(c.lhs),
            "margin": "",
            "holds": "true" if c.holds else "false",
            "flags": c.name,
        }
        for c in rep.checks
    ]


def to_csv(reports: Iterable[BoundReport], constants: ConstantsReport | None = None) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    if constants is not None:
        w.writerows(constants_rows(constants))
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()

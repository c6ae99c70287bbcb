"""Upper bounds on the asymptotic norm lim ||n c|| / n from finite norm tables."""

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import BudgetExhausted, NotACycle
from .homology import is_cycle
from .surface import DEFAULT_NODE_BUDGET, thurston_norm

DEFAULT_MAX_N = 4


@dataclass
class NormRow:
    n: int
    value: int
    status: str  # "exact" or "partial"
    certificate: object = None


@dataclass
class NormTable:
    cycle: tuple
    denominator: int
    rows: list = field(default_factory=list)

    @property
    def exact_rows(self):
        return [r for r in self.rows if r.status == "exact"]

    @property
    def best_upper(self):
        """min over exact rows of ||n d c|| / (n d); None without exact rows."""
        vals = [Fraction(r.value, r.n * self.denominator) for r in self.exact_rows]
        return min(vals) if vals else None

    def upper_envelope(self):
        """Running best upper bound after each row (None until an exact row)."""
        out, best = [], None
        for r in self.rows:
            if r.status == "exact":
                v = Fraction(r.value, r.n * self.denominator)
                best = v if best is None else min(best, v)
            out.append(best)
        return out

    @property
    def complete(self):
        return all(r.status == "exact" for r in self.rows)

    def report_lines(self):
        lines = [f"denominator={self.denominator}"]
        lines.extend(f"n={r.n} value={r.value} status={r.status}" for r in self.rows)
        best = self.best_upper
        lines.append(f"best_upper={'none' if best is None else best}")
        return lines


def asymptotic_norm_upper(cx, c, max_n=DEFAULT_MAX_N, budget=DEFAULT_NODE_BUDGET):
    """Tabulate ||n d c|| for n = 1..max_n, d the least denominator of ``c``.

    Rows whose search ran out of ``budget`` are kept with status ``partial``;
    only exact rows enter ``best_upper``.
    """
    c = tuple(Fraction(v) for v in c)
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    if not is_cycle(cx, c):
        raise NotACycle("the chain violates a switching rule")
    d = linalg.lcm_denominator(c)
    table = NormTable(c, d)
    if not any(c):
        table.rows.append(NormRow(1, 0, "exact"))
        return table
    base = [int(v * d) for v in c]
    for n in range(1, max_n + 1):
        cert = thurston_norm(cx, [n * v for v in base], budget=budget)
        status = "exact" if cert.status == "exact" else "partial"
        table.rows.append(NormRow(n, cert.value, status, cert))
    return table


def lipschitz_bound(cx, c):
    """s |c| with s the largest vertex count of a prototile (4 for Wang tiles)."""
    return cx.max_vertices * sum(abs(Fraction(v)) for v in c)


@dataclass
class SubadditivityReport:
    norm1: int
    norm2: int
    norm_sum: int
    exact: bool

    @property
    def slack(self):
        return self.norm1 + self.norm2 - self.norm_sum

    @property
    def holds(self):
        return self.slack >= 0


def subadditivity_check(cx, c1, c2, budget=DEFAULT_NODE_BUDGET):
    """Compare ||c1 + c2|| with ||c1|| + ||c2||."""
    total = [a + b for a, b in zip(c1, c2)]
    certs = [thurston_norm(cx, v, budget=budget) for v in (c1, c2, total)]
    if any(cert.status != "exact" for cert in certs):
        raise BudgetExhausted(
            "a norm in the subadditivity check was not computed exactly",
            partial=SubadditivityReport(*(cert.value for cert in certs), exact=False),
        )
    return SubadditivityReport(*(cert.value for cert in certs), exact=True)

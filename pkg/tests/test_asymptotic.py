from fractions import Fraction

import pytest
from corpus import TWISTED

from wangnorm.asymptotic import (
    NormRow,
    NormTable,
    asymptotic_norm_upper,
    lipschitz_bound,
    subadditivity_check,
)
from wangnorm.errors import BudgetExhausted, NotACycle
from wangnorm.homology import build_ap_complex

HALF = Fraction(1, 2)


def test_mono_table(mono):
    table = asymptotic_norm_upper(build_ap_complex(mono), (1,), max_n=3)
    assert [r.value for r in table.rows] == [0, 0, 0]
    assert table.complete and table.best_upper == 0


def test_checker_table(checker):
    table = asymptotic_norm_upper(build_ap_complex(checker), (HALF, HALF), max_n=2)
    assert table.denominator == 2
    assert table.rows[0].value == 0
    assert table.best_upper == 0


def test_zero_cycle_single_row(checker):
    table = asymptotic_norm_upper(build_ap_complex(checker), (0, 0))
    assert [(r.n, r.value, r.status) for r in table.rows] == [(1, 0, "exact")]


def test_not_a_cycle(checker):
    with pytest.raises(NotACycle):
        asymptotic_norm_upper(build_ap_complex(checker), (1, 0))


def test_bad_max_n(mono):
    with pytest.raises(ValueError):
        asymptotic_norm_upper(build_ap_complex(mono), (1,), max_n=0)


def test_twisted_table_is_subadditive():
    cx = build_ap_complex(TWISTED)
    table = asymptotic_norm_upper(cx, (1, 1, 1), max_n=3)
    values = {r.n: r.value for r in table.exact_rows}
    assert values[1] == 2
    for m in values:
        for n in values:
            if m + n in values:
                assert values[m + n] <= values[m] + values[n]
    env = table.upper_envelope()
    assert all(a >= b for a, b in zip(env, env[1:]))
    assert table.best_upper == min(Fraction(v, n) for n, v in values.items())


def test_partial_rows_do_not_count(mono):
    table = asymptotic_norm_upper(build_ap_complex(mono), (1,), max_n=4, budget=3)
    partial = [r for r in table.rows if r.status == "partial"]
    assert partial and not table.complete
    exact = [Fraction(r.value, r.n) for r in table.exact_rows]
    assert table.best_upper == (min(exact) if exact else None)


def test_table_bookkeeping():
    table = NormTable((Fraction(1, 3),), 3, [NormRow(1, 4, "partial"), NormRow(2, 2, "exact"), NormRow(3, 3, "exact")])
    assert table.upper_envelope() == [None, Fraction(1, 3), Fraction(1, 3)]
    assert table.best_upper == Fraction(1, 3)
    assert table.report_lines()[-1] == "best_upper=1/3"


def test_lipschitz(mono, checker):
    assert lipschitz_bound(build_ap_complex(mono), (1,)) == 4
    assert lipschitz_bound(build_ap_complex(checker), (HALF, HALF)) == 4
    assert lipschitz_bound(build_ap_complex(checker), (0, 0)) == 0


def test_norm_below_lipschitz():
    cx = build_ap_complex(TWISTED)
    table = asymptotic_norm_upper(cx, (1, 1, 1), max_n=2)
    for r in table.exact_rows:
        assert r.value <= lipschitz_bound(cx, (r.n, r.n, r.n))


def test_subadditivity_examples(mono, checker):
    rep = subadditivity_check(build_ap_complex(mono), (1,), (1,))
    assert (rep.norm1, rep.norm2, rep.norm_sum, rep.slack) == (0, 0, 0, 0) and rep.holds
    rep = subadditivity_check(build_ap_complex(checker), (1, 1), (1, 1))
    assert rep.holds
    cx = build_ap_complex(TWISTED)
    rep = subadditivity_check(cx, (0, 0, 0), (1, 1, 1))
    assert rep.slack == 0
    rep = subadditivity_check(cx, (1, 1, 1), (1, 1, 1))
    assert rep.holds and rep.norm_sum <= 4


def test_subadditivity_needs_exact_norms(mono):
    with pytest.raises(BudgetExhausted) as info:
        subadditivity_check(build_ap_complex(mono), (3,), (3,), budget=2)
    assert info.value.partial is not None and not info.value.partial.exact

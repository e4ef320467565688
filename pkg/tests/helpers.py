"""Shared fixture builders for the test suite."""

from fractions import Fraction

from probid.enumeration import HypothesisList
from probid.hypotheses import (
    MarkovChain,
    constant_run_measure,
    make_finite_pmf,
    make_iid_measure,
    make_mu_k,
)

F = Fraction


def separated_pmf(i):
    """Member i (1..10) of a 4-symbol family with pairwise L-inf gap >= 1/20.

    p_i(0) walks (2+i)/20 so adjacent members differ by exactly 1/20 on
    symbol 0; the remaining mass is split 2:2:1 over symbols 1, 2, 3.
    """
    p0 = F(2 + i, 20)
    rest = 1 - p0
    return make_finite_pmf(
        [(0, p0), (1, rest * F(2, 5)), (2, rest * F(2, 5)), (3, rest * F(1, 5))]
    )


def separated_pmf_list():
    return HypothesisList("pmf", [separated_pmf(i) for i in range(1, 11)])


def chain_a():
    return MarkovChain((0, 1), [[F(1, 2), F(1, 2)], [F(1, 4), F(3, 4)]])


def chain_b():
    # stationary (1/2, 1/2): differs from chain_a's (1/3, 2/3) by 1/6 > 1/10
    return MarkovChain((0, 1), [[F(3, 4), F(1, 4)], [F(1, 4), F(3, 4)]])


def chain_3state():
    half, quarter = F(1, 2), F(1, 4)
    rows = [
        [half, quarter, quarter],
        [quarter, half, quarter],
        [quarter, quarter, half],
    ]
    return MarkovChain((0, 1, 2), rows)


def uniform_ab_pmf():
    return make_finite_pmf([("a", F(1, 2)), ("b", F(1, 2))])


def uniform_ab_measure():
    return make_iid_measure(uniform_ab_pmf())


def all_a_measure():
    return constant_run_measure(("a", "b"), "a")


def mixed_measure_list():
    """Base list for the alternating-input fixture: one dead end, one fit,
    three decoys over foreign alphabets."""
    return HypothesisList(
        "measure",
        [
            all_a_measure(),
            uniform_ab_measure(),
            make_mu_k(2, 1),
            make_mu_k(3, 1),
            make_mu_k(4, 1),
        ],
    )

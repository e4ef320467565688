"""Identification in the limit of an ergodic chain from a single run.

Each source state is its own i.i.d. subproblem: the transitions out of a
state visited v times are v draws from that row, so rows with enough visits
(v*v >= n) are held to the frequency band sqrt(ln v / v).  A second clause
checks the visit frequencies against the candidate's exact stationary
distribution at the full-run threshold; it separates chains that agree on
the visited rows but weight them differently.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadStart
from .exactnum import BELOW, cmp_against_bracket, tau
from .hypotheses import MarkovChain
from .iid_identify import trace_from_checkpoints
from .sampling import Rng, _Inversion


@dataclass(frozen=True)
class TransitionCounts:
    """Visit and transition counts of a run prefix of length n."""

    n: int
    visits: dict
    trans: dict  # (state, state) -> count

    def row_total(self, state):
        return sum(c for (i, _), c in self.trans.items() if i == state)


def empirical(run):
    """Count visits and transitions in a state sequence."""
    visits = {}
    trans = {}
    prev = None
    for s in run:
        visits[s] = visits.get(s, 0) + 1
        if prev is not None:
            trans[(prev, s)] = trans.get((prev, s), 0) + 1
        prev = s
    return TransitionCounts(len(run), visits, trans)


def stationary(rows):
    """Exact stationary distribution of a row-stochastic rational matrix.

    Solves pi Q = pi with sum pi = 1 by rational Gaussian elimination;
    raises NotErgodic if the matrix is reducible or periodic.  States are
    taken to be 0..len(rows)-1.
    """
    chain = MarkovChain(range(len(rows)), rows)
    return chain.pi


def ergodic_mean(chain):
    """Exact long-run state average sum_x pi_x * x."""
    return sum(
        (chain.pi[i] * Fraction(s) for i, s in enumerate(chain.states)),
        Fraction(0),
    )


def _rows_pass(chain, counts):
    n = counts.n
    row_totals = {}
    for (i, j), c in counts.trans.items():
        row_totals[i] = row_totals.get(i, 0) + c
    for state, v in counts.visits.items():
        if not chain.has_state(state):
            return False
        if v * v < n:
            continue
        total = row_totals.get(state, 0)
        if total == 0:
            continue  # gated state with no outgoing data (run endpoint)
        bracket = tau(total)
        for succ, q in chain.row(state):
            observed = Fraction(counts.trans.get((state, succ), 0), total)
            if cmp_against_bracket(abs(q - observed), bracket) is not BELOW:
                return False
    return True


def _stationary_pass(chain, counts):
    n = counts.n
    if n == 0:
        return False
    bracket = tau(n)
    for state in chain.states:
        freq = Fraction(counts.visits.get(state, 0), n)
        if cmp_against_bracket(abs(chain.stationary_mass(state) - freq), bracket) is not BELOW:
            return False
    return True


def chain_candidate_test(chain, counts):
    """True iff both the per-row and the stationary clauses hold."""
    if counts.n < 1:
        return False
    if any(not chain.has_state(s) for s in counts.visits):
        return False
    return _rows_pass(chain, counts) and _stationary_pass(chain, counts)


def identify_chain(hyp_list, run, n):
    """Least index passing on the length-n run prefix, None if none does."""
    counts = empirical(run[:n])
    for i in range(1, hyp_list.scan_bound(n) + 1):
        if chain_candidate_test(hyp_list.get(i), counts):
            return i
    return None


def identify_chain_stream(hyp_list, source, x0, seed, n_max, stride=100):
    """Run the source chain once and identify at every stride checkpoint."""
    if not source.has_state(x0):
        raise BadStart("start state %r not in chain" % (x0,))
    samplers = {s: _Inversion(source.row(s)) for s in source.states}
    rng = Rng(seed)
    visits = {}
    trans = {}
    state = x0
    checkpoints = []
    next_checkpoint = stride
    prev = None
    for n in range(1, n_max + 1):
        state = samplers[state].pick(rng.next53())
        visits[state] = visits.get(state, 0) + 1
        if prev is not None:
            trans[(prev, state)] = trans.get((prev, state), 0) + 1
        prev = state
        if n == next_checkpoint:
            counts = TransitionCounts(n, dict(visits), dict(trans))
            guess = None
            for i in range(1, hyp_list.scan_bound(n) + 1):
                if chain_candidate_test(hyp_list.get(i), counts):
                    guess = i
                    break
            checkpoints.append((n, guess))
            next_checkpoint += stride
    return trace_from_checkpoints(checkpoints)

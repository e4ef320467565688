"""Identification in the limit of a pmf from i.i.d. draws.

At sample size n, candidate q passes when every symbol in the cutoff set
L = {observed symbols} union {shortest support prefix of q with tail mass
below 1/sqrt(n)} satisfies |q(a) - freq(a)| < sqrt(ln n / n), with the
strict comparison decided against the exact bracket of the threshold.  A
value landing inside the bracket counts as a failure: admitting a candidate
late is harmless for limit identification, admitting it wrongly is not.
The emitted guess is the least passing index not exceeding min(n, length);
when no index passes the step reports Undecided (None).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactnum import BELOW, cmp_against_bracket, tau
from .sampling import Rng, _pmf_sampler


@dataclass(frozen=True)
class CutoffSet:
    """Symbols a candidate is tested on at a given sample size."""

    observed: frozenset
    support_prefix: tuple

    @property
    def symbols(self):
        return self.observed | set(self.support_prefix)


@dataclass
class GuessTrace:
    """Guesses recorded at increasing checkpoint sizes.

    converged_at is the least recorded n0 such that every guess from n0 on
    is decided and identical; None when the tail has not stabilized.
    """

    checkpoints: list  # [(n, guess-or-None), ...] strictly increasing in n
    converged_at: int | None = None

    @property
    def final_guess(self):
        if not self.checkpoints:
            return None
        return self.checkpoints[-1][1]


def trace_from_checkpoints(checkpoints):
    checkpoints = list(checkpoints)
    converged = None
    if checkpoints and checkpoints[-1][1] is not None:
        final = checkpoints[-1][1]
        converged = checkpoints[-1][0]
        for n, guess in reversed(checkpoints[:-1]):
            if guess != final:
                break
            converged = n
    return GuessTrace(checkpoints, converged)


def observed_support(sample):
    """Symbols with positive count in the sample."""
    return frozenset(a for a, c in sample.counts.items() if c > 0)


@lru_cache(maxsize=None)
def mass_cutoff(pmf, n):
    """Shortest support prefix whose tail mass is below 1/sqrt(n).

    The boundary test is done exactly by squaring: tail < 1/sqrt(n) iff
    tail**2 * n < 1.  Finite supports stop at full size (tail 0); infinite
    supports terminate because prefix masses tend to 1.
    """
    m = 1
    size = pmf.support_size
    while True:
        tail = 1 - pmf.prefix_mass(m)
        if tail * tail * n < 1:
            return tuple(pmf.support(j) for j in range(1, m + 1))
        if size is not None and m >= size:  # tail is 0 from here on
            return tuple(pmf.support(j) for j in range(1, size + 1))
        m += 1


def cutoff_set(pmf, sample, n):
    return CutoffSet(observed_support(sample), mass_cutoff(pmf, n))


def _test_frequencies(pmf, freqs, n):
    bracket = tau(n)
    symbols = set(freqs)
    symbols.update(mass_cutoff(pmf, n))
    for a in symbols:
        dev = abs(pmf.mass(a) - freqs.get(a, 0))
        if cmp_against_bracket(dev, bracket) is not BELOW:
            return False
    return True


def _frequencies(counts, n):
    return {a: Fraction(c, n) for a, c in counts.items() if c > 0}


def candidate_test(pmf, sample, n):
    """True iff the candidate's masses sit strictly inside the
    sqrt(ln n / n) band around the observed frequencies on the cutoff set."""
    return _test_frequencies(pmf, _frequencies(sample.counts, n), n)


def identify_step(hyp_list, sample, n):
    """Least passing index at size n, scanning i = 1..min(n, length);
    None (Undecided) when every scanned candidate fails."""
    freqs = _frequencies(sample.counts, n)
    for i in range(1, hyp_list.scan_bound(n) + 1):
        if _test_frequencies(hyp_list.get(i), freqs, n):
            return i
    return None


def identify_stream(hyp_list, target_pmf, seed, n_max, stride=100):
    """Grow one sample from the target and record guesses every `stride`.

    The same prefix is reused across checkpoints (one data sequence per
    run); checkpoint spacing does not affect limit semantics, only how
    often the guess is recorded.
    """
    sampler = _pmf_sampler(target_pmf)
    rng = Rng(seed)
    counts = {}
    checkpoints = []
    next_checkpoint = stride
    for n in range(1, n_max + 1):
        s = sampler.pick(rng.next53())
        counts[s] = counts.get(s, 0) + 1
        if n == next_checkpoint:
            freqs = _frequencies(counts, n)
            guess = None
            for i in range(1, hyp_list.scan_bound(n) + 1):
                if _test_frequencies(hyp_list.get(i), freqs, n):
                    guess = i
                    break
            checkpoints.append((n, guess))
            next_checkpoint += stride
    return trace_from_checkpoints(checkpoints)

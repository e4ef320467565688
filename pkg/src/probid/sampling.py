"""Deterministic seeded sampling of i.i.d. draws, chain runs, and measures.

The generator is SplitMix64, chosen for its trivially portable integer
recurrence: equal seeds give byte-identical streams on every platform.
Symbols are drawn by exact inversion: the 53-bit output z maps to the
dyadic rational u = z/2**53 in [0, 1), and we pick the least symbol whose
exact cumulative mass reaches u.  Ties (u exactly on a boundary) therefore
resolve to the lower index, and because u < 1 the search always terminates,
including on infinite supports where the materialized support prefix is
doubled until it covers u.  Symbols of zero conditional mass are never
selected.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadStart, ZeroMassPrefix

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_U53_DEN = 1 << 53


class Rng:
    """SplitMix64 stream."""

    __slots__ = ("state",)

    def __init__(self, seed):
        self.state = seed & _MASK

    def next64(self):
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next53(self):
        """Numerator of a dyadic uniform z/2**53 in [0, 1)."""
        return self.next64() >> 11


@dataclass(frozen=True)
class SamplePrefix:
    """A drawn prefix x_1..x_n plus its per-symbol occurrence counts."""

    symbols: tuple
    counts: dict

    def __len__(self):
        return len(self.symbols)

    def take(self, n):
        """Sub-prefix of the first n symbols, counts recomputed."""
        head = self.symbols[:n]
        counts = {}
        for s in head:
            counts[s] = counts.get(s, 0) + 1
        return SamplePrefix(head, counts)


def _sample_prefix(symbols):
    counts = {}
    for s in symbols:
        counts[s] = counts.get(s, 0) + 1
    return SamplePrefix(tuple(symbols), counts)


class _Inversion:
    """Inversion sampler over (symbol, exact mass) pairs.

    Thresholds are pre-scaled integers: symbol j is selected for the 53-bit
    draw z iff cum_j >= z/2**53, i.e. num_j << 53 >= z * den_j.  Zero-mass
    entries are skipped so they can never be selected, even at z = 0.
    """

    __slots__ = ("_table",)

    def __init__(self, pairs):
        table = []
        cum = Fraction(0)
        for symbol, mass in pairs:
            if mass == 0:
                continue
            cum += mass
            table.append((cum.numerator << 53, cum.denominator, symbol))
        self._table = table

    def pick(self, z):
        for num_scaled, den, symbol in self._table:
            if num_scaled >= z * den:
                return symbol
        raise AssertionError("total mass below the drawn uniform")


class _InfiniteInversion:
    """Inversion over a canonical support enumeration with prefix masses.

    Materializes the support prefix lazily, doubling its length until the
    exact prefix mass covers the drawn uniform; guaranteed to terminate
    because u < 1 while prefix masses tend to 1.
    """

    def __init__(self, pmf):
        self._pmf = pmf
        self._m = 1
        self._rebuild()

    def _rebuild(self):
        pairs = [
            (self._pmf.support(j), self._pmf.mass(self._pmf.support(j)))
            for j in range(1, self._m + 1)
        ]
        self._inv = _Inversion(pairs)
        covered = self._pmf.prefix_mass(self._m)
        self._cov_num = covered.numerator << 53
        self._cov_den = covered.denominator

    def pick(self, z):
        while self._cov_num < z * self._cov_den:
            self._m *= 2
            self._rebuild()
        return self._inv.pick(z)


def _pmf_sampler(pmf):
    if pmf.support_size is None:
        return _InfiniteInversion(pmf)
    pairs = [(pmf.support(j), pmf.mass(pmf.support(j))) for j in range(1, pmf.support_size + 1)]
    return _Inversion(pairs)


def draw_iid(pmf, seed, n):
    """Draw n i.i.d. symbols from an exact pmf; returns a SamplePrefix."""
    sampler = _pmf_sampler(pmf)
    rng = Rng(seed)
    pick = sampler.pick
    next53 = rng.next53
    symbols = [pick(next53()) for _ in range(n)]
    return _sample_prefix(symbols)


def run_chain(chain, x0, seed, n):
    """Run a chain n steps from x0; returns the state sequence x_1..x_n."""
    if not chain.has_state(x0):
        raise BadStart("start state %r not in chain" % (x0,))
    samplers = {s: _Inversion(chain.row(s)) for s in chain.states}
    rng = Rng(seed)
    next53 = rng.next53
    out = []
    state = x0
    for _ in range(n):
        state = samplers[state].pick(next53())
        out.append(state)
    return tuple(out)


def draw_from_measure(mu, seed, n):
    """Sample a length-n prefix from a measure via exact conditionals.

    Each step inverts the next-symbol distribution mu(xa)/mu(x); raises
    ZeroMassPrefix if the current prefix somehow has measure zero.
    """
    rng = Rng(seed)
    prefix = []
    for _ in range(n):
        conds = mu.conditional(tuple(prefix))
        prefix.append(_Inversion(conds).pick(rng.next53()))
    return _sample_prefix(prefix)

"""Config-driven experiment runner with deterministic CSV persistence.

A config (JSON syntax, rationals written as "num/den" strings) declares a
hypothesis list, the data source, checkpointing, and a seed sweep.  Each
seed becomes one run; runs can execute in parallel, and results are sorted
by run id before writing so the output bytes never depend on scheduling.
Files are written to a temporary name and renamed into place, so a partial
file is never observable at the configured path.

Output files (fixed headers):
  checkpoints.csv  run_id,seed,n,guess,changed   guess 0 encodes Undecided
  summary.csv      run_id,seed,final_guess,converged_at,correct
"""

import csv
import io
import itertools
import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .complexity import ComplexityEstimator
from .enumeration import HypothesisList, InterleavedList
from .errors import ConfigInvalid, EmptyInput, IoError, ProbidError
from .hypotheses import FinitePmf, GeometricPmf, MarkovChain, build_hypothesis
from .iid_identify import identify_stream
from .markov_identify import identify_chain_stream
from .measure_identify import default_estimator, identify_measure_stream
from .predict import black_swan_demo

_MODES = ("iid", "markov", "measure", "demo")
_CHECKPOINT_HEADER = ["run_id", "seed", "n", "guess", "changed"]
_SUMMARY_HEADER = ["run_id", "seed", "final_guess", "converged_at", "correct"]


@dataclass
class ExperimentConfig:
    mode: str
    list_decl: dict | None
    target_index: int | None
    n_max: int
    stride: int
    seeds: list
    estimator: dict = field(default_factory=dict)
    input_sequence: tuple | None = None
    start_state: object = None
    n_switch: int = 5
    output: str | None = None

    @staticmethod
    def from_obj(obj):
        return _parse_config(obj)

    def to_obj(self):
        return {
            "mode": self.mode,
            "list": self.list_decl,
            "target_index": self.target_index,
            "n_max": self.n_max,
            "checkpoint": {"stride": self.stride},
            "seeds": list(self.seeds),
            "estimator": self.estimator,
            "input_sequence": list(self.input_sequence) if self.input_sequence else None,
            "start_state": self.start_state,
            "n_switch": self.n_switch,
            "output": self.output,
        }


@dataclass
class RunRecord:
    run_id: int
    seed: int
    checkpoints: list  # [(n, guess-or-None, changed), ...]
    converged_at: int | None
    final_guess: int | None
    correct: bool | None


@dataclass
class Summary:
    n_runs: int
    fraction_converged: float
    fraction_correct: float | None
    median_converged_at: int | None

    def as_text(self):
        parts = [
            "runs: %d" % self.n_runs,
            "fraction converged: %s" % self.fraction_converged,
            "fraction correct: %s"
            % ("n/a" if self.fraction_correct is None else self.fraction_correct),
            "median converged_at: %s"
            % ("n/a" if self.median_converged_at is None else self.median_converged_at),
        ]
        return "\n".join(parts)


# ---------------------------------------------------------------------------
# Config parsing and validation
# ---------------------------------------------------------------------------


def _need(obj, key, path):
    if key not in obj:
        raise ConfigInvalid(path, "missing")
    return obj[key]


def _positive_int(value, path):
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ConfigInvalid(path, "must be a positive integer")
    return value


def _parse_seeds(obj, path):
    if isinstance(obj, list):
        if not obj or not all(isinstance(s, int) and not isinstance(s, bool) for s in obj):
            raise ConfigInvalid(path, "must be a nonempty list of integers")
        return list(obj)
    if isinstance(obj, dict):
        count = _positive_int(_need(obj, "count", path + ".count"), path + ".count")
        base = obj.get("base", 1)
        if not isinstance(base, int) or isinstance(base, bool):
            raise ConfigInvalid(path + ".base", "must be an integer")
        return [base + i for i in range(count)]
    raise ConfigInvalid(path, "must be a list or {count, base}")


def _parse_config(obj):
    if not isinstance(obj, dict):
        raise ConfigInvalid("", "config must be an object")
    mode = _need(obj, "mode", "mode")
    if mode not in _MODES:
        raise ConfigInvalid("mode", "must be one of %s" % (_MODES,))

    if mode == "demo":
        n_switch = _positive_int(obj.get("n_switch", 5), "n_switch")
        return ExperimentConfig(
            mode=mode,
            list_decl=None,
            target_index=None,
            n_max=1,
            stride=1,
            seeds=[1],
            n_switch=n_switch,
            output=obj.get("output"),
        )

    checkpoint = obj.get("checkpoint", {})
    if not isinstance(checkpoint, dict):
        raise ConfigInvalid("checkpoint", "must be an object")
    stride = _positive_int(checkpoint.get("stride", 100), "checkpoint.stride")
    n_max = _positive_int(_need(obj, "n_max", "n_max"), "n_max")
    if n_max < stride:
        # allowed: produces runs with no checkpoints
        pass
    seeds = _parse_seeds(obj.get("seeds", {"count": 1, "base": 1}), "seeds")

    list_decl = _need(obj, "list", "list")
    specs = _list_specs(list_decl, "list")
    hypotheses = _build_list(mode, specs, "list")

    input_sequence = None
    if obj.get("input_sequence") is not None:
        if mode != "measure":
            raise ConfigInvalid("input_sequence", "only allowed in measure mode")
        raw = obj["input_sequence"]
        if isinstance(raw, str):
            input_sequence = tuple(raw)
        elif isinstance(raw, list):
            input_sequence = tuple(raw)
        else:
            raise ConfigInvalid("input_sequence", "must be a string or list")
        if len(input_sequence) < n_max:
            raise ConfigInvalid("input_sequence", "shorter than n_max")

    if input_sequence is not None:
        target_index = None  # ignored when a fixed input drives the run
    else:
        target_index = _positive_int(
            _need(obj, "target_index", "target_index"), "target_index"
        )
        if target_index > len(specs):
            raise ConfigInvalid("target_index", "outside the declared list")

    start_state = obj.get("start_state")
    if mode == "markov":
        chain = hypotheses.get(target_index)
        if start_state is None:
            start_state = chain.states[0]
        elif not chain.has_state(start_state):
            raise ConfigInvalid("start_state", "not a state of the target chain")

    estimator = obj.get("estimator", {})
    if not isinstance(estimator, dict):
        raise ConfigInvalid("estimator", "must be an object")
    for scheme in estimator.get("schemes", []):
        if scheme not in ("literal", "run", "model"):
            raise ConfigInvalid("estimator.schemes", "unknown scheme %r" % scheme)

    return ExperimentConfig(
        mode=mode,
        list_decl=list_decl,
        target_index=target_index,
        n_max=n_max,
        stride=stride,
        seeds=seeds,
        estimator=estimator,
        input_sequence=input_sequence,
        start_state=start_state,
        output=obj.get("output"),
    )


def _list_specs(decl, path):
    """Expand a list declaration into spec dicts (inline array or grid)."""
    if isinstance(decl, dict) and "items" in decl:
        items = decl["items"]
        if not isinstance(items, list) or not items:
            raise ConfigInvalid(path + ".items", "must be a nonempty array")
        return list(items)
    if isinstance(decl, dict) and "family" in decl and "grid" in decl:
        grid = decl["grid"]
        if not isinstance(grid, dict) or not grid:
            raise ConfigInvalid(path + ".grid", "must be a nonempty object")
        keys = list(grid.keys())
        for k in keys:
            if not isinstance(grid[k], list) or not grid[k]:
                raise ConfigInvalid(path + ".grid." + k, "must be a nonempty array")
        out = []
        for combo in itertools.product(*(grid[k] for k in keys)):
            params = dict(zip(keys, combo))
            out.append({"family": decl["family"], "params": params})
        return out
    raise ConfigInvalid(path, "must declare items or family+grid")


_KIND_TYPES = {
    "iid": (FinitePmf, GeometricPmf),
    "markov": (MarkovChain,),
}


def _build_list(mode, specs, path):
    built = []
    for k, spec in enumerate(specs):
        try:
            hyp = build_hypothesis(spec)
        except ProbidError as exc:
            raise ConfigInvalid("%s[%d]" % (path, k), str(exc))
        built.append(hyp)
    if mode in _KIND_TYPES:
        for k, hyp in enumerate(built):
            if not isinstance(hyp, _KIND_TYPES[mode]):
                raise ConfigInvalid("%s[%d]" % (path, k), "wrong kind for mode")
    else:
        for k, hyp in enumerate(built):
            if not hasattr(hyp, "alphabet"):
                raise ConfigInvalid("%s[%d]" % (path, k), "wrong kind for mode")
    kind = {"iid": "pmf", "markov": "markov", "measure": "measure"}[mode]
    return HypothesisList(kind, built)


# ---------------------------------------------------------------------------
# Extensional equality and the minimal equal index
# ---------------------------------------------------------------------------


def _equal_hypotheses(a, b):
    if hasattr(a, "equal_pmf"):
        return a.equal_pmf(b)
    if hasattr(a, "equal_chain"):
        return a.equal_chain(b)
    # Extensional equality of measures is undecidable; spec-level equality
    # is the decidable stand-in for the shipped families.
    return a.spec == b.spec


def minimal_equal_index(hyp_list, target_index):
    target = hyp_list.get(target_index)
    for i in range(1, target_index + 1):
        if _equal_hypotheses(hyp_list.get(i), target):
            return i
    return target_index


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


def _run_single(cfg, run_id, seed):
    hyp_list = _build_list(cfg.mode, _list_specs(cfg.list_decl, "list"), "list")
    if cfg.mode == "iid":
        trace = identify_stream(
            hyp_list, hyp_list.get(cfg.target_index), seed, cfg.n_max, cfg.stride
        )
        expected = minimal_equal_index(hyp_list, cfg.target_index)
        guess_to_base = lambda g: g
    elif cfg.mode == "markov":
        trace = identify_chain_stream(
            hyp_list,
            hyp_list.get(cfg.target_index),
            cfg.start_state,
            seed,
            cfg.n_max,
            cfg.stride,
        )
        expected = minimal_equal_index(hyp_list, cfg.target_index)
        guess_to_base = lambda g: g
    else:
        estimator = _measure_estimator(cfg, hyp_list)
        source = (
            cfg.input_sequence
            if cfg.input_sequence is not None
            else hyp_list.get(cfg.target_index)
        )
        trace = identify_measure_stream(
            hyp_list, source, seed, cfg.n_max, cfg.stride, estimator
        )
        if cfg.target_index is None:
            expected = None
        else:
            expected = minimal_equal_index(hyp_list, cfg.target_index)
        interleaved = InterleavedList(hyp_list)
        guess_to_base = lambda g: interleaved.decode(g) if g is not None else None

    rows = []
    prev = object()
    for n, guess in trace.checkpoints:
        rows.append((n, guess, 1 if guess != prev else 0))
        prev = guess
    correct = None
    if expected is not None:
        final = trace.final_guess
        correct = final is not None and guess_to_base(final) == expected
    return RunRecord(
        run_id=run_id,
        seed=seed,
        checkpoints=rows,
        converged_at=trace.converged_at,
        final_guess=trace.final_guess,
        correct=correct,
    )


def _measure_estimator(cfg, hyp_list):
    extra = cfg.input_sequence or ()
    est = default_estimator(hyp_list, extra_symbols=extra)
    schemes = tuple(cfg.estimator.get("schemes", est.schemes))
    stage_cap = cfg.estimator.get("stage_cap")
    return ComplexityEstimator(
        alphabet=est.alphabet,
        schemes=schemes,
        model_list=est.model_list if "model" in schemes else (),
        stage_cap=stage_cap,
    )


def _run_single_from_obj(args):
    cfg_obj, run_id, seed = args
    return _run_single(ExperimentConfig.from_obj(cfg_obj), run_id, seed)


def run_experiment(cfg, jobs=1, out_dir=None):
    """Execute one run per seed; returns (records, summary).

    Writes checkpoints.csv and summary.csv into `out_dir` (or cfg.output)
    when a destination is configured; identical configs produce byte
    identical files regardless of `jobs`.
    """
    if isinstance(cfg, dict):
        cfg = ExperimentConfig.from_obj(cfg)
    if cfg.mode == "demo":
        return _run_demo(cfg, out_dir)
    tasks = [(cfg, run_id, seed) for run_id, seed in enumerate(cfg.seeds, start=1)]
    if jobs > 1 and len(tasks) > 1:
        obj = cfg.to_obj()
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(
                pool.map(_run_single_from_obj, [(obj, r, s) for _, r, s in tasks])
            )
    else:
        records = [_run_single(c, r, s) for c, r, s in tasks]
    records.sort(key=lambda rec: rec.run_id)
    summary = summarize(records)
    destination = out_dir or cfg.output
    if destination:
        write_results(records, destination)
    return records, summary


def _run_demo(cfg, out_dir):
    report = black_swan_demo(cfg.n_switch)
    destination = out_dir or cfg.output
    if destination:
        try:
            os.makedirs(destination, exist_ok=True)
            _atomic_write(os.path.join(destination, "black_swan.csv"), report.as_csv())
        except OSError as exc:
            raise IoError(str(exc))
    return report, None


def summarize(records):
    """Deterministic aggregate; medians use the lower-median convention."""
    if not records:
        raise EmptyInput("no records to summarize")
    n = len(records)
    converged = [r.converged_at for r in records if r.converged_at is not None]
    fraction_converged = len(converged) / n
    if all(r.correct is None for r in records):
        fraction_correct = None
    else:
        fraction_correct = sum(1 for r in records if r.correct) / n
    median = sorted(converged)[(len(converged) - 1) // 2] if converged else None
    return Summary(n, fraction_converged, fraction_correct, median)


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------


def _atomic_write(path, text):
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".probid-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _render_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def write_results(records, out_dir):
    try:
        os.makedirs(out_dir, exist_ok=True)
        checkpoint_rows = []
        summary_rows = []
        for rec in records:
            for n, guess, changed in rec.checkpoints:
                checkpoint_rows.append(
                    (rec.run_id, rec.seed, n, 0 if guess is None else guess, changed)
                )
            summary_rows.append(
                (
                    rec.run_id,
                    rec.seed,
                    0 if rec.final_guess is None else rec.final_guess,
                    "" if rec.converged_at is None else rec.converged_at,
                    "" if rec.correct is None else int(rec.correct),
                )
            )
        _atomic_write(
            os.path.join(out_dir, "checkpoints.csv"),
            _render_csv(_CHECKPOINT_HEADER, checkpoint_rows),
        )
        _atomic_write(
            os.path.join(out_dir, "summary.csv"),
            _render_csv(_SUMMARY_HEADER, summary_rows),
        )
    except OSError as exc:
        raise IoError(str(exc))


PLOT_SCRIPT = """# gnuplot script: guess trajectories from the checkpoint log
set datafile separator ","
set key outside
set xlabel "n"
set ylabel "guess (0 = undecided)"
plot "checkpoints.csv" every ::1 using 3:4 with points pointtype 7 title "guesses"
"""


def write_plot_script(out_dir):
    try:
        os.makedirs(out_dir, exist_ok=True)
        _atomic_write(os.path.join(out_dir, "plot.gp"), PLOT_SCRIPT)
    except OSError as exc:
        raise IoError(str(exc))


def load_config_file(path):
    try:
        with open(path, "r") as handle:
            text = handle.read()
    except OSError as exc:
        raise IoError(str(exc))
    try:
        obj = json.loads(text)
    except ValueError as exc:
        raise ConfigInvalid("", "not valid JSON: %s" % exc)
    return ExperimentConfig.from_obj(obj)

"""Suffix-quotient networks.

Given a base acceptor and two suffix words, the built network reads a word x
online and decides a set difference of the two quotient languages, e.g.
"x + longer suffix is accepted but x + shorter suffix is not". It works by
freezing the base's state when a prefix is complete, classifying the frozen
analog value into a partition interval through a bank of half-line detectors,
and looking the (binary state, interval) pair up in a precomputed table of
extrapolated verdicts. The table lookup is a two-level threshold circuit, so
the whole construction stays a network of the same kind with the analog unit
untouched.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import QueryGapError, ValidationError
from .network import Network
from .protocol import Alphabet, RunSession
from .partition import (
    ExtrapolationTable,
    PartitionResult,
    build_partition_refined,
    extrapolation_table,
)

SECOND_MINUS_FIRST = "second_minus_first"
FIRST_MINUS_SECOND = "first_minus_second"
_MODES = (SECOND_MINUS_FIRST, FIRST_MINUS_SECOND)

# the report unit lags each query instant by three steps: detectors and state
# copies fire first, then the row matchers, then any-row, then the report
OUTPUT_DELAY = 3


@dataclass(frozen=True)
class QuotientSpec:
    """What to build: base acceptor, the two suffixes, and the difference direction.

    first probes x + first; second probes x + second + first. Mode
    second_minus_first accepts x exactly when the second probe accepts and the
    first does not; first_minus_second is the reverse difference.

    coverage_len bounds the corpus of words used to find reachable table rows;
    coverage_words adds explicit words (their prefixes are walked too). strict
    tabulates every row instead, which is only sensible for small bases.
    """

    base: Network
    first: str
    second: str
    mode: str
    alphabet: Alphabet | None = None
    coverage_len: int = 12
    coverage_words: tuple[str, ...] = ()
    strict: bool = False

    def __post_init__(self) -> None:
        if self.mode not in _MODES:
            raise ValidationError("mode must be one of %s, got %r" % (_MODES, self.mode))
        if not self.first or not self.second:
            raise ValidationError("both suffix words must be nonempty")
        alpha = self.alphabet or Alphabet.default_for(self.base)
        for word in (self.first, self.second) + tuple(self.coverage_words):
            for ch in word:
                alpha.index(ch)


@dataclass(frozen=True)
class QuotientLayout:
    """Unit index blocks of the built network, for inspection and tests."""

    base_size: int
    detector_lo: int  # half-line detector bank start
    detector_count: int
    state_copy_lo: int  # delayed copies of the base binary units
    row_lo: int  # one unit per accepted table row
    row_count: int
    any_row: int
    report: int
    analog: int


@dataclass(frozen=True)
class QuotientBuild:
    network: Network
    spec: QuotientSpec
    partition: PartitionResult
    first_table: ExtrapolationTable
    second_table: ExtrapolationTable
    truth: Mapping[tuple[tuple[int, ...], int], bool]
    layout: QuotientLayout


def combine_verdicts(mode: str, first: bool, second: bool) -> bool:
    if mode == SECOND_MINUS_FIRST:
        return second and not first
    if mode == FIRST_MINUS_SECOND:
        return first and not second
    raise ValidationError("unknown combination mode %r" % mode)


def quotient_difference_language(
    base: Network,
    first: str,
    second: str,
    mode: str,
    max_len: int,
    alphabet: Alphabet | None = None,
) -> set[str]:
    """Brute-force reference: probe x+first and x+second+first for every x.

    Prefixes share one session each, so the cost is two probe runs per word
    tree node. Probes that break the query gap bound count as rejecting.
    """
    if mode not in _MODES:
        raise ValidationError("mode must be one of %s" % (_MODES,))
    base.require_valid()
    root = RunSession(base, alphabet)
    alpha = root.alphabet
    out: set[str] = set()

    def probe(sess: RunSession, suffix: str, k: int) -> bool:
        p = sess.clone()
        try:
            for ch in suffix:
                p.feed(ch)
            p.feed(alpha.formal_extra)
            p.drain()
        except QueryGapError:
            return False
        return p.verdicts[k]

    stack: list[tuple[RunSession, str]] = [(root, "")]
    while stack:
        sess, word = stack.pop()
        a = probe(sess, first, len(word) + len(first))
        b = probe(sess, second + first, len(word) + len(second) + len(first))
        if combine_verdicts(mode, a, b):
            out.add(word)
        if len(word) < max_len:
            for sym in alpha.symbols:
                child = sess.clone()
                try:
                    child.feed(sym)
                except QueryGapError:
                    continue
                stack.append((child, word + sym))
    return out


def reachable_rows(
    base: Network,
    part: PartitionResult,
    max_len: int,
    alphabet: Alphabet | None = None,
    extra_words: Iterable[str] = (),
) -> set[tuple[tuple[int, ...], int]]:
    """(binary state, interval) pairs the base visits at fire instants.

    Walks the full word tree up to max_len plus the given words, recording the
    state committed just before each symbol lands. These are exactly the rows
    the lookup table can ever be asked about by runs of that length.
    """
    base.require_valid()
    root = RunSession(base, alphabet)
    alpha = root.alphabet
    part_index = part.partition.index_of
    rows: set[tuple[tuple[int, ...], int]] = set()

    def note(sess: RunSession) -> None:
        cfg = sess.last_fire_cfg
        rows.add((cfg.binary, part_index(cfg.analog)))

    stack: list[tuple[RunSession, int]] = [(root, 0)]
    while stack:
        sess, depth = stack.pop()
        for sym in alpha.symbols:
            child = sess.clone()
            try:
                child.feed(sym)
            except QueryGapError:
                continue
            note(child)
            if depth + 1 <= max_len:
                stack.append((child, depth + 1))
    for word in extra_words:
        sess = RunSession(base, alphabet)
        ok = True
        for sym in word:
            try:
                sess.feed(sym)
            except QueryGapError:
                ok = False
                break
            note(sess)
        if ok:
            try:
                sess.feed(alpha.formal_extra)
                note(sess)
            except QueryGapError:
                pass
    return rows


def build_quotient_network(spec: QuotientSpec) -> QuotientBuild:
    """Assemble the quotient acceptor.

    The base runs unchanged inside the result; on top sit, in firing order,
    the half-line detector bank over the analog value, one-step delayed copies
    of the base binary units (so both reach the row matchers aligned), one
    matcher per accepted table row, a unit firing when any matcher does, and
    the report unit. The report therefore shows, with delay 3, the table value
    of the state the base had one step before a query instant, which is the
    state after exactly the consumed prefix.
    """
    base = spec.base.require_valid()
    alphabet = spec.alphabet or Alphabet.default_for(base)
    first_word = spec.first
    second_word = spec.second + spec.first
    horizon = base.delta * (len(second_word) + 1)
    part = build_partition_refined(base, horizon, [first_word, second_word], alphabet)
    t_first = extrapolation_table(base, part, first_word, alphabet)
    t_second = extrapolation_table(base, part, second_word, alphabet)

    if spec.strict:
        keys = set(t_first.rows.keys())
    else:
        keys = reachable_rows(
            base, part, spec.coverage_len, alphabet, extra_words=spec.coverage_words
        )
    truth = {
        key: combine_verdicts(spec.mode, t_first.rows[key], t_second.rows[key])
        for key in keys
    }
    true_rows = sorted(key for key, v in truth.items() if v)

    pairs = part.pairs
    n_pairs = len(pairs)
    s = base.size
    reps = [iv.representative() for iv in part.partition.intervals]
    det_pattern = {
        idx: tuple(1 if pr.contains(rep) else 0 for pr in pairs)
        for idx, rep in enumerate(reps)
    }

    det_lo = s  # the base's old analog slot becomes the first detector
    copy_lo = det_lo + n_pairs
    row_lo = copy_lo + (s - 1)
    any_row = row_lo + len(true_rows)
    report = any_row + 1
    analog = report + 1

    def remap(u: int) -> int:
        return analog if u == s else u

    weights: list[tuple[int, int, Fraction]] = []
    for (j, i), w in base.weights.items():
        weights.append((remap(j), i if i == 0 else remap(i), w))
    for r, pr in enumerate(pairs):
        unit = det_lo + r
        weights.append((unit, 0, Fraction(pr.b) * pr.a))
        weights.append((unit, analog, Fraction(-pr.b)))
    for i in range(1, s):
        unit = copy_lo + (i - 1)
        weights.append((unit, 0, Fraction(-1)))
        weights.append((unit, i, Fraction(1)))
    n_literals = n_pairs + (s - 1)
    for k, (bits, idx) in enumerate(true_rows):
        unit = row_lo + k
        pattern = det_pattern[idx] + bits
        positives = sum(pattern)
        weights.append((unit, 0, Fraction(-positives)))
        for m, bit in enumerate(pattern):
            src = det_lo + m if m < n_pairs else copy_lo + (m - n_pairs)
            weights.append((unit, src, Fraction(1) if bit else Fraction(-(n_literals + 1))))
    weights.append((any_row, 0, Fraction(-1)))
    for k in range(len(true_rows)):
        weights.append((any_row, row_lo + k, Fraction(1)))
    weights.append((report, 0, Fraction(-1)))
    weights.append((report, any_row, Fraction(1)))

    comment = "quotient acceptor over a %d-unit base; detectors %d..%d, state copies %d..%d, rows %d..%d, report %d" % (
        s,
        det_lo,
        det_lo + n_pairs - 1,
        copy_lo,
        copy_lo + s - 2,
        row_lo,
        any_row - 1,
        report,
    )
    net = Network(
        size=analog,
        input_units=base.input_units,
        nxt=base.nxt,
        out=report,
        delta=base.delta,
        output_delay=OUTPUT_DELAY,
        weights={(j, i): w for j, i, w in weights if w != 0},
        init_active=base.init_active,
        init_analog=base.init_analog,
        comment=comment,
    ).require_valid()

    layout = QuotientLayout(
        base_size=s,
        detector_lo=det_lo,
        detector_count=n_pairs,
        state_copy_lo=copy_lo,
        row_lo=row_lo,
        row_count=len(true_rows),
        any_row=any_row,
        report=report,
        analog=analog,
    )
    return QuotientBuild(
        network=net,
        spec=spec,
        partition=part,
        first_table=t_first,
        second_table=t_second,
        truth=truth,
        layout=layout,
    )


def snapshot_schedule(build: QuotientBuild, prefix_len: int) -> str:
    """Describe when the verdict circuitry observes and reports for a prefix.

    Instants are counted in query ordinals: with the k-th query at time tau_k,
    the verdict for the first prefix_len symbols roots at the state one step
    before query prefix_len+1 and reaches the report unit three steps after
    that query instant.
    """
    k = prefix_len + 1
    return (
        "prefix of length %d: state frozen at tau_%d - 1, detectors and copies at tau_%d, "
        "row match at tau_%d + 1, any-row at tau_%d + 2, report at tau_%d + 3"
        % (prefix_len, k, k, k, k, k)
    )

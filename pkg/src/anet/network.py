"""Recurrent threshold networks with one saturated-linear analog unit.

Units are indexed 1..size; index 0 is the formal bias input (always 1) and the
analog unit is always the highest index. Binary units fire by Heaviside
(threshold at zero, closed), the analog unit clips its excitation to [0, 1].
All states and weights are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, TextIO

from .errors import ValidationError
from .rationals import ZERO, ONE, format_rational, parse_rational

Weights = Mapping[tuple[int, int], Fraction]


def heaviside(xi: Fraction) -> int:
    """Binary activation: fires exactly when the excitation is nonnegative."""
    return 1 if xi >= 0 else 0


def saturation(xi: Fraction) -> Fraction:
    """Analog activation: identity clipped to [0, 1]."""
    if xi <= 0:
        return ZERO
    if xi >= 1:
        return ONE
    return xi


@dataclass(frozen=True)
class Configuration:
    """Network state at one instant: binary vector for units 1..size-1, analog value."""

    binary: tuple[int, ...]
    analog: Fraction

    def unit(self, j: int):
        """State of unit j (1-based; the analog unit is the last index)."""
        if j == len(self.binary) + 1:
            return self.analog
        return self.binary[j - 1]


@dataclass(frozen=True)
class Network:
    """Immutable network description.

    weights maps (target, source) to a rational weight; source 0 is the bias.
    input_units are clamped from outside by the run protocol: at a query
    instant they carry the one-hot symbol code, at every other instant zero.
    """

    size: int
    input_units: tuple[int, ...]
    nxt: int
    out: int
    delta: int
    output_delay: int = 0
    weights: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)
    init_active: tuple[int, ...] | None = None
    init_analog: Fraction = ZERO
    comment: str = ""

    @property
    def analog_unit(self) -> int:
        return self.size

    @property
    def n_binary(self) -> int:
        return self.size - 1

    def weight(self, j: int, i: int) -> Fraction:
        return self.weights.get((j, i), ZERO)

    def initial_configuration(self) -> Configuration:
        """All binary units off except nxt (or the explicit init override), analog at init value."""
        active = self.init_active if self.init_active is not None else (self.nxt,)
        bits = [0] * self.n_binary
        for j in active:
            bits[j - 1] = 1
        return Configuration(tuple(bits), self.init_analog)

    # -- stepping ---------------------------------------------------------

    def excitation(self, cfg: Configuration, j: int, inputs: Mapping[int, int] | None = None) -> Fraction:
        """Weighted sum feeding unit j from the given state (bias included).

        inputs, when given, overrides the states of the input units for this
        evaluation; otherwise the states already in cfg are used.
        """
        acc = self.weight(j, 0)
        for (tgt, src), w in self.weights.items():
            if tgt != j or src == 0:
                continue
            if inputs is not None and src in inputs:
                y = inputs[src]
            else:
                y = cfg.unit(src)
            if y:
                acc += w * y
        return acc

    def step(self, cfg: Configuration, inputs_next: Mapping[int, int] | None = None) -> Configuration:
        """One synchronous update of every unit.

        inputs_next gives the clamped states of the input units at the new
        instant (one-hot symbol code at a query instant); input units not
        listed, or all of them when inputs_next is None, are forced to zero.
        """
        plan = self._plan()
        acc: dict[int, object] = {}
        for i in plan.binary_sources:
            if cfg.binary[i - 1]:
                for j, w in plan.out_edges[i]:
                    acc[j] = acc.get(j, 0) + w
        ys = cfg.analog
        if ys != 0:
            for j, w in plan.out_edges[self.size]:
                acc[j] = acc.get(j, 0) + w * ys

        bits = [0] * self.n_binary
        for j in acc.keys() | plan.spontaneous:
            xi = plan.bias[j] + acc.get(j, 0)
            if j == self.size:
                continue
            if xi >= 0:
                bits[j - 1] = 1
        xi_s = plan.bias[self.size] + acc.get(self.size, 0)
        analog = saturation(Fraction(xi_s) if isinstance(xi_s, int) else xi_s)

        for u in self.input_units:
            bits[u - 1] = 0
        if inputs_next:
            for u, v in inputs_next.items():
                if u not in self._input_set():
                    raise ValidationError("unit %d is not an input unit" % u)
                bits[u - 1] = 1 if v else 0
        return Configuration(tuple(bits), analog)

    def step_dense(self, cfg: Configuration, inputs_next: Mapping[int, int] | None = None) -> Configuration:
        """Reference implementation of step: direct excitation of every unit."""
        bits = [0] * self.n_binary
        for j in range(1, self.size):
            bits[j - 1] = heaviside(self.excitation(cfg, j))
        analog = saturation(self.excitation(cfg, self.size))
        for u in self.input_units:
            bits[u - 1] = 0
        if inputs_next:
            for u, v in inputs_next.items():
                if u not in self._input_set():
                    raise ValidationError("unit %d is not an input unit" % u)
                bits[u - 1] = 1 if v else 0
        return Configuration(tuple(bits), analog)

    # -- precomputed stepping plan (cached, derived only from weights) ----

    def _input_set(self) -> frozenset[int]:
        cached = self.__dict__.get("_input_set_cache")
        if cached is None:
            cached = frozenset(self.input_units)
            object.__setattr__(self, "_input_set_cache", cached)
        return cached

    def _plan(self) -> "_StepPlan":
        plan = self.__dict__.get("_plan_cache")
        if plan is None:
            plan = _StepPlan.build(self)
            object.__setattr__(self, "_plan_cache", plan)
        return plan

    # -- validation -------------------------------------------------------

    def violations(self) -> list[str]:
        """Structural problems, empty when the network is well formed."""
        bad: list[str] = []
        s = self.size
        if s < 2:
            bad.append("size must be at least 2 (one binary unit plus the analog unit)")
            return bad
        binary = range(1, s)
        if not self.input_units:
            bad.append("at least one input unit is required")
        seen: set[int] = set()
        for u in self.input_units:
            if u not in binary:
                bad.append("input unit %d is not a binary unit index" % u)
            if u in seen:
                bad.append("duplicate input unit %d" % u)
            seen.add(u)
        for name, u in (("nxt", self.nxt), ("out", self.out)):
            if u not in binary:
                bad.append("%s unit %d is not a binary unit index" % (name, u))
        if self.nxt in seen:
            bad.append("nxt unit may not be an input unit")
        if self.delta < 1:
            bad.append("query gap bound must be at least 1")
        if self.output_delay < 0:
            bad.append("output delay must be nonnegative")
        for (j, i), w in self.weights.items():
            if j not in binary and j != s:
                bad.append("weight target %d out of range" % j)
            if i < 0 or i > s:
                bad.append("weight source %d out of range" % i)
            if not isinstance(w, Fraction):
                bad.append("weight (%d,%d) is not a Fraction" % (j, i))
        if self.init_active is not None:
            for j in self.init_active:
                if j not in binary:
                    bad.append("initial active unit %d is not a binary unit index" % j)
        if self.init_analog < ZERO or self.init_analog > ONE:
            bad.append("initial analog value outside [0,1]")
        return bad

    def require_valid(self) -> "Network":
        bad = self.violations()
        if bad:
            raise ValidationError("invalid network: " + "; ".join(bad))
        return self


@dataclass(frozen=True)
class _StepPlan:
    bias: tuple
    out_edges: Mapping[int, tuple]
    binary_sources: tuple[int, ...]
    spontaneous: frozenset[int]

    @staticmethod
    def build(net: Network) -> "_StepPlan":
        bias: list = [ZERO] * (net.size + 1)
        out: dict[int, list] = {i: [] for i in range(1, net.size + 1)}
        indeg: dict[int, int] = {}
        for (j, i), w in net.weights.items():
            if w == 0:
                continue
            if i == 0:
                bias[j] = w
            else:
                out[i].append((j, w))
                indeg[j] = indeg.get(j, 0) + 1
        # int weights stay int so the hot path avoids Fraction arithmetic
        bias_n = tuple(int(b) if b.denominator == 1 else b for b in bias)
        out_n = {i: tuple((j, int(w) if w.denominator == 1 else w) for j, w in lst) for i, lst in out.items()}
        spont = frozenset(j for j in range(1, net.size + 1) if bias_n[j] >= 0)
        sources = tuple(i for i in range(1, net.size) if out_n[i])
        return _StepPlan(tuple(bias_n), out_n, sources, spont)


# -- wire format ---------------------------------------------------------

FORMAT_MAGIC = "anet v1"


def save_network(net: Network, fp: TextIO) -> None:
    """Serialize in the line-oriented v1 format; weight order is canonical."""
    fp.write(FORMAT_MAGIC + "\n")
    if net.comment:
        for line in net.comment.splitlines():
            fp.write("# %s\n" % line)
    fp.write("size %d\n" % net.size)
    fp.write("analog %d\n" % net.size)
    fp.write("inputs %s\n" % " ".join(str(u) for u in net.input_units))
    fp.write("nxt %d\n" % net.nxt)
    fp.write("out %d\n" % net.out)
    fp.write("delta %d\n" % net.delta)
    fp.write("outdelay %d\n" % net.output_delay)
    if net.init_active is not None:
        fp.write("init %s\n" % " ".join(str(u) for u in net.init_active))
    if net.init_analog != 0:
        fp.write("inita %s\n" % format_rational(net.init_analog))
    for (j, i) in sorted(net.weights):
        w = net.weights[(j, i)]
        if w != 0:
            fp.write("w %d %d %s\n" % (j, i, format_rational(w)))


def save_network_path(net: Network, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        save_network(net, fp)


def network_to_text(net: Network) -> str:
    import io

    buf = io.StringIO()
    save_network(net, buf)
    return buf.getvalue()


def load_network(fp: TextIO) -> Network:
    return network_from_text(fp.read())


def load_network_path(path: str) -> Network:
    with open(path, "r", encoding="utf-8") as fp:
        return load_network(fp)


def network_from_text(text: str) -> Network:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_MAGIC:
        raise ValidationError("not a %r file" % FORMAT_MAGIC)
    fields: dict[str, str] = {}
    weights: dict[tuple[int, int], Fraction] = {}
    comment_lines: list[str] = []
    for raw in lines[1:]:
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comment_lines.append(line[1:].strip())
            continue
        key, _, rest = line.partition(" ")
        if key == "w":
            parts = rest.split()
            if len(parts) != 3:
                raise ValidationError("bad weight line %r" % raw)
            j, i = int(parts[0]), int(parts[1])
            w = parse_rational(parts[2])
            if (j, i) in weights:
                raise ValidationError("duplicate weight (%d,%d)" % (j, i))
            weights[(j, i)] = w
        else:
            if key in fields:
                raise ValidationError("duplicate header line %r" % key)
            fields[key] = rest.strip()
    try:
        size = int(fields["size"])
        analog = int(fields["analog"])
        inputs = tuple(int(x) for x in fields["inputs"].split())
        nxt = int(fields["nxt"])
        out = int(fields["out"])
        delta = int(fields["delta"])
        outdelay = int(fields.get("outdelay", "0"))
    except KeyError as exc:
        raise ValidationError("missing header line %s" % exc) from None
    if analog != size:
        raise ValidationError("analog unit must be the highest index (%d != %d)" % (analog, size))
    init_active = None
    if "init" in fields:
        init_active = tuple(int(x) for x in fields["init"].split())
    init_analog = parse_rational(fields["inita"]) if "inita" in fields else ZERO
    net = Network(
        size=size,
        input_units=inputs,
        nxt=nxt,
        out=out,
        delta=delta,
        output_delay=outdelay,
        weights=weights,
        init_active=init_active,
        init_analog=init_analog,
        comment="\n".join(comment_lines),
    )
    return net.require_valid()


def make_network(
    size: int,
    inputs: Sequence[int],
    nxt: int,
    out: int,
    delta: int,
    weights: Iterable[tuple[int, int, Fraction]],
    output_delay: int = 0,
    init_active: Sequence[int] | None = None,
    init_analog: Fraction = ZERO,
    comment: str = "",
) -> Network:
    """Convenience constructor from (target, source, weight) triples; validates."""
    table: dict[tuple[int, int], Fraction] = {}
    for j, i, w in weights:
        if (j, i) in table:
            raise ValidationError("duplicate weight (%d,%d)" % (j, i))
        if w != 0:
            table[(j, i)] = Fraction(w)
    net = Network(
        size=size,
        input_units=tuple(inputs),
        nxt=nxt,
        out=out,
        delta=delta,
        output_delay=output_delay,
        weights=table,
        init_active=tuple(init_active) if init_active is not None else None,
        init_analog=init_analog,
        comment=comment,
    )
    return net.require_valid()

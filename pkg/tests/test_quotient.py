from fractions import Fraction as F

import pytest

from anet.cutlang import build_cut_acceptor, cut_params
from anet.errors import ValidationError
from anet.mealy import compile_mealy, machine_from_tsv
from anet.network import network_from_text, network_to_text
from anet.protocol import Alphabet, accepts, enumerate_language
from anet.quotient import (
    FIRST_MINUS_SECOND,
    SECOND_MINUS_FIRST,
    QuotientSpec,
    build_quotient_network,
    combine_verdicts,
    quotient_difference_language,
)

PARITY_TSV = "e\t0\te\t-\t1\ne\t1\to\t-\t1\no\t0\to\t-\t0\no\t1\te\t-\t0\n"


@pytest.fixture(scope="module")
def parity_net():
    net, _ = compile_mealy(machine_from_tsv(PARITY_TSV))
    return net


def test_combine_verdicts_truth_table():
    assert combine_verdicts(SECOND_MINUS_FIRST, False, True)
    assert not combine_verdicts(SECOND_MINUS_FIRST, True, True)
    assert not combine_verdicts(SECOND_MINUS_FIRST, False, False)
    assert combine_verdicts(FIRST_MINUS_SECOND, True, False)
    assert not combine_verdicts(FIRST_MINUS_SECOND, True, True)
    with pytest.raises(ValidationError):
        combine_verdicts("union", True, True)


def test_spec_validation(parity_net):
    with pytest.raises(ValidationError):
        QuotientSpec(base=parity_net, first="1", second="1", mode="xor")
    with pytest.raises(ValidationError):
        QuotientSpec(base=parity_net, first="2", second="1", mode=SECOND_MINUS_FIRST)


def test_difference_oracle_parity(parity_net):
    # base accepts even numbers of ones; x+11 accepted and x+1 not is just
    # "x has an even count", the reverse difference is the odd count
    even = quotient_difference_language(parity_net, "1", "1", SECOND_MINUS_FIRST, 5)
    odd = quotient_difference_language(parity_net, "1", "1", FIRST_MINUS_SECOND, 5)
    words = [w for n in range(6) for w in Alphabet.of("01").words(n)]
    assert even == {w for w in words if w.count("1") % 2 == 0}
    assert odd == {w for w in words if w.count("1") % 2 == 1}


@pytest.mark.parametrize("mode", [SECOND_MINUS_FIRST, FIRST_MINUS_SECOND])
def test_built_network_matches_oracle_parity(parity_net, mode):
    spec = QuotientSpec(base=parity_net, first="1", second="1", mode=mode, coverage_len=8)
    build = build_quotient_network(spec)
    assert build.network.output_delay == 3
    got = enumerate_language(build.network, 6)
    want = quotient_difference_language(parity_net, "1", "1", mode, 6)
    assert got == want


def test_built_network_matches_oracle_cut_base():
    base = build_cut_acceptor(cut_params(F(27, 8), F(3, 8)))
    spec = QuotientSpec(
        base=base, first="1", second="0", mode=SECOND_MINUS_FIRST, coverage_len=8
    )
    build = build_quotient_network(spec)
    got = enumerate_language(build.network, 6)
    want = quotient_difference_language(base, "1", "0", SECOND_MINUS_FIRST, 6)
    assert got == want
    assert want  # the combination is not vacuous


def test_empty_difference_is_the_empty_language():
    base = build_cut_acceptor(cut_params(F(27), F(1, 28)))
    spec = QuotientSpec(
        base=base, first="1", second="0", mode=SECOND_MINUS_FIRST, coverage_len=8
    )
    build = build_quotient_network(spec)
    assert enumerate_language(build.network, 6) == set()


def test_strict_mode_agrees_with_reachable_coverage(parity_net):
    loose = build_quotient_network(
        QuotientSpec(
            base=parity_net, first="1", second="1", mode=SECOND_MINUS_FIRST, coverage_len=8
        )
    )
    strict = build_quotient_network(
        QuotientSpec(
            base=parity_net, first="1", second="1", mode=SECOND_MINUS_FIRST, strict=True
        )
    )
    a = enumerate_language(loose.network, 5)
    b = enumerate_language(strict.network, 5)
    assert a == b
    # strict tabulates every (state, interval) row, never fewer than reachable
    assert len(strict.truth) >= len(loose.truth)


def test_quotient_network_round_trips(parity_net):
    build = build_quotient_network(
        QuotientSpec(
            base=parity_net, first="1", second="1", mode=SECOND_MINUS_FIRST, coverage_len=6
        )
    )
    text = network_to_text(build.network)
    assert network_from_text(text) == build.network


def test_quotient_verdict_timing(parity_net):
    # the report unit needs three settling steps after each query instant
    build = build_quotient_network(
        QuotientSpec(
            base=parity_net, first="1", second="1", mode=SECOND_MINUS_FIRST, coverage_len=6
        )
    )
    net = build.network
    assert net.delta == parity_net.delta
    assert net.output_delay == 3
    assert accepts(net, "") == ("" in quotient_difference_language(
        parity_net, "1", "1", SECOND_MINUS_FIRST, 0
    ))

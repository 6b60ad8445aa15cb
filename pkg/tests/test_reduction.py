import dataclasses
from fractions import Fraction as F

import pytest

from anet.errors import ValidationError
from anet.mealy import compile_mealy, machine_from_tsv
from anet.protocol import Alphabet, accepts, enumerate_language, run_online
from anet.reduction import (
    ReductionSpec,
    SINK,
    build_buffer_controller,
    build_reduction,
    load_reduction_spec,
    outer_word,
    pad_words,
    word_scheme,
)

ALL_TSV = "A\t0\tA\t-\t1\nA\t1\tA\t-\t1\n"
PARITY_TSV = "e\t0\te\t-\t1\ne\t1\to\t-\t1\no\t0\to\t-\t0\no\t1\te\t-\t0\n"


def accept_all_net():
    net, _ = compile_mealy(machine_from_tsv(ALL_TSV))
    return net


def parity_full_net():
    net, _ = compile_mealy(machine_from_tsv(PARITY_TSV))
    return net


def test_pad_words_rewrite():
    padded = pad_words(("a", "b", "c", "d", "e"), 2)
    assert padded == ("abb", "bb", "bbcdd", "dd", "dde")


def test_pad_words_rejects_nonpositive_count():
    with pytest.raises(ValidationError):
        pad_words(("a", "b", "c", "d", "e"), 0)


def test_word_scheme():
    words = ("1110", "0110", "1000", "1011", "0001")
    assert word_scheme(words, 1, 1) == "1110" + "0110" + "1000"
    assert word_scheme(words, 2, 3) == "1110" + "0110" * 2 + "1000" + "1011" * 2
    with pytest.raises(ValidationError):
        word_scheme(words, 0, 1)
    with pytest.raises(ValidationError):
        word_scheme(words, 1, 0)


def test_outer_word():
    assert outer_word(2, 3) == "00111"


def test_controller_stream_matches_scheme():
    spec = ReductionSpec(inner=accept_all_net(), words=("0000", "0011", "0101", "0110", "1111"))
    ctrl = build_buffer_controller(spec)
    for m in range(1, 4):
        for n in range(1, 4):
            bits = outer_word(m, n)
            stream = ctrl.stream(bits)
            scheme = word_scheme(spec.words, m, n)
            # the stream runs one emission block past the scheme prefix
            assert stream.startswith(scheme)
            assert ctrl.well_formed(bits)
    assert not ctrl.well_formed("")
    assert not ctrl.well_formed("10")
    assert not ctrl.well_formed("0110")
    assert ctrl.capacity == max(4, 4, 8, 4)


def test_short_words_are_padded_to_timing_minimum():
    spec = ReductionSpec(inner=accept_all_net(), words=("0", "0", "0", "0", "0"))
    build = build_reduction(spec)
    assert all(len(w) >= 4 for w in build.spec.words[:4])
    got = enumerate_language(build.network, 5)
    assert got == {outer_word(m, n) for m in range(1, 5) for n in range(1, 5) if m + n <= 5}


def test_output_delay_must_stay_below_fourth_word():
    slow = dataclasses.replace(accept_all_net(), output_delay=4)
    spec = ReductionSpec(inner=slow, words=("0000", "0000", "0000", "0000", "0000"))
    with pytest.raises(ValidationError):
        build_reduction(spec)


def test_rejects_mismatched_alphabet():
    with pytest.raises(ValidationError):
        build_reduction(
            ReductionSpec(inner=accept_all_net(), words=("ab", "ab", "ab", "ab", "ab"))
        )


@pytest.fixture(scope="module")
def accept_all_build():
    return build_reduction(
        ReductionSpec(inner=accept_all_net(), words=("0000", "0000", "0000", "0000", "0000"))
    )


def test_contract_accept_all(accept_all_build):
    net = accept_all_build.network
    got = enumerate_language(net, 7)
    assert got == {
        outer_word(m, n) for m in range(1, 7) for n in range(1, 7) if m + n <= 7
    }


def test_malformed_words_rejected(accept_all_build):
    net = accept_all_build.network
    for w in ("", "1", "10", "0", "00", "010", "0110", "101", "110"):
        assert not accepts(net, w), "malformed %r must be rejected" % w


def test_contract_depends_on_inner(accept_all_build):
    # parity inner: accepts iff the translated word has an even count of ones
    words = ("1110", "0110", "1000", "1011", "0001")
    inner = parity_full_net()
    build = build_reduction(ReductionSpec(inner=inner, words=words))
    got = enumerate_language(build.network, 7)
    expect = set()
    for m in range(1, 7):
        for n in range(1, 7):
            if m + n <= 7 and accepts(inner, word_scheme(words, m, n)):
                expect.add(outer_word(m, n))
    assert got == expect
    # ones(scheme) = 2m + 3n + 1: membership should depend on n's parity
    assert outer_word(1, 1) in got and outer_word(1, 2) not in got


def _instants(trace):
    return {t: cfg for t, cfg in trace.rows}


def test_queue_discipline_audit(accept_all_build):
    # replay several runs and check the queue invariants instant by instant:
    # pre-sink pops always find exactly one symbol in the head slot, refills
    # only happen with exactly one armed block selector, and occupancy never
    # exceeds the slot bank
    build = accept_all_build
    net, lay = build.network, build.layout
    inner_nxt = build.spec.inner.nxt
    q = lay.n_planes - 1
    sym_cells = [lay.slot[(i, p)] for i in range(lay.n_slots) for p in range(q)]
    head_cells = [lay.slot[(0, p)] for p in range(q)]
    psink = lay.phase[SINK]
    for word in ("0011", "0001", "1", "10", "000111", "011", "0101"):
        rows = _instants(run_online(net, word))
        horizon = max(rows)
        for t in range(1, horizon + 1):
            prev = rows[t - 1]
            if prev.unit(inner_nxt) and not prev.unit(psink):
                head = sum(prev.unit(u) for u in head_cells)
                assert head == 1, "pop from a bad head at t=%d of %r" % (t, word)
            if rows[t].unit(lay.enq_fire):
                armed = [role for role, u in lay.sel.items() if rows[t].unit(u)]
                assert len(armed) == 1, "refill with %s armed at t=%d" % (armed, t)
            occupancy = sum(rows[t].unit(u) for u in sym_cells)
            assert occupancy <= lay.n_slots


def test_layout_shape(accept_all_build):
    lay = accept_all_build.layout
    net = accept_all_build.network
    assert len(lay.slot) == lay.n_slots * lay.n_planes
    assert lay.request == lay.chain[-1]
    assert net.nxt == lay.request
    assert net.out == lay.report
    assert net.input_units == (lay.in_zero, lay.in_one)
    assert lay.analog == net.size


def test_spec_file_round_trip(tmp_path):
    from anet.network import save_network_path

    inner = accept_all_net()
    net_path = tmp_path / "inner.anet"
    save_network_path(inner, str(net_path))
    spec_path = tmp_path / "job.spec"
    spec_path.write_text(
        "# front end job\n"
        "inner = inner.anet\n"
        "v1 = 0000\nv2 = 0000\nv3 = 0000\nv4 = 0000\nv5 = 0000\n"
    )
    spec = load_reduction_spec(str(spec_path))
    assert spec.inner == inner
    assert spec.words == ("0000",) * 5
    build = build_reduction(spec)
    assert enumerate_language(build.network, 4) == {"01", "001", "011", "0011"} | {
        "0001", "0111"
    }


def test_spec_file_missing_keys(tmp_path):
    p = tmp_path / "bad.spec"
    p.write_text("inner = x.anet\nv1 = 0\n")
    with pytest.raises(ValidationError):
        load_reduction_spec(str(p))

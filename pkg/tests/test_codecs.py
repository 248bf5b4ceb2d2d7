import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from logfold import codecs
from logfold.codecs import Mode, NumericColumnEncoding
from logfold.errors import InternalInconsistency, MalformedVarint, NumericOverflow

U64 = st.integers(0, (1 << 64) - 1)
I64 = st.integers(-(1 << 63), (1 << 63) - 1)


def varint_oracle(n):
    # seven bits at a time, low group first, high bit marks continuation
    out = []
    while True:
        b = n & 0x7F
        n >>= 7
        if n:
            out.append(b | 0x80)
        else:
            out.append(b)
            return bytes(out)


@pytest.mark.parametrize("n, raw", [(35, b"\x23"), (0, b"\x00"), (300, b"\xac\x02"), (127, b"\x7f"), (128, b"\x80\x01")])
def test_elastic_known(n, raw):
    assert codecs.elastic_encode(n) == raw
    assert codecs.elastic_decode(raw) == (n, len(raw))


def test_elastic_35_bit_pattern():
    assert codecs.elastic_encode(35)[0] == 0b00100011


def test_elastic_offset():
    buf = b"\xff" + codecs.elastic_encode(300)
    assert codecs.elastic_decode(buf, 1) == (300, 2)


def test_elastic_rejects_negative():
    with pytest.raises(ValueError):
        codecs.elastic_encode(-1)


@pytest.mark.parametrize("buf", [b"", b"\x80", b"\xff\xff"])
def test_elastic_truncated(buf):
    with pytest.raises(MalformedVarint):
        codecs.elastic_decode(buf)


@given(U64)
def test_elastic_matches_oracle(n):
    assert codecs.elastic_encode(n) == varint_oracle(n)
    assert codecs.elastic_decode(varint_oracle(n)) == (n, len(varint_oracle(n)))


@pytest.mark.parametrize("n, z", [(0, 0), (-1, 1), (1, 2), (3, 6), (-3, 5)])
def test_zigzag_known(n, z):
    assert codecs.zigzag(n) == z
    assert codecs.unzigzag(z) == n


@given(I64)
def test_zigzag_inverse(n):
    z = codecs.zigzag(n)
    assert z >= 0
    assert codecs.unzigzag(z) == n


@given(st.lists(I64, max_size=50))
def test_zigzag_array_matches_scalar(xs):
    arr = np.array(xs, dtype=np.int64)
    z = codecs.zigzag_array(arr)
    assert [int(v) for v in z] == [codecs.zigzag(x) for x in xs]
    assert codecs.unzigzag_array(z).tolist() == xs


@given(st.lists(U64, max_size=60))
def test_uvarint_pack(xs):
    buf = codecs.pack_uvarints(np.array(xs, dtype=np.uint64))
    assert buf == b"".join(varint_oracle(x) for x in xs)
    out, end = codecs.unpack_uvarints(buf, 0, len(xs))
    assert [int(v) for v in out] == xs
    assert end == len(buf)


def test_delta_decide_paper_sequence():
    enc = codecs.dynamic_delta_decide([100, 101, 102, 103, 104, 105])
    assert enc.mode is Mode.DELTA
    assert enc.base_value == 100
    # delta mean (100 + 5) / 6 = 17.5 against plain mean 102.5
    assert codecs._mean_abs(codecs.delta_sample([100, 101, 102, 103, 104, 105])) == 17.5


def test_delta_decide_single_value_is_plain():
    assert codecs.dynamic_delta_decide([5]).mode is Mode.PLAIN


def test_delta_decide_random_five_digit_plain():
    rng = random.Random(3)
    col = [rng.randrange(10000, 100000) for _ in range(10)]
    plain = sum(col) / 10
    delta = (col[0] + sum(abs(b - a) for a, b in zip(col, col[1:]))) / 10
    expected = Mode.DELTA if delta < plain else Mode.PLAIN
    assert codecs.dynamic_delta_decide(col).mode is expected


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=40), st.lists(st.integers(0, 10**6), max_size=20))
def test_delta_decide_uses_first_ten_only(head, tail):
    col = (head + [0] * 10)[:10]
    assert codecs.dynamic_delta_decide(col) == codecs.dynamic_delta_decide(col + tail)


def test_delta_stream_paper_sequence():
    enc = NumericColumnEncoding(Mode.DELTA, base_value=100)
    buf = codecs.encode_numeric_column([b"100", b"101", b"102", b"103", b"104", b"105"], enc)
    raw, end = codecs.parse_numeric_stream(buf)
    assert end == len(buf)
    stream = codecs.restore_numeric_stream(raw)
    assert stream.values.tolist() == [100, 101, 102, 103, 104, 105]
    # count 6, mode byte, then zigzag(100) and five zigzag(1)
    assert buf == bytes([6, Mode.DELTA]) + codecs.elastic_encode(200) + bytes([2] * 5)


def test_fixed_width_repads():
    enc = NumericColumnEncoding(Mode.DELTA, fixed_width=2, base_value=7)
    buf = codecs.encode_numeric_column([b"07", b"07", b"07"], enc)
    stream, _ = codecs.read_numeric_stream(buf)
    assert stream.values.tolist() == [7, 7, 7]
    assert codecs.render_numeric(stream) == [b"07", b"07", b"07"]


def test_empty_column():
    buf = codecs.encode_numeric_column([], NumericColumnEncoding())
    assert buf == bytes([0, Mode.PLAIN])
    stream, end = codecs.read_numeric_stream(buf)
    assert len(stream) == 0 and end == 2


def test_overflow_signalled():
    with pytest.raises(NumericOverflow):
        codecs.parse_digits([b"99999999999999999999"])


def test_raw_mode_roundtrip():
    col = [b"99999999999999999999", b"00000000000000000001"]
    enc = NumericColumnEncoding(Mode.RAW, zigzag=False, fixed_width=20)
    stream, _ = codecs.read_numeric_stream(codecs.encode_numeric_column(col, enc))
    assert codecs.render_numeric(stream) == col


digit_cols = st.integers(1, 12).flatmap(
    lambda w: st.lists(st.text("0123456789", min_size=w, max_size=w), min_size=1, max_size=30))


@given(digit_cols, st.sampled_from([Mode.PLAIN, Mode.DELTA]))
def test_numeric_column_roundtrip(col, mode):
    col = [c.encode() for c in col]
    enc = NumericColumnEncoding(mode, fixed_width=len(col[0]))
    stream, _ = codecs.read_numeric_stream(codecs.encode_numeric_column(col, enc))
    out = codecs.render_numeric(stream)
    assert out == col
    assert all(len(v) == len(col[0]) for v in out)


def test_combined_paper_example():
    # minute, second, millisecond; the millisecond wrap makes separate deltas large
    cols = [[b"41", b"41", b"41"], [b"41", b"41", b"42"], [b"536", b"998", b"003"]]
    assert int(b"".join(c[0] for c in cols)) == 4141536
    assert codecs.combined_column_decide(cols) is True
    enc = NumericColumnEncoding(Mode.COMBINED, widths=(2, 2, 3))
    buf = codecs.encode_numeric_column(list(zip(*cols)), enc)
    stream, _ = codecs.read_numeric_stream(buf)
    assert stream.values.tolist() == [4141536, 4141998, 4142003]
    assert codecs.split_combined(stream) == [list(c) for c in cols]


def test_combined_date_concat():
    row = [b"2015", b"07", b"28"]
    assert int(b"".join(row)) == 20150728


def test_combined_rejects_nonuniform():
    assert codecs.combined_column_decide([[b"1", b"22"], [b"33", b"44"]]) is False


def test_combined_rejects_single_row():
    assert codecs.combined_column_decide([[b"12"], [b"34"]]) is False


@given(st.lists(st.tuples(st.integers(0, 99), st.integers(0, 999)), min_size=1, max_size=30),
       st.lists(st.tuples(st.integers(0, 99), st.integers(0, 999)), max_size=10))
def test_combined_decide_first_ten_rows(head, tail):
    def cols(rows):
        return [[b"%02d" % a for a, _ in rows], [b"%03d" % b for _, b in rows]]
    head = (head * 10)[:10]
    assert codecs.combined_column_decide(cols(head)) == codecs.combined_column_decide(cols(head + tail))


@given(st.lists(st.binary(max_size=20), max_size=40))
def test_dictionary_roundtrip(entries):
    buf = codecs.encode_dictionary(entries)
    out, end = codecs.decode_dictionary(buf)
    assert out == entries and end == len(buf)


def test_dictionary_declared_count_bound():
    # claims a million entries in a 4-byte buffer
    buf = codecs.elastic_encode(10**6) + b"\x00"
    with pytest.raises(InternalInconsistency):
        codecs.decode_dictionary(buf)


@given(st.lists(st.integers(0, 1000), max_size=50))
def test_ids_roundtrip(ids):
    bound = max(ids, default=0) + 1
    out = codecs.decode_ids(codecs.encode_ids(ids), len(ids), bound)
    assert out.tolist() == ids


def test_ids_out_of_bound():
    with pytest.raises(InternalInconsistency):
        codecs.decode_ids(codecs.encode_ids([0, 5]), 2, 5)

import io
import tarfile

import pytest
from hypothesis import given, settings, strategies as st

from logfold import compress, decompress, decompress_profile
from logfold.decompressor import _GRP, _NUM, _STR, STEP_NAMES, parse_pattern, parse_template
from logfold.errors import CorruptArchive, LogFoldError
from logfold.model import BACKENDS, TOKEN_STRATEGIES, Config
from logfold.packer import compress_backend, decompress_backend, untar
from logfold.synth import SYSTEMS, generate, numeric_heavy

EDGE_CASES = [
    b"",
    b"\n",
    b"\n\n\n",
    b"no newline",
    b"a\r\nb\r\n",
    b"   \t  \n",
    b"<*> <a> |g0| \\<b> \\\\|g1|\n",
    b"\xff\xfe\x00 1-2 3\n\xc3\xa9t\xc3\xa9 4:5\n",
    b"99999999999999999999999 0000001 007 7\n",
    b"x-99999999999999999999-7 x-1-007\n" * 3,
    b"2015-07-29\n2015-07-29\n2015-07-10\n2015-07-11\n2015-08-01\n2015-09-02\n",
]


@pytest.mark.parametrize("data", EDGE_CASES)
@pytest.mark.parametrize("cfg", [Config(), Config(chunk_lines=2), Config(disable_processor=True),
                                 Config(disable_processor=True, disable_hybrid_encoder=True),
                                 Config(token_strategy="all", backend="gzip")])
def test_edge_roundtrip(data, cfg):
    assert decompress(compress(data, cfg)) == data


@pytest.mark.parametrize("system", SYSTEMS)
def test_samples_roundtrip(system):
    data = generate(system, 400)
    assert decompress(compress(data)) == data


@settings(max_examples=150)
@given(st.binary(max_size=400), st.sampled_from(BACKENDS), st.sampled_from(TOKEN_STRATEGIES), st.integers(1, 50))
def test_fuzz_roundtrip(data, backend, strategy, chunk):
    cfg = Config(backend=backend, token_strategy=strategy, chunk_lines=chunk, backend_level=1)
    assert decompress(compress(data, cfg)) == data


def test_parse_template():
    segs, slots = parse_template(b"a |g2| <b> <*> \\<*>")
    assert segs == [b"a ", b" ", b" ", b" <*>"]
    # (kind, argument): group 2, number of length 2, string
    assert slots == [(_GRP, 2), (_NUM, 2), (_STR, None)]


def test_parse_pattern():
    assert parse_pattern(b"2015-<>-\\<x") == [b"2015-", b"-<x"]


def _rewrite(archive, edit):
    entries = untar(decompress_backend(archive))
    tar = io.BytesIO()
    with tarfile.open(fileobj=tar, mode="w", format=tarfile.USTAR_FORMAT) as t:
        for name, data in entries:
            data = edit(name, data)
            info = tarfile.TarInfo(name)
            info.size = len(data)
            t.addfile(info, io.BytesIO(data))
    return compress_backend(tar.getvalue(), "lzma", 6)


def test_missing_member():
    archive = compress(generate("HDFS", 50))
    entries = untar(decompress_backend(archive))
    tar = io.BytesIO()
    with tarfile.open(fileobj=tar, mode="w", format=tarfile.USTAR_FORMAT) as t:
        for name, data in entries:
            if name.endswith("catalog.bin"):
                continue
            info = tarfile.TarInfo(name)
            info.size = len(data)
            t.addfile(info, io.BytesIO(data))
    with pytest.raises(CorruptArchive):
        decompress(compress_backend(tar.getvalue(), "lzma", 6))


@pytest.mark.parametrize("member", ["tpl_ids.bin", "catalog.bin", "templates.dict", "g1.bin"])
def test_damaged_member_fails_loudly(member):
    archive = compress(generate("Zookeeper", 80))
    edited = []

    def edit(name, data):
        if name.endswith("/" + member):
            edited.append(name)
            return bytes([data[0] ^ 0x7F]) + data[1:]
        return data
    # a flipped byte either breaks a structural check or changes the output;
    # it must never pass silently as the original
    damaged = _rewrite(archive, edit)
    assert edited
    try:
        out = decompress(damaged)
    except LogFoldError:
        return
    assert out != generate("Zookeeper", 80)


@settings(max_examples=60)
@given(st.integers(0, 10**6), st.integers(0, 255))
def test_random_corruption_never_crashes_uncontrolled(pos, val):
    data = generate("Apache", 40)
    archive = compress(data, Config(backend="gzip", backend_level=1))
    raw = bytearray(decompress_backend(archive))
    raw[pos % len(raw)] = val
    try:
        decompress(compress_backend(bytes(raw), "gzip", 1))
    except LogFoldError:
        pass


def test_profile_steps_and_output():
    data = numeric_heavy(3000)
    out, steps, total = decompress_profile(compress(data))
    assert out == data
    assert set(steps) == set(STEP_NAMES) == set(range(1, 9))
    assert sum(steps.values()) <= total + 1e-3


def test_profile_static_corpus_step7_small():
    data = b"server started ok\nall quiet here\n" * 2000
    _, steps, total = decompress_profile(compress(data))
    assert steps[7] < 0.05 * total + 1e-3

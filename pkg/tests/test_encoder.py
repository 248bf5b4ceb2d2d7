import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from logfold import codecs
from logfold.analyzer import DynamicRuleSet, analyze_lines
from logfold.codecs import Mode
from logfold.decompressor import _unparity
from logfold.encoder import (COL_MIXED, COL_NUMERIC, LAYOUT_COMBINED, LAYOUT_COLUMNS, STRING_SLOT,
                             decide_matrix_encoding, encode_dictionaries, encode_matrix,
                             encode_mixed_column, encode_mixed_matrix, encode_unstructured_numbers,
                             escape_static, group_tag, length_tag, render_pattern, render_template,
                             scan_lines, tag_length, tag_name)
from logfold.model import Config, TokenClass, default_config
from logfold.processor import group_by_skeleton


def group(tokens):
    (g,) = group_by_skeleton([((i, 0), t) for i, t in enumerate(tokens)])
    return g


@pytest.mark.parametrize("n, tag", [(1, b"<a>"), (2, b"<b>"), (26, b"<z>"), (27, b"<a1>"), (30, b"<a4>")])
def test_length_tags(n, tag):
    assert length_tag(n) == tag
    assert tag_length(tag) == n


def test_tag_names():
    assert tag_name(b"<b>") == "b"
    assert tag_name(b"<a3>") == "a3"


def test_unstructured_numbers_grouped_by_length():
    toks = [((0, 0), b"5"), ((0, 1), b"35"), ((1, 0), b"07")]
    groups, streams, tags = encode_unstructured_numbers(toks)
    assert {g.tag: g.values for g in groups} == {b"<a>": [b"5"], b"<b>": [b"35", b"07"]}
    assert tags == {(0, 0): b"<a>", (0, 1): b"<b>", (1, 0): b"<b>"}
    stream, _ = codecs.read_numeric_stream(streams[b"<b>"][0])
    assert codecs.render_numeric(stream) == [b"35", b"07"]


def test_no_numbers():
    assert encode_unstructured_numbers([]) == ([], {}, {})


@given(st.lists(st.text("0123456789", min_size=1, max_size=25), max_size=40))
def test_length_groups_restore_lengths(values):
    toks = [((i, 0), v.encode()) for i, v in enumerate(values)]
    groups, streams, _ = encode_unstructured_numbers(toks)
    for g in groups:
        stream, _ = codecs.read_numeric_stream(streams[g.tag][0])
        out = codecs.render_numeric(stream)
        assert out == g.values
        assert all(len(v) == g.length for v in out)


@pytest.mark.parametrize("tok, out", [
    (b"<*>", b"\\<*>"), (b"<b>", b"\\<b>"), (b"|g3|", b"\\|g3|"), (b"\\<a1>", b"\\\\<a1>"),
    (b"<->", b"<->"), (b"plain", b"plain"),
])
def test_escape_static(tok, out):
    assert escape_static(tok) == out


def test_parity_paper_values():
    payload, strings, enc = encode_mixed_column([b"QuorumPeerConfig", b"334", b"345"])
    assert strings == [b"QuorumPeerConfig"]
    stream, _ = codecs.read_numeric_stream(payload)
    assert stream.values.tolist() == [3, 668, 690]


def test_parity_delta_paper_values():
    payload, _, enc = encode_mixed_column([b"334", b"345"])
    assert enc.mode is Mode.DELTA
    raw, _ = codecs.parse_numeric_stream(payload)
    # base 668 then +22, both zigzagged on the wire
    assert codecs.unzigzag_array(raw.zigzagged).tolist() == [668, 22]


def test_parity_string_ids_per_column():
    streams, dictionary = encode_mixed_matrix([[b"x", b"y", b"x"], [b"y", b"1"]])
    assert dictionary == [[b"x", b"y"], [b"y"]]
    s0, _ = codecs.read_numeric_stream(streams[0])
    assert s0.values.tolist() == [3, 5, 3]


mixed_values = st.lists(st.one_of(
    st.integers(0, 10**18).map(lambda n: str(n).encode()),
    st.text("0123456789", min_size=1, max_size=22).map(str.encode),
    st.binary(min_size=1, max_size=6)), min_size=1, max_size=30)


@given(mixed_values)
def test_parity_roundtrip_and_kind(col):
    payload, strings, _ = encode_mixed_column(col)
    stream, _ = codecs.read_numeric_stream(payload)
    for v, code in zip(col, stream.values.tolist()):
        if code % 2 == 0:
            assert v == str(code // 2).encode()
        else:
            assert strings[code // 2 - 1] == v
    assert _unparity(stream.values, strings) == col


def test_plan_combined_timestamp():
    g = group([b"41:41.536", b"41:41.998", b"41:42.003", b"41:42.117"])
    plan = decide_matrix_encoding(g, default_config())
    assert plan.layout == LAYOUT_COMBINED


def test_plan_mixed_when_any_string():
    g = group([b"QuorumPeerConfig@334", b"QuorumPeerMain@345", b"QuorumPeerConfig@360"])
    plan = decide_matrix_encoding(g, default_config())
    assert plan.name == "mixed"
    assert plan.column_kinds == (COL_MIXED, COL_MIXED)


def test_plan_leading_zero_variable_width_goes_mixed():
    g = group([b"a-7-1", b"a-07-2", b"a-12-3"])
    cols = g.matrix.columns
    assert cols[1] == (b"7", b"07", b"12")
    plan = decide_matrix_encoding(group([b"7-1", b"07-2", b"12-3"]), default_config())
    assert plan.layout == LAYOUT_COLUMNS
    assert plan.column_kinds == (COL_MIXED, COL_NUMERIC)


def test_plan_fixed_width_when_leading_zero():
    plan = decide_matrix_encoding(group([b"07-15", b"08-16", b"10-19"]), default_config())
    assert plan.layout == LAYOUT_COLUMNS or plan.layout == LAYOUT_COMBINED
    if plan.layout == LAYOUT_COLUMNS:
        assert plan.widths[0] == 2


def test_plan_dictionary_only_when_encoder_disabled():
    plan = decide_matrix_encoding(group([b"1-2", b"3-4"]), Config(disable_hybrid_encoder=True))
    assert plan.dictionary_only


def test_render_pattern_escapes():
    g = group([b"a<b-1"])
    assert render_pattern(g) == b"<>\\<<>-<>"


def test_dictionaries_dedup():
    tpl, ids, tokens, str_ids, pids = encode_dictionaries([b"x <*>", b"x <*>"], [b"a", b"b", b"a"], [b"p<>"])
    assert tpl == [b"x <*>"] and ids == [0, 0]
    assert tokens == [b"a", b"b", b"p<>"] and str_ids == [0, 1, 0] and pids == [2]


def test_dictionary_size_is_distinct_templates():
    rng = random.Random(5)
    templates = [b"t%d" % rng.randrange(60) for _ in range(1000)]
    tpl, ids, *_ = encode_dictionaries(templates, [], [])
    assert len(tpl) == len(set(templates))
    assert max(ids) < len(tpl)
    assert [tpl[i] for i in ids] == templates


def reference_scan(lines, strategy, dict_only):
    """analyze_lines + group_by_skeleton + render_template, step by step."""
    rules = DynamicRuleSet.from_strategy(strategy)
    classified = analyze_lines(lines, rules)
    structured, numeric, strings = [], [], []
    for i, cl in enumerate(classified):
        for d, (cls, tok) in enumerate(cl.dynamic_tokens):
            if dict_only or cls is TokenClass.UnstructuredString:
                strings.append(tok)
            elif cls is TokenClass.StructuredDynamic:
                structured.append(((i, d), tok))
            else:
                numeric.append(((i, d), tok))
    groups = group_by_skeleton(structured)
    k_of = {}
    for k, g in enumerate(groups):
        for r in g.matrix.row_ids:
            k_of[r] = k
    _, _, tags = encode_unstructured_numbers(numeric)
    templates = []
    for i, cl in enumerate(classified):
        slots = []
        for d, (cls, tok) in enumerate(cl.dynamic_tokens):
            if dict_only or cls is TokenClass.UnstructuredString:
                slots.append(STRING_SLOT)
            elif cls is TokenClass.StructuredDynamic:
                slots.append(group_tag(k_of[(i, d)]))
            else:
                slots.append(tags[(i, d)])
        templates.append(render_template(cl, slots))
    return templates, strings, numeric, groups


log_lines = st.lists(st.lists(st.sampled_from(
    [b"x", b"12", b"007", b"a-1", b"b:2:3", b"/p/q", b"<*>", b"|g0|", b"id9", b"\t", b"  ", b"\xff1"]),
    max_size=8).map(lambda ts: b" ".join(ts)), max_size=12)


@given(log_lines, st.sampled_from(["num", "num_path", "all"]), st.booleans())
def test_scan_matches_reference(lines, strategy, dict_only):
    rules = DynamicRuleSet.from_strategy(strategy)
    assert scan_lines(lines, rules, dict_only) == reference_scan(lines, strategy, dict_only)


def test_encode_matrix_combined_roundtrip():
    g = group([b"41:41.536", b"41:41.998", b"41:42.003"])
    plan = decide_matrix_encoding(g, default_config())
    body, strings, desc = encode_matrix(g, plan)
    assert desc == "C" and strings == []
    stream, _ = codecs.read_numeric_stream(body)
    assert stream.values.tolist() == [4141536, 4141998, 4142003]

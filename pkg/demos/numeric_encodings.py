"""Numeric stream choices: delta, combined columns, parity for mixed columns."""

import numpy as np

from logfold import codecs
from logfold.encoder import encode_mixed_column
from logfold.codecs import Mode, NumericColumnEncoding

print("elastic(35):", codecs.elastic_encode(35).hex(), " elastic(300):", codecs.elastic_encode(300).hex())

vals = [100, 101, 102, 103, 104, 105]
enc = codecs.dynamic_delta_decide(vals)
raw, _ = codecs.parse_numeric_stream(codecs.encode_int_column(np.array(vals), enc))
print(f"{vals} -> {enc.mode.name}: {codecs.unzigzag_array(raw.zigzagged).tolist()}")

# seconds, seconds, milliseconds: the millisecond column wraps, the joined number does not
cols = [[b"41", b"41", b"41"], [b"41", b"41", b"42"], [b"536", b"998", b"003"]]
if codecs.combined_column_decide(cols):
    stream, _ = codecs.read_numeric_stream(codecs.encode_numeric_column(
        list(zip(*cols)), NumericColumnEncoding(Mode.COMBINED, widths=(2, 2, 3))))
    print("combined:", stream.values.tolist())

payload, strings, _ = encode_mixed_column([b"QuorumPeerConfig", b"334", b"345"])
s, _ = codecs.read_numeric_stream(payload)
print("mixed column values:", s.values.tolist(), "strings:", [x.decode() for x in strings])

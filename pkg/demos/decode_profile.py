"""Where decompression time goes, step by step."""

from logfold import compress, decompress_profile
from logfold.cli import profile_report
from logfold.synth import numeric_heavy

data = numeric_heavy()
archive = compress(data)
best = None
for _ in range(3):
    out, steps, total = decompress_profile(archive)
    if best is None or total < best[1]:
        best = (steps, total)
assert out == data
print(f"{len(data) / 1e6:.1f} MB restored in {best[1] * 1e3:.0f} ms")
print(profile_report(*best))

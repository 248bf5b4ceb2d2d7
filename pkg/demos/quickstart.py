"""Compress a small log in memory, look inside the archive, restore it."""

from logfold import compress_result, decompress
from logfold.packer import unpack
from logfold.synth import generate

data = generate("Zookeeper", n_lines=500)
res = compress_result(data)
print(f"{res.original_size} bytes -> {res.compressed_size} bytes, CR {res.ratio:.2f}")

manifest, members = unpack(res.archive)
print(f"backend {manifest.config_snapshot['backend']}, {manifest.chunk_count} chunk(s)")
for name in sorted(members):
    print(f"  {name:<28} {len(members[name]):>7} bytes")

assert decompress(res.archive) == data
print("round trip ok")

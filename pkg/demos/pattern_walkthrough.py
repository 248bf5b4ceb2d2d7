"""How six date tokens become three refined patterns."""

from logfold import processor as P
from logfold.model import default_config

dates = [b"2015-07-29", b"2015-07-29", b"2015-07-10", b"2015-07-11", b"2015-08-01", b"2015-09-02"]
cfg = default_config()

(group,) = P.group_by_skeleton([((i, 0), t) for i, t in enumerate(dates)])
print("skeleton:", group.skeleton.render())
for j, col in enumerate(group.matrix.columns):
    print(f"  C{j + 1}: {[c.decode() for c in col]}")

folded = P.fold_constant_columns(group)
print("after folding constant columns:", folded.refined_pattern())

for j, col in enumerate(folded.matrix.columns):
    st = P.column_stats(col)
    reps = {k.decode(): v for k, v in st.representative_values.items()}
    print(f"  open column {j}: unique={st.unique_count} threshold={st.threshold} "
          f"reps={reps} dominance={st.dominance_ratio:.2f}")

cp = P.select_critical_position(folded.matrix, cfg)
print("critical column:", cp.column_index)

for leaf in P.process([group], cfg):
    rows = [leaf.rebuild(i).decode() for i in range(leaf.n_rows)]
    print(f"  {leaf.refined_pattern():<12} {rows}")

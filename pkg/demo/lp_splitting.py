"""Walk through program E stratum by stratum, then the Even prefix."""
from aftkit import lp, parse_lp
from aftkit.lattice import well_founded
from aftkit.syntax import format_lp

E = parse_lp("""
p :- not q, not r.
q :- not p, not r.
s :- p, q.
""")

split = lp.compute_splitting(E)
for i in split.poset.linearization:
    print(i, split.blocks[i])

# the well-founded model, both ways
for mode in ("monolithic", "split"):
    wf = lp.solve(E, "wf", mode)
    print(mode, sorted(lp.decode(E, wf.lower)), sorted(lp.decode(E, wf.upper)))

# r is false, so the middle stratum loses its dependence on it
r, pq, s = split.poset.linearization
parts = lp.strata_programs(E, split)
print(format_lp(lp.partial_evaluate(parts[pq], split.blocks[pq], (set(), set()))))

# the middle stratum leaves p, q undefined; s inherits that
A = lp.component_approximation(E, split, s, (set(), {"p", "q"}))
print("s stratum:", well_founded(A))

# exact stable models
print([sorted(lp.decode(E, m.lower)) for m in lp.solve(E, "stable", exact_only=True)])

# Even: 41 atoms, one per stratum, total after splitting
P = lp.even_prefix(20)
wf = lp.solve(P, "wf", "split")
print(wf.lower == wf.upper, sorted(lp.decode(P, wf.lower))[:6], "...")

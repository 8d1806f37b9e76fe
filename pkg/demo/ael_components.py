"""Theory F and T: what splitting does to auto-epistemic theories."""
from aftkit import ael, dl, parse_ael, parse_dl
from aftkit.formula import to_text
from aftkit.lattice import kripke_kleene

F = parse_ael("""
p | ~K(p).
K(p | q) | q.
stratum s0: p
stratum s1: q
order s0 < s1
""")
sp = ael.PwsSpace(F.alphabet)
show = lambda q: sp.decode(q)

kk = ael.solve(F, "kk")
print("KK", show(kk.lower), show(kk.upper))

st = ael.AelStrata(F)
print([to_text(f, unicode=True) for f in st.normal_form("s1")])

# context from the lower stratum, then the two component theories on top
low = kripke_kleene(st.component("s0", {}, {}))
con, lib = st.component_theories("s1", {"s0": low[0]}, {"s0": low[1]})
print([to_text(f, unicode=True) for f in con], [to_text(f, unicode=True) for f in lib])

for p in ael.solve(F, "partial_expansions", "split"):
    print("partial expansion", show(p[0]), show(p[1]))

# T is not permaconsistent: the stratified KK pair is a different one
T = parse_ael("""
p => K(p).
~K(p | q).
stratum s0: p
stratum s1: q
order s0 < s1
""")
print(ael.is_permaconsistent(T), ael.solve(T, "kk"))
st = ael.AelStrata(T)
print(st.kappa_bar(kripke_kleene(st.tilde_dt())))
try:
    ael.solve(T, "kk", "split")
except ael.SemanticRefusal as e:
    print("refused:", e)

# murder suspect via the Konolige transformation, W = {motive}
D = parse_dl("""
motive : suspect & guilty / suspect.
axiom motive.
stratum s0: guilty motive
stratum s1: suspect
order s0 < s1
""")
print(to_text(dl.konolige(D.defaults[0])))
dsp = ael.PwsSpace(D.alphabet)
print([dsp.decode(q) for q in dl.semantics(D, "extensions", "split")])

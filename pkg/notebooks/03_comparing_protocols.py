"""
Comparing two protocols
=======================

P1 asks for temperature then pulse. P2 asks for the Aingeru-specific
versions of both, pulse first. They differ in order and in vocabulary, yet
one is a shallow specialization of the other.
"""

# %%
from commont import compare, default_ontology, example_protocol, trace_set

ont = default_ontology()
p1 = example_protocol("p1", ont)
p2 = example_protocol("p2", ont)
for p in (p1, p2):
    (trace,) = trace_set(p, ont)
    print(f"{p.name}: {trace}")

# %%
# The verdict lists all eight relations. Failing ones carry a witness.
verdict = compare(p1, p2, ont)
print(verdict.table())

# %%
# The matching behind the shallow result pairs each specific effect with a
# distinct, more general one.
for specific, general in verdict.matchings["shallow-specialized-equivalent"][0].pairs:
    print(f"{specific}  ->  {general}")

# %%
# Positionwise comparison fails because the order differs.
from commont import shallow_trace_specializes, trace_specializes

(t1,) = trace_set(p1, ont)
(t2,) = trace_set(p2, ont)
print("ordered:", trace_specializes(ont, t2, t1))
print("unordered:", shallow_trace_specializes(ont, t2, t1) is not None)

# %%
# A protocol compared with itself is equivalent but not a restriction.
print(compare(p1, p1, ont).strongest)

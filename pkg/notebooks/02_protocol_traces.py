"""
Runs, traces and validation
===========================

Enumerate the runs of a protocol, read each run's trace off its final
store, and catch a protocol that stops while a commitment is still open.
"""

# %%
from commont import (
    abstract_set,
    default_ontology,
    enumerate_runs,
    example_protocol,
    load_protocol,
    trace_set,
    validate,
)

ont = default_ontology()
p1 = example_protocol("p1", ont)
for run in enumerate_runs(p1):
    print(run)

# %%
# Commitments never appear in a trace; ticks are ranks.
for trace in trace_set(p1, ont):
    print(trace)

# %%
# A protocol with two alternatives has two traces. Dropping the order of
# effects gives the abstract multisets.
two_arms = load_protocol(
    """
protocol TwoArms
roles A B
state S0 initial
state S1
state S2
state S3 final
state S4
state S5
state S6 final
transition S0 -> S1 on TimeRequest from A to B
transition S1 -> S2 on TimeAccept from B to A
transition S2 -> S3 on TimeInform from B to A
transition S0 -> S4 on RequestTemp from A to B
transition S4 -> S5 on AcceptTemp from B to A
transition S5 -> S6 on TempInform from B to A
""",
    ont,
)
for trace in sorted(trace_set(two_arms, ont), key=str):
    print("T:", trace)
for multiset in sorted(abstract_set(trace_set(two_arms, ont)), key=str):
    print("S:", multiset)

# %%
# Ending right after the accept leaves B committed. validate reports it
# instead of raising.
truncated = load_protocol(
    """
protocol Truncated
roles A B
state S0 initial
state S1
state S2 final
transition S0 -> S1 on TimeRequest from A to B
transition S1 -> S2 on TimeAccept from B to A
""",
    ont,
)
print(validate(truncated, ont))

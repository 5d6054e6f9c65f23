"""
Fluents of a single conversation
================================

Replay the AskTime protocol step by step and watch commitments appear,
get promoted and finally discharge.
"""

# %%
# The bundled catalog holds the time, temperature and pulse vocabularies.
from commont import default_ontology, example_protocol, simulate

ont = default_ontology()
asktime = example_protocol("asktime", ont)
print(asktime.name, "roles:", asktime.roles)
for t in asktime.transitions:
    print(f"  {t.source} -> {t.target}: {t.act_class} from {t.sender} to {t.receiver}")

# %%
# A request leaves a conditional commitment. The accept satisfies its
# condition, so it turns into a base commitment one tick later. The inform
# discharges it.
steps = simulate(asktime, ont, ["TimeRequest", "TimeAccept", "TimeInform"])
for i, (state, store) in enumerate(steps):
    print(f"F{i} [{state}]: {store}")

# %%
# Skipping the accept is not allowed by the protocol.
from commont import InvalidActError

try:
    simulate(asktime, ont, ["TimeRequest", "TimeInform"])
except InvalidActError as exc:
    print(exc)

# %%
# Effects come from the most specific ancestor with a registered template.
from commont import DEFAULT_REGISTRY, ActEvent, effect_template, most_specific_semantic_ancestor

for act, sender, receiver in [("TimeRequest", "A", "B"), ("A-AcceptPulse", "B", "A"), ("A-TempInform", "B", "A")]:
    root = most_specific_semantic_ancestor(ont, act, DEFAULT_REGISTRY)
    initiated, terminated = effect_template(ont, DEFAULT_REGISTRY, ActEvent(act, sender, receiver))
    print(f"{act:15} via {root:10} initiates {[str(f) for f in initiated]} terminates {[str(f) for f in terminated]}")

"""
Extending the ontology
======================

Declare application classes on top of the catalog, query subsumption, and
round-trip everything through the text format.
"""

# %%
from commont import default_catalog_text, load_ontology_sources, serialize

extra = """
content GlucoseReq
content GlucoseInfo
content B-TempReq : TempReq
content B-TempInfo : TempInfo
act RequestGlucose : Request content=GlucoseReq
act AcceptGlucose : Accept content=GlucoseReq
act GlucoseInform : Responsive content=GlucoseInfo replyto=RequestGlucose
act B-RequestTemp : RequestTemp content=B-TempReq system=Bedside
"""
ont = load_ontology_sources([(default_catalog_text(), "catalog.ont"), (extra, "bedside.ont")])

for general, specific in [
    ("Request", "RequestGlucose"),
    ("RequestTemp", "B-RequestTemp"),
    ("A-RequestTemp", "B-RequestTemp"),
    ("TempReq", "B-TempReq"),
]:
    print(f"{specific} below {general}: {ont.subsumes(general, specific)}")

# %%
# Properties are inherited down the hierarchy.
print(ont.inherited("B-RequestTemp", "content_class"), ont.inherited("B-RequestTemp", "system_tag"))

# %%
# Mistakes are reported with their file and line.
from commont import OntologyError, load_ontology

try:
    load_ontology("content T\ncontent U\nact X : Request content=T\nact Y : X content=U\n", "bad.ont")
except OntologyError as exc:
    print(exc)

# %%
# Serializing and loading again gives back the same ontology.
text = serialize(ont)
print(load_ontology(text) == ont, serialize(load_ontology(text)) == text)

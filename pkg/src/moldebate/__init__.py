"""moldebate: multi-agent debate engine for molecular discovery.

Scientist agents grounded in individualized expertise profiles (publication
history + molecular history) propose, critique, and vote on candidate
molecules over multiple rounds.  The package ships the cheminformatics core
(SMILES graphs, canonical form, circular fingerprints), the evaluation
metrics, corpus retrieval, profile construction, the debate engine, LLM and
property-oracle clients with deterministic mocks, campaign persistence, and
a CLI.
"""

__version__ = "0.1.0"

"""Hybrid human-in-the-loop task orchestration engine.

Subpackages:

- ``core``: domain types, the task lifecycle state machine, append-only audit log
- ``orchestration``: gated planning, routing, escalation, and the execution loop
- ``qa``: online detectors and the offline verification pass
- ``workers``: worker adapters (scripted, synthetic, console-mediated) and bid selection
- ``sim``: deterministic discrete-event regime simulator
- ``stats``: benchmark dataset model and evaluation statistics
- ``service``: file-backed persistence, HTTP API, and the ``gatework`` CLI
"""

__version__ = "0.1.0"

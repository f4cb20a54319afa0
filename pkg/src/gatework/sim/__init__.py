from gatework.sim.config import HybridParams, Regime, SimConfig, load_sim_config
from gatework.sim.engine import SimRecord, run_simulation, simulate_with_logs, write_records_file
from gatework.sim.queue import EventQueue, QueuedEvent, advance

__all__ = [
    "EventQueue",
    "HybridParams",
    "QueuedEvent",
    "Regime",
    "SimConfig",
    "SimRecord",
    "advance",
    "load_sim_config",
    "run_simulation",
    "simulate_with_logs",
    "write_records_file",
]

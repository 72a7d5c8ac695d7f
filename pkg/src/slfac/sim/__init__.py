"""Deterministic multi-device split-learning simulator."""

from slfac.sim.data import DatasetSplit, load_mnist, synth_classification, synth_lowpass
from slfac.sim.model import SplitModel, client_step, evaluate, forward_client, init_model, server_step
from slfac.sim.partition import dirichlet_partition, iid_partition
from slfac.sim.runner import RoundMetrics, SimConfig, SimState, init_state, run_round, simulate, write_metrics_csv

__all__ = [
    "DatasetSplit",
    "RoundMetrics",
    "SimConfig",
    "SimState",
    "SplitModel",
    "client_step",
    "dirichlet_partition",
    "evaluate",
    "forward_client",
    "init_state",
    "iid_partition",
    "init_model",
    "load_mnist",
    "run_round",
    "server_step",
    "simulate",
    "synth_classification",
    "synth_lowpass",
    "write_metrics_csv",
]

"""Orientation solvers for tree-shaped distribution networks with equal-split flow."""
from .model import (INF, NEG_INF, Network, Node, Orientation, ModelError, parse_network,
                    parse_orientation, scale_instance, serialize_network,
                    serialize_orientation)
from .flow import check_feasible, compute_flow, objectives

__version__ = "0.1.0"

__all__ = ["INF", "NEG_INF", "Network", "Node", "Orientation", "ModelError", "parse_network",
           "parse_orientation", "scale_instance", "serialize_network", "serialize_orientation",
           "check_feasible", "compute_flow", "objectives"]

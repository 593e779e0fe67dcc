"""Navigation and message-passing simulation on the {7,3} tiling."""

from .engine import Engine, Report, SimConfig, execute
from .fibcode import FibWord, decode, encode, pred, succ
from .heptagrid import CENTRE, Space, TileCoord, TileRecord, build_space
from .routing import GatePair, Route, pathroot, reverse_route, shortest

__all__ = [
    "FibWord",
    "decode",
    "encode",
    "pred",
    "succ",
    "CENTRE",
    "Space",
    "TileCoord",
    "TileRecord",
    "build_space",
    "GatePair",
    "Route",
    "pathroot",
    "reverse_route",
    "shortest",
    "Engine",
    "Report",
    "SimConfig",
    "execute",
]

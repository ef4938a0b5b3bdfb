"""Triangle switches on labelled regular graphs."""

from .graph import RegularGraph, from_edges, key
from .moves import Move, MoveCertificate, MoveKind, apply, applicable, invert

__version__ = "0.1.0"

__all__ = ["Move", "MoveCertificate", "MoveKind", "RegularGraph", "apply", "applicable", "from_edges", "invert", "key"]

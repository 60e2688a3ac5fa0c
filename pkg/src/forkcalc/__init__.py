"""Forking independence in free groups: word algebra, Stallings graphs,
Whitehead moves, marked graphs of groups and the Farey graph."""

from .words import Word, parse_tuple
from .stallings import CoreGraph
from .whitehead import FnAutomorphism

__all__ = ["Word", "parse_tuple", "CoreGraph", "FnAutomorphism"]
__version__ = "0.1.0"

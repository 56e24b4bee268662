"""textpond: metadata management engine for textual-document data ponds."""

__version__ = "0.1.0"

"""Exception types raised across the pond engine.

Every error the library raises deliberately derives from TextPondError so
callers (CLI, HTTP layer) can map them to exit codes / status codes in one
place.
"""


class TextPondError(Exception):
    """Base class for all engine errors."""


# -- ingestion ---------------------------------------------------------------

class UnreadablePath(TextPondError):
    """Source path missing, empty or not readable."""


class MalformedLayout(TextPondError):
    """Document path does not follow <pond_root>/<company>/<category>/<file>."""


class MissingSidecar(TextPondError):
    """Binary document has no pre-extracted .txt sidecar next to it."""


# -- text processing ---------------------------------------------------------

class MissingResource(TextPondError):
    """Transformation references a resource absent from the global manifest."""


class EmptyCorpusStats(TextPondError):
    """TF-IDF requested against an empty document-frequency table."""


class WrongPayloadKind(TextPondError):
    """Operation applied to a presentation payload of the wrong kind."""


# -- manifest store ----------------------------------------------------------

class SchemaViolation(TextPondError):
    """Manifest breaks a structural invariant and was not written."""


class StorageFailure(TextPondError):
    """Underlying filesystem write/rename failed."""


class NotFound(TextPondError):
    """No stored record under the requested identifier."""


class ParseError(TextPondError):
    """Stored XML is not well-formed.

    ``offset`` is the byte offset of the first offending byte when known.
    """

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class NotRegistered(TextPondError):
    """Name absent from the global manifest."""


class UnreadableResource(TextPondError):
    """Registered resource location cannot be read."""


# -- index -------------------------------------------------------------------

class UnknownLabel(TextPondError):
    """Presentation label not covered by the index / artifact store."""


class UnknownDocument(TextPondError):
    """Document not indexed under the requested label."""


# -- link graph --------------------------------------------------------------

class ZeroVector(TextPondError):
    """Similarity measure applied to a vector with no mass."""


class DegenerateRanks(TextPondError):
    """Rank correlation undefined: one rank sequence is constant."""


# -- analytics ---------------------------------------------------------------

class UnknownFacet(TextPondError):
    """Physical-link name never observed in any manifest."""


class TooFewNodes(TextPondError):
    """Graph operation needs more nodes than supplied."""


# -- service -----------------------------------------------------------------

class UninitializedStore(TextPondError):
    """Store root missing or never initialized."""


class BindFailure(TextPondError):
    """HTTP server could not bind its address."""

"""Exception types shared across the engine."""


class PathwiseError(Exception):
    """Base class for all errors raised by this package."""


class RecordError(PathwiseError):
    """A source record cannot be turned into a post. Carries a short
    machine-readable reason used for ingest reject tallies."""

    reason = "invalid_record"


class MissingField(RecordError):
    def __init__(self, field: str):
        super().__init__(f"record is missing required field {field!r}")
        self.field = field
        self.reason = f"missing_field:{field}"


class BadTimestamp(RecordError):
    def __init__(self, value: str):
        super().__init__(f"cannot parse timestamp {value!r}")
        self.value = value
        self.reason = "bad_timestamp"


class EmptyText(RecordError):
    def __init__(self) -> None:
        super().__init__("record has empty text and no hashtags")
        self.reason = "empty_text"


class StoreUnavailable(PathwiseError):
    """The backing data directory cannot be opened or written."""


class EmptyInput(PathwiseError):
    """An operation that requires non-empty input got an empty one."""


class EmptyFile(PathwiseError):
    """A vector file contained no entries."""


class DimensionMismatch(PathwiseError):
    def __init__(self, line_no: int, expected: int, got: int):
        super().__init__(
            f"line {line_no}: expected {expected} vector components, got {got}"
        )
        self.line_no = line_no
        self.expected = expected
        self.got = got


class ConfigError(PathwiseError):
    """A configuration value is out of range or inconsistent."""


class NonFiniteLoss(PathwiseError):
    def __init__(self, epoch: int, value: float):
        super().__init__(f"loss became non-finite at epoch {epoch}: {value}")
        self.epoch = epoch
        self.value = value


class CheckpointError(PathwiseError):
    """A checkpoint file is unreadable or structurally invalid."""


class MissingCheckpoint(PathwiseError):
    def __init__(self, path: str):
        super().__init__(f"checkpoint not found: {path}")
        self.path = path


class LengthMismatch(PathwiseError):
    """Two parallel sequences disagree in length."""


class EmptyDoc(PathwiseError):
    """A model was asked to score a document with no tokens."""


class SpanOutOfRange(PathwiseError):
    def __init__(self, start: int, end: int, length: int):
        super().__init__(f"span [{start}, {end}) outside document of length {length}")
        self.start = start
        self.end = end
        self.length = length


class UnsortedInput(PathwiseError):
    """Posts handed to the pathway builder were not in ascending time order."""


class NonAdjacentLayers(PathwiseError):
    """Layer linking was attempted between layers that are not consecutive."""


class MissingAnalysis(PathwiseError):
    def __init__(self, post_id: str):
        super().__init__(f"no analysis available for post {post_id!r}")
        self.post_id = post_id


class NoPosts(PathwiseError):
    def __init__(self, entity_id: str):
        super().__init__(f"no posts stored for entity {entity_id!r}")
        self.entity_id = entity_id


class DatasetError(PathwiseError):
    """A labeled dataset file is malformed or references impossible spans."""

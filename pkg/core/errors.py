"""
Typed errors shared by every module.
Each error carries a short machine-parsable `kind` used by the CLI's
`error:<kind>:` prefix.
"""

from typing import Optional


class TransferError(ValueError):
    """Base class for all expected failures."""

    kind = "error"


class DegenerateSample(TransferError):
    kind = "degenerate_sample"


class ShapeMismatch(TransferError):
    kind = "shape_mismatch"


class BadSpec(TransferError):
    kind = "bad_spec"


class TraceMismatch(TransferError):
    kind = "trace_mismatch"


class EmptyBatch(TransferError):
    kind = "empty_batch"


class EmptyDataset(TransferError):
    kind = "empty_dataset"


class NonFiniteLoss(TransferError):
    kind = "non_finite_loss"

    def __init__(self, message: str, iteration: Optional[int] = None):
        super().__init__(message)
        self.iteration = iteration


class InvalidClipIndex(TransferError):
    kind = "invalid_clip_index"


class ClassMismatch(TransferError):
    kind = "class_mismatch"


class BadMagic(TransferError):
    kind = "bad_magic"


class VersionUnsupported(TransferError):
    kind = "version_unsupported"


class TruncatedPayload(TransferError):
    kind = "truncated_payload"


class NonFiniteValue(TransferError):
    kind = "non_finite_value"


class ParseError(TransferError):
    kind = "parse_error"

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line

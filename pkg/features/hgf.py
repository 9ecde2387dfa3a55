"""
HGF1 feature-file reader/writer.

Layout (little-endian):
  bytes 0-3    magic  b"HGF1"
  bytes 4-7    version, uint32 (= 1)
  bytes 8-15   n_rows, uint64
  bytes 16-23  n_cols, uint64
  bytes 24-    n_rows * n_cols float32 values, row-major

Values are promoted to float64 on read and rounded to nearest float32 on write.
"""

import logging
import struct
from pathlib import Path
from typing import Union

import numpy as np

from core.errors import BadMagic, NonFiniteValue, ShapeMismatch, TruncatedPayload, VersionUnsupported
from .base import FeatureMatrix

logger = logging.getLogger(__name__)

MAGIC = b"HGF1"
VERSION = 1
_HEADER = struct.Struct("<4sIQQ")
HEADER_SIZE = _HEADER.size   # 24


def encode_header(n_rows: int, n_cols: int) -> bytes:
    return _HEADER.pack(MAGIC, VERSION, n_rows, n_cols)


def write_features(path: Union[str, Path], m) -> None:
    values = m.values if isinstance(m, FeatureMatrix) else np.asarray(m, dtype=np.float64)
    if values.ndim != 2:
        raise ShapeMismatch(f"feature files hold 2-D matrices, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise NonFiniteValue(f"{path}: refusing to write NaN/Inf")
    with np.errstate(over='ignore'):
        payload = np.ascontiguousarray(values, dtype='<f4')
    if not np.all(np.isfinite(payload)):
        raise NonFiniteValue(f"{path}: values overflow single precision")
    n_rows, n_cols = values.shape
    with open(path, 'wb') as f:
        f.write(encode_header(n_rows, n_cols))
        f.write(payload.tobytes(order='C'))
    logger.debug("wrote %s (%d×%d)", path, n_rows, n_cols)


def read_features(path: Union[str, Path], domain: str = "") -> FeatureMatrix:
    path = Path(path)
    data = path.read_bytes()
    if len(data) < HEADER_SIZE:
        raise TruncatedPayload(f"{path.name}: {len(data)} bytes is shorter than the {HEADER_SIZE}-byte header")
    magic, version, n_rows, n_cols = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise BadMagic(f"{path.name}: magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise VersionUnsupported(f"{path.name}: version {version}, only {VERSION} is supported")
    expected = n_rows * n_cols * 4
    actual = len(data) - HEADER_SIZE
    if actual != expected:
        raise TruncatedPayload(
            f"{path.name}: header says {n_rows}×{n_cols} ({expected} payload bytes), found {actual}")
    values = np.frombuffer(data, dtype='<f4', count=n_rows * n_cols, offset=HEADER_SIZE)
    if not np.all(np.isfinite(values)):
        raise NonFiniteValue(f"{path.name}: payload contains NaN/Inf")
    matrix = values.astype(np.float64).reshape(n_rows, n_cols)
    return FeatureMatrix(matrix, domain or path.stem)

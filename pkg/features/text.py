"""
Plain-text label and clip-index files: one nonnegative integer per line.
Clip-index line k holds the video id of clip k.
"""

import re
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from core.errors import ParseError
from .base import ClipIndex


# ASCII digits only; str.isdigit also accepts superscripts and other scripts
_INT = re.compile(r"[0-9]+")


def _read_ints(path: Union[str, Path]) -> np.ndarray:
    values = []
    with open(path, 'rb') as f:
        for lineno, raw in enumerate(f, start=1):
            try:
                s = raw.decode('utf-8').strip()
            except UnicodeDecodeError as e:
                raise ParseError(f"{Path(path).name}: not valid UTF-8 ({e.reason})", line=lineno) from e
            if not s:
                continue
            if not _INT.fullmatch(s):
                raise ParseError(f"{Path(path).name}: expected a nonnegative integer, got {s!r}", line=lineno)
            values.append(int(s))
    return np.asarray(values, dtype=np.int64)


def _write_ints(path: Union[str, Path], values: Iterable[int]) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        for v in values:
            f.write(f"{int(v)}\n")


def read_labels(path: Union[str, Path]) -> np.ndarray:
    return _read_ints(path)


def write_labels(path: Union[str, Path], labels) -> None:
    _write_ints(path, labels)


def read_clip_index(path: Union[str, Path]) -> ClipIndex:
    return ClipIndex.from_ids(_read_ints(path))


def write_clip_index(path: Union[str, Path], idx: ClipIndex) -> None:
    _write_ints(path, idx.video_ids)

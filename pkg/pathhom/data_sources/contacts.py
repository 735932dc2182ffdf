"""
Readers for whitespace-separated edge lists and temporal contact files.

Both formats skip blank lines and lines starting with '#' or '%', which
covers SNAP and KONECT downloads. Contact files have three columns
(source, target, timestamp) or four (source, target, weight, timestamp);
the weight is ignored.
"""
from pathlib import Path
from typing import Hashable, List, Tuple, Union

import pandas as pd

from pathhom.errors import InputError, MalformedLineError
from pathhom.utils.logger import logger

COMMENT_PREFIXES = ("#", "%")


def _open_lines(path: Union[str, Path]) -> List[Tuple[int, str]]:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"input file not found: {path}", details={"path": str(path)}, error_code="FILE_NOT_FOUND")
    try:
        with path.open("r", encoding="utf-8", errors="replace") as handle:
            return [
                (number, line.strip())
                for number, line in enumerate(handle, start=1)
                if line.strip() and not line.lstrip().startswith(COMMENT_PREFIXES)
            ]
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}", details={"path": str(path)}, error_code="FILE_UNREADABLE")


def _labels(tokens: pd.Series) -> pd.Series:
    # Integer-looking labels become ints so they sort numerically.
    numeric = pd.to_numeric(tokens, errors="coerce")
    if numeric.notna().all() and (numeric == numeric.round()).all():
        return numeric.astype("int64")
    return tokens


def read_edge_list(path: Union[str, Path]) -> List[Tuple[Hashable, Hashable]]:
    """
    Read an arc list: one "source target" pair per line.

    Raises:
        InputError: file missing or unreadable
        MalformedLineError: a line without exactly two tokens
    """
    rows = []
    for number, line in _open_lines(path):
        tokens = line.split()
        if len(tokens) != 2:
            raise MalformedLineError(str(path), number, line, f"expected 2 columns, found {len(tokens)}")
        rows.append(tokens)
    if not rows:
        return []
    frame = pd.DataFrame(rows, columns=["source", "target"])
    labels = _labels(pd.concat([frame["source"], frame["target"]], ignore_index=True))
    sources, targets = labels[: len(frame)].tolist(), labels[len(frame):].tolist()
    return list(zip(sources, targets))


def read_contacts(path: Union[str, Path]) -> pd.DataFrame:
    """
    Read a temporal contact file into a frame sorted by timestamp.

    Args:
        path: Contact file (3 or 4 whitespace-separated columns)

    Returns:
        DataFrame with columns source, target, timestamp (int64), stably
        sorted by timestamp

    Raises:
        InputError: file missing or unreadable
        MalformedLineError: wrong column count or a non-integer timestamp
    """
    rows = []
    numbers = []
    for number, line in _open_lines(path):
        tokens = line.split()
        if len(tokens) == 3:
            rows.append((tokens[0], tokens[1], tokens[2]))
        elif len(tokens) == 4:
            rows.append((tokens[0], tokens[1], tokens[3]))
        else:
            raise MalformedLineError(str(path), number, line, f"expected 3 or 4 columns, found {len(tokens)}")
        numbers.append((number, line))

    if not rows:
        logger.info(f"No contacts in {path}")
        return pd.DataFrame({"source": pd.Series(dtype="int64"),
                             "target": pd.Series(dtype="int64"),
                             "timestamp": pd.Series(dtype="int64")})

    frame = pd.DataFrame(rows, columns=["source", "target", "timestamp"])
    stamps = pd.to_numeric(frame["timestamp"], errors="coerce")
    bad = stamps.isna() | (stamps != stamps.round())
    if bad.any():
        position = int(bad.to_numpy().nonzero()[0][0])
        number, line = numbers[position]
        raise MalformedLineError(str(path), number, line, "timestamp is not an integer")
    frame["timestamp"] = stamps.astype("int64")

    labels = _labels(pd.concat([frame["source"], frame["target"]], ignore_index=True))
    frame["source"] = labels[: len(frame)].to_numpy()
    frame["target"] = labels[len(frame):].to_numpy()

    frame = frame.sort_values("timestamp", kind="mergesort", ignore_index=True)
    logger.info(f"Read {len(frame)} contacts from {path}")
    return frame

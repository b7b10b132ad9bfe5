"""Reservoir (JSON-lines) and JSON file helpers with atomic writes."""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Iterator

from .errors import MalformedNet
from .net import Net, net_from_dict, net_to_dict


class ReservoirFormatError(MalformedNet):
    """A reservoir line could not be parsed; ``line`` is 1-based."""

    def __init__(self, path, line: int, reason: str):
        super().__init__(f"{path}:{line}: {reason}")
        self.path = path
        self.line = line


def atomic_write_text(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_net(net: Net) -> str:
    return json.dumps(net_to_dict(net), separators=(",", ":"), sort_keys=False)


def write_reservoir(path, nets: Iterable[Net]) -> None:
    atomic_write_text(path, "".join(dump_net(n) + "\n" for n in nets))


def iter_reservoir(path) -> Iterator[Net]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ReservoirFormatError(path, lineno, f"invalid JSON ({exc.msg})") from None
            try:
                yield net_from_dict(data)
            except MalformedNet as exc:
                raise ReservoirFormatError(path, lineno, str(exc)) from None


def read_reservoir(path) -> list[Net]:
    return list(iter_reservoir(path))


def write_json(path, data) -> None:
    atomic_write_text(path, json.dumps(data, indent=1, sort_keys=False) + "\n")


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)

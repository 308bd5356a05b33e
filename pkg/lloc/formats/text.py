"""
Plain-text formats

Instance file:
    LLOC 1
    n=<N>
    <u>:<hex>        one line per pivot u = 0..N-1

The hex string holds C(N-1, 2) bits MSB-first, zero padded at the end, in
lexicographic pair order. Embedding file: one "index position" line per point.
WLLOC dump: "WLLOC 1", "b=<B>", then "i j k w" per nonzero weight, 1-based.
"""

import logging
import re
from pathlib import Path
from typing import Union

import numpy as np

from ..core.instance import Embedding, Instance
from ..core.wlloc import WllocInstance
from ..errors import BadHexDigit, BadLength, FormatError, MalformedHeader
from ..utils.helpers import choose2

logger = logging.getLogger(__name__)

INSTANCE_MAGIC = "LLOC 1"
WLLOC_MAGIC = "WLLOC 1"

_HEX = re.compile(r"^[0-9a-fA-F]*$")

PathLike = Union[str, Path]


def serialize_instance(inst: Instance) -> bytes:
    digits = (inst.pairs_per_pivot + 3) // 4
    lines = [INSTANCE_MAGIC, f"n={inst.n}"]
    for u in range(inst.n):
        lines.append(f"{u}:{inst.packed[u].tobytes().hex()[:digits]}")
    return ("\n".join(lines) + "\n").encode("ascii")


def _parse_count(line: str, key: str, line_no: int) -> int:
    match = re.fullmatch(rf"{key}=(\d+)", line.strip())
    if match is None:
        raise MalformedHeader(f"expected '{key}=<int>', got {line!r}", line=line_no)
    return int(match.group(1))


def parse_instance(data: Union[bytes, str]) -> Instance:
    text = data.decode("ascii", errors="replace") if isinstance(data, bytes) else data
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [line.rstrip("\r") for line in lines]

    if not lines or lines[0].strip() != INSTANCE_MAGIC:
        raise MalformedHeader(f"first line must be '{INSTANCE_MAGIC}'", line=1)
    if len(lines) < 2:
        raise MalformedHeader("missing 'n=<N>' line", line=2)
    n = _parse_count(lines[1], "n", 2)
    if n < 3:
        raise MalformedHeader(f"n must be at least 3, got {n}", line=2)

    records = lines[2:]
    if len(records) != n:
        raise BadLength(f"expected {n} pivot records, found {len(records)}")

    bits = choose2(n - 1)
    digits = (bits + 3) // 4
    padding = digits * 4 - bits
    packed = np.zeros((n, (bits + 7) // 8), dtype=np.uint8)
    for u, record in enumerate(records):
        line_no = u + 3
        prefix, sep, payload = record.partition(":")
        if not sep or prefix.strip() != str(u):
            raise MalformedHeader(f"expected record for pivot {u}", line=line_no)
        payload = payload.strip()
        if not _HEX.match(payload):
            raise BadHexDigit("payload contains a non-hex character", line=line_no)
        if len(payload) != digits:
            raise BadLength(f"expected {digits} hex digits, got {len(payload)}", line=line_no)
        if padding and int(payload[-1], 16) & ((1 << padding) - 1):
            raise BadHexDigit("padding bits must be zero", line=line_no)
        even = payload if len(payload) % 2 == 0 else payload + "0"
        packed[u] = np.frombuffer(bytes.fromhex(even), dtype=np.uint8)

    return Instance(n, packed)


def write_instance(inst: Instance, path: PathLike) -> None:
    Path(path).write_bytes(serialize_instance(inst))
    logger.debug(f"Wrote instance n={inst.n} to {path}")


def read_instance(path: PathLike) -> Instance:
    return parse_instance(Path(path).read_bytes())


def serialize_embedding(emb: Embedding) -> str:
    return "".join(f"{i} {float(x)!r}\n" for i, x in enumerate(emb.positions))


def parse_embedding(text: str) -> Embedding:
    entries = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"expected 'index position', got {line!r}", line=line_no)
        try:
            index = int(parts[0])
            position = float(parts[1])
        except ValueError:
            raise FormatError(f"cannot parse {line!r}", line=line_no)
        if index in entries:
            raise FormatError(f"duplicate index {index}", line=line_no)
        entries[index] = position

    n = len(entries)
    if sorted(entries) != list(range(n)):
        raise FormatError(f"indices must be exactly 0..{n - 1}")
    return Embedding([entries[i] for i in range(n)])


def write_embedding(emb: Embedding, path: PathLike) -> None:
    Path(path).write_text(serialize_embedding(emb))


def read_embedding(path: PathLike) -> Embedding:
    return parse_embedding(Path(path).read_text())


def dump_wlloc(w: WllocInstance) -> str:
    lines = [WLLOC_MAGIC, f"b={w.b}"]
    for i, j, k, weight in w.normalized().nonzero():
        lines.append(f"{i + 1} {j + 1} {k + 1} {weight}")
    return "\n".join(lines) + "\n"


def load_wlloc(text: str) -> WllocInstance:
    lines = [line.strip() for line in text.splitlines()]
    if not lines or lines[0] != WLLOC_MAGIC:
        raise MalformedHeader(f"first line must be '{WLLOC_MAGIC}'", line=1)
    if len(lines) < 2:
        raise MalformedHeader("missing 'b=<B>' line", line=2)
    b = _parse_count(lines[1], "b", 2)

    triples = []
    for line_no, line in enumerate(lines[2:], start=3):
        if not line:
            continue
        try:
            i, j, k, weight = (int(part) for part in line.split())
        except ValueError:
            raise FormatError(f"expected 'i j k w', got {line!r}", line=line_no)
        if not all(1 <= x <= b for x in (i, j, k)) or weight < 0:
            raise FormatError(f"entry out of range: {line!r}", line=line_no)
        triples.append((i - 1, j - 1, k - 1, weight))
    try:
        return WllocInstance.from_triples(b, triples)
    except ValueError as e:
        raise FormatError(str(e))

"""Binary trajectory files (``trajectory.bin-v1``).

Length-prefixed little-endian records; the layout is documented in
``docs/trajectory-format.md``. Round trips are exact: every float is stored
as its IEEE-754 double bits.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .core import ElectionResult
from .engine import Trajectory, TrajectoryRecord

MAGIC = b"VSTRAJ1\n"
_FLAG_VOTERS = 1

_HEADER = struct.Struct("<BIIQ")  # flags, num_candidates, num_voters, record_count
_PREFIX = struct.Struct("<I")
_TIME = struct.Struct("<q")
_SCANDAL_COUNT = struct.Struct("<I")
_SCANDAL = struct.Struct("<Iid")  # id, target, potential
_ABSTENTIONS = struct.Struct("<Q")


class TrajectoryFormatError(ValueError):
    pass


def _pack_record(
    record: TrajectoryRecord, candidate_ids: tuple[int, ...], with_voters: bool
) -> bytes:
    c = len(candidate_ids)
    parts = [_TIME.pack(record.time)]
    parts.append(struct.pack(f"<{c}d", *record.repulsions))
    parts.append(_SCANDAL_COUNT.pack(len(record.scandals)))
    for sid, target, potential in record.scandals:
        parts.append(_SCANDAL.pack(sid, target, potential))
    if with_voters:
        if record.voter_positions is None:
            raise TrajectoryFormatError("record is missing voter positions")
        parts.append(np.ascontiguousarray(record.voter_positions, dtype="<f8").tobytes())
    votes = [record.tally.votes[cid] for cid in candidate_ids]
    parts.append(struct.pack(f"<{c}Q", *votes))
    parts.append(_ABSTENTIONS.pack(record.tally.abstentions))
    return b"".join(parts)


def write_trajectory(path: str | Path, trajectory: Trajectory) -> None:
    c = len(trajectory.candidate_ids)
    flags = _FLAG_VOTERS if trajectory.record_voters else 0
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_HEADER.pack(flags, c, trajectory.num_voters, len(trajectory.records)))
        fh.write(struct.pack(f"<{c}i", *trajectory.candidate_ids))
        for record in trajectory.records:
            payload = _pack_record(record, trajectory.candidate_ids, trajectory.record_voters)
            fh.write(_PREFIX.pack(len(payload)))
            fh.write(payload)


class _Cursor:
    def __init__(self, buf: bytes, offset: int = 0):
        self.buf = buf
        self.offset = offset

    def take(self, fmt: struct.Struct):
        if self.offset + fmt.size > len(self.buf):
            raise TrajectoryFormatError("truncated record")
        values = fmt.unpack_from(self.buf, self.offset)
        self.offset += fmt.size
        return values

    def take_raw(self, n: int) -> bytes:
        if self.offset + n > len(self.buf):
            raise TrajectoryFormatError("truncated record")
        out = self.buf[self.offset : self.offset + n]
        self.offset += n
        return out


def _unpack_record(
    payload: bytes, candidate_ids: tuple[int, ...], num_voters: int, with_voters: bool
) -> TrajectoryRecord:
    c = len(candidate_ids)
    cur = _Cursor(payload)
    (time,) = cur.take(_TIME)
    repulsions = struct.unpack_from(f"<{c}d", cur.take_raw(8 * c))
    (n_scandals,) = cur.take(_SCANDAL_COUNT)
    scandals = tuple(cur.take(_SCANDAL) for _ in range(n_scandals))
    positions = None
    if with_voters:
        raw = cur.take_raw(16 * num_voters)
        positions = np.frombuffer(raw, dtype="<f8").reshape(num_voters, 2).copy()
    votes_flat = struct.unpack_from(f"<{c}Q", cur.take_raw(8 * c))
    (abstentions,) = cur.take(_ABSTENTIONS)
    if cur.offset != len(payload):
        raise TrajectoryFormatError("record has trailing bytes")
    tally = ElectionResult(
        votes={cid: int(v) for cid, v in zip(candidate_ids, votes_flat)},
        abstentions=int(abstentions),
    )
    return TrajectoryRecord(
        time=int(time),
        repulsions=tuple(repulsions),
        scandals=scandals,
        tally=tally,
        voter_positions=positions,
    )


def read_trajectory(path: str | Path) -> Trajectory:
    data = Path(path).read_bytes()
    if not data.startswith(MAGIC):
        raise TrajectoryFormatError("not a trajectory file (bad magic)")
    offset = len(MAGIC)
    if offset + _HEADER.size > len(data):
        raise TrajectoryFormatError("truncated header")
    flags, c, num_voters, record_count = _HEADER.unpack_from(data, offset)
    offset += _HEADER.size
    if offset + 4 * c > len(data):
        raise TrajectoryFormatError("truncated candidate id table")
    candidate_ids = struct.unpack_from(f"<{c}i", data, offset)
    offset += 4 * c
    with_voters = bool(flags & _FLAG_VOTERS)

    records = []
    for _ in range(record_count):
        if offset + _PREFIX.size > len(data):
            raise TrajectoryFormatError("truncated length prefix")
        (length,) = _PREFIX.unpack_from(data, offset)
        offset += _PREFIX.size
        if offset + length > len(data):
            raise TrajectoryFormatError("record extends past end of file")
        records.append(
            _unpack_record(data[offset : offset + length], candidate_ids, num_voters, with_voters)
        )
        offset += length
    if offset != len(data):
        raise TrajectoryFormatError("trailing bytes after final record")
    return Trajectory(
        candidate_ids=candidate_ids,
        num_voters=num_voters,
        record_voters=with_voters,
        records=tuple(records),
    )

"""FASTA parsing into validated protein records over the 20-letter alphabet."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

ALPHABET = "ACDEFGHIKLMNPQRSTVWY"
_INDEX = {aa: i for i, aa in enumerate(ALPHABET)}

AFP = 1
NON_AFP = 2


class FastaError(ValueError):
    """Malformed FASTA input or a residue outside the alphabet."""

    def __init__(self, message, record_id=None, position=None, letter=None):
        super().__init__(message)
        self.record_id = record_id
        self.position = position
        self.letter = letter


@dataclass(frozen=True)
class ProteinRecord:
    id: str
    description: str
    sequence: tuple[int, ...]

    def __post_init__(self):
        if len(self.sequence) == 0:
            raise FastaError(f"record {self.id!r} has an empty sequence", self.id)
        for i in self.sequence:
            if not 0 <= i < len(ALPHABET):
                raise FastaError(f"record {self.id!r}: residue index {i} out of range", self.id)

    @property
    def letters(self) -> str:
        return "".join(ALPHABET[i] for i in self.sequence)

    def __len__(self):
        return len(self.sequence)

    @classmethod
    def from_string(cls, id: str, seq: str, description: str = "") -> "ProteinRecord":
        return cls(id, description, _to_indices(id, seq, drop_ambiguous=False))


@dataclass(frozen=True)
class LabeledRecord:
    record: ProteinRecord
    label: int

    def __post_init__(self):
        if self.label not in (AFP, NON_AFP):
            raise ValueError(f"label must be 1 or 2, got {self.label!r}")


def _to_indices(record_id: str, seq: str, drop_ambiguous: bool) -> tuple[int, ...]:
    out = []
    pos = 0
    for ch in seq:
        if ch.isspace():
            continue
        pos += 1
        idx = _INDEX.get(ch.upper())
        if idx is None:
            if drop_ambiguous:
                continue
            raise FastaError(
                f"record {record_id!r}: invalid residue {ch!r} at position {pos}",
                record_id, pos, ch,
            )
        out.append(idx)
    return tuple(out)


def parse_fasta(text: str, drop_ambiguous: bool = False) -> list[ProteinRecord]:
    """Parse FASTA text into records, preserving order.

    Sequence lines are joined and uppercased. Residues outside the 20-letter
    alphabet raise :class:`FastaError` unless ``drop_ambiguous`` is set, in
    which case they are removed.
    """
    records = []
    header = None
    chunks: list[str] = []

    def flush():
        rid, desc = header
        seq = _to_indices(rid, "".join(chunks), drop_ambiguous)
        if not seq:
            raise FastaError(f"record {rid!r} has an empty sequence", rid)
        records.append(ProteinRecord(rid, desc, seq))

    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            if header is not None:
                flush()
            parts = line[1:].strip().split(maxsplit=1)
            if not parts:
                raise FastaError(f"line {lineno}: header without an identifier")
            header = (parts[0], parts[1] if len(parts) > 1 else "")
            chunks = []
        elif header is None:
            raise FastaError(f"line {lineno}: sequence data before any '>' header")
        else:
            chunks.append(line)
    if header is not None:
        flush()
    return records


def read_fasta(path, drop_ambiguous: bool = False) -> list[ProteinRecord]:
    data = Path(path).read_bytes()
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as e:
        raise FastaError(f"{path}: non-ASCII byte at offset {e.start}") from None
    return parse_fasta(text, drop_ambiguous=drop_ambiguous)


def format_fasta(records: Iterable[ProteinRecord], width: int = 60) -> str:
    lines = []
    for rec in records:
        lines.append(f">{rec.id} {rec.description}".rstrip())
        seq = rec.letters
        lines.extend(seq[i:i + width] for i in range(0, len(seq), width))
    return "\n".join(lines) + "\n" if lines else ""


def write_fasta(path, records: Sequence[ProteinRecord], width: int = 60) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_fasta(records, width))

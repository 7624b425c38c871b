"""Bit-exact text files for matrices, transcripts, keys and secrets.

The format is line-oriented and human-diffable::

    EPM/1
    p 5
    m 2
    matrix M
    4 3
    15 20
    poly F1
    22 1

A file starts with the format tag, then ``p`` and ``m``, then any number of
named blocks.  A ``matrix`` block carries m rows of m space-separated decimal
integers (canonical representatives); a ``poly`` block carries one line of
coefficients, constant term first.  The writer emits LF line endings and no
trailing whitespace, so equal values serialise to equal bytes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .protocols import DhdpPublic, EgdpCiphertext, EgdpPrivateKey, EgdpPublicKey
from .ring import CentralPoly, EpmMatrix, NotAMember
from .zpmsolve import PrimePower

__all__ = [
    "FORMAT_TAG",
    "ParseError",
    "Block",
    "TranscriptFile",
    "parse_transcript",
    "write_transcript",
    "setup_file",
    "read_setup",
    "dhdp_transcript_file",
    "read_dhdp_transcript",
    "secret_file",
    "read_secret",
    "egdp_public_file",
    "read_egdp_public",
    "egdp_private_file",
    "read_egdp_private",
    "ciphertext_file",
    "read_ciphertext",
]

FORMAT_TAG = "EPM/1"

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class ParseError(ValueError):
    """Malformed transcript text; carries the offending line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


@dataclass(frozen=True)
class Block:
    kind: str  # "matrix" or "poly"
    name: str
    payload: object  # EpmMatrix or tuple[int, ...]


@dataclass(frozen=True)
class TranscriptFile:
    params: PrimePower
    blocks: tuple[Block, ...]

    def matrix(self, name: str) -> EpmMatrix:
        for b in self.blocks:
            if b.kind == "matrix" and b.name == name:
                return b.payload
        raise ParseError(f"missing matrix block {name!r}")

    def poly(self, name: str) -> tuple[int, ...]:
        for b in self.blocks:
            if b.kind == "poly" and b.name == name:
                return b.payload
        raise ParseError(f"missing poly block {name!r}")


class _Lines:
    def __init__(self, text: str):
        self.lines = text.split("\n")
        # A single trailing newline is the writer's own convention.
        if self.lines and self.lines[-1] == "":
            self.lines.pop()
        self.pos = 0

    @property
    def lineno(self) -> int:
        return self.pos + 1

    def done(self) -> bool:
        return self.pos >= len(self.lines)

    def take(self, what: str) -> str:
        if self.done():
            raise ParseError(f"unexpected end of input, expected {what}", self.lineno)
        line = self.lines[self.pos]
        self.pos += 1
        return line


def _int_fields(line: str, lineno: int, expect: int | None = None) -> list[int]:
    parts = line.split(" ")
    if any(p == "" for p in parts):
        raise ParseError("stray whitespace", lineno)
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"non-integer token in {line!r}", lineno) from None
    if expect is not None and len(values) != expect:
        raise ParseError(f"expected {expect} integers, got {len(values)}", lineno)
    return values


def parse_transcript(text: str) -> TranscriptFile:
    src = _Lines(text)
    tag = src.take("format tag")
    if tag != FORMAT_TAG:
        raise ParseError(f"expected format tag {FORMAT_TAG!r}", 1)

    header = {}
    for key in ("p", "m"):
        lineno = src.lineno
        line = src.take(f"{key} line")
        parts = line.split(" ")
        if len(parts) != 2 or parts[0] != key:
            raise ParseError(f"expected {key!r} followed by one integer", lineno)
        header[key] = _int_fields(parts[1], lineno, expect=1)[0]
    try:
        params = PrimePower(header["p"], header["m"])
    except ValueError as exc:
        raise ParseError(str(exc), 3) from None

    blocks: list[Block] = []
    seen: set[str] = set()
    while not src.done():
        lineno = src.lineno
        head = src.take("block header")
        parts = head.split(" ")
        if len(parts) != 2 or parts[0] not in ("matrix", "poly"):
            raise ParseError(f"expected a block header, got {head!r}", lineno)
        kind, name = parts
        if not _NAME_RE.match(name):
            raise ParseError(f"bad block name {name!r}", lineno)
        if name in seen:
            raise ParseError(f"duplicate block name {name!r}", lineno)
        seen.add(name)
        if kind == "matrix":
            rows = []
            for _ in range(params.m):
                row_lineno = src.lineno
                rows.append(
                    _int_fields(src.take("matrix row"), row_lineno, expect=params.m)
                )
            try:
                payload = EpmMatrix.validate(params, rows)
            except NotAMember as exc:
                raise ParseError(str(exc), lineno) from None
        else:
            coeff_lineno = src.lineno
            coeffs = _int_fields(src.take("poly coefficients"), coeff_lineno)
            if len(coeffs) > params.m:
                raise ParseError(
                    f"poly degree exceeds {params.m - 1}", coeff_lineno
                )
            payload = tuple(c % params.modulus for c in coeffs)
        blocks.append(Block(kind, name, payload))
    return TranscriptFile(params, tuple(blocks))


def write_transcript(tf: TranscriptFile) -> str:
    out = [FORMAT_TAG, f"p {tf.params.p}", f"m {tf.params.m}"]
    for block in tf.blocks:
        out.append(f"{block.kind} {block.name}")
        if block.kind == "matrix":
            for row in block.payload.rows:
                out.append(" ".join(str(v) for v in row))
        else:
            out.append(" ".join(str(v) for v in block.payload))
    return "\n".join(out) + "\n"


# --- typed views -----------------------------------------------------------


def _matrices(params, **named) -> TranscriptFile:
    return TranscriptFile(
        params, tuple(Block("matrix", k, v) for k, v in named.items())
    )


def setup_file(m_mat: EpmMatrix, x: EpmMatrix) -> TranscriptFile:
    return _matrices(m_mat.params, M=m_mat, X=x)


def read_setup(tf: TranscriptFile) -> tuple[EpmMatrix, EpmMatrix]:
    return tf.matrix("M"), tf.matrix("X")


def dhdp_transcript_file(pub: DhdpPublic) -> TranscriptFile:
    return _matrices(pub.params, M=pub.M, X=pub.X, GA=pub.GA, GB=pub.GB)


def read_dhdp_transcript(tf: TranscriptFile) -> DhdpPublic:
    try:
        return DhdpPublic(
            tf.matrix("M"), tf.matrix("X"), tf.matrix("GA"), tf.matrix("GB")
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def secret_file(s: EpmMatrix) -> TranscriptFile:
    return _matrices(s.params, S=s)


def read_secret(tf: TranscriptFile) -> EpmMatrix:
    return tf.matrix("S")


def egdp_public_file(pub: EgdpPublicKey) -> TranscriptFile:
    return _matrices(pub.params, M=pub.M, N=pub.N, E=pub.E)


def read_egdp_public(tf: TranscriptFile) -> EgdpPublicKey:
    try:
        return EgdpPublicKey(tf.matrix("M"), tf.matrix("N"), tf.matrix("E"))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def egdp_private_file(priv: EgdpPrivateKey) -> TranscriptFile:
    return TranscriptFile(
        priv.M.params,
        (
            Block("matrix", "M", priv.M),
            Block("poly", "F1", priv.f1.coeffs),
            Block("poly", "F2", priv.f2.coeffs),
        ),
    )


def read_egdp_private(tf: TranscriptFile) -> EgdpPrivateKey:
    return EgdpPrivateKey(
        tf.matrix("M"),
        CentralPoly(tf.params, tf.poly("F1")),
        CentralPoly(tf.params, tf.poly("F2")),
    )


def ciphertext_file(ct: EgdpCiphertext) -> TranscriptFile:
    return _matrices(ct.F.params, F=ct.F, D=ct.D)


def read_ciphertext(tf: TranscriptFile) -> EgdpCiphertext:
    return EgdpCiphertext(tf.matrix("F"), tf.matrix("D"))

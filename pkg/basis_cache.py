"""
On-disk cache of reduced Groebner bases over Q.

Layout: ``<dir>/v1/<key[:2]>/<key>.gb`` where key is the SHA-256 of the
canonical text of (variables, generators, order, field). A file is::

    magic 'JSGB' | u16 version | u16 nvars | u32 npolys
    per polynomial: u32 nterms
        per term: nvars x u32 exponent, numerator, denominator
    numerator/denominator: u32 byte length + signed big-endian bytes

The directory is safe to delete at any time.
"""
import hashlib
import logging
import shutil
import struct
from pathlib import Path
from typing import List, Optional

from sympy import QQ

from constants import CACHE_FORMAT_VERSION, CACHE_LAYOUT_DIR, CACHE_MAGIC, CACHE_SUFFIX
from polynomial_ring import format_polynomial, order_name

LOGGER = logging.getLogger(__name__)

_HEADER = struct.Struct(">4sHHI")
_U32 = struct.Struct(">I")


def _int_bytes(value: int) -> bytes:
    length = max(1, (value.bit_length() + 8) // 8)
    return value.to_bytes(length, "big", signed=True)


class BasisCache:
    def __init__(self, directory):
        self.root = Path(directory)
        self.hits = 0
        self.misses = 0

    def key_for(self, generators: list, order) -> str:
        ring = generators[0].ring if generators else None
        variables = ",".join(str(s) for s in ring.symbols) if ring is not None else ""
        text = "\n".join([
            f"variables {variables}",
            f"order {order_name(order)}",
            "field Q",
            *[format_polynomial(g) for g in generators],
        ])
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def path_for(self, key: str) -> Path:
        return self.root / CACHE_LAYOUT_DIR / key[:2] / f"{key}{CACHE_SUFFIX}"

    def load(self, key: str, ring) -> Optional[list]:
        path = self.path_for(key)
        if not path.exists():
            self.misses += 1
            return None
        try:
            polys = decode_basis(path.read_bytes(), ring)
        except (ValueError, struct.error) as e:
            LOGGER.warning(f"Ignoring unreadable cache entry {path}: {e}")
            self.misses += 1
            return None
        self.hits += 1
        LOGGER.debug(f"Cache hit {key[:12]}: {len(polys)} basis elements")
        return polys

    def store(self, key: str, polys: list):
        path = self.path_for(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        temporary = path.with_suffix(".tmp")
        temporary.write_bytes(encode_basis(polys))
        temporary.replace(path)

    def clear(self) -> int:
        """Remove every cached basis; returns the number of files deleted."""
        layout = self.root / CACHE_LAYOUT_DIR
        if not layout.exists():
            return 0
        count = sum(1 for _ in layout.rglob(f"*{CACHE_SUFFIX}"))
        shutil.rmtree(layout)
        LOGGER.info(f"Removed {count} cached bases from {layout}")
        return count


def encode_basis(polys: list) -> bytes:
    nvars = polys[0].ring.ngens if polys else 0
    chunks = [_HEADER.pack(CACHE_MAGIC, CACHE_FORMAT_VERSION, nvars, len(polys))]
    for p in polys:
        chunks.append(_U32.pack(len(p)))
        for monom, coeff in sorted(p.iterterms()):
            chunks.append(struct.pack(f">{nvars}I", *monom))
            for part in (int(coeff.numerator), int(coeff.denominator)):
                raw = _int_bytes(part)
                chunks.append(_U32.pack(len(raw)))
                chunks.append(raw)
    return b"".join(chunks)


def decode_basis(data: bytes, ring) -> List:
    magic, version, nvars, npolys = _HEADER.unpack_from(data, 0)
    if magic != CACHE_MAGIC:
        raise ValueError("bad magic")
    if version != CACHE_FORMAT_VERSION:
        raise ValueError(f"unsupported format version {version}")
    if npolys and nvars != ring.ngens:
        raise ValueError(f"entry has {nvars} variables, ring has {ring.ngens}")
    offset = _HEADER.size
    exponents = struct.Struct(f">{nvars}I")
    polys = []
    for _ in range(npolys):
        (nterms,) = _U32.unpack_from(data, offset)
        offset += _U32.size
        terms = {}
        for _ in range(nterms):
            monom = exponents.unpack_from(data, offset)
            offset += exponents.size
            parts = []
            for _ in range(2):
                (length,) = _U32.unpack_from(data, offset)
                offset += _U32.size
                if offset + length > len(data):
                    raise ValueError("truncated entry")
                parts.append(int.from_bytes(data[offset:offset + length], "big", signed=True))
                offset += length
            terms[tuple(monom)] = QQ(parts[0], parts[1])
        polys.append(ring.from_dict(terms))
    if offset != len(data):
        raise ValueError("trailing bytes")
    return polys

"""Binary persistence for embedding matrices and indices.

ICNX layout (all integers little-endian):

    magic   4 bytes  b"ICNX"
    version u32      currently 1
    dim     u32
    count   u64
    data    count*dim float32, row-major
    ids     count strings, each u32 byte length + UTF-8 bytes

ICNV wraps a partitioned index around an ICNX payload:

    magic        4 bytes  b"ICNV"
    version      u32
    dim          u32
    n_partitions u32
    centroids    n_partitions*dim float32, row-major
    partitions   n_partitions lists: u64 length + that many u64 row indices
    base         full ICNX block for the underlying flat index

Round-trips are bit-exact: the float32 payload is written untouched.
"""

import io
import struct

import numpy as np

ICNX_MAGIC = b"ICNX"
ICNV_MAGIC = b"ICNV"
FORMAT_VERSION = 1


class StorageFormatError(ValueError):
    """Raised when a persisted index file is malformed."""


def _write_u32(fh, value: int) -> None:
    fh.write(struct.pack("<I", value))


def _write_u64(fh, value: int) -> None:
    fh.write(struct.pack("<Q", value))


def _read_exact(fh, n: int) -> bytes:
    buf = fh.read(n)
    if len(buf) != n:
        raise StorageFormatError(f"truncated file: wanted {n} bytes, got {len(buf)}")
    return buf


def _read_u32(fh) -> int:
    return struct.unpack("<I", _read_exact(fh, 4))[0]


def _read_u64(fh) -> int:
    return struct.unpack("<Q", _read_exact(fh, 8))[0]


def write_icnx(path_or_file, matrix: np.ndarray, ids=None) -> None:
    """Write a float32 matrix plus aligned id strings.

    ``ids`` defaults to the row numbers as decimal strings.
    """
    data = np.ascontiguousarray(matrix, dtype="<f4")
    if data.ndim != 2:
        raise ValueError(f"matrix must be 2-D, got shape {data.shape}")
    count, dim = data.shape
    if ids is None:
        ids = [str(i) for i in range(count)]
    ids = list(ids)
    if len(ids) != count:
        raise ValueError(f"{len(ids)} ids for {count} rows")

    if hasattr(path_or_file, "write"):
        _write_icnx_stream(path_or_file, data, ids)
    else:
        with open(path_or_file, "wb") as fh:
            _write_icnx_stream(fh, data, ids)


def _write_icnx_stream(fh, data: np.ndarray, ids: list) -> None:
    count, dim = data.shape
    fh.write(ICNX_MAGIC)
    _write_u32(fh, FORMAT_VERSION)
    _write_u32(fh, dim)
    _write_u64(fh, count)
    fh.write(data.tobytes())
    for image_id in ids:
        raw = str(image_id).encode("utf-8")
        _write_u32(fh, len(raw))
        fh.write(raw)


def read_icnx(path_or_file):
    """Read an ICNX file; returns ``(matrix float32, ids list[str])``."""
    if hasattr(path_or_file, "read"):
        return _read_icnx_stream(path_or_file)
    with open(path_or_file, "rb") as fh:
        return _read_icnx_stream(fh)


def _read_icnx_stream(fh):
    magic = _read_exact(fh, 4)
    if magic != ICNX_MAGIC:
        raise StorageFormatError(f"bad magic {magic!r}, expected {ICNX_MAGIC!r}")
    version = _read_u32(fh)
    if version != FORMAT_VERSION:
        raise StorageFormatError(f"unsupported format version {version}")
    dim = _read_u32(fh)
    count = _read_u64(fh)
    raw = _read_exact(fh, count * dim * 4)
    data = np.frombuffer(raw, dtype="<f4").reshape(count, dim).copy()
    ids = []
    for _ in range(count):
        length = _read_u32(fh)
        ids.append(_read_exact(fh, length).decode("utf-8"))
    return data, ids


def write_icnv(path_or_file, centroids: np.ndarray, partitions, base_matrix, base_ids) -> None:
    """Write a partitioned index: centroids, row partitions, and the base ICNX."""
    cdata = np.ascontiguousarray(centroids, dtype="<f4")
    n_partitions, dim = cdata.shape

    def _stream(fh):
        fh.write(ICNV_MAGIC)
        _write_u32(fh, FORMAT_VERSION)
        _write_u32(fh, dim)
        _write_u32(fh, n_partitions)
        fh.write(cdata.tobytes())
        for rows in partitions:
            arr = np.ascontiguousarray(rows, dtype="<u8")
            _write_u64(fh, len(arr))
            fh.write(arr.tobytes())
        _write_icnx_stream(fh, np.ascontiguousarray(base_matrix, dtype="<f4"), list(base_ids))

    if hasattr(path_or_file, "write"):
        _stream(path_or_file)
    else:
        with open(path_or_file, "wb") as fh:
            _stream(fh)


def read_icnv(path_or_file):
    """Read an ICNV file; returns ``(centroids, partitions, base_matrix, base_ids)``."""

    def _stream(fh):
        magic = _read_exact(fh, 4)
        if magic != ICNV_MAGIC:
            raise StorageFormatError(f"bad magic {magic!r}, expected {ICNV_MAGIC!r}")
        version = _read_u32(fh)
        if version != FORMAT_VERSION:
            raise StorageFormatError(f"unsupported format version {version}")
        dim = _read_u32(fh)
        n_partitions = _read_u32(fh)
        raw = _read_exact(fh, n_partitions * dim * 4)
        centroids = np.frombuffer(raw, dtype="<f4").reshape(n_partitions, dim).copy()
        partitions = []
        for _ in range(n_partitions):
            length = _read_u64(fh)
            rows = np.frombuffer(_read_exact(fh, length * 8), dtype="<u8").astype(np.int64)
            partitions.append(rows)
        base_matrix, base_ids = _read_icnx_stream(fh)
        return centroids, partitions, base_matrix, base_ids

    if hasattr(path_or_file, "read"):
        return _stream(path_or_file)
    with open(path_or_file, "rb") as fh:
        return _stream(fh)


def icnx_bytes(matrix: np.ndarray, ids=None) -> bytes:
    buf = io.BytesIO()
    write_icnx(buf, matrix, ids)
    return buf.getvalue()

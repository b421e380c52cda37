"""Dataset records and the binary .madset container.

Layout (all little-endian):

    header, 60 bytes:
        magic "MADS" | version u16 | flags u16 (bit0: has f, bit1: has u)
        generator u8 | stream u8 | source_mode u8 | domain u8
        resolution u32 | Mb u32 | M u32 | G u32
        N u64 | master_seed u64 | k f64 | wall_time f64
    N records:
        g : Mb f64 | [f : G f64] | [u : M f64]

Mb is the boundary-sample count, M the evaluation-node count (lattice nodes
inside the closed domain), G the full bounding-lattice node count.
Per-sample seed labels are pure functions of (master seed, stream, index)
and are reconstructed on load rather than stored.  Reload followed by save
reproduces the file byte for byte.
"""

import struct
from dataclasses import dataclass, replace

import numpy as np

from .equations import EquationSpec, SourceMode
from .geometry import Domain, DomainKind, GridSpec, build_domain

MAGIC = b"MADS"
FORMAT_VERSION = 1

GENERATOR_CODES = {"mad0": 0, "mad1": 1, "mad2": 2, "pinn-grf": 3, "fd": 4}
STREAM_CODES = {"train": 0, "test1": 1, "test2": 2}
SOURCE_CODES = {SourceMode.ZERO: 0, SourceMode.GENERAL: 1}
DOMAIN_CODES = {
    DomainKind.UNIT_SQUARE: 0,
    DomainKind.UNIT_DISK: 1,
    DomainKind.L_SHAPE: 2,
    DomainKind.UNIT_CUBE: 3,
}

_HEADER = struct.Struct("<4sHHBBBBIIIIQQdd")


class DatasetFormatError(ValueError):
    pass


def sample_seed_label(master_seed, stream, index):
    """Stable 64-bit label of one sample's random stream."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(STREAM_CODES[stream], index))
    w = ss.generate_state(2, dtype=np.uint32)
    return (int(w[0]) << 32) | int(w[1])


def sample_rng(master_seed, stream, index, role=0):
    """Independent generator for one (sample, role) pair; roles separate the
    boundary and source draws inside a single record."""
    key = (STREAM_CODES[stream], index) if role == 0 else (STREAM_CODES[stream], index, role)
    ss = np.random.SeedSequence(master_seed, spawn_key=key)
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class FieldSample:
    """One record: boundary values g, optional source f on the full lattice,
    optional solution u at the evaluation nodes."""

    g: np.ndarray
    f: np.ndarray | None
    u: np.ndarray | None
    seed: int


@dataclass(frozen=True)
class DatasetMeta:
    generator: str
    stream: str
    equation: EquationSpec
    domain_kind: DomainKind
    resolution: int
    boundary_count: int
    n_eval: int
    n_lattice: int
    n_samples: int
    master_seed: int
    wall_time: float


@dataclass(frozen=True)
class Dataset:
    meta: DatasetMeta
    samples: tuple

    def __len__(self):
        return len(self.samples)

    def domain(self) -> Domain:
        return build_domain(
            self.meta.domain_kind,
            GridSpec(self.meta.resolution, self.meta.boundary_count),
        )

    @property
    def g_matrix(self):
        return np.stack([s.g for s in self.samples])

    @property
    def f_matrix(self):
        if self.samples and self.samples[0].f is None:
            return None
        return np.stack([s.f for s in self.samples])

    @property
    def u_matrix(self):
        if self.samples and self.samples[0].u is None:
            return None
        return np.stack([s.u for s in self.samples])


def _le(a):
    return np.ascontiguousarray(a, dtype="<f8")


def serialize_dataset(ds, *, wall_time=None):
    meta = ds.meta
    wall = meta.wall_time if wall_time is None else wall_time
    has_f = ds.samples[0].f is not None if ds.samples else False
    has_u = ds.samples[0].u is not None if ds.samples else False
    flags = (1 if has_f else 0) | (2 if has_u else 0)
    head = _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        flags,
        GENERATOR_CODES[meta.generator],
        STREAM_CODES[meta.stream],
        SOURCE_CODES[meta.equation.source_mode],
        DOMAIN_CODES[meta.domain_kind],
        meta.resolution,
        meta.boundary_count,
        meta.n_eval,
        meta.n_lattice,
        meta.n_samples,
        meta.master_seed,
        meta.equation.k,
        wall,
    )
    chunks = [head]
    for s in ds.samples:
        if len(s.g) != meta.boundary_count:
            raise DatasetFormatError("boundary array length disagrees with header")
        chunks.append(_le(s.g).tobytes())
        if has_f:
            if s.f is None or len(s.f) != meta.n_lattice:
                raise DatasetFormatError("source array length disagrees with header")
            chunks.append(_le(s.f).tobytes())
        if has_u:
            if s.u is None or len(s.u) != meta.n_eval:
                raise DatasetFormatError("solution array length disagrees with header")
            chunks.append(_le(s.u).tobytes())
    return b"".join(chunks)


def save_dataset(ds, path):
    data = serialize_dataset(ds)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def expected_file_size(meta, has_f, has_u):
    rec = 8 * (
        meta.boundary_count
        + (meta.n_lattice if has_f else 0)
        + (meta.n_eval if has_u else 0)
    )
    return _HEADER.size + meta.n_samples * rec


def load_dataset(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise DatasetFormatError("file shorter than header")
    (
        magic,
        version,
        flags,
        gen_code,
        stream_code,
        source_code,
        domain_code,
        resolution,
        mb,
        m_eval,
        g_lat,
        n,
        master_seed,
        k,
        wall,
    ) = _HEADER.unpack_from(blob, 0)
    if magic != MAGIC:
        raise DatasetFormatError(f"bad magic {magic!r} (expected {MAGIC!r})")
    if version != FORMAT_VERSION:
        raise DatasetFormatError(f"unsupported format version {version}")
    has_f = bool(flags & 1)
    has_u = bool(flags & 2)
    generator = {v: kk for kk, v in GENERATOR_CODES.items()}[gen_code]
    stream = {v: kk for kk, v in STREAM_CODES.items()}[stream_code]
    source_mode = {v: kk for kk, v in SOURCE_CODES.items()}[source_code]
    domain_kind = {v: kk for kk, v in DOMAIN_CODES.items()}[domain_code]
    meta = DatasetMeta(
        generator=generator,
        stream=stream,
        equation=EquationSpec(k, source_mode),
        domain_kind=domain_kind,
        resolution=resolution,
        boundary_count=mb,
        n_eval=m_eval,
        n_lattice=g_lat,
        n_samples=n,
        master_seed=master_seed,
        wall_time=wall,
    )
    if len(blob) != expected_file_size(meta, has_f, has_u):
        raise DatasetFormatError(
            f"payload length {len(blob)} disagrees with declared counts "
            f"(expected {expected_file_size(meta, has_f, has_u)})"
        )
    samples = []
    off = _HEADER.size
    for i in range(n):
        g = np.frombuffer(blob, dtype="<f8", count=mb, offset=off).copy()
        off += 8 * mb
        f = None
        if has_f:
            f = np.frombuffer(blob, dtype="<f8", count=g_lat, offset=off).copy()
            off += 8 * g_lat
        u = None
        if has_u:
            u = np.frombuffer(blob, dtype="<f8", count=m_eval, offset=off).copy()
            off += 8 * m_eval
        samples.append(
            FieldSample(g=g, f=f, u=u, seed=sample_seed_label(master_seed, stream, i))
        )
    return Dataset(meta=meta, samples=tuple(samples))


def with_wall_time(ds, wall_time):
    return Dataset(meta=replace(ds.meta, wall_time=wall_time), samples=ds.samples)

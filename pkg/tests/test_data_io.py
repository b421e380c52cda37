import numpy as np
import pytest

from madpde.data import (
    Dataset,
    DatasetFormatError,
    DatasetMeta,
    FieldSample,
    expected_file_size,
    load_dataset,
    sample_seed_label,
    save_dataset,
    serialize_dataset,
)
from madpde.equations import EquationSpec
from madpde.geometry import DomainKind, GridSpec, build_domain
from madpde.samplers import generate_dataset, generate_pinn_dataset


def _dataset(square21, n=3, generator="mad1"):
    eq = EquationSpec.laplace()
    return generate_dataset(generator, eq, square21, n, 42)


def test_save_load_save_byte_identity(tmp_path, square21):
    ds = _dataset(square21)
    p1, p2 = tmp_path / "a.madset", tmp_path / "b.madset"
    save_dataset(ds, p1)
    ds2 = load_dataset(p1)
    save_dataset(ds2, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_loaded_dataset_equals_original(tmp_path, square21):
    ds = _dataset(square21)
    path = tmp_path / "x.madset"
    save_dataset(ds, path)
    ds2 = load_dataset(path)
    assert ds2.meta == ds.meta
    for a, b in zip(ds.samples, ds2.samples):
        assert np.array_equal(a.g, b.g)
        assert np.array_equal(a.u, b.u)
        assert a.f is None and b.f is None
        assert a.seed == b.seed


def test_file_size_arithmetic(tmp_path, square21):
    # size = header + N * (Mb + G + M) * 8 when both optional arrays present
    eq = EquationSpec.poisson()
    ds = generate_dataset("mad0", eq, square21, 2, 7)
    path = tmp_path / "s.madset"
    nbytes = save_dataset(ds, path)
    meta = ds.meta
    assert nbytes == 60 + 2 * 8 * (meta.boundary_count + meta.n_lattice + meta.n_eval)
    assert nbytes == expected_file_size(meta, True, True)
    assert path.stat().st_size == nbytes


def test_bad_magic_rejected(tmp_path, square21):
    path = tmp_path / "m.madset"
    save_dataset(_dataset(square21), path)
    blob = bytearray(path.read_bytes())
    blob[:4] = b"JUNK"
    path.write_bytes(bytes(blob))
    with pytest.raises(DatasetFormatError, match="magic"):
        load_dataset(path)


def test_bad_version_rejected(tmp_path, square21):
    path = tmp_path / "v.madset"
    save_dataset(_dataset(square21), path)
    blob = bytearray(path.read_bytes())
    blob[4:6] = (99).to_bytes(2, "little")
    path.write_bytes(bytes(blob))
    with pytest.raises(DatasetFormatError, match="version"):
        load_dataset(path)


def test_truncated_payload_rejected(tmp_path, square21):
    path = tmp_path / "t.madset"
    save_dataset(_dataset(square21), path)
    blob = path.read_bytes()
    path.write_bytes(blob[:-8])
    with pytest.raises(DatasetFormatError, match="length"):
        load_dataset(path)


def test_count_disagreement_rejected(square21):
    ds = _dataset(square21)
    bad = Dataset(
        meta=ds.meta,
        samples=ds.samples[:-1] + (FieldSample(g=np.zeros(3), f=None, u=ds.samples[-1].u, seed=0),),
    )
    with pytest.raises(DatasetFormatError):
        serialize_dataset(bad)


def test_pinn_dataset_roundtrip(tmp_path, square21):
    ds = generate_pinn_dataset(EquationSpec.poisson(), square21, 2, 5)
    path = tmp_path / "p.madset"
    save_dataset(ds, path)
    ds2 = load_dataset(path)
    assert ds2.u_matrix is None
    assert np.array_equal(ds.f_matrix, ds2.f_matrix)
    assert ds2.meta.equation == EquationSpec.poisson()


def test_seed_labels_reconstructed(tmp_path, square21):
    ds = _dataset(square21)
    path = tmp_path / "r.madset"
    save_dataset(ds, path)
    ds2 = load_dataset(path)
    for i, s in enumerate(ds2.samples):
        assert s.seed == sample_seed_label(42, "train", i)


def test_domain_rebuild_from_meta(tmp_path):
    disk = build_domain("disk", GridSpec(21))
    ds = generate_dataset("mad1", EquationSpec.laplace(), disk, 2, 4)
    path = tmp_path / "d.madset"
    save_dataset(ds, path)
    dom = load_dataset(path).domain()
    assert dom.kind is DomainKind.UNIT_DISK
    assert dom.n_eval == disk.n_eval
    assert np.array_equal(dom.eval_points, disk.eval_points)


def test_wall_time_preserved_roundtrip(tmp_path, square21):
    ds = _dataset(square21)
    path = tmp_path / "w.madset"
    save_dataset(ds, path)
    assert load_dataset(path).meta.wall_time == ds.meta.wall_time

import numpy as np
import pytest

from cpstensor import io
from cpstensor.core import MaskClosureError, Tensor4
from cpstensor.decompose import full_decomposition, reconstruct
from cpstensor.completion import random_ps_mask
from cpstensor.instances import InstanceSpec, generate_instance
from cpstensor.rankone import Rank1CPS

from conftest import random_cps, random_tensor


def test_tensor_round_trip_exact(tmp_path, rng):
    t = random_tensor(rng, 3)
    path = tmp_path / "t.tensor"
    io.save_tensor(path, t)
    back = io.load_tensor(path)
    assert np.array_equal(back.data, t.data)


def test_tensor_round_trip_extreme_values(tmp_path):
    data = np.zeros((2, 2, 2, 2), dtype=complex)
    data[0, 0, 0, 0] = 1e-300 + 1e300j
    data[1, 1, 1, 1] = -7.123456789012345e-17
    data[0, 1, 0, 1] = np.pi
    t = Tensor4(data)
    path = tmp_path / "x.tensor"
    io.save_tensor(path, t)
    assert np.array_equal(io.load_tensor(path).data, t.data)


def test_tensor_bad_header(tmp_path):
    path = tmp_path / "bad.tensor"
    path.write_text("n 2\norder 3\nfield complex\n")
    with pytest.raises(io.FileFormatError):
        io.load_tensor(path)


def test_tensor_wrong_count(tmp_path):
    path = tmp_path / "short.tensor"
    path.write_text("n 2\norder 4\nfield complex\n" + "1 0\n" * 15)
    with pytest.raises(io.FileFormatError):
        io.load_tensor(path)


def test_tensor_bad_record(tmp_path):
    path = tmp_path / "junk.tensor"
    path.write_text("n 1\norder 4\nfield complex\nnot numbers\n")
    with pytest.raises(io.FileFormatError):
        io.load_tensor(path)


def test_mask_round_trip(tmp_path):
    mask = random_ps_mask(3, 0.4, seed=5)
    path = tmp_path / "m.mask"
    io.save_mask(path, mask)
    back = io.load_mask(path)
    assert np.array_equal(back.flags, mask.flags)


def test_mask_closure_rejected_and_closed(tmp_path):
    path = tmp_path / "open.mask"
    path.write_text("n 2\n1 2 1 1\n")
    with pytest.raises(MaskClosureError):
        io.load_mask(path)
    closed = io.load_mask(path, close=True)
    assert closed.count() == 4


def test_decomposition_round_trip(tmp_path, rng):
    dec = full_decomposition(random_cps(rng, 3))
    path = tmp_path / "d.decomp"
    io.save_decomposition(path, dec)
    back = io.load_decomposition(path)
    assert back.n == dec.n
    assert back.conjugated_second == dec.conjugated_second
    assert len(back.factors) == len(dec.factors)
    for f, g in zip(dec.factors, back.factors):
        assert f.lam == g.lam
        assert np.array_equal(np.asarray(f.matrix, dtype=complex), g.matrix)
    assert (reconstruct(back) - reconstruct(dec)).norm() == 0


def test_rank1_round_trip(tmp_path):
    r1 = Rank1CPS(-2.25, np.array([0.6, 0.8j]))
    path = tmp_path / "r1.txt"
    io.save_rank1(path, r1)
    back = io.load_rank1(path)
    assert back.lam == r1.lam
    assert np.array_equal(back.x, r1.x)


def test_ground_truth_json(tmp_path):
    import json

    _, gt = generate_instance(InstanceSpec("cps_vector_sum", n=3, r=2, seed=1))
    path = tmp_path / "gt.json"
    io.save_ground_truth(path, gt)
    doc = json.loads(path.read_text())
    assert doc["kind"] == "cps_vector_sum"
    assert len(doc["vectors"]) == 2
    re_part, im_part = doc["vectors"][0]
    rebuilt = np.array(re_part) + 1j * np.array(im_part)
    assert np.array_equal(rebuilt, gt.vectors[0])

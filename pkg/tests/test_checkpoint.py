import json
import zipfile

import numpy as np
import pytest
import torch

from common.errors import DataError, VersionError
from models.backbone.frozen_model import FrozenVelocityTransformer, load_model
from models.backbone.radar_velocity_transformer import ModelConfig, build_model
from numerics.checkpoint import MANIFEST_NAME, assign_parameters, load_checkpoint, save_checkpoint
from numerics.optim import ParamStore

TINY = ModelConfig(stage_channels=[8, 16], n_vtl=4, n_tus=3, k_ds=4)


def _save(tmp_path, seed=0):
    model = build_model(TINY, seed=seed)
    path = save_checkpoint(tmp_path / "model.ckpt", ParamStore.from_module(model), TINY.to_dict())
    return model, path


def test_round_trip_is_bit_exact(tmp_path):
    model, path = _save(tmp_path)
    manifest, arrays = load_checkpoint(path)
    assert manifest["model_config"] == TINY.to_dict()
    for name, param in model.named_parameters():
        assert np.array_equal(arrays[name], param.detach().numpy())
        assert arrays[name].dtype == np.float64


def test_archive_bytes_are_reproducible(tmp_path):
    _, first = _save(tmp_path / "a")
    _, second = _save(tmp_path / "b")
    assert first.read_bytes() == second.read_bytes()


def test_reloaded_model_reproduces_logits_bit_exactly(tmp_path, make_scan):
    model, path = _save(tmp_path, seed=4)
    scan = make_scan(0, 30)
    with torch.no_grad():
        expected = model(scan)
    reloaded, _ = load_model(path)
    with torch.no_grad():
        assert torch.equal(reloaded(scan), expected)
    frozen = FrozenVelocityTransformer(reloaded)
    assert not any(p.requires_grad for p in frozen.model.parameters())
    probs, labels = frozen.predict_scan(scan)
    assert probs.shape == labels.shape == (30,)


def test_unknown_format_version_is_rejected(tmp_path):
    _, path = _save(tmp_path)
    with zipfile.ZipFile(path) as archive:
        members = {name: archive.read(name) for name in archive.namelist()}
    manifest = json.loads(members[MANIFEST_NAME])
    manifest["format_version"] = 999
    members[MANIFEST_NAME] = json.dumps(manifest).encode()
    with zipfile.ZipFile(path, "w") as archive:
        for name, payload in members.items():
            archive.writestr(name, payload)
    with pytest.raises(VersionError):
        load_checkpoint(path)


def test_shape_mismatch_is_a_version_error(tmp_path):
    _, path = _save(tmp_path)
    _, arrays = load_checkpoint(path)
    other = build_model(ModelConfig(stage_channels=[8, 32], n_vtl=4, n_tus=3, k_ds=4))
    with pytest.raises(VersionError):
        assign_parameters(ParamStore.from_module(other), arrays)


def test_corrupt_archive_is_a_data_error(tmp_path):
    path = tmp_path / "broken.ckpt"
    path.write_bytes(b"not a zip archive")
    with pytest.raises(DataError):
        load_checkpoint(path)

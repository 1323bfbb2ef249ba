import os

import numpy as np
import pytest

from tacsum_embed import backbones

from vidstub import STUB_DIM, STUB_NAME


def test_shipped_registry_dims_without_loading_weights():
    assert backbones.spec("dino-b16").dim == 768
    assert backbones.spec("clip-base-16").dim == 512


def test_unknown_model_lists_available():
    with pytest.raises(backbones.ConfigError, match="dino-b16"):
        backbones.spec("resnet-18")


def test_stub_loads_and_embeds():
    model = backbones.load(STUB_NAME)
    frames = [
        np.zeros((48, 64, 3), dtype=np.uint8),
        np.full((48, 64, 3), 200, dtype=np.uint8),
    ]
    out = model.embed(frames)
    assert out.shape == (2, STUB_DIM)
    assert out.dtype == np.float32
    assert not np.array_equal(out[0], out[1])


def test_load_wraps_factory_failure():
    def explode(device):
        raise RuntimeError("weights not on disk")

    backbones.register("stub-broken", 4, explode)
    with pytest.raises(backbones.ModelError, match="failed to load"):
        backbones.load("stub-broken")


def test_load_checks_declared_dim():
    class WrongDim:
        name = "stub-wrong"
        dim = 3

        def embed(self, frames):
            return np.zeros((len(frames), 3), dtype=np.float32)

    backbones.register("stub-wrong", 7, lambda device: WrongDim())
    with pytest.raises(backbones.ModelError, match="registry says 7"):
        backbones.load("stub-wrong")


@pytest.mark.skipif(
    os.environ.get("TACSUM_REAL_MODELS") != "1",
    reason="pretrained weights need hub access; set TACSUM_REAL_MODELS=1 to run",
)
@pytest.mark.parametrize("name,dim", [("dino-b16", 768), ("clip-base-16", 512)])
def test_real_backbone_embeds_frames(name, dim):
    model = backbones.load(name)
    frames = [
        np.zeros((48, 64, 3), dtype=np.uint8),
        np.full((48, 64, 3), 255, dtype=np.uint8),
    ]
    out = model.embed(frames)
    assert out.shape == (2, dim)
    assert np.isfinite(out).all()

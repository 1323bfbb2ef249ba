import pytest

from tacsum_embed import backbones

from vidstub import STUB_DIM, STUB_NAME, StubBackbone, write_video

backbones.register(STUB_NAME, STUB_DIM, lambda device: StubBackbone())


@pytest.fixture
def short_video(tmp_path):
    return write_video(tmp_path / "clip.avi", n_frames=30, fps=30.0)


@pytest.fixture
def long_video(tmp_path):
    return write_video(tmp_path / "long.avi", n_frames=120, fps=30.0)

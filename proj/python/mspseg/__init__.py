"""Multi-cue MRF video segmentation over pre-extracted superpixel features."""

from ._core import (
    Dataset,
    FormatError,
    InputError,
    InvariantError,
    Model,
    boundary_tolerance,
    bpr,
    build_model,
    chi2,
    default_taus,
    emd_1d,
    emd_general,
    jaccard,
    load_dataset,
    mmpw,
    rbf,
    synth_generate,
    synth_presets,
    vpr,
)


def segment(dataset, tau, **graph_kw):
    """Build the model for a dataset and segment it at one threshold."""
    return build_model(dataset, **graph_kw).segment(tau)


__all__ = [
    "Dataset",
    "FormatError",
    "InputError",
    "InvariantError",
    "Model",
    "boundary_tolerance",
    "bpr",
    "build_model",
    "chi2",
    "default_taus",
    "emd_1d",
    "emd_general",
    "jaccard",
    "load_dataset",
    "mmpw",
    "rbf",
    "segment",
    "synth_generate",
    "synth_presets",
    "vpr",
]

"""Topological radiomics toolkit: persistence barcodes and their statistics,
GLCM texture features, and the tumour-growth simulation, backed by the C++
core."""

from toporad._core import (
    Barcode,
    Interval,
    betti_curve,
    cloud_barcode,
    euler_characteristic,
    generator_entropy,
    growth_onsets,
    image_barcode,
    load_grayscale,
    persistent_entropy,
    spearman,
    texture_features,
    topo_features,
    welch_t_test,
)

__all__ = [
    "Barcode",
    "Interval",
    "betti_curve",
    "cloud_barcode",
    "euler_characteristic",
    "generator_entropy",
    "growth_onsets",
    "image_barcode",
    "load_grayscale",
    "persistent_entropy",
    "spearman",
    "texture_features",
    "topo_features",
    "welch_t_test",
]

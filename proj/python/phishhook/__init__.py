# phishhook: phishing smart-contract detection from EVM bytecode
# Copyright 2026 The phishhook Authors.
# SPDX-License-Identifier: Apache-2.0
"""Phishing smart-contract detection from EVM bytecode."""

from ._phishhook import (
    Model,
    PhishhookError,
    aut,
    cliffs_delta,
    cross_validate,
    disassemble,
    dunn,
    friedman,
    histogram_features,
    holm,
    kruskal_wallis,
    load_model,
    metrics,
    opcode_counts,
    shapiro_wilk,
    train,
    wilcoxon,
)

__version__ = "0.1.0"

__all__ = [
    "Model",
    "PhishhookError",
    "aut",
    "cliffs_delta",
    "cross_validate",
    "disassemble",
    "dunn",
    "friedman",
    "histogram_features",
    "holm",
    "kruskal_wallis",
    "load_model",
    "metrics",
    "opcode_counts",
    "shapiro_wilk",
    "train",
    "wilcoxon",
]

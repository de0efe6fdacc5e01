"""Multi-label prediction with partial abstention."""

from ._core import (
    BRModel,
    Penalty,
    brute_maximize_f,
    brute_minimize_hamming,
    brute_minimize_rank,
    expected_f_full,
    kfold,
    maximize_f_abstain,
    maximize_f_full,
    minimize_hamming,
    minimize_rank,
    synth,
    train,
)

__all__ = [
    "BRModel",
    "Penalty",
    "brute_maximize_f",
    "brute_minimize_hamming",
    "brute_minimize_rank",
    "expected_f_full",
    "kfold",
    "maximize_f_abstain",
    "maximize_f_full",
    "minimize_hamming",
    "minimize_rank",
    "synth",
    "train",
]

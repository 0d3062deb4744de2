"""Python access to the gmdsim core."""

from ._core import (
    ConfigInvalid,
    DimensionMismatch,
    RankDeficient,
    draw_channel,
    feedback_cost,
    gmd,
    qr,
    run_case,
    schedule,
    svd,
    throughput_from_r,
)

__all__ = [
    "ConfigInvalid",
    "DimensionMismatch",
    "RankDeficient",
    "draw_channel",
    "feedback_cost",
    "gmd",
    "qr",
    "run_case",
    "schedule",
    "svd",
    "throughput_from_r",
]

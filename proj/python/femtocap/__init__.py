# SPDX-License-Identifier: Apache-2.0
"""Capped water-filling and QoS power caps for a co-channel femtocell."""

from ._core import (
    Allocation,
    ConfigError,
    default_config,
    fading_ratio_cdf,
    kkt_residual,
    path_loss_db,
    power_cap,
    psi_approx,
    simulate,
    waterfill,
)

__all__ = [
    "Allocation",
    "ConfigError",
    "default_config",
    "fading_ratio_cdf",
    "kkt_residual",
    "path_loss_db",
    "power_cap",
    "psi_approx",
    "simulate",
    "waterfill",
]

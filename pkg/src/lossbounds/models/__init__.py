"""Loss-probability formulas and envelopes for large-buffer loss systems."""

from ._envelope import BoundEnvelope
from .gim1n import (
    DerivativeSandwich,
    GIM1nConfig,
    gim1n_derivative_sandwich,
    gim1n_envelope,
    gim1n_loss_asymptotic,
)
from .mgi1_buffer import MGI1BufferConfig, mgi1_buffer_envelope, mgi1_buffer_loss
from .mm1n_continuity import ContinuityConfig, mm1n_continuity_envelope, mm1n_exact_loss
from .priority_buffer import (
    PriorityConfig,
    ThinnedArrival,
    priority_composite_lst,
    priority_envelope,
    priority_loss,
    priority_root,
)

__all__ = [
    "BoundEnvelope",
    "DerivativeSandwich",
    "GIM1nConfig",
    "gim1n_derivative_sandwich",
    "gim1n_envelope",
    "gim1n_loss_asymptotic",
    "MGI1BufferConfig",
    "mgi1_buffer_envelope",
    "mgi1_buffer_loss",
    "ContinuityConfig",
    "mm1n_continuity_envelope",
    "mm1n_exact_loss",
    "PriorityConfig",
    "ThinnedArrival",
    "priority_composite_lst",
    "priority_envelope",
    "priority_loss",
    "priority_root",
]

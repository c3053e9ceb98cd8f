"""Conjugates, envelopes, proximal mappings, proximal averages and tilts."""
from .average import ProxAverageParams, proximal_average
from .conjugate import conjugate_graph, conjugate_pl, tilt_map
from .envelope import (EnvelopeParams, envelope_conjugate_identity_check, envelope_gradient_pl,
                       envelope_gradient_pl_array, envelope_table, envelope_table_csv,
                       moreau_decomposition_check, moreau_envelope_pl, moreau_envelope_pl_array,
                       prox_kink_preimages, prox_pl, prox_pl_array, resolvent_knots)
from .tilt import TiltProbe, tilt_continuity_probe

__all__ = [
    "ProxAverageParams", "proximal_average", "conjugate_graph", "conjugate_pl", "tilt_map",
    "EnvelopeParams", "envelope_conjugate_identity_check", "envelope_gradient_pl",
    "envelope_gradient_pl_array", "envelope_table", "envelope_table_csv",
    "moreau_decomposition_check", "moreau_envelope_pl", "moreau_envelope_pl_array",
    "prox_kink_preimages", "prox_pl", "prox_pl_array", "resolvent_knots",
    "TiltProbe", "tilt_continuity_probe",
]

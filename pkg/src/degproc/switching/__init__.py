"""Switching between upper and lower graphs, clusters, and twin re-timings of edge sequences."""

from .anchor import AnchorError, SwitchAnchor, anchors_of, kind_of, switch_graph, unswitch_graph
from .clusters import (
    Cluster,
    cluster_key,
    cluster_weight,
    enumerate_cluster,
    representative_clusters,
    switching_partner,
)
from .counting import (
    count_lower,
    count_upper,
    early_cutoff,
    good_choice_fraction,
    is_good_cluster,
    is_good_sequence,
    zeta,
)
from .patterns import first_words, pattern_injection, pattern_preimage, second_words
from .sequences import ay_twin, bar, bx_twin, counterpart, has_twin, twin, twin_preimage
from .verify import (
    SUITES,
    run_suite,
    verify_cluster_switch,
    verify_completeswitch,
    verify_twin_partition,
)

__all__ = [
    "AnchorError", "Cluster", "SUITES", "SwitchAnchor", "anchors_of", "ay_twin", "bar",
    "bx_twin", "cluster_key", "cluster_weight", "count_lower", "count_upper", "counterpart",
    "early_cutoff", "enumerate_cluster", "first_words", "good_choice_fraction", "has_twin",
    "is_good_cluster", "is_good_sequence", "kind_of", "pattern_injection", "pattern_preimage",
    "representative_clusters", "run_suite", "second_words", "switch_graph", "switching_partner",
    "twin", "twin_preimage", "unswitch_graph", "verify_cluster_switch", "verify_completeswitch",
    "verify_twin_partition", "zeta",
]

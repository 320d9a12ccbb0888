"""Attack-path enumeration over Blackboard Architecture network models.

Networks are containers of binary facts joined by links and acted on by
rules.  :func:`traverse` enumerates every reality path from the ingress to
the egress, keeping each path's fact changes in private container variants.
"""

from .engine import (
    PathStatus,
    RealityPath,
    Termination,
    Transition,
    TraversalConfig,
    TraversalResult,
    Variant,
    apply_rule,
    generate_children,
    resolve_fact,
    result_document,
    rule_applicable,
    traverse,
)
from .model import (
    Container,
    Fact,
    GenericRule,
    Link,
    Network,
    NetworkError,
    NetworkParseError,
    NetworkValidationError,
    Rule,
    concrete_rules,
    instantiate_generic_rules,
    load_network,
    serialize_network,
    validate_network,
)
from .oracle import PathDiff, diff_results, enumerate_paths_bruteforce
from .statespace import (
    BigCount,
    StateSpaceParams,
    approx_path_count,
    exact_path_count,
    format_count,
    paths_with_k_intermediates,
    possible_states,
)
from .topology import TopologySpec, build_figure_example, generate_topology, run_experiment, write_report

__version__ = "0.1.0"

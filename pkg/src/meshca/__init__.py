"""Channel-assignment optimization toolkit for multi-radio multi-channel mesh networks.

Core pieces:

* topology  -- grid/random layouts, realized links, conflict graphs
* metrics   -- interchangeable interference scores (tid, cdal, cxls)
* optimizer -- bio / pio / ko / ho assignment schemes with pluggable metrics
* estimator -- sklearn-style ChannelAssigner wrapper
* evaluator -- deterministic flow-level contention estimates
* experiment / cli -- the scheme x metric matrix runner and its front end
"""

__version__ = "0.1.0"

from .errors import (
    BudgetExceededError,
    ConnectivityError,
    IncompleteAssignmentError,
    MeshCAError,
    MismatchedFilesError,
    NonGridTopologyError,
    RangeConfigError,
    ValidationError,
)
from .estimator import ChannelAssigner
from .evaluator import (
    FlowPerf,
    FlowSpec,
    PerfReport,
    build_grid_flows,
    estimate_performance,
)
from .experiment import ExperimentConfig, ExperimentReport, run_experiment
from .metrics import (
    MAXIMIZE,
    METRICS,
    MINIMIZE,
    IemScore,
    XLinkSet,
    all_scores,
    better,
    build_xls,
    cdal_cost,
    channel_loads,
    cxls_wt,
    enumerate_xls,
    score,
    tid,
    xls_weight,
)
from .optimizer import (
    SCHEMES,
    OptimizationTrace,
    SchemeConfig,
    TraceRecord,
    bio_assign,
    count_colocated_pairs,
    eiz_detect,
    improve_sweep,
    initial_assignment,
    rci_mitigate,
    run_scheme,
)
from .topology import (
    ChannelAssignment,
    ConflictGraph,
    Node,
    RadioId,
    RealizedLink,
    Topology,
    adjacent_pairs,
    check_assignment,
    check_topology,
    conflict_graph,
    gen_grid,
    gen_random,
    is_ca_connected,
    radios,
    realized_links,
    uniform_assignment,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Tag-based browsing engine with pluggable state-update cache strategies."""

from .bench import (
    BenchReport,
    DigestMismatchError,
    RunResult,
    WilcoxonResult,
    compare_strategies,
    histogram,
    improvement_percent,
    run_trace_timed,
    wilcoxon_signed_rank,
)
from .caches import (
    CacheStats,
    QueryCache,
    QueryCachedStrategy,
    ResourceCache,
    ResourceCachedStrategy,
    Strategy,
    UncachedStrategy,
    canonical_key,
    make_strategy,
)
from .collection import (
    Collection,
    CollectionError,
    Resource,
    Tag,
    generate_synthetic_collection,
    ingest_collection,
    load_collection,
)
from .engine import (
    BrowsingState,
    InvalidActionError,
    UnknownTagError,
    UserAction,
    apply_action_uncached,
    filter_resources,
    init_state,
    query,
    selectable_tag_counts,
    selectable_tags,
)
from .idset import IdSet
from .simulator import (
    ReplayStep,
    SessionTrace,
    TraceError,
    generate_session,
    rank_selectable,
    read_trace,
    replay,
    sample_next_action,
    write_trace,
)

__version__ = "0.1.0"

__all__ = [
    "BenchReport",
    "BrowsingState",
    "CacheStats",
    "Collection",
    "CollectionError",
    "DigestMismatchError",
    "IdSet",
    "InvalidActionError",
    "QueryCache",
    "QueryCachedStrategy",
    "ReplayStep",
    "Resource",
    "ResourceCache",
    "ResourceCachedStrategy",
    "RunResult",
    "SessionTrace",
    "Strategy",
    "Tag",
    "TraceError",
    "UncachedStrategy",
    "UnknownTagError",
    "UserAction",
    "WilcoxonResult",
    "apply_action_uncached",
    "canonical_key",
    "compare_strategies",
    "filter_resources",
    "generate_session",
    "generate_synthetic_collection",
    "histogram",
    "improvement_percent",
    "ingest_collection",
    "init_state",
    "load_collection",
    "make_strategy",
    "query",
    "rank_selectable",
    "read_trace",
    "replay",
    "run_trace_timed",
    "sample_next_action",
    "selectable_tag_counts",
    "selectable_tags",
    "wilcoxon_signed_rank",
    "write_trace",
]

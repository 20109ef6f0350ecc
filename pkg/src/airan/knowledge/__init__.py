from airan.knowledge.router import (
    DEFAULT_HISTORY_DEPTH,
    HistoryRecord,
    KnowledgeQuery,
    KnowledgeRouter,
    QueryResult,
    SourceDescriptor,
)

__all__ = [
    "DEFAULT_HISTORY_DEPTH",
    "HistoryRecord",
    "KnowledgeQuery",
    "KnowledgeRouter",
    "QueryResult",
    "SourceDescriptor",
]

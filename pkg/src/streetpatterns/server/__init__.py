from .service import AnalysisError, ProviderUnavailable, QueryError, RegionService, RouteQuery

__all__ = [
    "AnalysisError",
    "ProviderUnavailable",
    "QueryError",
    "RegionService",
    "RouteQuery",
]

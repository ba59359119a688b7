"""Street-view appearance patterns along driving routes.

The pipeline: chunk candidate routes into a ~20 m sampling lattice (geo),
encode street-view images as category histograms or latent vectors
(features), cluster them into a small set of appearance patterns
(cluster, vapattern), and turn labeled samples into side-specific
trajectories with dominant-pattern segments and distributions (routeviz).
Datasets live in region directories (datastore, providers, synthetic) and
are served to the exploration UI over HTTP (server).
"""

from .cluster import (
    ClusteringConfig,
    ClusterModel,
    Method,
    Metric,
    SilhouetteReport,
    Strategy,
    adjusted_rand_index,
    agglomerative,
    assign,
    kmeans,
    meanshift,
    select_k,
    silhouette,
)
from .features import (
    CLASS_NAMES,
    MAJOR_INDICES,
    MAJOR_NAMES,
    FeatureKind,
    FeatureMatrix,
    LabelMask,
    category_histogram,
    dispersion_ratios,
    reduce_to_major,
    select_features,
)
from .geo import (
    Chunk,
    GeoPoint,
    Polyline,
    SamplePoint,
    Side,
    bearing,
    chunk_polyline,
    haversine_distance,
    sample_points,
)
from .routeviz import (
    PatternDistribution,
    RouteSegment,
    RouteTrajectory,
    compare,
    distribution,
    images_near,
    segment_route,
)
from .vapattern import (
    PatternCatalog,
    VaPattern,
    build_patterns,
    recolor_pattern,
    rename_pattern,
)

__version__ = "0.1.0"

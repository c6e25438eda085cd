"""aitchview: compositional analytics and linked views for spatial spot data."""

from .composition import (
    aitchison_distance,
    closure,
    clr,
    clr_inv,
    perturb,
    power,
    replace_zeros,
)
from .clustering import Clustering, kmeans
from .dataset import (
    Dataset,
    SpotRecord,
    SyntheticGroundTruth,
    generate_synthetic,
    load_dataset,
    validate_proportions,
    write_dataset,
)
from .embedding import Embedding, PcaModel, pca_fit, pca_project
from .geometry import HalfPlane, Polygon, Rect
from .session import (
    MaskImage,
    bar_subset,
    combine,
    mask_to_png,
    render_mask,
    select_by_cluster,
    select_by_region,
    table_rows,
)

__version__ = "0.1.0"

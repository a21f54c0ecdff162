"""embed-export: embedding fixture files from pre-trained text encoders."""

from .export import ExportSpec, run_export
from .pooling import cls_pool, mean_masked_pool

__version__ = "0.1.0"

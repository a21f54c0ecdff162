"""Walk through the vector metric family on small, hand-checkable inputs.

Run: python demos/demo_metrics.py
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from riskrank import (
    bray_curtis,
    cosine,
    estimate_covariance,
    euclidean,
    l2_normalize,
    mahalanobis,
    manhattan,
    minkowski,
)

# the classic 3-4-5 triangle exercises most of the family at once
a, b = [0.0, 0.0], [3.0, 4.0]
print("euclidean((0,0),(3,4))      =", euclidean(a, b))          # 5.0
print("manhattan((0,0),(3,4))      =", manhattan(a, b))          # 7.0
print("minkowski(p=3)              =", minkowski(a, b, 3))       # (27+64)^(1/3)
print("minkowski(p=2) == euclidean =", minkowski(a, b, 2) == euclidean(a, b))

# bray-curtis divides the manhattan distance by the total absolute mass
print("bray_curtis((1,2),(3,2))    =", bray_curtis([1, 2], [3, 2]))  # 0.25

# cosine ignores positive scaling entirely
print("cosine((1,1),(2,2))         =", cosine([1, 1], [2, 2]))

# normalization scales any vector onto the unit sphere
print("l2_normalize((3,4))         =", l2_normalize([3, 4]))

# mahalanobis with a fitted covariance: distances are measured in units of
# the sample's own spread per direction, so an elongated cloud "pulls in"
# points along its long axis
rng = np.random.default_rng(0)
cloud = rng.normal(size=(200, 2)) * [3.0, 0.5]  # wide in x, narrow in y
model = estimate_covariance(cloud, "exact_inverse")
print("\nelongated cloud, point (3, 0):", round(mahalanobis([3.0, 0.0], model), 3))
print("elongated cloud, point (0, 3):", round(mahalanobis([0.0, 3.0], model), 3))
print("(same euclidean length, very different mahalanobis)")

# with too few samples for the dimension the covariance is singular; the
# pseudo-inverse measures distance inside the sampled subspace only
small = rng.normal(size=(5, 10))
model = estimate_covariance(small, "pseudo_inverse")
print("\nrank-deficient fit:", model.method, "on", model.source_count, "samples")
print("distance to own mean:", mahalanobis(small[0], model).round(4))

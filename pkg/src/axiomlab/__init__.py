"""axiomlab: a numerical laboratory for clustering axioms and k-means stability.

The package is organised around six building blocks:

- ``core``: datasets, distance matrices, partitions, partition enumeration,
  and signed (pseudo-Euclidean) embeddings of non-metric distance tables.
- ``kmeans``: Lloyd iteration, seeding, exhaustive global optimisation,
  local-minimum certification and streaming variants.
- ``transforms``: scale, Kleinberg-style Gamma transforms, centric shrinks,
  cluster motions and their composites.
- ``separation``: ball summaries, separation certificates and the gap /
  seeding bounds that make consistency statements provable.
- ``constructions``: generators for the specific families of datasets used
  by the verification suites, plus small frozen fixtures.
- ``harness``: property suites, the clustering-quality ladder reproduction
  and report formatting; ``cli`` exposes them on the command line.
"""

from . import core, kmeans, transforms, separation, constructions, harness

__version__ = "0.1.0"

__all__ = [
    "core",
    "kmeans",
    "transforms",
    "separation",
    "constructions",
    "harness",
    "__version__",
]

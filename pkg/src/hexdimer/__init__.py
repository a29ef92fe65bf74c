"""Exact combinatorics of dimer matchings on hexagonal meshes and plane
partitions in a box, including the squish correspondence between even meshes
and doubled base meshes and the associated product-formula identities."""

__version__ = "0.1.0"

"""Color upsampling for 3D point clouds.

Flattens local surface patches to 2D along a minimum spanning tree and
reconstructs missing colors with a greedy sparse approximation over DCT
basis functions, plus baseline interpolators and an evaluation harness.
"""

from .baselines import InterpolatorKind
from .core import Aabb, Block, ColorPoint, ColorPointCloud, Role, bounding_box, partition_into_blocks
from .evaluation import ExperimentReport, ExperimentSpec, random_downsample, reconstruction_color_psnr, run_experiment
from .fsmmr import FsmmrConfig, ScatteredSamples, SparseModel, evaluate_model, generate_model, upsample_block
from .pipeline import upsample_cloud
from .ply_io import PlyFormat, read_ply, write_ply
from .surface_transform import FlattenedMesh, MstEdge, RootPolicy, build_mst, flatten_block

__version__ = "0.1.0"

__all__ = [
    "Aabb", "Block", "ColorPoint", "ColorPointCloud", "Role",
    "bounding_box", "partition_into_blocks",
    "PlyFormat", "read_ply", "write_ply",
    "FlattenedMesh", "MstEdge", "RootPolicy", "build_mst", "flatten_block",
    "FsmmrConfig", "ScatteredSamples", "SparseModel",
    "generate_model", "evaluate_model", "upsample_block",
    "InterpolatorKind", "upsample_cloud",
    "ExperimentSpec", "ExperimentReport",
    "random_downsample", "reconstruction_color_psnr", "run_experiment",
]

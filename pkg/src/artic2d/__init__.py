"""artic2d: a deterministic 2D articulatory model.

Control parameters map to midsagittal articulator contours through a
four-step interpolation pipeline over cardinal-vowel prototypes and
place-of-articulation closure targets, with sagittal, glottal, and
palatal views, a SAMPA preset inventory, keyframe animation, an HTTP
service, and a CLI.
"""

from .geometry import PrototypeLibrary, default_data_dir, load_prototype_library
from .params import ControlState, blend, neutral, validate
from .presets import default_inventory_path, load_inventory
from .solver import ArticulatorFrame, solve

__version__ = "0.1.0"

__all__ = [
    "ArticulatorFrame",
    "ControlState",
    "PrototypeLibrary",
    "blend",
    "default_data_dir",
    "default_inventory_path",
    "load_inventory",
    "load_prototype_library",
    "neutral",
    "solve",
    "validate",
    "__version__",
]

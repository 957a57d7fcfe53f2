from . import config
from . import errors
from . import grid
from . import phase_space
from . import weak_values
from . import reconstruction
from . import oracles
from . import serialization
from . import report
from . import utils

__version__ = "1.0.0"

"""edist - parallel output-sensitive edit distance"""
from .config import Config
from .errors import EdistError

__all__ = ['Config', 'EdistError']
__version__ = "0.1.0"

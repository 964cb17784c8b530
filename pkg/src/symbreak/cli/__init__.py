"""Command-line scenario runners."""
from .config import ScenarioConfig, emit, from_dict, load
from .main import main
from .runners import RUNNERS

__all__ = ["RUNNERS", "ScenarioConfig", "emit", "from_dict", "load", "main"]

from .config import load_config, validate_config
from .main import main

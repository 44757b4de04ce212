"""HTTP surface over the experiment pipeline."""
from .app import app
from . import schemas

__all__ = ["app", "schemas"]

"""HTTP service wrapping the planners, estimators, and diagnostics."""

from .app import app, create_app

__all__ = ["app", "create_app"]

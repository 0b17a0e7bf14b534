"""Reality properties of finite orthogonal groups, computed exactly."""

__version__ = "0.1.0"

"""Secant defectivity, osculating spaces and identifiability bounds for flag
varieties and products of Grassmannians, with exact arithmetic."""

from flagrank.shape import FlagShape, ShapeError, ShapeParseError, format_shape, parse_shape

__version__ = "0.1.0"

__all__ = ["FlagShape", "ShapeError", "ShapeParseError", "format_shape", "parse_shape"]

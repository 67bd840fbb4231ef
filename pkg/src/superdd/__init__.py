"""Super-simple directed 2-(v,5,1) designs: construction, verification and
defining-set bounds from directed trades."""

from .core import GroupTypeSignature, Inf, LabeledDesign, PointSpace, format_design, parse_design
from .verify import Report, verify_design

__version__ = "0.1.0"

__all__ = ["GroupTypeSignature", "Inf", "LabeledDesign", "PointSpace", "Report", "format_design",
           "parse_design", "verify_design"]

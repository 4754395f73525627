"""
LeibnizPairs Test Suite

Unit, integration and performance tests for the cohomology and deformation
engine and its front doors.
"""

__version__ = "1.0.0"

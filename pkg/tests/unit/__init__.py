"""
Unit tests for the LeibnizPairs engine modules.
"""

"""
Integration tests for the LeibnizPairs command line tool and HTTP service.

These run whole pipelines on the bundled example documents.
"""

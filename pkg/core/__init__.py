"""
Core package for the Subgroup Growth & Random Covers Toolkit
Contains all the main modules: groups, counting, sampling, statistics, homology, oracle, pipeline, etc.
"""

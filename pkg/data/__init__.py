"""
Data model: datasets, scaling and splitting
"""

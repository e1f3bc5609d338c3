"""
Pipeline steps
"""

"""
Pipeline plumbing: step base class, orchestrator, run summary and the error hierarchy
"""

"""Utilities for the lagexp CLI"""

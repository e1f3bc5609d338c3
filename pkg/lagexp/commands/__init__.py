"""Commands package for the lagexp CLI"""

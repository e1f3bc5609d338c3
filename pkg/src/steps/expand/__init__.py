from .expansionstep import ExpansionStep

__all__ = ['ExpansionStep']

from .simulationstep import SimulationStep

__all__ = ['SimulationStep']

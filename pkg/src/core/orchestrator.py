import logging
from pathlib import Path
from typing import Dict, Any, List, Optional
from contextlib import contextmanager

from ..core.base import PipelineStep
from .summary import RunSummaryGenerator

logger = logging.getLogger("lagexp.orchestrator")


class StepOrchestrator:
    """Runs pipeline steps in sequence over a shared context"""

    def __init__(self, config: Dict[str, Any], out_dir: Path, command: str = "run"):
        """
        Initialize the orchestrator

        Args:
            config: Validated run configuration
            out_dir: Directory receiving every report
            command: CLI command name, recorded in the summary
        """
        self.config = config
        self.out_dir = Path(out_dir)
        self.command = command
        self.steps: List[PipelineStep] = []
        self.context: Dict[str, Any] = {
            'config': config,
            'out_dir': self.out_dir,
            'outputs': {},
            'results': {},
        }
        self.failed_step: Optional[PipelineStep] = None

    def add_step(self, step: PipelineStep) -> None:
        """
        Add a step to the sequence

        Args:
            step: The pipeline step to add
        """
        self.steps.append(step)

    @property
    def error(self) -> Optional[Exception]:
        return self.failed_step.error if self.failed_step else None

    @contextmanager
    def step_context(self, step: PipelineStep):
        """
        Context manager for step execution with proper logging

        Args:
            step: The pipeline step
        """
        logger.debug(f"Entering step: {step.name}")
        try:
            yield step
            logger.debug(f"Leaving step: {step.name}")
        except Exception as e:
            logger.error(f"Step {step.name} raised: {str(e)}", exc_info=True)
            raise

    def execute(self) -> bool:
        """
        Execute all steps in sequence, then write the run summary

        Returns:
            True if all steps were successful, False otherwise
        """
        self.out_dir.mkdir(parents=True, exist_ok=True)
        success = True
        for step in self.steps:
            with self.step_context(step):
                if not step.execute(self.context):
                    logger.error(f"Step {step.name} failed, aborting pipeline")
                    self.failed_step = step
                    success = False
                    break

        try:
            summary = RunSummaryGenerator(self.context, self.command)
            if not summary.generate(success, self.failed_step.name if self.failed_step else None):
                logger.warning("Failed to generate run summary")
        except Exception as e:
            logger.warning(f"Failed to generate run summary: {str(e)}")

        return success

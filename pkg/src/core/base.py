import logging
from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Any


class PipelineStep(ABC):
    """Base class for all pipeline steps"""

    # Config section the step reads its settings from
    section: str = ""

    def __init__(self, name: str):
        """
        Initialize the pipeline step

        Args:
            name: Step name
        """
        self.name = name
        self.logger = logging.getLogger(f"lagexp.step.{name}")
        # Each step defines its own settings, see steps/<name>/environment.py
        self.required_vars: List[Dict[str, Any]] = []
        self.error: Optional[Exception] = None

    def execute(self, context: Dict[str, Any]) -> bool:
        """
        Execute the step against the shared pipeline context

        Args:
            context: Dictionary holding the run config, the output directory
                and whatever earlier steps produced

        Returns:
            True if the step succeeded; on failure the exception is kept in self.error
        """
        self.logger.info(f"Starting step: {self.name}")
        self.error = None
        try:
            # 1. Check dependencies
            missing = self._check_dependencies()
            if missing:
                self.logger.error(f"Missing Python packages: {', '.join(missing)}")
                return False

            # 2. Resolve settings from the config, filling defaults
            settings = self._get_settings(context)
            self._validate_settings(settings)
            context.setdefault('resolved', {})[self.section or self.name] = settings

            # 3. Run
            if not self._run(settings, context):
                self.logger.error(f"Step {self.name} failed")
                return False

            self.logger.info(f"{self.name} completed successfully")
            return True

        except Exception as e:
            self.error = e
            self.logger.error(f"{self.name} failed: {str(e)}")
            self.logger.debug("Traceback:", exc_info=True)
            return False

    @abstractmethod
    def _check_dependencies(self) -> List[str]:
        """
        Check that the step's Python packages import

        Returns:
            Names of the modules that could not be imported
        """
        pass

    def _get_settings(self, context: Dict[str, Any]) -> Dict[str, Any]:
        """Read this step's settings from its config section"""
        from ..utils.environment import get_environment_manager
        section = context.get('config', {}).get(self.section, {}) if self.section else {}
        return get_environment_manager().resolve_vars(self.required_vars, section or {})

    def _validate_settings(self, settings: Dict[str, Any]) -> None:
        """Raise ValidationError for settings the schema cannot express; default accepts all"""

    @abstractmethod
    def _run(self, settings: Dict[str, Any], context: Dict[str, Any]) -> bool:
        """
        Execute the main operation

        Args:
            settings: Resolved settings for this step
            context: Shared pipeline context

        Returns:
            True if the step succeeded, False otherwise
        """
        pass
